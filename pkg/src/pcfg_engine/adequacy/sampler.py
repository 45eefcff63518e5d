import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

from pcfg_engine.adequacy.models import SampleReport, SamplingOptions
from pcfg_engine.adequacy.pcg import MASK64, Pcg32, splitmix64
from pcfg_engine.errors import NegativeExpectationError
from pcfg_engine.store_dist import Dist, DistDocument, Store
from pcfg_engine.syntax import (
    Assign,
    DistSpec,
    If,
    Observe,
    Program,
    RandomAssign,
    Seq,
    Skip,
    Stmt,
    While,
    eval_bool,
    eval_expr,
)

logger = logging.getLogger(__name__)


@dataclass
class ShardTally:
    accepted: int = 0
    rejected_observe: int = 0
    step_bound_hit: int = 0
    return_sum: int = 0
    end_stores: Counter[tuple[int, ...]] = field(default_factory=Counter)

    def absorb(self, other: "ShardTally") -> None:
        self.accepted += other.accepted
        self.rejected_observe += other.rejected_observe
        self.step_bound_hit += other.step_bound_hit
        self.return_sum += other.return_sum
        self.end_stores.update(other.end_stores)


@cache
def _cumulative(psi: DistSpec) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Scale ψ to integers over the lcm of its denominators."""
    scale = math.lcm(*(probability.denominator for _, probability in psi.outcomes))
    running = 0
    thresholds: list[tuple[int, int]] = []
    for value, probability in psi.outcomes:
        running += int(probability * scale)
        thresholds.append((running, value))
    return scale, tuple(thresholds)


def draw(psi: DistSpec, generator: Pcg32) -> int:
    """Sample ``ψ`` exactly: a uniform integer below the common denominator
    picks the outcome whose cumulative numerator first exceeds it."""
    scale, thresholds = _cumulative(psi)
    ticket = generator.randbelow(scale)
    for threshold, value in thresholds:
        if ticket < threshold:
            return value
    raise AssertionError("probabilities of a DistSpec sum to 1")


type RunOutcome = tuple[str, dict[str, int]]


def simulate(program: Program, generator: Pcg32, step_bound: int) -> RunOutcome:
    """Run the program once from the all-zeros store.

    Every atomic statement and every guard evaluation is one step. Returns
    ``("accepted" | "rejected" | "step-bound", final store)``.
    """
    store = dict.fromkeys(program.universe, 0)
    pending: list[Stmt] = [program.body]
    steps = 0
    while pending:
        stmt = pending.pop()
        if isinstance(stmt, Seq):
            pending.append(stmt.second)
            pending.append(stmt.first)
            continue

        steps += 1
        if steps > step_bound:
            return "step-bound", store
        match stmt:
            case Skip():
                pass
            case Assign(var, expr):
                store[var] = eval_expr(expr, store)
            case RandomAssign(var, psi):
                store[var] = draw(psi, generator)
            case Observe(cond):
                if not eval_bool(cond, store):
                    return "rejected", store
            case If(cond, then, orelse):
                pending.append(then if eval_bool(cond, store) else orelse)
            case While(cond, body):
                if eval_bool(cond, store):
                    pending.append(stmt)
                    pending.append(body)
            case _:
                raise TypeError(f"Unsupported statement: {stmt!r}")
    return "accepted", store


def run_shard(program: Program, runs: int, seed: int, step_bound: int) -> ShardTally:
    generator = Pcg32(seed)
    tally = ShardTally()
    for _ in range(runs):
        status, store = simulate(program, generator, step_bound)
        if status == "rejected":
            tally.rejected_observe += 1
            continue
        if status == "step-bound":
            tally.step_bound_hit += 1
            continue
        value = eval_expr(program.return_expr, store)
        if value < 0:
            raise NegativeExpectationError(value, Store.of(program.universe, store))
        tally.accepted += 1
        tally.return_sum += value
        tally.end_stores[tuple(store[name] for name in program.universe)] += 1
    return tally


def shard_seed(seed: int, index: int) -> int:
    return splitmix64((seed + index) & MASK64)


def shard_sizes(n: int, shards: int) -> list[int]:
    base, extra = divmod(n, shards)
    return [base + (1 if index < extra else 0) for index in range(shards)]


def sample_program(program: Program, options: SamplingOptions | None = None) -> SampleReport:
    """Estimate the normalized semantics by rejection sampling.

    Runs are split into ``options.shards`` shards, shard ``i`` seeded with
    ``splitmix64(seed + i)``. The report depends only on the seed and the
    shard count, never on the number of workers.
    """
    options = options or SamplingOptions()
    sizes = shard_sizes(options.n, options.shards)
    seeds = [shard_seed(options.seed, index) for index in range(options.shards)]
    arguments = [
        (program, size, seed, options.step_bound)
        for size, seed in zip(sizes, seeds, strict=True)
    ]

    if options.workers > 1 and options.shards > 1:
        with ProcessPoolExecutor(max_workers=options.workers) as executor:
            tallies = list(executor.map(run_shard, *zip(*arguments, strict=True)))
    else:
        tallies = [run_shard(*argument) for argument in arguments]

    total = ShardTally()
    for tally in tallies:
        total.absorb(tally)
    if total.step_bound_hit:
        logger.warning(
            "%d of %d runs hit the step bound of %d",
            total.step_bound_hit,
            options.n,
            options.step_bound,
        )

    universe = tuple(program.universe)
    end_dist = Dist.from_weights(
        universe,
        [
            (Store(universe, values), Fraction(count, options.n))
            for values, count in total.end_stores.items()
        ],
    )
    defined = total.accepted > 0
    return SampleReport(
        n_total=options.n,
        n_accepted=total.accepted,
        n_rejected_observe=total.rejected_observe,
        n_step_bound_hit=total.step_bound_hit,
        empirical_end_dist=DistDocument.from_dist(end_dist),
        empirical_normalized_expectation=(
            Fraction(total.return_sum, total.accepted) if defined else None
        ),
        expectation_defined=defined,
        acceptance_rate=Fraction(total.accepted, options.n),
        seed=options.seed,
    )

"""PCG32 (XSH-RR) and SplitMix64, bit-exact with the reference C code so that
sampling reports can be replayed in other languages."""

MASK32 = 0xFFFF_FFFF
MASK64 = 0xFFFF_FFFF_FFFF_FFFF
_MULTIPLIER = 6364136223846793005


class Pcg32:
    """``pcg32_random_r`` seeded as ``pcg32_srandom_r(seed, 0)`` (increment 1)."""

    def __init__(self, seed: int, stream: int = 0) -> None:
        if not 0 <= seed <= MASK64:
            raise ValueError(f"Seed must fit in 64 bits, got {seed}")
        self.state = 0
        self.increment = ((stream << 1) | 1) & MASK64
        self.next_uint32()
        self.state = (self.state + seed) & MASK64
        self.next_uint32()

    def next_uint32(self) -> int:
        old = self.state
        self.state = (old * _MULTIPLIER + self.increment) & MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & MASK32
        rotation = old >> 59
        return ((xorshifted >> rotation) | (xorshifted << (-rotation & 31))) & MASK32

    def randbelow(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` without modulo bias."""
        if bound <= 0:
            raise ValueError(f"Bound must be positive, got {bound}")
        if bound <= 1 << 32:
            # pcg32_boundedrand_r
            threshold = (-bound % (1 << 32)) % bound
            while True:
                draw = self.next_uint32()
                if draw >= threshold:
                    return draw % bound

        words = (bound.bit_length() + 31) // 32
        span = 1 << (32 * words)
        limit = span - span % bound
        while True:
            draw = 0
            for _ in range(words):
                draw = (draw << 32) | self.next_uint32()
            if draw < limit:
                return draw % bound


def splitmix64(value: int) -> int:
    z = (value + 0x9E37_79B9_7F4A_7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58_476D_1CE4_E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D0_49BB_1331_11EB) & MASK64
    return z ^ (z >> 31)

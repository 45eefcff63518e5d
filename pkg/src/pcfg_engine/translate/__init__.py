"""Translation of structured statements and programs into pCFGs."""

from pcfg_engine.translate.translator import Translator, translate_program, translate_stmt

__all__ = ["Translator", "translate_program", "translate_stmt"]

"""Brown-Thompson groups F(n) and the n-adic Lodha-Moore groups.

Elements act on eventually periodic points of the n-ary Cantor set.  F(n)
elements are reduced tree pairs; words with y letters are evaluated by
composing small transducers and compared by rewriting to a standard form.
"""

from .seq import Seq, Variant
from .words import GroupWord, Letter, parse_word_text
from .fn import TreePair
from .machines import evaluate_word
from .rewrite import StandardForm, Verdict, equals_words, is_identity, to_standard_form

__all__ = [
    "GroupWord", "Letter", "Seq", "StandardForm", "TreePair", "Variant", "Verdict",
    "equals_words", "evaluate_word", "is_identity", "parse_word_text", "to_standard_form",
]
__version__ = "0.1.0"

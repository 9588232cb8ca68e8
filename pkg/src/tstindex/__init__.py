"""Compressed dynamic self-index over a q-truncated suffix tree and a signature grammar."""
from .signature import CapacityError, SignatureGrammar
from .strings import make_text
from .trie import CompactTrie, Locus
from .tst import QTst, build_tst

__all__ = [
    "CapacityError",
    "CompactTrie",
    "Locus",
    "QTst",
    "SignatureGrammar",
    "build_tst",
    "make_text",
]

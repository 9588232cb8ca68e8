"""Text model, edit primitives, run-length encoding and LZ77 factorization.

Texts are ``bytes`` objects terminated by a single sentinel byte ``0x00``.
Positions in the public API are 1-based, as in the usual stringology
notation; slicing inside the package is 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

SENTINEL = 0
SENTINEL_BYTE = b"\x00"


def make_text(raw: bytes) -> bytes:
    """Append the sentinel to raw bytes, rejecting embedded NULs."""
    raw = bytes(raw)
    if SENTINEL in raw:
        raise ValueError("raw text may not contain the sentinel byte 0x00")
    return raw + SENTINEL_BYTE


def check_text(text: bytes) -> None:
    if not text or text[-1] != SENTINEL or text.find(SENTINEL_BYTE) != len(text) - 1:
        raise ValueError("text must contain the sentinel exactly once, at the end")


def check_pattern(pattern: bytes) -> None:
    if not pattern:
        raise ValueError("pattern must be non-empty")
    if SENTINEL in pattern:
        raise ValueError("pattern may not contain the sentinel")


def insert_str(text: bytes, i: int, k: bytes) -> bytes:
    """Return ``T[..i-1] + K + T[i..]`` (1-based ``i``, ``1 <= i <= N``)."""
    check_text(text)
    if not 1 <= i <= len(text):
        raise IndexError(f"insert position {i} out of range 1..{len(text)}")
    if SENTINEL in k:
        raise ValueError("inserted string may not contain the sentinel")
    return text[: i - 1] + bytes(k) + text[i - 1 :]


def delete_str(text: bytes, i: int, k: int) -> bytes:
    """Remove exactly ``k`` symbols starting at ``i``; the sentinel is kept."""
    check_text(text)
    if k < 0:
        raise ValueError("deletion length must be non-negative")
    if k == 0:
        if not 1 <= i <= len(text):
            raise IndexError(f"delete position {i} out of range")
        return text
    if i < 1 or i + k - 1 >= len(text):
        raise IndexError(f"delete range [{i}, {i + k - 1}] out of range or touches the sentinel")
    return text[: i - 1] + text[i - 1 + k :]


def occ_naive(pattern: Sequence, text: Sequence) -> list[int]:
    """All 1-based start positions of ``pattern`` in ``text`` by direct comparison."""
    m, n = len(pattern), len(text)
    out = []
    for i in range(n - m + 1):
        j = 0
        while j < m and text[i + j] == pattern[j]:
            j += 1
        if j == m:
            out.append(i + 1)
    return out


@dataclass(frozen=True)
class RleFactor:
    symbol: Hashable
    run_length: int


def rle(seq: Sequence) -> list[RleFactor]:
    if len(seq) == 0:
        raise ValueError("rle of an empty sequence")
    out = []
    cur, k = seq[0], 1
    for s in seq[1:]:
        if s == cur:
            k += 1
        else:
            out.append(RleFactor(cur, k))
            cur, k = s, 1
    out.append(RleFactor(cur, k))
    return out


def rle_expand(factors: Sequence[RleFactor]) -> list:
    out = []
    for f in factors:
        out.extend([f.symbol] * f.run_length)
    return out


@dataclass(frozen=True)
class Lz77Factor:
    start: int  # 1-based
    length: int
    is_literal: bool


def _as_searchable(seq: Sequence):
    if isinstance(seq, (bytes, bytearray, str)):
        return seq
    # map arbitrary symbols to dense code points so str.find stays symbol-aligned
    ranks: dict = {}
    return "".join(chr(ranks.setdefault(s, len(ranks))) for s in seq)


def lz77(seq: Sequence) -> list[Lz77Factor]:
    """LZ77 factorization without self-reference.

    Each factor is the longest prefix of the remaining suffix that occurs
    entirely inside the already-factorized prefix, or a single literal.
    """
    if len(seq) == 0:
        raise ValueError("lz77 of an empty sequence")
    s = _as_searchable(seq)
    n = len(s)
    out = [Lz77Factor(1, 1, True)]
    i = 1
    while i < n:
        prefix = s[:i]
        # exponential then binary search on the factor length; occurrence is monotone in length
        lo, hi = 0, 1
        while i + hi <= n and hi <= i and prefix.find(s[i : i + hi]) != -1:
            lo = hi
            hi *= 2
        hi = min(hi, n - i + 1, i + 1)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if prefix.find(s[i : i + mid]) != -1:
                lo = mid
            else:
                hi = mid
        if lo == 0:
            out.append(Lz77Factor(i + 1, 1, True))
            i += 1
        else:
            out.append(Lz77Factor(i + 1, lo, False))
            i += lo
    return out


def lz77_strings(seq: Sequence) -> list:
    return [seq[f.start - 1 : f.start - 1 + f.length] for f in lz77(seq)]

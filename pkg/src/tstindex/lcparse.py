"""Locally consistent parsing of colored sequences.

`tau` marks block starts in a colored sequence (no two equal neighbours)
so that every block has 2 to 4 symbols and the mark at position ``i``
depends only on ``S[i - delta_left(c) .. i + DELTA_RIGHT]``.

Construction: repeated alphabet reduction by deterministic coin tossing
(each symbol becomes ``2*l + bit`` where ``l`` is the lowest bit in which it
differs from its left neighbour) shrinks the color range to six colors;
three neighbour-aware recolorings bring it to three colors; local maxima of
the 3-colored sequence are the landmarks.  Consecutive maxima of a
3-colored sequence are 2 to 4 apart.  The first ``start_zone(c)`` and the
last four positions lack the context for this rule and are filled in
deterministically so that every block length stays in [2, 4].
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

DELTA_RIGHT = 4


def log_star(n: float) -> int:
    """Smallest ``i >= 1`` with ``log2`` applied ``i`` times giving at most 1."""
    i = 1
    x = math.log2(n) if n > 0 else 0.0
    while x > 1:
        x = math.log2(x)
        i += 1
    return i


def delta_left(c: int) -> int:
    return max(1, log_star(max(c, 1)) + 6)


@lru_cache(maxsize=None)
def reduction_rounds(c: int) -> int:
    """Coin-tossing rounds needed to bring colors in [1, c] down to six."""
    bound = c + 1
    rounds = 0
    while bound > 6:
        bound = 2 * (bound - 1).bit_length()
        rounds += 1
    return rounds


def start_zone(c: int) -> int:
    """Number of leading positions whose mark is set by the boundary rule."""
    return reduction_rounds(c) + 4


def _three_coloring(x: np.ndarray, c: int) -> np.ndarray:
    """Rows of ``x`` reduced to colors {0,1,2}; column j is position j + rounds + 3.

    The last three positions of each row are dropped as well.
    """
    x = x.astype(np.int64, copy=False)
    for _ in range(reduction_rounds(c)):
        d = x[:, 1:] ^ x[:, :-1]
        low = d & -d
        lvl = np.log2(low.astype(np.float64)).astype(np.int64)
        x = 2 * lvl + ((x[:, 1:] >> lvl) & 1)
    for col in (3, 4, 5):
        left, mid, right = x[:, :-2], x[:, 1:-1], x[:, 2:]
        pick = np.where((left != 0) & (right != 0), 0, np.where((left != 1) & (right != 1), 1, 2))
        x = np.where(mid == col, pick, mid)
    return x


def _interior_maxima(x: np.ndarray, c: int) -> np.ndarray:
    """Boolean (rows, n) array of local maxima where the rule is defined."""
    rows, n = x.shape
    out = np.zeros((rows, n), dtype=bool)
    z = start_zone(c)
    if n - 5 < z:
        return out
    y = _three_coloring(x, c)
    base = reduction_rounds(c) + 3  # sequence position of y[:, 0]
    mid = y[:, 1:-1]
    is_max = (mid > y[:, :-2]) & (mid > y[:, 2:])
    # mid column k is position base + 1 + k; its range is [z, n - 5]
    out[:, base + 1 : base + 1 + is_max.shape[1]] = is_max
    return out


def _split_from_one(end: int) -> list[int]:
    """1-based landmarks 1, 4, 7, ... covering [1, end) with final gap in [2, 4]."""
    marks = [1]
    pos, rest = 1, end - 1
    while rest > 4:
        pos += 3
        rest -= 3
        marks.append(pos)
    return marks


def _repair_row(bits: np.ndarray, n: int, z: int) -> None:
    """Fill the boundary zones of one row in place (0-based array, 1-based math)."""
    maxima = np.flatnonzero(bits) + 1
    if n - 4 < z + 1:
        for p in _split_from_one(n + 1):
            bits[p - 1] = True
        return
    if len(maxima) == 0:
        head, anchor = z, z
    else:
        f = int(maxima[0])
        anchor = f - 4 if f - 4 != 2 else 3
        head = anchor
        anchor = int(maxima[-1])
    if head > 1:
        for p in _split_from_one(head):
            bits[p - 1] = True
        bits[head - 1] = True
    else:
        bits[0] = True
    tail = n + 1 - anchor
    if not 5 <= tail <= 8:
        raise AssertionError(f"landmark gap {tail} at the end cannot be repaired")
    bits[anchor + max(2, tail - 4) - 1] = True


def _check_colored(s: np.ndarray, c: int) -> None:
    if s.shape[-1] < 2:
        raise ValueError("tau needs a sequence of length at least 2")
    if np.any(s[..., 1:] == s[..., :-1]):
        raise ValueError("sequence is not colored: equal adjacent symbols")
    if s.size and (s.min() < 1 or s.max() > c):
        raise ValueError(f"symbols must lie in [1, {c}]")


def tau_batch(rows: np.ndarray, c: int) -> np.ndarray:
    """Landmark bits for each row of a 2-D array of equal-length colored sequences."""
    rows = np.asarray(rows, dtype=np.int64)
    _check_colored(rows, c)
    bits = _interior_maxima(rows, c)
    n = rows.shape[1]
    z = start_zone(c)
    for r in range(rows.shape[0]):
        _repair_row(bits[r], n, z)
    return bits


def tau(seq: Sequence[int], c: int) -> np.ndarray:
    """Landmark bit sequence of a colored sequence over [1, c]."""
    arr = np.asarray(seq, dtype=np.int64).reshape(1, -1)
    return tau_batch(arr, c)[0]


def block_starts(seq: Sequence[int], c: int) -> np.ndarray:
    return np.flatnonzero(tau(seq, c))


def blocks_from_bits(seq: Sequence, bits: Sequence) -> list:
    starts = [i for i, b in enumerate(bits) if b] + [len(seq)]
    if not starts or starts[0] != 0:
        raise ValueError("first position must start a block")
    return [list(seq[a:b]) for a, b in zip(starts, starts[1:])]


def lc_blocks(seq: Sequence[int], c: int) -> list[list[int]]:
    return blocks_from_bits(seq, tau(seq, c))

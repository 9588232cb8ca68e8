"""Naive reference answers and workload generators for property tests.

Nothing here imports the index modules: the search is a plain byte scan
and the shadow text is an ordinary bytearray.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

SENTINEL = 0
DNA = b"acgt"


def naive_locate(pattern: bytes, text: bytes) -> list[int]:
    """1-based starts of every (possibly overlapping) occurrence."""
    out = []
    i = text.find(pattern)
    while i != -1:
        out.append(i + 1)
        i = text.find(pattern, i + 1)
    return out


def gen_repetitive(base_len: int, copies: int, mutation_rate: float, seed: int, alphabet: bytes = DNA) -> bytes:
    """``copies`` mutated copies of a random base string, sentinel-terminated.

    Each symbol of each copy is replaced, with probability
    ``mutation_rate``, by a different symbol of ``alphabet``.
    """
    if base_len < 1 or copies < 1:
        raise ValueError("base_len and copies must be positive")
    if not 0.0 <= mutation_rate <= 1.0:
        raise ValueError("mutation_rate must lie in [0, 1]")
    alpha = np.frombuffer(alphabet, dtype=np.uint8)
    if len(alpha) < 2 or SENTINEL in alphabet:
        raise ValueError("alphabet needs two or more non-sentinel symbols")
    rng = np.random.default_rng(seed)
    base = rng.integers(0, len(alpha), base_len)
    idx = np.tile(base, copies)
    hit = rng.random(idx.size) < mutation_rate
    shift = rng.integers(1, len(alpha), int(hit.sum()))
    idx[hit] = (idx[hit] + shift) % len(alpha)
    return alpha[idx].tobytes() + bytes([SENTINEL])


class ShadowText:
    """Plain copy of the indexed text, edited in lockstep with the index."""

    def __init__(self, text: bytes):
        self.data = bytearray(text)
        self.last_edit: Optional[int] = None

    def __len__(self) -> int:
        return len(self.data)

    def bytes(self) -> bytes:
        return bytes(self.data)

    def insert(self, i: int, k: bytes) -> None:
        self.data[i - 1 : i - 1] = k
        self.last_edit = i

    def delete(self, i: int, k: int) -> None:
        del self.data[i - 1 : i - 1 + k]
        self.last_edit = i


def random_edit(shadow: ShadowText, rng: random.Random, max_len: int = 50, alphabet: bytes = DNA):
    """A valid ("insert", i, bytes) or ("delete", i, k) for the shadow text."""
    n = len(shadow)
    if n > 1 and rng.random() < 0.5:
        i = rng.randint(1, n - 1)
        return ("delete", i, rng.randint(1, min(max_len, n - i)))
    k = bytes(rng.choice(alphabet) for _ in range(rng.randint(1, max_len)))
    return ("insert", rng.randint(1, n), k)


@dataclass
class Report:
    ok: bool = True
    checked: int = 0
    divergence: Optional[str] = None
    details: dict = field(default_factory=dict)

    def fail(self, msg: str, **details) -> "Report":
        self.ok = False
        self.divergence = msg
        self.details = details
        return self


def sample_patterns(text: bytes, q: int, count: int, rng: random.Random, focus: Optional[int] = None) -> list[bytes]:
    """Present and absent patterns with lengths straddling ``q``.

    Every call includes lengths 1, q-1, q, q+1 and 2q, patterns at the text
    start, just before the sentinel and around ``focus`` (an edit site).
    """
    body = text[:-1]
    n = len(body)
    if n == 0:
        return [b"a"]
    lengths = [m for m in (1, q - 1, q, q + 1, 2 * q) if m >= 1]
    out: list[bytes] = []
    for m in lengths:
        m = min(m, n)
        out.append(body[:m])
        out.append(body[n - m :])
        if focus is not None:
            a = min(max(0, focus - 1 - m // 2), n - m)
            out.append(body[a : a + m])
    symbols = sorted(set(body)) or [ord("a")]
    while len(out) < count:
        m = rng.choice(lengths + [rng.randint(1, 4 * q)])
        m = max(1, min(m, n))
        if rng.random() < 0.7:
            a = rng.randint(0, n - m)
            p = bytearray(body[a : a + m])
            if rng.random() < 0.3:
                p[rng.randrange(m)] = rng.choice(symbols)
        else:
            p = bytearray(rng.choice(symbols + [255]) for _ in range(m))
        out.append(bytes(p))
    return out[: max(count, len(lengths))]


def check_all(index, shadow: ShadowText, patterns: int = 100, seed: int = 0, extracts: int = 20) -> Report:
    """Compare count, locate and extract against the shadow text.

    Returns at the first divergence; divergence is reported, not raised.
    """
    rng = random.Random(seed)
    text = shadow.bytes()
    rep = Report()
    if index.length != len(text):
        return rep.fail("length", expected=len(text), got=index.length)
    for p in sample_patterns(text, index.q, patterns, rng, shadow.last_edit):
        want = naive_locate(p, text)
        got = index.locate(p)
        if got != want:
            return rep.fail("locate", pattern=p, expected=want, got=got)
        c = index.count(p)
        if c != len(want):
            return rep.fail("count", pattern=p, expected=len(want), got=c)
        rep.checked += 1
    n = len(text)
    ranges = [(1, n)] + [(i, rng.randint(0, n - i + 1)) for i in (rng.randint(1, n) for _ in range(extracts))]
    for i, ell in ranges:
        got = index.extract(i, ell)
        if got != text[i - 1 : i - 1 + ell]:
            return rep.fail("extract", i=i, ell=ell)
        rep.checked += 1
    return rep

"""The TST-index: a q-TST over the text plus a signature grammar over its transform.

Patterns of length at most q are answered from the trie alone (count) or
from the trie and single-terminal occurrence lists (locate).  Longer
patterns are transformed into leaf handles and searched in the grammar.
No plain copy of the text is kept; `extract` rebuilds symbols from the
first byte of each window leaf.
"""
from __future__ import annotations

import os
import zlib
from collections import Counter
from typing import Optional

from . import _codec
from .signature import CapacityError, DagOffsets, GrammarError, SignatureGrammar
from .strings import SENTINEL, check_pattern, check_text
from .trie import CompactTrie
from .tst import LocalEdit, QTst, qgram_set

MAGIC = b"TSTIDX"
FORMAT_VERSION = 1


class TstIndex:
    def __init__(self, q: int, tst: QTst, grammar: SignatureGrammar, capacity: int, static: bool = False):
        self.q = q
        self.tst = tst
        self.grammar = grammar
        self.capacity = capacity
        self.static = static
        self._dag: Optional[DagOffsets] = None
        self._symbol: dict[int, int] = {}

    # ------------------------------------------------------------ construction

    @classmethod
    def build(cls, text: bytes, q: int, capacity: Optional[int] = None, static: bool = False) -> "TstIndex":
        text = bytes(text)
        check_text(text)
        if q < 2:
            raise ValueError("q must be at least 2")
        n = len(text)
        capacity = default_capacity(n) if capacity is None else capacity
        if capacity < n:
            raise CapacityError(f"capacity M={capacity} is smaller than the text length {n}")
        tst = QTst(q)
        grams = qgram_set(text, q)
        tst.add_windows(grams)
        handle = {g: tst.leaf(g) for g in grams}
        tq = [handle[text[i : i + q]] for i in range(n)]
        grammar = SignatureGrammar.build(tq, capacity)
        return cls(q, tst, grammar, capacity, static)

    # ------------------------------------------------------------ queries

    @property
    def length(self) -> int:
        return self.grammar.length

    def _dag_for_queries(self) -> Optional[DagOffsets]:
        if not self.static:
            return None
        if self._dag is None:
            self._dag = DagOffsets(self.grammar)
        return self._dag

    def count(self, pattern: bytes, force_long: bool = False) -> int:
        pattern = bytes(pattern)
        check_pattern(pattern)
        if len(pattern) <= self.q and not force_long:
            return self.tst.trie.count(pattern)
        return len(self._locate_long(pattern))

    def locate(self, pattern: bytes, force_long: bool = False) -> list[int]:
        """Sorted 1-based start positions of ``pattern``.

        ``force_long`` sends a pattern of length exactly q through the
        grammar search instead of the trie; it exists for testing.
        """
        pattern = bytes(pattern)
        check_pattern(pattern)
        if len(pattern) <= self.q and not force_long:
            return self._locate_short(pattern)
        return self._locate_long(pattern)

    def _locate_short(self, pattern: bytes) -> list[int]:
        dag = self._dag_for_queries()
        out: list[int] = []
        memo: dict = {}
        for leaf in self.tst.trie.leave(pattern):
            out.extend(self.grammar.cocc(leaf, dag, memo))
        out.sort()
        return out

    def _locate_long(self, pattern: bytes) -> list[int]:
        if len(pattern) < self.q:
            raise ValueError("the grammar path needs a pattern of length at least q")
        pq = self.tst.transform_pattern(pattern)
        if pq is None:
            return []
        return self.grammar.core_search(pq, self._dag_for_queries())

    def extract(self, i: int, ell: int) -> bytes:
        handles = self.grammar.extract(i, ell)
        sym = self._symbol
        nodes = self.tst.trie.nodes
        out = bytearray()
        for h in handles:
            b = sym.get(h)
            if b is None:
                b = sym[h] = nodes[h].key[0]
            out.append(b)
        return bytes(out)

    def text(self) -> bytes:
        return self.extract(1, self.length)

    # ------------------------------------------------------------ updates

    def insert(self, i: int, k: bytes) -> None:
        """Insert ``k`` before 1-based position ``i`` (``1 <= i <= N``)."""
        k = bytes(k)
        n = self.length
        if not 1 <= i <= n:
            raise IndexError(f"insert position {i} out of range 1..{n}")
        if SENTINEL in k:
            raise ValueError("inserted string may not contain the sentinel")
        if not k:
            return
        if n + len(k) > self.capacity:
            raise CapacityError(f"text would exceed the capacity M={self.capacity}; rebuild with a larger M")
        self._edit(i, 0, k)

    def delete(self, i: int, k: int) -> None:
        """Remove exactly ``k`` symbols starting at ``i``; the sentinel stays."""
        n = self.length
        if k < 0:
            raise ValueError("deletion length must be non-negative")
        if k == 0:
            if not 1 <= i <= n:
                raise IndexError(f"delete position {i} out of range")
            return
        if i < 1 or i + k - 1 >= n:
            raise IndexError(f"delete range [{i}, {i + k - 1}] out of range or touches the sentinel")
        self._edit(i, k, b"")

    def _edit(self, i: int, k: int, ins: bytes) -> None:
        q, n = self.q, self.length
        a = max(1, i - q + 1)
        e = i + k
        loc = LocalEdit(a, self.extract(a, i - a), self.extract(i, k), ins, self.extract(e, min(q - 1, n - e + 1)))
        plan = self.tst.apply_edit(loc)
        try:
            self.grammar.splice(a - 1, plan.old_len, plan.new_handles)
        except GrammarError:
            # slow-path recovery: the grammar is unchanged, so the old text is still readable
            self.tst.rollback(plan)
            old = self.text()
            self._rebuild(old[: i - 1] + ins + old[i - 1 + k :])
            return
        except Exception:
            self.tst.rollback(plan)
            raise
        self.tst.commit(plan)
        self._dag = None

    def _rebuild(self, text: bytes) -> None:
        fresh = TstIndex.build(text, self.q, self.capacity, self.static)
        self.tst, self.grammar = fresh.tst, fresh.grammar
        self._dag = None
        self._symbol = {}

    # ------------------------------------------------------------ inspection

    def stats(self) -> dict:
        trie = self.tst.trie
        return {
            "N": self.length,
            "q": self.q,
            "M": self.capacity,
            "sigma": len(trie.root.children),
            "w_prime": self.grammar.size(),
            "height": self.grammar.height,
            "qgrams": self.tst.leaf_count(),
            "explicit_nodes": trie.explicit_count(),
            "implicit_nodes": trie.implicit_count(),
        }

    def check(self) -> None:
        """Assert every cross-structure invariant (slow; for tests)."""
        text = self.text()
        check_text(text)
        self.tst.trie.check()
        assert Counter(self.tst.trie.strings()) == qgram_set(text, self.q), "q-TST multiset differs from the text"
        assert self.grammar.expand() == self.tst.transform(text), "grammar does not derive T_q"
        self.grammar.check()

    # ------------------------------------------------------------ persistence

    def to_bytes(self) -> bytes:
        w = _codec.Writer()
        w.uint(FORMAT_VERSION)
        w.uint(self.q)
        w.uint(self.capacity)
        w.uint(1 if self.static else 0)
        self.tst.trie.write(w)
        w.raw(self.grammar.to_bytes(self.q))
        body = MAGIC + w.getvalue()
        return body + zlib.crc32(body).to_bytes(4, "big")

    @classmethod
    def from_bytes(cls, data: bytes) -> "TstIndex":
        if len(data) < len(MAGIC) + 4 or not data.startswith(MAGIC):
            raise ValueError("not a TST-index file")
        body, crc = data[:-4], int.from_bytes(data[-4:], "big")
        if zlib.crc32(body) != crc:
            raise ValueError("index file checksum mismatch")
        rd = _codec.Reader(body, len(MAGIC))
        version = rd.uint()
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported index format version {version}")
        q, capacity, static = rd.uint(), rd.uint(), bool(rd.uint())
        trie = CompactTrie.read(rd)
        grammar, gq = SignatureGrammar.from_bytes(rd.raw())
        rd.expect_end()
        if gq != q:
            raise ValueError("grammar and trie disagree on q")
        tst = QTst(q)
        tst.trie = trie
        return cls(q, tst, grammar, capacity, static)

    def save(self, path: str) -> int:
        """Write atomically (temp file then rename); returns bytes written."""
        data = self.to_bytes()
        tmp = f"{path}.tmp{os.getpid()}"
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
        return len(data)

    @classmethod
    def load(cls, path: str) -> "TstIndex":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def default_capacity(n: int) -> int:
    """Room for the text to double before a rebuild is needed."""
    return max(2 * n, 1024)


def build_index(text: bytes, q: int, capacity: Optional[int] = None, static: bool = False) -> TstIndex:
    return TstIndex.build(text, q, capacity, static)

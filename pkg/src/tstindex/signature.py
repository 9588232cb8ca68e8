"""Signature encoding: a balanced, hash-consed grammar over an integer alphabet.

Level 0 assigns a variable to every terminal.  Odd levels group maximal runs
into power rules ``e -> f^k``; even levels cut the previous level with the
locally consistent parsing of `lcparse` and assign one variable per block
of 2 to 4 symbols.  Equal right-hand sides at the same level always receive
the same variable, so repeated text fragments share subtrees.

Positions in the public query API are 1-based; internally spans are 0-based
half-open terminal intervals.
"""
from __future__ import annotations

import heapq
from collections import Counter
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import _codec
from .lcparse import DELTA_RIGHT, delta_left, tau

TERM, POW, SEQ = 0, 1, 2
FORMAT_VERSION = 1


class CapacityError(RuntimeError):
    """Raised when the variable budget 4M is exhausted."""


class GrammarError(RuntimeError):
    """An internal consistency check failed during an update."""


class Rule:
    __slots__ = ("id", "kind", "body", "level", "length", "refcount")

    def __init__(self, rid: int, kind: int, body, level: int, length: int):
        self.id = rid
        self.kind = kind
        self.body = body
        self.level = level
        self.length = length
        self.refcount = 0

    def children(self) -> tuple:
        if self.kind == SEQ:
            return self.body
        if self.kind == POW:
            return (self.body[0],)
        return ()

    def __repr__(self):
        return f"Rule({self.id}: L{self.level} {self.body!r} len={self.length} ref={self.refcount})"


Blocker = Callable[[int, np.ndarray], Sequence[int]]


class SignatureGrammar:
    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity M must be positive")
        self.capacity = capacity
        self.c = 4 * capacity
        self.rules: dict[int, Rule] = {}
        self.lookup: dict[tuple, int] = {}
        self.parents: dict[int, Counter] = {}
        self.start: Optional[int] = None
        self._free: list[int] = []
        self._next_id = 1
        self._dl = delta_left(self.c)

    # ------------------------------------------------------------ dictionary

    @property
    def length(self) -> int:
        return 0 if self.start is None else self.rules[self.start].length

    @property
    def height(self) -> int:
        return -1 if self.start is None else self.rules[self.start].level

    def size(self) -> int:
        return len(self.rules)

    def _alloc(self) -> int:
        if self._free:
            return heapq.heappop(self._free)
        rid = self._next_id
        if rid > self.c:
            raise CapacityError(f"more than 4M = {self.c} variables needed; rebuild with a larger M")
        self._next_id += 1
        return rid

    def _assign(self, level: int, kind: int, body) -> int:
        key = (level, body)
        rid = self.lookup.get(key)
        if rid is not None:
            return rid
        rules = self.rules
        if kind == TERM:
            length = 1
        elif kind == POW:
            length = rules[body[0]].length * body[1]
        else:
            length = sum(rules[v].length for v in body)
        rid = self._alloc()
        rules[rid] = Rule(rid, kind, body, level, length)
        self.lookup[key] = rid
        self.parents[rid] = Counter()
        for ch in rules[rid].children():
            rules[ch].refcount += 1
            self.parents[ch][rid] += 1
        return rid

    def _decref(self, rid: int) -> None:
        stack = [rid]
        rules = self.rules
        while stack:
            v = stack.pop()
            r = rules[v]
            r.refcount -= 1
            if r.refcount > 0:
                continue
            del self.lookup[(r.level, r.body)]
            del rules[v]
            del self.parents[v]
            heapq.heappush(self._free, v)
            for ch in r.children():
                par = self.parents[ch]
                par[v] -= 1
                if par[v] == 0:
                    del par[v]
                stack.append(ch)

    def _set_start(self, new_start: int) -> None:
        old = self.start
        self.rules[new_start].refcount += 1
        self.start = new_start
        if old is not None:
            self._decref(old)

    def find(self, level: int, body) -> Optional[int]:
        return self.lookup.get((level, body))

    def terminal_var(self, terminal: int) -> Optional[int]:
        return self.lookup.get((0, terminal))

    # ------------------------------------------------------------ construction

    @classmethod
    def build(cls, terminals: Sequence[int], capacity: Optional[int] = None, blocker: Optional[Blocker] = None):
        """Signature encoding of a non-empty terminal sequence.

        ``blocker(level, seq)`` may override the block lengths of even levels;
        it exists so that hand-worked parses can be reproduced exactly.
        """
        terms = np.asarray(terminals, dtype=np.int64)
        if terms.size == 0:
            raise ValueError("cannot build a grammar for an empty sequence")
        g = cls(capacity if capacity is not None else len(terms))
        ids = g._assign_array(0, TERM, terms)
        g._set_start(g._build_up(0, ids, blocker))
        return g

    def _assign_array(self, level: int, kind: int, keys: np.ndarray, bodies=None) -> np.ndarray:
        """Assign variables to a 1-D key array (first-appearance order)."""
        uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        ids = np.empty(len(uniq), dtype=np.int64)
        for u in order:
            body = int(uniq[u]) if bodies is None else bodies(int(first[u]))
            ids[u] = self._assign(level, kind, body)
        return ids[inverse.ravel()]

    def _next_level(self, t: int, x: np.ndarray, blocker: Optional[Blocker] = None) -> np.ndarray:
        n = len(x)
        if t % 2 == 1:
            change = np.flatnonzero(x[1:] != x[:-1]) + 1
            starts = np.concatenate(([0], change))
            vals = x[starts]
            lens = np.diff(np.append(starts, n))
            keys = vals * (n + 1) + lens
            return self._assign_array(t, POW, keys, lambda j: (int(vals[j]), int(lens[j])))
        if blocker is not None:
            lens = np.asarray(blocker(t, x), dtype=np.int64)
            if lens.sum() != n:
                raise ValueError("blocker lengths must tile the level")
            starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
        else:
            starts = np.flatnonzero(tau(x, self.c))
            lens = np.diff(np.append(starts, n))
        width = int(lens.max())
        rows = np.zeros((len(starts), width), dtype=np.int64)
        for k in range(width):
            has = lens > k
            rows[has, k] = x[starts[has] + k]
        uniq, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        ids = np.empty(len(uniq), dtype=np.int64)
        for u in order:
            body = tuple(int(v) for v in uniq[u] if v)
            ids[u] = self._assign(t, SEQ, body)
        return ids[inverse.ravel()]

    def _build_up(self, level: int, x: np.ndarray, blocker: Optional[Blocker] = None) -> int:
        x = np.asarray(x, dtype=np.int64)
        while level == 0 or len(x) > 1:
            level += 1
            x = self._next_level(level, x, blocker)
        return int(x[0])

    # ------------------------------------------------------------ traversal

    def expand(self, rid: Optional[int] = None) -> list[int]:
        rid = self.start if rid is None else rid
        out: list[int] = []
        self._emit(rid, 0, 0, self.rules[rid].length, out)
        return out

    def _emit(self, v: int, start: int, lo: int, hi: int, out: list) -> None:
        r = self.rules[v]
        if r.kind == TERM:
            out.append(r.body)
            return
        if r.kind == POW:
            ch, k = r.body
            clen = self.rules[ch].length
            j0 = max(0, (lo - start) // clen)
            j1 = min(k, -(-(hi - start) // clen))
            for j in range(j0, j1):
                s = start + j * clen
                if lo <= s and s + clen <= hi:
                    self._emit_full(ch, out)
                else:
                    self._emit(ch, s, lo, hi, out)
            return
        s = start
        for ch in r.body:
            clen = self.rules[ch].length
            if s + clen > lo and s < hi:
                if lo <= s and s + clen <= hi:
                    self._emit_full(ch, out)
                else:
                    self._emit(ch, s, lo, hi, out)
            s += clen
            if s >= hi:
                break

    def _emit_full(self, v: int, out: list) -> None:
        r = self.rules[v]
        if r.kind == TERM:
            out.append(r.body)
        elif r.kind == POW:
            ch, k = r.body
            if self.rules[ch].kind == TERM:
                out.extend([self.rules[ch].body] * k)
            else:
                part: list = []
                self._emit_full(ch, part)
                out.extend(part * k)
        else:
            for ch in r.body:
                self._emit_full(ch, out)

    def extract(self, i: int, ell: int) -> list[int]:
        """Terminals at 1-based positions ``i .. i+ell-1``."""
        n = self.length
        if ell < 0 or i < 1 or i + ell - 1 > n:
            raise IndexError(f"extract range [{i}, {i + ell - 1}] outside [1, {n}]")
        out: list[int] = []
        if ell:
            self._emit(self.start, 0, i - 1, i - 1 + ell, out)
        return out

    def _level_nodes(self, t: int, lo: int, hi: int) -> list[list[int]]:
        """Level-``t`` nodes meeting terminal span [lo, hi) as [var, count, start] runs."""
        out: list[list[int]] = []
        if lo < hi:
            self._collect(self.start, 0, lo, hi, t, out)
        return out

    def _collect(self, v: int, start: int, lo: int, hi: int, t: int, out: list) -> None:
        r = self.rules[v]
        if r.level == t:
            out.append([v, 1, start])
            return
        if r.kind == POW:
            ch, k = r.body
            clen = self.rules[ch].length
            j0 = max(0, (lo - start) // clen)
            j1 = min(k, -(-(hi - start) // clen))
            if r.level - 1 == t:
                out.append([ch, j1 - j0, start + j0 * clen])
                return
            for j in range(j0, j1):
                self._collect(ch, start + j * clen, lo, hi, t, out)
            return
        s = start
        for ch in r.body:
            clen = self.rules[ch].length
            if s + clen > lo and s < hi:
                self._collect(ch, s, lo, hi, t, out)
            s += clen
            if s >= hi:
                break

    def _node_at(self, t: int, x: int) -> tuple[int, int, int]:
        """(var, start, end) of the level-``t`` node covering terminal ``x``."""
        v, start = self.start, 0
        rules = self.rules
        while rules[v].level > t:
            r = rules[v]
            if r.kind == POW:
                ch, _k = r.body
                clen = rules[ch].length
                start += (x - start) // clen * clen
                v = ch
            else:
                for ch in r.body:
                    clen = rules[ch].length
                    if x < start + clen:
                        v = ch
                        break
                    start += clen
        return v, start, start + rules[v].length

    def _nodes_left(self, t: int, x: int, m: int) -> list[list[int]]:
        """Up to ``m`` level-``t`` runs ending at or before boundary ``x``."""
        step = max(m, 4)
        while True:
            lo = max(0, x - step)
            nodes = self._level_nodes(t, lo, x)
            if len(nodes) >= m or lo == 0:
                return nodes[-m:] if m else []
            step *= 4

    def _nodes_right(self, t: int, y: int, m: int) -> list[list[int]]:
        """Up to ``m`` level-``t`` runs starting at or after boundary ``y``."""
        n = self.length
        step = max(m, 4)
        while True:
            hi = min(n, y + step)
            nodes = self._level_nodes(t, y, hi)
            if len(nodes) >= m or hi == n:
                return nodes[:m]
            step *= 4

    def level_sequence(self, t: int) -> list[int]:
        out = []
        for v, k, _s in self._level_nodes(t, 0, self.length):
            out.extend([v] * k)
        return out

    # ------------------------------------------------------------ occurrences

    def _child_offsets(self, parent: int, child: int) -> list[int]:
        r = self.rules[parent]
        if r.kind == POW:
            clen = self.rules[child].length
            return [j * clen for j in range(r.body[1])]
        offs, s = [], 0
        for ch in r.body:
            if ch == child:
                offs.append(s)
            s += self.rules[ch].length
        return offs

    def occurrences(self, v: int, memo: Optional[dict] = None, dag: Optional["DagOffsets"] = None) -> list[int]:
        """Sorted 0-based start positions of every derivation-tree node labelled ``v``.

        Each position is the sum of relevant offsets on a root-to-node path.
        With ``dag``, single-parent chains are skipped in one step.
        """
        memo = {} if memo is None else memo
        got = memo.get(v)
        if got is not None:
            return got
        jump = dag.shortcut.get(v) if dag is not None else None
        if v == self.start:
            res = [0]
        elif jump is not None:
            res = [p + jump[1] for p in self.occurrences(jump[0], memo, dag)]
        else:
            res = []
            for p in self.parents[v]:
                offs = self._child_offsets(p, v)
                for base in self.occurrences(p, memo, dag):
                    res.extend(base + o for o in offs)
            res.sort()
        memo[v] = res
        return res

    def cocc(self, terminal: int, dag: Optional["DagOffsets"] = None, memo: Optional[dict] = None) -> list[int]:
        """1-based positions of ``terminal``; pass one ``memo`` across calls to share ancestor work."""
        v = self.terminal_var(terminal)
        if v is None:
            return []
        return [p + 1 for p in self.occurrences(v, memo, dag)]

    def core_search(self, pq: Sequence[int], dag: Optional["DagOffsets"] = None) -> list[int]:
        """1-based occurrences of a terminal string via its core.

        The pattern is parsed with the text's own dictionary, keeping at each
        level only the symbols every occurrence must share.  Occurrences of
        the longest surviving variable give candidates that are checked
        against the extracted text.  Occurrences close to either end of the
        text, where the parse of the text uses the boundary rule, are found
        by scanning the extracted ends directly.
        """
        pq = [int(x) for x in pq]
        m, n = len(pq), self.length
        if m == 0:
            raise ValueError("empty pattern")
        if m > n:
            return []
        if m == 1:
            return self.cocc(pq[0], dag)
        cur = []
        for x in pq:
            v = self.terminal_var(x)
            if v is None:
                return []
            cur.append(v)
        core, core_off = cur, 0
        off = 0
        lc_levels: list[int] = []
        consistent = True
        t = 1
        rules = self.rules
        while True:
            if t % 2 == 1:
                runs = _runs(cur)
                if len(runs) <= 2:
                    break
                off += rules[runs[0][0]].length * runs[0][1]
                nxt = [self.lookup.get((t, (v, k))) for v, k in runs[1:-1]]
            else:
                if len(cur) < self._dl + DELTA_RIGHT + 2:
                    break
                bits = tau(cur, self.c)
                marks = [i for i in range(self._dl, len(cur) - DELTA_RIGHT) if bits[i]]
                if len(marks) < 2:
                    break
                lc_levels.append(t)
                off += sum(rules[v].length for v in cur[: marks[0]])
                nxt = [self.lookup.get((t, tuple(cur[a:b]))) for a, b in zip(marks, marks[1:])]
            if any(v is None for v in nxt):
                consistent = False
                break
            cur = nxt
            core, core_off = cur, off
            t += 1

        found: set[int] = set()
        if consistent:
            best = max(range(len(core)), key=lambda j: rules[core[j]].length)
            rel = core_off + sum(rules[v].length for v in core[:best])
            for p in self.occurrences(core[best], dag=dag):
                cand = p - rel
                if 0 <= cand <= n - m and cand not in found:
                    if self._matches(cand, pq):
                        found.add(cand)
        if lc_levels:
            lb, rb = 0, n
            for lt in lc_levels:
                head = self._nodes_right(lt - 1, 0, self._dl + 1)
                tail = self._nodes_left(lt - 1, n, DELTA_RIGHT + 1)
                if len(head) <= self._dl or len(tail) <= DELTA_RIGHT:
                    lb, rb = n, 0
                    break
                lb = max(lb, head[-1][2] + rules[head[-1][0]].length * head[-1][1])
                rb = min(rb, tail[0][2])
            found.update(self._scan(0, min(n, lb + m - 1), pq, lambda s: s < lb))
            found.update(self._scan(max(0, rb - m + 1), n, pq, lambda s: s + m > rb))
        return sorted(p + 1 for p in found)

    def _matches(self, start: int, pq: list[int]) -> bool:
        out: list[int] = []
        self._emit(self.start, 0, start, start + len(pq), out)
        return out == pq

    def _scan(self, lo: int, hi: int, pq: list[int], keep) -> list[int]:
        if hi - lo < len(pq):
            return []
        hay: list[int] = []
        self._emit(self.start, 0, lo, hi, hay)
        m, first = len(pq), pq[0]
        return [
            lo + i
            for i in range(len(hay) - m + 1)
            if hay[i] == first and hay[i : i + m] == pq and keep(lo + i)
        ]

    # ------------------------------------------------------------ updates

    def splice(self, at: int, remove_len: int, insert_terms: Sequence[int]) -> None:
        """Replace terminals at 0-based ``[at, at+remove_len)`` by ``insert_terms``.

        Levels are re-parsed bottom-up inside a window that grows outward
        just far enough for the parse outside it to be unaffected; old rules
        that fall out of use are reclaimed.
        """
        n = self.length
        if at < 0 or remove_len < 0 or at + remove_len > n:
            raise IndexError(f"splice range [{at}, {at + remove_len}) outside [0, {n})")
        insert_terms = [int(x) for x in insert_terms]
        if n - remove_len + len(insert_terms) == 0:
            raise ValueError("the grammar cannot represent an empty string")
        if remove_len == 0 and not insert_terms:
            return
        try:
            new_start = self._splice_levels(at, remove_len, insert_terms)
        except Exception:
            self.collect_garbage()
            raise
        self._set_start(new_start)

    def _splice_levels(self, at: int, remove_len: int, insert_terms: list[int]) -> int:
        n = self.length
        rules = self.rules
        X, Y = at, at + remove_len
        new = [[self._assign(0, TERM, x), 1] for x in insert_terms]
        dl = self._dl
        m_left, m_right = DELTA_RIGHT + 2, dl + 2
        c_left, c_right = dl + 16, dl + DELTA_RIGHT + 16
        t = 1
        while True:
            if X == 0 and Y == n:
                seq = np.array([v for v, k in new for _ in range(k)], dtype=np.int64)
                return self._build_up(t - 1, seq)
            ctx_l: list = []
            ctx_r: list = []
            if t % 2 == 1:
                Xt = 0 if X == 0 else self._node_at(t, X - 1)[1]
                Yt = n if Y == n else self._node_at(t, Y)[2]
            else:
                left = self._nodes_left(t - 1, X, m_left)
                Xt = 0 if len(left) < m_left else self._node_at(t, left[0][2])[1]
                if Xt > 0:
                    ctx_l = self._nodes_left(t - 1, Xt, c_left)
                    if len(ctx_l) < c_left:
                        Xt, ctx_l = 0, []
                right = self._nodes_right(t - 1, Y, m_right)
                if len(right) < m_right:
                    Yt = n
                else:
                    last = right[-1]
                    Yt = self._node_at(t, last[2] + rules[last[0]].length * last[1] - 1)[2]
                if Yt < n:
                    ctx_r = self._nodes_right(t - 1, Yt, c_right)
                    if len(ctx_r) < c_right:
                        Yt, ctx_r = n, []
            mid = _merge_runs(
                [[v, k] for v, k, _s in self._level_nodes(t - 1, Xt, X)]
                + new
                + [[v, k] for v, k, _s in self._level_nodes(t - 1, Y, Yt)]
            )
            if t % 2 == 1:
                new = [[self._assign(t, POW, (v, k)), 1] for v, k in mid]
            else:
                if any(k != 1 for _v, k in mid):
                    raise GrammarError(f"level {t - 1} is not colored inside the splice window")
                vals = [v for v, _k in mid]
                ext = [v for v, _k, _s in ctx_l] + vals + [v for v, _k, _s in ctx_r]
                bits = tau(ext, self.c) if len(ext) >= 2 else np.ones(1, dtype=bool)
                o = len(ctx_l)
                if not bits[o] or (ctx_r and not bits[o + len(vals)]):
                    raise GrammarError(f"splice window at level {t} does not align with old blocks")
                marks = [i for i in range(len(vals)) if bits[o + i]] + [len(vals)]
                new = [[self._assign(t, SEQ, tuple(vals[a:b])), 1] for a, b in zip(marks, marks[1:])]
            X, Y = Xt, Yt
            t += 1

    def collect_garbage(self) -> None:
        """Drop every rule unreachable from the start symbol."""
        live = set()
        stack = [self.start] if self.start is not None else []
        while stack:
            v = stack.pop()
            if v in live:
                continue
            live.add(v)
            stack.extend(self.rules[v].children())
        for v in [v for v in self.rules if v not in live]:
            r = self.rules.pop(v)
            del self.lookup[(r.level, r.body)]
            del self.parents[v]
            heapq.heappush(self._free, v)
        for v, par in self.parents.items():
            for p in [p for p in par if p not in live]:
                del par[p]
        self._recount()

    def _recount(self) -> None:
        for r in self.rules.values():
            r.refcount = 0
        for r in self.rules.values():
            for ch in r.children():
                self.rules[ch].refcount += 1
        if self.start is not None:
            self.rules[self.start].refcount += 1

    # ------------------------------------------------------------ checking

    def check(self) -> None:
        """Verify dictionary and parse invariants; raises AssertionError."""
        rules = self.rules
        seen = set()
        ref = Counter()
        for rid, r in rules.items():
            key = (r.level, r.body)
            assert key not in seen, f"duplicate body {key}"
            seen.add(key)
            assert self.lookup[key] == rid
            if r.kind == TERM:
                assert r.level == 0
            elif r.kind == POW:
                assert r.level % 2 == 1 and r.body[1] >= 1
                assert rules[r.body[0]].level == r.level - 1
            else:
                assert r.level % 2 == 0 and r.level > 0 and 2 <= len(r.body) <= 4
                assert all(rules[ch].level == r.level - 1 for ch in r.body)
            assert rid <= self.c
            for ch in r.children():
                ref[ch] += 1
        ref[self.start] += 1
        for rid, r in rules.items():
            assert r.refcount == ref[rid] > 0, f"refcount of {rid}: {r.refcount} != {ref[rid]}"
        assert len(self.lookup) == len(rules)
        prev = self.level_sequence(0)
        for t in range(1, self.height + 1):
            cur = self.level_sequence(t)
            if t % 2 == 1:
                want = [self.lookup[(t, (v, k))] for v, k in _runs(prev)]
            else:
                marks = list(np.flatnonzero(tau(prev, self.c))) + [len(prev)]
                want = [self.lookup[(t, tuple(prev[a:b]))] for a, b in zip(marks, marks[1:])]
            assert cur == want, f"level {t} differs from a re-parse of level {t - 1}"
            prev = cur
        assert len(prev) == 1

    # ------------------------------------------------------------ serialization

    def to_bytes(self, q: int = 0) -> bytes:
        w = _codec.Writer()
        w.uint(FORMAT_VERSION)
        w.uint(q)
        w.uint(self.length)
        w.uint(self.capacity)
        w.uint(self.start or 0)
        w.uint(len(self.rules))
        for rid in sorted(self.rules):
            r = self.rules[rid]
            w.uint(rid)
            w.uint(r.level)
            w.uint(r.kind)
            if r.kind == TERM:
                w.uint(r.body)
            elif r.kind == POW:
                w.uint(r.body[0])
                w.uint(r.body[1])
            else:
                w.uint(len(r.body))
                for ch in r.body:
                    w.uint(ch)
        return w.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> tuple["SignatureGrammar", int]:
        rd = _codec.Reader(data)
        g = cls.read(rd)
        rd.expect_end()
        return g

    @classmethod
    def read(cls, rd: "_codec.Reader") -> tuple["SignatureGrammar", int]:
        version = rd.uint()
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported grammar format version {version}")
        q = rd.uint()
        length = rd.uint()
        g = cls(rd.uint())
        start = rd.uint()
        count = rd.uint()
        for _ in range(count):
            rid, level, kind = rd.uint(), rd.uint(), rd.uint()
            if kind == TERM:
                body = rd.uint()
            elif kind == POW:
                body = (rd.uint(), rd.uint())
            elif kind == SEQ:
                body = tuple(rd.uint() for _ in range(rd.uint()))
            else:
                raise ValueError(f"bad rule kind {kind}")
            g.rules[rid] = Rule(rid, kind, body, level, 0)
            g.lookup[(level, body)] = rid
        for rid in sorted(g.rules, key=lambda v: g.rules[v].level):
            r = g.rules[rid]
            g.parents.setdefault(rid, Counter())
            try:
                if r.kind == TERM:
                    r.length = 1
                elif r.kind == POW:
                    r.length = g.rules[r.body[0]].length * r.body[1]
                else:
                    r.length = sum(g.rules[ch].length for ch in r.body)
                for ch in r.children():
                    g.parents.setdefault(ch, Counter())[rid] += 1
            except KeyError as exc:
                raise ValueError(f"rule {rid} refers to missing rule {exc}") from None
        g.start = start or None
        g._recount()
        top = max(g.rules, default=0)
        g._next_id = top + 1
        g._free = [v for v in range(1, top) if v not in g.rules]
        heapq.heapify(g._free)
        if g.length != length:
            raise ValueError("grammar length does not match its header")
        return g, q


class DagOffsets:
    """Shortcut ancestors for a fixed grammar.

    A rule used exactly once (one parent, one position in it) maps to its
    lowest ancestor that is used more than once, or to the start symbol,
    together with the summed relevant offsets along the way.  Any edit to
    the grammar invalidates the table.
    """

    def __init__(self, g: SignatureGrammar):
        self.shortcut: dict[int, tuple[int, int]] = {}
        for v in sorted(g.rules, key=lambda x: -g.rules[x].level):
            if v == g.start:
                continue
            par = g.parents[v]
            if len(par) != 1:
                continue
            (p,) = par
            offs = g._child_offsets(p, v)
            if len(offs) != 1:
                continue
            up = self.shortcut.get(p)
            self.shortcut[v] = (up[0], up[1] + offs[0]) if up is not None else (p, offs[0])


def _runs(seq: Sequence[int]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for v in seq:
        if out and out[-1][0] == v:
            out[-1] = (v, out[-1][1] + 1)
        else:
            out.append((v, 1))
    return out


def _merge_runs(runs: Iterable[list[int]]) -> list[list[int]]:
    out: list[list[int]] = []
    for v, k in runs:
        if k == 0:
            continue
        if out and out[-1][0] == v:
            out[-1][1] += k
        else:
            out.append([v, k])
    return out

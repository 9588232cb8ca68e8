"""q-truncated suffix tree (q-TST) and the q-TST transformation.

The q-TST of a text stores every window ``T[i..min(i+q-1, N)]`` with its
multiplicity.  Because the text ends with a unique sentinel, the window set
is prefix-free and every window is a leaf.  Replacing each text position by
the handle of its window's leaf gives the transformed text ``T_q``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .strings import check_text
from .trie import CompactTrie, Locus


def windows(text: bytes, q: int) -> list[bytes]:
    if q < 1:
        raise ValueError("q must be positive")
    return [text[i : i + q] for i in range(len(text))]


def qgram_set(text: bytes, q: int) -> Counter:
    """Multiset of all q-grams plus the shorter suffixes of ``text``."""
    if q < 1:
        raise ValueError("q must be positive")
    return Counter(text[i : i + q] for i in range(len(text)))


class QTst:
    def __init__(self, q: int):
        if q < 1:
            raise ValueError("q must be positive")
        self.q = q
        self.trie = CompactTrie()

    # -- thin delegation so callers rarely need the trie itself
    def leaf(self, window: bytes) -> Optional[int]:
        return self.trie.leaf_of(window)

    def path(self, handle: int) -> bytes:
        return self.trie.path(handle)

    def first_symbol(self, handle: int) -> int:
        return self.trie.nodes[handle].key[0]

    def leaf_count(self) -> int:
        return sum(1 for n in self.trie.nodes.values() if n.key is not None)

    def shape(self):
        return self.trie.shape()

    def transform(self, text: bytes) -> list[int]:
        """Leaf handle of every window of ``text``, rolling with suffix links."""
        check_text(text)
        q, trie = self.q, self.trie
        n = len(text)
        out = [0] * n
        leaf = trie.leaf_of(text[:q])
        if leaf is None:
            raise RuntimeError("first window is not a leaf; q-TST does not match the text")
        out[0] = leaf
        for i in range(1, n):
            loc = trie.slink(leaf)
            if loc is None:
                raise RuntimeError(f"leaf {leaf} has no suffix link")
            if i + q <= n:
                loc = trie.child(loc, text[i + q - 1])
                if loc is None:
                    raise RuntimeError(f"window at {i + 1} missing from the q-TST")
            node = trie.nodes[loc.node]
            if node.key is None or loc.depth != node.depth:
                raise RuntimeError(f"window at {i + 1} does not end at a leaf")
            leaf = node.handle
            out[i] = leaf
        return out

    def transform_pattern(self, pattern: bytes) -> Optional[list[int]]:
        """Leaf handles of the q-grams of ``pattern``; None if one is absent."""
        q, trie = self.q, self.trie
        m = len(pattern)
        if m < q:
            raise ValueError("pattern shorter than q has no q-TST transform")
        leaf = trie.leaf_of(pattern[:q])
        if leaf is None:
            return None
        out = [leaf]
        for i in range(1, m - q + 1):
            loc = trie.slink(leaf)
            loc = trie.child(loc, pattern[i + q - 1]) if loc is not None else None
            if loc is None:
                return None
            node = trie.nodes[loc.node]
            if node.key is None or loc.depth != node.depth:
                return None
            leaf = node.handle
            out.append(leaf)
        return out

    # -- dynamic maintenance

    def add_windows(self, grams: Counter) -> None:
        for g in sorted(grams, key=_gram_order(grams)):
            self.trie.insert_string(g, grams[g])

    def remove_windows(self, grams: Counter) -> None:
        for g in grams:
            self.trie.remove_string(g, grams[g])

    def apply_edit(self, local: "LocalEdit") -> "EditPlan":
        """Steps (i) and (ii) of an update: add new windows, compute their leaves.

        The caller splices ``plan.new_handles`` into ``T_q`` and then calls
        `commit` to drop the windows that disappeared (step iv).
        """
        old, new = local.windows(self.q)
        add = Counter(new)
        rem = Counter(old)
        common = add & rem
        add -= common
        rem -= common
        self.add_windows(add)
        handles = []
        for g in new:
            h = self.trie.leaf_of(g)
            if h is None:
                raise RuntimeError(f"window {g!r} missing after insertion")
            handles.append(h)
        return EditPlan(local.start, len(old), handles, add, rem)

    def commit(self, plan: "EditPlan") -> None:
        self.remove_windows(plan.qgrams_to_remove)

    def rollback(self, plan: "EditPlan") -> None:
        self.remove_windows(plan.qgrams_to_insert)


def _gram_order(grams):
    order = {g: i for i, g in enumerate(grams)}
    return order.__getitem__


def build_tst(text: bytes, q: int) -> QTst:
    """Insert every distinct window in first-occurrence order."""
    check_text(text)
    x = QTst(q)
    x.add_windows(qgram_set(text, q))
    return x


@dataclass
class LocalEdit:
    """Text neighbourhood of a replacement ``T[i..i+k-1] -> new``.

    ``left`` holds the up to q-1 symbols before the edit, ``right`` the up to
    q-1 symbols after the removed span (ending with the sentinel when the text
    end is that close).  ``start`` is the 1-based position of ``left[0]``.
    """

    start: int
    left: bytes
    old: bytes
    new: bytes
    right: bytes

    def windows(self, q: int) -> tuple[list[bytes], list[bytes]]:
        before = self.left + self.old + self.right
        after = self.left + self.new + self.right
        n_old = len(self.left) + len(self.old)
        n_new = len(self.left) + len(self.new)
        return [before[j : j + q] for j in range(n_old)], [after[j : j + q] for j in range(n_new)]


@dataclass
class EditPlan:
    replace_start: int  # 1-based position in T_q
    old_len: int
    new_handles: list[int]
    qgrams_to_insert: Counter = field(default_factory=Counter)
    qgrams_to_remove: Counter = field(default_factory=Counter)


def local_edit(text: bytes, q: int, i: int, delete_len: int, insert: bytes) -> LocalEdit:
    """Cut the neighbourhood of an edit out of a plain text."""
    a = max(1, i - q + 1)
    e = i + delete_len
    return LocalEdit(a, text[a - 1 : i - 1], text[i - 1 : e - 1], bytes(insert), text[e - 1 : e - 1 + q - 1])


def splice_window(text: bytes, q: int, i: int, delete_len: int, insert: bytes) -> tuple[int, list[bytes], list[bytes]]:
    """Region of ``T_q`` changed by an edit, as (start, old windows, new windows).

    Applying ``T_q[start-1 : start-1+len(old)] = leaves(new)`` to the old
    transform yields the transform of the edited text.
    """
    check_text(text)
    if delete_len < 0 or i < 1 or i + delete_len > len(text):
        raise IndexError("edit range out of bounds")
    loc = local_edit(text, q, i, delete_len, insert)
    old, new = loc.windows(q)
    return loc.start, old, new


def transform_naive(text: bytes, x: QTst) -> list[int]:
    """Window-by-window leaf lookup; the reference for `QTst.transform`."""
    return [x.leaf(w) for w in windows(text, x.q)]


def pattern_windows(pattern: Sequence, q: int) -> list:
    return [pattern[i : i + q] for i in range(len(pattern) - q + 1)]


__all__ = [
    "QTst",
    "Locus",
    "LocalEdit",
    "EditPlan",
    "build_tst",
    "qgram_set",
    "windows",
    "local_edit",
    "splice_window",
    "transform_naive",
]

"""Dynamic compact trie with explicit edge labels, suffix links and subtree counts.

The stored string set must be prefix-free (no stored string is a proper
prefix of another); every stored string therefore ends at a leaf.  This
holds for the q-gram sets of sentinel-terminated texts.

Nodes are addressed by integer handles that stay valid until the node is
removed.  A position that may fall inside a compacted edge is a `Locus`:
the lowest explicit node at or below the position plus the string depth.
"""
from __future__ import annotations

from typing import Iterator, NamedTuple, Optional, Union

from . import _codec


class Locus(NamedTuple):
    node: int
    depth: int


class TrieNode:
    __slots__ = (
        "handle",
        "parent",
        "label",
        "children",
        "count",
        "depth",
        "key",
        "alive",
        "slink_node",
        "slink_depth",
    )

    def __init__(self, handle: int, parent: Optional[TrieNode], label: bytes, depth: int):
        self.handle = handle
        self.parent = parent
        self.label = label
        self.children: dict[int, TrieNode] = {}
        self.count = 0
        self.depth = depth
        self.key: Optional[bytes] = None  # full string, leaves only
        self.alive = True
        self.slink_node: Optional[TrieNode] = None
        self.slink_depth = 0

    @property
    def is_leaf(self) -> bool:
        return self.key is not None

    def __repr__(self):
        return f"TrieNode({self.handle}, label={self.label!r}, count={self.count})"


NodeRef = Union[int, Locus]


class CompactTrie:
    def __init__(self):
        self._next = 0
        self.root = self._new_node(None, b"", 0)
        self.nodes: dict[int, TrieNode] = {self.root.handle: self.root}

    def _new_node(self, parent, label, depth) -> TrieNode:
        node = TrieNode(self._next, parent, label, depth)
        self._next += 1
        return node

    # ------------------------------------------------------------ navigation

    def node(self, handle: int) -> TrieNode:
        node = self.nodes.get(handle)
        if node is None:
            raise KeyError(f"stale or unknown trie handle {handle}")
        return node

    def _resolve(self, u: NodeRef) -> tuple[TrieNode, int]:
        if isinstance(u, Locus):
            return self.node(u.node), u.depth
        node = self.node(u)
        return node, node.depth

    def _descend(self, s: bytes, start: TrieNode | None = None, done: int = 0) -> Optional[tuple[TrieNode, int]]:
        """Walk ``s`` from an explicit node; returns (lower explicit node, depth)."""
        node = start if start is not None else self.root
        pos = done
        n = len(s)
        while pos < n:
            ch = node.children.get(s[pos])
            if ch is None:
                return None
            lab = ch.label
            take = min(len(lab), n - pos)
            if s[pos : pos + take] != lab[:take]:
                return None
            pos += take
            node = ch
        return node, n

    def locus(self, s: bytes) -> Optional[Locus]:
        found = self._descend(bytes(s))
        if found is None:
            return None
        node, depth = found
        return Locus(node.handle, depth)

    def path(self, u: NodeRef) -> bytes:
        node, depth = self._resolve(u)
        if node.key is not None:
            return node.key[:depth]
        parts = []
        cur = node
        while cur is not None:
            parts.append(cur.label)
            cur = cur.parent
        return b"".join(reversed(parts))[:depth]

    def expl(self, u: NodeRef) -> int:
        return self._resolve(u)[0].handle

    def child(self, u: NodeRef, c: int) -> Optional[Locus]:
        node, depth = self._resolve(u)
        if depth < node.depth:
            # inside the edge into ``node``
            off = depth - (node.depth - len(node.label))
            if node.label[off] != c:
                return None
            return Locus(node.handle, depth + 1)
        ch = node.children.get(c)
        if ch is None:
            return None
        return Locus(ch.handle, depth + 1)

    def slink(self, u: NodeRef) -> Optional[Locus]:
        node, depth = self._resolve(u)
        if depth == 0:
            return None
        if node.key is not None and depth == node.depth:
            return self._leaf_slink(node)
        return self.locus(self.path(u)[1:])

    def _leaf_slink(self, leaf: TrieNode) -> Optional[Locus]:
        target = leaf.slink_node
        d = leaf.slink_depth
        if target is None or not target.alive:
            found = self._descend(leaf.key[1:])
            if found is None:
                leaf.slink_node = None
                return None
            target, d = found
            leaf.slink_node, leaf.slink_depth = target, d
        # edge splits above the cached target move the locus to a new node
        while target.parent is not None and target.parent.depth >= d:
            target = target.parent
        leaf.slink_node = target
        return Locus(target.handle, d)

    def leave(self, s: bytes) -> list[int]:
        loc = self.locus(s)
        if loc is None:
            return []
        return [n.handle for n in self._leaves_below(self.node(loc.node))]

    def _leaves_below(self, node: TrieNode) -> Iterator[TrieNode]:
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur.key is not None:
                yield cur
            else:
                stack.extend(cur.children[c] for c in sorted(cur.children, reverse=True))

    def leaves(self) -> list[int]:
        return [n.handle for n in self._leaves_below(self.root)]

    def count(self, s: bytes) -> int:
        """Total multiplicity of stored strings having ``s`` as a prefix."""
        loc = self.locus(s)
        return 0 if loc is None else self.nodes[loc.node].count

    def leaf_of(self, s: bytes) -> Optional[int]:
        found = self._descend(bytes(s))
        if found is None:
            return None
        node, depth = found
        if node.key is None or depth != node.depth:
            return None
        return node.handle

    # ------------------------------------------------------------ updates

    def insert_string(self, k: bytes, multiplicity: int = 1) -> int:
        k = bytes(k)
        if not k:
            raise ValueError("cannot insert the empty string")
        if multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        node = self.root
        pos = 0
        n = len(k)
        while True:
            if pos == n:
                if node.key is None:
                    raise ValueError(f"{k!r} is a proper prefix of a stored string")
                break
            if node.key is not None:
                raise ValueError(f"stored string {node.key!r} is a proper prefix of {k!r}")
            ch = node.children.get(k[pos])
            if ch is None:
                leaf = self._new_node(node, k[pos:], n)
                leaf.key = k
                node.children[k[pos]] = leaf
                self.nodes[leaf.handle] = leaf
                node = leaf
                break
            lab = ch.label
            lcp = 0
            lim = min(len(lab), n - pos)
            while lcp < lim and lab[lcp] == k[pos + lcp]:
                lcp += 1
            if lcp == len(lab):
                node = ch
                pos += lcp
                continue
            if pos + lcp == n:
                raise ValueError(f"{k!r} is a proper prefix of a stored string")
            mid = self._new_node(node, lab[:lcp], node.depth + lcp)
            mid.count = ch.count
            node.children[k[pos]] = mid
            ch.label = lab[lcp:]
            ch.parent = mid
            mid.children[ch.label[0]] = ch
            self.nodes[mid.handle] = mid
            leaf = self._new_node(mid, k[pos + lcp :], n)
            leaf.key = k
            mid.children[k[pos + lcp]] = leaf
            self.nodes[leaf.handle] = leaf
            node = leaf
            break
        cur = node
        while cur is not None:
            cur.count += multiplicity
            cur = cur.parent
        return node.handle

    def remove_string(self, k: bytes, multiplicity: int = 1) -> None:
        handle = self.leaf_of(k)
        if handle is None:
            raise KeyError(f"{bytes(k)!r} is not stored")
        leaf = self.nodes[handle]
        if leaf.count < multiplicity:
            raise ValueError(f"count underflow removing {bytes(k)!r}")
        cur = leaf
        while cur is not None:
            cur.count -= multiplicity
            cur = cur.parent
        if leaf.count:
            return
        parent = leaf.parent
        del parent.children[leaf.label[0]]
        self._kill(leaf)
        if parent is not self.root and len(parent.children) == 1:
            (only,) = parent.children.values()
            only.label = parent.label + only.label
            only.parent = parent.parent
            parent.parent.children[only.label[0]] = only
            self._kill(parent)

    def _kill(self, node: TrieNode) -> None:
        node.alive = False
        node.slink_node = None
        del self.nodes[node.handle]

    # ------------------------------------------------------------ inspection

    def strings(self) -> dict[bytes, int]:
        return {n.key: n.count for n in self._leaves_below(self.root)}

    def shape(self, node: TrieNode | None = None):
        """Handle-free canonical form: (label, count, children...) in symbol order."""
        node = node or self.root
        return (node.label, node.count, tuple(self.shape(node.children[c]) for c in sorted(node.children)))

    def explicit_count(self) -> int:
        return len(self.nodes)

    def implicit_count(self) -> int:
        return sum(len(n.label) - 1 for n in self.nodes.values() if n is not self.root)

    def check(self) -> None:
        """Assert structural invariants; used by tests."""
        for n in self.nodes.values():
            if n.key is None:
                assert n is self.root or len(n.children) >= 2, f"unary internal node {n}"
                assert n.count == sum(c.count for c in n.children.values()), f"count mismatch at {n}"
            else:
                assert not n.children and n.count > 0 and n.depth == len(n.key)
            for c, ch in n.children.items():
                assert ch.parent is n and ch.label[0] == c and ch.depth == n.depth + len(ch.label)

    def to_dot(self) -> str:
        lines = ["digraph trie {"]
        stack = [self.root]
        while stack:
            node = stack.pop()
            shape = "box" if node.key is not None else "ellipse"
            lines.append(f'  n{node.handle} [shape={shape}, label="{node.count}"];')
            for c in sorted(node.children):
                ch = node.children[c]
                lines.append(f'  n{node.handle} -> n{ch.handle} [label="{_escape(ch.label)}"];')
            stack.extend(node.children[c] for c in sorted(node.children, reverse=True))
        lines.append("}")
        return "\n".join(lines) + "\n"


    # ------------------------------------------------------------ serialization

    def write(self, w: "_codec.Writer") -> None:
        """Preorder dump with handles, so leaf handles survive a round trip."""
        w.uint(self._next)
        w.uint(len(self.nodes))
        stack = [self.root]
        while stack:
            node = stack.pop()
            w.uint(node.handle)
            w.raw(node.label)
            w.uint(1 if node.key is not None else 0)
            w.uint(node.count if node.key is not None else 0)
            w.uint(len(node.children))
            stack.extend(node.children[c] for c in sorted(node.children, reverse=True))

    @classmethod
    def read(cls, rd: "_codec.Reader") -> "CompactTrie":
        t = cls()
        t.nodes.clear()
        nxt = rd.uint()
        total = rd.uint()
        # (parent, remaining children) frames mirror the preorder
        frames: list[list] = []
        for _ in range(total):
            handle = rd.uint()
            label = rd.raw()
            is_leaf = rd.uint()
            count = rd.uint()
            nkids = rd.uint()
            parent = frames[-1][0] if frames else None
            depth = (parent.depth if parent else 0) + len(label)
            node = TrieNode(handle, parent, label, depth)
            if handle in t.nodes:
                raise ValueError(f"duplicate trie handle {handle}")
            t.nodes[handle] = node
            if parent is None:
                t.root = node
            else:
                if not label or label[0] in parent.children:
                    raise ValueError("malformed trie edge")
                parent.children[label[0]] = node
                frames[-1][1] -= 1
                if frames[-1][1] == 0:
                    frames.pop()
            if is_leaf:
                node.count = count
                node.key = t.path(handle)
            if nkids:
                frames.append([node, nkids])
        if frames or len(t.nodes) != total:
            raise ValueError("truncated trie")
        t._next = nxt
        t._fill_counts(t.root)
        return t

    def _fill_counts(self, root: TrieNode) -> None:
        order = []
        stack = [root]
        while stack:
            node = stack.pop()
            order.append(node)
            stack.extend(node.children.values())
        for node in reversed(order):
            if node.key is None:
                node.count = sum(ch.count for ch in node.children.values())


def _escape(label: bytes) -> str:
    out = []
    for b in label:
        if b == 0:
            out.append("$")
        elif 33 <= b < 127 and chr(b) not in '"\\':
            out.append(chr(b))
        else:
            out.append(f"\\\\x{b:02x}")
    return "".join(out)

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tstindex.trie import CompactTrie, Locus
from tstindex import _codec

# windows of the running text with q = 4, sentinel written as "$"
RUN_WINDOWS = {
    "A": "$",
    "B": "ab$",
    "C": "abab",
    "D": "abba",
    "E": "b$",
    "F": "bab$",
    "G": "baba",
    "H": "babb",
    "I": "bbab",
}
# preorder numbering of the uncompacted trie's internal positions
NUMBERED = {1: "", 2: "a", 3: "ab", 4: "aba", 5: "abb", 6: "b", 7: "ba", 8: "bab", 9: "bb", 10: "bba"}


def enc(s: str) -> bytes:
    return s.replace("$", "\x00").encode()


@pytest.fixture
def run_trie():
    t = CompactTrie()
    for key in RUN_WINDOWS.values():
        t.insert_string(enc(key))
    leaf = {name: t.leaf_of(enc(key)) for name, key in RUN_WINDOWS.items()}
    num = {k: t.locus(enc(v)) for k, v in NUMBERED.items()}
    return t, leaf, num


def test_run_trie_shape(run_trie):
    t, leaf, num = run_trie
    t.check()
    assert len(t.leaves()) == 9
    # explicit: root, ab, b, bab plus nine leaves
    assert t.explicit_count() == 13
    implicit = [k for k, loc in num.items() if t.nodes[loc.node].depth != loc.depth]
    assert implicit == [2, 4, 5, 7, 9, 10]


def test_run_trie_path_and_locus(run_trie):
    t, leaf, num = run_trie
    assert t.path(t.root.handle) == b""
    assert t.path(num[3]) == b"ab"
    assert t.locus(b"baba") == Locus(leaf["G"], 4)
    assert t.locus(b"") == Locus(t.root.handle, 0)
    assert t.locus(b"zz") is None
    assert t.path(t.locus(b"bab")) == b"bab"


def test_run_trie_leave(run_trie):
    t, leaf, num = run_trie
    assert set(t.leave(b"b")) == {leaf[x] for x in "EFGHI"}
    assert set(t.leave(b"ab")) == {leaf[x] for x in "BCD"}
    assert set(t.leave(b"")) == set(leaf.values())
    assert t.leave(b"abz") == []


def test_run_trie_child_slink_expl(run_trie):
    t, leaf, num = run_trie
    assert t.child(num[5], ord("a")) == Locus(leaf["D"], 4)
    assert t.child(t.root.handle, ord("z")) is None
    assert t.child(leaf["C"], ord("a")) is None
    assert t.slink(num[4]) == num[7]
    assert t.slink(t.root.handle) is None
    assert t.expl(num[4]) == leaf["C"]
    assert t.expl(num[3]) == num[3].node
    for name in RUN_WINDOWS:
        u = leaf[name]
        target = t.slink(u)
        assert target == t.locus(t.path(u)[1:])


def test_counts_and_multiplicity():
    t = CompactTrie()
    h = t.insert_string(b"abc")
    before = t.explicit_count()
    assert t.insert_string(b"abc") == h
    assert t.explicit_count() == before
    t.remove_string(b"abc")
    assert t.count(b"ab") == 1
    t.remove_string(b"abc")
    assert t.leave(b"abc") == []
    with pytest.raises(KeyError):
        t.remove_string(b"abc")


def test_prefix_freedom_is_enforced():
    t = CompactTrie()
    t.insert_string(b"abc")
    with pytest.raises(ValueError):
        t.insert_string(b"ab")
    with pytest.raises(ValueError):
        t.insert_string(b"abcd")
    with pytest.raises(ValueError):
        t.remove_string(b"abc", 2)


def test_leaf_slink_survives_splits_and_merges():
    t = CompactTrie()
    a = t.insert_string(b"xabc")
    t.insert_string(b"abd\x00")
    t.insert_string(b"abce")
    assert t.slink(a) == t.locus(b"abc")
    t.insert_string(b"abcf")  # makes "abc" explicit
    assert t.slink(a) == t.locus(b"abc")
    t.remove_string(b"abcf")
    t.remove_string(b"abce")
    assert t.slink(a) == t.locus(b"abc")


def test_dot_golden(run_trie):
    t, _, _ = run_trie
    dot = t.to_dot()
    assert dot.startswith("digraph trie {\n")
    assert dot.count("->") == t.explicit_count() - 1
    assert dot.count("shape=box") == 9
    assert '[label="ab"]' in dot and '[label="$"]' in dot
    assert dot == _run_trie_dot()


def _run_trie_dot():
    return (
        "digraph trie {\n"
        '  n0 [shape=ellipse, label="9"];\n'
        '  n0 -> n1 [label="$"];\n'
        '  n0 -> n3 [label="ab"];\n'
        '  n0 -> n7 [label="b"];\n'
        '  n1 [shape=box, label="1"];\n'
        '  n3 [shape=ellipse, label="3"];\n'
        '  n3 -> n2 [label="$"];\n'
        '  n3 -> n4 [label="ab"];\n'
        '  n3 -> n5 [label="ba"];\n'
        '  n2 [shape=box, label="1"];\n'
        '  n4 [shape=box, label="1"];\n'
        '  n5 [shape=box, label="1"];\n'
        '  n7 [shape=ellipse, label="5"];\n'
        '  n7 -> n6 [label="$"];\n'
        '  n7 -> n9 [label="ab"];\n'
        '  n7 -> n12 [label="bab"];\n'
        '  n6 [shape=box, label="1"];\n'
        '  n9 [shape=ellipse, label="3"];\n'
        '  n9 -> n8 [label="$"];\n'
        '  n9 -> n10 [label="a"];\n'
        '  n9 -> n11 [label="b"];\n'
        '  n8 [shape=box, label="1"];\n'
        '  n10 [shape=box, label="1"];\n'
        '  n11 [shape=box, label="1"];\n'
        '  n12 [shape=box, label="1"];\n'
        "}\n"
    )


keys = st.lists(st.text(alphabet="ab", min_size=1, max_size=5).map(str.encode), max_size=25)


def _prefix_free(strings):
    # terminate each key so the set is prefix-free
    return [s + b"\x00" for s in strings]


@settings(max_examples=150, deadline=None)
@given(keys, st.randoms(use_true_random=False))
def test_matches_rebuild_from_multiset(raw, rnd):
    items = _prefix_free(raw)
    t = CompactTrie()
    live = Counter()
    for k in items:
        t.insert_string(k)
        live[k] += 1
        if live and rnd.random() < 0.4:
            victim = rnd.choice(sorted(live))
            t.remove_string(victim)
            live[victim] -= 1
            live += Counter()
        t.check()
    fresh = CompactTrie()
    for k in sorted(live):
        fresh.insert_string(k, live[k])
    assert t.shape() == fresh.shape()
    assert t.strings() == dict(live)
    for k in live:
        assert t.path(t.locus(k)) == k
        u = t.leaf_of(k)
        assert t.slink(u) == t.locus(k[1:]) or len(k) == 1


def test_serialization_keeps_handles(run_trie):
    t, leaf, _ = run_trie
    t.remove_string(enc("abba"))
    w = _codec.Writer()
    t.write(w)
    back = CompactTrie.read(_codec.Reader(w.getvalue()))
    assert back.shape() == t.shape()
    assert {k: back.leaf_of(k) for k in back.strings()} == {k: t.leaf_of(k) for k in t.strings()}
    w2 = _codec.Writer()
    back.write(w2)
    assert w2.getvalue() == w.getvalue()
    back.check()

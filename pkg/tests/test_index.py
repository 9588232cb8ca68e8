import random

import pytest

from tstindex.index import TstIndex, build_index
from tstindex.oracle import ShadowText, check_all, gen_repetitive, naive_locate, random_edit
from tstindex.signature import CapacityError
from tstindex.tst import build_tst

RUN = b"babababbabab\x00"


@pytest.fixture
def run_index():
    return build_index(RUN, 4, 64)


def test_running_example_queries(run_index):
    ix = run_index
    assert ix.locate(b"ab") == [2, 4, 6, 9, 11]
    assert ix.count(b"ab") == 5
    assert ix.locate(b"babab") == [1, 3, 8]
    assert ix.count(b"babab") == 3
    assert ix.count(b"z") == 0 and ix.locate(b"z") == []
    assert ix.extract(8, 5) == b"babab"
    assert ix.text() == RUN
    assert b"".join(ix.extract(i, 1) for i in range(1, len(RUN) + 1)) == RUN


def test_running_example_transform(run_index):
    ix = run_index
    names = {ix.tst.leaf(k.replace(b"$", b"\x00")): n for n, k in zip(
        "ABCDEFGHI", [b"$", b"ab$", b"abab", b"abba", b"b$", b"bab$", b"baba", b"babb", b"bbab"])}
    assert "".join(names[h] for h in ix.grammar.expand()) == "GCGCHDIGCFBEA"


def test_short_locate_is_union_of_leaf_occurrences(run_index):
    ix = run_index
    for p in (b"a", b"b", b"ab", b"bab", b"abab"):
        union = sorted(x for leaf in ix.tst.trie.leave(p) for x in ix.grammar.cocc(leaf))
        assert ix.locate(p) == union


def test_sentinel_only_text():
    ix = build_index(b"\x00", 4)
    assert ix.tst.leaf_count() == 1
    assert ix.grammar.length == 1
    assert ix.count(b"a") == 0
    ix.insert(1, b"ab")
    assert ix.text() == b"ab\x00"


def test_bad_arguments(run_index):
    with pytest.raises(ValueError):
        run_index.count(b"")
    with pytest.raises(ValueError):
        run_index.locate(b"a\x00")
    with pytest.raises(ValueError):
        build_index(b"ab\x00", 1)
    with pytest.raises(ValueError):
        build_index(b"ab", 2)
    with pytest.raises(CapacityError):
        build_index(b"abc\x00", 2, capacity=2)
    with pytest.raises(IndexError):
        run_index.extract(13, 2)
    with pytest.raises(IndexError):
        run_index.delete(12, 2)
    with pytest.raises(IndexError):
        run_index.insert(14, b"a")


@pytest.mark.parametrize("q", [2, 3, 4, 8])
def test_dispatch_paths_agree_at_m_equal_q(q):
    text = gen_repetitive(200, 6, 0.02, q)
    ix = build_index(text, q)
    rng = random.Random(q)
    for _ in range(60):
        a = rng.randrange(len(text) - q)
        p = text[a : a + q]
        if 0 in p:
            continue
        assert ix.locate(p) == ix.locate(p, force_long=True) == naive_locate(p, text)
        assert ix.count(p) == ix.count(p, force_long=True)


@pytest.mark.parametrize("static", [False, True])
@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_fresh_index_matches_oracle(q, static):
    text = gen_repetitive(300, 8, 0.01, 10 + q)
    ix = build_index(text, q, static=static)
    rep = check_all(ix, ShadowText(text), patterns=150, seed=q)
    assert rep.ok, rep
    ix.check()


def test_rolling_transform_matches_build_path():
    text = gen_repetitive(500, 4, 0.05, 3)
    ix = build_index(text, 6)
    assert ix.grammar.expand() == ix.tst.transform(text)


def test_edit_sequence_matches_oracle_and_fresh_build():
    text = gen_repetitive(400, 5, 0.01, 8)
    ix = build_index(text, 4)
    shadow = ShadowText(text)
    rng = random.Random(8)
    for step in range(120):
        op, i, arg = random_edit(shadow, rng, max_len=20)
        getattr(ix, op)(i, arg)
        getattr(shadow, op)(i, arg)
        if step % 10 == 0:
            rep = check_all(ix, shadow, patterns=40, seed=step)
            assert rep.ok, rep
    ix.check()
    fresh = build_tst(shadow.bytes(), 4)
    assert ix.tst.shape() == fresh.shape()


def test_insert_then_delete_restores_answers(run_index):
    ix = run_index
    before = {p: ix.locate(p) for p in (b"ab", b"babab", b"bb", b"abba")}
    ix.insert(5, b"abbbab")
    ix.delete(5, 6)
    assert {p: ix.locate(p) for p in before} == before
    assert ix.text() == RUN


def test_edit_just_before_sentinel(run_index):
    ix = run_index
    ix.insert(13, b"ba")
    assert ix.text() == b"babababbababba\x00"
    ix.delete(13, 2)
    assert ix.text() == RUN
    ix.check()


def test_capacity_bounds_growth():
    ix = build_index(b"ab\x00", 2, capacity=5)
    ix.insert(1, b"a")
    ix.insert(1, b"b")
    with pytest.raises(CapacityError):
        ix.insert(1, b"c")
    assert ix.text() == b"baab\x00"


def test_recovery_rebuild_on_internal_error(run_index, monkeypatch):
    from tstindex.signature import GrammarError, SignatureGrammar

    def boom(self, *a, **k):
        raise GrammarError("forced")

    monkeypatch.setattr(SignatureGrammar, "splice", boom)
    run_index.insert(3, b"bb")
    monkeypatch.undo()
    assert run_index.text() == b"babbbababbabab\x00"
    run_index.check()


def test_stats(run_index):
    st = run_index.stats()
    assert st["N"] == 13 and st["qgrams"] == 9 and st["sigma"] == 3
    assert st["w_prime"] == run_index.grammar.size()
    assert st["explicit_nodes"] == 13


def test_save_load_round_trip(tmp_path):
    text = gen_repetitive(300, 4, 0.01, 9)
    ix = build_index(text, 4)
    ix.insert(10, b"acgtacgt")
    path = tmp_path / "x.idx"
    ix.save(str(path))
    back = TstIndex.load(str(path))
    assert back.to_bytes() == ix.to_bytes()
    sh = ShadowText(ix.text())
    assert check_all(back, sh, patterns=60).ok
    back.check()


def test_identical_builds_are_bit_identical():
    text = gen_repetitive(500, 3, 0.05, 1)
    assert build_index(text, 8).to_bytes() == build_index(text, 8).to_bytes()


def test_load_rejects_corruption(run_index):
    data = bytearray(run_index.to_bytes())
    data[len(data) // 2] ^= 1
    with pytest.raises(ValueError):
        TstIndex.from_bytes(bytes(data))
    with pytest.raises(ValueError):
        TstIndex.from_bytes(b"nope")

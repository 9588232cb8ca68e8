import pytest
from hypothesis import given
from hypothesis import strategies as st

from tstindex.strings import (
    check_text,
    delete_str,
    insert_str,
    lz77,
    lz77_strings,
    make_text,
    occ_naive,
    rle,
    rle_expand,
)

RUN = b"babababbabab\x00"


def test_make_text_appends_sentinel():
    assert make_text(b"ab") == b"ab\x00"
    assert make_text(b"") == b"\x00"
    with pytest.raises(ValueError):
        make_text(b"a\x00b")


@pytest.mark.parametrize("bad", [b"", b"ab", b"a\x00b\x00", b"\x00\x00"])
def test_check_text_rejects(bad):
    with pytest.raises(ValueError):
        check_text(bad)


def test_insert_examples():
    assert insert_str(b"ab\x00", 2, b"xy") == b"axyb\x00"
    assert insert_str(b"ab\x00", 3, b"c") == b"abc\x00"
    assert insert_str(b"ab\x00", 1, b"") == b"ab\x00"
    with pytest.raises(IndexError):
        insert_str(b"ab\x00", 4, b"c")
    with pytest.raises(ValueError):
        insert_str(b"ab\x00", 1, b"\x00")


def test_delete_removes_exactly_k():
    assert delete_str(b"abcd\x00", 2, 2) == b"ad\x00"
    assert delete_str(b"abcd\x00", 4, 1) == b"abc\x00"
    assert delete_str(b"abcd\x00", 5, 0) == b"abcd\x00"
    with pytest.raises(IndexError):
        delete_str(b"abcd\x00", 4, 2)  # would remove the sentinel
    with pytest.raises(ValueError):
        delete_str(b"abcd\x00", 1, -1)


@given(st.binary(max_size=30).map(lambda b: b.replace(b"\x00", b"x")), st.data())
def test_insert_delete_round_trip(raw, data):
    t = make_text(raw)
    i = data.draw(st.integers(1, len(t)))
    k = data.draw(st.binary(max_size=10).map(lambda b: b.replace(b"\x00", b"y")))
    assert delete_str(insert_str(t, i, k), i, len(k)) == t


def test_occ_naive_running_example():
    assert occ_naive(b"ab", RUN) == [2, 4, 6, 9, 11]
    assert occ_naive(b"babab", RUN) == [1, 3, 8]
    assert occ_naive(b"zz", RUN) == []
    assert occ_naive([1, 1], [1, 1, 1]) == [1, 2]


def test_rle():
    f = rle(b"aaabcc")
    assert [(chr(x.symbol), x.run_length) for x in f] == [("a", 3), ("b", 1), ("c", 2)]
    assert bytes(rle_expand(f)) == b"aaabcc"
    with pytest.raises(ValueError):
        rle(b"")


@given(st.lists(st.integers(0, 3), min_size=1, max_size=50))
def test_rle_round_trip_and_coloring(xs):
    f = rle(xs)
    assert rle_expand(f) == xs
    assert all(a.symbol != b.symbol for a, b in zip(f, f[1:]))


def test_lz77_reference_example():
    out = [s.decode() for s in lz77_strings(b"abababcabababcabababcd")]
    assert out == ["a", "b", "ab", "ab", "c", "abababc", "abababc", "d"]


def test_lz77_no_self_reference():
    assert lz77_strings(b"aaaa") == [b"a", b"a", b"aa"]
    assert len(lz77(b"a")) == 1


def _lz77_brute(s):
    out, i = [], 0
    while i < len(s):
        best = 0
        for ell in range(1, len(s) - i + 1):
            if s[i : i + ell] in s[:i]:
                best = ell
            else:
                break
        ell = max(1, best)
        out.append(s[i : i + ell])
        i += ell
    return out


@given(st.text(alphabet="ab", min_size=1, max_size=40))
def test_lz77_matches_brute_force(s):
    assert lz77_strings(s) == _lz77_brute(s)


@given(st.lists(st.integers(0, 2), min_size=1, max_size=40))
def test_lz77_factors_are_previous(xs):
    pos = 0
    for f in lz77(xs):
        assert f.start == pos + 1
        piece = xs[pos : pos + f.length]
        if not f.is_literal:
            assert occ_naive(piece, xs[:pos])
        pos += f.length
    assert pos == len(xs)

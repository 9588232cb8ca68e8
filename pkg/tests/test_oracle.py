import ast
import pathlib
import random

import pytest

import tstindex.oracle as oracle
from tstindex.index import build_index
from tstindex.oracle import ShadowText, check_all, gen_repetitive, naive_locate, random_edit, sample_patterns
from tstindex.strings import lz77


def test_naive_locate_overlapping():
    assert naive_locate(b"aa", b"aaaa\x00") == [1, 2, 3]
    assert naive_locate(b"ab", b"babababbabab\x00") == [2, 4, 6, 9, 11]


def test_gen_repetitive_determinism_and_shape():
    a = gen_repetitive(100, 5, 0.01, 3)
    assert a == gen_repetitive(100, 5, 0.01, 3)
    assert a != gen_repetitive(100, 5, 0.01, 4)
    assert len(a) == 501 and a[-1] == 0 and a.count(0) == 1
    exact = gen_repetitive(100, 5, 0.0, 3)
    assert exact[:-1] == exact[:100] * 5
    with pytest.raises(ValueError):
        gen_repetitive(10, 2, 1.5, 0)


def test_exact_copies_compress_logarithmically():
    zs = [len(lz77(gen_repetitive(200, c, 0.0, 1))) for c in (1, 4, 16, 64)]
    # a non-self-referencing copy at most doubles per factor
    assert zs[-1] - zs[0] <= 4 * 6 + 4


def test_shadow_and_random_edits_stay_valid():
    sh = ShadowText(b"abc\x00")
    rng = random.Random(1)
    for _ in range(200):
        op, i, arg = random_edit(sh, rng, max_len=5)
        getattr(sh, op)(i, arg)
        assert sh.bytes().endswith(b"\x00") and sh.bytes().count(0) == 1
    assert sh.last_edit is not None


def test_sample_patterns_cover_boundaries():
    text = b"abcdefghij\x00"
    pats = sample_patterns(text, 4, 30, random.Random(0), focus=5)
    lens = {len(p) for p in pats}
    assert {1, 3, 4, 5, 8} <= lens
    assert b"abcd" in pats and b"ghij" in pats
    assert all(0 not in p for p in pats)


def test_check_all_passes_on_fresh_index():
    text = gen_repetitive(200, 5, 0.01, 2)
    assert check_all(build_index(text, 4), ShadowText(text)).ok


def test_check_all_detects_corrupted_counts():
    text = gen_repetitive(200, 5, 0.01, 2)
    ix = build_index(text, 4)
    leaf = ix.tst.trie.nodes[ix.tst.leaf(text[:4])]
    node = leaf
    while node is not None:
        node.count += 1
        node = node.parent
    rep = check_all(ix, ShadowText(text))
    assert not rep.ok and rep.divergence == "count"


def test_check_all_detects_wrong_text():
    text = gen_repetitive(200, 5, 0.01, 2)
    ix = build_index(text, 4)
    other = bytearray(text)
    other[10] = ord("t") if other[10] != ord("t") else ord("a")
    assert not check_all(ix, ShadowText(bytes(other))).ok


def test_oracle_imports_no_index_code():
    src = pathlib.Path(oracle.__file__).read_text()
    mods = set()
    for node in ast.walk(ast.parse(src)):
        if isinstance(node, ast.ImportFrom):
            mods.add((node.level, node.module))
        elif isinstance(node, ast.Import):
            mods.update((0, a.name) for a in node.names)
    assert all(level == 0 for level, _ in mods)
    assert not any(name and name.startswith("tstindex") for _, name in mods)

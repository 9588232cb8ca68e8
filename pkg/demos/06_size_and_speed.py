"""Index size against LZ77, and trie-path vs grammar-path query times.

Run: python3 demos/06_size_and_speed.py
"""
# %% Grammar size tracks the number of LZ77 factors, not the text length.
import math
import random
import time

from tstindex.index import build_index
from tstindex.lcparse import log_star
from tstindex.oracle import gen_repetitive
from tstindex.strings import lz77

for copies in (2, 8, 32, 128):
    text = gen_repetitive(2000, copies, 0.001, seed=copies)
    n, z = len(text), len(lz77(text))
    ix = build_index(text, 8)
    w = ix.grammar.size()
    print(f"N={n:>7} z={z:>4} w'={w:>6} w'/(z(q+log N log* N))={w / (z * (8 + math.log2(n) * log_star(n))):.3f}")

# %% Counting a q-gram via subtree counts avoids enumerating occurrences.
text = gen_repetitive(20000, 50, 0.001, seed=9)
ix = build_index(text, 8)
rng = random.Random(0)
pats = [text[a : a + 8] for a in (rng.randrange(len(text) - 9) for _ in range(100))]
for label, kw in (("trie", {}), ("grammar", {"force_long": True})):
    t0 = time.perf_counter()
    for p in pats:
        ix.count(p, **kw)
    print(f"{label:>8}: {(time.perf_counter() - t0) * 1e4:.1f} us per count")

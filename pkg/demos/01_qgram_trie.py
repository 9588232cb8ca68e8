"""The q-truncated suffix tree and the transformed text.

Run: python3 demos/01_qgram_trie.py
"""
# %% Every window of length q (plus the short suffixes) becomes a trie leaf.
from tstindex import build_tst, make_text

text = make_text(b"babababbabab")
tst = build_tst(text, q=4)
for key, mult in sorted(tst.trie.strings().items()):
    shown = key.replace(bytes([0]), b"$").decode()
    print(f"{shown:>5}  x{mult}")

# %% Subtree counts answer count queries for short patterns directly.
for p in (b"ab", b"bab", b"bb"):
    print(p.decode(), "occurs", tst.trie.count(p), "times")

# %% The transform replaces each position by the handle of its window's leaf.
name = {tst.leaf(k): chr(ord("A") + i) for i, k in enumerate(sorted(tst.trie.strings()))}
tq = tst.transform(text)
print("T_q =", "".join(name[h] for h in tq))

# %% Graphviz rendering of the compact trie (pipe into `dot -Tpng`).
print(tst.trie.to_dot())

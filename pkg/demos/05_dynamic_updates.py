"""Inserting and deleting text in place, checked against a plain copy.

Run: python3 demos/05_dynamic_updates.py
"""
# %% Start from a repetitive text and keep a shadow copy for checking.
import random

from tstindex.index import build_index
from tstindex.oracle import ShadowText, check_all, gen_repetitive, random_edit

text = gen_repetitive(1000, 10, 0.01, seed=5)
ix = build_index(text, q=4)
shadow = ShadowText(text)

# %% Apply random edits; every 25th one, compare all query types.
rng = random.Random(5)
for step in range(1, 201):
    op, i, arg = random_edit(shadow, rng, max_len=30)
    getattr(ix, op)(i, arg)
    getattr(shadow, op)(i, arg)
    if step % 25 == 0:
        rep = check_all(ix, shadow, patterns=50, seed=step)
        print(f"after {step} edits: N={ix.length} rules={ix.grammar.size()} ok={rep.ok}")

# %% Compare with a fresh build of the final text.
fresh = build_index(shadow.bytes(), 4)
print("trie identical:", ix.tst.shape() == fresh.tst.shape())
print("rules live/fresh:", ix.grammar.size(), "/", fresh.grammar.size())

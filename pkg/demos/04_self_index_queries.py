"""The self-index: count, locate and extract without the plain text.

Run: python3 demos/04_self_index_queries.py
"""
# %% Index a highly repetitive text.
from tstindex.index import build_index
from tstindex.oracle import gen_repetitive

text = gen_repetitive(base_len=5000, copies=40, mutation_rate=0.001, seed=1)
ix = build_index(text, q=8)
print(ix.stats())

# %% Patterns up to q symbols use the trie; longer ones use the grammar.
short, long = text[100:106], text[100:140]
print("count short:", ix.count(short), " count long:", ix.count(long))
print("locate long:", ix.locate(long)[:5], "...")

# %% A pattern of exactly q symbols gives the same answer on both paths.
p = text[500:508]
assert ix.locate(p) == ix.locate(p, force_long=True)

# %% Extract rebuilds text from the first symbol of each window leaf.
print(ix.extract(1, 60).decode())

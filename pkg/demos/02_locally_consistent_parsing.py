"""Locally consistent parsing of colored sequences.

Run: python3 demos/02_locally_consistent_parsing.py
"""
# %% Blocks always have 2 to 4 symbols.
import numpy as np

from tstindex.lcparse import DELTA_RIGHT, delta_left, lc_blocks, tau

rng = np.random.default_rng(0)
c = 1000
seq = [int(rng.integers(1, c + 1))]
while len(seq) < 40:
    x = int(rng.integers(1, c + 1))
    if x != seq[-1]:
        seq.append(x)
blocks = lc_blocks(seq, c)
print("block lengths:", [len(b) for b in blocks])

# %% A landmark depends only on a short window around it.
dl = delta_left(c)
print(f"window: {dl} symbols to the left, {DELTA_RIGHT} to the right")
a = tau(seq, c)
for j in range(15, 25):
    for x in range(1, 30):
        if x in (seq[j - 1], seq[j], seq[j + 1]):
            continue
        mutated = seq[:j] + [x] + seq[j + 1 :]
        b = tau(mutated, c)
        changed = [i for i in range(len(seq)) if a[i] != b[i]]
        if changed:
            break
    if changed:
        break
print(f"edit at {j}; bits changed at {changed}; allowed range {j - DELTA_RIGHT}..{j + dl}")

# %% The same content parses the same way wherever it appears.
core = seq[5:35]
left = tau([7, 8, 9] + core, c)[3:]
right = tau([11, 12, 13, 14, 15, 16] + core + [1, 2], c)[6:-2]
print("interior boundaries agree:", all(left[dl:-DELTA_RIGHT] == right[dl:-DELTA_RIGHT]))

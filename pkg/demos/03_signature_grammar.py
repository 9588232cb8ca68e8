"""Signature grammars: shared subtrees, random access, occurrences, edits.

Run: python3 demos/03_signature_grammar.py
"""
# %% Build a grammar; equal blocks at a level share one variable.
from tstindex import SignatureGrammar

text = list(b"abracadabra" * 50)
g = SignatureGrammar.build(text)
print(f"{len(text)} symbols -> {g.size()} rules, height {g.height}")

# %% Random access descends the derivation tree.
print(bytes(g.extract(100, 11)))

# %% Occurrences of a symbol come from summing offsets on root paths.
print("first 'c' positions:", g.cocc(ord("c"))[:5])
print("'dabra' at:", g.core_search(list(b"dabra"))[:5], "...")

# %% Edits re-parse a small window per level and reclaim unused rules.
g.splice(10, 0, list(b"XYZ"))
g.splice(300, 50, [])
print(bytes(g.extract(1, 20)), g.length, "symbols,", g.size(), "rules")
g.check()

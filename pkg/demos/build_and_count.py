"""
Atom structures over small graphs
=================================

Build the atom structure of a few graphs, look at some atoms, and compare
the closed-form count with the enumeration.
"""

import numpy as np

from qeagraph import CopyRule, atom_count, build_eta, build_standard, mycielskian

# the one-node graph with no edges: every atom is listed
e1 = build_standard("edgeless", 1)
s = build_eta(e1, 3)
print(s)
for a in s.atoms:
    print(" ", a)

# the counts grow quickly with the graph
for name, g in [("K2", build_standard("complete", 2)), ("C5", build_standard("cycle", 5)),
                ("Grotzsch", mycielskian(build_standard("cycle", 5)))]:
    print(f"{name:9s} n=3 closed form {atom_count(g, 3):>7d}")

# enumeration agrees with the closed form
g = build_standard("path", 3)
assert atom_count(g, 4) == len(build_eta(g, 4))

# the clique copy rule forbids placing one node twice, so fewer placements are independent
# and more of them count as atoms
print("E1 clique rule:", len(build_eta(e1, 3, CopyRule.CLIQUE)), "atoms")

# partitions are stored in restricted-growth form
print(np.unique(s.rgs, axis=0))

"""
Triangle-free graphs of high chromatic number
=============================================

Iterated Mycielskians raise the chromatic number by one while keeping the
girth at four. The witness search finds the smallest one that reaches a target.
"""

from qeagraph import build_standard, chromatic_number, girth, mycielskian, search_witness

g = build_standard("complete", 2)
for k in range(4):
    print(f"M^{k}(K2): nodes={g.node_count:3d} edges={g.edge_count:3d} "
          f"chi={chromatic_number(g)} girth={girth(g)}")
    g = mycielskian(g)

w = search_witness(min_girth=4, min_chi=5, seed=1, budget=100000)
print("witness:", w.node_count, "nodes", chromatic_number(w), "colours, girth", girth(w))

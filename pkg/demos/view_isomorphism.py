"""Explicit isomorphism between the views of an S(c0) node and an S(c1) node.

Picks a tree-like pair in a random lift of the k=1 cluster-tree graph,
pairs the two radius-1 views neighbour by neighbour and prints how each
exponent bucket lined up.

Run: python3 demos/view_isomorphism.py
"""
from nodeavg.cluster import build_base_graph, build_skeleton, random_lift
from nodeavg.graph import canonical_view_hash, radius_view
from nodeavg.iso import find_isomorphism, find_treelike_pair, verify_isomorphism

cg = random_lift(build_base_graph(build_skeleton(1, 10)), 10, 3)
v0, v1 = find_treelike_pair(cg, 1, 0)
m = find_isomorphism(cg, 1, v0, v1)
print(f"pair: {v0} in S(c0), {v1} in S(c1); mapping covers {len(m)} nodes")
for ev in m.events:
    print(f"  node {ev.v} ({ev.position_v}) -> {ev.w} ({ev.position_w}): buckets {ev.len_v} vs {ev.len_w}")
print("verified:", verify_isomorphism(cg, 1, v0, v1, m))
print("hashes equal:", canonical_view_hash(radius_view(cg, v0, 1)) == canonical_view_hash(radius_view(cg, v1, 1)))

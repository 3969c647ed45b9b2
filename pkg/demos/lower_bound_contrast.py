"""Luby's MIS against the (2,2)-ruling set on a lifted cluster-tree graph.

On these graphs the nodes of S(c0) look, up to radius k, exactly like
nodes of S(c1). An MIS has to take most of S(c0), and the nodes there
pay for it in rounds. A ruling set is allowed to skip them, so its
node-averaged complexity stays low.

Run: python3 demos/lower_bound_contrast.py [lift order]
"""
import sys
from fractions import Fraction

from nodeavg.algorithms import execute
from nodeavg.cluster import build_base_graph, build_skeleton, random_lift
from nodeavg.metrics import report

q = int(sys.argv[1]) if len(sys.argv) > 1 else 4
cg = random_lift(build_base_graph(build_skeleton(1, 12)), q, 0)
g = cg.graph
s0 = cg.members(0).tolist()
print(f"lifted graph: {g.n} nodes, {g.m} edges, |S(c0)| = {len(s0)}")
print(f"{'seed':>4} {'MIS share of S(c0)':>19} {'luby avg_v':>11} {'ruling22 avg_v':>15}")
for seed in range(5):
    mis = execute("luby-mis", g, seed)
    share = Fraction(sum(mis.node_output[v] == 1 for v in s0), len(s0))
    ruling = execute("ruling22", g, seed)
    a, b = report([mis], g).avg_v, report([ruling], g).avg_v
    print(f"{seed:>4} {float(share):>19.3f} {float(a):>11.3f} {float(b):>15.3f}")

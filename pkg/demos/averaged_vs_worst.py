"""Averaged complexity stays flat while the worst case grows.

Runs the (2,2)-ruling set and the marking matching on G(n, 10/n) for
growing n and prints the node-averaged (resp. edge-averaged) rounds next
to the slowest node or edge.

Run: python3 demos/averaged_vs_worst.py
"""
from nodeavg.algorithms import execute
from nodeavg.generators import gnp
from nodeavg.metrics import report

print(f"{'n':>7} {'ruling avg_v':>13} {'worst':>6} {'matching avg_e':>15} {'worst':>6}")
for n in (1_000, 10_000, 100_000):
    g = gnp(n, 10 / n, 1)
    r = report([execute("ruling22", g, s) for s in range(5)], g)
    m = report([execute("rand-mm", g, s) for s in range(5)], g)
    print(f"{n:>7} {float(r.avg_v):>13.3f} {r.worst:>6} {float(m.avg_e):>15.3f} {m.worst:>6}")

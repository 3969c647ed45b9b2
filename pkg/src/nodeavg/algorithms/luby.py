"""Luby-style MIS: mark with probability 1/(2d), keep the top-priority marked nodes.

One iteration takes three rounds. Round 3t: drop departed neighbours,
isolated nodes join, the rest mark and announce (marked, degree, id).
Round 3t+1: a marked node with no higher-priority marked neighbour joins.
Round 3t+2: neighbours of joiners commit "out" and tell their remaining
neighbours they are gone.
"""
import numpy as np

from ..rng import uniforms
from ..sim import NODE, SELF, NodeProgram
from ._common import Recorder, higher_priority, scatter_flag

JOINED = "joined"
GONE = "gone"


class LubyMIS(NodeProgram):
    problem_kind = NODE

    def initialize(self, node, degree, stream):
        return {"id": node, "stream": stream, "ports": set(range(degree)), "marked": False, "d": 0}

    def step(self, s, rnd, inbox):
        t, phase = divmod(rnd, 3)
        if phase == 0:
            s["ports"] -= {p for p, msg in inbox.items() if msg == GONE}
            d = len(s["ports"])
            if d == 0:
                return None, {}, [(SELF, 1)]
            s["d"] = d
            s["marked"] = s["stream"].uniform(t) < 1.0 / (2 * d)
            return s, {p: (s["marked"], d, s["id"]) for p in s["ports"]}, []
        if phase == 1:
            mine = (s["d"], s["id"])
            if s["marked"] and not any(m and (d, i) > mine for m, d, i in inbox.values()):
                return None, {p: JOINED for p in s["ports"]}, [(SELF, 1)]
            return s, {}, []
        if JOINED in inbox.values():
            return None, {p: GONE for p in s["ports"]}, [(SELF, 0)]
        return s, {}, []


def luby_kernel(g, seed, max_iterations=100_000):
    """Array version of :class:`LubyMIS`; flips the same coins and gives the same trace."""
    n = g.n
    rec = Recorder(NODE, g, seed)
    alive = np.ones(n, bool)
    src, dst = g.arc_src.copy(), g.indices.copy()
    history = []
    t = 0
    while alive.any() and t < max_iterations:
        base = 3 * t
        d = np.bincount(src, minlength=n)
        iso = alive & (d == 0)
        rec.nodes(iso, 1, base)
        cand = np.flatnonzero(alive & (d > 0))
        marked = np.zeros(n, bool)
        marked[cand] = uniforms(seed, cand, t) < 1.0 / (2 * d[cand])
        both = marked[src] & marked[dst]
        lose = scatter_flag(n, src[both & higher_priority(d, src, dst)])
        joined = marked & ~lose
        covered = scatter_flag(n, dst[joined[src]])
        rec.nodes(joined, 1, base + 1)
        rec.nodes(covered, 0, base + 2)
        before = int(alive.sum())
        alive &= ~(iso | joined | covered)
        history.append((before, before - int(alive.sum())))
        keep = alive[src] & alive[dst]
        src, dst = src[keep], dst[keep]
        t += 1
    return rec.done(iterations=t, history=history)

"""Randomized (2,2)-ruling set: mark with probability 1/(d+1), delete the 2-hop ball of winners.

Four rounds per iteration. Round 4t: drop departed neighbours, mark and
announce (marked, degree, id). Round 4t+1: winners join and say so.
Round 4t+2: their neighbours commit "dominated" and pass the word on.
Round 4t+3: nodes two hops out commit "dominated" and announce they are gone.
"""
import numpy as np

from ..rng import uniforms
from ..sim import NODE, SELF, NodeProgram
from ._common import Recorder, higher_priority, scatter_flag

IN_S = "S"
DIST1 = "d1"
GONE = "gone"


class RulingSet22(NodeProgram):
    problem_kind = NODE

    def initialize(self, node, degree, stream):
        return {"id": node, "stream": stream, "ports": set(range(degree)), "marked": False, "d": 0}

    def step(self, s, rnd, inbox):
        t, phase = divmod(rnd, 4)
        if phase == 0:
            s["ports"] -= {p for p, msg in inbox.items() if msg == GONE}
            d = s["d"] = len(s["ports"])
            s["marked"] = s["stream"].uniform(t) < 1.0 / (d + 1)
            return s, {p: (s["marked"], d, s["id"]) for p in s["ports"]}, []
        if phase == 1:
            mine = (s["d"], s["id"])
            if s["marked"] and not any(m and (d, i) > mine for m, d, i in inbox.values()):
                return None, {p: IN_S for p in s["ports"]}, [(SELF, 1)]
            return s, {}, []
        if phase == 2:
            if IN_S in inbox.values():
                return None, {p: DIST1 for p in s["ports"]}, [(SELF, 0)]
            return s, {}, []
        if DIST1 in inbox.values():
            return None, {p: GONE for p in s["ports"]}, [(SELF, 0)]
        return s, {}, []


def ruling22_kernel(g, seed, max_iterations=100_000):
    """Array version of :class:`RulingSet22`."""
    n = g.n
    rec = Recorder(NODE, g, seed)
    alive = np.ones(n, bool)
    src, dst = g.arc_src.copy(), g.indices.copy()
    history = []
    t = 0
    while alive.any() and t < max_iterations:
        base = 4 * t
        d = np.bincount(src, minlength=n)
        cand = np.flatnonzero(alive)
        marked = np.zeros(n, bool)
        marked[cand] = uniforms(seed, cand, t) < 1.0 / (d[cand] + 1)
        both = marked[src] & marked[dst]
        lose = scatter_flag(n, src[both & higher_priority(d, src, dst)])
        winners = marked & ~lose
        d1 = scatter_flag(n, dst[winners[src]]) & ~winners
        d2 = scatter_flag(n, dst[d1[src]]) & ~winners & ~d1
        rec.nodes(winners, 1, base + 1)
        rec.nodes(d1, 0, base + 2)
        rec.nodes(d2, 0, base + 3)
        before = int(alive.sum())
        alive &= ~(winners | d1 | d2)
        history.append((before, before - int(alive.sum())))
        keep = alive[src] & alive[dst]
        src, dst = src[keep], dst[keep]
        t += 1
    return rec.done(iterations=t, history=history)

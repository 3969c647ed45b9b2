"""Randomized maximal matching by edge marking with probability 1/(4(du+dv)).

Four rounds per iteration. Round 4t: drop matched neighbours and send the
current degree. Round 4t+1: the smaller-id endpoint of each edge flips
the edge's coin and reports it. Round 4t+2: every node sends how many of
its edges are marked. Round 4t+3: an edge marked alone at both ends
joins; its endpoints commit all their live edges and leave.
"""
import numpy as np

from ..rng import uniforms
from ..sim import EDGE, NodeProgram
from ._common import Recorder

MATCHED = "matched"


def edge_key(t, other):
    return (t << 32) | other


class RandMaximalMatching(NodeProgram):
    problem_kind = EDGE

    def initialize(self, node, degree, stream):
        return {"id": node, "stream": stream, "ports": set(range(degree)), "nbr": {}, "marks": {}}

    def step(self, s, rnd, inbox):
        t, phase = divmod(rnd, 4)
        ports = s["ports"]
        if phase == 0:
            ports -= {p for p, msg in inbox.items() if msg == MATCHED}
            if not ports:
                return None, {}, []
            s["d"] = len(ports)
            return s, {p: (s["d"], s["id"]) for p in ports}, []
        if phase == 1:
            s["nbr"] = dict(inbox)
            s["marks"] = {}
            out = {}
            for p, (dp, idp) in inbox.items():
                if s["id"] < idp:
                    mark = s["stream"].uniform(edge_key(t, idp)) < 1.0 / (4 * (s["d"] + dp))
                    s["marks"][p] = out[p] = mark
            return s, out, []
        if phase == 2:
            s["marks"].update(inbox)
            s["c"] = sum(bool(x) for x in s["marks"].values())
            return s, {p: s["c"] for p in ports}, []
        if s["c"] == 1:
            p = next(p for p, x in s["marks"].items() if x)
            if inbox.get(p) == 1:
                commits = [(("port", q), int(q == p)) for q in sorted(ports)]
                return None, {q: MATCHED for q in ports}, commits
        return s, {}, []


def rand_mm_kernel(g, seed, max_iterations=100_000):
    """Array version of :class:`RandMaximalMatching`."""
    n = g.n
    rec = Recorder(EDGE, g, seed)
    eid = np.arange(g.m)
    u, v = g.edges[:, 0].copy(), g.edges[:, 1].copy()
    history = []
    t = 0
    while eid.size and t < max_iterations:
        base = 4 * t
        d = np.bincount(u, minlength=n) + np.bincount(v, minlength=n)
        mark = uniforms(seed, u, edge_key(t, v)) < 1.0 / (4 * (d[u] + d[v]))
        c = np.bincount(u[mark], minlength=n) + np.bincount(v[mark], minlength=n)
        chosen = mark & (c[u] == 1) & (c[v] == 1)
        matched = np.zeros(n, bool)
        matched[u[chosen]] = True
        matched[v[chosen]] = True
        dead = matched[u] | matched[v]
        rec.edges(eid[dead], chosen[dead].astype(np.int64), base + 3)
        history.append((int(eid.size), int(dead.sum())))
        eid, u, v = eid[~dead], u[~dead], v[~dead]
        t += 1
    return rec.done(iterations=t, history=history)

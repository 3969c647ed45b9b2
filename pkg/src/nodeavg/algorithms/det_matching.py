"""Deterministic maximal matching by repeated rounding of the fractional matching f_e = 1/(du+dv).

With weights w_e = du+dv the fractional matching has weight |E|, so any
integral matching of weight at least |E|/10 removes at least |E|/40 edges
once its endpoints leave. The rounding step is pluggable; the default
picks edges greedily by weight. Each iteration is charged three rounds:
degree exchange, rounding, commit.
"""
from fractions import Fraction

import numpy as np

from ..errors import RounderContractError
from ..sim import EDGE
from ._common import Recorder

ROUNDS_PER_ITERATION = 3


def weight_greedy_rounder(u, v, f, w):
    """Heaviest edge first (ties by position), skipping edges that touch a matched node."""
    order = np.lexsort((np.arange(u.size), -w))
    used = set()
    chosen = []
    for i in order.tolist():
        a, b = int(u[i]), int(v[i])
        if a in used or b in used:
            continue
        used.update((a, b))
        chosen.append(i)
    return np.array(sorted(chosen), dtype=np.int64)


def check_rounding(u, v, w, chosen, m):
    """Raise unless ``chosen`` is a matching of weight at least m/10."""
    ends = np.concatenate([u[chosen], v[chosen]])
    if np.unique(ends).size != ends.size:
        raise RounderContractError("rounder returned a set of edges that is not a matching",
                                   {"edges": chosen.tolist()})
    weight = int(w[chosen].sum())
    if 10 * weight < m:
        raise RounderContractError(f"rounded weight {weight} is below |E|/10 = {Fraction(m, 10)}",
                                   {"weight": weight, "edges": m})
    return weight


def det_maximal_matching(g, rounder=weight_greedy_rounder):
    rec = Recorder(EDGE, g, 0)
    eid = np.arange(g.m)
    u, v = g.edges[:, 0].copy(), g.edges[:, 1].copy()
    history = []
    clock = 0
    while eid.size:
        d = np.bincount(u, minlength=g.n) + np.bincount(v, minlength=g.n)
        w = d[u] + d[v]
        f = 1.0 / w
        chosen = np.asarray(rounder(u, v, f, w), dtype=np.int64)
        weight = check_rounding(u, v, w, chosen, eid.size)
        matched = np.zeros(g.n, bool)
        matched[u[chosen]] = True
        matched[v[chosen]] = True
        dead = matched[u] | matched[v]
        is_chosen = np.zeros(eid.size, np.int64)
        is_chosen[chosen] = 1
        clock += ROUNDS_PER_ITERATION
        rec.edges(eid[dead], is_chosen[dead], clock)
        history.append({"edges": int(eid.size), "removed": int(dead.sum()), "weight": weight})
        eid, u, v = eid[~dead], u[~dead], v[~dead]
    return rec.done(iterations=len(history), history=history)

"""Deterministic ruling sets by repeated dominating-set halving.

Every active node with an active neighbour points at its smallest-id
active neighbour. The resulting pseudo-forest only has 2-cycles; rooting
each at its smaller node gives a forest, which is 3-coloured (Cole-Vishkin
then shift-down) and turned into an MIS by three colour sweeps. The
smaller of that MIS and its complement dominates the forest with at most
half of the nodes; everyone else commits a pointer into it and stops.
After the halving phase the survivors run the colour-reduction MIS.

Rounds per halving iteration: 2 to learn neighbour ids and parents, one
per Cole-Vishkin step, 6 for shift-down, 3 for the colour sweeps, 1 for
the MIS-or-complement choice and 1 to point into the dominating set.
"""
import math

import numpy as np

from ..errors import InputError
from ..sim import NODE
from ._common import Recorder
from .linial import mis_on_subgraph

LOG_DELTA = "logDelta"
LOGLOG_N = "loglogN"
MODES = (LOG_DELTA, LOGLOG_N)


def halving_iterations(g, mode):
    if mode == LOG_DELTA:
        return math.ceil(math.log2(g.max_degree)) if g.max_degree > 1 else 0
    if mode == LOGLOG_N:
        return math.ceil(2 * math.log2(math.log2(g.n))) if g.n > 2 else 0
    raise InputError(f"unknown ruling-set mode {mode!r}")


def cole_vishkin_steps(id_space):
    """Number of Cole-Vishkin steps that bring colours below 6, from ids below id_space."""
    bound, steps = max(id_space, 2), 0
    while bound > 6:
        bound = 2 * math.ceil(math.log2(bound))
        steps += 1
    return steps


def cole_vishkin(parent, colours, steps):
    """Proper colouring of a rooted forest with colours < 6 after ``steps`` rounds."""
    c = np.asarray(colours, dtype=np.int64).copy()
    root = parent < 0
    par = np.where(root, 0, parent)
    for _ in range(steps):
        diff = np.where(root, 1, c ^ c[par])
        low = diff & -diff
        i = np.log2(low).astype(np.int64)
        c = 2 * i + ((c >> i) & 1)
    return c


def shift_down(parent, c):
    """Reduce a proper forest colouring with colours < 6 to colours < 3 (six rounds)."""
    c = c.copy()
    root = parent < 0
    par = np.where(root, 0, parent)
    for target in (5, 4, 3):
        old = c.copy()
        c = np.where(root, np.where(old == 0, 1, 0), old[par])
        # a node's children now all carry the node's old colour
        sel = np.flatnonzero(c == target)
        for v in sel.tolist():
            banned = {int(old[v])}
            if not root[v]:
                banned.add(int(c[parent[v]]))
            c[v] = min(x for x in range(3) if x not in banned)
    return c


def forest_mis(parent, colours3):
    """MIS of the forest by sweeping colour classes 0, 1, 2."""
    k = parent.size
    nbrs = [[] for _ in range(k)]
    for v, p in enumerate(parent.tolist()):
        if p >= 0:
            nbrs[v].append(p)
            nbrs[p].append(v)
    in_set = np.zeros(k, bool)
    blocked = np.zeros(k, bool)
    for colour in range(3):
        for v in np.flatnonzero((colours3 == colour) & ~blocked).tolist():
            in_set[v] = True
            for w in nbrs[v]:
                blocked[w] = True
    return in_set


def det_ruling_set(g, mode=LOG_DELTA):
    """Deterministic (2, iterations+1)-ruling set; node outputs are pointer targets (self for members)."""
    iterations = halving_iterations(g, mode)
    rec = Recorder(NODE, g, 0)
    active = np.ones(g.n, bool)
    cv_steps = cole_vishkin_steps(g.n)
    per_iter = 2 + cv_steps + 6 + 3 + 1 + 1
    clock = 0
    history = []
    for _ in range(iterations):
        act = np.flatnonzero(active)
        local = {int(v): i for i, v in enumerate(act)}
        nbr_lists = [[w for w in g.adj[v] if active[w]] for v in act.tolist()]
        has = np.array([bool(x) for x in nbr_lists], dtype=bool)
        if not has.any():
            break
        pick = np.array([local[min(x)] if x else -1 for x in nbr_lists], dtype=np.int64)
        idx = np.flatnonzero(has)
        # 2-cycles: the smaller node becomes the root
        mutual = has & (pick >= 0) & (pick[np.where(pick >= 0, pick, 0)] == np.arange(act.size))
        parent = pick.copy()
        parent[mutual & (act < act[np.where(pick >= 0, pick, 0)])] = -1
        sub = {int(v): j for j, v in enumerate(idx)}
        fpar = np.array([sub[int(parent[i])] if parent[i] >= 0 else -1 for i in idx], dtype=np.int64)
        c6 = cole_vishkin(fpar, act[idx], cv_steps)
        c3 = shift_down(fpar, c6)
        mis = forest_mis(fpar, c3)
        dom = mis if mis.sum() <= (~mis).sum() else ~mis
        clock += per_iter
        fnbrs = [[] for _ in range(idx.size)]
        for v, p in enumerate(fpar.tolist()):
            if p >= 0:
                fnbrs[v].append(p)
                fnbrs[p].append(v)
        leave = np.flatnonzero(~dom)
        targets = [int(act[idx[min((w for w in fnbrs[j] if dom[w]), key=lambda w: act[idx[w]])]]) for j in leave.tolist()]
        rec.nodes(act[idx[leave]], targets, clock)
        history.append((int(act.size), int(act.size - leave.size)))
        active[act[idx[leave]]] = False
    survivors = np.flatnonzero(active)
    res = mis_on_subgraph(g, survivors)
    members = survivors[np.asarray(res.in_set, dtype=bool)] if survivors.size else survivors
    member_set = set(members.tolist())
    steps = np.asarray(res.commit_step, dtype=np.int64)
    for i, v in enumerate(survivors.tolist()):
        if v in member_set:
            rec.nodes([v], [v], clock + steps[i])
        else:
            target = min(w for w in g.adj[v] if w in member_set)
            rec.nodes([v], [target], clock + steps[i])
    return rec.done(iterations=iterations, history=history, halving_rounds=clock,
                    per_iteration_rounds=per_iter, mode=mode)

"""Deterministic MIS: polynomial colour reduction followed by greedy sweeps over colour classes.

Each reduction step costs one round: a node with colour c reads its
neighbours' colours, views c as a polynomial of degree <= d over GF(q)
(its base-q digits) and picks the first point x where its polynomial
differs from every neighbour's; the new colour is x*q + P_c(x). With
q > Delta*d two distinct polynomials agree on at most d points, so such
an x exists and the new colouring is proper. Steps continue while the
palette shrinks. The greedy phase then spends one round per colour class.
"""
from dataclasses import dataclass

import numpy as np

from ..sim import NODE, SELF, NodeProgram
from ._common import Recorder

JOIN = "join"


def _is_prime(x):
    if x < 2:
        return False
    i = 2
    while i * i <= x:
        if x % i == 0:
            return False
        i += 1
    return True


def next_prime(x):
    """Smallest prime strictly greater than x."""
    x += 1
    while not _is_prime(x):
        x += 1
    return x


def reduction_step(palette, max_deg):
    """Best (d, q) for one step from ``palette`` colours, or None if it would not shrink."""
    best = None
    for d in range(1, 64):
        q = next_prime(max(max_deg * d, 1))
        while q ** (d + 1) < palette:
            q = next_prime(q)
        if best is None or q < best[1]:
            best = (d, q)
        if max_deg * d > palette:
            break
    if best is None or best[1] ** 2 >= palette:
        return None
    return best


def linial_schedule(id_space, max_deg):
    """List of (d, q) steps and the final palette size."""
    steps = []
    palette = max(id_space, 1)
    while True:
        step = reduction_step(palette, max_deg)
        if step is None:
            return steps, palette
        steps.append(step)
        palette = step[1] ** 2


def _poly(c, d, q):
    coeffs = []
    for _ in range(d + 1):
        coeffs.append(c % q)
        c //= q
    return coeffs


def _eval(coeffs, x, q):
    acc = 0
    for a in reversed(coeffs):
        acc = (acc * x + a) % q
    return acc


def recolor(c, neighbour_colours, d, q):
    """New colour of a node with colour c given its neighbours' colours."""
    mine = _poly(c, d, q)
    others = [_poly(o, d, q) for o in neighbour_colours]
    for x in range(q):
        y = _eval(mine, x, q)
        if all(_eval(o, x, q) != y for o in others):
            return x * q + y
    raise AssertionError("no free evaluation point; the colouring was not proper")


@dataclass
class LinialResult:
    in_set: list
    commit_step: list
    steps: int
    palette: int
    reductions: int
    colours: list


def linial_mis(adj, ids, id_space):
    """MIS of the graph given by local adjacency lists; ``ids`` are the starting colours.

    ``commit_step[i]`` counts rounds from the start of the utility: members
    commit in the round of their colour class, the others one round after
    their first neighbour joins.
    """
    k = len(adj)
    max_deg = max((len(a) for a in adj), default=0)
    schedule, palette = linial_schedule(id_space, max_deg)
    colours = list(ids)
    for d, q in schedule:
        colours = [recolor(colours[i], [colours[j] for j in adj[i]], d, q) for i in range(k)]
    base = len(schedule)
    in_set = [False] * k
    step = [-1] * k
    order = sorted(range(k), key=lambda i: colours[i])
    for i in order:
        if step[i] >= 0:
            continue
        t = base + 1 + colours[i]
        in_set[i] = True
        step[i] = t
        for j in adj[i]:
            if step[j] < 0:
                step[j] = t + 1
    return LinialResult(in_set, step, max(step, default=0), palette, base, colours)


class LinialMIS(NodeProgram):
    """Message-passing form of :func:`linial_mis` on the whole graph.

    The schedule depends only on n and the maximum degree, which every node
    is assumed to know; ``setup`` fixes it before the run.
    """

    problem_kind = NODE

    def setup(self, g, seed):
        self.schedule, self.palette = linial_schedule(g.n, g.max_degree)

    def initialize(self, node, degree, stream):
        return {"colour": node, "degree": degree}

    def step(self, s, rnd, inbox):
        steps = len(self.schedule)
        if rnd == 0:
            return s, {p: s["colour"] for p in range(s["degree"])}, []
        if rnd <= steps:
            d, q = self.schedule[rnd - 1]
            s["colour"] = recolor(s["colour"], list(inbox.values()), d, q)
            return s, {p: s["colour"] for p in range(s["degree"])}, []
        if JOIN in inbox.values():
            return None, {}, [(SELF, 0)]
        if rnd == steps + 1 + s["colour"]:
            return None, {p: JOIN for p in range(s["degree"])}, [(SELF, 1)]
        return s, {}, []


def induced_adjacency(g, nodes):
    """Local adjacency lists of g[nodes] and the index map."""
    nodes = [int(v) for v in nodes]
    index = {v: i for i, v in enumerate(nodes)}
    adj = [[index[w] for w in g.adj[v] if w in index] for v in nodes]
    return adj, index


def mis_on_subgraph(g, nodes):
    """Run :func:`linial_mis` on g[nodes] with the graph's ids as colours."""
    nodes = np.asarray(nodes, dtype=np.int64)
    adj, _ = induced_adjacency(g, nodes)
    return linial_mis(adj, nodes.tolist(), g.n)


def linial_kernel(g, seed=0):
    """Trace of :class:`LinialMIS` computed centrally."""
    rec = Recorder(NODE, g, seed)
    res = mis_on_subgraph(g, np.arange(g.n))
    steps = np.asarray(res.commit_step, dtype=np.int64)
    flags = np.asarray(res.in_set, dtype=np.int64)
    for rnd in np.unique(steps).tolist():
        sel = np.flatnonzero(steps == rnd)
        rec.nodes(sel, flags[sel], rnd)
    return rec.done(reductions=res.reductions, palette=res.palette)

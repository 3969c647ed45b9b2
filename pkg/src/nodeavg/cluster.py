"""Cluster-tree skeletons, their base graphs, random lifts and family checks."""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConstructionInvariantError, InputError
from .graph import Graph, node_in_short_cycle
from .rng import uniforms

INTERNAL = "internal"
LEAF = "leaf"


@dataclass(frozen=True)
class SkeletonNode:
    id: int
    kind: str
    parent: int | None
    psi: int | None
    depth: int


@dataclass(frozen=True)
class SkeletonEdge:
    """Directed edge carrying the label ``coef * beta**exp``."""
    src: int
    dst: int
    coef: int
    exp: int

    def value(self, beta):
        return self.coef * beta ** self.exp


class ClusterTreeSkeleton:
    def __init__(self, k, beta, nodes, edges):
        self.k = k
        self.beta = beta
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self._edge = {(e.src, e.dst): e for e in self.edges}

    def __len__(self):
        return len(self.nodes)

    def edge(self, u, v):
        return self._edge.get((u, v))

    def out_edges(self, u):
        return [e for e in self.edges if e.src == u]

    def children(self, u):
        return [x.id for x in self.nodes if x.parent == u]

    def cluster_size(self, v):
        """``2 beta^(k+1) (beta/2)^(k+1-d(v))``."""
        k, b = self.k, self.beta
        return 2 * b ** (k + 1) * (b // 2) ** (k + 1 - self.nodes[v].depth)

    def total_size(self):
        return sum(self.cluster_size(v.id) for v in self.nodes)

    def label_table(self):
        """Arrays ``exp[a, b]`` and ``value[a, b]`` (-1 and 0 where no edge)."""
        s = len(self.nodes)
        exp = np.full((s, s), -1, dtype=np.int64)
        val = np.zeros((s, s), dtype=np.int64)
        for e in self.edges:
            exp[e.src, e.dst] = e.exp
            val[e.src, e.dst] = e.value(self.beta)
        return exp, val

    def __eq__(self, other):
        return (isinstance(other, ClusterTreeSkeleton) and self.k == other.k
                and self.beta == other.beta and self.nodes == other.nodes
                and self.edges == other.edges)

    def __repr__(self):
        return f"ClusterTreeSkeleton(k={self.k}, beta={self.beta}, nodes={len(self.nodes)})"


def _check_beta(beta):
    if not isinstance(beta, (int, np.integer)) or beta % 2:
        raise InputError(f"beta must be an even integer, got {beta!r}")
    if beta < 4:
        raise InputError("beta must be at least 4")


def build_skeleton(k, beta):
    """CT_k, numbered in construction order (internal nodes' leaves first)."""
    _check_beta(beta)
    if k < 0:
        raise InputError("k must be non-negative")
    nodes = [SkeletonNode(0, INTERNAL, None, None, 0), SkeletonNode(1, LEAF, 0, 1, 1)]
    edges = [SkeletonEdge(0, 1, 2, 0), SkeletonEdge(1, 0, 1, 1), SkeletonEdge(1, 1, 1, 1)]

    def attach(parent, j):
        nid = len(nodes)
        nodes.append(SkeletonNode(nid, LEAF, parent, j + 1, nodes[parent].depth + 1))
        edges.extend([SkeletonEdge(parent, nid, 2, j), SkeletonEdge(nid, parent, 1, j + 1),
                      SkeletonEdge(nid, nid, 1, j + 1)])

    for step in range(1, k + 1):
        internal = [x.id for x in nodes if x.kind == INTERNAL]
        leaves = [x.id for x in nodes if x.kind == LEAF]
        for v in internal:
            attach(v, step)
        for u in leaves:
            up = next(e.exp for e in edges if e.src == u and e.dst == nodes[u].parent)
            for j in range(step + 1):
                if j != up:
                    attach(u, j)
            x = nodes[u]
            nodes[u] = SkeletonNode(x.id, INTERNAL, x.parent, x.psi, x.depth)
    return ClusterTreeSkeleton(k, beta, nodes, edges)


class ClusterGraph:
    """A graph with a cluster map onto a skeleton and per-edge labels.

    ``exp_fwd[e]`` is the label exponent of edge ``e`` read from its smaller
    endpoint, ``exp_bwd[e]`` from the larger one, and ``self_flag[e]`` says
    both endpoints share a cluster.
    """

    def __init__(self, graph, skeleton, cluster_of, lift_order=1,
                 exp_fwd=None, exp_bwd=None, self_flag=None):
        self.graph = graph
        self.skeleton = skeleton
        self.cluster_of = np.asarray(cluster_of, dtype=np.int64)
        self.lift_order = lift_order
        if exp_fwd is None:
            exp_fwd, exp_bwd, self_flag = derive_labels(graph, skeleton, self.cluster_of)
        self.exp_fwd = np.asarray(exp_fwd, dtype=np.int64)
        self.exp_bwd = np.asarray(exp_bwd, dtype=np.int64)
        self.self_flag = np.asarray(self_flag, dtype=bool)

    @property
    def n(self):
        return self.graph.n

    def members(self, c):
        return np.flatnonzero(self.cluster_of == c)

    def label(self, u, v):
        """(exponent, self flag) of the edge read from u towards v."""
        e = self.graph.edge_id(u, v)
        exp = self.exp_fwd[e] if u < v else self.exp_bwd[e]
        return int(exp), bool(self.self_flag[e])

    def arc_labels(self):
        """Exponent and self flag for every CSR slot of the graph."""
        g = self.graph
        fwd = g.arc_src < g.indices
        exp = np.where(fwd, self.exp_fwd[g.arc_edge], self.exp_bwd[g.arc_edge])
        return exp, self.self_flag[g.arc_edge]

    def __repr__(self):
        return f"ClusterGraph(n={self.n}, m={self.graph.m}, k={self.skeleton.k}, beta={self.skeleton.beta}, q={self.lift_order})"


def derive_labels(graph, skeleton, cluster_of):
    """Labels implied by the skeleton; -1 marks an edge with no skeleton edge."""
    exp, _ = skeleton.label_table()
    a = cluster_of[graph.edges[:, 0]]
    b = cluster_of[graph.edges[:, 1]]
    return exp[a, b], exp[b, a], a == b


def _exact_div(a, b, what):
    if a % b:
        raise ConstructionInvariantError(f"{what}: {a} is not divisible by {b}")
    return a // b


def build_base_graph(ct, strict=True):
    """The canonical low-girth member of the family for skeleton ``ct``.

    Cluster ``v != c0`` is made of ``t`` cliques of size ``beta^psi(v)``
    with clique ``j`` matched to clique ``t/2 + j``; ``S(c0)`` is
    independent; parent and child clusters are joined group by group as
    complete bipartite blocks. ``strict=False`` skips the parameter
    hypothesis (used only to build small diagnostic instances).
    """
    k, beta = ct.k, ct.beta
    if strict and not 4 * (k + 1) < beta:
        raise InputError(f"need 2(k+1)/beta < 1/2, got k={k}, beta={beta}")
    sizes = [ct.cluster_size(v.id) for v in ct.nodes]
    offset = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    n = int(offset[-1])
    cluster_of = np.repeat(np.arange(len(sizes)), sizes)
    parts = []
    for node in ct.nodes:
        if node.parent is None:
            continue
        base, z, s = offset[node.id], sizes[node.id], beta ** node.psi
        t = _exact_div(z, s, f"clusters of node {node.id}")
        if t % 2:
            raise ConstructionInvariantError(f"odd clique count {t} in node {node.id}")
        iu, ju = np.triu_indices(s, 1)
        starts = base + s * np.arange(t)
        parts.append(np.stack([(starts[:, None] + iu).ravel(), (starts[:, None] + ju).ravel()], axis=1))
        half = np.arange(t // 2 * s)
        parts.append(np.stack([base + half, base + half + t // 2 * s], axis=1))
        # block with the parent: groups of beta^(i+1) above, 2 beta^i below
        i = ct.edge(node.parent, node.id).exp
        up, down = beta ** (i + 1), 2 * beta ** i
        pbase, pz = offset[node.parent], sizes[node.parent]
        groups = _exact_div(pz, up, f"parent groups of node {node.id}")
        if groups != _exact_div(z, down, f"child groups of node {node.id}"):
            raise ConstructionInvariantError(f"group counts differ for node {node.id}")
        g_idx = np.arange(groups)[:, None, None]
        a = pbase + g_idx * up + np.arange(up)[None, :, None]
        b = base + g_idx * down + np.arange(down)[None, None, :]
        a, b = np.broadcast_arrays(a, b)
        parts.append(np.stack([a.ravel(), b.ravel()], axis=1))
    edges = np.concatenate(parts) if parts else np.zeros((0, 2), np.int64)
    return ClusterGraph(Graph(n, edges), ct, cluster_of)


def lift_edges(graph, q, seed):
    """Edge array of an order-q random lift; node ``v`` becomes ``v*q .. v*q+q-1``.

    Each base edge gets its own Fisher-Yates permutation of the fibre,
    driven by the counter-based stream keyed by the edge id.
    """
    m = graph.m
    perm = np.tile(np.arange(q, dtype=np.int64), (m, 1))
    eids = np.arange(m)
    rows = np.arange(m)
    for i in range(q - 1, 0, -1):
        j = np.minimum((uniforms(seed, eids, i) * (i + 1)).astype(np.int64), i)
        tmp = perm[rows, i].copy()
        perm[rows, i] = perm[rows, j]
        perm[rows, j] = tmp
    u = graph.edges[:, 0][:, None] * q + np.arange(q)[None, :]
    v = graph.edges[:, 1][:, None] * q + perm
    return np.stack([u.ravel(), v.ravel()], axis=1)


def lift_graph(graph, q, seed):
    """Random lift of order q of a plain graph."""
    if q < 1:
        raise InputError("lift order must be at least 1")
    return Graph(graph.n * q, lift_edges(graph, q, seed))


def covering_violations(lifted, base, q):
    """Ways the projection ``x -> x // q`` fails to be a covering map from ``lifted`` onto ``base``.

    Checks that every lifted edge lies over a base edge and that over each
    base edge the lifted edges form a perfect matching between the fibres.
    """
    out = []
    if lifted.n != base.n * q:
        return [f"expected {base.n * q} nodes, found {lifted.n}"]
    pu, pv = lifted.edges[:, 0] // q, lifted.edges[:, 1] // q
    a, b = np.minimum(pu, pv), np.maximum(pu, pv)
    keys = base.edges[:, 0] * base.n + base.edges[:, 1]
    want = a * base.n + b
    if base.m == 0:
        over = np.full(lifted.m, -1, np.int64)
    else:
        pos = np.minimum(np.searchsorted(keys, want), base.m - 1)
        over = np.where((a != b) & (keys[pos] == want), pos, -1)
    for e in np.flatnonzero(over < 0)[:10].tolist():
        out.append(f"edge {tuple(map(int, lifted.edges[e]))} lies over no base edge")
    ok = over >= 0
    counts = np.bincount(over[ok], minlength=base.m)
    for e in np.flatnonzero(counts != q)[:10].tolist():
        out.append(f"base edge {e} has {int(counts[e])} lifted edges, expected {q}")
    # every node meets each base edge at its fibre exactly once
    x = np.concatenate([lifted.edges[ok, 0], lifted.edges[ok, 1]])
    key = x * base.m + np.concatenate([over[ok], over[ok]])
    _, mult = np.unique(key, return_counts=True)
    if (mult > 1).any():
        out.append(f"{int((mult > 1).sum())} node/base-edge pairs are covered more than once")
    if not out and lifted.m != base.m * q:
        out.append(f"expected {base.m * q} edges, found {lifted.m}")
    return out


def random_lift(cg, q, seed):
    """Random lift of a cluster graph; clusters and labels follow the fibres."""
    if q < 1:
        raise InputError("lift order must be at least 1")
    g = lift_graph(cg.graph, q, seed)
    return ClusterGraph(g, cg.skeleton, np.repeat(cg.cluster_of, q), cg.lift_order * q)


def validate_family(cg):
    """Every way ``cg`` falls short of the family; an empty list means membership.

    Entry kinds: ``count`` (wrong number of neighbours along a skeleton
    edge), ``extra`` (neighbours in a cluster with no skeleton edge),
    ``label`` (stored label disagrees with the skeleton) and
    ``label-count`` (outgoing label counts of a node are off).
    """
    g, ct = cg.graph, cg.skeleton
    s = len(ct.nodes)
    beta, k = ct.beta, ct.k
    report = []
    _, val = ct.label_table()
    dst_c = cg.cluster_of[g.indices]
    counts = np.bincount(g.arc_src * s + dst_c, minlength=g.n * s).reshape(g.n, s)
    expected = val[cg.cluster_of]
    bad_nodes, bad_clusters = np.nonzero(counts != expected)
    for u, c in zip(bad_nodes.tolist(), bad_clusters.tolist()):
        x = int(expected[u, c])
        report.append({"kind": "count" if x else "extra", "node": u,
                       "skeleton_edge": (int(cg.cluster_of[u]), c),
                       "expected": x, "found": int(counts[u, c])})
    fwd, bwd, selfs = derive_labels(g, ct, cg.cluster_of)
    wrong = (fwd != cg.exp_fwd) | (bwd != cg.exp_bwd) | (selfs != cg.self_flag)
    for e in np.flatnonzero(wrong).tolist():
        report.append({"kind": "label", "edge": e, "endpoints": tuple(map(int, g.edges[e])),
                       "expected": (int(fwd[e]), int(bwd[e]), bool(selfs[e])),
                       "found": (int(cg.exp_fwd[e]), int(cg.exp_bwd[e]), bool(cg.self_flag[e]))})
    arc_exp, _ = cg.arc_labels()
    ok = arc_exp >= 0
    per = np.bincount(g.arc_src[ok] * (k + 2) + arc_exp[ok], minlength=g.n * (k + 2)).reshape(g.n, k + 2)
    want = 2 * beta ** np.arange(k + 2)
    for c in ct.nodes:
        members = cg.members(c.id)
        if members.size == 0:
            continue
        rows = per[members]
        if c.kind == INTERNAL:
            target = np.append(want[:k + 1], 0)
            bad = np.any(rows != target, axis=1)
        else:
            hit = rows == want
            nonzero = rows != 0
            bad = ~((hit.sum(axis=1) == 1) & (nonzero.sum(axis=1) == 1))
        for u in members[bad].tolist():
            report.append({"kind": "label-count", "node": u, "cluster": c.id,
                           "found": per[u].tolist()})
    return report


class _BudgetExceeded:
    def __repr__(self):
        return "BUDGET_EXCEEDED"

    def __bool__(self):
        return False


BUDGET_EXCEEDED = _BudgetExceeded()


def independence_number_exact(g, subset, node_budget=1_000_000):
    """Exact independence number of ``g[subset]`` by branch and bound.

    The bound is the current set size plus a greedy clique cover of the
    remaining candidates. Returns :data:`BUDGET_EXCEEDED` when more than
    ``node_budget`` search nodes would be needed.
    """
    nodes = sorted({int(v) for v in subset})
    if not nodes:
        return 0
    index = {v: i for i, v in enumerate(nodes)}
    adj = [0] * len(nodes)
    for v in nodes:
        bits = 0
        for w in g.adj[v]:
            j = index.get(w)
            if j is not None:
                bits |= 1 << j
        adj[index[v]] = bits

    def cover(p):
        count = 0
        while p:
            low = p & -p
            clique = low
            cand = p & adj[low.bit_length() - 1]
            while cand:
                w = cand & -cand
                clique |= w
                cand &= adj[w.bit_length() - 1]
            p &= ~clique
            count += 1
        return count

    best = 0
    # greedy lower bound: repeatedly take the lowest-degree candidate
    p = (1 << len(nodes)) - 1
    while p:
        v = min(_bits(p), key=lambda i: bin(adj[i] & p).count("1"))
        best += 1
        p &= ~(adj[v] | (1 << v))
    visited = 0
    stack = [((1 << len(nodes)) - 1, 0)]
    while stack:
        p, size = stack.pop()
        visited += 1
        if visited > node_budget:
            return BUDGET_EXCEEDED
        if not p:
            best = max(best, size)
            continue
        if size + cover(p) <= best:
            continue
        v = max(_bits(p), key=lambda i: bin(adj[i] & p).count("1"))
        stack.append((p & ~(1 << v), size))
        stack.append((p & ~(adj[v] | (1 << v)), size + 1))
    return best


def _bits(p):
    while p:
        low = p & -p
        yield low.bit_length() - 1
        p ^= low


def cycle_stats(g, ell):
    """Exact fraction of nodes lying on a cycle of length at most ell."""
    graph = g.graph if isinstance(g, ClusterGraph) else g
    if ell < 3:
        raise InputError("ell must be at least 3")
    if graph.n == 0:
        return Fraction(0)
    hits = sum(node_in_short_cycle(graph, v, ell) is not None for v in range(graph.n))
    return Fraction(hits, graph.n)

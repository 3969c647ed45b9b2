"""Explicit view isomorphisms between nodes of S(c0) and S(c1)."""
from dataclasses import dataclass, field

import numpy as np

from .cluster import INTERNAL, ClusterGraph
from .errors import ConstructionInvariantError, InputError
from .graph import Graph, is_tree_like, radius_view


@dataclass
class MapEvent:
    """Bucket sizes seen by one Map call, with the histories of both nodes."""
    v: int
    w: int
    depth: int
    history_v: int | None
    history_w: int | None
    position_v: str
    position_w: str
    len_v: tuple
    len_w: tuple


@dataclass
class IsoMapping:
    phi: dict
    root_pair: tuple
    k: int
    events: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.phi)


def _buckets(cg, v, prev, k):
    """Neighbours of v except prev, grouped by the exponent read from v.

    Inside a bucket, same-cluster edges come first, then ascending id.
    """
    g = cg.graph
    out = [[] for _ in range(k + 2)]
    for w, e in zip(g.adj[v], g.adj_edges[v]):
        if w == prev:
            continue
        exp = int(cg.exp_fwd[e] if v < w else cg.exp_bwd[e])
        if not 0 <= exp <= k + 1:
            raise ConstructionInvariantError(f"edge ({v}, {w}) has exponent {exp} outside 0..{k + 1}")
        out[exp].append((not cg.self_flag[e], w))
    return [[w for _, w in sorted(b)] for b in out]


def _map(nv, nw, phi):
    for bv, bw in zip(nv, nw):
        for a, b in zip(bv, bw):
            phi[a] = b
    plus = [i for i in range(len(nv)) if len(nv[i]) == len(nw[i]) + 1]
    minus = [i for i in range(len(nv)) if len(nv[i]) + 1 == len(nw[i])]
    other = [i for i in range(len(nv)) if abs(len(nv[i]) - len(nw[i])) > 1]
    if not plus and not minus and not other:
        return
    if other or len(plus) != 1 or len(minus) != 1:
        raise ConstructionInvariantError(
            f"bucket sizes {[len(b) for b in nv]} vs {[len(b) for b in nw]} differ beyond one off-by-one pair")
    phi[nv[plus[0]][-1]] = nw[minus[0]][-1]


def _history(cg, z, p):
    if p is None:
        return None
    return cg.label(z, p)[0]


def _position(cg, z):
    return cg.skeleton.nodes[int(cg.cluster_of[z])].kind


def find_isomorphism(cg, k, v0, v1):
    """Pair the radius-k views of v0 in S(c0) and v1 in S(c1) node by node.

    Walks both views in lock step; at each pair the neighbours are split
    into k+2 buckets by edge exponent, zipped index by index, and the single
    allowed size mismatch is resolved by pairing the two leftover nodes.
    """
    if not isinstance(cg, ClusterGraph):
        raise InputError("find_isomorphism needs a cluster graph")
    for v in (v0, v1):
        cg.graph.check_node(v)
    if cg.cluster_of[v0] != 0 or cg.cluster_of[v1] != 1:
        raise InputError("v0 must lie in S(c0) and v1 in S(c1)")
    if not (is_tree_like(cg, v0, k) and is_tree_like(cg, v1, k)):
        raise InputError("both views must be tree-like")
    phi = {v0: v1}
    events = []
    stack = [(v0, v1, None, k)]
    while stack:
        v, w, prev, depth = stack.pop()
        if depth == 0:
            continue
        wprev = None if prev is None else phi[prev]
        nv = _buckets(cg, v, prev, k)
        nw = _buckets(cg, w, wprev, k)
        events.append(MapEvent(v, w, depth, _history(cg, v, prev), _history(cg, w, wprev),
                               _position(cg, v), _position(cg, w),
                               tuple(map(len, nv)), tuple(map(len, nw))))
        _map(nv, nw, phi)
        children = [(x, phi[x], v, depth - 1) for bucket in nv for x in bucket]
        stack.extend(reversed(children))
    return IsoMapping(phi, (v0, v1), k, events)


def verify_isomorphism(g, k, v0, v1, m):
    """True iff m maps the radius-k view of v0 bijectively and edge-exactly onto that of v1."""
    phi = m.phi if isinstance(m, IsoMapping) else m
    a = radius_view(g, v0, k)
    b = radius_view(g, v1, k)
    if phi.get(v0) != v1 or set(phi) != set(a.nodes):
        return False
    if set(phi.values()) != set(b.nodes) or len(set(phi.values())) != len(phi):
        return False
    mapped = {frozenset((phi[x], phi[y])) for x, y in a.edges}
    return mapped == {frozenset(e) for e in b.edges}


def bucket_relation_holds(event):
    """Equal bucket sizes, or one +1 and one -1 difference between two internal nodes."""
    diff = [x - y for x, y in zip(event.len_v, event.len_w)]
    if all(d == 0 for d in diff):
        return True
    return (sorted(d for d in diff if d) == [-1, 1]
            and event.position_v == INTERNAL and event.position_w == INTERNAL)


def iter_treelike_pairs(cg, k, seed):
    """Tree-like (v0, v1) pairs in a seeded order over S(c0) x S(c1), each node used once."""
    rng = np.random.default_rng(seed)
    s0 = rng.permutation(cg.members(0))
    s1 = rng.permutation(cg.members(1))
    good1 = (int(v) for v in s1 if is_tree_like(cg, int(v), k))
    for v in s0:
        v = int(v)
        if not is_tree_like(cg, v, k):
            continue
        w = next(good1, None)
        if w is None:
            return
        yield v, w


def find_treelike_pair(cg, k, seed):
    """First pair of a seeded scan whose views are both tree-like, or None."""
    return next(iter_treelike_pairs(cg, k, seed), None)


def skeleton_unfolding(ct, depth):
    """Tree realizing the skeleton's neighbour counts to the given depth around a c0 and a c1 node.

    Returns ``(cluster_graph, v0, v1)``; the two roots lie in separate
    components. Useful for exercising deeper walks than real family
    members allow at desk scale.
    """
    _, val = ct.label_table()
    cluster = []
    edges = []
    roots = []
    for c in (0, 1):
        root = len(cluster)
        cluster.append(c)
        roots.append(root)
        frontier = [(root, None)]
        for _ in range(depth):
            nxt = []
            for u, pc in frontier:
                cu = cluster[u]
                for c2 in range(len(ct.nodes)):
                    count = int(val[cu, c2]) - (1 if c2 == pc else 0)
                    for _ in range(max(count, 0)):
                        x = len(cluster)
                        cluster.append(c2)
                        edges.append((u, x))
                        nxt.append((x, cu))
            frontier = nxt
    g = Graph(len(cluster), edges)
    return ClusterGraph(g, ct, np.array(cluster)), roots[0], roots[1]

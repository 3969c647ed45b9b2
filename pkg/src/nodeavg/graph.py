"""Immutable simple graphs, radius views, short cycles and view hashing."""
from collections import deque
from functools import cached_property

import numpy as np

from .errors import ContractViolation, InputError
from .rng import MASK, mix64


class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    Edges are stored once as ``(u, v)`` with ``u < v`` in lexicographic
    order; the position in that order is the edge id. Adjacency is kept in
    CSR form with each neighbour list sorted, and ``arc_edge[p]`` is the id
    of the edge behind CSR slot ``p``.
    """

    def __init__(self, n, edges=()):
        n = int(n)
        if n < 0:
            raise InputError("node count must be non-negative")
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise InputError("edge endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise InputError("self-loops are not allowed")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        order = np.lexsort((hi, lo))
        lo, hi = lo[order], hi[order]
        if lo.size > 1:
            dup = (lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])
            if dup.any():
                i = int(np.argmax(dup))
                raise InputError(f"parallel edge ({lo[i]}, {hi[i]})")
        self.n = n
        self.m = int(lo.size)
        self.edges = np.stack([lo, hi], axis=1) if lo.size else np.zeros((0, 2), np.int64)
        eid = np.arange(self.m, dtype=np.int64)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        arc_eid = np.concatenate([eid, eid])
        order = np.lexsort((dst, src))
        self.indices = dst[order]
        self.arc_edge = arc_eid[order]
        self.degrees = np.bincount(src, minlength=n).astype(np.int64)
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=self.indptr[1:])
        for a in (self.edges, self.indices, self.arc_edge, self.degrees, self.indptr):
            a.flags.writeable = False

    @classmethod
    def from_adjacency(cls, adj):
        """Build from a list of neighbour lists (must be symmetric)."""
        pairs = {(min(u, v), max(u, v)) for u, nbrs in enumerate(adj) for v in nbrs}
        g = cls(len(adj), sorted(pairs))
        for v, nbrs in enumerate(adj):
            if len(set(nbrs)) != g.degree(v):
                raise InputError("adjacency lists are not symmetric")
        return g

    @property
    def max_degree(self):
        return int(self.degrees.max()) if self.n else 0

    def degree(self, v):
        return int(self.degrees[v])

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def adj(self):
        """Neighbour lists as plain Python lists (fast for scalar loops)."""
        return [list(map(int, a)) for a in np.split(self.indices, self.indptr[1:-1])] if self.n else []

    @cached_property
    def adj_edges(self):
        """Edge ids aligned with :attr:`adj`."""
        return [list(map(int, a)) for a in np.split(self.arc_edge, self.indptr[1:-1])] if self.n else []

    @cached_property
    def arc_src(self):
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    @cached_property
    def reverse_port(self):
        """``reverse_port[p]`` is the CSR slot of the same edge seen from the other end."""
        fwd = self.arc_src * self.n + self.indices
        rev = self.indices * self.n + self.arc_src
        return np.searchsorted(fwd, rev)

    def edge_id(self, u, v):
        if u > v:
            u, v = v, u
        nb = self.neighbors(u)
        i = int(np.searchsorted(nb, v))
        if i == nb.size or nb[i] != v:
            raise InputError(f"no edge ({u}, {v})")
        return int(self.arc_edge[self.indptr[u] + i])

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = int(np.searchsorted(nb, v))
        return i < nb.size and int(nb[i]) == v

    def edge_list(self):
        return [(int(u), int(v)) for u, v in self.edges]

    def check_node(self, v):
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n:
            raise InputError(f"invalid node id {v!r}")

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self.edges, other.edges))

    def __hash__(self):
        return hash((self.n, self.m))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class ViewTree:
    """The radius-k view of a node.

    ``nodes`` lists graph nodes in BFS order, ``dist`` maps them to their
    distance from the root and ``edges`` holds the view's edges as pairs.
    ``labels`` maps directed pairs to edge labels when the graph had any.
    Views that are not trees are kept as general graphs for diagnostics.
    """

    def __init__(self, root, k, nodes, dist, edges, labels=None):
        self.root = root
        self.k = k
        self.nodes = tuple(nodes)
        self.dist = dist
        self.edges = tuple(edges)
        self.labels = labels

    @property
    def is_tree(self):
        return len(self.edges) == len(self.nodes) - 1

    def children(self):
        """Map every view vertex to its neighbours one level further out."""
        out = {v: [] for v in self.nodes}
        for u, v in self.edges:
            if self.dist[u] + 1 == self.dist[v]:
                out[u].append(v)
            elif self.dist[v] + 1 == self.dist[u]:
                out[v].append(u)
        return out

    def __repr__(self):
        return f"ViewTree(root={self.root}, k={self.k}, nodes={len(self.nodes)}, edges={len(self.edges)})"


def _split(g):
    """Accept either a Graph or a cluster graph wrapping one."""
    if isinstance(g, Graph):
        return g, None
    return g.graph, g


def radius_view(g, v, k):
    """Nodes within distance k of v, without edges joining two distance-k nodes."""
    graph, labelled = _split(g)
    graph.check_node(v)
    if k < 0:
        raise InputError("k must be non-negative")
    adj = graph.adj
    dist = {v: 0}
    order = [v]
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if dist[u] == k:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                order.append(w)
                queue.append(w)
    edges = []
    for u in order:
        for w in adj[u]:
            if u < w and w in dist and not (dist[u] == k and dist[w] == k):
                edges.append((u, w))
    labels = None
    if labelled is not None:
        labels = {}
        for u, w in edges:
            labels[(u, w)] = labelled.label(u, w)
            labels[(w, u)] = labelled.label(w, u)
    return ViewTree(v, k, order, dist, edges, labels)


def is_tree_like(g, v, k):
    """True iff the radius-k view of v contains no cycle."""
    graph, _ = _split(g)
    graph.check_node(v)
    if k < 0:
        raise InputError("k must be non-negative")
    adj = graph.adj
    dist = {v: 0}
    parent = {v: -1}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if dist[u] == k:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
            elif w != parent[u]:
                # a second route into an already seen node closes a cycle
                return False
    return True


def node_in_short_cycle(g, v, ell):
    """Length of a shortest cycle through v if it is at most ell, else None."""
    graph, _ = _split(g)
    graph.check_node(v)
    if ell < 3:
        raise InputError("ell must be at least 3")
    adj = graph.adj
    reach = ell // 2
    dist = {v: 0}
    branch = {}
    parent = {}
    queue = deque()
    for b in adj[v]:
        dist[b] = 1
        branch[b] = b
        parent[b] = v
        queue.append(b)
    best = None
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w == v or w == parent[u]:
                continue
            if w not in dist:
                if dist[u] < reach:
                    dist[w] = dist[u] + 1
                    branch[w] = branch[u]
                    parent[w] = u
                    queue.append(w)
            elif branch[w] != branch[u]:
                length = dist[u] + dist[w] + 1
                if length <= ell and (best is None or length < best):
                    best = length
    return best


def _label_code(label):
    if label is None:
        return 0
    exp, self_flag = label
    return ((int(exp) + 1) << 1) | int(bool(self_flag))


def canonical_view_hash(view, include_labels=False):
    """64-bit digest of a tree view, blind to node ids.

    Child digests are sorted before being folded in, so the digest depends
    only on the isomorphism class of the rooted tree. With
    ``include_labels`` the edge labels in both directions are mixed into
    each child's contribution.
    """
    if not view.is_tree:
        raise ContractViolation("canonical_view_hash needs a tree view")
    if include_labels and view.labels is None:
        raise InputError("view carries no edge labels")
    children = view.children()
    digest = {}
    for u in reversed(view.nodes):
        parts = []
        for c in children[u]:
            d = digest[c]
            if include_labels:
                code = (_label_code(view.labels[(u, c)]) << 16) | _label_code(view.labels[(c, u)])
                d = mix64(d ^ mix64(code + 0x51ED27))
            parts.append(d)
        parts.sort()
        h = mix64(0x7F4A7C15 + len(parts))
        for d in parts:
            h = mix64((h * 31 + d) & MASK)
        digest[u] = h
    return digest[view.root]

"""Small deterministic graphs and seeded random models."""
import networkx as nx
import numpy as np

from .errors import InputError
from .graph import Graph


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    if n < 3:
        raise InputError("a cycle needs at least 3 nodes")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a, b):
    return Graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def gnp(n, p, seed):
    """Erdos-Renyi G(n, p): a binomial edge count, then distinct uniform pairs."""
    if n < 0 or not 0 <= p <= 1:
        raise InputError("need n >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    pairs = n * (n - 1) // 2
    if pairs == 0:
        return Graph(n)
    m = int(rng.binomial(pairs, p))
    idx = rng.choice(pairs, size=m, replace=False).astype(np.int64)
    # index k of the upper triangle, ordered by larger endpoint v
    v = ((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) // 2).astype(np.int64)
    v -= (v * (v - 1) // 2 > idx)
    v += ((v + 1) * v // 2 <= idx)
    u = idx - v * (v - 1) // 2
    return Graph(n, np.stack([u, v], axis=1))


def random_regular(n, d, seed):
    """Uniform-ish random d-regular graph (networkx pairing model)."""
    if d >= n or (n * d) % 2:
        raise InputError("need d < n and n*d even")
    h = nx.random_regular_graph(d, n, seed=seed)
    return Graph(n, list(h.edges()))


def from_networkx(h):
    mapping = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph(len(mapping), [(mapping[u], mapping[v]) for u, v in h.edges()])


def to_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edge_list())
    return h

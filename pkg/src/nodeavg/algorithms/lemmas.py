"""Exact counts of good nodes (ruling sets) and good edges (matching)."""
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

CHUNK = 512
EPS = 1e-9


def _closed_adjacency(g):
    data = np.ones(g.indices.size, dtype=np.int64)
    a = sp.csr_matrix((data, g.indices, g.indptr), shape=(g.n, g.n))
    return (a + sp.identity(g.n, dtype=np.int64, format="csr")).tocsr()


def two_hop_mass(g):
    """Float sums of p_u = 1/(d_u + 1) over the closed 2-hop ball of every node."""
    p = 1.0 / (g.degrees + 1.0)
    b = _closed_adjacency(g)
    out = np.empty(g.n)
    for lo in range(0, g.n, CHUNK):
        ball = (b[lo:lo + CHUNK] @ b).tocsr()
        ball.data[:] = 1
        out[lo:lo + CHUNK] = ball @ p
    return out, b


def good_nodes(g):
    """Boolean mask of nodes v with sum of p_u over N_2^+(v) at least 1/2.

    Sums are taken in floating point; any node within EPS of 1/2 is
    recomputed exactly with fractions.
    """
    mass, b = two_hop_mass(g)
    good = mass >= 0.5
    deg = g.degrees
    for v in np.flatnonzero(np.abs(mass - 0.5) < EPS).tolist():
        ball = set(b[v].indices.tolist())
        for w in list(ball):
            ball.update(b[w].indices.tolist())
        good[v] = sum(Fraction(1, int(deg[u]) + 1) for u in ball) >= Fraction(1, 2)
    return good


def good_matching_nodes(g):
    """Nodes with at least d_v/3 neighbours of degree at most d_v."""
    d = g.degrees
    low = np.bincount(g.arc_src, weights=(d[g.indices] <= d[g.arc_src]), minlength=g.n)
    return 3 * low.astype(np.int64) >= d


def good_edges(g):
    """Edges with at least one good endpoint."""
    good = good_matching_nodes(g)
    return good[g.edges[:, 0]] | good[g.edges[:, 1]]

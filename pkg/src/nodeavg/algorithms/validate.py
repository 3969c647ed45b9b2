"""Problem validators. Each returns a list of violation messages; empty means valid."""
from collections import deque

import numpy as np


def _bfs_from(g, sources, limit=None):
    dist = np.full(g.n, -1, np.int64)
    q = deque()
    for s in sources:
        dist[s] = 0
        q.append(s)
    while q:
        x = q.popleft()
        if limit is not None and dist[x] == limit:
            continue
        for y in g.adj[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def _missing(trace):
    if trace.timed_out or not trace.required_complete():
        return ["incomplete: some required outputs were never committed"]
    return []


def node_set(trace):
    return np.array([x == 1 for x in trace.node_output], dtype=bool)


def check_independent(g, in_set):
    u, v = g.edges[:, 0], g.edges[:, 1]
    bad = np.flatnonzero(in_set[u] & in_set[v])
    return [f"independence: adjacent members {int(u[e])} and {int(v[e])}" for e in bad[:10]]


def check_domination(g, in_set, radius):
    dist = _bfs_from(g, np.flatnonzero(in_set), radius)
    far = np.flatnonzero(dist < 0)
    return [f"domination: node {int(x)} is farther than {radius} from the set" for x in far[:10]]


def validate_mis(g, trace):
    out = _missing(trace)
    if out:
        return out
    s = node_set(trace)
    return check_independent(g, s) + check_domination(g, s, 1)


def validate_ruling22(g, trace):
    out = _missing(trace)
    if out:
        return out
    s = node_set(trace)
    return check_independent(g, s) + check_domination(g, s, 2)


def validate_pointer_ruling(g, trace, radius):
    """Outputs are pointer targets; members point at themselves."""
    out = _missing(trace)
    if out:
        return out
    target = np.asarray(trace.node_output, dtype=np.int64)
    s = target == np.arange(g.n)
    for v in np.flatnonzero(~s).tolist():
        if not g.has_edge(v, int(target[v])):
            out.append(f"pointer: node {v} points at non-neighbour {int(target[v])}")
            if len(out) >= 10:
                break
    return out + check_independent(g, s) + check_domination(g, s, radius)


def validate_matching(g, trace):
    out = _missing(trace)
    if out:
        return out
    chosen = np.array([x == 1 for x in trace.edge_output], dtype=bool)
    u, v = g.edges[:, 0], g.edges[:, 1]
    cover = np.bincount(u[chosen], minlength=g.n) + np.bincount(v[chosen], minlength=g.n)
    for x in np.flatnonzero(cover > 1)[:10]:
        out.append(f"matching: node {int(x)} has {int(cover[x])} matched edges")
    free = cover == 0
    for e in np.flatnonzero(free[u] & free[v])[:10]:
        out.append(f"maximality: edge ({int(u[e])}, {int(v[e])}) has both endpoints unmatched")
    return out


def out_degrees(g, trace):
    head = np.asarray(trace.edge_output, dtype=np.int64)
    u, v = g.edges[:, 0], g.edges[:, 1]
    tail = np.where(head == v, u, v)
    return np.bincount(tail, minlength=g.n)


def validate_sinkless(g, trace):
    out = _missing(trace)
    if out:
        return out
    head = np.asarray(trace.edge_output, dtype=np.int64)
    u, v = g.edges[:, 0], g.edges[:, 1]
    for e in np.flatnonzero((head != u) & (head != v))[:10]:
        out.append(f"orientation: edge {int(e)} has head {int(head[e])} outside its endpoints")
    deg = out_degrees(g, trace)
    for x in np.flatnonzero(deg < 1)[:10]:
        out.append(f"sinkless: node {int(x)} has out-degree 0")
    return out

"""Deterministic sinkless orientation for graphs of minimum degree 3.

Each iteration works on a level graph whose nodes stand for cluster
centres and whose edges stand for physical paths; nodes may also carry
self-loops, i.e. edges already known to point away from them.

1. Edges on a cycle of length <= 6r follow the preferred orientation of
   the smallest such cycle (cycles ordered by length, then by sorted edge
   ids). Endpoints of such edges are decided; edges from undecided to
   decided nodes point at the decided node, leftover edges between
   decided nodes point at the smaller id.
2. Every other node keeps three items: loops first, then edges to decided
   nodes, then edges by neighbour id. An edge kept by one side becomes a
   loop of that side.
3. Nodes at distance >= 2r+1 from every loop form S; an MIS of the
   (2r+1)-th power of the remaining graph on S gives the centres S'.
   Every node joins the closest centre in S' or loop node (ties by id).
   Loop clusters orient towards their loop. An S' centre picks, in each
   of its three branches, the nearest node with an edge leaving the
   cluster; the rest of its cluster orients towards those paths.
4. Paths chosen from both ends become edges of the next level graph, the
   others become loops. Round costs grow by a factor 4r+4 per level.
5. After ceil(log2 log2 n) levels the rest is finished centrally: towards
   loops where a component has any, otherwise around a cycle. That step
   is charged the component's diameter.
"""
import math
from collections import deque

import numpy as np

from ..errors import ContractViolation, InputError
from ..graph import Graph
from ..sim import ORIENTATION
from ._common import Recorder
from .linial import linial_mis


def _shortest_paths(h, a, b, limit):
    """All shortest a-b paths of length <= limit in h minus the edge {a, b}.

    Grows balls from both ends one level at a time, always the smaller
    frontier, until they meet; then every shortest path crosses the
    meeting level and is enumerated from the two layered balls.
    """
    da, db = {a: 0}, {b: 0}
    fa, fb = [a], [b]
    ha = hb = 0

    def grow(dist, frontier, level):
        nxt = []
        for x in frontier:
            for y in h.adj[x]:
                if y in dist or {x, y} == {a, b}:
                    continue
                dist[y] = level
                nxt.append(y)
        return nxt

    while True:
        if ha + hb >= limit:
            return None, []
        if len(fa) <= len(fb):
            ha += 1
            fa = grow(da, fa, ha)
            meet = [x for x in fa if x in db]
        else:
            hb += 1
            fb = grow(db, fb, hb)
            meet = [x for x in fb if x in da]
        if meet:
            break
        if not fa or not fb:
            return None, []
    length = min(da[x] + db[x] for x in meet)
    middle = sorted(x for x in da if da[x] == ha and db.get(x) == length - ha)

    def walk(dist, x):
        # all shortest paths from the ball's root to x
        if dist[x] == 0:
            return [[x]]
        out = []
        for y in h.adj[x]:
            if dist.get(y) == dist[x] - 1 and {x, y} != {a, b}:
                out.extend(p + [x] for p in walk(dist, y))
        return out

    paths = []
    for x in middle:
        for left in walk(da, x):
            for right in walk(db, x):
                paths.append(left + right[::-1][1:])
    return length, paths


def min_short_cycle(h, e, limit):
    """Smallest cycle through edge e of h with at most ``limit`` edges, as a node list from b to a.

    Cycles are compared by length, then by their sorted edge ids. The
    returned list starts at the larger endpoint b, runs around the cycle
    and ends at a; the closing edge is (a, b).
    """
    a, b = (int(x) for x in h.edges[e])
    common = sorted(set(h.adj[a]) & set(h.adj[b]))
    if common:
        return [b, common[0], a]
    length, paths = _shortest_paths(h, a, b, limit - 1)
    if length is None:
        return None
    best = None
    for p in paths:
        ids = sorted([e] + [h.edge_id(x, y) for x, y in zip(p, p[1:])])
        if best is None or ids < best[0]:
            best = (ids, p)
    return best[1][::-1]


def preferred_head(h, cycle, e):
    """Head of edge e under the preferred orientation of ``cycle`` (node list closing back to its start)."""
    arcs = list(zip(cycle, cycle[1:] + cycle[:1]))
    ids = [h.edge_id(x, y) for x, y in arcs]
    x, y = arcs[int(np.argmin(ids))]
    forward = x < y
    for (p, q), i in zip(arcs, ids):
        if i == e:
            return q if forward else p
    raise AssertionError("edge not on cycle")


class _Level:
    """Level graph: Graph over local ids (ordered like the physical ids), paths, loops."""

    def __init__(self, phys, edges_phys, paths, loops):
        order = np.argsort(phys)
        self.phys = np.asarray(phys, dtype=np.int64)[order]
        local = {int(p): i for i, p in enumerate(self.phys)}
        self.loops = np.asarray(loops, dtype=np.int64)[order]
        pairs = [(local[a], local[b]) for a, b in edges_phys]
        self.h = Graph(len(self.phys), pairs)
        self.paths = [None] * self.h.m
        for (a, b), path in zip(pairs, paths):
            e = self.h.edge_id(a, b)
            # store arcs running from the smaller local endpoint to the larger
            self.paths[e] = path if a < b else [(y, x) for x, y in reversed(path)]


class _Orienter:
    def __init__(self, g):
        self.rec = Recorder(ORIENTATION, g, 0)
        self.g = g
        self.head = {}

    def arc(self, x, y, rnd):
        e = self.g.edge_id(x, y)
        if e in self.head:
            if self.head[e] != y:
                raise ContractViolation(f"edge ({x}, {y}) oriented both ways")
            return
        self.head[e] = y
        self.rec.edges([e], [y], rnd)

    def level_edge(self, lvl, e, tail_local, rnd):
        """Orient level edge e away from its endpoint ``tail_local``."""
        a, b = (int(x) for x in lvl.h.edges[e])
        path = lvl.paths[e] if tail_local == a else [(y, x) for x, y in reversed(lvl.paths[e])]
        for x, y in path:
            self.arc(x, y, rnd)


def sinkless_orientation(g, r=3):
    if r < 3:
        raise InputError("sinkless orientation needs r >= 3")
    if g.n and int(g.degrees.min()) < 3:
        raise InputError("sinkless orientation needs minimum degree 3")
    out = _Orienter(g)
    levels = math.ceil(math.log2(math.log2(g.n))) if g.n > 2 else 1
    lvl = _Level(np.arange(g.n), g.edge_list(), [[(int(u), int(v))] for u, v in g.edges], np.zeros(g.n))
    clock, mult = 0, 1
    history = []
    for it in range(levels):
        if lvl.h.n == 0:
            break
        lvl, clock, info = _iterate(lvl, r, out, clock, mult, g.n)
        history.append(info)
        mult *= 4 * r + 4
    if lvl.h.n:
        history.append(_finish(lvl, out, clock, mult))
    return out.rec.done(levels=levels, history=history, r=r)


def _iterate(lvl, r, out, clock, mult, id_space):
    h = lvl.h
    limit = 6 * r
    # 1. short cycles
    short = {}
    for e in range(h.m):
        cyc = min_short_cycle(h, e, limit)
        if cyc is not None:
            short[e] = cyc
    decided = np.zeros(h.n, bool)
    for e in short:
        decided[h.edges[e]] = True
    edge_done = np.zeros(h.m, bool)

    def commit(e, tail, phase_offset):
        out.level_edge(lvl, e, tail, clock + phase_offset * mult)
        edge_done[e] = True

    # mis cost is only known after clustering; phases 1 and 2 do not depend on it
    p1, p2 = 3 * r, 3 * r + 1
    for e, cyc in short.items():
        head = preferred_head(h, cyc, e)
        a, b = (int(x) for x in h.edges[e])
        commit(e, a if head == b else b, p1)
    for e in range(h.m):
        if edge_done[e]:
            continue
        a, b = (int(x) for x in h.edges[e])
        if decided[a] and decided[b]:
            commit(e, b, p1)
        elif decided[a] or decided[b]:
            commit(e, b if decided[a] else a, p1)
    # 2. keep three items per remaining node
    remaining = np.flatnonzero(~decided)
    chosen = {}
    loops2 = {}
    for v in remaining.tolist():
        slots = 3 - min(3, int(lvl.loops[v]))
        to_dec = [(w, e) for w, e in zip(h.adj[v], h.adj_edges[v]) if decided[w]]
        to_rem = [(w, e) for w, e in zip(h.adj[v], h.adj_edges[v]) if not decided[w]]
        take_dec = to_dec[:slots]
        take_rem = to_rem[:slots - len(take_dec)]
        chosen[v] = {e for _, e in take_rem}
        loops2[v] = min(3, int(lvl.loops[v])) + len(take_dec)
    kept = []
    for e in range(h.m):
        if edge_done[e]:
            continue
        a, b = (int(x) for x in h.edges[e])
        ca, cb = e in chosen[a], e in chosen[b]
        if ca and cb:
            kept.append(e)
        elif ca or cb:
            tail = a if ca else b
            commit(e, tail, p2)
            loops2[tail] += 1
        else:
            commit(e, a, p2)
    # 3. clustering on the reduced graph
    loc = {v: i for i, v in enumerate(remaining.tolist())}
    h2 = Graph(len(remaining), [(loc[int(h.edges[e][0])], loc[int(h.edges[e][1])]) for e in kept])
    h2_to_h = {h2.edge_id(loc[int(h.edges[e][0])], loc[int(h.edges[e][1])]): e for e in kept}
    loop_nodes = [i for i, v in enumerate(remaining.tolist()) if loops2[v] > 0]
    dist = _multi_bfs(h2, loop_nodes)
    reach = 2 * r + 1
    s_nodes = [i for i in range(h2.n) if dist[i] >= reach]
    s_index = {v: j for j, v in enumerate(s_nodes)}
    power = []
    for v in s_nodes:
        ball = _ball(h2, v, reach)
        power.append(sorted(s_index[w] for w in ball if w != v and w in s_index))
    ids = [int(lvl.phys[remaining[v]]) for v in s_nodes]
    res = linial_mis(power, ids, id_space)
    centres_s1 = [s_nodes[j] for j in range(len(s_nodes)) if res.in_set[j]]
    p3 = p2 + reach * (2 + res.steps) + 2 * reach
    centre_of, parent, depth = _voronoi(h2, sorted(set(loop_nodes) | set(centres_s1)),
                                        lambda i: int(lvl.phys[remaining[i]]))
    is_s1 = set(centres_s1)

    def h_edge(x, y):
        return h2_to_h[h2.edge_id(x, y)]

    def tail_h(x):
        return int(remaining[x])

    used = set()
    # loop clusters orient towards the loop
    for x in range(h2.n):
        if parent[x] >= 0 and centre_of[x] not in is_s1:
            e = h_edge(x, parent[x])
            commit(e, tail_h(x), p3)
            used.add(e)
    choices = {}
    for c in centres_s1:
        choices[c] = _pick_paths(h2, c, centre_of, parent, depth, lambda i: int(lvl.phys[remaining[i]]))
    virtual = []
    new_loops = {c: 0 for c in centres_s1}
    for c, picks in choices.items():
        for x, y, tree_path in picks:
            other = centre_of[y]
            mutual = other in choices and any(p[0] == y and p[1] == x for p in choices[other])
            if mutual:
                if c < other:
                    back = next(p[2] for p in choices[other] if p[0] == y)
                    virtual.append((c, other, tree_path + [(x, y)] + [(q, p) for p, q in reversed(back)]))
            else:
                new_loops[c] += 1
                for p, q in tree_path + [(x, y)]:
                    commit(h_edge(p, q), tail_h(p), p3)
            for p, q in tree_path + [(x, y)]:
                used.add(h_edge(p, q))
    # the rest of each S' cluster points at the nearest kept path
    on_path = set()
    for c, picks in choices.items():
        on_path.add(c)
        for x, y, tree_path in picks:
            on_path.update(p for p, _ in tree_path)
            on_path.add(x)
    towards = _towards_paths(h2, on_path, centre_of, is_s1)
    for x, y in towards:
        e = h_edge(x, y)
        commit(e, tail_h(x), p3)
        used.add(e)
    for e2 in range(h2.m):
        e = h2_to_h[e2]
        if e not in used and not edge_done[e]:
            a, b = (int(z) for z in h.edges[e])
            commit(e, a, p3)
    # 4. the next level graph
    new_phys = [int(lvl.phys[remaining[c]]) for c in centres_s1]
    edges_phys, paths = [], []
    for c, other, path in virtual:
        arcs = []
        for p, q in path:
            e = h_edge(p, q)
            a, _ = (int(z) for z in h.edges[e])
            seg = lvl.paths[e] if tail_h(p) == a else [(y, x) for x, y in reversed(lvl.paths[e])]
            arcs.extend(seg)
        edges_phys.append((int(lvl.phys[remaining[c]]), int(lvl.phys[remaining[other]])))
        paths.append(arcs)
    loops = [new_loops[c] for c in centres_s1]
    info = {"nodes": h.n, "short_edges": len(short), "decided": int(decided.sum()),
            "reduced_nodes": h2.n, "loop_nodes": len(loop_nodes), "s": len(s_nodes),
            "centres": len(centres_s1), "virtual_edges": len(virtual), "multiplier": mult,
            "mis_steps": res.steps}
    return _Level(new_phys, edges_phys, paths, loops), clock + p3 * mult, info


def _multi_bfs(h, sources):
    dist = np.full(h.n, np.iinfo(np.int64).max, dtype=np.int64)
    q = deque()
    for s in sources:
        dist[s] = 0
        q.append(s)
    while q:
        x = q.popleft()
        for y in h.adj[x]:
            if dist[y] > dist[x] + 1:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def _ball(h, v, radius):
    dist = {v: 0}
    q = deque([v])
    while q:
        x = q.popleft()
        if dist[x] == radius:
            continue
        for y in h.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def _voronoi(h, centres, ident):
    """Closest centre per node (ties by centre id), BFS parent and depth."""
    centre_of = [-1] * h.n
    parent = [-1] * h.n
    depth = [-1] * h.n
    frontier = sorted(centres, key=ident)
    for c in frontier:
        centre_of[c] = c
        depth[c] = 0
    level = 0
    while frontier:
        level += 1
        offers = {}
        for x in frontier:
            for y in h.adj[x]:
                if depth[y] >= 0:
                    continue
                key = (ident(centre_of[x]), ident(x))
                if y not in offers or key < offers[y][0]:
                    offers[y] = (key, x)
        for y, (_, x) in offers.items():
            centre_of[y] = centre_of[x]
            parent[y] = x
            depth[y] = level
        frontier = list(offers)
    return centre_of, parent, depth


def _pick_paths(h, c, centre_of, parent, depth, ident):
    """For each branch of centre c: (boundary node, outside neighbour, tree path from c)."""
    picks = []
    for b in h.adj[c]:
        if centre_of[b] != c:
            picks.append((c, b, []))
            continue
        best = None
        stack = [b]
        while stack:
            x = stack.pop()
            outside = [y for y in h.adj[x] if centre_of[y] != c]
            if outside:
                key = (depth[x], ident(x))
                if best is None or key < best[0]:
                    best = (key, x, min(outside, key=ident))
            stack.extend(y for y in h.adj[x] if parent[y] == x and centre_of[y] == c)
        if best is None:
            raise ContractViolation(f"branch of centre {c} has no way out of its cluster")
        _, x, y = best
        path = []
        z = x
        while z != c:
            path.append((parent[z], z))
            z = parent[z]
        picks.append((x, y, path[::-1]))
    return picks


def _towards_paths(h, on_path, centre_of, is_s1):
    """Arcs (x, next) sending every non-path node of an S' cluster towards the nearest path node."""
    dist = {}
    q = deque()
    for v in sorted(on_path):
        dist[v] = 0
        q.append(v)
    arcs = []
    while q:
        x = q.popleft()
        for y in h.adj[x]:
            if y in dist or centre_of[y] != centre_of[x] or centre_of[y] not in is_s1:
                continue
            dist[y] = dist[x] + 1
            arcs.append((y, x))
            q.append(y)
    return arcs


def _finish(lvl, out, clock, mult):
    """Orient what is left: towards loops, or around one cycle per loop-free component."""
    h = lvl.h
    comp = _components(h)
    rounds = []
    for nodes in comp:
        nodes_set = set(nodes)
        diam = _diameter(h, nodes)
        rnd = clock + max(diam, 1) * mult
        rounds.append(rnd)
        roots = [v for v in nodes if lvl.loops[v] > 0]
        done = set()
        if not roots:
            cycle = _find_cycle(h, nodes[0])
            for x, y in zip(cycle, cycle[1:] + cycle[:1]):
                e = h.edge_id(x, y)
                out.level_edge(lvl, e, x, rnd)
                done.add(e)
            roots = cycle
        dist = {v: 0 for v in roots}
        q = deque(sorted(roots))
        while q:
            x = q.popleft()
            for y, e in zip(h.adj[x], h.adj_edges[x]):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    out.level_edge(lvl, e, y, rnd)
                    done.add(e)
                    q.append(y)
        for v in nodes:
            for w, e in zip(h.adj[v], h.adj_edges[v]):
                if e not in done and v < w and w in nodes_set:
                    out.level_edge(lvl, e, v, rnd)
                    done.add(e)
    return {"finisher_nodes": h.n, "components": len(comp), "multiplier": mult,
            "rounds": max(rounds, default=clock)}


def _components(h):
    seen = [False] * h.n
    comps = []
    for s in range(h.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, q = [s], deque([s])
        while q:
            x = q.popleft()
            for y in h.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    q.append(y)
        comps.append(sorted(comp))
    return comps


def _diameter(h, nodes):
    best = 0
    for v in nodes:
        best = max(best, max(_ball(h, v, h.n).values()))
    return best


def _find_cycle(h, start):
    """Some cycle reachable from start (iterative DFS), as a node list."""
    parent = {start: None}
    order = {start: 0}
    stack = [(start, iter(h.adj[start]))]
    while stack:
        x, it = stack[-1]
        for y in it:
            if y == parent[x]:
                continue
            if y in order:
                cyc = [x]
                while cyc[-1] != y:
                    cyc.append(parent[cyc[-1]])
                return cyc[::-1]
            parent[y] = x
            order[y] = len(order)
            stack.append((y, iter(h.adj[y])))
            break
        else:
            stack.pop()
    raise ContractViolation("component without loops has no cycle")

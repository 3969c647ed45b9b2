from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nodeavg.cluster import (BUDGET_EXCEEDED, INTERNAL, LEAF, ClusterGraph, build_base_graph, build_skeleton,
                             covering_violations, cycle_stats, independence_number_exact, lift_graph,
                             random_lift, validate_family)
from nodeavg.errors import InputError
from nodeavg.generators import complete_graph, gnp, path_graph, star_graph
from nodeavg.graph import Graph

from oracles import alpha_brute, small_graphs


def _edge_set(ct):
    return {(e.src, e.dst, e.coef, e.exp) for e in ct.edges}


def test_skeleton_k0():
    ct = build_skeleton(0, 6)
    assert len(ct) == 2
    assert _edge_set(ct) == {(0, 1, 2, 0), (1, 0, 1, 1), (1, 1, 1, 1)}


def test_skeleton_k1():
    ct = build_skeleton(1, 10)
    assert len(ct) == 4
    c0, c1 = ct.nodes[0], ct.nodes[1]
    assert c0.kind == INTERNAL and c1.kind == INTERNAL
    leaves = [x for x in ct.nodes if x.kind == LEAF]
    assert sorted((x.parent, x.psi) for x in leaves) == [(0, 2), (1, 1)]


def test_skeleton_k2_has_ten_nodes():
    assert len(build_skeleton(2, 10)) == 10


@pytest.mark.parametrize("beta", [5, 7, 2, 0])
def test_skeleton_rejects_bad_beta(beta):
    with pytest.raises(InputError):
        build_skeleton(1, beta)


@given(st.integers(0, 3), st.sampled_from([4, 6, 8, 10]))
def test_skeleton_invariants(k, beta):
    ct = build_skeleton(k, beta)
    edges = {(e.src, e.dst): e for e in ct.edges}
    roots = [x for x in ct.nodes if x.parent is None]
    assert [x.id for x in roots] == [0] and (0, 0) not in edges
    for x in ct.nodes[1:]:
        up, down, loop = edges[(x.id, x.parent)], edges[(x.parent, x.id)], edges[(x.id, x.id)]
        i = down.exp
        assert (down.coef, up.coef, up.exp, loop.coef, loop.exp) == (2, 1, i + 1, 1, i + 1)
        assert x.psi == i + 1
    for x in ct.nodes:
        if x.kind != INTERNAL:
            continue
        js = sorted(edges[(x.id, c)].exp for c in ct.children(x.id))
        want = list(range(k + 1)) if x.id == 0 else [j for j in range(k + 1) if j != x.psi]
        assert js == want


def _neighbour_counts(cg):
    """Per node, a Counter of neighbour clusters, from plain adjacency lists."""
    return [Counter(int(cg.cluster_of[w]) for w in cg.graph.adj[v]) for v in range(cg.n)]


def test_base_graph_k0_beta6(ct06):
    cg = ct06
    assert cg.n == 48
    assert cg.members(0).size == 36 and cg.members(1).size == 12
    counts = _neighbour_counts(cg)
    for v in cg.members(0):
        assert counts[v] == Counter({1: 2})
    for v in cg.members(1):
        assert counts[v] == Counter({0: 6, 1: 6})


def test_base_graph_k1_beta10(ct110):
    cg = ct110
    sizes = sorted(cg.members(c).size for c in range(4))
    assert sizes == [200, 1000, 1000, 5000] and cg.n == 7200
    deg = cg.graph.degrees
    assert deg.max() == 200
    assert set(deg[cg.members(0)].tolist()) == {22}
    assert {int(cg.cluster_of[v]) for v in np.flatnonzero(deg == 200)} == {2}


def test_base_graph_double_counting(ct110):
    ct = ct110.skeleton
    for e in ct.edges:
        back = ct.edge(e.dst, e.src)
        assert ct.cluster_size(e.src) * e.value(ct.beta) == ct.cluster_size(e.dst) * back.value(ct.beta)


@pytest.mark.parametrize("k,beta", [(0, 6), (0, 10), (1, 10), (1, 12)])
def test_base_graph_sizes_and_degree_bound(k, beta):
    ct = build_skeleton(k, beta)
    cg = build_base_graph(ct)
    want = sum(2 * beta ** (k + 1) * (beta // 2) ** (k + 1 - x.depth) for x in ct.nodes)
    assert cg.n == want
    assert cg.graph.max_degree == 2 * beta ** (k + 1)
    assert validate_family(cg) == []


def test_base_graph_c0_is_independent(ct110):
    s0 = set(ct110.members(0).tolist())
    assert not any(w in s0 for v in s0 for w in ct110.graph.adj[v])


def test_base_graph_strict_precondition():
    with pytest.raises(InputError):
        build_base_graph(build_skeleton(1, 6))
    assert validate_family(build_base_graph(build_skeleton(1, 6), strict=False)) == []


def test_family_counts_match_independent_count(ct110):
    ct = ct110.skeleton
    counts = _neighbour_counts(ct110)
    for v in range(0, ct110.n, 37):
        c = int(ct110.cluster_of[v])
        want = {e.dst: e.value(ct.beta) for e in ct.out_edges(c)}
        assert dict(counts[v]) == want


def test_deleting_an_edge_gives_two_count_violations(ct06):
    g = ct06.graph
    edges = g.edge_list()[1:]
    broken = ClusterGraph(Graph(g.n, edges), ct06.skeleton, ct06.cluster_of)
    report = validate_family(broken)
    assert sum(r["kind"] == "count" for r in report) == 2
    assert {r["node"] for r in report if r["kind"] == "count"} == set(map(int, g.edges[0]))


def test_wrong_label_is_reported(ct06):
    bad = ClusterGraph(ct06.graph, ct06.skeleton, ct06.cluster_of, 1,
                       ct06.exp_fwd.copy(), ct06.exp_bwd, ct06.self_flag)
    bad.exp_fwd[3] += 1
    assert [r["kind"] for r in validate_family(bad) if r["kind"] == "label"] == ["label"]


def test_lift_order_one_is_the_base(ct06):
    lifted = random_lift(ct06, 1, 9)
    assert lifted.graph == ct06.graph
    assert validate_family(lifted) == []


def test_lift_of_k4():
    g = lift_graph(complete_graph(4), 10, 3)
    assert g.n == 40 and set(g.degrees.tolist()) == {3}
    assert covering_violations(g, complete_graph(4), 10) == []


def test_lift_k0_beta6_q5(ct06):
    lifted = random_lift(ct06, 5, 2)
    assert lifted.n == 240
    base = ct06.graph
    proj = lifted.graph.edges // 5
    for e, (a, b) in enumerate(base.edge_list()):
        over = lifted.graph.edges[(proj[:, 0] == a) & (proj[:, 1] == b)]
        assert len(over) == 5
        assert sorted(over[:, 0] % 5) == list(range(5)) and sorted(over[:, 1] % 5) == list(range(5))
    assert validate_family(lifted) == []


def test_lift_is_reproducible(ct06):
    a = random_lift(ct06, 7, 11).graph
    assert a == random_lift(ct06, 7, 11).graph
    assert a != random_lift(ct06, 7, 12).graph


def test_lift_keeps_label_multisets(ct06):
    q = 4
    lifted = random_lift(ct06, q, 5)

    def multiset(cg, v):
        return sorted(cg.label(v, w) for w in cg.graph.adj[v])

    for v in range(lifted.n):
        assert multiset(lifted, v) == multiset(ct06, v // q)


def test_lift_rejects_bad_order(ct06):
    with pytest.raises(InputError):
        random_lift(ct06, 0, 1)


def test_covering_check_notices_a_broken_lift():
    base = complete_graph(4)
    g = lift_graph(base, 3, 1)
    edges = g.edge_list()
    a, b = edges[0]
    edges[0] = (a, (b + 3) % 12) if (b + 3) % 12 // 3 != a // 3 else (a, (b + 6) % 12)
    assert covering_violations(Graph(12, edges), base, 3)


def test_independence_examples():
    k5 = complete_graph(5)
    assert independence_number_exact(k5, range(5)) == 1
    assert independence_number_exact(k5, []) == 0
    # two 4-cliques joined by a perfect matching
    edges = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    edges += [(a + 4, b + 4) for a, b in edges]
    edges += [(a, a + 4) for a in range(4)]
    g = Graph(8, edges)
    assert alpha_brute(g, range(8)) == 2
    assert independence_number_exact(g, range(8)) == 2


def test_independence_budget():
    g = Graph(30, [])
    hard = gnp(60, 0.3, 1)
    assert independence_number_exact(g, range(30)) == 30
    assert independence_number_exact(hard, range(60), node_budget=5) is BUDGET_EXCEEDED
    assert not BUDGET_EXCEEDED


@given(small_graphs(max_n=11), st.data())
def test_independence_matches_brute_force(g, data):
    subset = data.draw(st.sets(st.integers(0, g.n - 1)))
    assert independence_number_exact(g, subset) == alpha_brute(g, subset)


def test_cycle_stats_examples():
    assert cycle_stats(path_graph(6), 5) == 0
    assert cycle_stats(star_graph(4), 3) == 0
    assert cycle_stats(complete_graph(4), 3) == 1
    assert isinstance(cycle_stats(complete_graph(4), 3), Fraction)
    with pytest.raises(InputError):
        cycle_stats(complete_graph(4), 2)


@pytest.mark.parametrize("k,beta", [(0, 6), (1, 10)])
def test_cluster_alpha_bound(k, beta):
    cg = build_base_graph(build_skeleton(k, beta))
    for x in cg.skeleton.nodes:
        if x.psi is None:
            continue
        members = cg.members(x.id)
        # connected component of the first member inside its cluster
        seen, stack = {int(members[0])}, [int(members[0])]
        mset = set(members.tolist())
        while stack:
            v = stack.pop()
            for w in cg.graph.adj[v]:
                if w in mset and w not in seen:
                    seen.add(w)
                    stack.append(w)
        alpha = independence_number_exact(cg.graph, seen)
        assert Fraction(alpha) <= Fraction(len(seen), beta ** x.psi)

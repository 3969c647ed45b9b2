import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nodeavg.algorithms import KERNEL, PROGRAM, execute
from nodeavg.algorithms.luby import LubyMIS
from nodeavg.errors import ContractViolation, InputError
from nodeavg.generators import complete_graph, gnp, path_graph, random_regular, star_graph
from nodeavg.graph import Graph
from nodeavg.sim import EDGE, NODE, ORIENTATION, SELF, NodeProgram, completion_times, new_trace, record, run

from oracles import is_mis, small_graphs


class GreedyMIS(NodeProgram):
    """Join once every smaller-id neighbour is out; leave when a neighbour joins."""

    def setup(self, g, seed):
        self.g = g

    def initialize(self, node, degree, stream):
        waiting = {p for p, w in enumerate(self.g.adj[node]) if w < node}
        return degree, waiting

    def step(self, state, rnd, inbox):
        degree, waiting = state
        if "in" in inbox.values():
            decision = 0
        else:
            waiting -= {p for p, msg in inbox.items() if msg == "out"}
            if waiting:
                return state, None, None
            decision = 1
        msg = "in" if decision else "out"
        return None, {p: msg for p in range(degree)}, [(SELF, decision)]


def test_greedy_mis_on_a_path_by_hand():
    # ids 1, 2, 3 along the path: node 0 joins at once, node 1 hears it and
    # leaves one round later, node 2 waits for that and joins in round 2
    trace = run(GreedyMIS(), path_graph(3), 0, 10)
    assert trace.node_round.tolist() == [0, 1, 2]
    assert trace.node_output == [1, 0, 1]
    assert trace.rounds_elapsed == 2 and not trace.timed_out


@given(small_graphs())
def test_greedy_mis_is_an_mis(g):
    trace = run(GreedyMIS(), g, 0, 50)
    assert not trace.timed_out
    assert is_mis(g, {v for v, x in enumerate(trace.node_output) if x == 1})


class Echo(NodeProgram):
    """Round 0 sends the node id on every port; round 1 checks what came back."""

    def setup(self, g, seed):
        self.g = g

    def initialize(self, node, degree, stream):
        return node

    def step(self, node, rnd, inbox):
        nbrs = self.g.adj[node]
        if rnd == 0:
            assert inbox == {}
            return node, {p: node for p in range(len(nbrs))}, None
        ok = inbox == dict(enumerate(nbrs))
        return None, None, [(SELF, ok)]


@pytest.mark.parametrize("g", [path_graph(5), star_graph(4), gnp(40, 0.2, 3)])
def test_messages_arrive_next_round_on_the_right_port(g):
    trace = run(Echo(), g, 0, 5)
    isolated = g.degrees == 0
    assert all(trace.node_output[v] for v in range(g.n) if not isolated[v])
    assert set(trace.node_round.tolist()) <= {1}


class CommitAtStart(NodeProgram):
    def initialize(self, node, degree, stream):
        return node

    def step(self, state, rnd, inbox):
        return None, None, [(SELF, state % 2)]


def test_round_zero_commit():
    trace = run(CommitAtStart(), path_graph(4), 0, 3)
    assert trace.node_round.tolist() == [0, 0, 0, 0]
    assert trace.rounds_elapsed == 0


class Silent(NodeProgram):
    def initialize(self, node, degree, stream):
        return 0

    def step(self, state, rnd, inbox):
        return state, None, None


def test_timeout_returns_partial_trace():
    trace = run(Silent(), path_graph(3), 0, 5)
    assert trace.timed_out
    assert trace.node_round.tolist() == [-1, -1, -1]
    with pytest.raises(InputError):
        run(Silent(), path_graph(3), 0, -1)


class Flipper(NodeProgram):
    def initialize(self, node, degree, stream):
        return 0

    def step(self, state, rnd, inbox):
        return state, None, [(SELF, 0), (SELF, 1)]


def test_changed_recommit_is_a_contract_violation():
    with pytest.raises(ContractViolation):
        run(Flipper(), path_graph(2), 0, 5)


def test_equal_recommit_keeps_first_round():
    g = path_graph(2)
    trace = new_trace(NODE, g, 0)
    record(trace, NODE, 0, 1, 2, 0)
    record(trace, NODE, 0, 1, 5, 0)
    assert trace.node_round[0] == 2


class PointAway(NodeProgram):
    problem_kind = ORIENTATION

    def initialize(self, node, degree, stream):
        return (node, degree)

    def step(self, state, rnd, inbox):
        node, degree = state
        if node == 0:
            return None, None, [(("port", p), +1) for p in range(degree)]
        return None, None, None


def test_orientation_commits_become_heads():
    trace = run(PointAway(), star_graph(3), 0, 2)
    assert trace.edge_output == [1, 2, 3]


def test_order_does_not_matter():
    g = gnp(80, 0.08, 4)
    base = run(LubyMIS(), g, 9, 1000)
    rng = np.random.default_rng(0)
    for _ in range(2):
        assert run(LubyMIS(), g, 9, 1000, order=rng.permutation(g.n)).same_as(base)
    with pytest.raises(InputError):
        run(LubyMIS(), g, 9, 1000, order=[0, 0])


def test_runs_are_deterministic():
    g = random_regular(60, 4, 2)
    assert run(LubyMIS(), g, 5, 1000).same_as(run(LubyMIS(), g, 5, 1000))


def test_completion_times_node_kind():
    g = path_graph(3)
    trace = new_trace(NODE, g, 0)
    for v, r in enumerate([1, 2, 1]):
        record(trace, NODE, v, 0, r, v)
    tv, te = completion_times(trace, g)
    assert tv.tolist() == [1, 2, 1] and te.tolist() == [2, 2]


def test_completion_times_edge_kind():
    g = Graph(3, [(0, 1)])
    trace = new_trace(EDGE, g, 0)
    record(trace, EDGE, 0, 1, 3, 0)
    tv, te = completion_times(trace, g)
    assert tv.tolist() == [3, 3, 0] and te.tolist() == [3]


def test_completion_times_missing_and_zero():
    g = path_graph(3)
    trace = new_trace(EDGE, g, 0)
    record(trace, EDGE, 0, 1, 0, 0)
    tv, te = completion_times(trace, g)
    assert tv.tolist() == [0, -1, -1] and te.tolist() == [0, -1]
    node = new_trace(NODE, g, 0)
    for v in range(3):
        record(node, NODE, v, 0, 0, v)
    assert [x.tolist() for x in completion_times(node, g)] == [[0, 0, 0], [0, 0]]


@settings(max_examples=25)
@given(small_graphs(), st.integers(0, 2**32), st.sampled_from(["luby-mis", "ruling22", "rand-mm", "linial-mis"]))
def test_program_and_kernel_agree(g, seed, name):
    a = execute(name, g, seed, KERNEL)
    b = execute(name, g, seed, PROGRAM)
    assert a.same_as(b)


@pytest.mark.parametrize("name", ["luby-mis", "ruling22", "rand-mm", "linial-mis"])
def test_program_and_kernel_agree_on_larger_graphs(name):
    for g in (gnp(300, 0.03, 1), random_regular(200, 5, 2), complete_graph(12)):
        assert execute(name, g, 17, KERNEL).same_as(execute(name, g, 17, PROGRAM))

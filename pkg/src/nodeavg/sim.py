"""Synchronous message-passing rounds with per-entity output commits."""
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, InputError
from .rng import NodeStream

NODE = "node"
EDGE = "edge"
ORIENTATION = "orientation"
KINDS = (NODE, EDGE, ORIENTATION)

SELF = "self"


class NodeProgram:
    """Per-node state machine run by :func:`run`.

    ``initialize(node, degree, stream)`` returns the starting state.
    ``step(state, rnd, inbox)`` gets the messages that arrived this round
    as ``{port: message}`` and returns ``(state, outbox, commits)``:
    ``outbox`` maps ports to messages delivered next round, and
    ``commits`` is a list of ``(entity, value)`` with entity ``"self"`` or
    ``("port", i)``. Returning ``None`` as the state halts the node.

    For orientation problems an edge value of ``+1`` means the edge points
    away from the committing node and ``-1`` towards it.
    """

    problem_kind = NODE

    def setup(self, g, seed):
        """Hook for programs that need graph-wide preprocessing."""

    def initialize(self, node, degree, stream):
        raise NotImplementedError

    def step(self, state, rnd, inbox):
        raise NotImplementedError


@dataclass
class ExecutionTrace:
    """Commit rounds and outputs of one run; -1 marks "no commit"."""
    problem_kind: str
    node_round: np.ndarray
    edge_round: np.ndarray
    node_output: list
    edge_output: list
    rounds_elapsed: int
    seed: int
    timed_out: bool = False
    info: dict = field(default_factory=dict, repr=False)

    @property
    def commit_round(self):
        out = {("node", v): int(r) for v, r in enumerate(self.node_round) if r >= 0}
        out.update({("edge", e): int(r) for e, r in enumerate(self.edge_round) if r >= 0})
        return out

    @property
    def outputs(self):
        out = {("node", v): x for v, x in enumerate(self.node_output) if x is not None}
        out.update({("edge", e): x for e, x in enumerate(self.edge_output) if x is not None})
        return out

    def required_complete(self):
        if self.problem_kind == NODE:
            return bool(np.all(self.node_round >= 0))
        return bool(np.all(self.edge_round >= 0))

    def same_as(self, other):
        return (self.problem_kind == other.problem_kind
                and np.array_equal(self.node_round, other.node_round)
                and np.array_equal(self.edge_round, other.edge_round)
                and self.node_output == other.node_output
                and self.edge_output == other.edge_output
                and self.rounds_elapsed == other.rounds_elapsed
                and self.timed_out == other.timed_out)


def new_trace(kind, g, seed):
    if kind not in KINDS:
        raise InputError(f"unknown problem kind {kind!r}")
    return ExecutionTrace(kind, np.full(g.n, -1, np.int64), np.full(g.m, -1, np.int64),
                          [None] * g.n, [None] * g.m, 0, seed)


def record(trace, entity, index, value, rnd, who):
    """Store a commit; an equal re-commit keeps the first round, a different one is an error."""
    rounds = trace.node_round if entity == NODE else trace.edge_round
    outputs = trace.node_output if entity == NODE else trace.edge_output
    if rounds[index] >= 0:
        if outputs[index] != value:
            raise ContractViolation(
                f"node {who} re-committed {entity} {index} as {value!r} (was {outputs[index]!r})")
        return
    rounds[index] = rnd
    outputs[index] = value


def finish(trace):
    """Set rounds_elapsed from the commits and flag incomplete runs."""
    last = max(int(trace.node_round.max(initial=-1)), int(trace.edge_round.max(initial=-1)))
    trace.rounds_elapsed = max(last, 0)
    trace.timed_out = not trace.required_complete()
    return trace


def run(program, g, seed, max_rounds, order=None):
    """Execute ``program`` on every node of ``g`` until all outputs are committed.

    Messages sent in round r are read in round r+1. ``order`` permutes the
    per-round node loop; results never depend on it. On hitting
    ``max_rounds`` the partial trace comes back with ``timed_out`` set.
    """
    if max_rounds < 0:
        raise InputError("max_rounds must be non-negative")
    kind = program.problem_kind
    trace = new_trace(kind, g, seed)
    program.setup(g, seed)
    order = list(range(g.n)) if order is None else [int(v) for v in order]
    if sorted(order) != list(range(g.n)):
        raise InputError("order must be a permutation of the nodes")
    adj = g.adj
    adj_edges = g.adj_edges
    rev = _reverse_ports(g)
    states = [None] * g.n
    for v in order:
        states[v] = program.initialize(v, g.degree(v), NodeStream(seed, v))
    inboxes = [{} for _ in range(g.n)]
    required = g.n if kind == NODE else g.m
    done = 0
    for rnd in range(max_rounds + 1):
        outgoing = [{} for _ in range(g.n)]
        active = False
        for v in order:
            state = states[v]
            if state is None:
                continue
            state, outbox, commits = program.step(state, rnd, inboxes[v])
            states[v] = state
            active = active or state is not None
            for port, msg in (outbox or {}).items():
                outgoing[adj[v][port]][rev[v][port]] = msg
            for entity, value in commits or ():
                if entity == SELF:
                    before = trace.node_round[v]
                    record(trace, NODE, v, value, rnd, v)
                    done += kind == NODE and before < 0
                else:
                    port = entity[1]
                    e = adj_edges[v][port]
                    if kind == ORIENTATION:
                        value = adj[v][port] if value > 0 else v
                    before = trace.edge_round[e]
                    record(trace, EDGE, e, value, rnd, v)
                    done += kind != NODE and before < 0
        inboxes = outgoing
        if done >= required or not active:
            break
    return finish(trace)


def _reverse_ports(g):
    rp = g.reverse_port
    return [list(map(int, rp[g.indptr[v]:g.indptr[v + 1]] - g.indptr[g.indices[g.indptr[v]:g.indptr[v + 1]]]))
            for v in range(g.n)]


def completion_times(trace, g):
    """Per-node and per-edge completion rounds; -1 where a required commit is missing.

    Node problems: a node completes at its own commit, an edge when both
    endpoints have committed. Edge problems: an edge completes at its own
    commit, a node when all incident edges have (isolated nodes at 0).
    """
    u, v = g.edges[:, 0], g.edges[:, 1]
    if trace.problem_kind == NODE:
        tv = trace.node_round.copy()
        te = np.maximum(tv[u], tv[v])
        te[(tv[u] < 0) | (tv[v] < 0)] = -1
        return tv, te
    te = trace.edge_round.copy()
    tv = np.zeros(g.n, np.int64)
    arcs = te[g.arc_edge]
    np.maximum.at(tv, g.arc_src, arcs)
    missing = np.zeros(g.n, bool)
    missing[g.arc_src[arcs < 0]] = True
    tv[missing] = -1
    return tv, te

"""Helpers shared by the vectorized kernels."""
import numpy as np

from ..sim import new_trace


class Recorder:
    """Collects commits as arrays and turns them into an ExecutionTrace."""

    def __init__(self, kind, g, seed):
        self.g = g
        self.trace = new_trace(kind, g, seed)
        self.node_out = np.full(g.n, -1, np.int64)
        self.edge_out = np.full(g.m, -1, np.int64)

    def nodes(self, idx, values, rnd):
        idx = np.asarray(idx)
        idx = np.flatnonzero(idx) if idx.dtype == bool else idx.astype(np.int64)
        values = np.broadcast_to(np.asarray(values, dtype=np.int64), idx.shape)
        new = self.trace.node_round[idx] < 0
        self.trace.node_round[idx[new]] = rnd
        self.node_out[idx[new]] = values[new]

    def edges(self, idx, values, rnd):
        idx = np.asarray(idx, dtype=np.int64)
        values = np.broadcast_to(np.asarray(values, dtype=np.int64), idx.shape)
        new = self.trace.edge_round[idx] < 0
        self.trace.edge_round[idx[new]] = rnd
        self.edge_out[idx[new]] = values[new]

    def done(self, **info):
        t = self.trace
        t.node_output = [None if r < 0 else int(x) for r, x in zip(t.node_round.tolist(), self.node_out.tolist())]
        t.edge_output = [None if r < 0 else int(x) for r, x in zip(t.edge_round.tolist(), self.edge_out.tolist())]
        last = max(int(t.node_round.max(initial=-1)), int(t.edge_round.max(initial=-1)))
        t.rounds_elapsed = max(last, 0)
        t.timed_out = not t.required_complete()
        t.info.update(info)
        return t


def higher_priority(d, src, dst):
    """True where ``dst`` outranks ``src``: larger degree, then larger id."""
    return (d[dst] > d[src]) | ((d[dst] == d[src]) & (dst > src))


def scatter_flag(n, idx):
    out = np.zeros(n, bool)
    out[idx] = True
    return out

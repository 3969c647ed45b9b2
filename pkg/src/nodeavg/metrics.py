"""Node- and edge-averaged complexity from execution traces, in exact rationals."""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InputError
from .sim import completion_times


@dataclass
class ComplexityReport:
    avg_v: Fraction
    avg_e: Fraction
    weighted_avg_v: Fraction
    exp_v_sum: np.ndarray = field(repr=False)
    exp_v_max: Fraction
    worst: int
    trials: int
    rows: list = field(default_factory=list, repr=False)

    @property
    def exp_v(self):
        """Per-node mean completion round over the trials."""
        return [Fraction(int(s), self.trials) for s in self.exp_v_sum]

    def chain_holds(self):
        return self.avg_v <= self.exp_v_max <= self.worst


def _weights(weights, n):
    if weights is None:
        return None
    w = [Fraction(x) for x in weights]
    if len(w) != n:
        raise InputError(f"expected {n} weights, got {len(w)}")
    if any(x <= 0 for x in w):
        raise InputError("weights must be positive")
    return w


def trial_row(trace, g):
    tv, te = completion_times(trace, g)
    if (tv < 0).any() or (te < 0).any() or trace.timed_out:
        raise InputError(f"trace for seed {trace.seed} is incomplete")
    return {
        "seed": trace.seed,
        "n": g.n,
        "m": g.m,
        "avg_v": Fraction(int(tv.sum()), g.n) if g.n else Fraction(0),
        "avg_e": Fraction(int(te.sum()), g.m) if g.m else Fraction(0),
        "worst": int(trace.rounds_elapsed),
        "exp_v_max": Fraction(int(tv.max(initial=0))),
    }, tv


def report(traces, g, weights=None):
    """Aggregate complete traces of one graph into a ComplexityReport."""
    traces = list(traces)
    if not traces:
        raise InputError("need at least one trace")
    w = _weights(weights, g.n)
    rows = []
    total = np.zeros(g.n, np.int64)
    for t in traces:
        row, tv = trial_row(t, g)
        rows.append(row)
        total += tv
    k = len(traces)
    avg_v = sum((r["avg_v"] for r in rows), Fraction(0)) / k
    avg_e = sum((r["avg_e"] for r in rows), Fraction(0)) / k
    if w is None or g.n == 0:
        weighted = avg_v
    else:
        num = sum((wi * int(s) for wi, s in zip(w, total.tolist())), Fraction(0))
        weighted = num / (k * sum(w))
    exp_max = Fraction(int(total.max(initial=0)), k)
    worst = max(r["worst"] for r in rows)
    return ComplexityReport(avg_v, avg_e, weighted, total, exp_max, worst, k, rows)

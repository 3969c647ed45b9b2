"""Algorithm registry: names, configurations and a single entry point.

Every algorithm has a vectorized or centralized kernel that produces an
:class:`~nodeavg.sim.ExecutionTrace` with honest round stamps. The
randomized ones and the colour-reduction MIS also exist as message-passing
programs for :func:`nodeavg.sim.run`; both routes flip the same coins.
"""
from dataclasses import dataclass
from typing import Callable, Optional

from ..errors import InputError
from ..sim import EDGE, NODE, ORIENTATION, run
from . import validate
from .det_matching import det_maximal_matching, weight_greedy_rounder
from .det_ruling import LOG_DELTA, MODES, det_ruling_set
from .linial import LinialMIS, linial_kernel
from .luby import LubyMIS, luby_kernel
from .matching import RandMaximalMatching, rand_mm_kernel
from .ruling import RulingSet22, ruling22_kernel
from .sinkless import sinkless_orientation

KERNEL = "kernel"
PROGRAM = "program"
ENGINES = (KERNEL, PROGRAM)

ROUNDERS = {"greedy": weight_greedy_rounder}


@dataclass(frozen=True)
class AlgorithmConfig:
    variant: str
    r: int = 3
    mode: str = LOG_DELTA
    rounder: Optional[Callable] = weight_greedy_rounder

    def check(self):
        if self.variant not in ALGORITHMS:
            raise InputError(f"unknown algorithm {self.variant!r}; choose from {', '.join(ALGORITHMS)}")
        if self.r < 3:
            raise InputError("r must be at least 3")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}")
        if self.variant == "det-mm" and self.rounder is None:
            raise InputError("det-mm needs a rounder")
        return self


@dataclass(frozen=True)
class Algorithm:
    name: str
    kind: str
    randomized: bool
    kernel: Callable
    validator: Callable
    program: Optional[Callable] = None


def _det_ruling_validator(g, trace, cfg):
    return validate.validate_pointer_ruling(g, trace, trace.info["iterations"] + 1)


ALGORITHMS = {a.name: a for a in [
    Algorithm("luby-mis", NODE, True, lambda g, s, c: luby_kernel(g, s),
              lambda g, t, c: validate.validate_mis(g, t), LubyMIS),
    Algorithm("ruling22", NODE, True, lambda g, s, c: ruling22_kernel(g, s),
              lambda g, t, c: validate.validate_ruling22(g, t), RulingSet22),
    Algorithm("rand-mm", EDGE, True, lambda g, s, c: rand_mm_kernel(g, s),
              lambda g, t, c: validate.validate_matching(g, t), RandMaximalMatching),
    Algorithm("linial-mis", NODE, False, lambda g, s, c: linial_kernel(g, s),
              lambda g, t, c: validate.validate_mis(g, t), LinialMIS),
    Algorithm("det-ruling", NODE, False, lambda g, s, c: det_ruling_set(g, c.mode),
              _det_ruling_validator),
    Algorithm("det-mm", EDGE, False, lambda g, s, c: det_maximal_matching(g, c.rounder),
              lambda g, t, c: validate.validate_matching(g, t)),
    Algorithm("sinkless", ORIENTATION, False, lambda g, s, c: sinkless_orientation(g, c.r),
              lambda g, t, c: validate.validate_sinkless(g, t)),
]}


def get(name):
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise InputError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}") from None


def execute(config, g, seed=0, engine=KERNEL, max_rounds=100_000):
    """Run one trial and return its trace. ``config`` may be a name or an AlgorithmConfig."""
    cfg = AlgorithmConfig(config) if isinstance(config, str) else config
    cfg.check()
    algo = ALGORITHMS[cfg.variant]
    if engine == KERNEL:
        trace = algo.kernel(g, seed, cfg)
    elif engine == PROGRAM:
        if algo.program is None:
            raise InputError(f"{algo.name} has no message-passing form; use engine={KERNEL!r}")
        trace = run(algo.program(), g, seed, max_rounds)
    else:
        raise InputError(f"engine must be one of {ENGINES}")
    # deterministic kernels ignore the seed but the trace still records it
    trace.seed = seed
    trace.info.setdefault("algorithm", algo.name)
    return trace


def check(config, g, trace):
    """Violations of the algorithm's output problem on g (empty list when valid)."""
    cfg = AlgorithmConfig(config) if isinstance(config, str) else config
    return ALGORITHMS[cfg.variant].validator(g, trace, cfg)

"""Counter-based randomness.

Every random bit used by an algorithm is a pure function of
``(seed, node, key)``. A node draws lazily, but the result is the same as if
all of its bits had been fixed before the run. The scalar and the vectorised
versions return identical values, so message-passing programs and the
array kernels in :mod:`nodeavg.algorithms.kernels` flip the same coins.

The mixer is the SplitMix64 finaliser.
"""
import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_SCALE = 1.0 / (1 << 53)


def mix64(z):
    """SplitMix64 finaliser on a Python int."""
    z &= MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def mix64_array(z):
    """SplitMix64 finaliser on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def node_base(seed, node):
    return mix64(mix64((seed + GOLDEN) & MASK) ^ ((node + 1) * GOLDEN & MASK))


def uniform(seed, node, key):
    """Uniform float in [0, 1) for one (seed, node, key) triple."""
    h = mix64(node_base(seed, node) ^ ((key + 1) * _M2 & MASK))
    return (h >> 11) * _SCALE


def uniforms(seed, nodes, keys):
    """Vectorised :func:`uniform`; ``keys`` may be a scalar or an array."""
    nodes = np.asarray(nodes, dtype=np.uint64)
    keys = np.asarray(keys, dtype=np.uint64)
    with np.errstate(over="ignore"):
        s = np.uint64(mix64((seed + GOLDEN) & MASK))
        base = mix64_array(s ^ ((nodes + np.uint64(1)) * np.uint64(GOLDEN)))
        h = mix64_array(base ^ ((keys + np.uint64(1)) * np.uint64(_M2)))
    return (h >> np.uint64(11)).astype(np.float64) * _SCALE


class NodeStream:
    """The private random stream of one node."""

    __slots__ = ("seed", "node")

    def __init__(self, seed, node):
        self.seed = seed
        self.node = node

    def uniform(self, key):
        return uniform(self.seed, self.node, key)

    def __repr__(self):
        return f"NodeStream(seed={self.seed}, node={self.node})"

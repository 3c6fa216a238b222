"""Reproducible replica streams.

Every stochastic operation in this package draws from an :class:`RngStream`,
which is fully determined by a 64-bit ``base_seed`` and a ``stream_index``
(the replica id).  Stream seeds are derived with the splitmix64 mixing recipe,
so distinct indices give statistically independent PCG64 streams and replicas
can run in any order or in parallel without changing results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15  # splitmix64 sequence increment


def _mix64(z: int) -> int:
    """splitmix64 output finalizer (Stafford variant 13)."""
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def stream_seed(base_seed: int, stream_index: int) -> int:
    """The ``stream_index``-th splitmix64 output of a sequence seeded at ``base_seed``."""
    if stream_index < 0:
        raise ValueError("stream_index must be nonnegative")
    state = (base_seed + (stream_index + 1) * _GOLDEN) & _MASK64
    return _mix64(state)


@dataclass
class RngStream:
    """A single reproducible uniform stream.

    Identical ``(base_seed, stream_index)`` pairs reproduce the identical draw
    sequence; distinct indices give independent streams.  A stream is stateful
    (successive calls continue the sequence) and must not be shared between
    concurrent consumers.
    """

    base_seed: int
    stream_index: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.base_seed &= _MASK64
        self._gen = np.random.Generator(
            np.random.PCG64(stream_seed(self.base_seed, self.stream_index))
        )

    def random(self, n: int | None = None):
        """``n`` uniforms in [0, 1) (a scalar when ``n`` is None)."""
        return self._gen.random(n)

    def replica(self, k: int) -> "RngStream":
        """Fresh stream for replica ``k``, offset from this stream's index."""
        return RngStream(self.base_seed, self.stream_index + k)

"""Oriented site percolation on the space-time triangle, and its coupling to the process.

The triangle below apex (i, t) holds every lattice point the state of cell i
at time t can depend on.  Level-0 vertices are always open (the process starts
from all ones); every later vertex is independently closed with probability
``alpha``.  A vertex (j, s+1) is reachable when it is open and one of its two
feeders (j, s), (j+1, s) is reachable.  Feeding the same closed/open marks
into the process as erasure decisions makes "cell occupied" and "apex
reachable" the same event, seed for seed, which is what ``coupling_check``
exercises.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .process import Configuration, all_ones, step_with_erasure_mask
from .rng import RngStream

Vertex = tuple[int, int]


@dataclass(frozen=True)
class Triangle:
    """Dependence triangle of an apex: vertices (j, s) with 0 <= s <= t, i <= j <= i+t-s."""

    apex: Vertex

    def __post_init__(self) -> None:
        if self.apex[1] < 0:
            raise ValueError("apex time must be nonnegative")

    @property
    def i(self) -> int:
        return self.apex[0]

    @property
    def t(self) -> int:
        return self.apex[1]

    def vertex_count(self) -> int:
        return (self.t + 2) * (self.t + 1) // 2

    def level_width(self, s: int) -> int:
        return self.t - s + 1

    def contains(self, v: Vertex) -> bool:
        j, s = v
        return 0 <= s <= self.t and self.i <= j <= self.i + self.t - s

    def vertices(self):
        for s in range(self.t + 1):
            for j in range(self.i, self.i + self.t - s + 1):
                yield (j, s)


@dataclass(frozen=True)
class PercolationSample:
    """Open/closed marks for one triangle at one erasure rate.

    ``levels[s]`` is the open mask of level s, index k meaning column i + k.
    Level 0 is all open by construction.
    """

    triangle: Triangle
    alpha: float
    levels: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.levels) != self.triangle.t + 1:
            raise ValueError("one mask per level required")
        if not bool(self.levels[0].all()):
            raise ValueError("level-0 vertices must all be open")
        for s, mask in enumerate(self.levels):
            if mask.shape != (self.triangle.level_width(s),):
                raise ValueError(f"level {s} mask has the wrong width")

    def is_open(self, v: Vertex) -> bool:
        j, s = v
        if not self.triangle.contains(v):
            raise ValueError(f"vertex {v} outside the triangle")
        return bool(self.levels[s][j - self.triangle.i])

    def open_map(self) -> dict[Vertex, bool]:
        """Marks of all non-initial vertices, keyed by (j, s)."""
        out = {}
        for s in range(1, self.triangle.t + 1):
            for k, flag in enumerate(self.levels[s]):
                out[(self.triangle.i + k, s)] = bool(flag)
        return out

    def with_vertex_open(self, v: Vertex) -> "PercolationSample":
        """Copy of the sample with one vertex forced open (monotonicity checks)."""
        j, s = v
        if s == 0:
            return self
        levels = list(self.levels)
        level = levels[s].copy()
        level[j - self.triangle.i] = True
        levels[s] = level
        return PercolationSample(self.triangle, self.alpha, tuple(levels))


def sample_triangle(apex: Vertex, alpha: float, rng: RngStream) -> PercolationSample:
    """Draw vertex marks in raster order (s ascending, column ascending).

    One uniform per non-initial vertex; a vertex is closed when its uniform
    falls below ``alpha``.  The raster order is the shared-table convention
    the process coupling relies on.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    tri = Triangle(apex)
    levels = [np.ones(tri.level_width(0), dtype=bool)]
    for s in range(1, tri.t + 1):
        u = np.atleast_1d(rng.random(tri.level_width(s)))
        levels.append(u >= alpha)
    return PercolationSample(tri, alpha, tuple(levels))


def reachable(sample: PercolationSample) -> bool:
    """True when a directed open path runs from level 0 to the apex.

    Level-by-level sweep: a vertex is reached when it is open and one of its
    two feeders one level below is reached.  Linear in the triangle size.
    """
    reach = sample.levels[0].copy()
    for s in range(1, sample.triangle.t + 1):
        reach = sample.levels[s] & (reach[:-1] | reach[1:])
    return bool(reach[0])


def coupled_run(sample: PercolationSample) -> Configuration:
    """Run the process on the sample's triangle, erasures read from its marks."""
    tri = sample.triangle
    c = all_ones(tri.t + 1, offset=tri.i)
    for s in range(1, tri.t + 1):
        c = step_with_erasure_mask(c, ~sample.levels[s])
    return c


def coupling_check(apex: Vertex, alpha: float, rng: RngStream) -> bool:
    """Draw one shared randomness table and compare the two verdicts.

    Returns True when "cell (i, t) occupied" (process run with erasures read
    from the table) agrees with "apex reachable" (percolation sweep over the
    same table).  The agreement is exact per seed, not statistical.
    """
    sample = sample_triangle(apex, alpha, rng)
    occupied = bool(coupled_run(sample).cells[0])
    return occupied == reachable(sample)

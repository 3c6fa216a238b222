"""Exact finite-window simulation of the Stavskaya automaton.

One time step is two stages applied to a row of 0/1 cells: the spread stage
(each cell becomes the max of itself and its right neighbour, so the window
loses one cell on the right) followed by the erasure stage (each surviving 1
is independently set to 0 with probability ``alpha``).  Observing ``m`` cells
after ``t`` steps therefore needs ``m + t`` initial cells; simulating exactly
that dependence cone makes every finite run distributionally exact, with no
boundary condition at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .rng import RngStream


class WindowExhaustedError(RuntimeError):
    """Raised when the spread stage is applied to a single-cell window."""


@dataclass(frozen=True)
class Configuration:
    """A finite window of cell states with the lattice position of its left edge."""

    offset: int
    cells: np.ndarray

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=np.uint8)
        if cells.ndim != 1 or cells.size == 0:
            raise ValueError("cells must be a nonempty 1-d sequence")
        if cells.max(initial=0) > 1:
            raise ValueError("cells must contain only 0 and 1")
        object.__setattr__(self, "cells", cells)

    @property
    def width(self) -> int:
        return int(self.cells.size)

    def density(self, m: int | None = None) -> float:
        """Fraction of 1s among the leftmost ``m`` cells (whole window by default)."""
        m = self.width if m is None else m
        if not 1 <= m <= self.width:
            raise ValueError("m out of range")
        return float(self.cells[:m].mean())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.cells, other.cells)


def all_ones(width: int, offset: int = 0) -> Configuration:
    """All-ones window: the state the process is started from."""
    if width <= 0:
        raise ValueError("width must be positive")
    return Configuration(offset, np.ones(width, dtype=np.uint8))


def all_zeros(width: int, offset: int = 0) -> Configuration:
    if width <= 0:
        raise ValueError("width must be positive")
    return Configuration(offset, np.zeros(width, dtype=np.uint8))


def apply_d(c: Configuration) -> Configuration:
    """Spread stage: cell i becomes max(x_i, x_{i+1}); the window shrinks by one on the right."""
    if c.width < 2:
        raise WindowExhaustedError("window exhausted: spread needs at least 2 cells")
    return Configuration(c.offset, np.maximum(c.cells[:-1], c.cells[1:]))


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


def apply_r(c: Configuration, alpha: float, rng: RngStream) -> Configuration:
    """Erasure stage: each 1 independently becomes 0 with probability ``alpha``.

    Consumes exactly one uniform per 1-cell, in left-to-right order, so a run
    is reproducible draw for draw from its stream.
    """
    alpha = _check_alpha(alpha)
    ones = np.flatnonzero(c.cells)
    if ones.size == 0:
        return c
    u = np.atleast_1d(rng.random(ones.size))
    out = c.cells.copy()
    out[ones[u < alpha]] = 0
    return Configuration(c.offset, out)


def stav_step(c: Configuration, alpha: float, rng: RngStream) -> Configuration:
    """One time unit of the process: spread first, then erasure."""
    return apply_r(apply_d(c), alpha, rng)


def step_with_erasure_mask(c: Configuration, erase: np.ndarray) -> Configuration:
    """Spread stage followed by erasure at the masked positions.

    ``erase`` has one entry per post-spread cell.  This is the hook the
    percolation coupling uses to feed a shared randomness table through the
    process instead of drawing from a stream.
    """
    erase = np.asarray(erase, dtype=bool)
    spread = apply_d(c)
    if erase.shape != spread.cells.shape:
        raise ValueError("erase mask must match the post-spread window")
    out = spread.cells.copy()
    out[erase] = 0
    return Configuration(c.offset, out)


def _evolve_window(x: np.ndarray, steps: int, alpha: float, rng: RngStream) -> np.ndarray:
    # Grid draw discipline: one uniform per cell of the current window per
    # step, left to right.  Draw positions then depend only on (width, step),
    # so identically seeded runs at different alpha are exactly coupled.
    for _ in range(steps):
        y = np.maximum(x[:-1], x[1:])
        u = rng.random(y.size)
        y[u < alpha] = 0
        x = y
    return x


def simulate_density(m: int, t_max: int, alpha: float, rng: RngStream) -> np.ndarray:
    """Density of 1s among ``m`` observed cells for t = 0..t_max, from all-ones.

    The run simulates the exact dependence cone (initial width ``m + t_max``),
    so the reported densities carry no finite-size boundary bias.  Uses the
    coupled per-window-cell draw discipline (see ``_evolve_window``).
    """
    if m <= 0:
        raise ValueError("m must be positive")
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    x = np.ones(m + t_max, dtype=np.uint8)
    out = np.empty(t_max + 1)
    out[0] = 1.0
    for t in range(1, t_max + 1):
        x = _evolve_window(x, 1, alpha, rng)
        out[t] = x[:m].mean()
    return out


def density_replicas(
    m: int, t_max: int, alpha: float, rng: RngStream, replicas: int
) -> np.ndarray:
    """Stack of ``simulate_density`` trajectories, replica r on stream ``rng.replica(r)``."""
    if replicas <= 0:
        raise ValueError("replicas must be positive")
    return np.stack(
        [simulate_density(m, t_max, alpha, rng.replica(r)) for r in range(replicas)]
    )


class ProbabilityEstimate(NamedTuple):
    estimate: float
    stderr: float
    replicas: int


def prob_all_zero_estimate(
    m: int,
    t: int,
    alpha: float,
    replicas: int,
    rng: RngStream,
    batch: int = 4096,
) -> ProbabilityEstimate:
    """Monte Carlo estimate of P(leftmost m cells are all 0 at time t), from all-ones.

    Replica r draws its whole per-window-cell table from stream
    ``rng.replica(r)`` up front, so the batched lockstep evolution below gives
    bit-identical results to running each replica sequentially.  The standard
    error is the binomial one, sqrt(p(1-p)/N).
    """
    alpha = _check_alpha(alpha)
    if m <= 0 or t < 0:
        raise ValueError("need m >= 1 and t >= 0")
    if replicas < 100:
        raise ValueError("replicas must be at least 100")
    width = m + t
    draws = t * width - t * (t + 1) // 2  # sum of post-spread widths
    hits = 0
    for start in range(0, replicas, batch):
        count = min(batch, replicas - start)
        tables = np.empty((count, draws))
        for j in range(count):
            tables[j] = rng.replica(start + j).random(draws)
        state = np.ones((count, width), dtype=np.uint8)
        cursor = 0
        for s in range(1, t + 1):
            k = width - s
            y = np.maximum(state[:, :-1], state[:, 1:])
            y[tables[:, cursor:cursor + k] < alpha] = 0
            state = y
            cursor += k
        # after t steps the window is exactly the m observed cells
        hits += int((state.max(axis=1) == 0).sum())
    p_hat = hits / replicas
    stderr = float(np.sqrt(p_hat * (1.0 - p_hat) / replicas))
    return ProbabilityEstimate(p_hat, stderr, replicas)

"""Dual-graph path counting: admissible bond words, weights, and level tables.

Blocked percolation corresponds to a crossing of the dual graph, built from
three oriented bond types:

    kind 1: shift (-1, -1), always open
    kind 2: shift (+2,  0), open with probability alpha
    kind 3: shift (-1, +1), always open

A counted path starts at the origin with a kind-1 bond and obeys the factor
rules: the two-letter factors 13 and 31 and the three-letter factors 123 and
321 never occur.  Its weight is alpha^k with k the number of kind-2 bonds,
kept here as an exact integer-coefficient polynomial in alpha; floats enter
only when a polynomial is finally evaluated.

``S[(r, i, t)]`` at level n is the total weight of the n-bond paths ending at
(i, t) whose last bond is r.  Two independent routes produce these tables: a
depth-first enumeration of the words, and a local recurrence over the last
bond (two-bond cross terms resolve the three-letter rules).  They agree
exactly, level for level; the consistency suite checks that.

The factor rules alone do not prevent a word from revisiting a vertex (the
first closed circuit, 1 1 2 2 3 3, appears at n = 6).  The default family
therefore dominates the strictly self-avoiding one, which is the safe side
for every bound built on these tables; pass ``self_avoiding=True`` to
enumerate the loopless family instead.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator

DEFAULT_ENUMERATION_CAP = 14

Key = tuple[int, int, int]  # (last bond r, column i, row t)
Table = dict[Key, "AlphaPolynomial"]


class EnumerationLimitError(RuntimeError):
    """Raised when a requested level exceeds the enumeration cap."""


class AlphaPolynomial:
    """Polynomial in alpha with nonnegative integer coefficients.

    Index k holds the coefficient of alpha^k.  Immutable; trailing zeros are
    stripped so equality is structural.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients=()):
        coeffs = list(int(c) for c in coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if any(c < 0 for c in coeffs):
            raise ValueError("coefficients must be nonnegative")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("AlphaPolynomial is immutable")

    @classmethod
    def zero(cls) -> "AlphaPolynomial":
        return cls()

    @classmethod
    def monomial(cls, k: int, count: int = 1) -> "AlphaPolynomial":
        return cls((0,) * k + (count,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def items(self) -> Iterator[tuple[int, int]]:
        for k, c in enumerate(self.coefficients):
            if c:
                yield k, c

    def __add__(self, other: "AlphaPolynomial") -> "AlphaPolynomial":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        return AlphaPolynomial(
            tuple(x + (b[k] if k < len(b) else 0) for k, x in enumerate(a))
        )

    def shift(self, k: int = 1) -> "AlphaPolynomial":
        """Multiply by alpha^k."""
        if not self.coefficients:
            return self
        return AlphaPolynomial((0,) * k + self.coefficients)

    def __call__(self, alpha: float) -> float:
        out = 0.0
        for c in reversed(self.coefficients):
            out = out * alpha + c
        return out

    def total(self) -> int:
        """Sum of coefficients (the path count behind this entry)."""
        return sum(self.coefficients)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlphaPolynomial) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __repr__(self) -> str:
        return f"AlphaPolynomial({list(self.coefficients)})"


class DualBondType(enum.IntEnum):
    """The three oriented dual bond kinds."""

    DOWN_LEFT = 1
    HORIZONTAL = 2
    UP_LEFT = 3

    @property
    def shift(self) -> tuple[int, int]:
        return _SHIFT[self.value]

    @property
    def weight_exponent(self) -> int:
        """Power of alpha one bond of this kind contributes."""
        return 1 if self is DualBondType.HORIZONTAL else 0

    def open_probability(self, alpha: float) -> float:
        return float(alpha) if self is DualBondType.HORIZONTAL else 1.0


_SHIFT = {1: (-1, -1), 2: (2, 0), 3: (-1, 1)}
_FORBIDDEN_PAIRS = {(1, 3), (3, 1)}
_FORBIDDEN_TRIPLES = {(1, 2, 3), (3, 2, 1)}


def _allowed_next(prev2: int | None, prev1: int) -> tuple[int, ...]:
    out = []
    if prev1 != 3 and not (prev2 == 3 and prev1 == 2):
        out.append(1)
    out.append(2)
    if prev1 != 1 and not (prev2 == 1 and prev1 == 2):
        out.append(3)
    return tuple(out)


@dataclass(frozen=True)
class NicePath:
    """An origin-rooted dual path, stored as its bond word."""

    bonds: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bonds:
            raise ValueError("a path has at least one bond")
        if any(b not in (1, 2, 3) for b in self.bonds):
            raise ValueError("bond kinds are 1, 2, 3")

    @property
    def endpoint(self) -> tuple[int, int]:
        i = sum(_SHIFT[b][0] for b in self.bonds)
        t = sum(_SHIFT[b][1] for b in self.bonds)
        return (i, t)

    @property
    def weight_exponent(self) -> int:
        return sum(1 for b in self.bonds if b == 2)

    def weight(self, alpha: float) -> float:
        return float(alpha) ** self.weight_exponent

    def vertices(self) -> list[tuple[int, int]]:
        out = [(0, 0)]
        i = t = 0
        for b in self.bonds:
            di, dt = _SHIFT[b]
            i, t = i + di, t + dt
            out.append((i, t))
        return out

    def is_loopless(self) -> bool:
        verts = self.vertices()
        return len(set(verts)) == len(verts)

    def forbidden_factor(self) -> tuple[int, ...] | None:
        """The first forbidden factor occurring in the word, if any."""
        w = self.bonds
        for k in range(len(w) - 1):
            if w[k : k + 2] in _FORBIDDEN_PAIRS:
                return w[k : k + 2]
        for k in range(len(w) - 2):
            if w[k : k + 3] in _FORBIDDEN_TRIPLES:
                return w[k : k + 3]
        return None

    def is_admissible(self, require_loopless: bool = False) -> bool:
        if self.bonds[0] != 1 or self.forbidden_factor() is not None:
            return False
        return self.is_loopless() if require_loopless else True


def _check_level(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > cap:
        raise EnumerationLimitError(
            f"level {n} exceeds the enumeration cap {cap}"
        )


def iter_nice_paths(
    n: int,
    bound: int | None = None,
    *,
    self_avoiding: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[NicePath]:
    """Depth-first generation of all admissible n-bond words (first bond kind 1)."""
    _check_level(n, cap)
    if bound is None:
        bound = 2 * n
    elif bound < n:
        raise ValueError("bound must be at least n")

    word = [1]
    visited = {(0, 0), (-1, -1)}

    def rec(i: int, t: int):
        if len(word) == n:
            yield NicePath(tuple(word))
            return
        prev1 = word[-1]
        prev2 = word[-2] if len(word) >= 2 else None
        for b in _allowed_next(prev2, prev1):
            di, dt = _SHIFT[b]
            ni, nt = i + di, t + dt
            if abs(ni) > bound or abs(nt) > bound:
                continue
            if self_avoiding and (ni, nt) in visited:
                continue
            word.append(b)
            if self_avoiding:
                visited.add((ni, nt))
            yield from rec(ni, nt)
            if self_avoiding:
                visited.remove((ni, nt))
            word.pop()

    yield from rec(-1, -1)


def enumerate_nice_paths(
    n: int,
    bound: int | None = None,
    *,
    self_avoiding: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Table:
    """Level-n table (r, i, t) -> weight polynomial, by exhaustive enumeration.

    The default family is every factor-admissible word; ``self_avoiding=True``
    additionally forbids vertex revisits (see the module docstring for why the
    two differ from n = 6 on).
    """
    _check_level(n, cap)
    if bound is None:
        bound = 2 * n
    elif bound < n:
        raise ValueError("bound must be at least n")

    counts: dict[Key, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    word = [1]
    visited = {(0, 0), (-1, -1)}

    def rec(i: int, t: int, k: int) -> None:
        if len(word) == n:
            counts[(word[-1], i, t)][k] += 1
            return
        prev1 = word[-1]
        prev2 = word[-2] if len(word) >= 2 else None
        for b in _allowed_next(prev2, prev1):
            di, dt = _SHIFT[b]
            ni, nt = i + di, t + dt
            if abs(ni) > bound or abs(nt) > bound:
                continue
            if self_avoiding and (ni, nt) in visited:
                continue
            word.append(b)
            if self_avoiding:
                visited.add((ni, nt))
            rec(ni, nt, k + (1 if b == 2 else 0))
            if self_avoiding:
                visited.remove((ni, nt))
            word.pop()

    rec(-1, -1, 0)
    return {
        key: AlphaPolynomial(
            tuple(kc.get(k, 0) for k in range(max(kc) + 1))
        )
        for key, kc in counts.items()
    }


def _recurrence_levels(n_max: int, cross_column: int) -> dict[int, Table]:
    """Levels 1..n_max via the last-bond recurrence.

    Single-bond moves handle suffixes 11, 2*, 33; the two-bond cross terms
    append "21" (after last bond 1 or 2) and "23" (after 2 or 3), which is
    exactly what the three-letter factor rules leave admissible.  A two-bond
    cross move lands ``cross_column`` columns right of its source: 1 for the
    exact bond shifts ((2,0)+(-1,-+1)), 0 for the convention baked into the
    certification transfer matrix (one power of p lower per cross term); the
    verify report documents where the latter parts company with enumeration.
    """
    acc: dict[int, dict[Key, dict[int, int]]] = {
        0: {},
        1: {(1, -1, -1): {0: 1}},
    }
    for n in range(2, n_max + 1):
        out: dict[Key, dict[int, int]] = defaultdict(lambda: defaultdict(int))
        for (r, i, t), poly in acc[n - 1].items():
            if r == 1:  # suffix "11"
                dest = out[(1, i - 1, t - 1)]
                for k, c in poly.items():
                    dest[k] += c
            dest = out[(2, i + 2, t)]  # appending 2 is always admissible
            for k, c in poly.items():
                dest[k + 1] += c
            if r == 3:  # suffix "33"
                dest = out[(3, i - 1, t + 1)]
                for k, c in poly.items():
                    dest[k] += c
        for (r, i, t), poly in acc[n - 2].items():
            if r in (1, 2):  # suffix "21", kind-2 bond carries the alpha
                dest = out[(1, i + cross_column, t - 1)]
                for k, c in poly.items():
                    dest[k + 1] += c
            if r in (2, 3):  # suffix "23"
                dest = out[(3, i + cross_column, t + 1)]
                for k, c in poly.items():
                    dest[k + 1] += c
        acc[n] = {key: dict(v) for key, v in out.items()}
    levels: dict[int, Table] = {}
    for n in range(1, n_max + 1):
        levels[n] = {
            key: AlphaPolynomial(tuple(kc.get(k, 0) for k in range(max(kc) + 1)))
            for key, kc in acc[n].items()
        }
    return levels


def s_table_recurrence(n_max: int) -> dict[int, Table]:
    """Tables for all levels n <= n_max from the initial condition and the recurrence.

    Initial condition: the single one-bond path, kind 1 ending at (-1, -1).
    Uses exact bond shifts throughout, so the result equals
    ``enumerate_nice_paths`` entry for entry at every level.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return _recurrence_levels(n_max, cross_column=1)


def s_table_recurrence_matrix_convention(n_max: int) -> dict[int, Table]:
    """Recurrence variant with the cross terms one column lower.

    This is the convention the certification transfer matrix encodes.  It
    deviates from path enumeration starting at level 3; the verify command
    reports the first differing entries.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return _recurrence_levels(n_max, cross_column=0)


def generating_sum(
    table: Table, p: float, q: float, alpha: float
) -> tuple[float, float, float]:
    """Per-last-bond sums of weight(alpha) * p^i * q^t over one level's table."""
    out = [0.0, 0.0, 0.0]
    for (r, i, t), poly in table.items():
        out[r - 1] += poly(alpha) * p**i * q**t
    return (out[0], out[1], out[2])


@dataclass(frozen=True)
class FiniteVertexBound:
    """Truncated crossing-weight sum at a fixed endpoint, with its truncation level."""

    value: AlphaPolynomial | float
    m: int
    n_max: int
    alpha: float | None


def finite_vertex_bound(
    m: int,
    n_max: int,
    alpha: float | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> FiniteVertexBound:
    """Sum of S_r(2m, 0, n) over r and n <= n_max: a truncation of the crossing bound.

    Symbolic (an :class:`AlphaPolynomial`) when ``alpha`` is None, else the
    evaluated float.  Every term is nonnegative, so truncations increase
    monotonically toward the full bound.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    _check_level(n_max, cap)
    levels = s_table_recurrence(n_max)
    total = AlphaPolynomial.zero()
    for n in range(1, n_max + 1):
        for r in (1, 2, 3):
            poly = levels[n].get((r, 2 * m, 0))
            if poly is not None:
                total = total + poly
    if alpha is None:
        return FiniteVertexBound(total, m, n_max, None)
    return FiniteVertexBound(total(float(alpha)), m, n_max, float(alpha))


def table_rows(levels: dict[int, Table]) -> Iterator[tuple[int, int, int, int, int, int]]:
    """Flatten level tables to sorted (n, r, i, t, k, count) rows, one per nonzero coefficient."""
    for n in sorted(levels):
        for (r, i, t) in sorted(levels[n]):
            for k, c in levels[n][(r, i, t)].items():
                yield (n, r, i, t, k, c)

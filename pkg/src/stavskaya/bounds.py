"""Transfer-matrix certification of survival at small erasure rates.

The crossing weights of the dual graph, summed with column weight p^i and row
weight q^t, obey a two-level linear recurrence.  When the spectral radius of
its 3x3 transfer matrix stays below one, the full weighted series converges,
and a window of m cells with p^(-2m) * series_total < 1 gives an explicit
certificate that the all-zero event keeps probability below one forever, i.e.
the process started from all ones never converges to the all-zero measure.

Admissible weights: p in (1, (1+sqrt(5))/2] with 1 <= q <= 1/sqrt(p(p-1)).
At the right endpoint p = phi, q = 1, the leading eigenvalue has the closed
form implemented by ``lambda_closed_form``; it crosses 1 near alpha = 0.1143,
which is the certified threshold this engine reproduces.

Two matrix variants exist.  ``build_matrix`` is the certification matrix: its
mixed cross terms (alpha/q and alpha*q) weight the horizontal bond against the
row only, which is the convention the closed-form eigenvalue and the certified
threshold are built on.  ``build_dominating_matrix`` carries the full p^2
column weight through the cross terms (alpha*p/q, alpha*p*q); it dominates
the exact two-step path transfer entrywise and is what the consistency suite
compares against the path tables.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ._version import CODE_VERSION

PHI = (1.0 + math.sqrt(5.0)) / 2.0

_EPS = 2.220446049250313e-16
_REGION_SLACK = 1e-9


class ConvergenceError(RuntimeError):
    """Eigenvalue iteration failed to converge or failed its cross-check."""


class SeriesDivergentError(RuntimeError):
    """The weighted path series does not converge (spectral radius >= 1)."""


def region_boundary_q(p: float) -> float:
    """Largest admissible row weight for a given column weight, 1/sqrt(p(p-1))."""
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    return 1.0 / math.sqrt(p * (p - 1.0))


@dataclass(frozen=True)
class GeneratingParams:
    """Admissible (p, q, alpha) for the weighted path sums."""

    p: float
    q: float
    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 1.0 < self.p <= PHI + _REGION_SLACK:
            raise ValueError(f"p must lie in (1, {PHI}], got {self.p}")
        q_max = region_boundary_q(self.p)
        if not 1.0 - _REGION_SLACK <= self.q <= q_max + _REGION_SLACK:
            raise ValueError(
                f"q must lie in [1, {q_max}] for p={self.p}, got {self.q}"
            )

    @classmethod
    def region(cls, p: float, alpha: float) -> "GeneratingParams":
        """Parameters on the region boundary, q = 1/sqrt(p(p-1))."""
        return cls(p, max(1.0, region_boundary_q(p)), alpha)


@dataclass(frozen=True)
class TransferMatrix:
    """A 3x3 nonnegative transfer matrix over the last-bond states."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=float)
        if entries.shape != (3, 3):
            raise ValueError("transfer matrix must be 3x3")
        object.__setattr__(self, "entries", entries)

    def validate(self) -> None:
        if np.any(self.entries < 0.0):
            raise ValueError("transfer matrix entries must be nonnegative")
        if self.entries[0, 2] != 0.0 or self.entries[2, 0] != 0.0:
            raise ValueError("entries (1,3) and (3,1) must vanish")


def build_matrix(gp: GeneratingParams) -> TransferMatrix:
    """Certification transfer matrix at the given weights."""
    p, q, a = gp.p, gp.q, gp.alpha
    base = p**-2 * q**-2 + a / q
    horiz = a * p / q + a**2 * p**4
    up = a * q + p**-2 * q**2
    m = TransferMatrix(np.array([
        [base, horiz, 0.0],
        [base, horiz + a * p * q, up],
        [0.0, a**2 * p**4 + a * p * q, up],
    ]))
    m.validate()
    return m


def build_dominating_matrix(gp: GeneratingParams) -> TransferMatrix:
    """Exact-shift variant: cross terms carry the full p^2 horizontal weight.

    Entrywise upper bound on the true two-step path transfer from any
    last-two-bond state, and exact from the pure kind-1 state, so level-3
    weighted sums are predicted exactly from level 1.
    """
    p, q, a = gp.p, gp.q, gp.alpha
    base = p**-2 * q**-2 + a * p / q
    horiz = a * p / q + a**2 * p**4
    up = a * p * q + p**-2 * q**2
    m = TransferMatrix(np.array([
        [base, horiz, 0.0],
        [base, horiz + a * p * q, up],
        [0.0, a**2 * p**4 + a * p * q, up],
    ]))
    m.validate()
    return m


def _char_coefficients(m: np.ndarray) -> tuple[float, float, float]:
    # chi(x) = x^3 - c2 x^2 + c1 x - c0
    c2 = m[0, 0] + m[1, 1] + m[2, 2]
    c1 = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    c0 = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )
    return float(c2), float(c1), float(c0)


def spectral_radius(matrix, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Perron root of a nonnegative 3x3 matrix.

    Power iteration drives the estimate; an Aitken extrapolation of the
    eigenvalue sequence supplies the stopping test (it also rescues the
    near-degenerate cases where raw iteration slows down), and a Newton polish
    on the characteristic cubic sharpens the accepted value.  The result is
    cross-checked against an independent direct solve of the cubic; the two
    must agree within 10*tol, widened only where the cubic's root separation
    makes roots intrinsically unresolvable (conditioning limit ~sqrt(eps)).
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    m = matrix.entries if isinstance(matrix, TransferMatrix) else np.asarray(matrix, dtype=float)
    if m.shape != (3, 3):
        raise ValueError("spectral_radius expects a 3x3 matrix")
    if np.any(m < 0.0) or not np.all(np.isfinite(m)):
        raise ValueError("matrix must be nonnegative and finite")
    if not m.any():
        return 0.0

    m11, m12, m13 = (float(x) for x in m[0])
    m21, m22, m23 = (float(x) for x in m[1])
    m31, m32, m33 = (float(x) for x in m[2])

    window = 64  # wide-window extrapolation tier for near-degenerate spectra
    v1 = v2 = v3 = 1.0 / 3.0
    lam = 0.0
    hist: deque[float] = deque(maxlen=2 * window + 1)
    ait_prev = None
    ait_stable = 0
    ext_prev = None
    accepted = None
    for n in range(max_iter):
        w1 = m11 * v1 + m12 * v2 + m13 * v3
        w2 = m21 * v1 + m22 * v2 + m23 * v3
        w3 = m31 * v1 + m32 * v2 + m33 * v3
        s = w1 + w2 + w3
        if s == 0.0:
            accepted = 0.0  # positive vector annihilated: radius 0
            break
        lam_new = s
        v1, v2, v3 = w1 / s, w2 / s, w3 / s
        diff = abs(lam_new - lam)
        lam = lam_new
        scale = max(1.0, abs(lam))
        if diff <= max(tol * 1e-3, 8.0 * _EPS) * scale:
            accepted = lam
            break
        hist.append(lam)
        if len(hist) >= 3:
            # one-step Aitken: clean geometric or oscillatory sequences
            l0, l1, l2 = hist[-3], hist[-2], hist[-1]
            denom = l2 - 2.0 * l1 + l0
            if denom != 0.0:
                ait = l2 - (l2 - l1) ** 2 / denom
                if ait_prev is not None and abs(ait - ait_prev) <= max(
                    tol * 1e-2, 8.0 * _EPS
                ) * max(1.0, abs(ait)):
                    ait_stable += 1
                    if ait_stable >= 3:
                        accepted = ait
                        break
                else:
                    ait_stable = 0
                ait_prev = ait
        if len(hist) == 2 * window + 1 and n % window == 0:
            # windowed geometric extrapolation: the wide differences dodge the
            # cancellation noise that stalls one-step Aitken when the two
            # leading eigenvalues nearly coincide; the Newton polish below
            # finishes the accuracy
            d_new = hist[-1] - hist[-1 - window]
            d_old = hist[-1 - window] - hist[0]
            if d_old != 0.0:
                ratio = d_new / d_old
                if 0.0 < ratio < 1.0:
                    ext = hist[-1] + d_new * ratio / (1.0 - ratio)
                    if ext_prev is not None and abs(ext - ext_prev) <= 1e-9 * max(
                        1.0, abs(ext)
                    ):
                        accepted = ext
                        break
                    ext_prev = ext
    if accepted is None:
        raise ConvergenceError(
            f"power iteration did not converge within {max_iter} iterations"
        )

    c2, c1, c0 = _char_coefficients(m)

    def chi(x: float) -> float:
        return ((x - c2) * x + c1) * x - c0

    def chi_prime(x: float) -> float:
        return (3.0 * x - 2.0 * c2) * x + c1

    # Newton polish; quadratic from a good start, skipped at stationary points.
    lam_p = accepted
    for _ in range(40):
        dchi = chi_prime(lam_p)
        if dchi == 0.0 or not math.isfinite(dchi):
            break
        step = chi(lam_p) / dchi
        lam_p -= step
        if abs(step) <= _EPS * max(1.0, abs(lam_p)):
            break
    if not math.isfinite(lam_p) or abs(lam_p - accepted) > 0.05 * max(1.0, abs(accepted)):
        lam_p = accepted  # polish left the neighbourhood; trust the iteration

    roots = np.roots([1.0, -c2, c1, -c0])
    real_parts = [
        r.real for r in roots if abs(r.imag) <= 1e-6 * max(1.0, abs(r))
    ]
    cubic_max = max(real_parts) if real_parts else float(max(r.real for r in roots))
    scale = max(1.0, abs(cubic_max))
    # root-conditioning bound: an ill-separated root cannot be located better
    # than eval-noise / |chi'|; cap the widening at 1e-5.
    denom = max(abs(chi_prime(cubic_max)), 1e-300)
    cond = 64.0 * _EPS * scale**3 / denom
    allowance = max(10.0 * tol * scale, min(cond, 1e-5 * scale))
    for candidate in (lam_p, accepted):
        if abs(candidate - cubic_max) <= allowance:
            return float(candidate)
    raise ConvergenceError(
        "eigenvalue cross-check failed: power iteration gives "
        f"{lam_p!r}, cubic solve gives {cubic_max!r}"
    )


def lambda_closed_form(alpha: float) -> float:
    """Closed-form leading eigenvalue at the endpoint weights p = phi, q = 1."""
    a = float(alpha)
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {a}")
    s5 = math.sqrt(5.0)
    f = (
        14.0
        + 28.0 * a**2 * s5
        + 72.0 * a**2
        + 94.0 * a**4
        + 4.0 * a * s5
        + 4.0 * a
        - 6.0 * s5
        + 172.0 * a**3
        + 76.0 * a**3 * s5
        + 42.0 * a**4 * s5
    )
    if f < 0.0:
        raise ArithmeticError(f"discriminant negative at alpha={a}")
    return 0.25 * (2.0 * a * s5 + 3.0 * a**2 * s5 + 7.0 * a**2 + 4.0 * a + 3.0 - s5) + math.sqrt(f) / 4.0


def dominant_minors(gp: GeneratingParams) -> tuple[float, float, float]:
    """Leading principal minors of I - M; all positive exactly when the radius is below 1."""
    m = build_matrix(gp).entries
    a = np.eye(3) - m
    d1 = a[0, 0]
    d2 = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    d3 = (
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )
    return (float(d1), float(d2), float(d3))


def minor_shortcut_margin(gp: GeneratingParams) -> float:
    """The closed-form margin 1 - p^(-2)q^(-2) - alpha/p.

    A quick screening condition with the horizontal weight measured against
    the column weight p; note the matrix's own (1,1) entry carries alpha/q
    instead, so the exact minors are authoritative.  Reported alongside them.
    """
    return 1.0 - gp.p**-2 * gp.q**-2 - gp.alpha / gp.p


def _seed_sums(gp: GeneratingParams) -> tuple[np.ndarray, np.ndarray]:
    # weighted sums of the one- and two-bond path levels, in closed form
    p, q, a = gp.p, gp.q, gp.alpha
    g1 = np.array([1.0 / (p * q), 0.0, 0.0])
    g2 = np.array([p**-2 * q**-2, a * p / q, 0.0])
    return g1, g2


def series_bound(gp: GeneratingParams, tol: float = 1e-12) -> float:
    """Upper bound on the total weighted path series, all levels n >= 1.

    Both parity classes are seeded with the explicit level-1 and level-2 sums
    and closed with the geometric tail (I - M)^(-1), so the result is
    (G(1) + G(2)) (I - M)^(-1) 1.  Requires spectral radius below 1.
    """
    m = build_matrix(gp).entries
    lam = spectral_radius(m, tol=tol)
    if lam >= 1.0:
        raise SeriesDivergentError(
            f"series divergent: spectral radius {lam} >= 1 at {gp}"
        )
    g1, g2 = _seed_sums(gp)
    x = np.linalg.solve(np.eye(3) - m, np.ones(3))
    return float((g1 + g2) @ x)


def series_partial_sums(gp: GeneratingParams, max_level: int) -> np.ndarray:
    """Cumulative series partial sums T_n for n = 1..max_level.

    Levels advance by the certification matrix (level n+2 from level n), with
    the same closed-form level-1 and level-2 seeds as ``series_bound``; the
    partial sums increase monotonically toward the series total.
    """
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    m = build_matrix(gp).entries
    g_odd, g_even = _seed_sums(gp)
    out = np.empty(max_level)
    out[0] = g_odd.sum()
    if max_level >= 2:
        out[1] = out[0] + g_even.sum()
    for n in range(3, max_level + 1):
        if n % 2 == 1:
            g_odd = g_odd @ m
            out[n - 1] = out[n - 2] + g_odd.sum()
        else:
            g_even = g_even @ m
            out[n - 1] = out[n - 2] + g_even.sum()
    return out


def find_m_threshold(gp: GeneratingParams, series_total: float | None = None) -> int:
    """Smallest window size m with p^(-2m) * series_total < 1 (exists since p > 1)."""
    total = series_bound(gp) if series_total is None else float(series_total)
    shrink = gp.p ** -2
    m = 1
    bound = shrink * total
    while bound >= 1.0:
        m += 1
        bound *= shrink
        if m > 10_000:
            raise ArithmeticError("window threshold search ran away")
    return m


@dataclass(frozen=True)
class Certificate:
    """A verified witness that the process survives at one erasure rate.

    Reproducible from (alpha, p, q) alone: recomputing every derived field
    under the same code version gives bit-identical values, which is what
    ``revalidate`` checks.
    """

    alpha: float
    p: float
    q: float
    lambda_pf: float
    minors: tuple[float, float, float]
    series_total: float
    m_threshold: int
    tolerances: Mapping[str, float] = field(
        default_factory=lambda: {"lambda_tol": 1e-12, "certify_margin": 1e-9}
    )
    code_version: str = CODE_VERSION

    def bound(self, m: int | None = None) -> float:
        """The certified upper bound p^(-2m) * series_total on the all-zero probability."""
        m = self.m_threshold if m is None else m
        return self.p ** (-2 * m) * self.series_total

    def revalidate(self) -> bool:
        """Recompute every field from (alpha, p, q) and compare bit for bit."""
        fresh = evaluate_certificate(
            self.alpha,
            self.p,
            self.q,
            margin=self.tolerances["certify_margin"],
            lambda_tol=self.tolerances["lambda_tol"],
        )
        return (
            fresh is not None
            and fresh.lambda_pf == self.lambda_pf
            and fresh.minors == self.minors
            and fresh.series_total == self.series_total
            and fresh.m_threshold == self.m_threshold
        )


def evaluate_certificate(
    alpha: float,
    p: float,
    q: float,
    margin: float = 1e-9,
    lambda_tol: float = 1e-12,
) -> Certificate | None:
    """Certificate at fixed weights, or None when the radius is not below 1 - margin."""
    gp = GeneratingParams(p, q, alpha)
    lam = spectral_radius(build_matrix(gp), tol=lambda_tol)
    if not lam < 1.0 - margin:
        return None
    total = series_bound(gp, tol=lambda_tol)
    return Certificate(
        alpha=float(alpha),
        p=float(p),
        q=float(q),
        lambda_pf=lam,
        minors=dominant_minors(gp),
        series_total=total,
        m_threshold=find_m_threshold(gp, total),
        tolerances={"lambda_tol": lambda_tol, "certify_margin": margin},
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def certificate_to_json(cert: Certificate) -> str:
    """Serialize with 17 significant digits so every float round-trips exactly."""
    minors = ", ".join(_fmt(x) for x in cert.minors)
    tols = ", ".join(
        f'"{k}": {_fmt(v)}' for k, v in sorted(cert.tolerances.items())
    )
    return (
        "{\n"
        f'  "alpha": {_fmt(cert.alpha)},\n'
        f'  "p": {_fmt(cert.p)},\n'
        f'  "q": {_fmt(cert.q)},\n'
        f'  "lambda_pf": {_fmt(cert.lambda_pf)},\n'
        f'  "minors": [{minors}],\n'
        f'  "series_total": {_fmt(cert.series_total)},\n'
        f'  "m_threshold": {cert.m_threshold},\n'
        f'  "tolerances": {{{tols}}},\n'
        f'  "code_version": {json.dumps(cert.code_version)}\n'
        "}\n"
    )


def certificate_from_json(text: str) -> Certificate:
    data = json.loads(text)
    return Certificate(
        alpha=float(data["alpha"]),
        p=float(data["p"]),
        q=float(data["q"]),
        lambda_pf=float(data["lambda_pf"]),
        minors=tuple(float(x) for x in data["minors"]),
        series_total=float(data["series_total"]),
        m_threshold=int(data["m_threshold"]),
        tolerances={k: float(v) for k, v in data["tolerances"].items()},
        code_version=str(data["code_version"]),
    )


@dataclass(frozen=True)
class SearchSettings:
    """Grid resolution and margins for the certificate search."""

    p_points: int = 48
    q_points: int = 4
    margin: float = 1e-9
    lambda_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.p_points < 1 or self.q_points < 1:
            raise ValueError("grid sizes must be positive")
        if not 0.0 < self.margin < 1.0:
            raise ValueError("margin must lie in (0, 1)")


def certify_alpha(alpha: float, search: SearchSettings | None = None) -> Certificate | None:
    """Search the admissible (p, q) region for a certificate at one erasure rate.

    Grid over p in (1, phi] (endpoint included exactly) with, per p, the
    boundary q and an interior q grid down to 1.  Returns the certificate at
    the smallest spectral radius found below 1 - margin, or None when the
    whole grid fails (which is not a proof of ergodicity).
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    search = search or SearchSettings()
    best: tuple[float, float, float] | None = None  # (lam, p, q)
    for k in range(1, search.p_points + 1):
        p = 1.0 + (PHI - 1.0) * (k / search.p_points)
        q_top = max(1.0, region_boundary_q(p))
        qs = {q_top}
        qs.update(float(q) for q in np.linspace(1.0, q_top, search.q_points))
        for q in sorted(qs):
            lam = spectral_radius(
                build_matrix(GeneratingParams(p, q, alpha)), tol=search.lambda_tol
            )
            if best is None or lam < best[0]:
                best = (lam, p, q)
    if best is None or not best[0] < 1.0 - search.margin:
        return None
    return evaluate_certificate(
        alpha, best[1], best[2], margin=search.margin, lambda_tol=search.lambda_tol
    )


def max_certified_alpha(
    tol: float,
    margin: float = 1e-9,
    lambda_tol: float = 1e-12,
) -> float:
    """Supremum (to within tol) of the rates certifiable at the endpoint weights.

    Bisection on alpha over [0, 0.5] of the predicate "spectral radius at
    p = phi, q = 1 stays below 1 - margin".
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    def certifiable(a: float) -> bool:
        m = build_matrix(GeneratingParams(PHI, 1.0, a))
        return spectral_radius(m, tol=lambda_tol) < 1.0 - margin

    lo, hi = 0.0, 0.5
    if not certifiable(lo):
        raise ArithmeticError("bisection bracket invalid: alpha=0 not certifiable")
    if certifiable(hi):
        raise ArithmeticError("bisection bracket invalid: alpha=0.5 certifiable")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if certifiable(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class PqOptimum:
    """Result of the (p, q) search: argmin weights and the radius there."""

    params: GeneratingParams
    lambda_pf: float
    certifiable: bool


def optimize_pq(
    alpha: float,
    p_tol: float = 1e-5,
    lambda_tol: float = 1e-12,
) -> PqOptimum:
    """Minimize the spectral radius over the admissible (p, q) region.

    Golden-section on p along the region boundary q = 1/sqrt(p(p-1)), then a
    small pattern refinement in both coordinates, clamped to the region.  When
    no admissible point reaches a radius below 1 the best point found is
    returned with ``certifiable`` False.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")

    def lam_at(p: float, q: float) -> float:
        return spectral_radius(
            build_matrix(GeneratingParams(p, q, alpha)), tol=lambda_tol
        )

    def boundary(p: float) -> float:
        return max(1.0, region_boundary_q(p))

    lo, hi = 1.0 + 1e-9, PHI
    inv_gr = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_gr * (hi - lo)
    d = lo + inv_gr * (hi - lo)
    fc, fd = lam_at(c, boundary(c)), lam_at(d, boundary(d))
    while hi - lo > p_tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_gr * (hi - lo)
            fc = lam_at(c, boundary(c))
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_gr * (hi - lo)
            fd = lam_at(d, boundary(d))
    p_best = c if fc < fd else d
    # include the region endpoint: the boundary radius is often monotone in p
    candidates = [(lam_at(PHI, 1.0), PHI, 1.0), (min(fc, fd), p_best, boundary(p_best))]
    lam_best, p_best, q_best = min(candidates)

    # local pattern refinement over (p, q) inside the region
    step_p, step_q = 0.01, 0.01
    for _ in range(24):
        improved = False
        for dp, dq in ((step_p, 0.0), (-step_p, 0.0), (0.0, step_q), (0.0, -step_q)):
            p = min(max(1.0 + 1e-9, p_best + dp), PHI)
            q = min(max(1.0, q_best + dq), boundary(p))
            lam = lam_at(p, q)
            if lam < lam_best:
                lam_best, p_best, q_best, improved = lam, p, q, True
        if not improved:
            step_p *= 0.5
            step_q *= 0.5
            if step_p < p_tol:
                break
    return PqOptimum(
        GeneratingParams(p_best, q_best, alpha), lam_best, lam_best < 1.0
    )

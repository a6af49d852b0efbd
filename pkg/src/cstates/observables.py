"""Energy moments, the action identity, variance curves and their asymptotics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CrossCheckError, CStatesError, LabelRangeError, TruncationError
from .spectrum import Spectrum
from .state import StateCoefficients
from .weights import (
    DEFAULT_TAIL_TOL,
    EDGE_GUARD,
    WeightTable,
    _check_same_spectrum,
    check_j_range,
    compute_weights,
    power_sums,
)

# the two variance routes must agree to this relative tolerance
AGREEMENT_RTOL = 1e-8

# pairwise double sums cost O(n^2); above this truncation length the
# cross-check is skipped and the moment route stands alone
CROSS_CHECK_LIMIT = 4096

DEFAULT_FIT_CAP = 2_000_000


@dataclass(frozen=True)
class VariancePoint:
    """Energy mean/variance at one J, with the propagated truncation error.

    ``variance`` is the moment form <H^2> - <H>^2; ``double_sum`` holds the
    pairwise-route value when it was computed, and ``error`` flags grid
    points that failed instead of aborting a sweep.
    """

    J: float
    mean: float
    second_moment: float
    variance: float
    tail_bound: float
    double_sum: float | None = None
    error: str | None = None


def energy_mean(
    s: Spectrum,
    w: WeightTable,
    J: float,
    *,
    rel_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """<H> at action J: omega * (sum e_n J^n/rho_n) / (sum J^n/rho_n).

    Gamma-independent by construction; equals omega*J when the weights obey
    the action identity, which is what callers verify.
    """
    _check_same_spectrum(w, s)
    check_j_range(w, J)
    ps = power_sums(w, J, rel_tol=rel_tol)
    return s.omega * ps.s1 / ps.s0


def _double_sum_variance(w: WeightTable, J: float, k: int, omega: float) -> float:
    """Literal pairwise route: (1/2) sum (e_n - e_m)^2 t_n t_m / (sum t)^2."""
    if J == 0:
        return 0.0
    g = np.arange(k, dtype=float) * math.log(J) - w.log_rho[:k]
    t = np.exp(g - g.max())
    e = w.levels[:k]
    total = t.sum()
    num = 0.0
    block = 512
    for i in range(0, k, block):
        sl = slice(i, min(i + block, k))
        d = e[sl, None] - e[None, :]
        num += float((d * d * (t[sl, None] * t[None, :])).sum())
    return omega * omega * 0.5 * num / (total * total)


def variance(
    s: Spectrum,
    w: WeightTable,
    J: float,
    *,
    rel_tol: float = DEFAULT_TAIL_TOL,
    cross_check: bool = True,
    cross_check_limit: int = CROSS_CHECK_LIMIT,
) -> VariancePoint:
    """Energy variance at J, computed as <H^2> - <H>^2 and cross-checked
    against the symmetric double sum when the truncation is short enough."""
    _check_same_spectrum(w, s)
    check_j_range(w, J)
    om = s.omega
    ps = power_sums(w, J, rel_tol=rel_tol, need_second=True)
    m1 = ps.s1 / ps.s0
    m2 = ps.s2 / ps.s0
    v = (m2 - m1 * m1) * om * om

    # first-order propagation of the certified tails through the ratios
    d1 = (ps.t1 + m1 * ps.t0) / ps.s0
    d2 = (ps.t2 + m2 * ps.t0) / ps.s0
    dv = om * om * (d2 + 2.0 * abs(m1) * d1 + d1 * d1)

    vd = None
    if cross_check and ps.terms_used <= cross_check_limit:
        vd = _double_sum_variance(w, J, ps.terms_used, om)
        allowed = max(AGREEMENT_RTOL * max(abs(v), abs(vd)), dv)
        if abs(v - vd) > allowed:
            raise CrossCheckError(
                f"variance routes disagree at J={J}: moment form {v!r} vs "
                f"double sum {vd!r} (allowed {allowed:.3e})"
            )
    return VariancePoint(
        J=float(J),
        mean=om * m1,
        second_moment=om * om * m2,
        variance=v,
        tail_bound=dv,
        double_sum=vd,
    )


def variance_curve(
    s: Spectrum,
    w: WeightTable,
    j_grid: Sequence[float],
    **kwargs,
) -> list[VariancePoint]:
    """variance() over a grid; failing points come back flagged, not raised."""
    out: list[VariancePoint] = []
    for J in j_grid:
        try:
            out.append(variance(s, w, float(J), **kwargs))
        except CStatesError as exc:
            out.append(
                VariancePoint(
                    J=float(J),
                    mean=math.nan,
                    second_moment=math.nan,
                    variance=math.nan,
                    tail_bound=math.nan,
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
    return out


_SLOPE_GRID = (1e-3, 1e-4, 1e-5)


def small_j_slope(s: Spectrum, w: WeightTable, *, rel_tol: float = 1e-10) -> float:
    """Dimensionless limit of v(J)/(omega^2 J) as J -> 0, by Richardson extrapolation.

    v(J)/J has a regular expansion in J, so two elimination levels over the
    decade-spaced grid remove the J and J^2 terms; the limit equals e_1.
    The default certificate target is looser than elsewhere because a short
    explicit list cannot push relative tails below ~J^L/rho_L; 1e-10 on the
    moments leaves the extrapolated slope far inside its 1e-4 contract.
    """
    om2 = s.omega * s.omega
    u = []
    for J in _SLOPE_GRID:
        u.append(variance(s, w, J, rel_tol=rel_tol, cross_check=False).variance / (om2 * J))
    r1 = (10.0 * u[1] - u[0]) / 9.0
    r2 = (10.0 * u[2] - u[1]) / 9.0
    out = (100.0 * r2 - r1) / 99.0
    if not math.isfinite(out):
        raise TruncationError(
            f"slope extrapolation unstable: v/J samples {u} at J={_SLOPE_GRID}"
        )
    return float(out)


def _fit_loglog(js: np.ndarray, vs: np.ndarray) -> tuple[float, float]:
    x = np.log1p(-js)  # log(1 - J), accurate near J* = 1
    y = np.log(vs)
    design = np.vstack([x, np.ones_like(x)]).T
    slope, intercept = np.linalg.lstsq(design, y, rcond=None)[0]
    return float(slope), float(intercept)


def near_jstar_exponent(
    s: Spectrum,
    w: WeightTable,
    fit_window: Sequence[float] | None = None,
    *,
    n_cap: int = DEFAULT_FIT_CAP,
    rel_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """Least-squares slope of log v(J) against log(1-J) on a window near J* = 1.

    The default window 1 - 10^(-1.5 k), k = 1..5 is clipped by the edge
    guard and by truncation feasibility (points whose series do not converge
    within n_cap terms are dropped).  Requires a declared J* equal to 1.
    """
    if w.j_star_is_estimate or not math.isfinite(w.j_star) or abs(w.j_star - 1.0) > 1e-9:
        raise LabelRangeError(
            "near-J* analysis needs a spectrum with declared accumulation point J* = 1"
        )
    if fit_window is None:
        fit_window = [1.0 - 10.0 ** (-1.5 * k) for k in range(1, 6)]
    window = sorted(J for J in fit_window if 0.0 < J <= 1.0 - EDGE_GUARD)

    table = w
    big: WeightTable | None = None
    points: list[tuple[float, float]] = []
    for J in window:
        try:
            vp = variance(s, table, J, rel_tol=rel_tol, cross_check=False)
        except TruncationError:
            if big is None:
                if n_cap <= w.n_max:
                    continue
                big = compute_weights(s, n_cap)
            try:
                vp = variance(s, big, J, rel_tol=rel_tol, cross_check=False)
            except TruncationError:
                continue
        if vp.variance > 0:
            points.append((J, vp.variance))
    if len(points) < 3:
        raise TruncationError(
            f"only {len(points)} of {len(window)} window points were feasible within "
            f"{max(n_cap, w.n_max)} terms; supply a window farther from J*"
        )
    js = np.array([p[0] for p in points])
    vs = np.array([p[1] for p in points])
    slope, _ = _fit_loglog(js, vs)
    return slope


class JstarCoefficient(NamedTuple):
    value: float
    converged: bool


def near_jstar_coefficient(s: Spectrum, w: WeightTable) -> JstarCoefficient:
    """Leading coefficient of v(J)/(omega^2 (1-J)) as J -> 1, by direct summation.

    For spectra whose weights converge to a positive limit this equals
    rho_inf * sum_m gap_m^2 / rho_m (the two halves of the squared level
    difference contribute equally; an Abel summation of sum Delta_m/rho_m
    shows the same value).  ``converged`` is False when the partial sums are
    still moving at n_max, e.g. when rho_n -> 0.
    """
    if w.j_star_is_estimate or not math.isfinite(w.j_star) or abs(w.j_star - 1.0) > 1e-9:
        raise LabelRangeError(
            "near-J* analysis needs a spectrum with declared accumulation point J* = 1"
        )
    gaps = s.gap_array(w.n_max)
    with np.errstate(over="ignore", divide="ignore"):
        terms = gaps * gaps / np.exp(w.log_rho)
        total = float(terms.sum())
        head = float(terms[: max(1, int(0.9 * len(terms)))].sum())
    converged = math.isfinite(total) and (total - head) <= 0.01 * total
    rho_inf = float(np.exp(w.log_rho[-1]))
    return JstarCoefficient(value=rho_inf * total, converged=converged)


def moments_from_state(s: Spectrum, x: StateCoefficients) -> tuple[float, float, float]:
    """(mean, second moment, variance) evaluated from amplitudes directly.

    Used to confirm gamma plays no role: the phases cancel in |c_n|^2.
    """
    p = np.abs(x.c) ** 2
    total = p.sum()
    e = s.e_array(len(p) - 1)
    m1 = float((e * p).sum() / total)
    m2 = float((e * e * p).sum() / total)
    om = s.omega
    return om * m1, om * om * m2, om * om * (m2 - m1 * m1)

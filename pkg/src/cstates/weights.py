"""Weight factors rho_n, convergence radius, and certified power-series sums.

The weights fixed by the action identity are running products of the
dimensionless levels, rho_n = e_n * e_{n-1} * ... * e_1, held in log form
because they overflow (harmonic: n!) or converge to constants below 1
(hydrogen-like: 1/2) long before n_max is reached.

All series evaluated here have nonnegative terms t_n = J^n / rho_n (times
e_n powers), so a partial sum is a lower bound and a geometric-domination
argument gives a certified upper bound on the remainder: levels increase,
hence for every m > n0 the term ratio t_{m+1}/t_m = J/e_{m+1} is at most
q = J/e_{n0+1} and the tail is at most t_{n0} * q / (1 - q) once q < 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CertificationError,
    LabelRangeError,
    SpectrumError,
    SpectrumMismatchError,
    TruncationError,
)
from .spectrum import Spectrum, validate

DEFAULT_TAIL_TOL = 1e-12
DEFAULT_NMAX = 20_000
EDGE_GUARD = 1e-6

# keeps reported tail bounds nonzero after term underflow
_TERM_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class WeightTable:
    """log rho_n and the levels it was built from, for n = 0..n_max.

    ``j_star`` is the radius of convergence of sum J^n/rho_n; it equals the
    level accumulation point when that is declared, otherwise it is the
    finite-sample estimate exp(log_rho[n_max]/n_max) and is flagged as such.
    ``next_level_bound`` is a certified lower bound on e_{n_max+1}, used to
    close tail bounds at the end of the table.
    """

    spectrum: Spectrum
    log_rho: np.ndarray
    levels: np.ndarray
    n_max: int
    j_star: float
    j_star_is_estimate: bool
    next_level_bound: float


@dataclass(frozen=True)
class SeriesValue:
    """A series evaluation: the true sum lies in [value, value + tail_bound]."""

    value: float
    tail_bound: float
    terms_used: int


def compute_weights(s: Spectrum, n_max: int = DEFAULT_NMAX) -> WeightTable:
    """Accumulate log rho_n = sum_{l<=n} log e_l for n = 0..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    report = validate(s, n_max)
    if not report.ok:
        details = "; ".join(f"n={n}: {msg}" for n, msg in report.violations)
        raise SpectrumError(f"spectrum '{s.name}' failed validation: {details}")
    e = s.e_array(n_max)
    if not e[1] > 0:
        raise SpectrumError("e_1 must be positive")
    log_rho = np.concatenate([[0.0], np.cumsum(np.log(e[1:]))])

    if s.e_star is not None:
        j_star = float(s.e_star)
        estimated = False
    else:
        j_star = float(np.exp(log_rho[-1] / n_max))
        estimated = True

    if s.max_index is None:
        next_bound = float(s.e(n_max + 1))
    else:
        # future levels of any strictly increasing continuation exceed the last one
        next_bound = float(e[-1])

    return WeightTable(
        spectrum=s,
        log_rho=log_rho,
        levels=e,
        n_max=int(n_max),
        j_star=j_star,
        j_star_is_estimate=estimated,
        next_level_bound=next_bound,
    )


def convergence_radius(w: WeightTable) -> float:
    """Radius of convergence J* of the normalization series (inf representable)."""
    return w.j_star


def check_j_range(w: WeightTable, J: float, *, edge_guard: float = EDGE_GUARD) -> None:
    """Reject labels outside [0, J*(1 - edge_guard)].

    An estimated radius is never used to allow or deny evaluation; in that
    case only nonnegativity is enforced and truncation certificates decide.
    """
    if not isinstance(J, (int, float)) or not math.isfinite(J):
        raise LabelRangeError(f"J must be a finite number, got {J!r}")
    if J < 0:
        raise LabelRangeError(f"J must be nonnegative, got {J}")
    if w.j_star_is_estimate or math.isinf(w.j_star):
        return
    if J >= w.j_star or J > w.j_star * (1.0 - edge_guard):
        raise LabelRangeError(
            f"J={J} too close to or beyond the convergence radius J*={w.j_star} "
            f"(guard {edge_guard:g})"
        )


def _check_same_spectrum(w: WeightTable, s: Spectrum) -> None:
    if s is not w.spectrum and s != w.spectrum:
        raise SpectrumMismatchError(
            f"weight table was built for '{w.spectrum.name}', got spectrum '{s.name}'"
        )


def _series_arrays(w: WeightTable, J: float):
    """Scaled terms t_n = exp(n log J - log rho_n - M) and tail ingredients."""
    n = np.arange(w.n_max + 1, dtype=float)
    g = n * math.log(J) - w.log_rho
    scale = float(g.max())
    t = np.exp(g - scale)
    e_next = np.empty_like(w.levels)
    e_next[:-1] = w.levels[1:]
    e_next[-1] = w.next_level_bound
    with np.errstate(divide="ignore"):
        q = J / e_next
    ok = q < 1.0
    tf = np.maximum(t, _TERM_FLOOR)
    tail0 = np.where(ok, tf * q / np.where(ok, 1.0 - q, 1.0), np.inf)
    return g, scale, t, e_next, q, ok, tail0


def _ratio_caps(s: Spectrum, e_next: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Certified upper bound on e_{m+1}/e_m over all m > n, per n."""
    if s.e_star is not None and math.isfinite(s.e_star):
        return s.e_star / e_next
    if s.model == "harmonic":
        return (n + 2.0) / (n + 1.0)
    raise CertificationError(
        "second-moment tail bound needs a finite e_star (declare one) "
        "or a built-in growth rule"
    )


@dataclass(frozen=True)
class PowerSums:
    """Scaled partial sums S_k = sum e_n^k t_n with certified scaled tails.

    All of s0, s1, s2, t0, t1, t2 share the scale exp(log_scale); ratios
    such as s1/s0 are scale-free.  s2/t2 are NaN unless second moments were
    requested.
    """

    J: float
    terms_used: int
    log_scale: float
    s0: float
    s1: float
    s2: float
    t0: float
    t1: float
    t2: float


def power_sums(
    w: WeightTable,
    J: float,
    *,
    rel_tol: float = DEFAULT_TAIL_TOL,
    need_second: bool = False,
) -> PowerSums:
    """Sum e_n^k J^n/rho_n (k = 0, 1, and optionally 2) with relative tail <= rel_tol.

    The mean-series tail uses the exact reindexing e_n t_n = J t_{n-1}; the
    second-moment tail additionally needs a level growth cap (available for
    bounded spectra and the harmonic rule).
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    if J == 0:
        z = 0.0 if need_second else math.nan
        return PowerSums(0.0, 1, 0.0, 1.0, 0.0, z, 0.0, 0.0, 0.0 if need_second else math.nan)

    e = w.levels
    n = np.arange(w.n_max + 1, dtype=float)
    g, scale, t, e_next, q, ok, tail0 = _series_arrays(w, J)
    tf = np.maximum(t, _TERM_FLOOR)

    cum0 = np.cumsum(t)
    cum1 = np.cumsum(e * t)
    tail1 = J * (tf + tail0)
    cond = ok & (tail0 <= rel_tol * cum0) & (tail1 <= rel_tol * np.maximum(cum1, _TERM_FLOOR))

    if need_second:
        caps = _ratio_caps(w.spectrum, e_next, n)
        tail2 = J * (e_next * tf + caps * J * (tf + tail0))
        cum2 = np.cumsum(e * e * t)
        cond &= tail2 <= rel_tol * np.maximum(cum2, _TERM_FLOOR)

    if not cond.any():
        best = int(np.argmin(np.where(ok, tail0 / np.maximum(cum0, _TERM_FLOOR), np.inf)))
        with np.errstate(over="ignore"):
            partial = float(np.exp(scale) * cum0[-1])
            bound = float(np.exp(scale) * tail0[best]) if ok[best] else math.inf
        raise TruncationError(
            f"tail bound not reached within n_max={w.n_max} for J={J} "
            f"(best relative tail {tail0[best] / cum0[best]:.3e} at n={best})",
            value=partial,
            tail_bound=bound,
            terms_used=w.n_max + 1,
        )

    n0 = int(np.argmax(cond))
    return PowerSums(
        J=float(J),
        terms_used=n0 + 1,
        log_scale=scale,
        s0=float(cum0[n0]),
        s1=float(cum1[n0]),
        s2=float(cum2[n0]) if need_second else math.nan,
        t0=float(tail0[n0]),
        t1=float(tail1[n0]),
        t2=float(tail2[n0]) if need_second else math.nan,
    )


def normalization(
    w: WeightTable,
    s: Spectrum,
    J: float,
    *,
    tol: float = DEFAULT_TAIL_TOL,
    edge_guard: float = EDGE_GUARD,
) -> SeriesValue:
    """Normalization series N(J) = sum J^n/rho_n with absolute tail bound <= tol."""
    _check_same_spectrum(w, s)
    check_j_range(w, J, edge_guard=edge_guard)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if J == 0:
        return SeriesValue(value=1.0, tail_bound=0.0, terms_used=1)

    g, scale, t, _, q, ok, tail0 = _series_arrays(w, J)
    cum0 = np.cumsum(t)
    # absolute condition, evaluated in log space to survive huge scales
    with np.errstate(divide="ignore"):
        log_tail_abs = scale + np.where(ok, np.log(tail0), np.inf)
    cond = ok & (log_tail_abs <= math.log(tol))
    if not cond.any():
        best = int(np.argmin(np.where(ok, log_tail_abs, np.inf)))
        with np.errstate(over="ignore"):
            partial = float(np.exp(scale) * cum0[-1])
            bound = float(np.exp(log_tail_abs[best])) if ok.any() else math.inf
        raise TruncationError(
            f"normalization tail <= {tol:g} not reached within n_max={w.n_max} at J={J}",
            value=partial,
            tail_bound=bound,
            terms_used=w.n_max + 1,
        )
    n0 = int(np.argmax(cond))
    return SeriesValue(
        value=float(np.exp(scale) * cum0[n0]),
        tail_bound=float(np.exp(log_tail_abs[n0])),
        terms_used=n0 + 1,
    )

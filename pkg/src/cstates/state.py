"""Coherent-state coefficient vectors in the energy eigenbasis."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SpectrumMismatchError
from .phase import phase_factor
from .spectrum import Spectrum
from .weights import (
    DEFAULT_TAIL_TOL,
    WeightTable,
    _check_same_spectrum,
    check_j_range,
    power_sums,
)


@dataclass(frozen=True)
class StateLabel:
    """Action-angle label (J, gamma); gamma is unbounded and never wrapped."""

    J: float
    gamma: float


@dataclass(frozen=True, eq=False)
class StateCoefficients:
    """Truncated amplitudes c_n with a certified bound on the missing mass.

    |c_n|^2 = J^n / (N(J) rho_n) with phase exp(-i e_n gamma);
    sum |c_n|^2 lies in [1 - tail_mass_bound, 1].
    """

    c: np.ndarray
    tail_mass_bound: float
    label: StateLabel
    spectrum: Spectrum

    @property
    def n_top(self) -> int:
        return len(self.c) - 1


def coefficients(
    s: Spectrum,
    w: WeightTable,
    label: StateLabel,
    tol: float = DEFAULT_TAIL_TOL,
) -> StateCoefficients:
    """Amplitudes of |J, gamma> truncated so the missing mass is at most tol."""
    _check_same_spectrum(w, s)
    check_j_range(w, label.J)
    if not tol > 0:
        raise ValueError("tol must be positive")

    if label.J == 0:
        c = np.zeros(1, dtype=complex)
        c[0] = 1.0
        return StateCoefficients(c=c, tail_mass_bound=0.0, label=label, spectrum=s)

    ps = power_sums(w, label.J, rel_tol=tol)
    k = ps.terms_used
    g = np.arange(k, dtype=float) * math.log(label.J) - w.log_rho[:k]
    log_norm = ps.log_scale + math.log(ps.s0 + ps.t0)
    magnitudes = np.exp(0.5 * (g - log_norm))
    c = magnitudes * phase_factor(w.levels[:k] * label.gamma)
    tail_mass = ps.t0 / (ps.s0 + ps.t0)
    return StateCoefficients(c=c, tail_mass_bound=float(tail_mass), label=label, spectrum=s)


def _padded_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """sum conj(a_n) b_n over the longer index range, missing entries zero."""
    n = max(len(a), len(b))
    if len(a) < n:
        a = np.concatenate([a, np.zeros(n - len(a), dtype=complex)])
    if len(b) < n:
        b = np.concatenate([b, np.zeros(n - len(b), dtype=complex)])
    return complex(np.vdot(a, b))


def overlap(a: StateCoefficients, b: StateCoefficients) -> complex:
    """Inner product <a|b>; magnitude is 1 at equal labels up to the tails."""
    if a.spectrum is not b.spectrum and a.spectrum != b.spectrum:
        raise SpectrumMismatchError(
            f"states live over different spectra: '{a.spectrum.name}' vs '{b.spectrum.name}'"
        )
    return _padded_inner(a.c, b.c)


def norm_deficit(x: StateCoefficients) -> float:
    """|1 - sum |c_n|^2|; bounded by tail_mass_bound by construction."""
    return float(abs(1.0 - np.sum(np.abs(x.c) ** 2)))

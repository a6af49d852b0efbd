"""Time evolution in the energy eigenbasis and temporal-stability checks.

Evolution multiplies each amplitude by exp(-i omega e_n t), so a coherent
state at (J, gamma) becomes the coherent state at (J, gamma + omega t):
dynamics acts on the labels alone.
"""
from __future__ import annotations

import numpy as np

from .errors import SpectrumMismatchError
from .phase import phase_factor
from .spectrum import Spectrum
from .state import StateCoefficients, StateLabel, _padded_inner, coefficients
from .weights import DEFAULT_TAIL_TOL, WeightTable
from dataclasses import dataclass


@dataclass(frozen=True, eq=False)
class EvolvedState:
    """Amplitudes after applying exp(-i H t); evolution is a pure phase per component."""

    c: np.ndarray
    t: float
    source_label: StateLabel | None = None


def evolve_label(l: StateLabel, t: float, omega: float) -> StateLabel:
    """(J, gamma) -> (J, gamma + omega t)."""
    return StateLabel(l.J, l.gamma + omega * t)


def evolve_coefficients(x, s: Spectrum, t: float) -> EvolvedState:
    """Apply the phases exp(-i omega e_n t) to a state or raw amplitude vector."""
    if isinstance(x, StateCoefficients):
        if x.spectrum is not s and x.spectrum != s:
            raise SpectrumMismatchError(
                f"state over '{x.spectrum.name}' evolved with spectrum '{s.name}'"
            )
        c = x.c
        source = x.label
    else:
        c = np.asarray(x, dtype=complex)
        source = None
    e = s.e_array(len(c) - 1)
    return EvolvedState(c=c * phase_factor(s.omega * e * t), t=float(t), source_label=source)


def temporal_stability_residual(
    s: Spectrum,
    w: WeightTable,
    l: StateLabel,
    t: float,
    tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """2-norm of (evolved coherent state) - (coherent state at the evolved label).

    Both vectors share the truncation picked for J, so the residual measures
    only the phase identity, not mismatched supports.
    """
    start = coefficients(s, w, l, tol)
    evolved = evolve_coefficients(start, s, t)
    relabeled = coefficients(s, w, evolve_label(l, t, s.omega), tol)
    n = max(len(evolved.c), len(relabeled.c))
    a = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    a[: len(evolved.c)] = evolved.c
    b[: len(relabeled.c)] = relabeled.c
    return float(np.linalg.norm(a - b))


def kinematic_representation_check(
    s: Spectrum,
    w: WeightTable,
    psi,
    l: StateLabel,
    t: float,
    tol: float = DEFAULT_TAIL_TOL,
) -> tuple[complex, complex]:
    """Return (<l|psi, t>, <l(-t)|psi>); the two agree up to truncation tails."""
    psi = np.asarray(psi, dtype=complex)
    bra = coefficients(s, w, l, tol)
    lhs = _padded_inner(bra.c, evolve_coefficients(psi, s, t).c)
    bra_back = coefficients(s, w, evolve_label(l, -t, s.omega), tol)
    rhs = _padded_inner(bra_back.c, psi)
    return lhs, rhs

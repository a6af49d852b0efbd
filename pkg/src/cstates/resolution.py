"""Resolution-of-unity checks: moment measures and gamma-averaged projectors.

A weight measure rho(u) du on [0, U) (plus optional point atoms) resolves
the identity when its power moments reproduce rho_n with U = J*.  Built-in
measures: exp(-u) du on [0, inf) for the harmonic rule, and du/2 on [0, 1)
plus an atom of mass 1/2 at u = 1 for the hydrogen-like rule — the atom is
forced by rho_n -> 1/2 > 0 while the moments of any integrable density on
[0, 1) vanish as n grows.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import LabelRangeError, QuadratureError, SpectrumError
from .spectrum import Spectrum
from .weights import WeightTable, _check_same_spectrum, check_j_range, normalization

_QUAD_START = 64
_QUAD_DOUBLINGS = 4
_QUAD_RTOL = 1e-12
_TINY = 1e-300

FINITE_INTERVAL = "finite_interval"
SEMI_INFINITE = "semi_infinite_exponential"


@dataclass(frozen=True, eq=False)
class Measure:
    """Weight measure on [0, U): a density plus a finite list of point atoms."""

    name: str
    U: float
    density: Callable[[np.ndarray], np.ndarray]
    atoms: tuple[tuple[float, float], ...] = ()
    quadrature_hint: str = FINITE_INTERVAL
    log_density: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if not self.U > 0:
            raise SpectrumError(f"measure support bound U must be positive, got {self.U!r}")
        for u, wgt in self.atoms:
            if not wgt > 0:
                raise SpectrumError(f"atom mass must be positive, got {wgt!r}")
            if not 0 <= u <= self.U:
                raise SpectrumError(f"atom location {u!r} outside [0, {self.U}]")


@dataclass(frozen=True, eq=False)
class ProjectorMatrix:
    """Gamma-average of |J,gamma><J,gamma| on the truncated basis."""

    entries: np.ndarray
    J: float
    Gamma: float


def builtin_measure(model: str) -> Measure:
    if model == "harmonic":
        return Measure(
            name="harmonic",
            U=math.inf,
            density=lambda u: np.exp(-np.asarray(u, dtype=float)),
            quadrature_hint=SEMI_INFINITE,
            log_density=lambda u: -np.asarray(u, dtype=float),
        )
    if model == "hydrogen_like":
        return Measure(
            name="hydrogen_like",
            U=1.0,
            density=lambda u: np.full_like(np.asarray(u, dtype=float), 0.5),
            atoms=((1.0, 0.5),),
            quadrature_hint=FINITE_INTERVAL,
        )
    raise SpectrumError(f"no builtin measure for model {model!r}")


def load_measure(document: str | Mapping) -> Measure:
    """Parse a measure document.

    Schema: {"U": float|"inf", "density": {"kind": "exponential"|"constant"|
    "table", ...}, "atoms": [{"u": float, "w": float}]}
    """
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpectrumError(f"cannot parse measure document: {exc}") from None
    elif isinstance(document, Mapping):
        doc = dict(document)
    else:
        raise SpectrumError("measure document must be JSON text or a mapping")

    U = doc.get("U")
    if isinstance(U, str):
        if U.lower() in ("inf", "infinity"):
            U = math.inf
        else:
            raise SpectrumError(f"U must be a number or 'inf', got {U!r}")
    if not isinstance(U, (int, float)) or not U > 0:
        raise SpectrumError(f"U must be positive, got {U!r}")

    dens = doc.get("density") or {}
    kind = dens.get("kind")
    log_density = None
    if kind == "exponential":
        rate = float(dens.get("rate", 1.0))
        amplitude = float(dens.get("amplitude", 1.0))
        if rate <= 0 or amplitude <= 0:
            raise SpectrumError("exponential density needs positive rate and amplitude")

        def density(u, _r=rate, _a=amplitude):
            return _a * np.exp(-_r * np.asarray(u, dtype=float))

        def log_density(u, _r=rate, _a=amplitude):
            return math.log(_a) - _r * np.asarray(u, dtype=float)

        hint = SEMI_INFINITE if math.isinf(U) else FINITE_INTERVAL
    elif kind == "constant":
        value = float(dens.get("value", 0.0))
        if value < 0:
            raise SpectrumError("constant density must be nonnegative")
        if math.isinf(U) and value > 0:
            raise SpectrumError("constant density on an infinite interval is not integrable")

        def density(u, _v=value):
            return np.full_like(np.asarray(u, dtype=float), _v)

        hint = FINITE_INTERVAL
    elif kind == "table":
        us = np.asarray(dens.get("u", ()), dtype=float)
        vals = np.asarray(dens.get("rho", ()), dtype=float)
        if us.size < 2 or us.size != vals.size:
            raise SpectrumError("table density needs matching 'u' and 'rho' arrays (>= 2 points)")
        if np.any(vals < 0):
            raise SpectrumError("table density must be nonnegative")

        def density(u, _us=us, _vals=vals):
            return np.interp(np.asarray(u, dtype=float), _us, _vals, left=0.0, right=0.0)

        hint = FINITE_INTERVAL
    else:
        raise SpectrumError(f"unknown density kind {kind!r}")

    atoms = []
    for atom in doc.get("atoms", ()) or ():
        atoms.append((float(atom["u"]), float(atom["w"])))

    return Measure(
        name=str(doc.get("name", "custom")),
        U=float(U),
        density=density,
        atoms=tuple(atoms),
        quadrature_hint=hint,
        log_density=log_density,
    )


def _quad_once(m: Measure, ns: np.ndarray, nodes: int) -> np.ndarray:
    """Moments int u^n rho(u) du at a fixed node count (atoms excluded)."""
    if m.quadrature_hint == SEMI_INFINITE:
        x, wq = np.polynomial.laguerre.laggauss(nodes)
        if m.log_density is not None:
            ld = np.asarray(m.log_density(x), dtype=float)
        else:
            dens = np.asarray(m.density(x), dtype=float)
            ld = np.where(dens > 0, np.log(np.maximum(dens, _TINY)), -math.inf)
        ok = wq > 0
        lw = np.full(nodes, -math.inf)
        lw[ok] = np.log(wq[ok])
        base = lw + x + ld  # Laguerre weights absorb e^{-x}; restore it in logs
        lx = np.log(x)
        with np.errstate(invalid="ignore"):
            grid = base[None, :] + ns[:, None] * lx[None, :]
        return np.exp(grid).sum(axis=1)

    if not math.isfinite(m.U):
        raise QuadratureError(
            "finite-interval quadrature needs finite U; set the semi-infinite hint instead"
        )
    x, wq = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * m.U * (x + 1.0)
    wgt = 0.5 * m.U * wq * np.asarray(m.density(u), dtype=float)
    powers = np.power(u[None, :], ns[:, None])
    return (powers * wgt[None, :]).sum(axis=1)


def _measure_moments(m: Measure, n_check: int) -> np.ndarray:
    """Moments for n = 0..n_check via node-doubling quadrature, atoms added exactly."""
    ns = np.arange(n_check + 1)
    nodes = _QUAD_START
    prev = _quad_once(m, ns, nodes)
    for _ in range(_QUAD_DOUBLINGS):
        nodes *= 2
        cur = _quad_once(m, ns, nodes)
        scale = np.maximum(np.maximum(np.abs(cur), np.abs(prev)), _TINY)
        if np.all(np.abs(cur - prev) <= _QUAD_RTOL * scale):
            moments = cur
            break
        prev = cur
    else:
        raise QuadratureError(
            f"moment quadrature did not converge after {_QUAD_DOUBLINGS} node doublings "
            f"({nodes} nodes)"
        )
    for u, wgt in m.atoms:
        moments = moments + wgt * np.power(float(u), ns.astype(float))
    return moments


def moment_check(m: Measure, w: WeightTable, n_check: int) -> float:
    """Max relative error of the measure's moments against rho_n for n <= n_check."""
    if n_check > w.n_max:
        raise ValueError(f"n_check={n_check} exceeds the weight table range {w.n_max}")
    moments = _measure_moments(m, n_check)
    rho = np.exp(w.log_rho[: n_check + 1])
    return float(np.abs(moments / rho - 1.0).max())


def unity_check(m: Measure, w: WeightTable, s: Spectrum, n_check: int) -> np.ndarray:
    """Diagonal values d_n = (1/rho_n) int_0^U J^n rho(J) dJ; each equals 1.

    The normalization N(J) cancels against the 1/N(J) of the gamma-averaged
    projector, so the full resolution check reduces to these moment ratios.
    """
    _check_same_spectrum(w, s)
    if n_check > w.n_max:
        raise ValueError(f"n_check={n_check} exceeds the weight table range {w.n_max}")
    same_support = (math.isinf(m.U) and math.isinf(w.j_star)) or (
        math.isfinite(m.U)
        and math.isfinite(w.j_star)
        and abs(m.U - w.j_star) <= 1e-9 * max(1.0, abs(w.j_star))
    )
    if not same_support:
        raise LabelRangeError(
            f"measure support U={m.U} must equal the convergence radius J*={w.j_star}"
        )
    moments = _measure_moments(m, n_check)
    return moments / np.exp(w.log_rho[: n_check + 1])


def gamma_averaged_projector(
    s: Spectrum,
    w: WeightTable,
    J: float,
    Gamma: float,
    n_max: int,
) -> ProjectorMatrix:
    """Average of |J,gamma><J,gamma| over gamma in [-Gamma, Gamma], truncated.

    Entry (n, m) is N(J)^{-1} J^{(n+m)/2}/sqrt(rho_n rho_m) * S with
    S = sin(Gamma(e_n - e_m))/(Gamma(e_n - e_m)), S = 1 on the diagonal;
    the Gamma = inf limit is exactly diagonal.  Computed analytically, no
    oscillatory quadrature.
    """
    _check_same_spectrum(w, s)
    check_j_range(w, J)
    if not Gamma > 0:
        raise LabelRangeError(f"Gamma must be positive (inf allowed), got {Gamma!r}")
    if n_max > w.n_max:
        raise ValueError(f"n_max={n_max} exceeds the weight table range {w.n_max}")

    size = n_max + 1
    norm = normalization(w, s, J)
    total = norm.value + norm.tail_bound
    if J == 0:
        amps = np.zeros(size)
        amps[0] = 1.0
    else:
        g = np.arange(size, dtype=float) * math.log(J) - w.log_rho[:size]
        amps = np.exp(0.5 * g)
    ee = w.levels[:size]
    if math.isinf(Gamma):
        sinc = np.eye(size)
    else:
        sinc = np.sinc((Gamma / math.pi) * (ee[:, None] - ee[None, :]))
    entries = (np.outer(amps, amps) / total) * sinc
    return ProjectorMatrix(entries=entries.astype(complex), J=float(J), Gamma=float(Gamma))

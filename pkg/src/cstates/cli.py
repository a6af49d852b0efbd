"""Command-line front end: model selection, grid sweeps, invariant suites.

Exit codes: 0 success, 1 validation/range error, 2 numerical failure
(tail bound or quadrature), 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import temporal_stability_residual
from .errors import (
    CertificationError,
    CrossCheckError,
    CStatesError,
    LabelRangeError,
    QuadratureError,
    SpectrumError,
    SpectrumMismatchError,
    TruncationError,
)
from .observables import variance_curve
from .resolution import builtin_measure, load_measure, moment_check, unity_check
from .spectrum import Spectrum, load_spectrum, make_builtin, validate
from .state import StateLabel, coefficients
from .verify import DEFAULT_SEED, run_suite
from .weights import DEFAULT_NMAX, DEFAULT_TAIL_TOL, compute_weights, normalization

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3


@dataclass
class RunConfig:
    model: str | None
    file: str | None
    omega: float | None
    tol: float
    n_max: int
    fmt: str
    out: str | None
    seed: int

    def __post_init__(self):
        if not self.tol > 0:
            raise SpectrumError(f"tolerance must be positive, got {self.tol}")
        if self.n_max < 8:
            raise SpectrumError(f"n_max must be at least 8, got {self.n_max}")


def _config(args) -> RunConfig:
    return RunConfig(
        model=args.model,
        file=args.file,
        omega=args.omega,
        tol=args.tol,
        n_max=args.nmax,
        fmt=args.format,
        out=args.out,
        seed=args.seed,
    )


def _resolve_spectrum(cfg: RunConfig) -> Spectrum:
    if cfg.model and cfg.file:
        raise SpectrumError("give either --model or --file, not both")
    if cfg.model:
        return make_builtin(cfg.model, cfg.omega if cfg.omega is not None else 1.0)
    if cfg.file:
        text = Path(cfg.file).read_text()
        if cfg.omega is None:
            return load_spectrum(text)
        doc = json.loads(text)
        doc["omega"] = cfg.omega
        return load_spectrum(doc)
    raise SpectrumError("a spectrum is required: pass --model or --file")


def _table_for(cfg: RunConfig, s: Spectrum):
    n_max = cfg.n_max
    if s.max_index is not None:
        n_max = min(n_max, s.max_index)
    return compute_weights(s, max(1, n_max))


def g17(x) -> str:
    return format(float(x), ".17g")


def _write(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_table(header: list[str], rows: list[list], cfg: RunConfig) -> None:
    if cfg.fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        _write(json.dumps(payload, indent=2) + "\n", cfg)
        return
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(g17(v) if isinstance(v, float) else str(v) for v in row))
    _write("\n".join(lines) + "\n", cfg)


def _emit_object(obj: dict, header: list[str], rows: list[list], cfg: RunConfig) -> None:
    """JSON gets the full object; CSV keeps only the tabular part."""
    if cfg.fmt == "json":
        _write(json.dumps(obj, indent=2) + "\n", cfg)
    else:
        _emit_table(header, rows, cfg)


def cmd_spectrum(args) -> int:
    cfg = _config(args)
    s = _resolve_spectrum(cfg)
    count = args.count
    top = count - 1
    if s.max_index is not None:
        top = min(top, s.max_index)
    report = validate(s, max(1, top))
    levels = s.e_array(top)
    rows = [[int(n), float(levels[n]), float(s.omega * levels[n])] for n in range(top + 1)]
    obj = {
        "name": s.name,
        "omega": s.omega,
        "e_star": None if s.e_star is None else (s.e_star if math.isfinite(s.e_star) else "inf"),
        "shift_applied": s.shift_applied,
        "validation": {
            "ok": report.ok,
            "violations": [{"n": n, "reason": msg} for n, msg in report.violations],
        },
        "levels": [{"n": r[0], "e_n": r[1], "E_n": r[2]} for r in rows],
    }
    _emit_object(obj, ["n", "e_n", "E_n"], rows, cfg)
    if not report.ok:
        for n, msg in report.violations:
            print(f"validation violation at n={n}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_weights(args) -> int:
    cfg = _config(args)
    s = _resolve_spectrum(cfg)
    w = _table_for(cfg, s)
    top = min(args.count - 1, w.n_max)
    rows = [[int(n), float(w.log_rho[n]), float(np.exp(w.log_rho[n]))] for n in range(top + 1)]
    obj = {
        "name": s.name,
        "j_star": w.j_star if math.isfinite(w.j_star) else "inf",
        "j_star_is_estimate": w.j_star_is_estimate,
        "n_max": w.n_max,
        "weights": [{"n": r[0], "log_rho": r[1], "rho": r[2]} for r in rows],
    }
    if args.J is not None:
        series = normalization(w, s, args.J, tol=cfg.tol)
        obj["normalization"] = {
            "J": args.J,
            "value": series.value,
            "tail_bound": series.tail_bound,
            "terms_used": series.terms_used,
        }
        print(
            f"N({g17(args.J)}) = {g17(series.value)} "
            f"(tail <= {g17(series.tail_bound)}, {series.terms_used} terms)",
            file=sys.stderr,
        )
    _emit_object(obj, ["n", "log_rho", "rho"], rows, cfg)
    return EXIT_OK


def cmd_state(args) -> int:
    cfg = _config(args)
    s = _resolve_spectrum(cfg)
    w = _table_for(cfg, s)
    state = coefficients(s, w, StateLabel(args.J, args.gamma), tol=cfg.tol)
    rows = [[int(n), float(state.c[n].real), float(state.c[n].imag)] for n in range(len(state.c))]
    obj = {
        "J": args.J,
        "gamma": args.gamma,
        "tail_mass_bound": state.tail_mass_bound,
        "coefficients": [[r[1], r[2]] for r in rows],
    }
    _emit_object(obj, ["n", "re", "im"], rows, cfg)
    return EXIT_OK


def _parse_grid(args) -> list[float]:
    if args.grid is not None and args.range is not None:
        raise SpectrumError("give either --grid or --range, not both")
    if args.grid is not None:
        text = args.grid.strip()
        if not text:
            return []
        return [float(v) for v in text.split(",")]
    if args.range is not None:
        start, stop, count = args.range
        return [float(x) for x in np.linspace(start, stop, int(count))]
    raise SpectrumError("a J grid is required: pass --grid or --range")


def cmd_variance(args) -> int:
    cfg = _config(args)
    s = _resolve_spectrum(cfg)
    w = _table_for(cfg, s)
    grid = _parse_grid(args)
    points = variance_curve(s, w, grid)
    with_bound = s.model == "hydrogen_like"
    header = ["J", "mean", "variance", "tail_bound", "error"]
    if with_bound:
        header = ["J", "mean", "variance", "bound", "tail_bound", "error"]
    rows = []
    for p in points:
        row = [p.J, p.mean, p.variance]
        if with_bound:
            row.append(0.75 * s.omega**2 * p.J * (1.0 - p.J))
        row.extend([p.tail_bound, (p.error or "").replace(",", ";")])
        rows.append(row)
    _emit_table(header, rows, cfg)
    return EXIT_OK


def cmd_evolve(args) -> int:
    cfg = _config(args)
    s = _resolve_spectrum(cfg)
    w = _table_for(cfg, s)
    label = StateLabel(args.J, args.gamma)
    residual = temporal_stability_residual(s, w, label, args.t, tol=cfg.tol)
    state = coefficients(s, w, label, tol=cfg.tol)
    bound = 2.0 * 2.0 * math.sqrt(state.tail_mass_bound) if state.tail_mass_bound else 0.0
    rows = [[args.J, args.gamma, args.t, residual, bound]]
    _emit_table(["J", "gamma", "t", "residual", "bound"], rows, cfg)
    return EXIT_OK


def cmd_resolution(args) -> int:
    cfg = _config(args)
    s = _resolve_spectrum(cfg)
    w = _table_for(cfg, s)
    if args.measure:
        measure = load_measure(Path(args.measure).read_text())
    elif s.model:
        measure = builtin_measure(s.model)
    else:
        raise SpectrumError("custom spectra need --measure FILE for resolution checks")
    n_check = min(args.ncheck, w.n_max)
    err = moment_check(measure, w, n_check)
    diag = unity_check(measure, w, s, n_check)
    rho = np.exp(w.log_rho[: n_check + 1])
    rows = [[int(n), float(rho[n]), float(diag[n] * rho[n]), float(diag[n])] for n in range(n_check + 1)]
    _emit_table(["n", "rho_n", "moment", "unity_d_n"], rows, cfg)
    print(f"max relative moment error: {g17(err)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    s = _resolve_spectrum(cfg)
    w = _table_for(cfg, s)
    measure = builtin_measure(s.model) if s.model else None
    results = run_suite(s, w, measure, seed=cfg.seed, tol=cfg.tol)
    rows = [[r.name, r.status, r.detail] for r in results]
    if cfg.fmt == "json":
        obj = {
            "spectrum": s.name,
            "checks": [{"name": r.name, "status": r.status, "detail": r.detail} for r in results],
            "ok": all(r.status != "fail" for r in results),
        }
        _write(json.dumps(obj, indent=2) + "\n", cfg)
    else:
        lines = ["check,status,detail"]
        for name, status, detail in rows:
            safe = detail.replace(",", ";")
            lines.append(f"{name},{status},{safe}")
        _write("\n".join(lines) + "\n", cfg)
    failed = [r for r in results if r.status == "fail"]
    for r in failed:
        print(f"FAIL {r.name}: {r.detail}", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstates",
        description="Coherent states over discrete spectra: construction and checks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=("harmonic", "hydrogen_like"), default=None)
    common.add_argument("--file", default=None, help="spectrum document (JSON)")
    common.add_argument("--omega", type=float, default=None, help="energy scale override")
    common.add_argument("--tol", type=float, default=DEFAULT_TAIL_TOL)
    common.add_argument("--nmax", type=int, default=DEFAULT_NMAX)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="print levels and validation")
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("weights", parents=[common], help="print log rho_n, rho_n, J*")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--J", type=float, default=None, help="also evaluate N(J)")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("state", parents=[common], help="coefficients of |J, gamma>")
    p.add_argument("--J", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("variance", parents=[common], help="variance over a J grid")
    p.add_argument("--grid", default=None, help="comma-separated J values (may be empty)")
    p.add_argument("--range", nargs=3, type=float, metavar=("START", "STOP", "COUNT"), default=None)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("evolve", parents=[common], help="temporal-stability residual")
    p.add_argument("--J", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("resolution", parents=[common], help="moment and unity checks")
    p.add_argument("--ncheck", type=int, default=15)
    p.add_argument("--measure", default=None, help="measure document (JSON)")
    p.set_defaults(func=cmd_resolution)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TruncationError, CertificationError, QuadratureError, CrossCheckError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SpectrumError, LabelRangeError, SpectrumMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CStatesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())

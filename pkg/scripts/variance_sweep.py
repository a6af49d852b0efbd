#!/usr/bin/env python3
"""Sweep the energy variance over a J grid and write a CSV.

Example:
    python scripts/variance_sweep.py --model hydrogen_like --points 45 --out sweep.csv
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from cstates import compute_weights, make_builtin, variance_curve


@dataclass
class SweepConfig:
    model: str = "hydrogen_like"
    omega: float = 1.0
    j_min: float = 0.0
    j_max: float = 0.95
    points: int = 40
    n_max: int = 40_000
    out: str | None = None


def run(cfg: SweepConfig) -> str:
    s = make_builtin(cfg.model, cfg.omega)
    w = compute_weights(s, cfg.n_max)
    grid = np.linspace(cfg.j_min, cfg.j_max, cfg.points)
    rows = ["J,mean,variance,tail_bound,error"]
    for p in variance_curve(s, w, grid):
        err = (p.error or "").replace(",", ";")
        rows.append(
            f"{p.J:.17g},{p.mean:.17g},{p.variance:.17g},{p.tail_bound:.17g},{err}"
        )
    return "\n".join(rows) + "\n"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", choices=("harmonic", "hydrogen_like"),
                        default=SweepConfig.model)
    parser.add_argument("--omega", type=float, default=SweepConfig.omega)
    parser.add_argument("--jmin", type=float, default=SweepConfig.j_min)
    parser.add_argument("--jmax", type=float, default=SweepConfig.j_max)
    parser.add_argument("--points", type=int, default=SweepConfig.points)
    parser.add_argument("--nmax", type=int, default=SweepConfig.n_max)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()
    cfg = SweepConfig(
        model=args.model, omega=args.omega, j_min=args.jmin, j_max=args.jmax,
        points=args.points, n_max=args.nmax, out=args.out,
    )
    text = run(cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end and experiment runners.

Exit codes: 0 success, 2 invalid input, 3 resolution/non-convergence,
4 internal invariant breach.  Every output document embeds the config that
produced it; outputs are byte-identical for identical config and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import acceptance
from .cauchy import BoundaryFunction, jump_decompose
from .circlemaps import CircleHomeo
from .errors import (
    InvalidInputError,
    InvalidResultError,
    NonConvergenceError,
    ResolutionError,
    WeldLabError,
)
from .fourier import FourierFunction
from .grunsky import (
    grunsky_matrix_coeff,
    grunsky_matrix_proj,
    hs_norm,
    multi_grunsky,
    pi_report,
    wp_kahler_potential,
)
from .spheres import RiggedSphere, sew_two
from .welding import PowerSeriesMap, map_diagnostics, weld

__all__ = ["main", "RunConfig"]


@dataclass(frozen=True)
class RunConfig:
    command: str
    order: int = 16
    tolerance: float = 1e-8
    grid: int = 0  # 0 means module defaults
    seed: int = 7
    route: str = "both"
    inputs: tuple[str, ...] = ()
    out: str = ""
    threads: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise InvalidInputError("order must be >= 1")
        if self.tolerance <= 0:
            raise InvalidInputError("tolerance must be positive")
        for path in self.inputs:
            if not Path(path).is_file():
                raise InvalidInputError(f"input file not found: {path}")


def _emit(doc: dict, config: RunConfig) -> None:
    doc = {"config": asdict(config), **doc}
    text = json.dumps(doc, sort_keys=True, indent=1)
    if config.out:
        Path(config.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _matrix_doc(entries: np.ndarray) -> dict:
    rows, cols = entries.shape
    table = [
        [int(r), int(c), float(entries[r, c].real), float(entries[r, c].imag)]
        for r in range(rows)
        for c in range(cols)
    ]
    return {"rows": rows, "cols": cols, "entries": table}


def _write_matrix_csv(entries: np.ndarray, path: Path) -> None:
    lines = ["row,col,re,im"]
    rows, cols = entries.shape
    for r in range(rows):
        for c in range(cols):
            v = entries[r, c]
            lines.append(f"{r},{c},{float(v.real)!r},{float(v.imag)!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_weld(config: RunConfig) -> dict:
    h = CircleHomeo.from_json(Path(config.inputs[0]).read_text())
    result = weld(h, config.order, tol=config.tolerance, grid=config.grid or None)
    return {
        "F": json.loads(result.F.to_json()),
        "G": json.loads(result.G.to_json()),
        "residual": result.residual,
        "iterations": result.iterations,
    }


def _cmd_grunsky(config: RunConfig) -> dict:
    F = PowerSeriesMap.from_json(Path(config.inputs[0]).read_text())
    doc: dict = {"order": config.order}
    if config.route in ("coeff", "both"):
        mat = grunsky_matrix_coeff(F, config.order)
        doc["coeff"] = _matrix_doc(mat.entries)
        doc["coeff_hs_norm"] = hs_norm(mat)
        if config.out:
            _write_matrix_csv(mat.entries, Path(config.out).with_suffix(".coeff.csv"))
    if config.route in ("proj", "both"):
        mat = grunsky_matrix_proj(F, config.order)
        doc["proj"] = _matrix_doc(mat.entries)
        doc["proj_hs_norm"] = hs_norm(mat)
        if config.out:
            _write_matrix_csv(mat.entries, Path(config.out).with_suffix(".proj.csv"))
    return doc


def _cmd_jump(config: RunConfig) -> dict:
    F = PowerSeriesMap.from_json(Path(config.inputs[0]).read_text())
    h = BoundaryFunction(FourierFunction.from_json(Path(config.inputs[1]).read_text()))
    dec = jump_decompose(F, h, config.order)
    return {
        "plus": json.loads(dec.plus.boundary_series().to_json()),
        "minus": json.loads(dec.minus.boundary_series().to_json()),
        "plus_condition": dec.plus.condition_number,
        "minus_condition": dec.minus.condition_number,
        "fit_residuals": [dec.plus.fit_residual, dec.minus.fit_residual],
    }


def _cmd_sew(config: RunConfig, i: int, j: int) -> dict:
    left = RiggedSphere.from_json(Path(config.inputs[0]).read_text())
    right = RiggedSphere.from_json(Path(config.inputs[1]).read_text())
    res = sew_two(left, i, right, j, order=config.order, tol=config.tolerance)
    inv = res.invariants
    return {
        "sphere": json.loads(res.sphere.to_json()),
        "welding_residual": res.welding.residual,
        "cross_ratios": [[v.real, v.imag] for v in inv.cross_ratios] if inv else [],
        "jets": [
            {"chart": chart, "coeffs": [[v.real, v.imag] for v in jets]}
            for chart, jets in (inv.rigging_jets if inv else ())
        ],
    }


def _cmd_periods(config: RunConfig) -> dict:
    sphere = RiggedSphere.from_json(Path(config.inputs[0]).read_text())
    mat = multi_grunsky(sphere, config.order)
    if config.out:
        _write_matrix_csv(mat.entries, Path(config.out).with_suffix(".csv"))
    return {"matrix": _matrix_doc(mat.entries), "hs_norm": hs_norm(mat),
            "spectral_norm": mat.spectral_norm()}


def _cmd_diag(config: RunConfig) -> dict:
    F = PowerSeriesMap.from_json(Path(config.inputs[0]).read_text())
    diag = map_diagnostics(F)
    gr = grunsky_matrix_coeff(F, config.order)
    rep = pi_report(F, config.order)
    doc = {
        "a1inf_norm": diag.a1inf_norm,
        "a12_norm": diag.a12_norm,
        "fprime0": [diag.fprime0.real, diag.fprime0.imag],
        "grunsky_hs_norm": hs_norm(gr),
        "pi": {"dim_kernel": rep.dim_kernel, "dim_cokernel": rep.dim_cokernel, "index": rep.index},
    }
    try:
        doc["wp_kahler_potential"] = wp_kahler_potential(F, config.order)
    except InvalidInputError as exc:
        doc["wp_kahler_potential"] = None
        doc["wp_kahler_note"] = str(exc)
    return doc


def _cmd_suite(config: RunConfig) -> dict:
    return acceptance.run_suite(seed=config.seed)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weldlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order_default=16):
        p.add_argument("--order", type=int, default=order_default)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--grid", type=int, default=0)
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--out", default="")

    p = sub.add_parser("weld", help="solve the conformal welding of a circle homeomorphism")
    p.add_argument("--homeo", required=True)
    common(p, order_default=32)

    p = sub.add_parser("grunsky", help="Grunsky matrix of a disk_plus map")
    p.add_argument("--map", required=True)
    p.add_argument("--route", choices=("coeff", "proj", "both"), default="both")
    common(p)

    p = sub.add_parser("jump", help="jump decomposition of boundary data")
    p.add_argument("--map", required=True)
    p.add_argument("--boundary", required=True)
    common(p)

    p = sub.add_parser("sew", help="sew two rigged spheres along borders")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=0)
    common(p, order_default=32)

    p = sub.add_parser("periods", help="multi-rigging block Grunsky matrix")
    p.add_argument("--sphere", required=True)
    common(p)

    p = sub.add_parser("diag", help="map diagnostics, Grunsky norm, Fredholm report")
    p.add_argument("--map", required=True)
    common(p)

    p = sub.add_parser("suite", help="run the acceptance suite")
    common(p)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    threads = max(1, int(os.environ.get("WELDLAB_THREADS", "1")))
    inputs = {
        "weld": lambda a: (a.homeo,),
        "grunsky": lambda a: (a.map,),
        "jump": lambda a: (a.map, a.boundary),
        "sew": lambda a: (a.left, a.right),
        "periods": lambda a: (a.sphere,),
        "diag": lambda a: (a.map,),
        "suite": lambda a: (),
    }[args.command](args)
    try:
        config = RunConfig(
            command=args.command,
            order=args.order,
            tolerance=args.tol,
            grid=args.grid,
            seed=args.seed,
            route=getattr(args, "route", "both"),
            inputs=tuple(inputs),
            out=args.out,
            threads=threads,
        )
        if args.command == "weld":
            doc = _cmd_weld(config)
        elif args.command == "grunsky":
            doc = _cmd_grunsky(config)
        elif args.command == "jump":
            doc = _cmd_jump(config)
        elif args.command == "sew":
            doc = _cmd_sew(config, args.i, args.j)
        elif args.command == "periods":
            doc = _cmd_periods(config)
        elif args.command == "diag":
            doc = _cmd_diag(config)
        else:
            doc = _cmd_suite(config)
            _emit(doc, config)
            return 0 if doc["all_passed"] else 1
        _emit(doc, config)
        return 0
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except (ResolutionError, NonConvergenceError) as exc:
        print(f"resolution/convergence failure: {exc}", file=sys.stderr)
        return 3
    except (InvalidResultError, WeldLabError) as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

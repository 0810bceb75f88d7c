"""Command-line front end.

Subcommands: irrep, check, pair-index, sf, kitaev, flux, aii, rs-check,
props.  Structured results go to standard output as JSON (sorted keys, so
identical flags and seed produce byte-identical output); eigenvalue
tracks and kernel profiles go to CSV side files on request.

Exit codes: 0 success, 2 validation error, 3 numerical-guard error
(ambiguous kernel, obstruction, ill-conditioned resolvent).
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import clifford as cliff
from .abs_index import abs_class
from .errors import (AmbiguousKernelError, IllConditionedError,
                     InvalidModuleError, ObstructionError, ValidationError)
from .flow import FlowOptions, SkewPath, spectral_flow
from .models import CMat, LatticeSpec, aii_path, flux_path, hermitian_double, kitaev_path
from .flow import classical_sf
from .pairs import ComplexStructure, pair_index
from .props import run_all
from .rs_verify import (RSProblem, assemble_rs_operator, hermite_values,
                        numeric_kernel, verify_rs)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _load_matrix(path: str) -> np.ndarray:
    obj = _load_json(path)
    if isinstance(obj, dict):
        data = np.asarray(obj["data"], dtype=float)
        n = int(obj.get("n", round(np.sqrt(data.size))))
        return data.reshape(n, n)
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 1:
        n = int(round(np.sqrt(arr.size)))
        return arr.reshape(n, n)
    return arr


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(f"{x:.12g}" for x in row) + "\n")


def _tracks(path: SkewPath, count: int, out: str, samples: int = 101) -> None:
    rows = []
    for t in np.linspace(0.0, 1.0, samples):
        svals = np.linalg.svd(path.at(t), compute_uv=False)
        rows.append([t] + sorted(svals)[:count])
    _write_csv(out, ["t"] + [f"sigma{i + 1}" for i in range(count)], rows)


def cmd_irrep(args) -> int:
    rep = cliff.irreducible_rep(args.r, args.s, args.chirality)
    _emit(cliff.rep_to_json(rep))
    return 0


def cmd_check(args) -> int:
    obj = _load_json(args.module)
    try:
        r, s, n = int(obj["r"]), int(obj["s"]), int(obj["n"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed representation JSON: {exc}") from exc
    rep = cliff.CliffordRep(
        r, s, n,
        E=tuple(np.asarray(m, dtype=float).reshape(n, n) for m in obj.get("E", [])),
        F=tuple(np.asarray(m, dtype=float).reshape(n, n) for m in obj.get("F", [])))
    report = cliff.check_relations(rep, args.tol)
    _emit({"ok": report.ok,
           "max_residual": report.max_residual,
           "violations": [{"relation": name, "residual": res}
                          for name, res in report.violations]})
    return 0


def cmd_pair_index(args) -> int:
    ctx = cliff.rep_from_json(_load_json(args.module))
    j0 = ComplexStructure(_load_matrix(args.j0), ctx)
    j1 = ComplexStructure(_load_matrix(args.j1), ctx)
    value, kernel = pair_index(j0, j1)
    _emit({"class": value.to_json(), "kernel_dim": kernel.n})
    return 0


def _model_path(args) -> SkewPath:
    if args.model == "kitaev":
        return kitaev_path(LatticeSpec(args.N))
    if args.model == "flux":
        module = cliff.rep_from_json(_load_json(args.module))
        return flux_path(module, args.N)
    raise ValidationError(f"unknown model {args.model!r}")


def cmd_sf(args) -> int:
    if args.model:
        path = _model_path(args)
    elif args.path:
        obj = _load_json(args.path)
        ctx = cliff.rep_from_json(obj["context"]) if "context" in obj \
            else cliff.CliffordRep(0, 0, int(obj["n"]))
        times = np.asarray(obj["t"], dtype=float)
        mats = [np.asarray(m, dtype=float).reshape(ctx.n, ctx.n) for m in obj["T"]]
        if times.size != len(mats) or times.size < 2:
            raise ValidationError("sampled path needs matching t and T lists")

        def fn(t, times=times, mats=mats):
            idx = np.searchsorted(times, t, side="right") - 1
            idx = min(max(idx, 0), times.size - 2)
            w = (t - times[idx]) / (times[idx + 1] - times[idx])
            return (1 - w) * mats[idx] + w * mats[idx + 1]

        path = SkewPath(ctx, fn, label="sampled path")
    else:
        raise ValidationError("sf needs either --model or --path")
    value = spectral_flow(path, FlowOptions(seed=args.seed))
    _emit({"class": value.to_json(), "label": path.label})
    if args.tracks and args.out:
        _tracks(path, args.tracks, args.out)
    return 0


def cmd_kitaev(args) -> int:
    path = kitaev_path(LatticeSpec(args.N))
    value = spectral_flow(path, FlowOptions(seed=args.seed))
    _emit(value.to_json())
    if args.tracks and args.out:
        _tracks(path, args.tracks, args.out)
    return 0


def cmd_flux(args) -> int:
    module = cliff.rep_from_json(_load_json(args.module))
    path = flux_path(module, args.N)
    value = spectral_flow(path, FlowOptions(seed=args.seed))
    _emit({"class": value.to_json(), "module_class": abs_class(module).to_json()})
    if args.tracks and args.out:
        _tracks(path, args.tracks, args.out)
    return 0


def cmd_aii(args) -> int:
    def h_fn(t):
        return CMat.real((2.0 * t - 1.0) * np.eye(4))

    path = aii_path(h_fn, 4)
    value = spectral_flow(path, FlowOptions(seed=args.seed))
    classical = classical_sf(lambda t: hermitian_double(h_fn(t)))
    _emit({"class": value.to_json(),
           "classical_sf": classical,
           "quarter_relation": 4 * value.value == classical})
    if args.tracks and args.out:
        _tracks(path, args.tracks, args.out)
    return 0


def cmd_rs_check(args) -> int:
    module = cliff.rep_from_json(_load_json(args.module)) if args.module \
        else cliff.CliffordRep(0, 1, 2, F=(cliff.L1,))
    problem = RSProblem(module, L=args.L, m=args.m)
    report = verify_rs(problem)
    _emit(report.to_json())
    if args.out:
        op = assemble_rs_operator(problem)
        basis, _ = numeric_kernel(op)
        points = np.linspace(-4.0, 6.0, 401)
        phi = hermite_values(problem.m, points / problem.scale) / np.sqrt(problem.scale)
        full = op._retained_basis @ basis
        cell = 2 * module.n
        rows = []
        for i, x in enumerate(points):
            row = [x]
            for col in range(full.shape[1]):
                coeffs = full[:, col].reshape(problem.m, cell)
                row.extend(phi[i] @ coeffs)
            rows.append(row)
        header = ["x"] + [f"v{c + 1}_{k + 1}" for c in range(basis.shape[1])
                          for k in range(cell)]
        _write_csv(args.out, header, rows)
    return 0


def cmd_props(args) -> int:
    records = run_all(args.seed)
    failures = [rec for rec in records if not rec["ok"]]
    _emit({"seed": args.seed,
           "total": len(records),
           "failures": failures,
           "ok": not failures})
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koflow",
        description="KO-valued indices and spectral flow at finite matrix scale")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("irrep", help="canonical irreducible representation")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--chirality", choices=["+", "-"], default=None)
    p.set_defaults(fn=cmd_irrep)

    p = sub.add_parser("check", help="validate a representation JSON")
    p.add_argument("--module", required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("pair-index", help="index of a pair of complex structures")
    p.add_argument("--j0", required=True)
    p.add_argument("--j1", required=True)
    p.add_argument("--module", required=True, help="context representation JSON")
    p.set_defaults(fn=cmd_pair_index)

    p = sub.add_parser("sf", help="spectral flow of a model or sampled path")
    p.add_argument("--model", choices=["kitaev", "flux"], default=None)
    p.add_argument("--path", default=None, help="JSON file with t and T samples")
    p.add_argument("--module", default=None, help="module JSON (flux model)")
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tracks", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_sf)

    p = sub.add_parser("kitaev", help="Kitaev chain flux insertion")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tracks", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_kitaev)

    p = sub.add_parser("flux", help="flux insertion with a module unit cell")
    p.add_argument("--module", required=True)
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tracks", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_flux)

    p = sub.add_parser("aii", help="class AII demonstration path")
    p.add_argument("--demo", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tracks", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_aii)

    p = sub.add_parser("rs-check", help="Robbin-Salamon verification")
    p.add_argument("--module", default=None)
    p.add_argument("--L", type=float, default=12.0)
    p.add_argument("--m", type=int, default=1200)
    p.add_argument("--out", default=None, help="CSV of kernel profiles")
    p.set_defaults(fn=cmd_rs_check)

    p = sub.add_parser("props", help="run all invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_props)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, InvalidModuleError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except (AmbiguousKernelError, ObstructionError, IllConditionedError) as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

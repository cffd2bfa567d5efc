"""Batch front end: verification suites, spectra export, Bethe solving.

Subcommands
-----------
verify      run functional-identity checks, write a JSON/CSV report
spectra     joint eigenbasis, polynomial coefficients and zero sets
bethe       solve the quadratic system, certify Bethe equations
intertwine  closed-form intertwiners, defining-equation and Yang-Baxter
            residuals, numeric nullspace dimension
partition   torus partition function from transfer eigenvalues

Reports are deterministic for a fixed configuration (including the
seed): complex numbers are serialized as [re, im] pairs and floats with
full round-trip precision.  Exit codes: 0 all checks passed, 1 a check
failed (report still written), 2 invalid configuration, 3 resource
guard refused the computation.

The default output directory is $SIXVERTEX_OUTDIR, falling back to the
working directory.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .bethe import sector_bethe
from .errors import SizeError
from .identities import IDENTITY_IDS, check_identity, seeded_rng, annulus_sample
from .intertwiners import (build_intertwiner, check_intertwining,
                           check_ybe_and_qcomm, solve_intertwiner_numeric,
                           ybe_lambda)
from .roots import make_root_of_unity
from .spectra import sector_spectrum
from .vertex import partition_function, weight_from_sz

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_GUARD = 3

OUTDIR_ENV = "SIXVERTEX_OUTDIR"


@dataclass
class RunConfig:
    command: str
    N: int = 4
    n: int = 1
    M: int = 3
    sectors: object = "all"
    identities: object = "all"
    samples: int = 5
    seed: int = 0
    tol: float = 1e-8
    restarts: int = 200
    rows: int = 1
    z: complex | None = None
    s: complex | None = None
    t: complex | None = None
    out: str | None = None
    fmt: str = "json"
    guard_override: bool = False

    def validate(self):
        if self.N < 3:
            raise ValueError("N must be >= 3")
        if not 1 <= self.n < self.N:
            raise ValueError("primitive exponent must satisfy 1 <= n < N")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.fmt not in ("json", "csv"):
            raise ValueError("format must be json or csv")


def jsonable(value):
    """Recursively convert report payloads to JSON-safe structures."""
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.complexfloating,)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def _outpath(config, default_name):
    if config.out:
        return config.out
    base = os.environ.get(OUTDIR_ENV, ".")
    return os.path.join(base, default_name)


def _write_report(config, payload, default_name, csv_rows=None,
                  csv_header=None):
    path = _outpath(config, default_name)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    if config.fmt == "json":
        with open(path, "w") as fh:
            json.dump(jsonable(payload), fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(csv_header)
        for row in csv_rows:
            writer.writerow(row)
        with open(path, "w") as fh:
            fh.write(buf.getvalue())
    return path


def _parse_complex(text):
    if text is None:
        return None
    return complex(text.replace("i", "j"))


def _sector_list(config):
    if config.sectors == "all":
        return [0.5 * (config.M - 2 * w) for w in range(config.M + 1)]
    return list(config.sectors)


# ---------------------------------------------------------------------------
# subcommand drivers


def run_verify(config):
    root = make_root_of_unity(config.N, config.n)
    ids = IDENTITY_IDS if config.identities == "all" else [
        i.upper() for i in config.identities]
    reports = []
    failed = False
    for ident in ids:
        rep = check_identity(ident, root, config.M, samples=config.samples,
                             seed=config.seed, tol=config.tol,
                             guard_override=config.guard_override)
        reports.append(rep.to_dict())
        mark = rep.status.upper()
        print(f"{ident:7s} N={config.N} M={config.M} "
              f"max_residual={rep.max_residual:.3e} tol={rep.tol:.0e} {mark}")
        failed = failed or rep.status == "fail"
    payload = {"command": "verify", "N": config.N, "n": config.n,
               "M": config.M, "seed": config.seed, "tol": config.tol,
               "samples": config.samples, "reports": reports}
    rows = [[r["identity_id"], r["N"], r["n"], r["M"], r["max_residual"],
             r["tol"], r["status"]] for r in reports]
    path = _write_report(config, payload,
                         f"verify_N{config.N}_M{config.M}.{config.fmt}",
                         csv_rows=rows,
                         csv_header=["identity_id", "N", "n", "M",
                                     "max_residual", "tol", "status"])
    print(f"report written to {path}")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def run_spectra(config):
    root = make_root_of_unity(config.N, config.n)
    rows = []
    records = []
    for sz in _sector_list(config):
        w = weight_from_sz(config.M, sz)
        family, polys = sector_spectrum(root, config.M, w, seed=config.seed,
                                        s_base=config.s,
                                        guard_override=config.guard_override)
        for poly in polys:
            first_s = next(iter(poly.coeffs))
            coeffs = poly.coeffs[first_s]
            records.append({
                "sector": sz, "eigen_index": poly.eigen_index,
                "s": first_s, "coefficients": list(coeffs),
                "zeroes_plus": poly.zeroes_plus,
                "zeroes_minus": poly.zeroes_minus,
                "strings": poly.strings, "warnings": poly.warnings,
                "zero_eigenvalue": poly.zero_eigenvalue,
                "norm_residual": poly.norm_residual,
            })
            rows.append([sz, poly.eigen_index]
                        + [json.dumps(jsonable(c)) for c in coeffs]
                        + [json.dumps(jsonable(poly.zeroes_plus)),
                           json.dumps(jsonable(poly.zeroes_minus)),
                           json.dumps(jsonable(poly.strings))])
    payload = {"command": "spectra", "N": config.N, "n": config.n,
               "M": config.M, "seed": config.seed, "records": records}
    header = (["sector", "eigen_index"]
              + [f"coeff_{m}" for m in range(config.M + 1)]
              + ["zeroes_plus", "zeroes_minus", "strings"])
    path = _write_report(config, payload,
                         f"spectra_N{config.N}_M{config.M}.{config.fmt}",
                         csv_rows=rows, csv_header=header)
    print(f"{len(records)} eigenvector records; report written to {path}")
    return EXIT_OK


def run_bethe(config):
    root = make_root_of_unity(config.N, config.n)
    if config.M % 2 == 0:
        raise ValueError("bethe requires odd M")
    records = []
    rows = []
    worst = 0.0
    for sz in _sector_list(config):
        solutions, _ = sector_bethe(root, config.M, sz,
                                    restarts=config.restarts,
                                    seed=config.seed, tol=config.tol)
        bound = __import__("math").comb(config.M,
                                        weight_from_sz(config.M, sz))
        print(f"sector S^z={sz:+.1f}: {len(solutions)} solutions "
              f"(bound {bound})")
        for sol in solutions:
            worst = max(worst, sol.residual_wronskian, sol.residual_bae or 0)
            records.append(sol.to_dict())
            rows.append([sz, json.dumps(jsonable(list(sol.e_plus))),
                         json.dumps(jsonable(list(sol.e_minus))),
                         json.dumps(jsonable(list(sol.k_plus))),
                         json.dumps(jsonable(list(sol.k_minus))),
                         sol.residual_wronskian, sol.residual_bae])
    payload = {"command": "bethe", "N": config.N, "n": config.n,
               "M": config.M, "seed": config.seed,
               "restarts": config.restarts, "solutions": records}
    path = _write_report(config, payload,
                         f"bethe_N{config.N}_M{config.M}.{config.fmt}",
                         csv_rows=rows,
                         csv_header=["sector", "e_plus", "e_minus", "k_plus",
                                     "k_minus", "residual_wronskian",
                                     "residual_bae"])
    print(f"report written to {path}")
    return EXIT_OK if worst < max(config.tol, 1e-7) else EXIT_CHECK_FAILED


def run_intertwine(config):
    root = make_root_of_unity(config.N, config.n)
    rng = seeded_rng(config.seed, "cliintertwine", config.N, config.n)
    records = []
    failed = False
    for k in range(config.samples):
        z = config.z if config.z is not None else annulus_sample(rng, root)
        s = config.s if config.s is not None else annulus_sample(rng, root)
        t = config.t if config.t is not None else annulus_sample(rng, root)
        w = annulus_sample(rng, root)
        rec = {"z": z, "s": s, "t": t, "w": w}
        if root.N in (4, 6):
            lam = ybe_lambda(z / w, s, t) if root.N == 4 else None
            S = build_intertwiner(root, z / w, s, t, lam=lam)
            rec["defining_residual"] = check_intertwining(S, root, z / w, s, t)
            ybe = check_ybe_and_qcomm(S, root, z, w, s, t, config.M,
                                      guard_override=config.guard_override)
            rec.update(ybe.samples[0]["params"])
            rec["status"] = ("pass" if max(rec["defining_residual"],
                                           rec["ybe_residual"]) < config.tol
                             else "fail")
            if root.N == 6:
                rec["w_substitution"] = S.w_substitution
        basis = solve_intertwiner_numeric(root, z / w, s, t)
        rec["nullspace_dim"] = len(basis)
        if basis:
            rec["nullspace_gap"] = basis[0].singular_gap
        records.append(rec)
        failed = failed or rec.get("status") == "fail"
    payload = {"command": "intertwine", "N": config.N, "n": config.n,
               "M": config.M, "seed": config.seed, "records": records}
    rows = [[jsonable(r.get(k)) for k in ("z", "s", "t",
                                          "defining_residual",
                                          "ybe_residual", "qcomm_residual",
                                          "nullspace_dim")] for r in records]
    path = _write_report(config, payload,
                         f"intertwine_N{config.N}.{config.fmt}",
                         csv_rows=rows,
                         csv_header=["z", "s", "t", "defining_residual",
                                     "ybe_residual", "qcomm_residual",
                                     "nullspace_dim"])
    dims = sorted({r["nullspace_dim"] for r in records})
    print(f"nullspace dimension(s) observed: {dims}; report at {path}")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def run_partition(config):
    root = make_root_of_unity(config.N, config.n)
    rng = seeded_rng(config.seed, "clipartition", config.N, config.n)
    z = config.z if config.z is not None else annulus_sample(rng, root)
    value = partition_function(root, z, config.M, config.rows,
                               guard_override=config.guard_override)
    payload = {"command": "partition", "N": config.N, "n": config.n,
               "M": config.M, "rows": config.rows, "z": z, "value": value}
    path = _write_report(config, payload,
                         f"partition_N{config.N}_M{config.M}.{config.fmt}",
                         csv_rows=[[jsonable(z), jsonable(value)]],
                         csv_header=["z", "value"])
    print(f"Z = {value} at z = {z}; report written to {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sixvertex",
        description="six-vertex model verification laboratory at roots of unity")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "spectra", "bethe", "intertwine", "partition"):
        p = sub.add_parser(name)
        p.add_argument("--N", type=int, required=True, help="root order")
        p.add_argument("--primitive-n", type=int, default=1, dest="n",
                       help="exponent selecting q = exp(2 pi i n / N)")
        p.add_argument("--M", type=int, default=3, help="lattice columns")
        p.add_argument("--sector", action="append", type=float, default=None,
                       help="S^z sector (repeatable; default all)")
        p.add_argument("--identities", default="all",
                       help="comma list of identity ids, or 'all'")
        p.add_argument("--samples", type=int, default=5)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--restarts", type=int, default=200)
        p.add_argument("--rows", type=int, default=1,
                       help="lattice rows (partition)")
        p.add_argument("--z", type=str, default=None,
                       help="complex override, e.g. '1.2+0.3j'")
        p.add_argument("--s", type=str, default=None)
        p.add_argument("--t", type=str, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json",
                       dest="fmt")
        p.add_argument("--guard-override", action="store_true")
    return parser


def config_from_args(args):
    identities = args.identities
    if identities != "all":
        identities = [x for x in identities.split(",") if x]
    return RunConfig(
        command=args.command, N=args.N, n=args.n, M=args.M,
        sectors=("all" if args.sector is None else args.sector),
        identities=identities, samples=args.samples, seed=args.seed,
        tol=args.tol, restarts=args.restarts, rows=args.rows,
        z=_parse_complex(args.z), s=_parse_complex(args.s),
        t=_parse_complex(args.t), out=args.out, fmt=args.fmt,
        guard_override=args.guard_override)


_DRIVERS = {
    "verify": run_verify,
    "spectra": run_spectra,
    "bethe": run_bethe,
    "intertwine": run_intertwine,
    "partition": run_partition,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_CONFIG if exc.code else EXIT_OK
    try:
        config = config_from_args(args)
        config.validate()
    except (ValueError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    try:
        return _DRIVERS[config.command](config)
    except SizeError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())

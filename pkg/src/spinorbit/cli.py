"""Command-line front end.

Subcommands:
  prove             run fixed-point proofs and covering-chain theorems,
                    writing one JSON certificate per theorem
  section-scatter   non-rigorous return-map scatter data (CSV)
  manifold-scatter  non-rigorous stable/unstable manifold fragments (CSV)
  bench             compare the compiled and pure-Python kernels

Exit codes: 0 all requested verdicts proved, 1 verification failure,
2 usage or configuration error. Every flag can also be set through an
environment variable SPINORBIT_<FLAG> (dashes as underscores), which CI
configurations use.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import DomainError
from .integrator import Settings
from .model import ModelParams

SELECTORS = (
    "all",
    "fixed-points",
    "p1p2",
    "p1p1",
    "p2p2",
    "p3p3",
    "p1p3",
    "p2p3",
)


def _env_default(name: str, fallback):
    return os.environ.get(f"SPINORBIT_{name.upper().replace('-', '_')}", fallback)


def _parse_params(text: str) -> ModelParams:
    kwargs = {}
    if text:
        for part in text.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key == "e":
                kwargs["e"] = value.strip()
            elif key in ("omega2", "w2"):
                kwargs["omega2"] = value.strip()
            else:
                raise ValueError(f"unknown parameter {key!r}")
    return ModelParams(**kwargs)


def _settings_from(args) -> Settings:
    kwargs = {}
    if args.order is not None:
        kwargs["order"] = args.order
    if args.tol is not None:
        kwargs["tol"] = args.tol
    if args.subdiv_depth is not None:
        kwargs["max_subdiv_depth"] = args.subdiv_depth
    return Settings(**kwargs)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spinorbit",
        description="validated symbolic-dynamics proofs for the spin-orbit rotation model",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    prove = sub.add_parser("prove", help="run verification and write certificates")
    prove.add_argument(
        "--theorem",
        default=_env_default("theorem", "all"),
        choices=SELECTORS,
        help="which theorem to verify",
    )
    prove.add_argument(
        "--params",
        default=_env_default("params", ""),
        help="parameter overrides, e.g. e=0.1,omega2=0.79",
    )
    prove.add_argument("--order", type=int, default=_maybe_int(_env_default("order", None)))
    prove.add_argument("--tol", type=float, default=_maybe_float(_env_default("tol", None)))
    prove.add_argument(
        "--subdiv-depth",
        type=int,
        default=_maybe_int(_env_default("subdiv_depth", None)),
        help="subdivision depth cap for covering checks",
    )
    prove.add_argument(
        "--out", default=_env_default("out", "certificates"), help="output directory"
    )
    prove.add_argument(
        "--threads",
        type=int,
        default=int(_env_default("threads", "1")),
        help="parallel theorems (wall time only; results are identical)",
    )
    prove.add_argument(
        "--robustness",
        action="store_true",
        default=_env_default("robustness", "").lower() in ("1", "true", "yes"),
        help="also re-attempt each theorem with 20%%-inflated base boxes (informational)",
    )

    scatter = sub.add_parser("section-scatter", help="return-map scatter CSV")
    scatter.add_argument("--orbits", type=int, default=12)
    scatter.add_argument("--iters", type=int, default=2000)
    scatter.add_argument("--params", default=_env_default("params", ""))
    scatter.add_argument(
        "--seedlist",
        default="",
        help="semicolon-separated theta,phi pairs; default spreads across the sea",
    )
    scatter.add_argument("--out", default="section_scatter.csv")

    manifold = sub.add_parser("manifold-scatter", help="manifold fragments CSV")
    manifold.add_argument("point", choices=["P1", "P2", "P3", "p1", "p2", "p3"])
    manifold.add_argument("--length", type=int, default=6)
    manifold.add_argument("--params", default=_env_default("params", ""))
    manifold.add_argument("--out", default="manifold_scatter.csv")

    bench = sub.add_parser("bench", help="kernel backend benchmark")
    bench.add_argument("--order", type=int, default=21)
    bench.add_argument("--skip-return", action="store_true")

    return ap


def _maybe_int(v):
    return None if v is None else int(v)


def _maybe_float(v):
    return None if v is None else float(v)


def cmd_prove(args) -> int:
    from .proofs import THEOREMS, prove_fixed_points, run_theorem

    try:
        params = _parse_params(args.params)
        settings = _settings_from(args)
    except (ValueError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    selected = list(THEOREMS) if args.theorem == "all" else [args.theorem]
    want_fixed = args.theorem in ("all", "fixed-points")
    theorems = [t for t in selected if t != "fixed-points"]

    failures: list[str] = []
    fixed = None
    if want_fixed or theorems:
        fixed, report = prove_fixed_points(params, settings)
        if want_fixed:
            path = out_dir / "fixed-points.json"
            path.write_text(report.to_json())
            status = "proved" if report.verdict else "FAILED"
            print(f"fixed-points: {status}  ({report.wall_time:.1f}s)  -> {path}")
            if not report.verdict:
                failures.append("fixed-points")
        if args.theorem == "fixed-points":
            return 1 if failures else 0

    def run_one(name: str):
        rep = run_theorem(name, params, settings, fixed_points=fixed)
        extra = None
        if args.robustness:
            extra = run_theorem(name, params, settings, inflate=1.2, fixed_points=fixed)
        return name, rep, extra

    if args.threads > 1 and len(theorems) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(run_one, theorems))
    else:
        results = [run_one(name) for name in theorems]

    for name, rep, extra in results:
        path = out_dir / f"{name}.json"
        path.write_text(rep.to_json())
        status = "proved" if rep.verdict else "FAILED"
        print(f"{name}: {status}  ({rep.wall_time:.1f}s)  -> {path}")
        if extra is not None:
            rpath = out_dir / f"{name}.robustness.json"
            rpath.write_text(extra.to_json())
            print(
                f"   20%-inflated boxes: "
                f"{'still verify' if extra.verdict else 'fail (boxes are sharp)'}"
            )
        if not rep.verdict:
            first = next(
                (c for c in rep.certificates if not c["verified"]), None
            )
            if first is not None:
                print(
                    f"   first failing relation: {first['source']}=>{first['target']}"
                    f" k={first['iterate']}: {first.get('failure')}",
                    file=sys.stderr,
                )
            failures.append(name)

    return 1 if failures else 0


def cmd_section_scatter(args) -> int:
    from .explore import default_seeds, section_orbits

    try:
        params = _parse_params(args.params)
    except (ValueError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if args.seedlist:
        seeds = []
        for pair in args.seedlist.split(";"):
            th, ph = pair.split(",")
            seeds.append((float(th), float(ph)))
    else:
        seeds = default_seeds(args.orbits)
    rows = section_orbits(
        seeds, args.iters, e=params.e.midpoint(), w2=params.omega2.midpoint()
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta", "phi", "orbit_id"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} points to {args.out}")
    return 0


def cmd_manifold_scatter(args) -> int:
    from .explore import manifold_polylines

    try:
        params = _parse_params(args.params)
    except (ValueError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    rows = manifold_polylines(
        args.point, args.length, e=params.e.midpoint(), w2=params.omega2.midpoint()
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["branch", "step", "theta", "phi"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} points to {args.out}")
    return 0


def cmd_bench(args) -> int:
    from .bench import format_benchmark, run_benchmark

    results = run_benchmark(order=args.order, full_return=not args.skip_return)
    print(format_benchmark(results))
    ok = all(e["matches_first_backend"] for e in results["backends"].values())
    return 0 if ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "prove":
        return cmd_prove(args)
    if args.command == "section-scatter":
        return cmd_section_scatter(args)
    if args.command == "manifold-scatter":
        return cmd_manifold_scatter(args)
    if args.command == "bench":
        return cmd_bench(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())

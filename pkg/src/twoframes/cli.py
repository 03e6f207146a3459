"""Command-line front end: ``validate``, ``bench`` and ``selftest``.

Exit codes: 0 success, 1 validation failure, 2 numerical failure,
3 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .scenarios import FILTERS, METRICS, ConfigError, ScenarioConfig, build_system, run_monte_carlo
from .system import FrameClass, validate_system

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2, 3

# Classification each built-in family is expected to reach.
EXPECTED = {
    "lever_arm_car": {FrameClass.Abelian},
    "slammot": {FrameClass.CaseB},
    "inertial_nav": {FrameClass.NotNatural},
}


def fmt(value) -> str:
    return format(float(value), ".17g")


def load_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig()
    p = Path(path)
    try:
        if p.suffix == ".json":
            data = json.loads(p.read_text())
            data = data.get("config", data)
        else:
            data = tomllib.loads(p.read_text())
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return ScenarioConfig.from_sections(data)


def resolve_config(args) -> ScenarioConfig:
    cfg = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.runs is not None:
        changes["runs"] = args.runs
    if args.filters is not None:
        changes["filters"] = [f.strip() for f in args.filters.split(",") if f.strip()]
    return cfg.replace(**changes) if changes else cfg


def dump_config(cfg: ScenarioConfig) -> str:
    import tomli_w

    return tomli_w.dumps(cfg.to_sections())


def cmd_validate(cfg: ScenarioConfig, out=None) -> int:
    out = sys.stdout if out is None else out
    system = build_system(cfg)
    if not system.outputs:
        raise ConfigError("system has no outputs to validate")
    report = validate_system(system)
    cls = report["frame_class"]
    affine = report["group_affine_residual"]
    print(f"system: {system.name}  shape SO({system.shape.d})^+_{{{system.shape.n1},{system.shape.n2}}}", file=out)
    print(f"vector dynamics commute: {report['vector_natural']}", file=out)
    print(f"outputs commute: {report['outputs_natural']}", file=out)
    if cls is FrameClass.NotNatural and cfg.id == "inertial_nav":
        print("frame dynamics: NotNatural (gyro bias in frame dynamics)", file=out)
    else:
        print(f"frame dynamics: {cls.value}", file=out)
    label = "group-affine" if affine < 1e-10 else "not group-affine"
    print(f"{cls.value} / {label}, residual {affine:.1e}", file=out)
    ok = report["vector_natural"] and report["outputs_natural"] and cls in EXPECTED[cfg.id]
    if cls.natural:
        ok = ok and affine < 1e-10
    print("PASS" if ok else "FAIL", file=out)
    return EXIT_OK if ok else EXIT_INVALID


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        w.writerows(rows)


def cmd_bench(cfg: ScenarioConfig, out_dir: Path, config_path: str | None, out=None) -> int:
    out = sys.stdout if out is None else out
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_paths = {f: str(out_dir / f"{f}.csv") for f in cfg.filters}
    manifest = {
        "config_path": config_path,
        "seed": cfg.seed,
        "version": __version__,
        "out_dir": str(out_dir),
        "csv": csv_paths,
        "summary_csv": str(out_dir / "summary.csv"),
        "config": cfg.to_sections(),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    with np.errstate(invalid="raise", divide="raise", over="raise"):
        result = run_monte_carlo(cfg)
    for f in cfg.filters:
        curves = [result.rmse[f][m] for m in METRICS]
        if not all(np.all(np.isfinite(c)) for c in curves):
            print(f"non-finite RMSE for filter {f}", file=sys.stderr)
            return EXIT_NUMERIC
        rows = ([fmt(t)] + [fmt(c[k]) for c in curves] for k, t in enumerate(result.t))
        _write_csv(Path(csv_paths[f]), ["time_s", *METRICS], rows)
    summary = [[f] + [fmt(result.final(f, m)) for m in METRICS] for f in cfg.filters]
    _write_csv(out_dir / "summary.csv", ["filter", *METRICS], summary)
    for row in summary:
        print(" ".join([row[0]] + [f"{m}={float(v):.4g}" for m, v in zip(METRICS, row[1:])]), file=out)
    return EXIT_OK


def cmd_selftest(tol: float | None, out=None) -> int:
    out = sys.stdout if out is None else out
    from .selftest import run_all

    results = run_all(tol)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: max residual {r.residual:.3e} (tol {r.tol:.0e})", file=out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twoframes", description=__doc__.splitlines()[0])
    p.add_argument("command", nargs="?", choices=["validate", "bench", "selftest"])
    p.add_argument("--config", metavar="PATH", help="TOML config, or a bench manifest.json to replay")
    p.add_argument("--seed", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--out", metavar="DIR", default="results")
    p.add_argument("--filters", metavar="LIST", help=f"comma-separated subset of {','.join(FILTERS)}")
    p.add_argument("--tol", type=float, help="selftest: override every suite tolerance")
    p.add_argument("--print-config", action="store_true", help="print the resolved config as TOML and exit")
    p.add_argument("--version", action="version", version=__version__)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.print_config:
            sys.stdout.write(dump_config(cfg))
            return EXIT_OK
        if args.command is None:
            raise ConfigError("a command is required: validate, bench or selftest")
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "bench":
            return cmd_bench(cfg, Path(args.out), args.config)
        return cmd_selftest(args.tol)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

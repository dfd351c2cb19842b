"""Command line: ``qxent run <config.json>`` and ``qxent describe <experiment>``.

Exit codes: 0 all checks pass, 2 some check failed, 1 bad config, rejected
parameters or I/O error.  Configs are validated before anything is written, so a bad config
leaves no partial outputs behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .errors import QxentError
from .experiments import DESCRIPTIONS, RUNNERS, ExperimentResult, schema

OUTPUT_ENV = "QXENT_OUTPUT_DIR"


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


class ConfigError(Exception):
    pass


def load_config(path: str | os.PathLike) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from e
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    if not isinstance(cfg, dict) or cfg.get("experiment") not in RUNNERS:
        raise ConfigError(f"config must name one of: {', '.join(RUNNERS)}")
    try:
        jsonschema.validate(cfg, schema(cfg["experiment"]))
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {e.message}") from e
    if cfg["experiment"] == "verify-jarzynski" and cfg.get("d_min", 2) > cfg.get("d_max", 8):
        raise ConfigError("d_min exceeds d_max")
    return cfg


def output_dir(cfg: dict) -> Path:
    return Path(os.environ.get(OUTPUT_ENV) or cfg.get("output_dir", "results"))


def build_report(cfg: dict, result: ExperimentResult) -> dict:
    return {
        "qxent_version": __version__,
        "experiment": cfg["experiment"],
        "config": cfg,
        "passed": result.passed,
        "checks": {k: v.as_dict() for k, v in result.checks.items()},
        "summary": result.summary,
    }


def write_outputs(out: Path, cfg: dict, result: ExperimentResult) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    path = out / "report.json"
    path.write_text(dumps(build_report(cfg, result)) + "\n", newline="\n")
    written.append(path)
    for name, table in result.tables.items():
        path = out / f"{name}.csv"
        path.write_text(to_csv(table.columns, table.rows), newline="\n")
        written.append(path)
    return written


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    out = output_dir(cfg)
    if out.exists() and not out.is_dir():
        print(f"error: output path {out} is not a directory", file=sys.stderr)
        return 1
    try:
        result = RUNNERS[cfg["experiment"]](cfg)
    except QxentError as e:
        # parameters that pass the schema but the library rejects (e.g. no cutoff convergence)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    try:
        write_outputs(out, cfg, result)
    except OSError as e:
        print(f"error: cannot write outputs: {e}", file=sys.stderr)
        return 1
    for name, check in result.checks.items():
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {name}: {check.kind}={check.value:.3e} tol={check.tolerance:.1e}")
    print(f"wrote {out}")
    return 0 if result.passed else 2


def cmd_describe(args) -> int:
    if args.experiment not in RUNNERS:
        print(f"error: unknown experiment {args.experiment!r}; choose from {', '.join(RUNNERS)}",
              file=sys.stderr)
        return 1
    print(f"{args.experiment}\n")
    print(DESCRIPTIONS[args.experiment])
    print("\nconfig schema:")
    print(json.dumps(schema(args.experiment), indent=2))
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qxent", description="Cross-entropy fluctuation relation toolkit")
    p.add_argument("--version", action="version", version=f"qxent {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config")
    run.set_defaults(func=cmd_run)
    desc = sub.add_parser("describe", help="print an experiment's schema and the relations it checks")
    desc.add_argument("experiment")
    desc.set_defaults(func=cmd_describe)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

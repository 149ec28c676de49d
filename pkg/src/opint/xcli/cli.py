"""Command-line entry point: one subcommand per verification suite."""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from typing import List, Optional

from ..errors import ConfigError, UnknownSuite
from .config import ExperimentConfig, SUITE_NAMES, load_config
from .suites import SuiteReport, run_suite

__all__ = ["main", "build_parser", "configure_logging"]

LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def configure_logging(env=None) -> None:
    env = os.environ if env is None else env
    level = env.get("OPINT_LOG", "quiet").strip().lower()
    if level not in LOG_LEVELS:
        raise ConfigError(f"OPINT_LOG must be one of {sorted(LOG_LEVELS)}, got {level!r}")
    logging.basicConfig(level=LOG_LEVELS[level], format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr,
                        force=True)


def _p_value(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return float("inf")
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opint", description="Seeded numerical checks for operator integrals.")
    sub = parser.add_subparsers(dest="suite", required=True, metavar="SUITE")
    for name in SUITE_NAMES:
        sp = sub.add_parser(name, help=f"run the {name} suite")
        sp.add_argument("--config", help="key=value or JSON configuration file")
        sp.add_argument("--n", type=int, help="matrix size")
        sp.add_argument("--trials", type=int, help="number of seeded trials")
        sp.add_argument("--seed", type=int, help="64-bit seed")
        sp.add_argument("--p", type=_p_value, help="Schatten exponent (number or inf)")
        sp.add_argument("--alpha", type=float, help="Holder exponent in (0, 1)")
        sp.add_argument("--f", dest="f_name", help="function from the built-in library")
        sp.add_argument("--Ns", help="comma-separated sizes for the counterexample sweep")
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--csv", help="write per-trial records as CSV here")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    base = {}
    if args.config:
        cfg = load_config(args.config)
        if cfg.suite != args.suite:
            raise ConfigError(f"config names suite {cfg.suite!r} but {args.suite!r} was requested")
        base = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    base["suite"] = args.suite
    for key in ("n", "trials", "seed", "p", "alpha", "f_name"):
        v = getattr(args, key)
        if v is not None:
            base[key] = v
    if args.Ns:
        try:
            base["Ns"] = tuple(int(x) for x in args.Ns.split(","))
        except ValueError:
            raise ConfigError(f"bad --Ns value {args.Ns!r}") from None
    return ExperimentConfig(**base)


def write_csv(path: str, rep: SuiteReport) -> None:
    cols: List[str] = []
    for r in rep.records:
        for k in r:
            if k not in cols:
                cols.append(k)
    if rep.config.get("suite") == "counterexample":
        cols = ["N", "p", "pert_norm", "diff_norm", "ratio"]
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(cols)
        for r in rep.records:
            wr.writerow([_cell(r.get(c, "")) for c in cols])


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return v


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging()
        cfg = _config_from_args(args)
        rep = run_suite(cfg)
    except (ConfigError, UnknownSuite) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rep.dumps() + "\n")
    if args.csv:
        write_csv(args.csv, rep)
    status = "PASS" if rep.passed else "FAIL"
    agg = ", ".join(f"{k}={v:.4g}" for k, v in sorted(rep.aggregate.items()) if isinstance(v, float))
    print(f"{cfg.suite}: {status} ({len(rep.records)} records{', ' + agg if agg else ''})")
    for msg in rep.failures[:10]:
        print(f"  {msg}")
    if rep.aborted:
        print(f"  aborted: {rep.aborted}")
    return 0 if rep.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

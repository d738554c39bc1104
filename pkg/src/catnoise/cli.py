"""Command-line front end: ``catnoise analyze|sweep|verify|threshold``.

Settings come from ``--config`` (one JSON document) first; any flag given
on the command line overrides the matching config field. Results go to
``--out`` or stdout, diagnostics to stderr (level from ``CATNOISE_LOG``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import sweep
from .algebra import CutError
from .channel import PRESETS, ChannelError
from .oracle import OracleError

logger = logging.getLogger("catnoise")

EXIT_OK, EXIT_FORBIDDEN, EXIT_INVALID = 0, 1, 2


class UsageError(ValueError):
    pass


def _setup_logging() -> None:
    level = os.environ.get("CATNOISE_LOG", "warn").upper()
    level = {"WARN": "WARNING"}.get(level, level)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(getattr(logging, level, logging.WARNING))
    logger.propagate = False


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON config file")
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"))
    sp.add_argument("--workers", type=int)
    sp.add_argument("--seed", type=int)
    g = sp.add_argument_group("channel")
    for name in ("pi0", "pi1", "pi2", "pi3"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--preset", choices=PRESETS)
    g.add_argument("--strength", type=float, help="pi0 of the preset")
    g.add_argument("--random", type=int, metavar="COUNT", help="COUNT random channels from --seed")
    sp.add_argument("--n", type=int, nargs="+", help="one or more N values")
    sp.add_argument("--n-range", type=int, nargs=2, metavar=("START", "STOP"),
                    help="inclusive range of N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catnoise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="all cut verdicts and max M for one channel and N")
    _add_common(sp)

    sp = sub.add_parser("sweep", help="grid scan written as CSV or JSON rows")
    _add_common(sp)
    sp.add_argument("--step", type=float, help="strength step for a preset family sweep")
    sp.add_argument("--start", type=float, default=None)
    sp.add_argument("--stop", type=float, default=None)
    sp.add_argument("--cuts", help="'all', 'min-only' or comma-separated k list")
    sp.add_argument("--oracle", action="store_true", default=None)

    sp = sub.add_parser("verify", help="oracle vs analytic agreement report (JSON)")
    _add_common(sp)
    sp.add_argument("--step", type=float)
    sp.add_argument("--start", type=float, default=None)
    sp.add_argument("--stop", type=float, default=None)
    sp.add_argument("--cuts")

    sp = sub.add_parser("threshold", help="asymptotic threshold f and max M table")
    _add_common(sp)
    sp.add_argument("--step", type=float)
    sp.add_argument("--start", type=float, default=None)
    sp.add_argument("--stop", type=float, default=None)
    return parser


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    return doc


def merged_config(args) -> dict:
    """Config file values overridden by explicit command-line flags."""
    doc = _load_config(args.config)
    pis = [args.pi0, args.pi1, args.pi2, args.pi3]
    channels = []
    if any(x is not None for x in pis):
        channels.append({"pi": [0.0 if x is None else x for x in pis]})
    if args.preset:
        step = getattr(args, "step", None)
        if step is not None:
            channels.append({"family": args.preset, "step": step,
                             "start": 0.0 if args.start is None else args.start,
                             "stop": 1.0 if args.stop is None else args.stop})
        else:
            if args.strength is None:
                raise UsageError("--preset needs --strength (or --step for a range)")
            channels.append({"preset": {"name": args.preset, "strength": args.strength}})
    if args.random:
        channels.append({"random": args.random})
    if channels:
        doc.pop("pi", None)
        doc.pop("preset", None)
        doc["channels"] = channels
    if args.n:
        doc["n_values"] = args.n
    if args.n_range:
        doc["n_values"] = {"start": args.n_range[0], "stop": args.n_range[1]}
    for key in ("out", "format", "workers", "seed"):
        val = getattr(args, key)
        if val is not None:
            doc[key] = val
    cuts = getattr(args, "cuts", None)
    if cuts is not None:
        doc["cuts"] = cuts if cuts in ("all", "min-only") else [int(k) for k in cuts.split(",")]
    if getattr(args, "oracle", None):
        doc["oracle"] = True
    return doc


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    return "-" if x is None else (f"{x:.6g}" if isinstance(x, float) else str(x))


def cmd_analyze(args) -> int:
    doc = merged_config(args)
    cfg = sweep.config_from_dict(doc)
    if len(cfg.channels) != 1 or len(cfg.n_values) != 1:
        raise UsageError("analyze needs exactly one channel and one N")
    ch, n = cfg.channels[0], cfg.n_values[0]
    if n < 2:
        raise UsageError(f"need N >= 2, got {n}")
    result = sweep.analyze(ch, n)
    if doc.get("format") == "json":
        _emit(json.dumps(result, indent=1) + "\n", cfg.out)
        return EXIT_OK
    p, rep, asym = result["params"], result["report"], result["asymptotic"]
    lines = [
        "channel pi = " + ", ".join(_fmt(x) for x in result["channel"]),
        f"a={_fmt(p['a'])} b={_fmt(p['b'])} c={_fmt(p['c'])} d={_fmt(p['d'])}  N={n}",
        f"{'k':>4} {'delta':>14} {'two_lambda':>14} {'log_margin':>14} verdict",
    ]
    for c in result["cuts"]:
        lines.append(f"{c['k']:>4} {_fmt(c['delta']):>14} {_fmt(c['two_lambda']):>14} "
                     f"{_fmt(c['log_margin']):>14} {c['verdict']}")
    lines += [
        f"min_entangled_k = {_fmt(rep['min_entangled_k'])}",
        f"max_M = {_fmt(rep['max_M'])}",
        f"parity_class = {rep['parity_class']}",
        f"f_threshold = {_fmt(asym['f_threshold'])}  regime = {asym['regime']}  "
        f"c^2 > ab: {asym['robust_pair_ok']}",
    ]
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = sweep.config_from_dict(merged_config(args))
    cfg.validate()
    if cfg.out:
        count = sweep.run_sweep(cfg)
    else:
        count = sweep.run_sweep(cfg, stream=sys.stdout)
    logger.info("wrote %d rows", count)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = merged_config(args)
    doc["oracle"] = True
    cfg = sweep.config_from_dict(doc)
    cfg.validate()
    report = sweep.run_verify(cfg)
    _emit(json.dumps(report, indent=1) + "\n", cfg.out)
    s = report["summary"]
    logger.info("verify: %s", s)
    if s[sweep.NECESSITY_GAP]:
        logger.warning("%d points NPPT by oracle but not by delta > 2 lambda", s[sweep.NECESSITY_GAP])
    if s[sweep.FORBIDDEN]:
        logger.error("%d points analytic-yes but oracle PPT", s[sweep.FORBIDDEN])
        return EXIT_FORBIDDEN
    return EXIT_OK


def cmd_threshold(args) -> int:
    doc = merged_config(args)
    cfg = sweep.config_from_dict(doc)
    if not cfg.channels:
        raise UsageError("no channels given")
    table = sweep.threshold_table(cfg.channels, cfg.n_values)
    if doc.get("format") == "json":
        _emit(json.dumps(table, indent=1) + "\n", cfg.out)
        return EXIT_OK
    ns = [str(n) for n in cfg.n_values]
    lines = ["pi0,pi1,pi2,pi3,a,c,f_threshold,asymptotic_max_M," + ",".join(f"max_M@{n}" for n in ns)]
    for row in table:
        vals = row["pi"] + [row["a"], row["c"], row["f_threshold"], row["asymptotic_max_M"]]
        vals += [row["max_M"][n] for n in ns]
        lines.append(",".join(sweep.format_value(v) for v in vals))
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "sweep": cmd_sweep, "verify": cmd_verify,
            "threshold": cmd_threshold}


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ChannelError, CutError, OracleError, sweep.ConfigError, UsageError,
            KeyError, TypeError) as exc:
        logger.error("%s", exc)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

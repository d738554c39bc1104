"""Parameter sweeps over channels and N, with optional oracle cross-checks."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import criteria
from . import oracle as dense
from .algebra import CutSpec
from .channel import PauliChannel, derive_params, preset, validate_channel

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


CSV_COLUMNS = (
    "pi0", "pi1", "pi2", "pi3", "a", "b", "c", "d", "N", "k", "delta", "two_lambda",
    "log_margin", "verdict", "max_M", "f_threshold", "parity_class",
    "oracle_min_eig", "oracle_nppt", "agreement",
)


@dataclass
class SweepConfig:
    channels: list = field(default_factory=list)
    n_values: list = field(default_factory=list)
    cuts: Union[str, list] = "all"
    oracle: bool = False
    out: Optional[str] = None
    format: str = "csv"
    seed: int = 0
    workers: int = 1
    n_max: int = dense.N_MAX

    def validate(self) -> None:
        if not self.channels:
            raise ConfigError("no channels in sweep")
        if not self.n_values:
            raise ConfigError("no N values in sweep")
        if min(self.n_values) < 2:
            raise ConfigError(f"N must be >= 2, got {min(self.n_values)}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if isinstance(self.cuts, str):
            if self.cuts not in ("all", "min-only"):
                raise ConfigError(f"cuts must be 'all', 'min-only' or a list, got {self.cuts!r}")
        elif not self.cuts or any(int(k) < 1 for k in self.cuts):
            raise ConfigError(f"bad cut list {self.cuts!r}")
        if self.oracle and max(self.n_values) > self.n_max:
            raise dense.SizeTooLarge(
                f"oracle requested for N={max(self.n_values)} > N_max={self.n_max}")


@dataclass
class SweepRow:
    pi0: float
    pi1: float
    pi2: float
    pi3: float
    a: float
    b: float
    c: float
    d: float
    N: int
    k: int
    delta: float
    two_lambda: float
    log_margin: float
    verdict: str
    max_M: Optional[int]
    f_threshold: float
    parity_class: str
    oracle_min_eig: Optional[float] = None
    oracle_nppt: Optional[bool] = None
    agreement: Optional[bool] = None


# -- channel grids ---------------------------------------------------------

def _strengths(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise ConfigError(f"step must be positive, got {step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [min(max(round(start + i * step, 12), 0.0), 1.0) for i in range(count)]


def random_channels(count: int, seed: int) -> list[PauliChannel]:
    rng = np.random.default_rng(seed)
    return [validate_channel(row) for row in rng.dirichlet(np.ones(4), size=count)]


def channels_from_spec(spec, seed: int = 0) -> list[PauliChannel]:
    """Expand one channel entry of a config into concrete channels.

    Accepted forms: ``{"pi": [p0, p1, p2, p3]}``,
    ``{"preset": {"name": ..., "strength": ...}}``,
    ``{"family": name, "start": s0, "stop": s1, "step": ds}`` and
    ``{"random": count}`` (uses the config seed).
    """
    if isinstance(spec, (list, tuple)):
        return [validate_channel(spec)]
    if not isinstance(spec, dict):
        raise ConfigError(f"cannot read channel entry {spec!r}")
    if "pi" in spec:
        return [validate_channel(spec["pi"])]
    if "preset" in spec:
        pre = spec["preset"]
        return [preset(pre["name"], pre["strength"])]
    if "family" in spec:
        return [preset(spec["family"], s)
                for s in _strengths(spec.get("start", 0.0), spec.get("stop", 1.0), spec["step"])]
    if "random" in spec:
        return random_channels(int(spec["random"]), int(spec.get("seed", seed)))
    raise ConfigError(f"cannot read channel entry {spec!r}")


def n_values_from_spec(spec) -> list[int]:
    if isinstance(spec, dict):
        return list(range(int(spec["start"]), int(spec["stop"]) + 1, int(spec.get("step", 1))))
    if isinstance(spec, int):
        return [spec]
    return [int(n) for n in spec]


def config_from_dict(doc: dict) -> SweepConfig:
    seed = int(doc.get("seed", 0))
    entries = list(doc.get("channels", []))
    if "pi" in doc:
        entries.append({"pi": doc["pi"]})
    if "preset" in doc:
        entries.append({"preset": doc["preset"]})
    chans = [ch for e in entries for ch in channels_from_spec(e, seed)]
    cfg = SweepConfig(
        channels=chans,
        n_values=n_values_from_spec(doc.get("n_values", [])),
        cuts=doc.get("cuts", "all"),
        oracle=bool(doc.get("oracle", False)),
        out=doc.get("out"),
        format=doc.get("format", "csv"),
        seed=seed,
        workers=int(doc.get("workers", 1)),
        n_max=int(doc.get("n_max", dense.N_MAX)),
    )
    return cfg


# -- row computation -------------------------------------------------------

def cuts_for(p, n: int, cuts) -> list[int]:
    top = n // 2
    if cuts == "all":
        return list(range(1, top + 1))
    if cuts == "min-only":
        k = criteria.min_entangled_k(p, n)
        return [top if k is None else k]
    return [int(k) for k in cuts if int(k) <= top]


def agreement(verdict: str, nppt: bool) -> bool:
    if verdict == criteria.Verdict.BOUNDARY.value:
        return True
    return (verdict == criteria.Verdict.YES.value) == nppt


def compute_unit(ch: PauliChannel, n: int, cuts, with_oracle: bool,
                 n_max: int = dense.N_MAX) -> list[SweepRow]:
    """All rows for one (channel, N) grid point."""
    p = derive_params(ch)
    report = criteria.max_distillable_M(p, n)
    f = criteria.asymptotic_threshold(p)
    state = dense.decohere_all(n, ch, n_max=n_max) if with_oracle else None
    rows = []
    for k in cuts_for(p, n, cuts):
        v = criteria.cut_verdict(p, CutSpec(n, k))
        row = SweepRow(
            *ch.probs, p.a, p.b, p.c, p.d, N=n, k=k,
            delta=float(v.delta), two_lambda=float(v.two_lambda),
            log_margin=v.margin, verdict=v.entangled.value, max_M=report.max_M,
            f_threshold=f, parity_class=report.parity_class,
        )
        if state is not None:
            pt = dense.oracle_cut_verdict(state, k)
            row.oracle_min_eig = pt.min_eigenvalue
            row.oracle_nppt = pt.nppt
            row.agreement = agreement(row.verdict, pt.nppt)
        rows.append(row)
    return rows


def _unit(args):
    return compute_unit(*args)


def iter_rows(cfg: SweepConfig):
    """Rows ordered by (channel index, N, k) whatever the worker count."""
    cfg.validate()
    units = [(ch, n, cfg.cuts, cfg.oracle, cfg.n_max)
             for ch in cfg.channels for n in sorted(cfg.n_values)]
    logger.info("sweep: %d grid points, %d workers", len(units), cfg.workers)
    if cfg.workers == 1:
        for u in units:
            yield from _unit(u)
        return
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        # map() yields in submission order
        for rows in pool.map(_unit, units, chunksize=max(1, len(units) // (4 * cfg.workers))):
            yield from rows


# -- serialisation ---------------------------------------------------------

def format_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)  # 'inf', '-inf', 'nan' for the special values
    return str(x)


def json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def row_dict(row: SweepRow) -> dict:
    return {k: json_value(v) for k, v in asdict(row).items()}


def write_csv(rows, stream) -> int:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    count = 0
    for row in rows:
        w.writerow([format_value(getattr(row, c)) for c in CSV_COLUMNS])
        count += 1
    return count


def write_json(rows, stream) -> int:
    data = [row_dict(r) for r in rows]
    json.dump({"columns": list(CSV_COLUMNS), "rows": data}, stream, indent=1, allow_nan=False)
    stream.write("\n")
    return len(data)


def run_sweep(cfg: SweepConfig, stream=None) -> int:
    """Write the sweep to ``cfg.out`` (or ``stream``); returns the row count."""
    writer = write_csv if cfg.format == "csv" else write_json
    rows = iter_rows(cfg)
    if stream is not None:
        return writer(rows, stream)
    if cfg.out is None:
        raise ConfigError("no output path")
    # buffer so a failure midway leaves no partial file
    buf = io.StringIO()
    n = writer(rows, buf)
    Path(cfg.out).write_text(buf.getvalue())
    return n


# -- oracle campaign -------------------------------------------------------

AGREE = "agree"
FORBIDDEN = "analytic-yes-oracle-no"
NECESSITY_GAP = "analytic-no-oracle-yes"
BOUNDARY = "boundary"


def classify(verdict: str, nppt: bool) -> str:
    if verdict == criteria.Verdict.BOUNDARY.value:
        return BOUNDARY
    yes = verdict == criteria.Verdict.YES.value
    if yes == nppt:
        return AGREE
    return FORBIDDEN if yes else NECESSITY_GAP


def run_verify(cfg: SweepConfig) -> dict:
    """Analytic vs oracle verdict on every grid point and cut."""
    if not cfg.oracle:
        cfg.oracle = True
    points = []
    counts = {AGREE: 0, FORBIDDEN: 0, NECESSITY_GAP: 0, BOUNDARY: 0}
    for row in iter_rows(cfg):
        cls = classify(row.verdict, row.oracle_nppt)
        counts[cls] += 1
        points.append({
            "pi": [row.pi0, row.pi1, row.pi2, row.pi3], "N": row.N, "k": row.k,
            "analytic": row.verdict, "log_margin": json_value(row.log_margin),
            "oracle_nppt": row.oracle_nppt, "oracle_min_eig": row.oracle_min_eig,
            "classification": cls,
        })
    return {"summary": {"points": len(points), **counts}, "points": points}


# -- thresholds ------------------------------------------------------------

def threshold_table(chans, n_values) -> list[dict]:
    table = []
    for ch in chans:
        p = derive_params(ch)
        f = criteria.asymptotic_threshold(p)
        m_inf = criteria.asymptotic_max_M(f)
        table.append({
            "pi": list(ch.probs),
            "a": p.a, "b": p.b, "c": p.c, "d": p.d,
            "f_threshold": json_value(f),
            "asymptotic_max_M": "unbounded" if m_inf is None else m_inf,
            "max_M": {str(n): criteria.max_distillable_M(p, n).max_M for n in n_values},
        })
    return table


def analyze(ch: PauliChannel, n: int) -> dict:
    p = derive_params(ch)
    report = criteria.max_distillable_M(p, n)
    asym = criteria.asymptotic_report(p)
    cuts = []
    for k in range(1, n // 2 + 1):
        v = criteria.cut_verdict(p, CutSpec(n, k))
        cuts.append({"k": k, "delta": float(v.delta), "two_lambda": float(v.two_lambda),
                     "log_margin": json_value(v.margin), "verdict": v.entangled.value})
    return {
        "channel": list(ch.probs),
        "params": {"a": p.a, "b": p.b, "c": p.c, "d": p.d},
        "N": n,
        "cuts": cuts,
        "report": asdict(report),
        "asymptotic": {k: json_value(v) for k, v in asdict(asym).items()},
    }


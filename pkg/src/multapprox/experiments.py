"""Seeded batches of random-alpha trials comparing exact counts with main terms.

Every trial draws its alpha raws from its own child of
``SeedSequence(plan.seed)``, so a trial's inputs depend only on the seed and
the trial index; the thread count changes nothing in the output.
"""
from __future__ import annotations

import configparser
import csv
import enum
import hashlib
import io
import json
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _blocks
from . import counting, predictors
from .bohr import fibre_exponent_limit
from .exponents import estimate_mult_exponent
from .fixedpoint import ZERO, Frac64
from .geometry import PRNG_ID
from .psi import ApproxFunction, HypothesisReport, Theorem, classify

log = logging.getLogger(__name__)

COLUMNS = ("trial", "N", "count", "predictor", "ratio", "alpha")


class PlanTheorem(enum.Enum):
    SCHMIDT = "schmidt"
    WANGYU = "wangyu"
    ABH = "abh"
    MAINTHM = "mainthm"
    FIBRETHM = "fibrethm"
    UNIFORM = "uniform"


_SETUP = {
    # theorem: (count mode, predictor kind, hypothesis set)
    PlanTheorem.SCHMIDT: (counting.Mode.SIMULTANEOUS, predictors.Kind.SCHMIDT_PSI_K, Theorem.SCHMIDT),
    PlanTheorem.WANGYU: (counting.Mode.MULTIPLICATIVE, predictors.Kind.WANGYU_PSI_TIMES, Theorem.WANGYU),
    PlanTheorem.ABH: (counting.Mode.COPRIME_PAIRS, predictors.Kind.ABH_PSI, Theorem.ABH),
    PlanTheorem.MAINTHM: (counting.Mode.MULTIPLICATIVE, predictors.Kind.LOG_PSI_TIMES, Theorem.MAINTHM),
    PlanTheorem.FIBRETHM: (counting.Mode.MULTIPLICATIVE, predictors.Kind.LOG_PSI_TIMES, Theorem.FIBRETHM),
    PlanTheorem.UNIFORM: (counting.Mode.MULTIPLICATIVE_UNIFORM, predictors.Kind.UNIFORM_TK, Theorem.WANGYU),
}


@dataclass(frozen=True)
class ExperimentPlan:
    theorem: PlanTheorem
    k: int
    psi: ApproxFunction
    checkpoints: tuple
    trials: int = 20
    seed: int = 0
    gamma: tuple | None = None
    fixed_fibre: tuple | None = None
    declared_w: float | None = None
    kappa: float | None = None

    def __post_init__(self):
        th = PlanTheorem(self.theorem)
        object.__setattr__(self, "theorem", th)
        cps = tuple(int(c) for c in self.checkpoints)
        object.__setattr__(self, "checkpoints", cps)
        if not cps or any(b <= a for a, b in zip(cps, cps[1:])) or cps[0] < 1:
            raise ValueError("checkpoints must be positive and strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if th is PlanTheorem.ABH and self.k != 1:
            raise ValueError("ABH plans have k = 1")
        if th in (PlanTheorem.WANGYU, PlanTheorem.MAINTHM, PlanTheorem.FIBRETHM,
                  PlanTheorem.UNIFORM) and self.k < 2:
            raise ValueError(f"{th.value} plans need k >= 2")
        gamma = tuple(self.gamma) if self.gamma is not None else (ZERO,) * self.k
        if len(gamma) != self.k:
            raise ValueError("gamma must have k coordinates")
        if th in (PlanTheorem.MAINTHM, PlanTheorem.FIBRETHM):
            gamma = gamma[:-1] + (ZERO,)
            if self.kappa is None or self.kappa <= 0:
                raise ValueError(f"{th.value} plans need kappa > 0")
        if th in (PlanTheorem.SCHMIDT, PlanTheorem.WANGYU) and any(g.raw for g in gamma):
            log.warning("%s is stated for gamma = 0; running inhomogeneous extension", th.value)
        object.__setattr__(self, "gamma", gamma)
        if th is PlanTheorem.FIBRETHM:
            fibre = tuple(self.fixed_fibre or ())
            if len(fibre) != self.k - 1:
                raise ValueError("fibre plans need k-1 fixed coordinates")
            if self.declared_w is None or self.declared_w >= fibre_exponent_limit(self.k):
                raise ValueError("fibre plans need a declared exponent w < (k-1)/(k-2)")
            object.__setattr__(self, "fixed_fibre", fibre)


@dataclass
class TrialRecord:
    trial: int
    alpha: tuple
    counts: list
    predictors: list
    ratios: list

    def rows(self, checkpoints):
        a = ";".join(x.hex() for x in self.alpha)
        for N, c, p, r in zip(checkpoints, self.counts, self.predictors, self.ratios):
            yield {"trial": self.trial, "N": N, "count": c, "predictor": p,
                   "ratio": r, "alpha": a}


@dataclass
class PlanResult:
    plan: ExperimentPlan
    records: list
    summary: dict
    hypotheses: HypothesisReport
    flags: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def ratios_at(self, N: int) -> list:
        i = self.plan.checkpoints.index(N)
        return [r.ratios[i] for r in self.records]


def build_id() -> str:
    """SHA-1 over the package sources, a stand-in for a git revision."""
    h = hashlib.sha1()
    for path in sorted(Path(__file__).parent.glob("*.py")):
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return h.hexdigest()[:12]


def sample_alpha(seed: int, trials: int, m: int) -> list[tuple]:
    """Uniform raws for each trial, from spawned child seed sequences."""
    out = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.Generator(np.random.PCG64(child))
        raws = rng.integers(0, 2 ** 64, size=m, dtype=np.uint64, endpoint=False)
        out.append(tuple(Frac64(int(r)) for r in raws))
    return out


def summarize(ratios: list) -> dict:
    vals = sorted(r for r in ratios if r is not None)
    if not vals:
        return {"n": 0, "median": None, "q25": None, "q75": None, "iqr": None, "min": None}
    q = np.quantile(vals, [0.25, 0.75]) if len(vals) > 1 else [vals[0], vals[0]]
    return {"n": len(vals), "median": statistics.median(vals), "q25": float(q[0]),
            "q75": float(q[1]), "iqr": float(q[1] - q[0]), "min": vals[0]}


def run_plan(plan: ExperimentPlan, threads: int | None = None,
             probe_n: int = 10**5) -> PlanResult:
    """Run every trial of ``plan`` and compare counts with the matched main term."""
    mode, kind, hyp = _SETUP[plan.theorem]
    threads = _blocks.default_threads() if threads is None else threads
    report = classify(plan.psi, hyp, k=plan.k, kappa=plan.kappa,
                      probe_n=probe_n, scan_n=min(probe_n, plan.checkpoints[-1]))
    flags = set()
    if not report.ok:
        flags.add("hypothesis_violation")
        log.warning("%s hypotheses fail for %s: %s", hyp.value, plan.psi.spec(),
                    ", ".join(report.violations))

    pred = predictors.series(kind, plan.checkpoints, plan.k, plan.psi, threads=threads)
    flags |= set(pred.flags)
    pvals = [pred.partial_sums[N] for N in plan.checkpoints]
    if any(p <= 0 for p in pvals):
        flags.add("predictor_nonpositive")

    fibre = plan.fixed_fibre or ()
    draws = sample_alpha(plan.seed, plan.trials, plan.k - len(fibre))

    def trial(i):
        alpha = tuple(fibre) + draws[i]
        q = counting.CountQuery(alpha, plan.checkpoints[-1], plan.psi, mode, plan.gamma)
        counts = counting.count_at(q, plan.checkpoints, threads=1)
        ratios = [c / p if p > 0 else None for c, p in zip(counts, pvals)]
        return TrialRecord(i, alpha, counts, pvals, ratios)

    if threads > 1 and plan.trials > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(trial, range(plan.trials)))
    else:
        records = [trial(i) for i in range(plan.trials)]

    summary = {N: summarize([r.ratios[j] for r in records])
               for j, N in enumerate(plan.checkpoints)}
    meta = {
        "version": __version__,
        "build": build_id(),
        "prng": PRNG_ID,
        "seed": plan.seed,
        "theorem": plan.theorem.value,
        "k": plan.k,
        "psi": plan.psi.spec(),
        "predictor": kind.value,
        "mode": mode.value,
        "checkpoints": list(plan.checkpoints),
        "trials": plan.trials,
        "gamma": [g.hex() for g in plan.gamma],
        "hypotheses": report.checks,
    }
    if plan.kappa is not None:
        meta["kappa"] = plan.kappa
    if fibre:
        meta["fibre"] = [a.hex() for a in fibre]
        meta["declared_w"] = plan.declared_w
        top = min(plan.checkpoints[-1], 10**6)
        if top > 100:
            meta["fibre_exponent_estimate"] = estimate_mult_exponent(fibre, top)
    meta["flags"] = sorted(flags)
    return PlanResult(plan, records, summary, report, sorted(flags), meta)


# tabular output --------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def ratio_table(result: PlanResult, out=None, fmt: str = "csv") -> str:
    """Long-form rows (trial, N, count, predictor, ratio, alpha) as CSV or JSON lines.

    Floats are written with ``repr`` so they parse back bit-exactly. CSV files
    start with ``# key: value`` metadata lines. ``out`` may be a path, a text
    stream, or None (string only).
    """
    rows = [row for rec in result.records for row in rec.rows(result.plan.checkpoints)]
    if not rows:
        raise ValueError("no records to write")
    buf = io.StringIO()
    if fmt == "csv":
        for key, val in result.metadata.items():
            buf.write(f"# {key}: {json.dumps(val, sort_keys=True)}\n")
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n",
                           quoting=csv.QUOTE_MINIMAL)
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(v) for k, v in row.items()})
    elif fmt == "json":
        buf.write(json.dumps({"meta": result.metadata}, sort_keys=True) + "\n")
        for row in rows:
            buf.write(json.dumps(row) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    text = buf.getvalue()
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            Path(out).write_text(text)
    return text


def read_table(path, fmt: str | None = None) -> tuple[dict, list]:
    """Parse a file written by :func:`ratio_table` back into (metadata, rows)."""
    return parse_table(Path(path).read_text(), fmt)


def parse_table(text: str, fmt: str | None = None) -> tuple[dict, list]:
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    meta, rows = {}, []
    if fmt == "json":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        meta = json.loads(lines[0])["meta"]
        rows = [json.loads(ln) for ln in lines[1:]]
        return meta, rows
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition(": ")
            meta[key] = json.loads(val)
        else:
            body.append(line)
    for r in csv.DictReader(body):
        rows.append({"trial": int(r["trial"]), "N": int(r["N"]), "count": int(r["count"]),
                     "predictor": float(r["predictor"]),
                     "ratio": float(r["ratio"]) if r["ratio"] else None,
                     "alpha": r["alpha"]})
    return meta, rows


# configuration --------------------------------------------------------------

def load_config(path, section: str) -> dict:
    """Flat key = value pairs from ``[section]`` (and ``[DEFAULT]``) of an INI file.

    Keys use the CLI flag spelling without dashes (``N``, ``psi``, ``trials``...).
    """
    cp = configparser.ConfigParser()
    cp.optionxform = str
    if not cp.read(path):
        raise FileNotFoundError(path)
    if cp.has_section(section):
        return dict(cp.items(section))
    return dict(cp.defaults())

"""Run records, comparison metrics and the campaign runner."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from .errors import InvalidBaseline
from .gacspt import GaConfig, run_gacspt
from .lsea import LowerConfig, run_nlsea
from .mfea import run_mlsea

ALGORITHMS = ("gacspt", "nlsea", "mlsea")


def rpd(solution, best):
    """Relative percentage difference of a solution versus a baseline."""
    if best <= 0:
        raise InvalidBaseline(f"baseline must be positive, got {best}")
    return (solution - best) / best * 100.0


def pi_gap(cost_a, cost_b):
    """Percentage improvement of algorithm A over B (positive when A wins)."""
    if cost_b <= 0:
        raise InvalidBaseline(f"baseline must be positive, got {cost_b}")
    return (cost_b - cost_a) / cost_b * 100.0


def normalize_trace(trace):
    """Map a best-cost trace onto [1, 0]: (f_i - f_n) / (f_1 - f_n).

    Constant traces map to all-zeros (a solver that never improves
    contributes a flat converged curve).
    """
    if len(trace) < 2:
        raise ValueError("trace needs at least two entries")
    f1, fn = trace[0], trace[-1]
    span = f1 - fn
    if span == 0:
        return [0.0] * len(trace)
    return [(f - fn) / span for f in trace]


def average_normalized_traces(traces):
    """Pointwise mean of normalized traces, padded by holding the last value."""
    norm = [normalize_trace(t) for t in traces if len(t) >= 2]
    if not norm:
        return []
    length = max(len(t) for t in norm)
    out = []
    for i in range(length):
        out.append(sum(t[i] if i < len(t) else t[-1] for t in norm) / len(norm))
    return out


@dataclass
class RunRecord:
    instance: str
    algo: str
    seed: int
    best_cost: float
    minutes: float
    evals: int
    trace: list

    def to_json(self):
        return json.dumps({
            "instance": self.instance,
            "algo": self.algo,
            "seed": self.seed,
            "best_cost": self.best_cost,
            "minutes": self.minutes,
            "evals": self.evals,
            "trace": ";".join(repr(x) for x in self.trace),
        }, sort_keys=True)

    @classmethod
    def from_json(cls, line):
        d = json.loads(line)
        trace = [float(x) for x in d["trace"].split(";")] if d["trace"] else []
        return cls(d["instance"], d["algo"], d["seed"], d["best_cost"],
                   d["minutes"], d["evals"], trace)


@dataclass
class CampaignSummary:
    """Per (instance, algorithm) aggregates matching the report columns."""

    rows: list = field(default_factory=list)  # dicts: instance, algo, BF, Avg, CV, Rm

    def to_csv(self):
        lines = ["instance,algo,BF,Avg,CV,Rm"]
        for r in self.rows:
            lines.append("{instance},{algo},{BF!r},{Avg!r},{CV!r},{Rm!r}".format(**r))
        return "\n".join(lines) + "\n"


def run_single(inst, algo, seed, ga_cfg=None, lower_cfg=None):
    """One seeded run of one algorithm; wall time is rounded to two decimal
    minutes so short runs stay byte-reproducible."""
    t0 = time.perf_counter()
    if algo == "gacspt":
        cfg = ga_cfg or GaConfig()
        cfg = GaConfig(**{**cfg.__dict__, "seed": seed})
        sol, trace = run_gacspt(inst, cfg)
    elif algo in ("nlsea", "mlsea"):
        cfg = lower_cfg or LowerConfig()
        cfg = LowerConfig(**{**cfg.__dict__, "seed": seed})
        rng = random.Random(seed)
        runner = run_nlsea if algo == "nlsea" else run_mlsea
        sol, trace = runner(inst, cfg, rng)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    minutes = round((time.perf_counter() - t0) / 60.0, 2)
    return sol, RunRecord(
        instance=inst.name, algo=algo, seed=seed, best_cost=sol.cost,
        minutes=minutes, evals=trace.evaluations, trace=list(trace.best_costs))


def summarize(records):
    """Aggregate stored records into BF/Avg/CV/Rm rows."""
    groups = {}
    for rec in sorted(records, key=lambda r: (r.instance, r.algo, r.seed)):
        groups.setdefault((rec.instance, rec.algo), []).append(rec)
    summary = CampaignSummary()
    for (instance, algo), recs in sorted(groups.items()):
        costs = [r.best_cost for r in recs]
        avg = sum(costs) / len(costs)
        var = sum((c - avg) ** 2 for c in costs) / len(costs)
        cv = (var ** 0.5) / avg if avg else 0.0
        rm = sum(r.minutes for r in recs) / len(recs)
        summary.rows.append({
            "instance": instance, "algo": algo,
            "BF": min(costs), "Avg": avg, "CV": cv, "Rm": round(rm, 2),
        })
    return summary


def run_campaign(instances, algorithms, runs_per=30, base_seed=0,
                 ga_cfg=None, lower_cfg=None, on_error=None):
    """runs_per seeded runs per (instance, algorithm); per-run failures are
    recorded via on_error and the campaign continues."""
    records = []
    for inst in instances:
        for algo in algorithms:
            for i in range(runs_per):
                seed = base_seed + i
                try:
                    _sol, rec = run_single(inst, algo, seed, ga_cfg, lower_cfg)
                    records.append(rec)
                except Exception as exc:  # noqa: BLE001 - campaign must survive
                    if on_error is not None:
                        on_error(inst.name, algo, seed, exc)
    records.sort(key=lambda r: (r.instance, r.algo, r.seed))
    return summarize(records), records


def write_records(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def read_records(path):
    with open(path, encoding="utf-8") as fh:
        return [RunRecord.from_json(line) for line in fh if line.strip()]

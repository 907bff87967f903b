"""Benchmark harness: seeded instance sweeps, CSV records and per-cell summaries."""

from __future__ import annotations

import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Iterable, Iterator, Optional

from .controllability import ModificationResult, cost
from .errors import ParameterError
from .greedy import greedy_modify
from .mcmc import McmcParams, mcmc_modify
from .oracle import InstanceSpec, brute_force_optimal, erdos_renyi_instance, worst_case_instance
from .seeding import derive_seed

SCHEMA = "sscmod-bench/1"
ALGOS = ("greedy", "mcmc", "brute")


@dataclass(frozen=True)
class BenchConfig:
    family: str = "er"                  # er | worstcase
    algos: tuple = ("greedy", "mcmc")
    n_values: tuple = (5, 10, 15)
    m_values: tuple = (5,)              # 0 stands for m = n
    p_star: tuple = (0.1, 0.45, 0.8)
    p_any: float = 0.1
    trials: int = 100
    seed: int = 0
    mcmc: McmcParams = field(default_factory=McmcParams)
    time_limit: Optional[float] = None  # seconds per algorithm run
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.family not in ("er", "worstcase"):
            raise ParameterError(f"unknown family {self.family!r}")
        bad = set(self.algos) - set(ALGOS)
        if bad:
            raise ParameterError(f"unknown algorithms {sorted(bad)}")

    def cells(self) -> list[tuple[int, int, float]]:
        if self.family == "worstcase":
            return [(n, n, 0.0) for n in self.n_values]
        return [(n, m or n, p) for n in self.n_values for m in self.m_values for p in self.p_star]


@dataclass(frozen=True)
class BenchRecord:
    algo: str
    n: int
    m: int
    p_star: float
    p_any: float
    trial: int
    seed: int
    status: str          # ok | infeasible | timeout
    cost: int
    dist: int
    white_total: int
    controllable: bool
    runtime_ms: int = 0


CSV_FIELDS = [f.name for f in fields(BenchRecord)]


def trial_seed(master: int, n: int, m: int, p_star: float, trial: int) -> int:
    return derive_seed(master, n, m, round(p_star * 1_000_000), trial)


def build_instance(family: str, n: int, m: int, p_star: float, p_any: float, seed: int):
    if family == "worstcase":
        return worst_case_instance(n)
    return erdos_renyi_instance(InstanceSpec(n=n, m=m, p_star=p_star, p_any=p_any, seed=seed))


def run_algorithm(algo: str, sys, seed: int, mcmc: McmcParams,
                  time_limit: Optional[float] = None):
    if algo == "greedy":
        return greedy_modify(sys, mcmc.epsilon, time_limit=time_limit)
    if algo == "mcmc":
        result, _ = mcmc_modify(sys, replace(mcmc, seed=seed), time_limit=time_limit)
        return result
    if algo == "brute":
        oracle = brute_force_optimal(sys, mcmc.epsilon)
        b = oracle.witnesses[0]
        bd = cost(sys, b, mcmc.epsilon)
        return ModificationResult("brute", b, bd, "ok" if bd.controllable else "infeasible")
    raise ParameterError(f"unknown algorithm {algo!r}")


def _run_unit(args) -> list[BenchRecord]:
    config, n, m, p, trial = args
    p_any = 0.0 if config.family == "worstcase" else config.p_any
    seed = trial_seed(config.seed, n, m, p, trial)
    sys = build_instance(config.family, n, m, p, p_any, seed)
    out = []
    for algo in config.algos:
        start = time.monotonic()
        res = run_algorithm(algo, sys, seed, config.mcmc, config.time_limit)
        elapsed = int(round((time.monotonic() - start) * 1000))
        bd = res.breakdown
        out.append(BenchRecord(algo=algo, n=n, m=m, p_star=p, p_any=p_any, trial=trial, seed=seed,
                               status=res.status, cost=bd.total, dist=bd.distance,
                               white_total=bd.white_total, controllable=bd.controllable,
                               runtime_ms=elapsed))
    return out


def run_bench(config: BenchConfig) -> Iterator[BenchRecord]:
    """Yield records in (cell, trial, algorithm) order, independent of ``workers``."""
    units = [(config, n, m, p, t) for n, m, p in config.cells() for t in range(config.trials)]
    if config.workers <= 1:
        for unit in units:
            yield from _run_unit(unit)
        return
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        for batch in pool.map(_run_unit, units, chunksize=1):
            yield from batch


# CSV

def format_record(rec: BenchRecord, include_runtime: bool = False) -> str:
    vals = [rec.algo, str(rec.n), str(rec.m), repr(float(rec.p_star)), repr(float(rec.p_any)), str(rec.trial),
            str(rec.seed), rec.status, str(rec.cost), str(rec.dist), str(rec.white_total),
            str(int(rec.controllable))]
    if include_runtime:
        vals.append(str(rec.runtime_ms))
    return ",".join(vals)


def csv_header(include_runtime: bool = False) -> str:
    return ",".join(CSV_FIELDS if include_runtime else CSV_FIELDS[:-1])


def write_csv(records: Iterable[BenchRecord], fh, include_runtime: bool = False) -> int:
    fh.write(f"# schema={SCHEMA}\n")
    fh.write(csv_header(include_runtime) + "\n")
    count = 0
    for rec in records:
        fh.write(format_record(rec, include_runtime) + "\n")
        fh.flush()
        count += 1
    return count


def parse_record(line: str, header: list[str]) -> BenchRecord:
    raw = dict(zip(header, line.rstrip("\n").split(",")))
    return BenchRecord(algo=raw["algo"], n=int(raw["n"]), m=int(raw["m"]),
                       p_star=float(raw["p_star"]), p_any=float(raw["p_any"]),
                       trial=int(raw["trial"]), seed=int(raw["seed"]), status=raw["status"],
                       cost=int(raw["cost"]), dist=int(raw["dist"]),
                       white_total=int(raw["white_total"]),
                       controllable=raw["controllable"] == "1",
                       runtime_ms=int(raw.get("runtime_ms", 0) or 0))


def read_csv(fh) -> list[BenchRecord]:
    header = None
    out = []
    for line in fh:
        if line.startswith("#") or not line.strip():
            continue
        if header is None:
            header = line.rstrip("\n").split(",")
            continue
        out.append(parse_record(line, header))
    return out


# summaries

@dataclass(frozen=True)
class SummaryRow:
    algo: str
    n: int
    m: int
    p_star: float
    runs: int
    solved: int
    mean_cost: Optional[float]
    min_cost: Optional[int]
    max_cost: Optional[int]
    infeasible: int
    timeout: int


def summarize(records: Iterable[BenchRecord]) -> list[SummaryRow]:
    """Mean/min/max cost over controllable runs, per (algo, n, m, p_star)."""
    groups: dict = {}
    for r in records:
        groups.setdefault((r.algo, r.n, r.m, r.p_star), []).append(r)
    if not groups:
        raise ParameterError("cannot summarize an empty record set")
    rows = []
    for (algo, n, m, p), recs in groups.items():
        ok = [r.cost for r in recs if r.controllable]
        rows.append(SummaryRow(
            algo=algo, n=n, m=m, p_star=p, runs=len(recs), solved=len(ok),
            mean_cost=statistics.fmean(ok) if ok else None,
            min_cost=min(ok) if ok else None, max_cost=max(ok) if ok else None,
            infeasible=sum(r.status == "infeasible" for r in recs),
            timeout=sum(r.status == "timeout" for r in recs)))
    return rows


def paired_gap(records: Iterable[BenchRecord], first: str = "greedy", second: str = "mcmc"):
    """Per (n, m, p_star): mean |cost_first - cost_second| over trials where both succeed.

    Returns ``{cell: (mean_gap, paired_trials, trials_seen)}``.
    """
    by_trial: dict = {}
    for r in records:
        by_trial.setdefault((r.n, r.m, r.p_star, r.trial), {})[r.algo] = r
    cells: dict = {}
    for (n, m, p, _), algos in by_trial.items():
        seen = cells.setdefault((n, m, p), [[], 0])
        seen[1] += 1
        a, b = algos.get(first), algos.get(second)
        if a and b and a.controllable and b.controllable:
            seen[0].append(abs(a.cost - b.cost))
    return {cell: (statistics.fmean(g) if g else None, len(g), total)
            for cell, (g, total) in cells.items()}


def _fmt_means(values) -> str:
    return "[" + ", ".join("-" if v is None else f"{v:.2f}" for v in values) + "]"


def trend_report(records, algos=("greedy", "mcmc"), max_gap: float = 1.0) -> tuple[bool, str]:
    """Check that mean cost rises with n and with p_star, and that the paired gap stays small.

    A cell with no controllable run counts as a failed check.
    """
    means = {(r.algo, r.n, r.m, r.p_star): r.mean_cost for r in summarize(records)}
    lines, ok = [], True
    for algo in algos:
        keys = sorted(k for k in means if k[0] == algo)
        ns = sorted({k[1] for k in keys})
        ps = sorted({k[3] for k in keys})
        for p in ps:
            for n_lo, n_hi in zip(ns, ns[1:]):
                lo = [means[k] for k in keys if k[1] == n_lo and k[3] == p]
                hi = [means[k] for k in keys if k[1] == n_hi and k[3] == p]
                good = None not in lo + hi and min(hi) > max(lo)
                ok &= good
                lines.append(f"{algo} p_star={p:g}: n {n_lo}->{n_hi} "
                             f"{_fmt_means(lo)} -> {_fmt_means(hi)} {'up' if good else 'NOT up'}")
        for n, m in sorted({(k[1], k[2]) for k in keys}):
            seq = [means.get((algo, n, m, p)) for p in ps]
            good = None not in seq and all(a < b for a, b in zip(seq, seq[1:]))
            ok &= good
            lines.append(f"{algo} n={n} m={m}: over p_star {_fmt_means(seq)} "
                         f"{'up' if good else 'NOT up'}")
    worst = 0.0
    for (n, m, p), (gap, paired, total) in sorted(paired_gap(records).items()):
        shown = "-" if gap is None else f"{gap:.3f}"
        lines.append(f"gap n={n} m={m} p_star={p:g}: {shown} ({paired}/{total} paired)")
        if gap is None:
            ok = False
        else:
            ok &= gap <= max_gap
            worst = max(worst, gap)
    lines.append(f"largest paired gap {worst:.3f}; checks {'hold' if ok else 'FAIL'}")
    return ok, "\n".join(lines)


def format_summary(rows: list[SummaryRow]) -> str:
    lines = [f"{'algo':<7} {'n':>3} {'m':>3} {'p_star':>6} {'runs':>5} {'ok':>4} "
             f"{'mean':>9} {'min':>6} {'max':>6} {'infeas':>6} {'tmout':>5}"]
    for r in rows:
        mean = f"{r.mean_cost:.3f}" if r.mean_cost is not None else "-"
        lo = str(r.min_cost) if r.min_cost is not None else "-"
        hi = str(r.max_cost) if r.max_cost is not None else "-"
        lines.append(f"{r.algo:<7} {r.n:>3} {r.m:>3} {r.p_star:>6g} {r.runs:>5} {r.solved:>4} "
                     f"{mean:>9} {lo:>6} {hi:>6} {r.infeasible:>6} {r.timeout:>5}")
    return "\n".join(lines)

"""Command line front end: gen, check, modify, bound, bench.

Exit codes: 0 on success, 1 when ``modify`` ends without a controllable
input pattern, 2 on usage or input parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import BenchConfig, format_summary, paired_gap, run_bench, summarize, write_csv
from .controllability import cost, feasibility_report, is_ssc
from .errors import CapacityError, ParameterError, SscError
from .greedy import greedy_modify
from .mcmc import McmcParams, mcmc_modify, t_stop_bound, write_trace_csv
from .oracle import (
    InstanceSpec,
    brute_force_optimal,
    erdos_renyi_instance,
    feasible_set_size,
    worst_case_instance,
)
from .pattern import format_pattern, format_system, one_based, parse_pattern, parse_system


def _fmt_set(s) -> str:
    return "{" + ", ".join(map(str, one_based(s))) + "}"


def _csv_set(s) -> str:
    return ",".join(map(str, one_based(s)))


def _read_system(path):
    return parse_system(Path(path).read_text())


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> tuple:
    return tuple(int(tok) for tok in text.split(",") if tok)


def _m_list(text: str) -> tuple:
    return tuple(0 if tok == "n" else int(tok) for tok in text.split(",") if tok)


def _float_list(text: str) -> tuple:
    return tuple(float(tok) for tok in text.split(",") if tok)


def cmd_gen(args) -> int:
    if args.type == "worstcase":
        system = worst_case_instance(args.n)
    else:
        spec = InstanceSpec(n=args.n, m=args.m if args.m is not None else args.n,
                            p_star=args.p_star, p_any=args.p_any, seed=args.seed)
        system = erdos_renyi_instance(spec)
    _emit(format_system(system), args.out)
    return 0


def _feasibility_lines(system, record: dict) -> list[str]:
    try:
        rep = feasibility_report(system)
    except CapacityError as exc:
        record["feasibility"] = "skipped"
        return [f"feasibility:        skipped ({exc})"]
    lines = [
        f"Z(A):               {rep.z_a}",
        f"Z(Q(A)):            {rep.z_qa}",
        f"necessary m:        {rep.necessary_m} ({'met' if rep.necessary_holds else 'NOT met'} by m={rep.m})",
        f"sufficient m:       {rep.sufficient_m} ({'met' if rep.sufficient_holds else 'not met'} by m={rep.m})",
        f"common ZF witness:  {one_based(rep.witness)}",
        f"optimal cost range: [{rep.cost_lower}, {rep.cost_upper}]",
    ]
    if not rep.sufficient_holds:
        lines.append("                    (upper bound presumes m >= sufficient m)")
    record.update(z_a=rep.z_a, z_qa=rep.z_qa, necessary_m=rep.necessary_m,
                  sufficient_m=rep.sufficient_m, witness=_csv_set(rep.witness),
                  cost_lower=rep.cost_lower, cost_upper=rep.cost_upper)
    return lines


def cmd_check(args) -> int:
    system = _read_system(args.system)
    b = parse_pattern(Path(args.b).read_text()) if args.b else system.b_bar
    verdict = is_ssc(system, b)
    record = {"n": system.n, "m": system.m, "ssc": int(verdict.controllable),
              "white_first": _csv_set(verdict.white_first),
              "white_second": _csv_set(verdict.white_second)}
    lines = [
        f"verdict:            {'strongly structurally controllable' if verdict.controllable else 'not strongly structurally controllable'}",
        f"white [A B]:        {_fmt_set(verdict.white_first)}",
        f"white [Q(A) B]:     {_fmt_set(verdict.white_second)}",
    ]
    lines += _feasibility_lines(system, record)
    print("\n".join(lines))
    if args.record:
        print(" ".join(f"{k}={v}" for k, v in record.items()))
    return 0


def _mcmc_params(args, seed=None) -> McmcParams:
    return McmcParams(r_max=args.rmax, t_start=args.tstart, t_stop=args.tstop, alpha=args.alpha,
                      seed=args.seed if seed is None else seed, epsilon=args.epsilon)


def cmd_modify(args) -> int:
    system = _read_system(args.system)
    if args.algo == "greedy":
        res = greedy_modify(system, args.epsilon)
        print(f"{'iter':>4} {'i*':>4} {'j*':>4} {'dist':>5} {'white':>5} {'cost':>8}")
        for it, i, j, dist, whites, c in res.history:
            print(f"{it:>4} {i + 1:>4} {j + 1:>4} {dist:>5} {whites:>5} {c:>8}")
        b = res.b
    elif args.algo == "mcmc":
        res, trace = mcmc_modify(system, _mcmc_params(args), record_trace=bool(args.trace))
        if args.trace:
            write_trace_csv(trace, args.trace)
        print(f"levels: {trace.levels_run}  proposals: {trace.levels_run * args.rmax}")
        print(f"final state cost: {trace.final_cost}")
        b = res.b
    else:
        oracle = brute_force_optimal(system, args.epsilon)
        print(f"|B| (feasible patterns): {oracle.feasible_count}")
        print(f"B* (optimal patterns):   {oracle.optimizer_count}")
        print(f"c* (optimal cost):       {oracle.optimal_cost}")
        b = oracle.witnesses[0]
    bd = cost(system, b, args.epsilon)
    print(f"distance: {bd.distance}  white total: {bd.white_total}  epsilon: {bd.epsilon}  cost: {bd.total}")
    print(f"status: {'controllable' if bd.controllable else 'infeasible'}")
    text = format_pattern(b)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if bd.controllable else 1


def cmd_bound(args) -> int:
    system = _read_system(args.system)
    record = {}
    print("\n".join(_feasibility_lines(system, record)))
    size = feasible_set_size(system.b_bar)
    optimal = 1
    if args.exact:
        optimal = brute_force_optimal(system).optimizer_count
    print(f"|B| (feasible patterns): {size}")
    print(f"B* used in bound:        {optimal}{'' if args.exact else ' (lower bound)'}")
    try:
        bound = t_stop_bound(args.delta, size, optimal)
        print(f"T_stop bound (delta={args.delta!r}): {bound!r}")
    except ParameterError as exc:
        print(f"T_stop bound: undefined ({exc})")
    return 0


def cmd_bench(args) -> int:
    config = BenchConfig(
        family=args.family, algos=tuple(args.algos.split(",")), n_values=_int_list(args.n),
        m_values=_m_list(args.m), p_star=_float_list(args.p_star), p_any=args.p_any,
        trials=args.trials, seed=args.seed, mcmc=_mcmc_params(args, seed=0),
        time_limit=args.time_limit, workers=args.workers)
    records = []

    def collect():
        for rec in run_bench(config):
            records.append(rec)
            yield rec

    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            write_csv(collect(), fh, include_runtime=args.timing)
    else:
        write_csv(collect(), sys.stdout, include_runtime=args.timing)
    if args.summary:
        text = format_summary(summarize(records))
        gaps = paired_gap(records)
        if "greedy" in config.algos and "mcmc" in config.algos:
            text += "\n\nmean |greedy - mcmc| over trials where both succeed\n"
            text += "\n".join(f"n={n} m={m} p_star={p:g}: "
                              + (f"{g:.3f}" if g is not None else "-") + f" ({k}/{t} paired)"
                              for (n, m, p), (g, k, t) in gaps.items())
        Path(args.summary).write_text(text + "\n")
    return 0


def _add_mcmc_flags(p):
    d = McmcParams()
    p.add_argument("--rmax", type=int, default=d.r_max, help="proposals per temperature")
    p.add_argument("--tstart", type=float, default=d.t_start)
    p.add_argument("--tstop", type=float, default=d.t_stop)
    p.add_argument("--alpha", type=float, default=d.alpha, help="cooling factor in (0, 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sscmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a structured system file")
    g.add_argument("--type", choices=["er", "worstcase"], default="er")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--p-star", type=float, default=0.45)
    g.add_argument("--p-any", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="test strong structural controllability")
    c.add_argument("system")
    c.add_argument("--b", help="input pattern file to test instead of the system's own")
    c.add_argument("--record", action="store_true", help="also print a key=value line")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("modify", help="modify the input pattern")
    m.add_argument("system")
    m.add_argument("--algo", choices=["greedy", "mcmc", "brute"], default="greedy")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--epsilon", type=int)
    m.add_argument("--out", help="write the resulting input pattern here")
    m.add_argument("--trace", help="CSV file for the per-proposal MCMC trace")
    _add_mcmc_flags(m)
    m.set_defaults(func=cmd_modify)

    b = sub.add_parser("bound", help="feasibility bounds and the annealing temperature bound")
    b.add_argument("system")
    b.add_argument("--delta", type=float, default=0.1)
    b.add_argument("--exact", action="store_true", help="count optimal patterns exhaustively")
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_bound)

    h = sub.add_parser("bench", help="run a seeded benchmark sweep")
    h.add_argument("--family", choices=["er", "worstcase"], default="er")
    h.add_argument("--algos", default="greedy,mcmc")
    h.add_argument("--n", default="5,10,15")
    h.add_argument("--m", default="5", help="comma list; 'n' means m = n")
    h.add_argument("--p-star", default="0.1,0.45,0.8")
    h.add_argument("--p-any", type=float, default=0.1)
    h.add_argument("--trials", type=int, default=100)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--epsilon", type=int)
    h.add_argument("--time-limit", type=float, help="seconds per algorithm run")
    h.add_argument("--workers", type=int, default=1)
    h.add_argument("--timing", action="store_true", help="add a runtime_ms column")
    h.add_argument("--out")
    h.add_argument("--summary", help="write a per-cell summary table here")
    _add_mcmc_flags(h)
    h.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SscError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

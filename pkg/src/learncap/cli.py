"""Command-line front end: table and figure datasets, capacity search and the check suites.

Exit codes: 0 success, 1 a check suite failed, 2 bad arguments, 3 a
computation exceeded its enumeration or grid budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import checks
from .capacity import (
    bernoulli_affinity_closed,
    capacity_search,
    lazy_affinity,
    machine_affinity,
    majority_affinity_closed,
    sqrt_law_bound,
)
from .errors import BudgetExceededError
from .machines import (
    make_constant_machine,
    make_empirical_average_machine,
    make_lazy_learner,
    make_majority_machine,
    make_randomized_label_machine,
)
from .montecarlo import DEFAULT_M_VALUES, McConfig, simulate_majority, simulate_randomized_classifier
from .pmf import Pmf, lemma1_product, tv_distance

EXIT_OK, EXIT_SUITE_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

MACHINES = {
    "average": lambda n: make_empirical_average_machine(),
    "majority": lambda n: make_majority_machine(),
    "randomized": make_randomized_label_machine,
    "lazy": make_lazy_learner,
    "constant": make_constant_machine,
}


class Table:
    """Named columns of equal length, in output order."""

    def __init__(self, columns: list[str]):
        self.columns = columns
        self.rows: list[list] = []

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row length does not match columns")
        self.rows.append(list(values))


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.10g" % v
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float("%.10g" % v)
    return str(v)


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        data = {c: [_json_value(r[i]) for r in table.rows] for i, c in enumerate(table.columns)}
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _m_values(args, default):
    return tuple(args.m) if args.m else tuple(default)


def _mc_config(args, parser) -> McConfig:
    try:
        return McConfig(_m_values(args, DEFAULT_M_VALUES), args.trials, args.seed)
    except ValueError as exc:
        parser.error(str(exc))


def cmd_table1(args, parser) -> Table:
    res = simulate_majority(_mc_config(args, parser))
    t = Table(["m", "R_emp_mc", "stderr", "capacity_exact"])
    for r in res.records:
        t.add(r.m, r.empirical_risk_mean, r.standard_error, r.capacity)
    return t


def cmd_table2(args, parser) -> Table:
    res = simulate_randomized_classifier(_mc_config(args, parser))
    t = Table(["m", "R_emp_mc", "stderr", "bound_det", "bound_rand", "true_risk"])
    for r in res.records:
        t.add(r.m, r.empirical_risk_mean, r.standard_error, r.bound_det, r.bound_rand, 0.5)
    return t


def cmd_fig1(args, parser) -> Table:
    n = args.grid if args.grid is not None else 101
    if n < 2:
        parser.error("--grid needs at least 2 points for fig1")
    half = Pmf.bernoulli(0.5)
    t = Table(["s", "tv_exact", "approx_T1", "approx_T2", "approx_T3"])
    for s in np.linspace(0.0, 1.0, n):
        p = Pmf.bernoulli(float(s))
        approx = [lemma1_product(p, half, max_steps=k)[0] for k in (1, 2, 3)]
        t.add(float(s), tv_distance(p, half), *approx)
    return t


def cmd_fig3(args, parser) -> Table:
    phis = args.phi if args.phi else list(np.linspace(0.0, 1.0, args.grid if args.grid is not None else 201))
    t = Table(["m", "phi", "affinity_avg_machine", "affinity_majority"])
    for m in _m_values(args, (11, 51)):
        majority = make_majority_machine(m)
        for phi in phis:
            phi = float(phi)
            if m % 2:
                maj = majority_affinity_closed(phi, m)
            else:
                maj = machine_affinity(majority, Pmf.bernoulli(phi))
            t.add(m, phi, bernoulli_affinity_closed(phi, m), maj)
    return t


def cmd_capacity(args, parser) -> Table:
    n = args.alphabet if args.alphabet is not None else 2
    machine = MACHINES[args.machine](n)
    resolution = 1.0 / args.grid if args.grid is not None else None
    t = Table(["machine", "m", "grid_resolution", "capacity_estimate", "argmax"])
    for m in _m_values(args, (10,)):
        rep = capacity_search(machine, m, resolution)
        argmax = ";".join(_fmt(float(x)) for x in rep.argmax_distribution.mass)
        t.add(rep.machine_id, m, rep.grid_resolution, rep.capacity_estimate, argmax)
    return t


def cmd_sqrt_law(args, parser) -> Table:
    n = args.alphabet if args.alphabet is not None else 2
    p = Pmf.uniform(n)
    t = Table(["m", "lazy_affinity", "sqrt_law_bound"])
    for m in _m_values(args, DEFAULT_M_VALUES):
        t.add(m, lazy_affinity(p, m), sqrt_law_bound(p, m))
    return t


def cmd_check(args, parser) -> Table:
    instances = args.trials if args.trials is not None else checks.DEFAULT_INSTANCES
    t = Table(["suite", "instances", "failures", "worst_violation", "passed"])
    for r in checks.run_all(args.seed, instances):
        t.add(r.name, r.instances, r.failures, r.worst_violation, r.passed)
    return t


COMMANDS = {
    "table1": cmd_table1,
    "table2": cmd_table2,
    "fig1": cmd_fig1,
    "fig3": cmd_fig3,
    "capacity": cmd_capacity,
    "sqrt-law": cmd_sqrt_law,
    "check": cmd_check,
}


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _unit(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in [0, 1], got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="learncap", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("--m", type=_positive_int, action="append", help="sample size; repeat for several")
    parser.add_argument("--trials", type=_positive_int, help="Monte Carlo trials (table1/2) or instances per suite (check)")
    parser.add_argument("--seed", type=_seed, default=0)
    parser.add_argument("--phi", type=_unit, action="append", help="explicit phi values for fig3")
    parser.add_argument("--grid", type=_positive_int, help="grid points (fig1, fig3) or steps per unit (capacity)")
    parser.add_argument("--alphabet", type=_positive_int, help="observation alphabet size (capacity, sqrt-law)")
    parser.add_argument("--machine", choices=list(MACHINES), default="average")
    parser.add_argument("--out", type=Path, help="write here instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("table1", "table2") and args.trials is None:
        args.trials = 1000
    try:
        table = COMMANDS[args.command](args, parser)
    except BudgetExceededError as exc:
        print(f"learncap: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET

    text = render(table, args.format)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)

    if args.command == "check":
        for r in table.rows:
            print(f"{'PASS' if r[4] else 'FAIL'} {r[0]}", file=sys.stderr)
        if not all(r[4] for r in table.rows):
            return EXIT_SUITE_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

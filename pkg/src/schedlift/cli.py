"""Command line: lift, round, gap, hard, verify-lb.

Exit codes: 0 success or feasible, 2 infeasible, exhausted or violated
(reported, not an error), 1 error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .exceptions import ScheduleLiftError
from .formulations import FORMULATIONS, build_formulation
from .lift import build_sa_lift, dump_pe
from .lp import format_variable
from .model import dump_instance, load_instance
from .rational import format_fraction, parse_fraction
from .rounding import SUCCESS, gap_search, ptas_round, ptas_round_order

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2
CHECKS = ("sa", "psd", "indep", "cond", "ring")


class RunReport:
    """Ordered ``key: value`` lines; rationals rendered as p/q."""

    def __init__(self, command: str, **parameters):
        self.lines = [f"command: {command}"]
        for key in sorted(parameters):
            value = parameters[key]
            if value is not None:
                self.lines.append(f"param {key}: {self._fmt(value)}")
        self.status = None
        self.timings = {}

    @staticmethod
    def _fmt(value) -> str:
        from fractions import Fraction

        if isinstance(value, Fraction):
            return format_fraction(value)
        return str(value)

    def add(self, key, value):
        self.lines.append(f"{key}: {self._fmt(value)}")

    def block(self, text: str):
        self.lines.extend(text.rstrip("\n").splitlines())

    def text(self, timings: bool = False) -> str:
        out = list(self.lines)
        out.append(f"status: {self.status}")
        if timings:
            out += [f"time {k}: {v:.3f}s" for k, v in self.timings.items()]
        return "\n".join(out) + "\n"


def _epsilon(args):
    return parse_fraction(args.epsilon) if args.epsilon is not None else None


def cmd_lift(args) -> tuple:
    instance = load_instance(args.instance)
    eps = _epsilon(args)
    if args.formulation in ("assign-sym", "order") and eps is None:
        raise ValueError(f"--epsilon is required for {args.formulation}")
    report = RunReport("lift", instance=args.instance, formulation=args.formulation, T=args.T,
                       degree=args.degree, epsilon=eps, complete=args.complete)
    t0 = time.perf_counter()
    lp = build_formulation(args.formulation, instance, args.T, eps)
    lift = build_sa_lift(lp, args.degree, budget=args.budget, complete=args.complete)
    report.add("base variables", lp.num_variables)
    report.add("base rows", lp.num_rows)
    report.add("lift variables", lift.lp.num_variables)
    report.add("lift rows", lift.lp.num_rows)
    outcome = lift.solve()
    report.timings["solve"] = time.perf_counter() - t0
    if outcome.feasible:
        report.status = "FEASIBLE"
        report.add("method", outcome.method)
        if args.pe_out:
            Path(args.pe_out).write_text(dump_pe(_pe(lift, outcome)))
            report.add("pseudoexpectation", args.pe_out)
        return report, EXIT_OK
    report.status = "INFEASIBLE"
    report.add("certificate rows", len(outcome.certificate))
    for idx in sorted(outcome.certificate)[: args.show]:
        row = lift.lp.rows[idx]
        report.add(f"  lambda {format_variable(row.label)}", outcome.certificate[idx])
    return report, EXIT_NEGATIVE


def _pe(lift, outcome):
    from .lift import pe_from_solution

    return pe_from_solution(lift, outcome.point)


def cmd_round(args) -> tuple:
    instance = load_instance(args.instance)
    eps = parse_fraction(args.epsilon or "1/2")
    degree = args.degree if args.degree is not None else instance.machines * instance.n
    report = RunReport("round", instance=args.instance, T=args.T, epsilon=eps, degree=degree,
                       mode=args.mode, seed=args.seed)
    t0 = time.perf_counter()
    driver = ptas_round if args.mode == "sym" else ptas_round_order
    result = driver(instance, args.T, eps, degree, seed=args.seed, complete=args.complete)
    report.timings["round"] = time.perf_counter() - t0
    report.block(result.report())
    report.status = result.status
    return report, EXIT_OK if result.status == SUCCESS else EXIT_NEGATIVE


def cmd_gap(args) -> tuple:
    eps = _epsilon(args)
    configurations = opt_lower = None
    if args.k is not None:
        from .lowerbound.hard_instance import certify_opt_lower_bound, gen_hard_instance

        hi = gen_hard_instance(args.k)
        instance = hi.instance
        configurations = hi.matching_configurations
        opt_lower = certify_opt_lower_bound(hi).bound
        source = f"I_{args.k}"
    else:
        instance = load_instance(args.instance)
        source = args.instance
    report = RunReport("gap", instance=source, formulation=args.formulation, degree=args.degree, epsilon=eps)
    t0 = time.perf_counter()
    result = gap_search(instance, eps, args.degree, args.formulation, opt_lower_bound=opt_lower,
                        budget=args.budget, configurations=configurations)
    report.timings["search"] = time.perf_counter() - t0
    report.block(result.report())
    report.status = "DONE"
    return report, EXIT_OK


def cmd_hard(args) -> tuple:
    from .lowerbound.hard_instance import gen_hard_instance
    from .lowerbound.pseudo import hard_pseudoexpectation

    hi = gen_hard_instance(args.k)
    report = RunReport("hard", k=args.k, out=args.out, level=args.level)
    report.block(hi.summary())
    if args.out:
        dump_instance(hi.instance, args.out)
        report.add("instance written", args.out)
    if args.pe_out:
        level = args.level if args.level is not None else args.k // 2
        pe = hard_pseudoexpectation(args.k, hi.matching_configurations, level)
        Path(args.pe_out).write_text(dump_pe(pe))
        report.add("pseudoexpectation written", args.pe_out)
    report.status = "DONE"
    return report, EXIT_OK


def run_check(name: str, k: int, level: int, seed: int) -> tuple:
    """One named check; returns ``(ok, text)``. Module-level so it can run in a worker."""
    from .lowerbound import checks, spanning
    from .lowerbound.hard_instance import gen_hard_instance

    matching = gen_hard_instance(k).matching_configurations
    if name == "sa":
        rep = checks.verify_hard_sa(k, level)
        lines = [f"sa: {rep.checked} lift rows, {len(rep.violations)} violations"]
        lines += [f"  {v.describe()}" for v in rep.violations[:20]]
        return rep.ok, "\n".join(lines)
    if name == "psd":
        ok, lines = True, []
        seen = {}
        for lam in spanning.partitions_in_lambda(3 * k, level):
            if lam[0] not in seen:
                block = spanning.moment_block(lam[0], level, k, matching, seed=seed)
                seen[lam[0]] = (len(block.descriptors), spanning.check_block_psd(block, seed=seed))
            size, res = seen[lam[0]]
            ok = ok and bool(res)
            lines.append(
                f"psd lambda={lam}: {size} descriptors, psd={res.psd}, "
                f"rank-one identity {res.identity_checks} checks ok={res.identity_ok}"
            )
        return ok, "\n".join(lines)
    if name == "indep":
        rep = checks.pseudoindependence_sweep(k, matching, total=3)
        return rep.ok, rep.report("indep").rstrip()
    if name == "cond":
        rep = checks.check_conditioning(k, matching)
        return rep.ok, rep.report("cond").rstrip()
    if name == "ring":
        from .lowerbound.pseudo import pe_hard
        from .ring import expand_to_degree

        rng = random.Random(seed)
        m = 3 * k
        bad = 0
        for _ in range(50):
            size = rng.randint(0, level)
            S = frozenset(zip(rng.sample(range(1, m + 1), size), (rng.choice(matching) for _ in range(size))))
            expanded = expand_to_degree(S, level, m, matching)
            bad += pe_hard(S, k, matching) != sum(c * pe_hard(T, k, matching) for T, c in expanded.items())
        sym_ok = all(
            checks.symmetry_check(k, matching, frozenset(zip(range(1, n + 1), matching[:n])), seed=seed)
            for n in range(0, level + 1)
        )
        return bad == 0 and sym_ok, f"ring: 50 random monomials expanded to degree {level}, {bad} mismatches; symmetry ok={sym_ok}"
    raise ValueError(f"unknown check {name!r}; choose from {CHECKS}")


def cmd_verify_lb(args) -> tuple:
    names = [c.strip() for c in args.checks.split(",") if c.strip()]
    for n in names:
        if n not in CHECKS:
            raise ValueError(f"unknown check {n!r}; choose from {CHECKS}")
    level = args.level if args.level is not None else args.k // 2
    report = RunReport("verify-lb", k=args.k, level=level, checks=",".join(names), seed=args.seed)
    t0 = time.perf_counter()
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_check, names, [args.k] * len(names), [level] * len(names), [args.seed] * len(names)))
    else:
        results = [run_check(n, args.k, level, args.seed) for n in names]
    report.timings["checks"] = time.perf_counter() - t0
    all_ok = True
    for ok, text in results:
        report.block(text)
        all_ok = all_ok and ok
    report.status = "PASS" if all_ok else "FAIL"
    return report, EXIT_OK if all_ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schedlift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the report (or the instance, for hard) here")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=2_000_000)
        p.add_argument("--jobs", type=int, default=1, help="worker processes for independent sweeps")
        p.add_argument("--timings", action="store_true", help="append wall-clock timings to the report")

    p = sub.add_parser("lift", help="build, lift and solve one formulation exactly")
    p.add_argument("--instance", required=True)
    p.add_argument("--formulation", choices=sorted(FORMULATIONS), default="assign")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--epsilon")
    p.add_argument("--complete", action="store_true", help="emit implied lift rows as well")
    p.add_argument("--pe-out", help="write the pseudoexpectation when feasible")
    p.add_argument("--show", type=int, default=10, help="certificate rows to print")
    common(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("round", help="lift assign(B,T), solve, round to a schedule")
    p.add_argument("--instance", required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--epsilon", default="1/2")
    p.add_argument("--degree", type=int)
    p.add_argument("--mode", choices=("sym", "order"), default="sym")
    p.add_argument("--complete", action="store_true")
    common(p)
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("gap", help="smallest lift-feasible T against OPT")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance")
    src.add_argument("--k", type=int, help="use the hard instance I_k")
    p.add_argument("--formulation", choices=sorted(FORMULATIONS), default="assign")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--epsilon")
    common(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("hard", help="write the hard instance I_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--pe-out", help="also write the explicit pseudoexpectation")
    common(p)
    p.set_defaults(func=cmd_hard)

    p = sub.add_parser("verify-lb", help="run lower-bound checks")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--checks", default="sa")
    common(p)
    p.set_defaults(func=cmd_verify_lb)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except (ScheduleLiftError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = report.text(timings=args.timings)
    if args.out and args.command != "hard":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

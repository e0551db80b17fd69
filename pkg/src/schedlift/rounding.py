"""Rounding a Sherali-Adams pseudoexpectation of assign(B,T) into a schedule.

Phase 1 pins, class by class, the fractional number of class-q jobs on every
machine by conditioning (stabilization). Phase 2 hands each machine that many
jobs of each class and list-schedules the short jobs. The ordering variant
additionally focuses machine groups so they can be processed independently.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import ceil

from .exceptions import (
    BudgetExceeded,
    DegreeExceeded,
    DegreeExhausted,
    InconsistentCounts,
    StabilizationError,
)
from .formulations import (
    build_assign_sym,
    build_clp,
    build_formulation,
    build_order,
    lex_sort_solution,
    point_to_schedule,
    schedule_to_point,
)
from .lift import build_sa_lift, pe_from_solution
from .model import Instance, classify_jobs, job_sort_key
from .rational import Fraction, format_fraction

SUCCESS = "SUCCESS"
LIFT_INFEASIBLE = "LIFT_INFEASIBLE"
DEGREE_EXHAUSTED = "DEGREE_EXHAUSTED"

STABLE = "STABLE"
UNSTABLE = "UNSTABLE"


# ---------------------------------------------------------------------------
# schedules


@dataclass
class Schedule:
    instance: Instance
    assignment: dict  # job id -> machine (1-based)

    def loads(self) -> dict:
        sizes = self.instance.sizes
        out = {i: 0 for i in range(1, self.instance.machines + 1)}
        for j, i in self.assignment.items():
            out[i] += sizes[j]
        return out

    @property
    def makespan(self) -> int:
        return max(self.loads().values(), default=0)

    def jobs_on(self, i: int) -> list:
        return sorted((j for j, h in self.assignment.items() if h == i), key=job_sort_key)

    def is_complete(self) -> bool:
        return set(self.assignment) == set(self.instance.job_ids)

    def report(self) -> str:
        lines = []
        loads = self.loads()
        for i in range(1, self.instance.machines + 1):
            lines.append(f"machine {i}: load {loads[i]} jobs {' '.join(self.jobs_on(i)) or '-'}")
        lines.append(f"makespan {self.makespan}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# stability bookkeeping


def class_mass(pe, i: int, jobs) -> Fraction:
    return sum((pe.value(frozenset([(i, j)])) for j in jobs), Fraction(0))


@dataclass
class StabilityState:
    masses: dict  # (machine, q) -> Fraction
    status: dict  # (machine, q) -> (STABLE, a) or (UNSTABLE, None)
    groups: list  # consecutive machine runs sharing the same stable signature

    def is_stable(self, i, q) -> bool:
        return self.status[(i, q)][0] == STABLE

    def all_stable(self) -> bool:
        return all(s == STABLE for s, _ in self.status.values())


def stability_scan(pe, classification, machines: int, pinned: dict | None = None) -> StabilityState:
    """Class masses per machine. A mass is reported STABLE if the stabilization
    procedure pinned it, or if every ``x_ij`` of the class is already 0/1 on that
    machine (0/1 values survive every conditioning)."""
    pinned = pinned or {}
    masses, status = {}, {}
    for i in range(1, machines + 1):
        for q in range(1, classification.s + 1):
            jobs = classification.jobs_in(q)
            mass = class_mass(pe, i, jobs)
            masses[(i, q)] = mass
            integral_entries = all(pe.value(frozenset([(i, j)])) in (0, 1) for j in jobs)
            pinned_ok = pinned.get((i, q)) == mass
            if mass.denominator == 1 and (pinned_ok or integral_entries):
                status[(i, q)] = (STABLE, int(mass))
            else:
                status[(i, q)] = (UNSTABLE, None)
    groups = []
    signature = None
    for i in range(1, machines + 1):
        sig = tuple(status[(i, q)] for q in range(1, classification.s + 1))
        if groups and sig == signature:
            groups[-1].append(i)
        else:
            groups.append([i])
            signature = sig
    return StabilityState(masses, status, groups)


def _runs(machines, key):
    """Split a list of consecutive machines into maximal runs with equal key,
    checking that no key value reappears after its run ended."""
    runs, seen = [], set()
    for i in machines:
        k = key(i)
        if runs and runs[-1][0] == k:
            runs[-1][1].append(i)
        else:
            if k in seen:
                raise StabilizationError(f"machines sharing signature {k} are not consecutive")
            seen.add(k)
            runs.append((k, [i]))
    return runs


# ---------------------------------------------------------------------------
# conditioning helpers


def _condition(pe, A, trace):
    A = frozenset(A)
    try:
        mass = pe.value(A)
    except DegreeExceeded as exc:
        raise DegreeExhausted(str(exc), progress=list(trace)) from None
    if mass == 1:
        # E[x_I x_A] = E[x_I] whenever E[x_A] = 1, so conditioning changes nothing.
        trace.append(f"pin {_fmt_set(A)} (mass 1, no-op)")
        return pe
    if len(A) > pe.degree:
        raise DegreeExhausted(f"need degree {len(A)} to condition, have {pe.degree}", progress=list(trace))
    trace.append(f"condition on {_fmt_set(A)} (mass {format_fraction(mass)}, degree {pe.degree} -> {pe.degree - len(A)})")
    return pe.condition(A)


def _fmt_set(A):
    return "{" + ",".join(f"({i},{j})" for i, j in sorted(A, key=lambda p: (p[0], job_sort_key(p[1])))) + "}"


def find_positive_set(pe, i: int, jobs, t: int, trace=None):
    """First (in job order) set of ``t`` pairs ``(i, j)`` with positive mass, or None.

    Depth-first search over jobs in order; a set is extended only while its mass
    stays positive, which loses nothing because E[x_A] >= E[x_{A+e}].
    """
    if t > pe.degree:
        raise DegreeExhausted(f"need degree {t} to test sets of size {t}, have {pe.degree}",
                              progress=list(trace or []))
    cand = [j for j in jobs if pe.value(frozenset([(i, j)])) > 0]
    if len(cand) < t:
        return None

    def dfs(start, chosen):
        if len(chosen) == t:
            return chosen
        for k in range(start, len(cand) - (t - len(chosen)) + 1):
            nxt = chosen | {(i, cand[k])}
            if pe.value(nxt) > 0:
                found = dfs(k + 1, nxt)
                if found is not None:
                    return found
        return None

    return dfs(0, frozenset())


def stabilize(pe, machines, q: int, classification, jobs=None, pinned=None, trace=None, targets=None):
    """Make every machine in the consecutive range ``machines`` stable for class q+1.

    For t = 1/eps down to 1: take the rightmost machine i0 (after the machines
    already pinned) carrying a positive-mass set of t class-(q+1) jobs, condition
    on it, then on such a set for the leftmost unpinned machine. The symmetry
    breaking rows then force exactly t jobs on every machine in between.
    """
    machines = list(machines)
    pinned = pinned if pinned is not None else {}
    trace = trace if trace is not None else []
    jobs = list(classification.jobs_in(q + 1) if jobs is None else jobs)
    if targets is not None:
        for i in machines:
            for qq, a in enumerate(targets, start=1):
                if pinned.get((i, qq)) != a:
                    raise StabilizationError(f"machine {i} is not ({qq},{a})-stable")
    prev, last = machines[0] - 1, machines[-1]
    top = min(classification.inv_epsilon, len(jobs))
    for t in range(top, 0, -1):
        if prev == last:
            break
        found = None
        for i in range(last, prev, -1):
            A = find_positive_set(pe, i, jobs, t, trace)
            if A is not None:
                found = (i, A)
                break
        if found is None:
            continue
        i0, A = found
        pe = _condition(pe, A, trace)
        left = prev + 1
        if left != i0:
            B = find_positive_set(pe, left, jobs, t, trace)
            if B is None:
                raise StabilizationError(f"no positive set of size {t} on machine {left}")
            pe = _condition(pe, B, trace)
        for i in range(prev + 1, i0 + 1):
            pinned[(i, q + 1)] = t
        prev = i0
    for i in range(prev + 1, last + 1):
        pinned[(i, q + 1)] = 0
    for i in machines:
        mass = class_mass(pe, i, jobs)
        if mass != pinned[(i, q + 1)]:
            raise StabilizationError(
                f"machine {i} class {q + 1}: mass {mass} differs from pinned {pinned[(i, q + 1)]}"
            )
    return pe


def spot_check_persistence(pe, pinned: dict, classification, rng: random.Random, checks: int = 10, scope=None):
    """Condition on random positive-mass sets and confirm the pinned masses do not move."""
    done = 0
    pool = [S for S, v in pe.items() if v > 0 and 0 < len(S) <= min(2, pe.degree - 1)]
    pool.sort(key=lambda S: sorted((i, job_sort_key(j)) for i, j in S))
    for _ in range(checks):
        if not pool:
            break
        A = rng.choice(pool)
        cond = pe.condition(A)
        for (i, q), a in pinned.items():
            jobs = classification.jobs_in(q) if scope is None else scope.get(q, ())
            if class_mass(cond, i, jobs) != a:
                raise StabilizationError(f"pinned mass of machine {i}, class {q} moved after conditioning")
        done += 1
    return done


def stage_degree_budget(epsilon, q: int) -> int:
    """Documented worst-case degree for stage q: (1/eps+1)^q groups, 2/eps^2 each."""
    inv = int(1 / Fraction(epsilon))
    return (inv + 1) ** q * 2 * inv * inv


# ---------------------------------------------------------------------------
# phase 2


def assign_by_counts(b: dict, classification, machines: int, ordered: bool = True) -> dict:
    """Give machine i exactly ``b[(i, q)]`` jobs of class q, jobs taken in class order."""
    out = {}
    for q in range(1, classification.s + 1):
        jobs = list(classification.jobs_in(q))
        total = sum(b.get((i, q), 0) for i in range(1, machines + 1))
        if total != len(jobs):
            raise InconsistentCounts(f"class {q}: counts sum to {total}, class has {len(jobs)} jobs")
        pos = 0
        for i in range(1, machines + 1):
            k = b.get((i, q), 0)
            if k < 0:
                raise InconsistentCounts("negative count")
            for j in jobs[pos:pos + k]:
                out[j] = i
            pos += k
    return out


def round_long(pe, classification, machines: int, pinned=None, instance=None) -> Schedule:
    state = stability_scan(pe, classification, machines, pinned)
    if not state.all_stable():
        bad = [k for k, (s, _) in state.status.items() if s != STABLE]
        raise InconsistentCounts(f"unstable class masses at {bad[:5]}")
    b = {k: a for k, (_, a) in state.status.items()}
    assignment = assign_by_counts(b, classification, machines)
    if instance is None:
        instance = Instance(machines, ())
    return Schedule(instance, assignment)


def greedy_short(partial: Schedule, shorts, instance: Instance) -> Schedule:
    """List scheduling in ascending id order onto the least loaded machine (ties: lowest index)."""
    assignment = dict(partial.assignment)
    sizes = instance.sizes
    loads = {i: 0 for i in range(1, instance.machines + 1)}
    for j, i in assignment.items():
        loads[i] += sizes[j]
    for j in sorted(shorts, key=job_sort_key):
        i = min(loads, key=lambda h: (loads[h], h))
        assignment[j] = i
        loads[i] += sizes[j]
    return Schedule(instance, assignment)


# ---------------------------------------------------------------------------
# drivers


@dataclass
class RoundingResult:
    status: str
    T: int
    epsilon: Fraction
    degree: int
    schedule: Schedule | None = None
    degree_used: int = 0
    counts: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == SUCCESS

    def report(self) -> str:
        lines = [
            f"status {self.status}",
            f"T {self.T}",
            f"epsilon {format_fraction(self.epsilon)}",
            f"degree {self.degree}",
            f"degree consumed {self.degree_used}",
        ]
        if self.message:
            lines.append(f"message {self.message}")
        if self.schedule is not None:
            lines.append(self.schedule.report())
        for k in sorted(self.checks):
            lines.append(f"check {k}: {self.checks[k]}")
        lines.append("trace:")
        lines.extend(f"  {t}" for t in self.trace)
        return "\n".join(lines) + "\n"


def _check_long_chain(schedule, b, cls, T, checks):
    """The inequality chain behind the (1+eps)T bound, asserted machine by machine."""
    sizes = schedule.instance.sizes
    eps = cls.epsilon
    for i in range(1, schedule.instance.machines + 1):
        rounded = sum((b.get((i, q), 0) * cls.lower_size(q) for q in range(1, cls.s + 1)), Fraction(0))
        if rounded > T:
            raise StabilizationError(f"machine {i}: rounded long load {rounded} exceeds T={T}")
        true_load = sum(sizes[j] for j in schedule.jobs_on(i))
        if true_load > (1 + eps) * rounded:
            raise StabilizationError(f"machine {i}: long load {true_load} exceeds (1+eps)*{rounded}")
        if true_load > (1 + eps) * T:
            raise StabilizationError(f"machine {i}: long load {true_load} exceeds (1+eps)T")
    checks["rounded long load <= T"] = "ok"
    checks["long load <= (1+eps) rounded load"] = "ok"
    checks["long load <= (1+eps)T"] = "ok"


def _finish(instance, T, cls, b, assignment, result):
    long_schedule = Schedule(instance, assignment)
    _check_long_chain(long_schedule, b, cls, T, result.checks)
    before = long_schedule.makespan
    if instance.total_size > instance.machines * T:
        raise StabilizationError("total size exceeds m*T although the lift was feasible")
    final = greedy_short(long_schedule, cls.short, instance)
    if not final.is_complete():
        raise StabilizationError("schedule does not cover every job")
    max_short = max((instance.sizes[j] for j in cls.short), default=0)
    avg = Fraction(instance.total_size, instance.machines)
    if final.makespan > max(before, avg + max_short):
        raise StabilizationError("greedy short-job placement broke its makespan dichotomy")
    if final.makespan > (1 + cls.epsilon) * T:
        raise StabilizationError(f"makespan {final.makespan} exceeds (1+eps)T")
    result.checks["greedy makespan <= max(long makespan, avg + max short)"] = "ok"
    result.checks["makespan <= (1+eps)T"] = "ok"
    result.schedule = final
    result.counts = dict(b)
    result.status = SUCCESS
    return result


def round_pseudoexpectation(pe, instance: Instance, T: int, epsilon, seed: int = 0, spot_checks: int = 10,
                            result: RoundingResult | None = None) -> RoundingResult:
    """Phase 1 (staged stabilization) and Phase 2 on a pe for assign(B,T)."""
    cls = classify_jobs(instance, T, epsilon)
    m = instance.machines
    if result is None:
        result = RoundingResult("RUNNING", T, cls.epsilon, pe.degree)
    trace = result.trace
    start_degree = pe.degree
    pinned: dict = {}
    try:
        for q in range(cls.s):
            runs = _runs(range(1, m + 1), lambda i: tuple(pinned[(i, qq)] for qq in range(1, q + 1)))
            if len(runs) > (cls.inv_epsilon + 1) ** q:
                raise StabilizationError(f"stage {q + 1}: {len(runs)} groups exceed (1/eps+1)^{q}")
            for _, group in runs:
                trace.append(f"stage {q + 1}: stabilize class {q + 1} on machines {group[0]}..{group[-1]}")
                pe = stabilize(pe, group, q, cls, pinned=pinned, trace=trace)
    except DegreeExhausted as exc:
        result.status = DEGREE_EXHAUSTED
        result.message = str(exc)
        result.degree_used = start_degree - pe.degree
        return result
    for (i, q), a in pinned.items():
        if class_mass(pe, i, cls.jobs_in(q)) != a:
            raise StabilizationError(f"machine {i}, class {q}: pinned mass drifted")
    result.checks["stage groups consecutive"] = "ok"
    result.checks["persistence spot checks"] = spot_check_persistence(
        pe, pinned, cls, random.Random(seed), spot_checks
    )
    result.degree_used = start_degree - pe.degree
    assignment = assign_by_counts(pinned, cls, m)
    return _finish(instance, T, cls, pinned, assignment, result)


def _solve_lift(lp, degree, complete):
    lift = build_sa_lift(lp, degree, complete=complete)
    outcome = lift.solve()
    return lift, outcome


def ptas_round(instance: Instance, T: int, epsilon, degree: int, seed: int = 0, complete: bool = False) -> RoundingResult:
    """Lift assign(B,T) to ``degree``, solve exactly, then round."""
    cls = classify_jobs(instance, T, epsilon)
    result = RoundingResult("RUNNING", T, cls.epsilon, degree)
    lp = build_assign_sym(instance, T, epsilon)
    lift, outcome = _solve_lift(lp, degree, complete)
    if not outcome.feasible:
        result.status = LIFT_INFEASIBLE
        result.message = f"degree-{degree} lift of assign(B,{T}) is infeasible (Farkas certificate with {len(outcome.certificate)} rows)"
        return result
    pe = pe_from_solution(lift, outcome.point)
    return round_pseudoexpectation(pe, instance, T, epsilon, seed=seed, result=result)


# ---------------------------------------------------------------------------
# ordering constraints


def _focus(pe, machines, scope, q, cls, pinned, trace):
    """Stabilize class q+1 on ``machines``, split by the pinned count, and condition
    on the last positive job of every class per part so each part is focused."""
    pe = stabilize(pe, machines, q, cls, jobs=scope[q + 1], pinned=pinned, trace=trace)
    parts = [grp for _, grp in _runs(machines, lambda i: pinned[(i, q + 1)])]
    for part in parts:
        for qq in range(1, cls.s + 1):
            for j in reversed(scope[qq]):
                positive = [i for i in part if pe.value(frozenset([(i, j)])) > 0]
                if positive:
                    pe = _condition(pe, [(max(positive), j)], trace)
                    break
    out = []
    for part in parts:
        sub_scope = {}
        for qq in range(1, cls.s + 1):
            keep = []
            for j in scope[qq]:
                share = sum((pe.value(frozenset([(i, j)])) for i in part), Fraction(0))
                if share not in (0, 1):
                    raise StabilizationError(f"machines {part[0]}..{part[-1]} are not focused on job {j}")
                if share == 1:
                    keep.append(j)
            sub_scope[qq] = keep
        out.append((part, sub_scope))
    return pe, out


def _order_recurse(pe, machines, scope, q, cls, pinned, trace, used, top):
    """``used`` is the degree spent on the path from the root; ``top`` keeps the maximum."""
    if q == cls.s or not machines:
        return
    trace.append(f"level {q + 1}: focus machines {machines[0]}..{machines[-1]}")
    start = pe.degree
    pe, parts = _focus(pe, machines, scope, q, cls, pinned, trace)
    used += start - pe.degree
    top[0] = max(top[0], used)
    for part, sub_scope in parts:
        variables = {(i, j) for i in part for js in sub_scope.values() for j in js}
        _order_recurse(pe.restrict(variables), part, sub_scope, q + 1, cls, pinned, trace, used, top)


def round_pseudoexpectation_order(pe, instance: Instance, T: int, epsilon, seed: int = 0,
                                  result: RoundingResult | None = None) -> RoundingResult:
    cls = classify_jobs(instance, T, epsilon)
    m = instance.machines
    if result is None:
        result = RoundingResult("RUNNING", T, cls.epsilon, pe.degree)
    pinned: dict = {}
    top = [0]
    scope = {q: list(cls.jobs_in(q)) for q in range(1, cls.s + 1)}
    long_vars = {(i, j) for i in range(1, m + 1) for j in cls.long_jobs}
    try:
        _order_recurse(pe.restrict(long_vars), list(range(1, m + 1)), scope, 0, cls, pinned, result.trace, 0, top)
    except DegreeExhausted as exc:
        result.status = DEGREE_EXHAUSTED
        result.message = str(exc)
        result.degree_used = top[0]
        return result
    result.degree_used = top[0]
    assignment = assign_by_counts(pinned, cls, m)
    result = _finish(instance, T, cls, pinned, assignment, result)
    violated = order_violations(result.schedule, T, epsilon)
    if violated:
        raise StabilizationError(f"ordering rows violated: {violated[:3]}")
    result.checks["ordering rows"] = "ok"
    return result


def order_violations(schedule: Schedule, T: int, epsilon) -> list:
    lp = build_order(schedule.instance, T, epsilon)
    point = schedule_to_point(schedule.assignment, schedule.instance)
    return [r.label for r in lp.rows if r.label and r.label[0] == "order" and not r.satisfied(point)]


def ptas_round_order(instance: Instance, T: int, epsilon, degree: int, seed: int = 0,
                     complete: bool = False) -> RoundingResult:
    cls = classify_jobs(instance, T, epsilon)
    result = RoundingResult("RUNNING", T, cls.epsilon, degree)
    lp = build_order(instance, T, epsilon)
    lift, outcome = _solve_lift(lp, degree, complete)
    if not outcome.feasible:
        result.status = LIFT_INFEASIBLE
        result.message = f"degree-{degree} lift of order(B,{T}) is infeasible"
        return result
    pe = pe_from_solution(lift, outcome.point)
    return round_pseudoexpectation_order(pe, instance, T, epsilon, seed=seed, result=result)


def reorder_for_order_rows(schedule: Schedule, T: int, epsilon) -> Schedule:
    """Lex-sort machines, then hand out each class by cumulative counts
    ``c_iq = sum_{h<=i} b_hq`` so the result satisfies the ordering rows."""
    instance = schedule.instance
    cls = classify_jobs(instance, T, epsilon)
    x = lex_sort_solution(schedule_to_point(schedule.assignment, instance), cls, instance.machines)
    assignment = point_to_schedule(x, instance)
    b = {}
    for j, i in assignment.items():
        q = cls.class_of(j)
        if q is not None:
            b[(i, q)] = b.get((i, q), 0) + 1
    long_assignment = assign_by_counts(b, cls, instance.machines)
    for j in cls.short:
        long_assignment[j] = assignment[j]
    return Schedule(instance, long_assignment)


# ---------------------------------------------------------------------------
# oracles


def brute_force_opt(instance: Instance, budget: int = 5_000_000):
    """Exact minimum makespan by depth-first search; returns ``(OPT, Schedule)``.

    Jobs go in decreasing size; a job is never put on a second empty machine
    (empty machines are interchangeable) and branches that cannot beat the
    incumbent are cut.
    """
    m = instance.machines
    jobs = sorted(instance.jobs, key=lambda jp: (-jp[1], job_sort_key(jp[0])))
    if m == 1:
        return instance.total_size, Schedule(instance, {j: 1 for j, _ in jobs})
    lower = max(max((p for _, p in jobs), default=0), -(-instance.total_size // m))
    # start from list scheduling as the incumbent
    loads = [0] * m
    best_assign = {}
    for j, p in jobs:
        i = min(range(m), key=lambda h: (loads[h], h))
        loads[i] += p
        best_assign[j] = i + 1
    best = [max(loads), best_assign]
    nodes = [0]
    loads = [0] * m
    current = {}

    def dfs(k):
        if best[0] == lower:
            return
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"brute force exceeded {budget} nodes")
        if k == len(jobs):
            mk = max(loads)
            if mk < best[0]:
                best[0] = mk
                best[1] = dict(current)
            return
        j, p = jobs[k]
        tried = set()
        for i in range(m):
            if loads[i] in tried:
                continue  # machines with equal load are interchangeable here
            tried.add(loads[i])
            if loads[i] + p >= best[0]:
                continue
            loads[i] += p
            current[j] = i + 1
            dfs(k + 1)
            loads[i] -= p
            del current[j]

    dfs(0)
    return best[0], Schedule(instance, best[1])


@dataclass
class GapResult:
    T_star: int
    opt: int
    opt_is_lower_bound: bool
    ratio: Fraction
    feasibility: dict = field(default_factory=dict)  # T -> bool, every probe

    def report(self) -> str:
        rel = ">=" if self.opt_is_lower_bound else "="
        lines = [f"T* {self.T_star}", f"OPT {rel} {self.opt}", f"ratio {rel} {format_fraction(self.ratio)}"]
        lines += [f"probe T={T}: {'feasible' if ok else 'infeasible'}" for T, ok in sorted(self.feasibility.items())]
        return "\n".join(lines) + "\n"


def lift_feasible(instance: Instance, T: int, formulation: str, degree: int, epsilon=None,
                  complete: bool = False, configurations=None) -> bool:
    """Exact feasibility of the degree-``degree`` lift at T.

    For the configuration LP, ``configurations`` names a column subset tried
    first: a feasible lift of the restricted LP extends by zeros to a feasible
    lift of the full one. Only a restricted failure triggers the full build.
    """
    if formulation == "clp" and configurations is not None:
        usable = [C for C in configurations if C.load <= T]
        lp = build_clp(instance, T, configurations=usable)
        if build_sa_lift(lp, degree, complete=complete).solve().feasible:
            return True
    lp = build_formulation(formulation, instance, T, epsilon)
    return build_sa_lift(lp, degree, complete=complete).solve().feasible


def gap_search(instance: Instance, epsilon, degree: int, formulation: str, opt: int | None = None,
               opt_lower_bound: int | None = None, budget: int = 5_000_000, complete: bool = False,
               configurations=None) -> GapResult:
    """Smallest integer T whose lift is feasible, by binary search over
    ``[max(max p, ceil(sum p / m)), sum p]``, against OPT (or a proven lower bound on it).

    The upper end is never probed: at T = sum p every formulation has an integral
    point, so every lift is feasible there.
    """
    total = instance.total_size
    lo = max(max(instance.sizes.values()), ceil(Fraction(total, instance.machines)))
    hi = total
    probes = {}

    def ok(T):
        if T not in probes:
            probes[T] = lift_feasible(instance, T, formulation, degree, epsilon, complete, configurations)
        return probes[T]

    if not ok(lo):
        lo += 1
        while lo < hi:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid + 1
    T_star = lo
    if opt is None and opt_lower_bound is None:
        opt, _ = brute_force_opt(instance, budget)
    if opt is not None:
        return GapResult(T_star, opt, False, Fraction(opt, T_star), probes)
    return GapResult(T_star, opt_lower_bound, True, Fraction(opt_lower_bound, T_star), probes)

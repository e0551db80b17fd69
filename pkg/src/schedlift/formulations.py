"""The assignment LP, the configuration LP, symmetry breaking and ordering rows.

Assignment variables are ``(machine, job_id)``; configuration variables are
``(machine, Configuration)``. Machines are numbered from 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .exceptions import InfeasibleInput, NonIntegralPoint
from .lp import EQ, GE, LE, RationalLP
from .model import Configuration, Instance, classify_jobs, enumerate_configurations, DEFAULT_CONFIGURATION_CAP
from .rational import Fraction

LESS, EQUAL, GREATER = -1, 0, 1


def build_assign(instance: Instance, T: int) -> RationalLP:
    if T < 1:
        raise ValueError("T must be positive")
    m = instance.machines
    variables = [(i, j) for i in range(1, m + 1) for j in instance.job_ids]
    lp = RationalLP(variables, bounds={v: (Fraction(0), Fraction(1)) for v in variables}, name=f"assign T={T}")
    for j in instance.job_ids:
        lp.add_row({(i, j): 1 for i in range(1, m + 1)}, EQ, 1, label=("job", j))
    for i in range(1, m + 1):
        lp.add_row({(i, j): p for j, p in instance.jobs}, LE, T, label=("load", i))
    lp.meta.update(kind="assign", T=int(T), machines=m)
    return lp


def build_clp(instance: Instance, T: int, configurations=None, cap: int = DEFAULT_CONFIGURATION_CAP) -> RationalLP:
    """Configuration LP. ``configurations`` restricts the columns (all of them by default)."""
    if configurations is None:
        configurations = enumerate_configurations(instance.size_counts().keys(), T, cap)
    configurations = sorted(configurations)
    m = instance.machines
    variables = [(i, C) for i in range(1, m + 1) for C in configurations]
    lp = RationalLP(variables, bounds={v: (Fraction(0), Fraction(1)) for v in variables}, name=f"clp T={T}")
    for i in range(1, m + 1):
        lp.add_row({(i, C): 1 for C in configurations}, EQ, 1, label=("machine", i))
    for p, n_p in sorted(instance.size_counts().items()):
        coeffs = {(i, C): C.multiplicity(p) for i in range(1, m + 1) for C in configurations if C.multiplicity(p)}
        lp.add_row(coeffs, EQ, n_p, label=("size", p))
    lp.meta.update(kind="clp", T=int(T), machines=m, configurations=configurations)
    return lp


@dataclass(frozen=True)
class LexWeights:
    B: int
    s: int

    def weight(self, q: int) -> int:
        return self.B ** (self.s - q)

    @property
    def weights(self) -> tuple:
        return tuple(self.weight(q) for q in range(1, self.s + 1))


def lex_weights(classification) -> LexWeights:
    B = 1 + 2 * classification.s * classification.max_class_size
    return LexWeights(B, classification.s)


def build_assign_sym(instance: Instance, T: int, epsilon) -> RationalLP:
    cls = classify_jobs(instance, T, epsilon)
    lw = lex_weights(cls)
    lp = build_assign(instance, T)
    lp.name = f"assign-sym T={T} eps={cls.epsilon}"
    for i in range(1, instance.machines):
        coeffs = {}
        for q in range(1, cls.s + 1):
            w = lw.weight(q)
            for j in cls.jobs_in(q):
                coeffs[(i, j)] = w
                coeffs[(i + 1, j)] = -w
        if coeffs:
            lp.add_row(coeffs, GE, 0, label=("sym", i))
    lp.meta.update(kind="assign-sym", classification=cls, weights=lw)
    return lp


def build_order(instance: Instance, T: int, epsilon) -> RationalLP:
    lp = build_assign_sym(instance, T, epsilon)
    cls = lp.meta["classification"]
    lp.name = f"order T={T} eps={cls.epsilon}"
    m = instance.machines
    for q in range(1, cls.s + 1):
        jobs = cls.jobs_in(q)
        for ell in range(len(jobs) - 1):
            a, b = jobs[ell], jobs[ell + 1]
            for h in range(1, m + 1):
                coeffs = {}
                for i in range(1, h + 1):
                    coeffs[(i, a)] = 1
                    coeffs[(i, b)] = -1
                lp.add_row(coeffs, GE, 0, label=("order", q, ell + 1, h))
    lp.meta["kind"] = "order"
    return lp


FORMULATIONS = {
    "assign": lambda inst, T, eps=None: build_assign(inst, T),
    "clp": lambda inst, T, eps=None: build_clp(inst, T),
    "assign-sym": build_assign_sym,
    "order": build_order,
}


def build_formulation(name: str, instance: Instance, T: int, epsilon=None) -> RationalLP:
    try:
        builder = FORMULATIONS[name]
    except KeyError:
        raise ValueError(f"unknown formulation {name!r}; choose from {sorted(FORMULATIONS)}") from None
    return builder(instance, T, epsilon)


# ---------------------------------------------------------------------------
# lexicographic machinery


def lex_compare(C, D, classes=None) -> int:
    """Compare two class-multiplicity vectors lexicographically (class 1 first)."""
    C, D = tuple(C), tuple(D)
    if len(C) != len(D):
        raise ValueError("vectors must have the same number of classes")
    for a, b in zip(C, D):
        if a != b:
            return GREATER if a > b else LESS
    return EQUAL


def lex_value(C, weights: LexWeights) -> int:
    C = tuple(C)
    if len(C) != weights.s:
        raise ValueError("vector length must equal s")
    return sum(weights.weight(q) * C[q - 1] for q in range(1, weights.s + 1))


def _machines_of(x) -> int:
    return max((i for i, _ in x), default=0)


def conf_of_machine(x, i: int, classification) -> tuple:
    counts = []
    for q in range(1, classification.s + 1):
        total = 0
        for j in classification.jobs_in(q):
            v = x.get((i, j), 0)
            if v not in (0, 1):
                raise NonIntegralPoint(f"x[{i},{j}] = {v} is not 0/1")
            total += int(v)
        counts.append(total)
    return tuple(counts)


def check_lex_sorted(x, classification, machines: int | None = None) -> bool:
    m = machines or _machines_of(x)
    confs = [conf_of_machine(x, i, classification) for i in range(1, m + 1)]
    return all(lex_compare(confs[i], confs[i + 1]) != LESS for i in range(m - 1))


def lex_sort_solution(x, classification, machines: int | None = None) -> dict:
    """Permute machines so that their long-job configurations are lex non-increasing."""
    m = machines or _machines_of(x)
    confs = {i: conf_of_machine(x, i, classification) for i in range(1, m + 1)}
    order = sorted(range(1, m + 1), key=lambda i: tuple(-c for c in confs[i]))  # stable by index
    new_index = {old: new for new, old in enumerate(order, start=1)}
    return {(new_index[i], j): v for (i, j), v in x.items()}


# ---------------------------------------------------------------------------
# integral points


def schedule_to_point(assignment: dict, instance: Instance) -> dict:
    """0/1 assignment vector for a map job_id -> machine."""
    return {
        (i, j): Fraction(1 if assignment[j] == i else 0)
        for i in range(1, instance.machines + 1)
        for j in instance.job_ids
    }


def point_to_schedule(x: dict, instance: Instance) -> dict:
    out = {}
    for j in instance.job_ids:
        owners = [i for i in range(1, instance.machines + 1) if x.get((i, j), 0) == 1]
        if len(owners) != 1:
            raise NonIntegralPoint(f"job {j} is not integrally assigned")
        out[j] = owners[0]
    return out


def enumerate_assignments(instance: Instance):
    """All maps job -> machine, as dicts (``m^n`` of them)."""
    ids = instance.job_ids
    for combo in itertools.product(range(1, instance.machines + 1), repeat=len(ids)):
        yield dict(zip(ids, combo))


def integral_points(lp: RationalLP, instance: Instance) -> list:
    """Exhaustive list of integral points of an assignment-type LP (as schedules)."""
    out = []
    for a in enumerate_assignments(instance):
        if lp.is_feasible_point(schedule_to_point(a, instance)):
            out.append(a)
    return out


# ---------------------------------------------------------------------------
# configuration -> assignment projection


def check_clp_point(y: dict, instance: Instance, T: int) -> list:
    """Violations of the configuration LP by ``y`` (missing entries read as 0)."""
    problems = []
    m = instance.machines
    for (i, C), v in y.items():
        if not 1 <= i <= m:
            problems.append(f"machine {i} out of range")
        if C.load > T:
            problems.append(f"configuration {C} exceeds T")
        if v < 0 or v > 1:
            problems.append(f"y[{i},{C}]={v} outside [0,1]")
    for i in range(1, m + 1):
        total = sum((v for (h, _), v in y.items() if h == i), Fraction(0))
        if total != 1:
            problems.append(f"machine {i} configuration mass {total} != 1")
    for p, n_p in instance.size_counts().items():
        total = sum((v * C.multiplicity(p) for (_, C), v in y.items()), Fraction(0))
        if total != n_p:
            problems.append(f"size {p} count {total} != {n_p}")
    sizes = set(instance.size_counts())
    for (_, C), v in y.items():
        if v and any(p not in sizes for p, _ in C.counts):
            problems.append(f"configuration {C} uses a size absent from the instance")
    return problems


def project_clp_to_assign(y: dict, instance: Instance, T: int) -> dict:
    """``x'_ij = (1/n_{p_j}) sum_C m(p_j, C) y_iC``; verified to lie in assign(T)."""
    problems = check_clp_point(y, instance, T)
    if problems:
        raise InfeasibleInput("; ".join(problems[:5]))
    counts = instance.size_counts()
    mass: dict = {}
    for (i, C), v in y.items():
        if v:
            for p, k in C.counts:
                mass[(i, p)] = mass.get((i, p), 0) + k * v
    x = {}
    for i in range(1, instance.machines + 1):
        for j, p in instance.jobs:
            x[(i, j)] = Fraction(mass.get((i, p), 0)) / counts[p]
    lp = build_assign(instance, T)
    if not lp.is_feasible_point(x):
        raise AssertionError("projection left assign(T); this contradicts the projection lemma")
    return x

"""The explicit pseudoexpectation of the hard instance and its conditional versions.

A partial schedule is a frozenset of ``(machine, configuration)`` pairs using
each machine at most once. A profile is a mapping configuration -> count.
Conditional values use the falling factorial ``(3k - |T|)_{|S|}`` as
normalization, which reduces to the unconditional formula at T = {}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

from ..lift import Pseudoexpectation
from ..rational import Fraction, lower_factorial
from ..ring import SquareFreePoly, is_partial_schedule


def machines_of(S) -> set:
    return {i for i, _ in S}


def config_degree(S, C) -> int:
    return sum(1 for _, D in S if D == C)


def profile_of(S) -> dict:
    out: dict = {}
    for _, C in S:
        out[C] = out.get(C, 0) + 1
    return out


def norm(gamma) -> int:
    return sum(gamma.values())


def canonical_profile(gamma) -> tuple:
    return tuple(sorted((C, n) for C, n in gamma.items() if n))


@dataclass(frozen=True)
class HookTableau:
    """Hook shape with first row length ``lambda_1``; the tail is the lowest machines."""

    lambda_1: int
    machines: int

    def __post_init__(self):
        if not 1 <= self.lambda_1 <= self.machines:
            raise ValueError("lambda_1 must lie in [1, m]")

    @property
    def tail(self) -> tuple:
        return tuple(range(1, self.machines - self.lambda_1 + 1))

    @property
    def row(self) -> tuple:
        return tuple(range(self.machines - self.lambda_1 + 1, self.machines + 1))

    def in_lambda(self, level: int) -> bool:
        return len(self.tail) <= level


def _supported(S, matching) -> bool:
    return all(C in matching for _, C in S)


def _half(k) -> Fraction:
    return Fraction(k, 2)


def pe_hard_formula(S, k: int) -> Fraction:
    """(1/(3k)_{|S|}) prod_j (k/2)_{delta_S(C_j)}, without any support test."""
    value = 1 / lower_factorial(3 * k, len(S))
    for C, d in profile_of(S).items():
        value *= lower_factorial(_half(k), d)
    return value


def pe_hard(S, k: int, matching) -> Fraction:
    """The formula on partial schedules over the matching configurations with
    |S| <= k/2, zero elsewhere."""
    S = frozenset(S)
    if not is_partial_schedule(S) or not _supported(S, matching) or 2 * len(S) > k:
        return Fraction(0)
    if any(not 1 <= i <= 3 * k for i in machines_of(S)):
        return Fraction(0)
    return pe_hard_formula(S, k)


def _check_condition(T, k, matching):
    if not is_partial_schedule(T) or not _supported(T, matching) or 2 * len(T) > k:
        raise ValueError("conditioning needs a partial schedule over matching configurations with |T| <= k/2")


def pe_hard_cond(T, S, k: int, matching) -> Fraction:
    """Value of ``y_S`` under the pseudoexpectation conditioned on ``y_T``."""
    T, S = frozenset(T), frozenset(S)
    _check_condition(T, k, matching)
    if not is_partial_schedule(S) or not _supported(S, matching):
        return Fraction(0)
    if machines_of(S) & machines_of(T) or 2 * (len(T) + len(S)) > k:
        return Fraction(0)
    if any(not 1 <= i <= 3 * k for i in machines_of(S)):
        return Fraction(0)
    value = 1 / lower_factorial(3 * k - len(T), len(S))
    for C, d in profile_of(S).items():
        value *= lower_factorial(_half(k) - config_degree(T, C), d)
    return value


def eval_cond(T, poly: SquareFreePoly, k: int, matching, cond=pe_hard_cond) -> Fraction:
    return sum((c * cond(T, mono, k, matching) for mono, c in poly.items()), Fraction(0))


def _arrangements(gamma):
    """Distinct sequences with the multiset of configurations given by ``gamma``."""
    items = []
    for C, n in canonical_profile(gamma):
        items += [C] * n
    seen = set()
    for perm in itertools.permutations(items):
        if perm not in seen:
            seen.add(perm)
            yield perm


def extensions(T, gamma, m: int) -> list:
    """All partial schedules in profile ``gamma`` over the machines not used by T."""
    T = frozenset(T)
    size = norm(gamma)
    free = [i for i in range(1, m + 1) if i not in machines_of(T)]
    if size > len(free):
        raise ValueError("profile does not fit on the free machines")
    arrangements = list(_arrangements(gamma))
    out = []
    for domain in itertools.combinations(free, size):
        for arr in arrangements:
            out.append(frozenset(zip(domain, arr)))
    return sorted(out, key=lambda A: sorted((i, str(C)) for i, C in A))


def count_extensions(T, gamma, m: int) -> int:
    n = norm(gamma)
    free = m - len(machines_of(T))
    count = factorial(free) // (factorial(free - n)) if n <= free else 0
    for c in gamma.values():
        count //= factorial(c)
    return count


def b_poly(T, gamma, m: int) -> SquareFreePoly:
    return SquareFreePoly({A: 1 for A in extensions(T, gamma, m)})


def pe_b(T, gamma, k: int, matching) -> Fraction:
    """Closed form of the conditional value of the extension polynomial."""
    if any(n and C not in matching for C, n in gamma.items()):
        return Fraction(0)
    value = Fraction(1)
    for C, n in gamma.items():
        value *= lower_factorial(_half(k) - config_degree(T, C), n) / factorial(n)
    return value


def profiles_up_to(configurations, size: int) -> list:
    """Every profile over ``configurations`` with total at most ``size``."""
    configurations = sorted(configurations)
    out = []
    for n in range(size + 1):
        for combo in itertools.combinations_with_replacement(configurations, n):
            gamma: dict = {}
            for C in combo:
                gamma[C] = gamma.get(C, 0) + 1
            out.append(gamma)
    return out


def hard_pseudoexpectation(k: int, matching, level: int) -> Pseudoexpectation:
    """The explicit map materialized on all matching-configuration monomials of degree <= level."""
    m = 3 * k
    ground = [(i, C) for i in range(1, m + 1) for C in sorted(matching)]
    values = {frozenset(): Fraction(1)}
    for size in range(1, min(level, k // 2) + 1):
        for domain in itertools.combinations(range(1, m + 1), size):
            for choice in itertools.product(sorted(matching), repeat=size):
                S = frozenset(zip(domain, choice))
                values[S] = pe_hard(S, k, matching)
    return Pseudoexpectation(values, level, ground)

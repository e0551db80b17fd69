"""Exact sweeps over the conditioning identities, pseudoindependence and Chu-Vandermonde."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb, factorial

from ..formulations import build_clp
from ..lift import verify_sa_pe
from ..rational import Fraction, format_fraction, lower_factorial
from .hard_instance import gen_hard_instance
from .pseudo import (
    canonical_profile,
    extensions,
    hard_pseudoexpectation,
    machines_of,
    norm,
    pe_b,
    pe_hard,
    pe_hard_cond,
    profiles_up_to,
)


@dataclass
class SweepReport:
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, ok: bool, message):
        self.checked += 1
        if not ok:
            self.violations.append(message() if callable(message) else message)

    def merge(self, other: "SweepReport"):
        self.violations += other.violations
        self.checked += other.checked

    def report(self, title: str = "sweep") -> str:
        lines = [f"{title}: {self.checked} checks, {len(self.violations)} violations"]
        lines += [f"  {v}" for v in self.violations[:20]]
        return "\n".join(lines) + "\n"


def _fmt(S) -> str:
    return "{" + ",".join(f"({i},{C})" for i, C in sorted(S, key=lambda p: (p[0], str(p[1])))) + "}"


def partial_schedules(machines, configurations, max_size: int) -> list:
    """Every partial schedule over ``machines`` with at most ``max_size`` pairs."""
    machines = sorted(machines)
    configurations = sorted(configurations)
    out = []
    for size in range(max_size + 1):
        for domain in itertools.combinations(machines, size):
            for choice in itertools.product(configurations, repeat=size):
                out.append(frozenset(zip(domain, choice)))
    return out


def check_conditioning(k: int, matching, max_t: int = 1, max_r: int = 1, max_s: int = 1,
                       max_gamma: int = 2, pool: int | None = None, samples: int | None = None,
                       seed: int = 0, cond=pe_hard_cond, base=pe_hard) -> SweepReport:
    """Verify the three conditioning identities on partial schedules over the
    first ``pool`` machines (every triple is a relabelling of one of these, and
    the map is symmetric under machine permutations).

    (a) E[y_T y_S] = E_T[y_S] E[y_T]
    (b) E_T[y_R y_S] = E_T[y_R] E_{T+R}[y_S]
    (c) E_T[B_{T,gamma}] equals its closed form

    With ``samples`` set, that many random triples are drawn instead of the full sweep.
    """
    m = 3 * k
    pool = min(m, pool if pool is not None else max_t + max_r + max_s)
    report = SweepReport()
    small = lambda S: 2 * len(S) <= k
    Ts = [T for T in partial_schedules(range(1, pool + 1), matching, max_t) if small(T)]
    Rs = partial_schedules(range(1, pool + 1), matching, max_r)
    Ss = partial_schedules(range(1, pool + 1), matching, max_s)
    rng = random.Random(seed)

    def pairs():
        if samples is None:
            return itertools.product(Ts, Ss)
        return ((rng.choice(Ts), rng.choice(Ss)) for _ in range(samples))

    for T, S in pairs():
        if T & S:
            continue
        lhs = base(T | S, k, matching)
        rhs = cond(T, S, k, matching) * base(T, k, matching)
        report.add(lhs == rhs, lambda: f"(a) T={_fmt(T)} S={_fmt(S)}: {format_fraction(lhs)} != {format_fraction(rhs)}")

    def triples():
        if samples is None:
            return itertools.product(Ts, Rs, Ss)
        return ((rng.choice(Ts), rng.choice(Rs), rng.choice(Ss)) for _ in range(samples))

    for T, R, S in triples():
        if R & S or T & (R | S):
            continue
        lhs = cond(T, R | S, k, matching)
        first = cond(T, R, k, matching)
        rhs = first * cond(T | R, S, k, matching) if first else Fraction(0)
        report.add(lhs == rhs, lambda: f"(b) T={_fmt(T)} R={_fmt(R)} S={_fmt(S)}: {format_fraction(lhs)} != {format_fraction(rhs)}")

    for T in Ts:
        for gamma in profiles_up_to(matching, max_gamma):
            if 2 * (len(T) + norm(gamma)) > k:
                continue
            lhs = sum((cond(T, A, k, matching) for A in extensions(T, gamma, m)), Fraction(0))
            rhs = pe_b(T, gamma, k, matching)
            report.add(lhs == rhs, lambda: f"(c) T={_fmt(T)} gamma={canonical_profile(gamma)}: {format_fraction(lhs)} != {format_fraction(rhs)}")
    return report


def cond_of_product(T, gamma, mu, k: int, matching, cond=pe_hard_cond) -> Fraction:
    """E_T[B_{T,gamma} B_{T,mu}] by expanding both sums (y_A y_B = y_{A u B})."""
    m = 3 * k
    Fg = extensions(T, gamma, m)
    Fm = extensions(T, mu, m)
    return sum((cond(T, A | B, k, matching) for A in Fg for B in Fm), Fraction(0))


def cond_of_b(T, gamma, k: int, matching, cond=pe_hard_cond) -> Fraction:
    return sum((cond(T, A, k, matching) for A in extensions(T, gamma, 3 * k)), Fraction(0))


def _restrict(gamma, keep) -> dict:
    return {C: n for C, n in gamma.items() if C in keep and n}


def check_pseudoindependence(k: int, T, gamma, mu, matching, cond=pe_hard_cond) -> bool:
    """E_T[B_gamma B_mu] = E_T[B_gamma] E_T[B_mu], both sides expanded by brute force,
    plus the single-configuration and disjoint-support special cases built from gamma, mu."""
    T = frozenset(T)
    if 2 * (len(T) + norm(gamma) + norm(mu)) > k:
        raise ValueError("need |T| + |gamma| + |mu| <= k/2")

    def holds(g, h):
        return cond_of_product(T, g, h, k, matching, cond) == cond_of_b(T, g, k, matching, cond) * cond_of_b(T, h, k, matching, cond)

    if not holds(gamma, mu):
        return False
    for C in set(gamma) | set(mu):
        g, h = _restrict(gamma, {C}), _restrict(mu, {C})
        if (g or h) and (g, h) != (gamma, mu) and not holds(g, h):
            return False
    only_gamma = _restrict(gamma, set(gamma) - set(mu))
    if only_gamma and mu and only_gamma != gamma and not holds(only_gamma, mu):
        return False
    return True


def pseudoindependence_sweep(k: int, matching, total: int = 3, check=check_pseudoindependence) -> SweepReport:
    """All (T, gamma, mu) with |T| + |gamma| + |mu| <= min(total, floor(k/2)), the
    range where the identity is claimed; T is placed on the lowest machines (the
    map is symmetric under machine permutations)."""
    report = SweepReport()
    total = min(total, k // 2)
    for t in range(total + 1):
        for T in partial_schedules(range(1, t + 1), matching, t):
            if len(T) != t:
                continue
            for gamma in profiles_up_to(matching, total - t):
                for mu in profiles_up_to(matching, total - t - norm(gamma)):
                    if canonical_profile(mu) < canonical_profile(gamma):
                        continue  # symmetric in gamma and mu
                    ok = check(k, T, gamma, mu, matching)
                    report.add(ok, lambda: f"T={_fmt(T)} gamma={canonical_profile(gamma)} mu={canonical_profile(mu)}")
    return report


def chu_vandermonde_check(a: int, b: int, x) -> bool:
    """sum_{w=0}^{a} (1/w!) C(b, a-w) (x-b)_w == (1/a!) (x)_a."""
    if not 0 <= a <= b:
        raise ValueError("need 0 <= a <= b")
    x = Fraction(x)
    lhs = sum((Fraction(comb(b, a - w), factorial(w)) * lower_factorial(x - b, w) for w in range(a + 1)), Fraction(0))
    return lhs == lower_factorial(x, a) / factorial(a)


def chu_vandermonde_sweep(max_ab: int = 6, xs=None) -> SweepReport:
    xs = xs if xs is not None else [Fraction(v) for v in range(-2, 8)] + [Fraction(3, 2)]
    report = SweepReport()
    for b in range(max_ab + 1):
        for a in range(b + 1):
            for x in xs:
                report.add(chu_vandermonde_check(a, b, x), f"a={a} b={b} x={format_fraction(x)}")
    return report


def symmetry_check(k: int, matching, S, permutations: int = 50, seed: int = 0) -> bool:
    """pe_hard is unchanged under random relabellings of the machines."""
    rng = random.Random(seed)
    m = 3 * k
    value = pe_hard(S, k, matching)
    for _ in range(permutations):
        perm = list(range(1, m + 1))
        rng.shuffle(perm)
        image = frozenset((perm[i - 1], C) for i, C in S)
        if pe_hard(image, k, matching) != value:
            return False
    return True


def matching_clp(hi):
    """Configuration LP of the hard instance with only the matching configurations as columns."""
    return build_clp(hi.instance, hi.T, configurations=hi.matching_configurations)


def verify_hard_sa(k: int, level: int, perturb=None, complete: bool = True):
    """Check the explicit map against the degree-``level`` SA lift of the configuration
    LP restricted to matching configurations (other columns carry value 0).

    ``perturb`` is an optional ``(S, delta)`` added to one entry, for negative tests.
    """
    if level > k // 2:
        raise ValueError("level must be at most floor(k/2)")
    hi = gen_hard_instance(k)
    lp = matching_clp(hi)
    pe = hard_pseudoexpectation(k, hi.matching_configurations, level)
    if perturb is not None:
        pe = pe.perturbed(*perturb)
    return verify_sa_pe(pe, lp, level, complete=complete)

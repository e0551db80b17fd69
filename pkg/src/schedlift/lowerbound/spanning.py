"""Spanning sets for hook tableaux and the symmetry-reduced moment blocks."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from ..exceptions import MatrixTooLarge
from ..linalg import PsdReport, ldl_psd, quadratic_form, solve_linear
from ..rational import Fraction
from ..ring import SquareFreePoly, equal_mod_sched, symmetrize_row_group
from .pseudo import HookTableau, b_poly, canonical_profile, extensions, pe_b, pe_hard, profiles_up_to

DEFAULT_BLOCK_BUDGET = 250_000  # matrix entries


def partitions_in_lambda(m: int, level: int) -> list:
    """Partitions of m that are lexicographically >= (m - level, 1, ..., 1)."""
    out = []

    def parts(n, largest):
        if n == 0:
            yield ()
            return
        for p in range(min(n, largest), 0, -1):
            for rest in parts(n - p, p):
                yield (p,) + rest

    for first in range(m, max(m - level, 1) - 1, -1):
        for rest in parts(m - first, first):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class Descriptor:
    T: frozenset  # partial schedule with domain the tail
    gamma: tuple  # canonical profile

    @property
    def profile(self) -> dict:
        return dict(self.gamma)


def spanning_set(lambda_1: int, level: int, k: int, configurations) -> list:
    """Descriptors (T, gamma): T a map tail -> configurations, |gamma| <= level."""
    tab = HookTableau(lambda_1, 3 * k)
    if not tab.in_lambda(level):
        raise ValueError("need 3k - lambda_1 <= level")
    return _spanning(tab, level, configurations)


def _spanning(tab: HookTableau, level: int, configurations) -> list:
    configurations = sorted(configurations)
    out = []
    for choice in itertools.product(configurations, repeat=len(tab.tail)):
        T = frozenset(zip(tab.tail, choice))
        for gamma in profiles_up_to(configurations, level):
            out.append(Descriptor(T, canonical_profile(gamma)))
    return out


def spanning_polynomial(d: Descriptor, m: int) -> SquareFreePoly:
    return SquareFreePoly.monomial(d.T) * b_poly(d.T, d.profile, m)


def _evaluate_on_schedule(poly: SquareFreePoly, point) -> Fraction:
    return sum((c for mono, c in poly.items() if all(point[i - 1] == C for i, C in mono)), Fraction(0))


@dataclass
class SpanReport:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)


def check_span(m: int, level: int, lambda_1: int, configurations) -> SpanReport:
    """Every sym_hook(y_S) with |S| = level is a rational combination of the spanning
    polynomials modulo the scheduling ideal (solved exactly, then re-verified)."""
    tab = HookTableau(lambda_1, m)
    configurations = sorted(configurations)
    descriptors = _spanning(tab, level, configurations)
    polys = [spanning_polynomial(d, m) for d in descriptors]
    points = list(itertools.product(configurations, repeat=m))
    columns = [[_evaluate_on_schedule(P, pt) for pt in points] for P in polys]
    report = SpanReport(True, 0)
    for domain in itertools.combinations(range(1, m + 1), level):
        for choice in itertools.product(configurations, repeat=level):
            S = frozenset(zip(domain, choice))
            target = symmetrize_row_group(SquareFreePoly.monomial(S), tab.row)
            rows = [
                ({u: columns[u][n] for u in range(len(polys)) if columns[u][n]}, _evaluate_on_schedule(target, pt))
                for n, pt in enumerate(points)
            ]
            sol = solve_linear(rows, range(len(polys)))
            report.checked += 1
            combo = None
            if sol is not None:
                combo = SquareFreePoly()
                for u, c in sol.items():
                    if c:
                        combo = combo + polys[u] * SquareFreePoly.constant(c)
            if combo is None or not equal_mod_sched(combo, target, m, configurations):
                report.ok = False
                report.failures.append(S)
    return report


@dataclass
class MomentBlock:
    k: int
    level: int
    lambda_1: int
    descriptors: list
    matrix: list
    matching: list
    verified_entries: int = 0

    def blocks(self) -> dict:
        """Diagonal blocks keyed by T, as lists of descriptor indices."""
        out: dict = {}
        for n, d in enumerate(self.descriptors):
            out.setdefault(d.T, []).append(n)
        return out

    def submatrix(self, idx) -> list:
        return [[self.matrix[a][b] for b in idx] for a in idx]


def brute_force_entry(a: Descriptor, b: Descriptor, k: int, matching) -> Fraction:
    """pe_hard(y_T y_S B_{T,gamma} B_{S,mu}) by expanding every product."""
    m = 3 * k
    base = a.T | b.T
    total = Fraction(0)
    for A in extensions(a.T, a.profile, m):
        for B in extensions(b.T, b.profile, m):
            total += pe_hard(base | A | B, k, matching)
    return total


def moment_block(lambda_1: int, level: int, k: int, matching, budget: int = DEFAULT_BLOCK_BUDGET,
                 verify: int = 10, seed: int = 0) -> MomentBlock:
    """Matrix indexed by the spanning descriptors.

    Entries use the factorization: zero when T != S, otherwise
    pe_hard(y_T) * pe_b(T, gamma) * pe_b(T, mu). ``verify`` sampled entries
    (always including one off-diagonal pair when there is one) are recomputed by
    brute-force expansion before the matrix is returned.
    """
    descriptors = spanning_set(lambda_1, level, k, matching)
    n = len(descriptors)
    if n * n > budget:
        raise MatrixTooLarge(f"{n}x{n} block exceeds {budget} entries")
    weight = {d.T: pe_hard(d.T, k, matching) for d in descriptors}
    vec = [pe_b(d.T, d.profile, k, matching) for d in descriptors]
    matrix = [
        [weight[a.T] * vec[i] * vec[j] if a.T == b.T else Fraction(0) for j, b in enumerate(descriptors)]
        for i, a in enumerate(descriptors)
    ]
    rng = random.Random(seed)
    sample = [(rng.randrange(n), rng.randrange(n)) for _ in range(verify)]
    off = [(i, j) for i in range(n) for j in range(n) if descriptors[i].T != descriptors[j].T]
    if off and verify:
        sample.append(rng.choice(off))
    for i, j in sample:
        direct = brute_force_entry(descriptors[i], descriptors[j], k, matching)
        if direct != matrix[i][j]:
            raise AssertionError(f"factorized entry ({i},{j}) = {matrix[i][j]} but expansion gives {direct}")
    return MomentBlock(k, level, lambda_1, descriptors, matrix, list(matching), len(sample))


@dataclass
class BlockCheck:
    psd: bool
    reports: list  # PsdReport per diagonal block (or one for a raw matrix)
    identity_checks: int = 0
    identity_ok: bool = True

    def __bool__(self):
        return self.psd and self.identity_ok


def check_block_psd(block, thetas: int = 20, seed: int = 0) -> BlockCheck:
    """Exact PSD test of a moment block (per diagonal block when the structure is
    known) plus the rank-one identity
    <M, theta theta^T> = sum_T pe_hard(y_T) (sum_gamma pe_b(T,gamma) theta_{T,gamma})^2
    for ``thetas`` random rational vectors."""
    if not isinstance(block, MomentBlock):
        report = ldl_psd(block)
        return BlockCheck(report.psd, [report])
    reports = [ldl_psd(block.submatrix(idx)) for idx in block.blocks().values()]
    result = BlockCheck(all(r.psd for r in reports), reports)
    for r in reports:
        if not r.psd:
            return result
    # off-diagonal blocks must vanish for the per-block test to be the whole story
    groups = block.blocks()
    for T1, idx1 in groups.items():
        for T2, idx2 in groups.items():
            if T1 != T2 and any(block.matrix[a][b] for a in idx1 for b in idx2):
                result.psd = False
                result.reports.append(PsdReport(False, reason="nonzero entry between different T"))
                return result
    rng = random.Random(seed)
    for _ in range(thetas):
        theta = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in block.descriptors]
        lhs = quadratic_form(block.matrix, theta)
        rhs = Fraction(0)
        for T, idx in groups.items():
            inner = sum(
                (pe_b(block.descriptors[a].T, block.descriptors[a].profile, block.k, block.matching) * theta[a] for a in idx),
                Fraction(0),
            )
            rhs += pe_hard(T, block.k, block.matching) * inner * inner
        result.identity_checks += 1
        if lhs != rhs:
            result.identity_ok = False
    return result

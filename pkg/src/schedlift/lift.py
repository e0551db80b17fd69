"""Sherali-Adams lifts, pseudoexpectations and conditioning.

Multipliers are ``phi_{S,R} = prod_{e in S} x_e prod_{e in R} (1 - x_e)`` for
disjoint ``S, R`` with ``|S u R| <= degree``. A base constraint ``g`` is
multiplied by ``phi_{S,R}`` whenever the square-free product has degree at most
``degree``. On 0/1 points ``phi_{S,R} x_e`` is ``phi_{S,R}`` for ``e`` in S and
0 for ``e`` in R, so with ``U = S u R`` and ``g = sum_e a_e x_e - b``::

    phi_{S,R} g = (sum_{e in S} a_e - b) phi_{S,R} + sum_{e not in U} a_e phi_{S+e,R}

which gives both the expansion and its exact degree without multiplying
polynomials: ``|U| + 1`` if g has support outside U, else ``|U|`` (or the
product vanishes).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from math import comb

from .exceptions import (
    DegreeExceeded,
    DegreeExhausted,
    InfeasiblePoint,
    LiftExplosion,
    MatrixTooLarge,
    ZeroMass,
)
from .exact_lp import feasible
from .linalg import ldl_psd
from .lp import EQ, GE, LE, RationalLP
from .rational import Fraction, as_fraction, format_fraction, parse_fraction
from .ring import SquareFreePoly

DEFAULT_LIFT_BUDGET = 2_000_000
DEFAULT_MOMENT_BUDGET = 5_000


# ---------------------------------------------------------------------------
# base constraints as affine forms


@dataclass(frozen=True)
class AffineConstraint:
    """``sum a_e x_e - b`` compared with 0 (``>=`` or ``==``)."""

    coeffs: tuple  # ((var, a), ...)
    const: Fraction  # the "-b" part
    rel: str
    label: object

    @property
    def support(self) -> frozenset:
        return frozenset(v for v, _ in self.coeffs)

    def poly(self) -> SquareFreePoly:
        terms = {frozenset([v]): a for v, a in self.coeffs}
        terms[frozenset()] = terms.get(frozenset(), 0) + self.const
        return SquareFreePoly(terms)


def base_constraints(base: RationalLP) -> list:
    out = []
    for idx, row in enumerate(base.rows):
        label = row.label if row.label is not None else ("row", idx)
        if row.rel == LE:
            out.append(AffineConstraint(tuple((v, -a) for v, a in row.coeffs), row.rhs, GE, label))
        else:
            out.append(AffineConstraint(row.coeffs, -row.rhs, row.rel, label))
    for v in base.variables:
        lo, hi = base.bounds[v]
        # [0, 1] is implied by the box rows; any tighter bound becomes a constraint.
        if lo is not None and lo != 0:
            out.append(AffineConstraint(((v, Fraction(1)),), -lo, GE, ("lower", v)))
        if hi is not None and hi != 1:
            out.append(AffineConstraint(((v, Fraction(-1)),), hi, GE, ("upper", v)))
    return out


def phi(S, R) -> SquareFreePoly:
    """``prod_{S} x * prod_{R} (1 - x)`` expanded."""
    S, R = frozenset(S), tuple(R)
    terms = {}
    for k in range(len(R) + 1):
        for V in itertools.combinations(R, k):
            terms[S | frozenset(V)] = (-1) ** k
    return SquareFreePoly(terms)


def _phi_terms(S, R, scale, out):
    for k in range(len(R) + 1):
        sign = scale if k % 2 == 0 else -scale
        for V in itertools.combinations(R, k):
            key = S.union(V)
            out[key] = out.get(key, 0) + sign


def product_terms(con: AffineConstraint, S: frozenset, R: tuple) -> dict:
    """Square-free expansion of ``phi_{S,R} * g`` as subset -> coefficient."""
    U = S.union(R)
    c0 = con.const + sum((a for v, a in con.coeffs if v in S), Fraction(0))
    out: dict = {}
    if c0:
        _phi_terms(S, R, c0, out)
    for v, a in con.coeffs:
        if v not in U:
            _phi_terms(S | {v}, R, a, out)
    return {k: c for k, c in out.items() if c}


def product_degree(con: AffineConstraint, U: frozenset, S: frozenset):
    """Degree of ``phi_{S,R} g`` (``None`` when the product is identically zero)."""
    if any(v not in U for v, _ in con.coeffs):
        return len(U) + 1
    c0 = con.const + sum((a for v, a in con.coeffs if v in S), Fraction(0))
    return len(U) if c0 else None


# ---------------------------------------------------------------------------
# row generation


@dataclass(frozen=True)
class LiftRow:
    label: object  # base constraint label, or "box"
    S: frozenset
    R: frozenset
    rel: str
    terms: dict


def _subsets_up_to(ground, k):
    for size in range(k + 1):
        for U in itertools.combinations(ground, size):
            yield U


def _splits(U):
    """All (S, R) with S u R = U, S n R = empty."""
    for mask in range(1 << len(U)):
        S = frozenset(U[i] for i in range(len(U)) if mask >> i & 1)
        R = tuple(U[i] for i in range(len(U)) if not mask >> i & 1)
        yield S, R


def _constraint_unions(con, ground, degree, complete):
    """Supports U whose split rows are kept for ``con``."""
    P = con.support
    n = len(ground)
    if complete:
        for U in _subsets_up_to(ground, degree - 1):
            yield U
        if len(P) <= degree:
            rest = [e for e in ground if e not in P]
            for W in itertools.combinations(rest, degree - len(P)):
                U = frozenset(P) | frozenset(W)
                if len(U) == degree:
                    yield tuple(e for e in ground if e in U)
        return
    # Row (S, R) is implied by its two children (S+e, R) and (S, R+e) whenever
    # some e outside U keeps both children admissible; keep only the others.
    if len(P) <= degree:
        rest = [e for e in ground if e not in P]
        for W in itertools.combinations(rest, degree - len(P)):
            U = frozenset(P) | frozenset(W)
            yield tuple(e for e in ground if e in U)
    if degree >= 1:
        for U in itertools.combinations(ground, degree - 1):
            missing = len(P - frozenset(U))
            if missing >= 2 or len(U) == n:
                yield U


def _box_unions(ground, degree, complete):
    if complete:
        yield from _subsets_up_to(ground, degree)
    else:
        yield from itertools.combinations(ground, min(degree, len(ground)))


def count_lift_rows(base: RationalLP, degree: int, complete: bool = True) -> int:
    ground = tuple(base.variables)
    total = sum(2 ** len(U) for U in _box_unions(ground, degree, complete))
    for con in base_constraints(base):
        total += sum(2 ** len(U) for U in _constraint_unions(con, ground, degree, complete))
    return total


def lift_rows(base: RationalLP, degree: int, complete: bool = True):
    """Yield every SA row of the degree-``degree`` lift as a ``LiftRow``."""
    ground = tuple(base.variables)
    for U in _box_unions(ground, degree, complete):
        for S, R in _splits(U):
            terms: dict = {}
            _phi_terms(S, R, Fraction(1), terms)
            yield LiftRow("box", S, frozenset(R), GE, terms)
    for con in base_constraints(base):
        for U in _constraint_unions(con, ground, degree, complete):
            Uset = frozenset(U)
            for S, R in _splits(U):
                deg = product_degree(con, Uset, S)
                if deg is None or deg > degree:
                    continue
                yield LiftRow(con.label, S, frozenset(R), con.rel, product_terms(con, S, R))


# ---------------------------------------------------------------------------
# lifted LP


@dataclass
class LiftedLP:
    base: RationalLP
    degree: int
    lp: RationalLP
    complete: bool
    ground: tuple

    def solve(self, method="auto"):
        return feasible(self.lp, method)

    @property
    def num_lift_variables(self) -> int:
        return len(self.lp.variables)


def subset_order(ground):
    index = {v: k for k, v in enumerate(ground)}
    return lambda S: (len(S), sorted(index[v] for v in S))


def build_sa_lift(base: RationalLP, degree: int, budget: int = DEFAULT_LIFT_BUDGET, complete: bool = True) -> LiftedLP:
    """Degree-``degree`` Sherali-Adams lift with variables ``w_S = E[x_S]``.

    ``complete=False`` drops rows that are sums of two other rows of the lift;
    the feasible region is unchanged and the LP is much smaller at high degree.
    """
    if degree < 1:
        raise ValueError("lift degree must be at least 1")
    ground = tuple(base.variables)
    degree_eff = min(degree, len(ground))
    n_vars = sum(comb(len(ground), k) for k in range(degree_eff + 1))
    if n_vars > budget:
        raise LiftExplosion(n_vars, budget)
    n_rows = count_lift_rows(base, degree_eff, complete)
    if n_vars + n_rows > budget:
        raise LiftExplosion(n_vars + n_rows, budget)
    variables = [frozenset(U) for U in _subsets_up_to(ground, degree_eff)]
    lp = RationalLP(variables, bounds={v: (Fraction(0), Fraction(1)) for v in variables},
                    name=f"SA degree {degree} of {base.name}".strip())
    lp.add_row({frozenset(): 1}, EQ, 1, label=("normalize",))
    for row in lift_rows(base, degree_eff, complete):
        lp.add_row(row.terms, row.rel, 0, label=(row.label, row.S, row.R))
    lp.meta.update(kind="sa-lift", degree=degree)
    return LiftedLP(base, degree, lp, complete, ground)


# ---------------------------------------------------------------------------
# pseudoexpectations


class Pseudoexpectation:
    """Linear functional on square-free polynomials, known on monomials of degree <= ``degree``.

    ``values`` maps frozensets to Fractions; absent subsets are 0. ``pinned``
    records variables conditioned to 1 (a query first removes them).
    """

    def __init__(self, values, degree: int, ground=None, pinned=frozenset(), history=()):
        self._values = {frozenset(S): as_fraction(v) for S, v in values.items() if v}
        self.degree = int(degree)
        self.ground = tuple(ground) if ground is not None else None
        self.pinned = frozenset(pinned)
        self.history = tuple(history)
        if self._values.get(frozenset(), Fraction(0)) != 1:
            raise InfeasiblePoint("a pseudoexpectation must map 1 to 1")

    def value(self, S) -> Fraction:
        # pinned variables equal 1, so only the free part counts against the degree
        S = frozenset(S) - self.pinned
        if len(S) > self.degree:
            raise DegreeExceeded(f"monomial of degree {len(S)} exceeds pe degree {self.degree}")
        return self._values.get(S, Fraction(0))

    __call__ = value

    def eval(self, poly) -> Fraction:
        if not isinstance(poly, SquareFreePoly):
            poly = SquareFreePoly.constant(poly)
        if poly.degree > self.degree:
            raise DegreeExceeded(f"polynomial of degree {poly.degree} exceeds pe degree {self.degree}")
        return sum((c * self.value(m) for m, c in poly.items()), Fraction(0))

    def eval_terms(self, terms: dict) -> Fraction:
        return sum((c * self.value(S) for S, c in terms.items()), Fraction(0))

    def items(self):
        return self._values.items()

    def support(self):
        return [S for S in self._values]

    def condition(self, A) -> "Pseudoexpectation":
        A = frozenset(A)
        if not A:
            return self
        if len(A) > self.degree:
            raise DegreeExhausted(f"conditioning on {len(A)} variables needs degree {len(A)}, have {self.degree}")
        mass = self.value(A)
        if not mass:
            raise ZeroMass(f"E[x_A] = 0 for A = {sorted(map(repr, A))}")
        A_new = A - self.pinned
        new_degree = self.degree - len(A)
        out = {}
        for S, v in self._values.items():
            if A_new <= S:
                rest = S - A_new
                if len(rest) <= new_degree:
                    out[rest] = v / mass
        return Pseudoexpectation(out, new_degree, self.ground, self.pinned | A_new, self.history + (A,))

    def restrict(self, variables) -> "Pseudoexpectation":
        """Same functional on polynomials over ``variables`` only."""
        keep = frozenset(variables)
        vals = {S: v for S, v in self._values.items() if S <= keep}
        ground = tuple(v for v in self.ground if v in keep) if self.ground else None
        return Pseudoexpectation(vals, self.degree, ground, self.pinned & keep, self.history)

    def truncate(self, degree: int) -> "Pseudoexpectation":
        if degree > self.degree:
            raise DegreeExceeded("cannot raise the degree of a pseudoexpectation")
        vals = {S: v for S, v in self._values.items() if len(S) <= degree}
        return Pseudoexpectation(vals, degree, self.ground, self.pinned, self.history)

    def perturbed(self, S, delta) -> "Pseudoexpectation":
        vals = dict(self._values)
        S = frozenset(S) - self.pinned
        vals[S] = vals.get(S, Fraction(0)) + as_fraction(delta)
        return Pseudoexpectation(vals, self.degree, self.ground, self.pinned, self.history)

    def is_integral_on(self, subsets) -> bool:
        return all(self.value(S) in (0, 1) for S in subsets)

    def __repr__(self):
        return f"Pseudoexpectation(degree={self.degree}, entries={len(self._values)}, pinned={len(self.pinned)})"


def pe_from_solution(lift: LiftedLP, point: dict) -> Pseudoexpectation:
    if not lift.lp.is_feasible_point(point):
        raise InfeasiblePoint("point does not satisfy the lift exactly")
    return Pseudoexpectation({S: point[S] for S in lift.lp.variables}, lift.degree, lift.ground)


def pe_from_distribution(points, weights, degree: int, ground) -> Pseudoexpectation:
    """Moments of a probability distribution over 0/1 points (a genuine expectation)."""
    weights = [as_fraction(w) for w in weights]
    if sum(weights) != 1 or any(w < 0 for w in weights):
        raise ValueError("weights must form a probability distribution")
    ground = tuple(ground)
    values: dict = {}
    for point, w in zip(points, weights):
        ones = [e for e in ground if point.get(e, 0) == 1]
        for k in range(min(degree, len(ones)) + 1):
            for S in itertools.combinations(ones, k):
                key = frozenset(S)
                values[key] = values.get(key, 0) + w
    return Pseudoexpectation(values, degree, ground)


def pe_eval(pe: Pseudoexpectation, poly) -> Fraction:
    return pe.eval(poly)


def condition(pe: Pseudoexpectation, A) -> Pseudoexpectation:
    return pe.condition(A)


# ---------------------------------------------------------------------------
# verification


@dataclass
class Violation:
    label: object
    S: frozenset
    R: frozenset
    value: Fraction
    rel: str

    def describe(self) -> str:
        from .lp import format_variable

        return (
            f"{format_variable(self.label)} S={format_variable(self.S)} R={format_variable(self.R)} "
            f"value={format_fraction(self.value)} (needs {self.rel} 0)"
        )


@dataclass
class VerificationReport:
    violations: list = field(default_factory=list)
    checked: int = 0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def verify_sa_pe(pe: Pseudoexpectation, base: RationalLP, degree: int, complete: bool = True,
                 max_violations: int | None = None) -> VerificationReport:
    """Check SA.1-SA.4 at ``degree``; violations are returned as data."""
    if pe.degree < degree:
        raise DegreeExceeded(f"pe has degree {pe.degree} < {degree}")
    report = VerificationReport()
    if pe.value(frozenset()) != 1:
        report.violations.append(Violation("normalize", frozenset(), frozenset(), pe.value(frozenset()), EQ))
    degree_eff = min(degree, len(base.variables))
    for row in lift_rows(base, degree_eff, complete):
        report.checked += 1
        val = pe.eval_terms(row.terms)
        bad = val != 0 if row.rel == EQ else val < 0
        if bad:
            report.violations.append(Violation(row.label, row.S, row.R, val, row.rel))
            if max_violations and len(report.violations) >= max_violations:
                break
    return report


@dataclass
class SosReport:
    blocks: list = field(default_factory=list)  # (name, size, PsdReport)
    equality_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.psd for _, _, r in self.blocks) and not self.equality_violations

    def __bool__(self):
        return self.ok


def _monomials(ground, d):
    return [frozenset(U) for U in _subsets_up_to(ground, d)]


def verify_sos_pe(pe: Pseudoexpectation, base: RationalLP, degree: int,
                  budget: int = DEFAULT_MOMENT_BUDGET) -> SosReport:
    """Moment and localizing matrices PSD (exactly) plus equalities times monomials."""
    ground = tuple(base.variables)
    report = SosReport()
    half = degree // 2
    basis = _monomials(ground, half)
    if len(basis) > budget:
        raise MatrixTooLarge(f"moment matrix of size {len(basis)} exceeds budget {budget}")
    M = [[pe.value(a | b) for b in basis] for a in basis]
    report.blocks.append(("moment", len(basis), ldl_psd(M)))
    for con in base_constraints(base):
        if con.rel == EQ:
            for U in _subsets_up_to(ground, degree):
                S = frozenset(U)
                deg = len(S | con.support)
                if deg > degree:
                    continue
                val = sum(
                    (a * pe.value(S | {v}) for v, a in con.coeffs), con.const * pe.value(S)
                )
                if val:
                    report.equality_violations.append((con.label, S, val))
            continue
        loc = _monomials(ground, (degree - 1) // 2)
        if len(loc) > budget:
            raise MatrixTooLarge(f"localizing matrix of size {len(loc)} exceeds budget {budget}")
        L = [
            [sum((a * pe.value(x | y | {v}) for v, a in con.coeffs), con.const * pe.value(x | y)) for y in loc]
            for x in loc
        ]
        report.blocks.append((con.label, len(loc), ldl_psd(L)))
    return report


# ---------------------------------------------------------------------------
# dump format: one "subset<TAB>value" line per entry, canonical subset order


def dump_pe(pe: Pseudoexpectation, format_var=None) -> str:
    from .lp import format_variable

    fmt = format_var or format_variable
    header = {"degree": pe.degree, "pinned": sorted(fmt(v) for v in pe.pinned)}
    lines = ["# " + json.dumps(header, sort_keys=True)]
    entries = sorted(pe.items(), key=lambda kv: (len(kv[0]), sorted(fmt(v) for v in kv[0])))
    for S, v in entries:
        lines.append(json.dumps(sorted(fmt(x) for x in S)) + "\t" + format_fraction(v))
    return "\n".join(lines) + "\n"


def load_pe(text: str, parse_var) -> Pseudoexpectation:
    """Inverse of ``dump_pe`` given a parser from the variable text form."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = json.loads(lines[0][2:])
    values = {}
    for ln in lines[1:]:
        subset, val = ln.split("\t")
        values[frozenset(parse_var(s) for s in json.loads(subset))] = parse_fraction(val)
    return Pseudoexpectation(values, header["degree"], pinned=frozenset(parse_var(s) for s in header["pinned"]))


def random_admissible_subset(pe: Pseudoexpectation, rng: random.Random, max_size: int, candidates=None):
    """A random A with ``|A| <= min(max_size, degree)`` and positive mass, or None."""
    pool = list(candidates) if candidates is not None else [
        S for S, v in pe.items() if v > 0 and 0 < len(S) <= min(max_size, pe.degree)
    ]
    pool = [S for S in pool if len(S) <= min(max_size, pe.degree) and pe.value(S) > 0]
    if not pool:
        return None
    pool.sort(key=lambda S: sorted(map(repr, S)))
    return rng.choice(pool)

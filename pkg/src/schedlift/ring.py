"""Square-free polynomials over 0/1 variables and the scheduling variety.

A polynomial is a map from frozensets of variables to nonzero Fractions, which
is exactly the unique representative modulo the Boolean relations
``x_e^2 = x_e``. Configuration variables are pairs ``(machine, configuration)``
with 1-based machine indices; assignment variables are ``(machine, job_id)``.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping

from .exceptions import BudgetExceeded, DegreeTooLarge
from .rational import Fraction, as_fraction

DEFAULT_EVALUATION_BUDGET = 10**6


def subset_key(subset):
    """Canonical ordering of variable subsets: by size, then by sorted elements."""
    return (len(subset), sorted(map(_var_key, subset)))


def _var_key(var):
    # Variables mix ints, strings and Configurations; compare through repr of types
    # only when needed so ordering stays deterministic.
    if isinstance(var, tuple):
        return tuple(_var_key(v) for v in var)
    return (type(var).__name__, var)


class SquareFreePoly:
    """Immutable polynomial with square-free monomials."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, coeff in items:
                coeff = as_fraction(coeff)
                if coeff:
                    key = frozenset(mono)
                    clean[key] = clean.get(key, 0) + coeff
                    if not clean[key]:
                        del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def constant(cls, c) -> "SquareFreePoly":
        return cls({frozenset(): c})

    @classmethod
    def var(cls, v) -> "SquareFreePoly":
        return cls({frozenset([v]): 1})

    @classmethod
    def monomial(cls, variables, coeff=1) -> "SquareFreePoly":
        return cls({frozenset(variables): coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mono) -> Fraction:
        return self._terms.get(frozenset(mono), Fraction(0))

    @property
    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def variables(self) -> set:
        return set().union(*self._terms) if self._terms else set()

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other):
        if isinstance(other, SquareFreePoly):
            return other
        return SquareFreePoly.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return SquareFreePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SquareFreePoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, SquareFreePoly):
            c = as_fraction(other)
            return SquareFreePoly({m: c * v for m, v in self._terms.items()})
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = m1 | m2
                out[key] = out.get(key, 0) + c1 * c2
        return SquareFreePoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SquareFreePoly):
            try:
                other = SquareFreePoly.constant(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def map_variables(self, fn) -> "SquareFreePoly":
        return SquareFreePoly((frozenset(fn(v) for v in m), c) for m, c in self._terms.items())

    def evaluate(self, point) -> Fraction:
        """Evaluate at a 0/1 (or rational) point given as a mapping var -> value."""
        total = Fraction(0)
        for m, c in self._terms.items():
            term = c
            for v in m:
                term *= as_fraction(point.get(v, 0))
                if not term:
                    break
            total += term
        return total

    def __repr__(self):
        if not self._terms:
            return "SquareFreePoly(0)"
        parts = []
        for m in sorted(self._terms, key=subset_key):
            vars_ = "*".join(f"x{v}" for v in sorted(m, key=_var_key)) or "1"
            parts.append(f"{self._terms[m]}*{vars_}")
        return "SquareFreePoly(" + " + ".join(parts) + ")"


def reduce_square_free(terms) -> SquareFreePoly:
    """Collapse exponents. ``terms`` is an iterable of ``(coeff, monomial)`` where a
    monomial is either a mapping var -> exponent or an iterable of (possibly repeated) vars."""
    out = []
    for coeff, mono in terms:
        if isinstance(mono, Mapping):
            if any(e < 0 for e in mono.values()):
                raise ValueError("exponents must be nonnegative")
            support = frozenset(v for v, e in mono.items() if e > 0)
        else:
            support = frozenset(mono)
        out.append((support, coeff))
    return SquareFreePoly(out)


def is_partial_schedule(monomial) -> bool:
    machines = [i for i, _ in monomial]
    return len(machines) == len(set(machines))


def kill_non_partial(poly: SquareFreePoly, m=None, configurations=None) -> SquareFreePoly:
    """Drop monomials that put two configurations on the same machine."""
    return SquareFreePoly({mono: c for mono, c in poly.items() if is_partial_schedule(mono)})


def expand_to_degree(S, level: int, m: int, configurations) -> SquareFreePoly:
    """Sum of ``y_{S u R}`` over all R with domain H, the ``level-|S|`` lowest machines
    not touched by S. The result is congruent to ``y_S`` on the scheduling variety."""
    S = frozenset(S)
    if level > m:
        raise DegreeTooLarge(f"level {level} exceeds machine count {m}")
    if len(S) > level:
        raise DegreeTooLarge(f"|S|={len(S)} exceeds level {level}")
    used = {i for i, _ in S}
    free = [i for i in range(1, m + 1) if i not in used]
    H = free[: level - len(S)]
    out = {}
    for choice in itertools.product(list(configurations), repeat=len(H)):
        out[S | frozenset(zip(H, choice))] = 1
    return SquareFreePoly(out)


def equal_mod_sched(f: SquareFreePoly, g: SquareFreePoly, m: int, configurations,
                    budget: int = DEFAULT_EVALUATION_BUDGET) -> bool:
    """Decide ``f == g`` on every indicator vector of a map ``[m] -> configurations``."""
    configurations = list(configurations)
    count = len(configurations) ** m
    if count > budget:
        raise BudgetExceeded(f"{count} evaluation points exceed budget {budget}")
    diff = list((f - g).items())
    if not diff:
        return True
    for choice in itertools.product(configurations, repeat=m):
        total = Fraction(0)
        for mono, c in diff:
            if all(choice[i - 1] == C for i, C in mono):
                total += c
        if total:
            return False
    return True


def _as_permutation(perm):
    if isinstance(perm, Mapping):
        return lambda i: perm.get(i, i)
    seq = tuple(perm)
    return lambda i: seq[i - 1] if 1 <= i <= len(seq) else i


def apply_permutation(poly: SquareFreePoly, perm) -> SquareFreePoly:
    """Act on machine indices: ``(i, item) -> (perm(i), item)``.

    ``perm`` is a mapping or a sequence whose ``i-1`` entry is the image of machine ``i``.
    """
    sigma = _as_permutation(perm)
    return poly.map_variables(lambda v: (sigma(v[0]), v[1]))


def symmetrize(poly: SquareFreePoly, permutations) -> SquareFreePoly:
    """Average of ``sigma f`` over an explicit, nonempty list of permutations."""
    permutations = list(permutations)
    if not permutations:
        raise ValueError("need at least one permutation")
    total = SquareFreePoly()
    for perm in permutations:
        total = total + apply_permutation(poly, perm)
    return total * Fraction(1, len(permutations))


def symmetrize_row_group(poly: SquareFreePoly, row) -> SquareFreePoly:
    """Average over all permutations of the machine set ``row`` (others fixed).

    Only the images of the machines a monomial actually touches matter, so each
    monomial is averaged over injections of its row machines into ``row``
    instead of over all ``|row|!`` permutations.
    """
    row = sorted(row)
    row_set = set(row)
    out: dict = {}
    for mono, c in poly.items():
        moving = sorted({i for i, _ in mono if i in row_set})
        images = list(itertools.permutations(row, len(moving)))
        weight = c / len(images)
        for img in images:
            sigma = dict(zip(moving, img))
            key = frozenset((sigma.get(i, i), item) for i, item in mono)
            out[key] = out.get(key, 0) + weight
    return SquareFreePoly(out)

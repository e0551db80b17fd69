"""Exact-rational linear programs: the carrier for formulations and lifts."""

from __future__ import annotations

from dataclasses import dataclass, field

from .rational import Fraction, as_fraction, format_fraction

EQ, GE, LE = "==", ">=", "<="
RELATIONS = (EQ, GE, LE)


@dataclass(frozen=True)
class Row:
    coeffs: tuple  # ((var, Fraction), ...) with nonzero coefficients
    rel: str
    rhs: Fraction
    label: object = None

    def value(self, point) -> Fraction:
        return sum((c * point.get(v, 0) for v, c in self.coeffs), Fraction(0))

    def slack(self, point) -> Fraction:
        """Signed slack, nonnegative iff satisfied (for equalities, the residual)."""
        lhs = self.value(point)
        if self.rel == LE:
            return self.rhs - lhs
        return lhs - self.rhs

    def satisfied(self, point) -> bool:
        s = self.slack(point)
        return s == 0 if self.rel == EQ else s >= 0


def make_row(coeffs, rel, rhs, label=None) -> Row:
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    merged: dict = {}
    items = coeffs.items() if hasattr(coeffs, "items") else coeffs
    for v, c in items:
        merged[v] = merged.get(v, 0) + as_fraction(c)
    return Row(tuple((v, c) for v, c in merged.items() if c), rel, as_fraction(rhs), label)


@dataclass
class RationalLP:
    """Variables with bounds plus rows ``sum_j a_j x_j (rel) b``.

    Bounds are ``(lo, hi)`` with ``None`` meaning unbounded on that side.
    """

    variables: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._index = {}
        for v in self.variables:
            if v in self._index:
                raise ValueError(f"duplicate variable {v!r}")
            self._index[v] = len(self._index)
        for v in self.variables:
            self.bounds.setdefault(v, (Fraction(0), None))

    def add_variable(self, v, lo=0, hi=None):
        if v in self._index:
            raise ValueError(f"duplicate variable {v!r}")
        self._index[v] = len(self.variables)
        self.variables.append(v)
        self.bounds[v] = (None if lo is None else as_fraction(lo), None if hi is None else as_fraction(hi))

    def add_row(self, coeffs, rel, rhs, label=None) -> Row:
        row = make_row(coeffs, rel, rhs, label)
        for v, _ in row.coeffs:
            if v not in self._index:
                raise KeyError(f"row {label!r} references undeclared variable {v!r}")
        self.rows.append(row)
        return row

    def index(self, v) -> int:
        return self._index[v]

    def has_variable(self, v) -> bool:
        return v in self._index

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def copy(self, name=None) -> "RationalLP":
        return RationalLP(list(self.variables), list(self.rows), dict(self.bounds), name or self.name, dict(self.meta))

    def bound_violations(self, point) -> list:
        out = []
        for v in self.variables:
            lo, hi = self.bounds[v]
            x = point.get(v, 0)
            if (lo is not None and x < lo) or (hi is not None and x > hi):
                out.append(v)
        return out

    def violated_rows(self, point) -> list:
        return [r for r in self.rows if not r.satisfied(point)]

    def is_feasible_point(self, point) -> bool:
        return not self.bound_violations(point) and not self.violated_rows(point)

    def dump(self) -> str:
        """Human-readable listing with exact rationals; stable for golden files."""
        lines = [f"lp {self.name}".rstrip(), f"variables {len(self.variables)}"]
        for v in self.variables:
            lo, hi = self.bounds[v]
            lo_s = "-inf" if lo is None else format_fraction(lo)
            hi_s = "+inf" if hi is None else format_fraction(hi)
            lines.append(f"  {format_variable(v)} in [{lo_s}, {hi_s}]")
        lines.append(f"rows {len(self.rows)}")
        for r in self.rows:
            lhs = " ".join(
                f"{'+' if c > 0 else '-'} {format_fraction(abs(c))} {format_variable(v)}" for v, c in r.coeffs
            )
            label = f"[{format_variable(r.label)}] " if r.label is not None else ""
            lines.append(f"  {label}{lhs or '0'} {r.rel} {format_fraction(r.rhs)}")
        return "\n".join(lines) + "\n"


def format_variable(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(format_variable(x) for x in v) + ")"
    if isinstance(v, frozenset):
        from .ring import _var_key

        return "{" + ",".join(format_variable(x) for x in sorted(v, key=_var_key)) + "}"
    return str(v)

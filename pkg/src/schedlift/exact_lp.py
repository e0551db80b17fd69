"""Exact LP feasibility and optimization.

Two engines share one contract: every answer is certified with exact
rationals before it is returned.

* ``simplex``: two-phase dense tableau simplex over Fractions with Bland's
  rule. Terminates on every input; fine for small programs.
* ``highs``: the HiGHS dual simplex (through scipy) proposes a point or a
  Farkas multiplier vector in floating point; the proposal is rationalized
  and then checked exactly. Floats only ever *suggest*; acceptance is exact.
  When a proposal cannot be certified the solve falls back to the exact
  simplex (if the program is small enough) or raises ``CertificationError``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exceptions import CertificationError, Infeasible, Unbounded
from .linalg import solve_linear
from .lp import EQ, GE, LE, RationalLP
from .rational import Fraction

FEASIBLE = "FEASIBLE"
INFEASIBLE = "INFEASIBLE"

# Above this many tableau cells the exact simplex is too slow to be the default.
SIMPLEX_CELL_LIMIT = 60_000


@dataclass
class LpOutcome:
    status: str
    point: dict | None = None
    certificate: dict | None = None  # row index -> multiplier on the row in ">=" orientation
    method: str = ""
    info: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


# ---------------------------------------------------------------------------
# certificates


def farkas_violation(lp: RationalLP, certificate: dict):
    """Return ``(sup, beta)`` for a multiplier vector; it proves infeasibility iff sup < beta.

    Each row is read as ``sigma*a.x >= sigma*b`` (sigma = -1 for ``<=`` rows).
    Multipliers must be nonnegative on inequality rows. ``sup`` is the maximum of
    the combined left side over the variable box; ``None`` means unbounded.
    """
    combined: dict = {}
    beta = Fraction(0)
    for idx, lam in certificate.items():
        if not lam:
            continue
        row = lp.rows[idx]
        if row.rel != EQ and lam < 0:
            return None, beta
        sigma = -1 if row.rel == LE else 1
        for v, c in row.coeffs:
            combined[v] = combined.get(v, 0) + sigma * lam * c
        beta += sigma * lam * row.rhs
    sup = Fraction(0)
    for v, d in combined.items():
        if not d:
            continue
        lo, hi = lp.bounds[v]
        edge = hi if d > 0 else lo
        if edge is None:
            return None, beta
        sup += d * edge
    return sup, beta


def is_farkas_certificate(lp: RationalLP, certificate: dict) -> bool:
    sup, beta = farkas_violation(lp, certificate)
    return sup is not None and sup < beta


def _certify_point(lp, point):
    if not lp.is_feasible_point(point):
        raise CertificationError("solver point failed exact substitution")


def _certify_farkas(lp, cert):
    if not is_farkas_certificate(lp, cert):
        raise CertificationError("solver Farkas certificate failed exact verification")


# ---------------------------------------------------------------------------
# exact simplex


class _Standard:
    """``lp`` rewritten as ``A u (rel) b`` with ``u >= 0``."""

    def __init__(self, lp: RationalLP):
        self.lp = lp
        self.cols = []  # per column: (var, sign)
        self.var_cols: dict = {}
        self.offset: dict = {}
        bound_rows = []
        for v in lp.variables:
            lo, hi = lp.bounds[v]
            if lo is not None:
                c = self._new_col(v, 1)
                self.offset[v] = lo
                if hi is not None:
                    bound_rows.append(({c: Fraction(1)}, LE, hi - lo))
            elif hi is not None:
                self._new_col(v, -1)
                self.offset[v] = hi
            else:
                self._new_col(v, 1)
                self._new_col(v, -1)
                self.offset[v] = Fraction(0)
        self.rows = []
        for row in lp.rows:
            coeffs: dict = {}
            rhs = row.rhs
            for v, a in row.coeffs:
                rhs -= a * self.offset[v]
                for c, sign in self.var_cols[v]:
                    coeffs[c] = coeffs.get(c, 0) + sign * a
            self.rows.append(({c: a for c, a in coeffs.items() if a}, row.rel, rhs))
        self.n_orig_rows = len(self.rows)
        self.rows.extend(bound_rows)

    def _new_col(self, v, sign):
        c = len(self.cols)
        self.cols.append((v, sign))
        self.var_cols.setdefault(v, []).append((c, sign))
        return c

    def to_point(self, u) -> dict:
        point = {}
        for v in self.lp.variables:
            point[v] = self.offset[v] + sum((sign * u[c] for c, sign in self.var_cols[v]), Fraction(0))
        return point


class _Tableau:
    def __init__(self, std: _Standard):
        self.std = std
        n_u = len(std.cols)
        m = len(std.rows)
        n_slack = sum(1 for _, rel, _ in std.rows if rel != EQ)
        self.n_u = n_u
        self.art0 = n_u + n_slack
        self.ncols = self.art0 + m
        self.flip = []
        self.rows = []
        slack = n_u
        for k, (coeffs, rel, rhs) in enumerate(std.rows):
            line = [Fraction(0)] * (self.ncols + 1)
            for c, a in coeffs.items():
                line[c] = a
            if rel == GE:
                line[slack] = Fraction(-1)
                slack += 1
            elif rel == LE:
                line[slack] = Fraction(1)
                slack += 1
            line[-1] = rhs
            f = 1
            if rhs < 0:
                line = [-x for x in line]
                f = -1
            line[self.art0 + k] = Fraction(1)
            self.flip.append(f)
            self.rows.append(line)
        self.basis = [self.art0 + k for k in range(m)]

    def reduced_costs(self, cost):
        red = list(cost) + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(self.ncols + 1):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red  # last entry is -objective value

    def pivot(self, r, c, red):
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            row = [x / piv for x in row]
            self.rows[r] = row
        nz = [j for j, x in enumerate(row) if x]
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                f = other[c]
                for j in nz:
                    other[j] -= f * row[j]
        if red[c]:
            f = red[c]
            for j in nz:
                red[j] -= f * row[j]
        self.basis[r] = c

    def run(self, red, allowed):
        """Bland's rule iterations until optimal; returns False if unbounded."""
        while True:
            enter = next((j for j in range(self.ncols) if allowed[j] and red[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter, red)

    def u_values(self):
        u = [Fraction(0)] * self.n_u
        for i, b in enumerate(self.basis):
            if b < self.n_u:
                u[b] = self.rows[i][-1]
        return u

    def duals(self, red, cost):
        """Dual vector of the (sign-flipped) equality system, read off artificial columns."""
        m = len(self.rows)
        return [cost[self.art0 + k] - red[self.art0 + k] for k in range(m)]


def _phase_one(lp):
    std = _Standard(lp)
    tab = _Tableau(std)
    cost = [Fraction(0)] * tab.art0 + [Fraction(1)] * (tab.ncols - tab.art0)
    red = tab.reduced_costs(cost)
    tab.run(red, [True] * tab.ncols)
    value = -red[-1]
    return std, tab, cost, red, value


def _phase_one_certificate(lp, std, tab, cost, red):
    y = tab.duals(red, cost)
    cert = {}
    for k in range(std.n_orig_rows):
        yk = y[k] * tab.flip[k]
        row = lp.rows[k]
        lam = -yk if row.rel == LE else yk
        if lam:
            cert[k] = lam
    return cert


def simplex_feasible(lp: RationalLP) -> LpOutcome:
    std, tab, cost, red, value = _phase_one(lp)
    if value > 0:
        cert = _phase_one_certificate(lp, std, tab, cost, red)
        _certify_farkas(lp, cert)
        return LpOutcome(INFEASIBLE, certificate=cert, method="simplex")
    point = std.to_point(tab.u_values())
    _certify_point(lp, point)
    return LpOutcome(FEASIBLE, point=point, method="simplex")


def _drive_out_artificials(tab, red):
    for i, b in enumerate(tab.basis):
        if b >= tab.art0:
            row = tab.rows[i]
            col = next((j for j in range(tab.art0) if row[j]), None)
            if col is not None:
                tab.pivot(i, col, red)


def optimize(lp: RationalLP, objective: dict, sense: str = "min"):
    """Exact optimum of ``objective`` over ``lp``; returns ``(value, point)``.

    Raises ``Infeasible`` (with a Farkas certificate) or ``Unbounded``. The
    optimum is certified by an exact dual vector before it is returned.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    sign = 1 if sense == "min" else -1
    for v in objective:
        if not lp.has_variable(v):
            raise KeyError(f"objective references undeclared variable {v!r}")
    std, tab, cost1, red1, value = _phase_one(lp)
    if value > 0:
        cert = _phase_one_certificate(lp, std, tab, cost1, red1)
        _certify_farkas(lp, cert)
        raise Infeasible(certificate=cert)
    _drive_out_artificials(tab, red1)
    cost = [Fraction(0)] * tab.ncols
    constant = Fraction(0)
    for v, c in objective.items():
        c = sign * Fraction(c)
        constant += c * std.offset[v]
        for col, s in std.var_cols[v]:
            cost[col] += s * c
    red = tab.reduced_costs(cost)
    allowed = [j < tab.art0 for j in range(tab.ncols)]
    if not tab.run(red, allowed):
        raise Unbounded("objective is unbounded on the feasible region")
    u = tab.u_values()
    point = std.to_point(u)
    _certify_point(lp, point)
    primal = sum((cost[j] * u[j] for j in range(tab.n_u)), Fraction(0))
    _certify_optimal(std, tab, cost, red, primal)
    value = sign * (primal + constant)
    return value, point


def _certify_optimal(std, tab, cost, red, primal):
    """Check dual feasibility and a zero duality gap against the original data."""
    y = tab.duals(red, cost)
    y = [yk * f for yk, f in zip(y, tab.flip)]  # multipliers on rows as written in std
    colsum = [Fraction(0)] * len(std.cols)
    dual_obj = Fraction(0)
    for k, (coeffs, rel, rhs) in enumerate(std.rows):
        yk = y[k]
        if not yk:
            continue
        # slack columns force sign conditions on y
        if (rel == GE and yk < 0) or (rel == LE and yk > 0):
            raise CertificationError("dual sign condition violated")
        dual_obj += yk * rhs
        for c, a in coeffs.items():
            colsum[c] += yk * a
    for c in range(len(std.cols)):
        if cost[c] - colsum[c] < 0:
            raise CertificationError("dual feasibility violated")
    if dual_obj != primal:
        raise CertificationError("nonzero duality gap")


# ---------------------------------------------------------------------------
# HiGHS-guided search with exact certification


def _sparse_system(lp, orient_ge=False):
    import numpy as np
    from scipy.sparse import csr_matrix

    idx = {v: k for k, v in enumerate(lp.variables)}
    data = {"eq": ([], [], [], []), "ub": ([], [], [], [])}
    row_ids = {"eq": [], "ub": []}
    for r, row in enumerate(lp.rows):
        kind = "eq" if row.rel == EQ else "ub"
        sign = -1 if row.rel == GE else 1
        vals, rows_, cols, rhs = data[kind]
        k = len(rhs)
        for v, c in row.coeffs:
            vals.append(sign * float(c))
            rows_.append(k)
            cols.append(idx[v])
        rhs.append(sign * float(row.rhs))
        row_ids[kind].append(r)
    n = len(lp.variables)
    out = {}
    for kind in ("eq", "ub"):
        vals, rows_, cols, rhs = data[kind]
        if rhs:
            out[kind] = (csr_matrix((vals, (rows_, cols)), shape=(len(rhs), n)), np.array(rhs))
        else:
            out[kind] = (None, None)
    return out, row_ids


def _rationalize(x: float, denominators=(1, 2, 6, 12, 60, 840, 10**4, 10**6, 10**9)):
    for d in denominators:
        q = Fraction(x).limit_denominator(d)
        if abs(float(q) - x) <= 1e-9 * max(1.0, abs(x)):
            return q
    return Fraction(x).limit_denominator(10**12)


def _snap_point(lp, xs):
    point = {}
    for v, x in zip(lp.variables, xs):
        lo, hi = lp.bounds[v]
        if lo is not None and abs(x - float(lo)) < 1e-9:
            q = lo
        elif hi is not None and abs(x - float(hi)) < 1e-9:
            q = hi
        else:
            q = _rationalize(float(x))
        point[v] = q
    return point


def _active_set_repair(lp, xs, tol=1e-7):
    """Fix variables at bounds, treat nearly tight rows as equalities, solve exactly."""
    fixed = {}
    free = []
    for v, x in zip(lp.variables, xs):
        lo, hi = lp.bounds[v]
        if lo is not None and abs(x - float(lo)) < tol:
            fixed[v] = lo
        elif hi is not None and abs(x - float(hi)) < tol:
            fixed[v] = hi
        else:
            free.append(v)
    values = dict(zip(lp.variables, xs))
    free_set = set(free)
    system = []
    for row in lp.rows:
        act = sum(float(c) * values[v] for v, c in row.coeffs)
        if row.rel != EQ and abs(act - float(row.rhs)) > tol * max(1.0, abs(float(row.rhs))):
            continue
        rhs = row.rhs
        coeffs = {}
        for v, c in row.coeffs:
            if v in free_set:
                coeffs[v] = c
            else:
                rhs -= c * fixed[v]
        system.append((coeffs, rhs))
    sol = solve_linear(system, free)
    if sol is None:
        return None
    point = dict(fixed)
    point.update(sol)
    return point


def _highs_feasible(lp):
    import numpy as np
    from scipy.optimize import linprog

    system, _ = _sparse_system(lp)
    bounds = [
        (None if lo is None else float(lo), None if hi is None else float(hi))
        for lo, hi in (lp.bounds[v] for v in lp.variables)
    ]
    A_eq, b_eq = system["eq"]
    A_ub, b_ub = system["ub"]
    res = linprog(
        np.zeros(len(lp.variables)), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
        bounds=bounds, method="highs-ds",
    )
    return res


def _highs_farkas(lp):
    """Solve the alternative system for a multiplier vector with margin 1."""
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    idx = {v: k for k, v in enumerate(lp.variables)}
    n_rows = len(lp.rows)
    pos_vars, neg_vars = [], []
    for v in lp.variables:
        lo, hi = lp.bounds[v]
        if hi is not None:
            pos_vars.append(v)
        if lo is not None:
            neg_vars.append(v)
    n_cols = n_rows + len(pos_vars) + len(neg_vars)
    vals, ri, ci = [], [], []
    for r, row in enumerate(lp.rows):
        sigma = -1 if row.rel == LE else 1
        for v, c in row.coeffs:
            vals.append(sigma * float(c))
            ri.append(idx[v])
            ci.append(r)
    for k, v in enumerate(pos_vars):
        vals.append(-1.0)
        ri.append(idx[v])
        ci.append(n_rows + k)
    for k, v in enumerate(neg_vars):
        vals.append(1.0)
        ri.append(idx[v])
        ci.append(n_rows + len(pos_vars) + k)
    A_eq = coo_matrix((vals, (ri, ci)), shape=(len(lp.variables), n_cols)).tocsr()
    b_eq = np.zeros(len(lp.variables))
    margin = np.zeros(n_cols)
    for r, row in enumerate(lp.rows):
        sigma = -1 if row.rel == LE else 1
        margin[r] = -sigma * float(row.rhs)
    for k, v in enumerate(pos_vars):
        margin[n_rows + k] = float(lp.bounds[v][1])
    for k, v in enumerate(neg_vars):
        margin[n_rows + len(pos_vars) + k] = -float(lp.bounds[v][0])
    bounds = [(None, None) if row.rel == EQ else (0, None) for row in lp.rows]
    bounds += [(0, None)] * (len(pos_vars) + len(neg_vars))
    res = linprog(
        np.zeros(n_cols), A_ub=margin.reshape(1, -1), b_ub=np.array([-1.0]),
        A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs-ds",
    )
    if res.status != 0:
        return None
    cert = {}
    for r in range(n_rows):
        x = float(res.x[r])
        if abs(x) < 1e-12:
            continue
        q = _rationalize(x)
        if lp.rows[r].rel != EQ and q < 0:
            q = Fraction(0)
        if q:
            cert[r] = q
    return cert


def _cells(lp):
    return (len(lp.rows) + len(lp.variables)) * (2 * len(lp.variables) + 2 * len(lp.rows) + 1)


def highs_feasible(lp: RationalLP, fallback: bool = True) -> LpOutcome:
    res = _highs_feasible(lp)
    if res.status == 0:
        xs = [float(x) for x in res.x]
        point = _snap_point(lp, xs)
        if lp.is_feasible_point(point):
            return LpOutcome(FEASIBLE, point=point, method="highs+exact")
        point = _active_set_repair(lp, xs)
        if point is not None and lp.is_feasible_point(point):
            return LpOutcome(FEASIBLE, point=point, method="highs+active-set")
    cert = _highs_farkas(lp)
    if cert is not None and is_farkas_certificate(lp, cert):
        return LpOutcome(INFEASIBLE, certificate=cert, method="highs+farkas")
    if fallback and _cells(lp) <= 4 * SIMPLEX_CELL_LIMIT:
        return simplex_feasible(lp)
    raise CertificationError(
        f"could not certify HiGHS answer (status {res.status}) for an LP with "
        f"{len(lp.variables)} variables and {len(lp.rows)} rows"
    )


def feasible(lp: RationalLP, method: str = "auto") -> LpOutcome:
    """Exact feasibility verdict with a verified point or Farkas certificate."""
    if method == "auto":
        method = "simplex" if _cells(lp) <= SIMPLEX_CELL_LIMIT else "highs"
    if method == "simplex":
        return simplex_feasible(lp)
    if method == "highs":
        return highs_feasible(lp)
    raise ValueError(f"unknown method {method!r}")

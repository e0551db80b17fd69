"""Exact rational linear algebra: PSD test by symmetric elimination and linear solves."""

from __future__ import annotations

from dataclasses import dataclass

from .rational import Fraction


@dataclass
class PsdReport:
    psd: bool
    rank: int = 0
    witness: tuple | None = None  # (index, value) of a negative pivot or unmatched off-diagonal
    reason: str = ""

    def __bool__(self):
        return self.psd


def ldl_psd(matrix) -> PsdReport:
    """Decide positive semidefiniteness of a symmetric rational matrix exactly.

    Symmetric Gaussian elimination with diagonal pivoting: pick any remaining
    positive diagonal entry and eliminate. A negative diagonal entry, or a zero
    diagonal entry whose row is not zero, certifies that the matrix is not PSD.
    """
    n = len(matrix)
    A = [[Fraction(x) for x in row] for row in matrix]
    for i in range(n):
        if len(A[i]) != n:
            raise ValueError("matrix must be square")
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")
    alive = list(range(n))
    rank = 0
    while alive:
        for i in alive:
            if A[i][i] < 0:
                return PsdReport(False, rank, (i, A[i][i]), "negative pivot")
        piv = next((i for i in alive if A[i][i] > 0), None)
        if piv is None:
            for i in alive:
                for j in alive:
                    if A[i][j]:
                        return PsdReport(False, rank, (i, j), "zero pivot with nonzero row")
            break
        alive.remove(piv)
        d = A[piv][piv]
        col = {i: A[i][piv] for i in alive if A[i][piv]}
        for i, a in col.items():
            f = a / d
            row_i = A[i]
            for j, b in col.items():
                row_i[j] -= f * b
        rank += 1
    return PsdReport(True, rank)


def quadratic_form(matrix, theta) -> Fraction:
    n = len(matrix)
    total = Fraction(0)
    for i in range(n):
        if theta[i]:
            row = matrix[i]
            total += theta[i] * sum((row[j] * theta[j] for j in range(n) if theta[j]), Fraction(0))
    return total


def solve_linear(rows, unknowns):
    """Solve ``sum_u a_u x_u = b`` for sparse rows ``(dict, b)``.

    Returns one exact solution (free unknowns set to 0) or ``None`` when the
    system is inconsistent.
    """
    pivots = []
    for coeffs, rhs in rows:
        coeffs = {c: Fraction(a) for c, a in coeffs.items() if a}
        rhs = Fraction(rhs)
        for col, prow, prhs in pivots:
            f = coeffs.get(col)
            if f:
                for c, a in prow.items():
                    coeffs[c] = coeffs.get(c, 0) - f * a
                rhs -= f * prhs
                coeffs = {c: a for c, a in coeffs.items() if a}
        if not coeffs:
            if rhs:
                return None
            continue
        col = next(iter(sorted(coeffs, key=repr)))
        piv = coeffs[col]
        prow = {c: a / piv for c, a in coeffs.items()}
        prhs = rhs / piv
        updated = []
        for c2, r2, b2 in pivots:
            f = r2.get(col)
            if f:
                r2 = dict(r2)
                for c, a in prow.items():
                    r2[c] = r2.get(c, 0) - f * a
                r2 = {c: a for c, a in r2.items() if a}
                b2 -= f * prhs
            updated.append((c2, r2, b2))
        updated.append((col, prow, prhs))
        pivots = updated
    sol = {u: Fraction(0) for u in unknowns}
    for col, _, prhs in pivots:
        sol[col] = prhs
    return sol

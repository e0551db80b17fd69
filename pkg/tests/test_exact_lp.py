from fractions import Fraction

import pytest

from schedlift.exact_lp import (
    FEASIBLE,
    INFEASIBLE,
    feasible,
    highs_feasible,
    is_farkas_certificate,
    optimize,
    simplex_feasible,
)
from schedlift.exceptions import Infeasible, Unbounded
from schedlift.lp import EQ, GE, LE, RationalLP


def lp_of(rows, variables=("x",), bounds=None):
    lp = RationalLP(list(variables), bounds=dict(bounds or {}))
    for coeffs, rel, rhs in rows:
        lp.add_row(coeffs, rel, rhs)
    return lp


@pytest.mark.parametrize("solver", [simplex_feasible, highs_feasible, feasible])
def test_feasible_half(solver):
    lp = lp_of([({"x": 1}, EQ, Fraction(1, 2))], bounds={"x": (0, 1)})
    out = solver(lp)
    assert out.status == FEASIBLE and out.point["x"] == Fraction(1, 2)


@pytest.mark.parametrize("solver", [simplex_feasible, highs_feasible, feasible])
def test_infeasible_certificate(solver):
    lp = lp_of([({"x": 1}, GE, 1), ({"x": 1}, LE, 0)], bounds={"x": (None, None)})
    out = solver(lp)
    assert out.status == INFEASIBLE
    assert is_farkas_certificate(lp, out.certificate)
    assert set(out.certificate.values()) == {Fraction(1)} or len(set(out.certificate.values())) == 1


def test_optimize_textbook():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
    lp = lp_of([({"x": 1}, LE, 4), ({"y": 2}, LE, 12), ({"x": 3, "y": 2}, LE, 18)], ("x", "y"))
    value, point = optimize(lp, {"x": 3, "y": 5}, "max")
    assert value == 36 and (point["x"], point["y"]) == (2, 6)
    # min x + y, x + 2y >= 3, 2x + y >= 3 -> 2 at (1, 1)
    lp = lp_of([({"x": 1, "y": 2}, GE, 3), ({"x": 2, "y": 1}, GE, 3)], ("x", "y"))
    value, point = optimize(lp, {"x": 1, "y": 1})
    assert value == 2 and (point["x"], point["y"]) == (1, 1)
    # min x - y with x + y = 1, both in [0, 1] -> -1
    lp = lp_of([({"x": 1, "y": 1}, EQ, 1)], ("x", "y"), {"x": (0, 1), "y": (0, 1)})
    assert optimize(lp, {"x": 1, "y": -1})[0] == -1


def test_optimize_errors():
    lp = lp_of([({"x": 1}, GE, 1)])
    with pytest.raises(Unbounded):
        optimize(lp, {"x": 1}, "max")
    lp = lp_of([({"x": 1}, GE, 2)], bounds={"x": (0, 1)})
    with pytest.raises(Infeasible):
        optimize(lp, {"x": 1})


def test_deterministic():
    lp = lp_of([({"x": 1, "y": 1}, EQ, 1)], ("x", "y"), {"x": (0, 1), "y": (0, 1)})
    assert simplex_feasible(lp).point == simplex_feasible(lp).point

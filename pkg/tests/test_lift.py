import random
from fractions import Fraction

import pytest

from conftest import micro_instances
from schedlift.exceptions import DegreeExceeded, DegreeExhausted, InfeasiblePoint, LiftExplosion, ZeroMass
from schedlift.formulations import build_assign, build_assign_sym, integral_points, schedule_to_point
from schedlift.lift import (
    build_sa_lift,
    dump_pe,
    load_pe,
    pe_from_distribution,
    pe_from_solution,
    phi,
    verify_sa_pe,
    verify_sos_pe,
)
from schedlift.lp import EQ, RationalLP
from schedlift.ring import SquareFreePoly

HALF = Fraction(1, 2)


def sum_system(n, rhs):
    E = [f"x{i}" for i in range(n)]
    lp = RationalLP(E, bounds={v: (Fraction(0), Fraction(1)) for v in E})
    lp.add_row({v: 1 for v in E}, EQ, rhs)
    return lp


def test_degree_one_lift_is_base():
    base = sum_system(3, Fraction(3, 2))
    lift = build_sa_lift(base, 1)
    assert lift.lp.num_variables == 4
    out = lift.solve()
    assert out.feasible
    pe = pe_from_solution(lift, out.point)
    assert base.is_feasible_point({v: pe.value({v}) for v in base.variables})


def test_half_system_degree_two_is_exact_on_two_variables():
    out = build_sa_lift(sum_system(2, Fraction(3, 2)), 2).solve()
    assert not out.feasible


def test_single_variable_half():
    # one variable: degree 1 is already the exact hull, and x = 1/2 has no 0/1 point
    assert not build_sa_lift(sum_system(1, HALF), 1).solve().feasible
    assert build_sa_lift(sum_system(2, HALF), 1).solve().feasible


def test_pe_eval_examples():
    base = sum_system(3, Fraction(3, 2))
    lift = build_sa_lift(base, 2)
    pe = pe_from_solution(lift, lift.solve().point)
    assert pe.eval(1) == 1
    row = SquareFreePoly({frozenset({v}): 1 for v in base.variables})
    assert pe.eval(row) == Fraction(3, 2)
    for S, R in [({"x0"}, {"x1"}), (set(), {"x0", "x2"}), ({"x1", "x2"}, set())]:
        assert pe.eval(phi(frozenset(S), tuple(R))) >= 0
    with pytest.raises(DegreeExceeded):
        pe.value({"x0", "x1", "x2"})


def test_pe_from_solution_rejects_bad_point():
    lift = build_sa_lift(sum_system(1, HALF), 1)
    with pytest.raises(InfeasiblePoint):
        pe_from_solution(lift, {frozenset(): 1, frozenset({"x0"}): 1})


def test_lift_explosion():
    with pytest.raises(LiftExplosion):
        build_sa_lift(sum_system(12, 3), 6, budget=1000)


def test_condition_examples():
    base = sum_system(3, Fraction(3, 2))
    lift = build_sa_lift(base, 2)
    pe = pe_from_solution(lift, lift.solve().point)
    assert pe.condition(frozenset()) is pe
    a = frozenset({"x0"})
    cond = pe.condition(a)
    assert cond.degree == 1 and cond.value(a) == 1
    assert cond.value({"x1"}) == pe.value({"x0", "x1"}) / pe.value(a)
    both = pe_from_distribution([{"x0": 1, "x1": 1}], [1], 2, base.variables).condition({"x0", "x1"})
    assert both.degree == 0 and both.value({"x0", "x1"}) == 1
    zero = pe_from_distribution([{"x0": 1}], [1], 2, base.variables)
    with pytest.raises(ZeroMass):
        zero.condition({"x1"})
    with pytest.raises(DegreeExhausted):
        zero.condition({"x0", "x1", "x2"})


def test_verify_sa_pe_and_mutation():
    base = sum_system(3, Fraction(3, 2))
    lift = build_sa_lift(base, 2)
    pe = pe_from_solution(lift, lift.solve().point)
    assert verify_sa_pe(pe, base, 2).ok
    bad = pe.perturbed({"x0", "x1"}, Fraction(1, 7))
    assert not verify_sa_pe(bad, base, 2).ok


def test_nesting_truncation():
    base = sum_system(4, 2)
    lift = build_sa_lift(base, 3)
    pe = pe_from_solution(lift, lift.solve().point)
    for d in (1, 2):
        assert verify_sa_pe(pe.truncate(d), base, d).ok


def test_sos_integral_point_and_mutation():
    base = sum_system(3, 1)
    pe = pe_from_distribution([{"x0": 1}], [1], 3, base.variables)
    assert verify_sos_pe(pe, base, 3).ok
    mixed = pe_from_distribution([{"x0": 1}, {"x1": 1}], [HALF, HALF], 2, base.variables)
    assert verify_sos_pe(mixed, base, 2).ok
    bad = mixed.perturbed({"x0", "x1"}, 1)
    report = verify_sos_pe(bad, base, 2)
    assert not report.ok


def _hull_oracle(inst, T):
    """Integral schedules of assign(T) as 0/1 points (the exact hull's vertices)."""
    return [schedule_to_point(a, inst) for a in integral_points(build_assign(inst, T), inst)]


@pytest.mark.parametrize("inst", micro_instances(6, seed=3, max_vars=6), ids=str)
def test_full_degree_lift_matches_hull(inst):
    from schedlift.exact_lp import optimize

    T = max(p for _, p in inst.jobs) + 1
    base = build_assign(inst, T)
    lift = build_sa_lift(base, len(base.variables), complete=False)
    verts = _hull_oracle(inst, T)
    assert lift.solve().feasible == bool(verts)
    if not verts:
        return
    rng = random.Random(0)
    for _ in range(3):
        c = {v: rng.randint(-3, 3) for v in base.variables}
        lifted = {frozenset({v}): a for v, a in c.items()}
        value, _ = optimize(lift.lp, lifted, "max")
        assert value == max(sum(a * x[v] for v, a in c.items()) for x in verts)


def test_dump_roundtrip():
    base = sum_system(3, Fraction(3, 2))
    lift = build_sa_lift(base, 2)
    pe = pe_from_solution(lift, lift.solve().point)
    text = dump_pe(pe)
    back = load_pe(text, str)
    assert dict(back.items()) == dict(pe.items()) and back.degree == pe.degree
    assert dump_pe(back) == text


def test_assign_sym_distribution_pe_is_valid():
    inst = micro_instances(1, seed=11, max_vars=6)[0]
    T = max(p for _, p in inst.jobs) + 2
    lp = build_assign_sym(inst, T, HALF)
    pts = [schedule_to_point(a, inst) for a in integral_points(lp, inst)]
    pe = pe_from_distribution(pts, [Fraction(1, len(pts))] * len(pts), 3, lp.variables)
    assert verify_sa_pe(pe, lp, 3).ok

import itertools
from fractions import Fraction

import pytest

from conftest import micro_instances
from schedlift.exact_lp import feasible
from schedlift.exceptions import InfeasibleInput, NonIntegralPoint
from schedlift.formulations import (
    EQUAL,
    GREATER,
    LESS,
    LexWeights,
    build_assign,
    build_assign_sym,
    build_clp,
    build_order,
    check_clp_point,
    check_lex_sorted,
    conf_of_machine,
    integral_points,
    lex_compare,
    lex_sort_solution,
    lex_value,
    lex_weights,
    project_clp_to_assign,
    schedule_to_point,
)
from schedlift.model import Configuration, Instance, classify_jobs

HALF = Fraction(1, 2)


def test_assign_examples():
    inst = Instance.from_sizes(2, [3, 3])
    lp = build_assign(inst, 3)
    assert lp.is_feasible_point({v: HALF for v in lp.variables})
    assert not feasible(build_assign(Instance.from_sizes(1, [5]), 4)).feasible
    inst = Instance.from_sizes(2, [1, 1, 1])
    pts = integral_points(build_assign(inst, 2), inst)
    assert pts and all(max(list(a.values()).count(i) for i in (1, 2)) <= 2 for a in pts)


def test_clp_examples():
    inst = Instance.from_sizes(1, [3])
    lp = build_clp(inst, 3)
    C3 = Configuration.from_sizes([3])
    out = feasible(lp)
    assert out.feasible and out.point[(1, C3)] == 1
    assert not feasible(build_clp(Instance.from_sizes(1, [3, 3]), 3)).feasible


def test_assign_sym_row():
    inst = Instance(2, (("a", 5), ("b", 7)))
    lp = build_assign_sym(inst, 8, HALF)
    lw = lp.meta["weights"]
    assert (lw.B, lw.s) == (5, 2)
    (row,) = [r for r in lp.rows if r.label == ("sym", 1)]
    assert dict(row.coeffs) == {(1, "a"): 5, (2, "a"): -5, (1, "b"): 1, (2, "b"): -1}
    bad = schedule_to_point({"a": 2, "b": 2}, inst)
    assert not row.satisfied(bad)


def test_assign_sym_single_class_weight():
    cls = classify_jobs(Instance.from_sizes(2, [5, 6]), 8, HALF)
    assert lex_weights(cls).weights == (lex_weights(cls).B, 1)
    assert LexWeights(7, 1).weights == (1,)


def test_order_rows():
    inst = Instance(2, (("j1", 5), ("j2", 5)))
    lp = build_order(inst, 8, HALF)
    rows = {r.label: dict(r.coeffs) for r in lp.rows if r.label[0] == "order"}
    assert rows == {
        ("order", 1, 1, 1): {(1, "j1"): 1, (1, "j2"): -1},
        ("order", 1, 1, 2): {(1, "j1"): 1, (2, "j1"): 1, (1, "j2"): -1, (2, "j2"): -1},
    }
    bad = schedule_to_point({"j1": 2, "j2": 1}, inst)
    assert not lp.rows[[r.label for r in lp.rows].index(("order", 1, 1, 1))].satisfied(bad)
    single = build_order(Instance(2, (("j1", 5), ("j2", 7))), 8, HALF)
    assert not [r for r in single.rows if r.label[0] == "order"]


def test_lex_compare_and_value():
    assert lex_compare((2, 0), (1, 5)) == GREATER
    assert lex_compare((1, 3), (1, 3)) == EQUAL
    assert lex_compare((1, 0), (1, 1)) == LESS
    assert lex_value((1, 3), LexWeights(5, 2)) == 8
    assert lex_value((0, 0), LexWeights(5, 2)) == 0
    w = LexWeights(11, 2)
    assert (lex_value((2, 0), w), lex_value((1, 5), w)) == (22, 16)


def test_conf_of_machine_counts():
    inst = Instance.from_sizes(2, [5, 5, 7, 3])
    cls = classify_jobs(inst, 8, HALF)
    x = schedule_to_point({"j1": 1, "j2": 2, "j3": 1, "j4": 2}, inst)
    assert conf_of_machine(x, 1, cls) == (1, 1)
    assert conf_of_machine(x, 2, cls) == (1, 0)
    x = schedule_to_point({"j1": 1, "j2": 1, "j3": 2, "j4": 1}, inst)
    assert conf_of_machine(x, 1, cls) == (2, 0)
    x[(1, "j1")] = HALF
    with pytest.raises(NonIntegralPoint):
        conf_of_machine(x, 1, cls)


def test_check_lex_sorted_and_swap():
    inst = Instance.from_sizes(2, [5, 7])
    cls = classify_jobs(inst, 8, HALF)
    x = schedule_to_point({"j1": 1, "j2": 2}, inst)
    assert check_lex_sorted(x, cls, 2)
    assert not check_lex_sorted(schedule_to_point({"j1": 2, "j2": 1}, inst), cls, 2)


def test_clp_projection_examples():
    inst = Instance.from_sizes(2, [3, 3])
    empty, pair = Configuration(), Configuration.from_sizes([3, 3])
    y = {(1, pair): 1, (2, empty): 1}
    x = project_clp_to_assign(y, inst, 6)
    assert x[(1, "j1")] == x[(1, "j2")] == 1
    one = Configuration.from_sizes([3])
    y = {(1, one): 1, (2, one): 1}
    x = project_clp_to_assign(y, inst, 6)
    assert set(x.values()) == {HALF}
    with pytest.raises(InfeasibleInput):
        project_clp_to_assign({(1, pair): 1}, inst, 6)
    assert check_clp_point({(1, one): 1, (2, one): 1}, inst, 6) == []


def test_lex_value_monotone_exhaustive():
    for B, s, top in [(5, 2, 2), (9, 2, 4), (13, 3, 2)]:
        w = LexWeights(B, s)
        if B <= 2 * s * top:
            continue
        vecs = list(itertools.product(range(top + 1), repeat=s))
        for a, b in itertools.product(vecs, repeat=2):
            c = lex_compare(a, b)
            va, vb = lex_value(a, w), lex_value(b, w)
            assert (c == GREATER) == (va > vb) and (c == EQUAL) == (va == vb)


@pytest.mark.parametrize("inst", micro_instances(12, seed=7, max_vars=12), ids=str)
def test_lex_sort_lands_in_sym_program(inst):
    for T in (max(p for _, p in inst.jobs), -(-inst.total_size // inst.machines) + 2):
        lp = build_assign_sym(inst, T, HALF)
        cls = lp.meta["classification"]
        for a in integral_points(build_assign(inst, T), inst):
            x = schedule_to_point(a, inst)
            y = lex_sort_solution(x, cls, inst.machines)
            assert lp.is_feasible_point(y)
            assert check_lex_sorted(y, cls, inst.machines)

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schedlift.exceptions import BudgetExceeded, DegreeTooLarge
from schedlift.model import Configuration
from schedlift.ring import (
    SquareFreePoly,
    equal_mod_sched,
    expand_to_degree,
    kill_non_partial,
    reduce_square_free,
    symmetrize,
    symmetrize_row_group,
)

C = Configuration.from_sizes([3])
D = Configuration.from_sizes([4])
E = Configuration.from_sizes([3, 4])


def y(*pairs):
    return SquareFreePoly.monomial(pairs)


def test_reduce_square_free():
    assert reduce_square_free([(1, {"a": 2, "b": 1})]) == SquareFreePoly.monomial(["a", "b"])
    assert reduce_square_free([(2, {"a": 2}), (-1, {"a": 1})]) == SquareFreePoly.var("a")
    assert reduce_square_free([(7, {})]) == SquareFreePoly.constant(7)


def test_product_is_square_free():
    a = SquareFreePoly.var("a")
    assert a * a == a
    assert (a + 1) * (a - 1) == a - 1


def test_kill_non_partial():
    assert kill_non_partial(y((1, C), (1, D))).is_zero()
    assert kill_non_partial(y((1, C), (2, C))) == y((1, C), (2, C))
    assert kill_non_partial(y((1, C)) + y((1, C), (1, D))) == y((1, C))


def test_expand_to_degree():
    assert expand_to_degree(frozenset(), 1, 2, [C]) == y((1, C))
    assert expand_to_degree(frozenset({(1, C)}), 1, 2, [C]) == y((1, C))
    assert expand_to_degree(frozenset(), 1, 2, [C, D]) == y((1, C)) + y((1, D))
    with pytest.raises(DegreeTooLarge):
        expand_to_degree(frozenset(), 3, 2, [C])


def test_equal_mod_sched():
    S = frozenset({(2, D)})
    assert equal_mod_sched(SquareFreePoly.monomial(S), expand_to_degree(S, 2, 3, [C, D]), 3, [C, D])
    assert equal_mod_sched(y((1, C), (1, D)), SquareFreePoly(), 2, [C, D])
    assert not equal_mod_sched(y((1, C)), y((2, C)), 2, [C, D])
    with pytest.raises(BudgetExceeded):
        equal_mod_sched(y((1, C)), y((2, C)), 30, [C, D])


def test_symmetrize_examples():
    half = Fraction(1, 2)
    s2 = [(1, 2), (2, 1)]
    assert symmetrize(y((1, C)), s2) == half * (y((1, C)) + y((2, C)))
    inv = y((1, C)) + y((2, C))
    assert symmetrize(inv, s2) == inv
    assert symmetrize(y((1, C), (2, D)), s2) == half * (y((1, C), (2, D)) + y((2, C), (1, D)))


def _random_poly(draw_terms, m=3, configs=(C, D, E)):
    terms = {}
    for machines, cidx, coeff in draw_terms:
        terms[frozenset((i, configs[c]) for i, c in zip(machines, cidx))] = coeff
    return SquareFreePoly(terms)


poly_terms = st.lists(
    st.tuples(
        st.lists(st.integers(1, 3), max_size=3),
        st.lists(st.integers(0, 2), min_size=3, max_size=3),
        st.integers(-4, 4),
    ),
    max_size=5,
)


@settings(max_examples=40, deadline=None)
@given(poly_terms)
def test_symmetrize_idempotent_over_full_group(terms):
    f = _random_poly(terms)
    group = list(itertools.permutations([1, 2, 3]))
    once = symmetrize(f, group)
    assert symmetrize(once, group) == once
    assert symmetrize_row_group(f, [1, 2, 3]) == once


@settings(max_examples=40, deadline=None)
@given(poly_terms, poly_terms)
def test_kill_non_partial_is_multiplicative(t1, t2):
    f, g = _random_poly(t1), _random_poly(t2)
    assert kill_non_partial(f * g) == kill_non_partial(kill_non_partial(f) * kill_non_partial(g))


@settings(max_examples=25, deadline=None)
@given(poly_terms, poly_terms, poly_terms)
def test_equal_mod_sched_respects_ring_operations(t1, t2, t3):
    f, g, h = (_random_poly(t) for t in (t1, t2, t3))
    configs = [C, D, E]
    killed = kill_non_partial(f)
    assert equal_mod_sched(f, killed, 3, configs)
    assert equal_mod_sched(f * h, killed * h, 3, configs)
    assert equal_mod_sched(f + g, killed + g, 3, configs)

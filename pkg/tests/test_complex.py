from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghmoy.complex import (
    HAT,
    MINUS,
    GridComplex,
    GridState,
    alexander2,
    bidegree_slice,
    check_d_squared,
    differential,
    empty_rectangles,
    monomials,
    window_keys,
)
from ghmoy.corpus import theta3, trefoil5, unknot2_vertex
from ghmoy.graph import diagram_weights
from ghmoy.grid import planar_realization
from ghmoy.complex import maslov

from .conftest import grid_diagrams


@given(grid_diagrams(), st.data())
@settings(max_examples=40)
def test_fast_gradings_match_direct_formula(g, data):
    cut = (data.draw(st.integers(0, g.n - 1)), data.draw(st.integers(0, g.n - 1)))
    w = diagram_weights(g)
    cx = GridComplex(g, HAT, w, cut=cut)
    p = planar_realization(g, cut)
    for i, perm in enumerate(cx.states):
        x = GridState(perm)
        assert cx.M[i] == maslov(p, x)
        assert cx.S2[i] == alexander2(p, w, x)


@given(grid_diagrams())
@settings(max_examples=40)
def test_rectangle_grading_shift(g):
    """For any empty rectangle r from x to y: M(x) - M(y) = 1 - 2 #O(r) and
    S2(x) - S2(y) = 2 (w(X in r) - w(O in r))."""
    cx = GridComplex(g, MINUS)
    w = cx.weights
    for i, perm in enumerate(cx.states):
        for yi, _, _, _ in cx.rectangles(i):
            for r in empty_rectangles(g, GridState(perm), GridState(cx.states[yi])):
                assert cx.M[i] - cx.M[yi] == 1 - 2 * len(r.o_cells)
                ds = sum(w[c] for c in r.x_cells) - sum(w[c] for c in r.o_cells)
                assert cx.S2[i] - cx.S2[yi] == 2 * ds


@given(grid_diagrams())
@settings(max_examples=40)
def test_rectangle_enumeration_matches_pairwise_search(g):
    cx = GridComplex(g, MINUS)
    for i, perm in enumerate(cx.states):
        fast = Counter((yi, om) for yi, om, _, _ in cx.rectangles(i))
        slow = Counter()
        for yi, other in enumerate(cx.states):
            for r in empty_rectangles(g, GridState(perm), GridState(other)):
                om = sum(1 << k for k, m in enumerate(cx.o_marks) if m.cell in r.o_cells)
                slow[(yi, om)] += 1
        assert fast == slow


@pytest.mark.parametrize("version", [HAT, MINUS])
@given(g=grid_diagrams())
@settings(max_examples=25, deadline=None)
def test_d_squared_zero_random(version, g):
    cx = GridComplex(g, version)
    keys = window_keys(cx, cx.min_maslov - 2, cx.max_maslov)
    assert check_d_squared(cx, keys) is None


@given(grid_diagrams())
@settings(max_examples=25, deadline=None)
def test_differential_lowers_maslov_keeps_alexander(g):
    cx = GridComplex(g, MINUS)
    for key in window_keys(cx, cx.min_maslov - 2, cx.max_maslov):
        m, s = cx.grading(key)
        for t in cx.boundary(key):
            assert cx.grading(t) == (m - 1, s)


def test_hat_drops_vertex_variables_only():
    g = trefoil5()
    h, m = GridComplex(g, HAT), GridComplex(g, MINUS)
    assert len(m.free) == 5
    assert len(h.free) == 4
    assert all(not h.star[i] for i in h.free)


def test_u_action_grading():
    cx = GridComplex(theta3(1, 2)[0], MINUS)
    for i, k in enumerate(cx.free):
        mono = tuple(1 if j == i else 0 for j in range(len(cx.free)))
        m0, s0 = cx.grading((0, (0,) * len(cx.free)))
        assert cx.grading((0, mono)) == (m0 - 2, s0 - 2 * cx.o_weight[k])


def test_monomials():
    assert monomials(2, 2) == ((0, 2), (1, 1), (2, 0))
    assert monomials(0, 0) == ((),)
    assert monomials(0, 1) == ()
    assert len(monomials(3, 4)) == 15


def test_unknot_minus_levels_form_a_tower():
    cx = GridComplex(unknot2_vertex(), MINUS)
    # two states; one generator per even level below the top
    assert sorted(cx.M) == [-1, 0]
    for d in (0, -2, -4):
        assert sum(len(v) for v in cx.level(d).values()) >= 1


def test_differential_and_slice_agree():
    g = trefoil5()
    cx = GridComplex(g, HAT)
    x = GridState(cx.states[7])
    d = differential(HAT, g, None, x)
    assert len(d) == len(cx.boundary(cx.state_key(x.perm)))
    m, s = cx.M[7], cx.S2[7]
    sl = bidegree_slice(HAT, g, cx.weights, m, s, cx)
    assert any(b.state == x for b in sl.basis)
    assert len(sl.boundary) == len(sl.basis)


def test_unknown_version():
    with pytest.raises(ValueError):
        GridComplex(trefoil5(), "tilde")

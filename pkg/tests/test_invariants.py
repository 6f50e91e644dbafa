from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import connected_graphs, trees
from injhull import generators as gen
from injhull.errors import NotConcatenable, TooFewPoints
from injhull.invariants import (
    bounded_jump_check,
    check_contraction_witness,
    coarse_projection,
    contraction_constant,
    delta_with_added_points,
    four_point_defect,
    gromov_delta,
    is_strongly_contracting,
    local_contraction_scan,
    morse_constant,
    projection_of_set,
)
from injhull.metric import DiscretePath, geodesic_path, graph_metric
from injhull.verify.corpus import staircase


def _subset(data, n, min_size=1):
    return sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=min_size, max_size=n)))


# --------------------------------------------------------------------------
# projections


def test_projection_examples():
    P5 = graph_metric(gen.path(5))
    assert coarse_projection(P5, [0, 4], 2) == (0, 4)
    assert coarse_projection(P5, [0, 1, 2], 1, slack=0) == (1,)
    C6 = graph_metric(gen.cycle(6))
    assert projection_of_set(C6, [0], [2, 3, 4]) == (0,)
    assert projection_of_set(C6, [0, 1, 2], [0, 1, 2], slack=0) == (0, 1, 2)


@given(trees(min_n=2), st.data())
def test_tree_geodesic_projection_diameter_at_most_two(g, data):
    X = graph_metric(g)
    a, b = data.draw(st.integers(0, g.n - 1)), data.draw(st.integers(0, g.n - 1))
    Y = geodesic_path(X, a, b)
    for x in range(g.n):
        P = coarse_projection(X, Y, x)
        assert max(X.d(p, q) for p in P for q in P) <= 2


@given(connected_graphs(min_n=2), st.data())
def test_projection_grows_with_slack(g, data):
    X = graph_metric(g)
    Y = _subset(data, g.n)
    x = data.draw(st.integers(0, g.n - 1))
    assert set(coarse_projection(X, Y, x, 0)) <= set(coarse_projection(X, Y, x, 1))
    assert set(coarse_projection(X, Y, x, 1)) <= set(coarse_projection(X, Y, x, 2))


# --------------------------------------------------------------------------
# contraction


@given(connected_graphs(min_n=2), st.data(), st.integers(0, 2))
def test_contraction_matches_ball_scan(g, data, slack):
    X = graph_metric(g)
    Y = _subset(data, g.n)
    rep = contraction_constant(X, Y, slack)
    assert rep.constant == oracles.contraction(X.dist, Y, slack)
    assert check_contraction_witness(X, Y, rep, slack)
    assert is_strongly_contracting(X, Y, rep.constant, slack)
    if rep.constant > 0:
        assert not is_strongly_contracting(X, Y, rep.constant - 1, slack)


def test_contraction_trivial_cases():
    P5 = graph_metric(gen.path(5))
    assert contraction_constant(P5, [0]).constant == 0
    rep = contraction_constant(P5, range(5))
    assert rep.constant == 0 and rep.vacuous
    # only balls around the missing point are disjoint from Y
    rep = contraction_constant(P5, [0, 1, 3, 4])
    proj = projection_of_set(P5, [0, 1, 3, 4], [2])
    assert rep.constant == P5.d(proj[0], proj[-1]) == 4 and rep.ball == (2, 0)
    assert is_strongly_contracting(P5, [0, 4], P5.diameter())


def test_staircase_contraction_grows():
    # frozen from the exhaustive ball scan oracle
    values = []
    for n in range(3, 7):
        X = graph_metric(gen.grid(n, n))
        Y = staircase(n)
        rep = contraction_constant(X, Y)
        assert rep.constant == oracles.contraction(X.dist, Y, 1)
        values.append(rep.constant)
    assert values == [4, 6, 8, 10]


def test_grid_bottom_row_contraction_grows():
    vals = [contraction_constant(graph_metric(gen.grid(n, n)), range(n)).constant for n in range(3, 7)]
    assert vals == sorted(vals) and vals[0] < vals[-1]


def test_five_by_five_staircase_not_one_contracting():
    X = graph_metric(gen.grid(5, 5))
    assert not is_strongly_contracting(X, staircase(5), 1)


def test_contraction_scales():
    X = graph_metric(gen.grid(3, 3))
    Y = [0, 1, 2]
    base = contraction_constant(X, Y, 1).constant
    assert contraction_constant(X.scaled(3), Y, 3).constant == 3 * base


# --------------------------------------------------------------------------
# Morse constants


@given(connected_graphs(min_n=2, max_n=6), st.data(), st.sampled_from([(1, 0), (2, 0), (3, 0), (2, 1)]))
def test_morse_matches_enumeration(g, data, le):
    X = graph_metric(g)
    Y = _subset(data, g.n)
    rep = morse_constant(X, Y, *le)
    assert rep.exact
    assert rep.constant == oracles.morse(X.dist.tolist(), 1, Y, *le)
    if rep.constant > 0:
        path = rep.path.points
        assert path[0] in Y and path[-1] in Y
        assert oracles.is_qg(X.dist, 1, path, *le)
        assert X.dist_to(Y)[rep.point] == rep.constant


def test_morse_examples():
    C8 = graph_metric(gen.cycle(8))
    arc = [0, 1, 2, 3, 4]
    # the complementary arc 4-5-6-7-0 is a geodesic
    assert morse_constant(C8, arc, 1, 0).constant == 2
    assert morse_constant(C8, arc, 9, 0).constant == 2
    assert morse_constant(C8, range(8), 9, 0).constant == 0
    T = graph_metric(gen.star_subdiv(3, 3))
    assert morse_constant(T, geodesic_path(T, 3, 6), 1, 0).constant == 0


def test_morse_with_stays_allowed():
    # 1/lam - eps <= 0 lets paths stay put; the search must still terminate
    X = graph_metric(gen.path(4))
    rep = morse_constant(X, [0, 3], 1, 1)
    assert rep.exact
    assert rep.constant == oracles.morse(X.dist.tolist(), 1, [0, 3], 1, 1)


def test_morse_budget_gives_lower_bound():
    X = graph_metric(gen.grid(4, 4))
    Y = [0, 15]
    full = morse_constant(X, Y, 3, 1)
    small = morse_constant(X, Y, 3, 1, budget=5)
    assert not small.exact
    assert small.constant <= full.constant


# --------------------------------------------------------------------------
# hyperbolicity


def test_delta_examples():
    rep = gromov_delta(graph_metric(gen.cycle(4)))
    assert rep.delta == 2 and rep.quadruple == (0, 2, 1, 3)
    assert gromov_delta(graph_metric(gen.star_subdiv(3, 2))).delta == 0
    G = graph_metric(gen.grid(4, 4))
    assert gromov_delta(G).delta == oracles.delta(G.dist) == 6
    with pytest.raises(TooFewPoints):
        gromov_delta(G, [0, 1, 2])


@given(connected_graphs(min_n=4), st.integers(1, 4), st.randoms())
def test_delta_matches_scan_and_is_invariant(g, s, rnd):
    X = graph_metric(g)
    rep = gromov_delta(X)
    assert rep.delta == oracles.delta(X.dist)
    assert four_point_defect(X, *rep.quadruple) == rep.delta
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert gromov_delta(X.relabel(perm)).delta == rep.delta
    assert gromov_delta(X.scaled(s)).delta == s * rep.delta


@given(trees(min_n=4))
def test_trees_are_zero_hyperbolic(g):
    assert gromov_delta(graph_metric(g)).delta == 0


def test_delta_with_added_points():
    X = graph_metric(gen.grid(4, 4))
    Y = [0, 1, 2, 3]
    assert delta_with_added_points(X, Y, 1, 2).delta == gromov_delta(X, Y).delta
    rep = delta_with_added_points(X, Y, 12, 15)
    assert rep.delta == oracles.delta(X.dist, [0, 1, 2, 3, 12, 15])


# --------------------------------------------------------------------------
# local-to-global diagnostics


def test_bounded_jump_on_split_path():
    X = graph_metric(gen.path(9))
    g1, g2 = DiscretePath(range(5)), DiscretePath(range(4, 9))
    for x in range(9):
        ok, info = bounded_jump_check(X, g1, g2, x, 2)
        assert ok
    ok, info = bounded_jump_check(X, g1, g2, 0, 2)
    assert not info["vacuous"] and info["max_d_pi2_p"] == 1  # slack reaches 5
    ok, info = bounded_jump_check(X, g1, g2, 4, 2)
    assert ok and info["vacuous"]
    with pytest.raises(NotConcatenable):
        bounded_jump_check(X, g1, DiscretePath([5, 6]), 0, 2)


def test_bounded_jump_grid_counterexample():
    # left column and bottom row of a grid meet at the corner 0; a point near
    # the top-right corner projects far from 0 onto both sides
    n = 5
    X = graph_metric(gen.grid(n, n))
    left = DiscretePath([r * n for r in range(n - 1, -1, -1)])
    bottom = DiscretePath(range(n))
    far = (n - 1) * n + n - 2
    ok, info = bounded_jump_check(X, left, bottom, far, 1)
    assert not ok and info["far_point"] in bottom.points
    assert X.d(info["far_point"], 0) > 1
    assert bounded_jump_check(X, left, bottom, far, 2 * n)[0]


def test_local_scan():
    X = graph_metric(gen.star_subdiv(3, 3))
    geo = DiscretePath(geodesic_path(X, 3, 6))
    for L in range(1, 7):
        assert local_contraction_scan(X, geo, L, 2)[0]
    back = DiscretePath([3, 2, 1, 2, 3])
    ok, info = local_contraction_scan(X, back, 3, 10)
    assert not ok and info["reason"] == "quasi_geodesic" and info["window"] == (0, 3)
    with pytest.raises(ValueError):
        local_contraction_scan(X, geo, 0, 2)


def test_local_scan_contraction_failure_window():
    n = 4
    X = graph_metric(gen.grid(n, n))
    path = DiscretePath(staircase(n))
    ok, info = local_contraction_scan(X, path, len(path.points) - 1, 1)
    assert not ok and info["reason"] == "contraction"
    s, t = info["window"]
    sub = sorted(set(path.points[s : t + 1]))
    assert contraction_constant(X, sub).constant == info["constant"] > 1
    # every shorter window passes
    for a, b in itertools.combinations(range(len(path.points)), 2):
        if (a, b) < (s, t) and 0 < b - a <= t - s:
            assert contraction_constant(X, sorted(set(path.points[a : b + 1]))).constant <= 1

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given

import oracles
from conftest import trees
from injhull import generators as gen
from injhull.errors import BudgetExceeded, NonIntegerMetric, NotMetricForm
from injhull.helly import is_helly
from injhull.hull import (
    MetricForm,
    dinf,
    enumerate_hull_vertices,
    hull_from_json,
    hull_graph,
    is_extremal,
    is_in_delta,
    is_one_lipschitz,
    kuratowski,
)
from injhull.metric import graph_metric, validate_metric


def _forms(X):
    return [f.values for f in enumerate_hull_vertices(X)]


def test_form_predicates():
    X = graph_metric(gen.cycle(4))
    e0 = kuratowski(X, 0)
    assert e0.values == (0, 1, 2, 1)
    assert is_in_delta(e0)[0] and is_one_lipschitz(e0) and is_extremal(e0)[0]
    assert is_extremal(MetricForm((1, 1, 1, 1), X))[0]
    assert is_in_delta(MetricForm((1, 1, 1, 1), X))[0]
    plus = MetricForm(np.array(e0.values) + 1, X)
    ok, x = is_extremal(plus)
    assert not ok and x == 0
    seg = validate_metric([[0, 1], [1, 0]])
    assert is_in_delta(MetricForm((0, 0), seg)) == (False, (0, 1))
    with pytest.raises(NotMetricForm):
        is_extremal(MetricForm((0, 0), seg))
    jump = MetricForm((0, 3, 2, 1), X)
    assert not is_one_lipschitz(jump)
    assert kuratowski(graph_metric(gen.path(3)), 1).values == (1, 0, 1)
    assert dinf(e0, kuratowski(X, 2)) == 2


def test_half_diameter_form_is_in_delta():
    for g in (gen.cycle(5), gen.grid(3, 3), gen.path(6)):
        X = graph_metric(g)
        f = MetricForm([-(-X.diameter() // 2)] * X.n, X)
        assert is_in_delta(f)[0]


def test_segment_forms():
    X = validate_metric([[0, 2], [2, 0]])
    assert _forms(X) == [(0, 2), (1, 1), (2, 0)]
    H = hull_graph(X)
    assert H.graph.sorted_edges() == [(0, 1), (1, 2)]
    assert H.embedding == (0, 2)


def test_c4_hull():
    X = graph_metric(gen.cycle(4))
    assert _forms(X) == oracles.extremal_forms(X.dist)
    H = hull_graph(X)
    assert H.n == 5
    center = H.forms.index((1, 1, 1, 1))
    nbrs = {v for e in H.graph.edges if center in e for v in e} - {center}
    assert nbrs == set(range(5)) - {center}
    assert sorted(H.forms[i] for i in H.embedding) == sorted(tuple(r) for r in X.dist.tolist())


@given(trees(max_n=7))
def test_tree_hull_is_tree(g):
    X = graph_metric(g)
    forms = _forms(X)
    assert forms == oracles.extremal_forms(X.dist)
    assert sorted(forms) == sorted(tuple(r) for r in X.dist.tolist())
    H = hull_graph(X)
    assert H.n == g.n and H.graph.m == g.n - 1


@pytest.mark.parametrize("n, size", [(3, 3), (5, 6), (6, 14), (7, 14)])
def test_cycle_hulls_match_brute_force(n, size):
    X = graph_metric(gen.cycle(n))
    forms = _forms(X)
    assert forms == oracles.extremal_forms(X.dist)
    assert len(forms) == size


def test_c8_and_grid_hulls_match_vectorized_brute_force():
    for g, size in ((gen.cycle(8), 41), (gen.grid(3, 3), 13), (gen.grid(2, 4), 11)):
        X = graph_metric(g)
        forms = _forms(X)
        assert forms == oracles.extremal_forms_vectorized(X.dist)
        assert len(forms) == size


def test_hull_identities_on_cycles():
    for n in (4, 5, 6, 8):
        X = graph_metric(gen.cycle(n))
        H = hull_graph(X)
        F = np.array(H.forms)
        D = X.dist
        for f in F:
            for x in range(n):
                assert f[x] == dinf(D[x], f)
            assert (f[:, None] + f[None, :] >= D).all()
            assert (np.abs(f[:, None] - f[None, :]) <= D).all()
        emb = list(H.embedding)
        assert np.array_equal(H.space.dist[np.ix_(emb, emb)], D)
        assert is_helly(H.graph)[0]


def test_hull_is_idempotent():
    H = hull_graph(graph_metric(gen.cycle(5)))
    H2 = hull_graph(H.space)
    assert H2.n == H.n


def test_scaled_metric_hull():
    X = validate_metric([[0, 2, 4], [2, 0, 2], [4, 2, 0]], scale=2)
    forms = _forms(X)
    assert forms == [(0, 2, 4), (2, 0, 2), (4, 2, 0)]
    H = hull_graph(X)
    assert H.space.scale == 2 and H.graph.m == 2


def test_errors():
    with pytest.raises(NonIntegerMetric):
        enumerate_hull_vertices(validate_metric([[0, 1], [1, 0]], scale=2))
    with pytest.raises(BudgetExceeded):
        enumerate_hull_vertices(graph_metric(gen.cycle(10)), budget=20)


def test_json_roundtrip():
    X = graph_metric(gen.cycle(6))
    H = hull_graph(X)
    data = H.to_json()
    H2 = hull_from_json(data, X)
    assert H2.forms == H.forms and H2.graph == H.graph and H2.embedding == H.embedding
    assert H2.space == H.space
    assert H.dumps() == H2.dumps()

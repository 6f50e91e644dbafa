"""Metric forms and the integer injective hull of a finite integer metric.

A metric form is a vector f over the points with f(x) + f(y) >= d(x, y).
The extremal ones (f(x) = max_y d(x, y) - f(y) for every x) are the points of
the injective hull; the integer-valued extremal forms joined at sup-distance
one unit make up :class:`HullGraph`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import BudgetExceeded, MetricMismatch, NonIntegerMetric, NotHelly, NotMetricForm
from .metric import FiniteMetricSpace, Graph, graph_metric


@dataclass(frozen=True)
class MetricForm:
    values: tuple
    ambient: FiniteMetricSpace

    def __init__(self, values: Sequence[int], ambient: FiniteMetricSpace):
        vals = tuple(int(v) for v in values)
        if len(vals) != ambient.n:
            raise ValueError(f"form has {len(vals)} values for a {ambient.n}-point space")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "ambient", ambient)

    def __getitem__(self, x):
        return self.values[x]

    def __len__(self):
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)


def _vals(f) -> np.ndarray:
    return f.array() if isinstance(f, MetricForm) else np.asarray(f, dtype=np.int64)


def is_in_delta(f: MetricForm) -> tuple[bool, tuple[int, int] | None]:
    """f(x) + f(y) >= d(x, y) for all pairs; witness is the first violating pair."""
    v = f.array()
    bad = np.argwhere(v[:, None] + v[None, :] < f.ambient.dist)
    if len(bad):
        x, y = bad[0]
        return False, (int(x), int(y))
    return True, None


def is_one_lipschitz(f: MetricForm) -> bool:
    v = f.array()
    return bool(np.all(np.abs(v[:, None] - v[None, :]) <= f.ambient.dist))


def is_extremal(f: MetricForm) -> tuple[bool, int | None]:
    """True iff f(x) = max_y d(x, y) - f(y) at every x (so f cannot be decreased).

    Raises :class:`NotMetricForm` when f is not in the form cone.
    """
    ok, pair = is_in_delta(f)
    if not ok:
        raise NotMetricForm(f"f({pair[0]}) + f({pair[1]}) < d", indices=pair)
    v = f.array()
    tight = (f.ambient.dist - v[None, :]).max(axis=1)
    short = np.flatnonzero(tight < v)
    if len(short):
        return False, int(short[0])
    return True, None


def kuratowski(X: FiniteMetricSpace, x: int) -> MetricForm:
    """The form d(x, .)."""
    return MetricForm(X.dist[x], X)


def dinf(f, g) -> int:
    return int(np.abs(_vals(f) - _vals(g)).max())


# --------------------------------------------------------------------------
# enumeration


def _propagate(d: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> bool:
    """Tighten the integer boxes [lo, hi] in place; False on an empty box.

    Uses the form condition, 1-Lipschitz bounds (every extremal form is
    1-Lipschitz) and the support bound f(x) <= max(0, max_y d(x,y) - lo(y)).
    """
    while True:
        new_lo = np.maximum.reduce([lo, (d - hi[None, :]).max(axis=1), (lo[None, :] - d).max(axis=1)])
        new_hi = np.minimum.reduce([
            hi,
            (d + hi[None, :]).min(axis=1),
            np.maximum(0, (d - new_lo[None, :]).max(axis=1)),
        ])
        if np.any(new_lo > new_hi):
            return False
        if np.array_equal(new_lo, lo) and np.array_equal(new_hi, hi):
            return True
        lo[:], hi[:] = new_lo, new_hi


def _unit_metric(X: FiniteMetricSpace) -> np.ndarray:
    if np.any(X.dist % X.scale):
        bad = np.argwhere(X.dist % X.scale)[0]
        raise NonIntegerMetric(f"d{tuple(bad)} is not a multiple of scale {X.scale}", indices=bad)
    return X.dist // X.scale


def enumerate_hull_vertices(X: FiniteMetricSpace, budget: int | None = 10**9) -> list[MetricForm]:
    """All integer-valued extremal forms of an integer metric, in lexicographic order.

    Depth-first search over coordinate boxes 0 <= f(x) <= ecc(x), narrowed by
    interval propagation before every branch.  ``budget`` bounds the number of
    search nodes.
    """
    d = _unit_metric(X)
    n = X.n
    found: list[tuple] = []
    nodes = 0
    lo0 = np.zeros(n, dtype=np.int64)
    hi0 = d.max(axis=1).copy()
    if not _propagate(d, lo0, hi0):
        return []
    stack = [(lo0, hi0)]
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"hull search exceeded {budget} nodes", partial=len(found), nodes=nodes)
        width = hi - lo
        if not width.any():
            f = lo * X.scale
            form = MetricForm(f, X)
            if is_extremal(form)[0]:
                found.append(tuple(int(v) for v in f))
            continue
        open_ = np.flatnonzero(width)
        x = open_[np.argmin(width[open_])]
        # push in reverse so smaller values are explored first
        for v in range(hi[x], lo[x] - 1, -1):
            l2, h2 = lo.copy(), hi.copy()
            l2[x] = h2[x] = v
            if _propagate(d, l2, h2):
                stack.append((l2, h2))
    return [MetricForm(f, X) for f in sorted(set(found))]


# --------------------------------------------------------------------------
# hull graph


@dataclass(frozen=True)
class HullGraph:
    """Integer extremal forms, their unit sup-distance graph and the embedding of X.

    ``space`` is the sup-distance metric on the forms (same scale as the base).
    """

    base: FiniteMetricSpace
    forms: tuple
    graph: Graph
    embedding: tuple
    space: FiniteMetricSpace

    @property
    def n(self) -> int:
        return len(self.forms)

    def form(self, i: int) -> MetricForm:
        return MetricForm(self.forms[i], self.base)

    def embed(self, points: Sequence[int]) -> tuple[int, ...]:
        return tuple(sorted(self.embedding[p] for p in points))

    def to_json(self) -> dict[str, Any]:
        return {
            "forms": [list(f) for f in self.forms],
            "edges": [list(e) for e in self.graph.sorted_edges()],
            "embedding": list(self.embedding),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def dinf_matrix(F: np.ndarray) -> np.ndarray:
    m = len(F)
    out = np.empty((m, m), dtype=np.int64)
    step = max(1, 2_000_000 // max(1, m * F.shape[1]))
    for i in range(0, m, step):
        out[i : i + step] = np.abs(F[i : i + step, None, :] - F[None, :, :]).max(axis=2)
    return out


def hull_graph(X: FiniteMetricSpace, budget: int | None = 10**9, check_helly: bool = True) -> HullGraph:
    """Build and verify the integer hull graph of X.

    Checks that every form is extremal, that graph distance equals sup-distance
    for every pair of forms (hence the embedding is isometric) and that the
    graph is Helly.
    """
    from .helly import is_helly

    forms = enumerate_hull_vertices(X, budget)
    F = np.array([f.values for f in forms], dtype=np.int64)
    for f in forms:
        if not is_extremal(f)[0]:
            raise MetricMismatch("non-extremal form produced", values=(f.values,))
    Dinf = dinf_matrix(F)
    edges = [tuple(e) for e in np.argwhere(np.triu(Dinf == X.scale, k=1))]
    g = Graph(len(forms), edges)
    index = {f.values: i for i, f in enumerate(forms)}
    embedding = tuple(index[tuple(int(v) for v in X.dist[x])] for x in range(X.n))
    gm = graph_metric(g).dist * X.scale
    bad = np.argwhere(gm != Dinf)
    if len(bad):
        i, j = bad[0]
        raise MetricMismatch(
            f"graph distance {gm[i, j]} != sup distance {Dinf[i, j]}",
            indices=(i, j), values=(int(gm[i, j]), int(Dinf[i, j])),
        )
    if check_helly:
        ok, balls = is_helly(g)
        if not ok:
            raise NotHelly("hull graph is not Helly", balls=balls)
    space = FiniteMetricSpace(Dinf, X.scale)
    return HullGraph(X, tuple(f.values for f in forms), g, embedding, space)


def hull_from_json(data: dict, X: FiniteMetricSpace) -> HullGraph:
    F = np.array(data["forms"], dtype=np.int64)
    g = Graph(len(F), [tuple(e) for e in data["edges"]])
    return HullGraph(X, tuple(tuple(int(v) for v in f) for f in F), g, tuple(data["embedding"]),
                     FiniteMetricSpace(dinf_matrix(F), X.scale))

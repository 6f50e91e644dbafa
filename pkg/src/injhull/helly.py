"""Helly recognition for graph balls and tripods in Helly graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import networkx as nx
import numpy as np

from .errors import NonIntegerMetric, NotHelly
from .hull import HullGraph
from .metric import FiniteMetricSpace, Graph, geodesic_path, graph_metric

GraphLike = Union[Graph, HullGraph, FiniteMetricSpace]


def _metric(g: GraphLike) -> FiniteMetricSpace:
    if isinstance(g, HullGraph):
        return g.space
    if isinstance(g, Graph):
        return graph_metric(g)
    return g


def _units(X: FiniteMetricSpace) -> np.ndarray:
    if np.any(X.dist % X.scale):
        raise NonIntegerMetric("graph-like metric expected")
    return X.dist // X.scale


def pair_cores(D: np.ndarray) -> np.ndarray:
    """``core[a, b]`` = intersection of all balls containing both a and b.

    Balls with a common center are nested, so for each center v only the
    smallest ball holding a and b, radius max(d(v,a), d(v,b)), matters.
    """
    n = len(D)
    core = np.empty((n, n, n), dtype=bool)
    for a in range(n):
        R = np.maximum(D[:, a][:, None], D)  # R[v, b]
        # core[a, b, u] = all_v D[v, u] <= R[v, b]
        core[a] = (D[:, None, :] <= R[:, :, None]).all(axis=0)
    return core


def _shrink_family(D: np.ndarray, balls: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Greedily drop balls while the total intersection stays empty."""
    members = {b: D[b[0]] <= b[1] for b in balls}
    keep = sorted(set(balls))
    for b in list(keep):
        rest = [c for c in keep if c != b]
        if rest and not np.logical_and.reduce([members[c] for c in rest]).any():
            keep = rest
    return keep


def is_helly(g: GraphLike) -> tuple[bool, list[tuple[int, int]] | None]:
    """Decide the Helly property for the family of all balls of a graph.

    Triple criterion: the balls are Helly iff for all vertices a, b, c the
    balls containing at least two of them have a common vertex.  On failure
    the witness is a minimal pairwise-intersecting family of (center, radius)
    balls with empty intersection.
    """
    D = _units(_metric(g))
    n = len(D)
    if n <= 2:
        return True, None
    core = pair_cores(D)
    for a in range(n):
        for b in range(a + 1, n):
            ab = core[a, b]
            rest = core[a, b + 1 :] & core[b, b + 1 :] & ab[None, :]
            empty = np.flatnonzero(~rest.any(axis=1))
            if len(empty):
                c = b + 1 + int(empty[0])
                family = []
                for p, q in ((a, b), (a, c), (b, c)):
                    family += [(v, int(max(D[v, p], D[v, q]))) for v in range(n)]
                return False, _shrink_family(D, family)
    return True, None


def helly_oracle(g: GraphLike) -> tuple[bool, list[tuple[int, int]] | None]:
    """Exhaustive check over all maximal pairwise-intersecting ball families.

    Every pairwise-intersecting family lies in a maximal clique of the ball
    intersection graph, and enlarging a family only shrinks its intersection,
    so checking the maximal cliques is exhaustive.
    """
    D = _units(_metric(g))
    n = len(D)
    balls = {}
    for v in range(n):
        for r in range(int(D[v].max()) + 1):
            key = (D[v] <= r).tobytes()
            balls.setdefault(key, (v, r))
    items = sorted(balls.values())
    masks = [D[v] <= r for v, r in items]
    G = nx.Graph()
    G.add_nodes_from(range(len(items)))
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if (masks[i] & masks[j]).any():
                G.add_edge(i, j)
    for clique in nx.find_cliques(G):
        if not np.logical_and.reduce([masks[i] for i in clique]).any():
            return False, _shrink_family(D, [items[i] for i in clique])
    return True, None


@dataclass(frozen=True)
class Tripod:
    center: int
    legs: tuple
    slack: int
    radii: tuple


def tripod(g: GraphLike, x1: int, x2: int, x3: int) -> Tripod:
    """Center and geodesic legs of a tripod spanned by three vertices of a Helly graph.

    Radii are the Gromov products (rounded up when the perimeter is odd,
    in which case ``slack`` is 1).  The center is the smallest vertex in the
    intersection of the three balls.
    """
    X = _metric(g)
    D = _units(X)
    xs = (x1, x2, x3)
    d12, d13, d23 = D[x1, x2], D[x1, x3], D[x2, x3]
    twice = (d12 + d13 - d23, d12 + d23 - d13, d13 + d23 - d12)
    slack = int((d12 + d13 + d23) % 2)
    radii = tuple(int(-(-t // 2)) for t in twice)
    common = np.logical_and.reduce([D[x] <= r for x, r in zip(xs, radii)])
    if not common.any():
        raise NotHelly("tripod balls meet pairwise but not totally",
                       balls=list(zip(xs, radii)))
    p = int(np.flatnonzero(common)[0])
    legs = tuple(geodesic_path(X, x, p) for x in xs)
    return Tripod(p, legs, slack, radii)

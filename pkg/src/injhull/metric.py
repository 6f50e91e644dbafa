"""Exact finite metric spaces, graphs, balls, geodesics and quasi-geodesic search.

Distances are stored as integers multiplied by a global ``scale`` so that
every comparison is exact.  Quasi-geodesics are discrete unit-step paths.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import (
    AsymmetricEntry,
    BadParams,
    BudgetExceeded,
    Disconnected,
    NegativeEntry,
    NonzeroDiagonal,
    TriangleViolation,
    ZeroOffDiagonal,
)


class FiniteMetricSpace:
    """Points ``0..n-1`` with an integer distance matrix read as ``dist / scale``.

    Use :func:`validate_metric` or :func:`graph_metric` to build one; the
    constructor itself does not check the metric axioms.
    """

    __slots__ = ("dist", "scale", "_nbrs")

    def __init__(self, dist, scale: int = 1):
        arr = np.array(dist, dtype=np.int64)
        arr.setflags(write=False)
        self.dist = arr
        self.scale = int(scale)
        self._nbrs = None

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def d(self, x: int, y: int) -> int:
        return int(self.dist[x, y])

    def diameter(self) -> int:
        return int(self.dist.max()) if self.n else 0

    def eccentricity(self) -> np.ndarray:
        return self.dist.max(axis=1)

    def dist_to(self, Y: Sequence[int]) -> np.ndarray:
        """Vector of d(x, Y) for every point x."""
        return self.dist[:, list(Y)].min(axis=1)

    def neighbors(self, x: int) -> tuple[int, ...]:
        """Points other than x within one unit (``scale``) of x, ascending."""
        if self._nbrs is None:
            mask = (self.dist <= self.scale) & ~np.eye(self.n, dtype=bool)
            self._nbrs = tuple(tuple(int(v) for v in np.flatnonzero(row)) for row in mask)
        return self._nbrs[x]

    def scaled(self, factor: int) -> "FiniteMetricSpace":
        """The same space with every distance multiplied by ``factor`` (scale kept)."""
        return FiniteMetricSpace(self.dist * int(factor), self.scale)

    def relabel(self, perm: Sequence[int]) -> "FiniteMetricSpace":
        """Space whose point i is the old point ``perm[i]``."""
        p = np.asarray(perm)
        return FiniteMetricSpace(self.dist[np.ix_(p, p)], self.scale)

    def subspace(self, points: Sequence[int]) -> "FiniteMetricSpace":
        return self.relabel(points)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteMetricSpace)
            and self.scale == other.scale
            and np.array_equal(self.dist, other.dist)
        )

    def __hash__(self):
        return hash((self.scale, self.dist.tobytes()))

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.n}, scale={self.scale})"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise BadParams(f"loop at vertex {u}", indices=(u,))
            if not (0 <= u < n and 0 <= v < n):
                raise BadParams(f"edge ({u},{v}) out of range for n={n}", indices=(u, v))
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return [sorted(a) for a in adj]

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise BadParams("graph file must start with 'n m'")
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = []
        for row in rows[1:]:
            u, v = int(row[0]), int(row[1])
            if not 0 <= u < v < n:
                raise BadParams(f"edge line '{u} {v}' must satisfy 0 <= u < v < n", indices=(u, v))
            edges.append((u, v))
        if len(edges) != m:
            raise BadParams(f"header declares {m} edges, found {len(edges)}")
        return cls(n, edges)


class Ball(NamedTuple):
    center: int
    radius: int


@dataclass(frozen=True)
class DiscretePath:
    """Vertex sequence p_0..p_L standing for a unit-speed (lam, eps)-quasi-geodesic."""

    points: tuple
    lam: Fraction = Fraction(1)
    eps: Fraction = Fraction(0)

    def __init__(self, points: Iterable[int], lam=1, eps=0):
        object.__setattr__(self, "points", tuple(int(p) for p in points))
        object.__setattr__(self, "lam", Fraction(lam))
        object.__setattr__(self, "eps", Fraction(eps))
        if not self.points:
            raise BadParams("empty path")
        if self.lam < 1 or self.eps < 0:
            raise BadParams(f"need lam >= 1 and eps >= 0, got ({self.lam}, {self.eps})")

    def __len__(self):
        return len(self.points)

    @property
    def length(self) -> int:
        return len(self.points) - 1

    @property
    def start(self) -> int:
        return self.points[0]

    @property
    def end(self) -> int:
        return self.points[-1]

    def reversed(self) -> "DiscretePath":
        return DiscretePath(self.points[::-1], self.lam, self.eps)

    def sub(self, i: int, j: int) -> "DiscretePath":
        """Subpath between parameters i and j (either order), inclusive."""
        if i <= j:
            return DiscretePath(self.points[i : j + 1], self.lam, self.eps)
        return DiscretePath(self.points[j : i + 1][::-1], self.lam, self.eps)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.points)))


def as_subset(members: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    """Normalise to a nonempty, strictly increasing tuple of point indices."""
    out = tuple(sorted({int(m) for m in members}))
    if not out:
        raise BadParams("subset must be nonempty")
    if n is not None and (out[0] < 0 or out[-1] >= n):
        raise BadParams(f"subset index out of range for n={n}", indices=out)
    return out


# --------------------------------------------------------------------------
# construction


def validate_metric(matrix, scale: int = 1) -> FiniteMetricSpace:
    """Check the metric axioms on an integer matrix and wrap it.

    Errors are raised in the order asymmetry, negativity, diagonal,
    off-diagonal zeros, triangle inequality; each carries the lexicographically
    first offending indices.
    """
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.mod(arr, 1) == 0):
            raise ValueError("distance matrix entries must be integers (distance * scale)")
    arr = arr.astype(np.int64)
    if scale < 1:
        raise BadParams(f"scale must be a positive integer, got {scale}")
    n = arr.shape[0]

    bad = np.argwhere(arr != arr.T)
    if len(bad):
        x, y = bad[0]
        raise AsymmetricEntry(f"d({x},{y}) != d({y},{x})", (x, y), (arr[x, y], arr[y, x]))
    bad = np.argwhere(arr < 0)
    if len(bad):
        x, y = bad[0]
        raise NegativeEntry(f"d({x},{y}) < 0", (x, y), (arr[x, y],))
    diag = np.flatnonzero(np.diag(arr) != 0)
    if len(diag):
        x = diag[0]
        raise NonzeroDiagonal(f"d({x},{x}) != 0", (x, x), (arr[x, x],))
    bad = np.argwhere((arr == 0) & ~np.eye(n, dtype=bool))
    if len(bad):
        x, y = bad[0]
        raise ZeroOffDiagonal(f"d({x},{y}) == 0 for distinct points", (x, y))
    for x in range(n):
        # viol[y, z]: d(x,z) > d(x,y) + d(y,z)
        viol = arr[x][None, :] > arr[x][:, None] + arr
        hit = np.argwhere(viol)
        if len(hit):
            y, z = hit[0]
            raise TriangleViolation(
                f"d({x},{z}) > d({x},{y}) + d({y},{z})", (x, y, z), (arr[x, z], arr[x, y], arr[y, z])
            )
    return FiniteMetricSpace(arr, scale)


def graph_metric(g: Graph) -> FiniteMetricSpace:
    """Shortest-path metric of a connected graph (scale 1)."""
    if g.n == 0:
        raise BadParams("graph has no vertices")
    rows = [u for u, v in g.edges] + [v for u, v in g.edges]
    cols = [v for u, v in g.edges] + [u for u, v in g.edges]
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
    ncomp, labels = connected_components(adj, directed=False)
    if ncomp > 1:
        comp = np.flatnonzero(labels == labels[0])
        raise Disconnected(f"graph has {ncomp} components", comp)
    dist = shortest_path(adj, method="D", unweighted=True, directed=False)
    return FiniteMetricSpace(dist.astype(np.int64), 1)


def graph_of_space(X: FiniteMetricSpace) -> Graph:
    """The unit-step graph: edges between points at distance at most one unit."""
    mask = np.triu(X.dist <= X.scale, k=1)
    return Graph(X.n, [tuple(e) for e in np.argwhere(mask)])


# --------------------------------------------------------------------------
# file formats


def read_metric_csv(text: str) -> FiniteMetricSpace:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].replace(" ", "").startswith("scale="):
        raise BadParams("metric file must start with 'scale=Q'")
    scale = int(lines[0].split("=", 1)[1])
    rows = [[int(v) for v in ln.split(",")] for ln in lines[1:]]
    return validate_metric(np.array(rows, dtype=np.int64).reshape(len(rows), -1), scale)


def write_metric_csv(X: FiniteMetricSpace) -> str:
    out = [f"scale={X.scale}"] + [",".join(str(int(v)) for v in row) for row in X.dist]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# balls and geodesics


def ball_members(X: FiniteMetricSpace, b: Ball) -> tuple[int, ...]:
    """Closed ball as a sorted tuple of points."""
    return tuple(int(v) for v in np.flatnonzero(X.dist[b.center] <= b.radius))


def interval(X: FiniteMetricSpace, x: int, y: int) -> np.ndarray:
    """Boolean mask of points lying on some geodesic from x to y."""
    return X.dist[x] + X.dist[:, y] == X.dist[x, y]


def geodesic_path(X: FiniteMetricSpace, x: int, y: int) -> tuple[int, ...]:
    """Lexicographically first unit-step geodesic from x to y."""
    path = [x]
    cur = x
    while cur != y:
        target = X.dist[cur, y] - X.scale
        for z in X.neighbors(cur):
            if X.dist[cur, z] == X.scale and X.dist[z, y] == target:
                cur = z
                break
        else:
            raise BadParams(f"no unit-step geodesic from {x} to {y}", indices=(x, y))
        path.append(cur)
    return tuple(path)


def geodesic_paths(X: FiniteMetricSpace, x: int, y: int) -> Iterator[tuple[int, ...]]:
    """All unit-step geodesics from x to y in lexicographic order."""
    path = [x]

    def rec(cur):
        if cur == y:
            yield tuple(path)
            return
        target = X.dist[cur, y] - X.scale
        for z in X.neighbors(cur):
            if X.dist[cur, z] == X.scale and X.dist[z, y] == target:
                path.append(z)
                yield from rec(z)
                path.pop()

    yield from rec(x)


# --------------------------------------------------------------------------
# quasi-geodesics


def min_gap_distances(X: FiniteMetricSpace, lam, eps, max_gap: int) -> list[int]:
    """``t[g]`` = least scaled distance allowed between path points g steps apart.

    From g/lam - eps <= d/scale with d an integer: d >= ceil(scale*(g/lam - eps)).
    """
    lam, eps = Fraction(lam), Fraction(eps)
    return [max(0, math.ceil(X.scale * (Fraction(g) / lam - eps))) for g in range(max_gap + 1)]


def max_length(X: FiniteMetricSpace, x: int, y: int, lam, eps) -> int:
    """Longest unit-step path from x to y that can satisfy the lower bound at its ends."""
    lam, eps = Fraction(lam), Fraction(eps)
    return math.floor(lam * (Fraction(X.d(x, y), X.scale) + eps))


def is_quasi_geodesic(X: FiniteMetricSpace, path: DiscretePath) -> tuple[bool, tuple[int, int] | None]:
    """Check unit steps and the lower quasi-geodesic bound on all pairs.

    Returns ``(True, None)`` or ``(False, (i, j))`` with the violating pair that
    minimises j, then i.
    """
    pts = np.asarray(path.points)
    L = len(pts) - 1
    if L == 0:
        return True, None
    thr = np.asarray(min_gap_distances(X, path.lam, path.eps, L))
    sub = X.dist[np.ix_(pts, pts)]
    idx = np.arange(L + 1)
    gap = idx[None, :] - idx[:, None]
    bad = (gap > 0) & (sub < thr[np.clip(gap, 0, L)])
    steps = np.diagonal(sub, offset=1) > X.scale
    bad[idx[:-1], idx[1:]] |= steps
    hits = np.argwhere(bad.T)  # rows ordered by j, then i
    if len(hits):
        j, i = hits[0]
        return False, (int(i), int(j))
    return True, None


def quasi_geodesic_slack(X: FiniteMetricSpace, points: Sequence[int], lam=1, eps=0) -> Fraction:
    """min over i < j of d(p_i, p_j) - ((j - i)/lam - eps), in unscaled units.

    Nonnegative iff the lower quasi-geodesic bound holds; unit steps are not
    checked.  A single point has slack 0.
    """
    lam, eps = Fraction(lam), Fraction(eps)
    pts = np.asarray(points)
    if len(pts) < 2:
        return Fraction(0)
    a, b = lam.numerator, lam.denominator
    c, e = eps.numerator, eps.denominator
    Q = X.scale
    idx = np.arange(len(pts))
    gap = idx[None, :] - idx[:, None]
    # slack * Q*a*e = d*a*e - gap*b*Q*e + c*Q*a
    num = X.dist[np.ix_(pts, pts)] * (a * e) - gap * (b * Q * e) + c * Q * a
    return Fraction(int(num[gap > 0].min()), Q * a * e)


class _QGSearch:
    """Depth-first search over unit-step (lam, eps)-quasi-geodesics ending at ``y``.

    A partial path p_0..p_j forbids every z with d(p_i, z) < t[j+1-i] for some
    i, since t is nondecreasing.  A child must be outside the forbidden set and
    still able to reach ``y`` through non-forbidden points in the steps left.
    """

    def __init__(self, X: FiniteMetricSpace, lam, eps, budget: int | None):
        self.X = X
        self.lam, self.eps = Fraction(lam), Fraction(eps)
        self.budget = budget
        self.nodes = 0
        self.allow_stay = Fraction(1) / self.lam - self.eps <= 0
        self._adj = [X.neighbors(v) for v in range(X.n)]

    def _tick(self, partial):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted", partial=partial, nodes=self.nodes)

    def _forbidden(self, path, thr):
        j = len(path) - 1
        gaps = np.array([thr[min(j + 1 - i, len(thr) - 1)] for i in range(j + 1)])
        return (self.X.dist[path] < gaps[:, None]).any(axis=0)

    def _dist_to_target(self, y, forbidden):
        n = self.X.n
        out = np.full(n, n + 1, dtype=np.int64)
        if forbidden[y]:
            return out
        out[y] = 0
        dq = deque([y])
        while dq:
            u = dq.popleft()
            for v in self._adj[u]:
                if out[v] > n and not forbidden[v]:
                    out[v] = out[u] + 1
                    dq.append(v)
        return out

    def children(self, path, y, Lmax, thr):
        """Admissible next points, ascending, plus the target-distance vector."""
        j = len(path) - 1
        if j >= Lmax:
            return [], None
        forbidden = self._forbidden(path, thr)
        dt = self._dist_to_target(y, forbidden)
        left = Lmax - (j + 1)
        cur = path[-1]
        cand = list(self._adj[cur])
        if self.allow_stay:
            cand = sorted(cand + [cur])
        return [z for z in cand if not forbidden[z] and dt[z] <= left], dt


def enumerate_quasi_geodesics(
    X: FiniteMetricSpace, x: int, y: int, lam=1, eps=0, budget: int | None = 10**6
) -> Iterator[DiscretePath]:
    """Yield every unit-step (lam, eps)-quasi-geodesic from x to y once, lexicographically.

    ``budget`` bounds node expansions; exhausting it raises
    :class:`BudgetExceeded` whose ``partial`` is the number of paths emitted.
    """
    if x == y:
        raise BadParams("enumeration needs distinct endpoints", indices=(x, y))
    yield from _enumerate(X, x, y, lam, eps, budget)


def _enumerate(X, x, y, lam, eps, budget):
    search = _QGSearch(X, lam, eps, budget)
    Lmax = max_length(X, x, y, lam, eps)
    thr = min_gap_distances(X, lam, eps, Lmax + 1)
    path = [x]
    emitted = 0
    # explicit stack of child iterators keeps deep paths off the recursion limit
    search._tick(emitted)
    stack = [iter(search.children(path, y, Lmax, thr)[0])]
    while stack:
        try:
            z = next(stack[-1])
        except StopIteration:
            stack.pop()
            path.pop()
            continue
        search._tick(emitted)
        path.append(z)
        if z == y:
            emitted += 1
            yield DiscretePath(path, lam, eps)
        stack.append(iter(search.children(path, y, Lmax, thr)[0]))

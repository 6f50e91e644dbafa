"""Coarse projections, strong contraction, Morse constants and 4-point hyperbolicity.

All quantities are exact scaled integers.  ``slack`` is the additive
tolerance in the coarse closest-point projection; ``None`` means one unit
(``X.scale``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, NotConcatenable, TooFewPoints
from .metric import (
    Ball,
    DiscretePath,
    FiniteMetricSpace,
    _QGSearch,
    as_subset,
    ball_members,
    is_quasi_geodesic,
    max_length,
    min_gap_distances,
)


def _slack(X: FiniteMetricSpace, slack) -> int:
    return X.scale if slack is None else int(slack)


def _json_value(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    return v


@dataclass
class ContractionReport:
    constant: int
    ball: Ball | None
    pair: tuple[int, int] | None
    scale: int = 1
    vacuous: bool = False

    def to_json(self) -> dict[str, Any]:
        w = {}
        if self.ball is not None:
            w = {"ball": list(self.ball), "pair": list(self.pair)}
        return {"invariant": "contraction", "value": self.constant, "scale": self.scale,
                "witnesses": w, "vacuous": self.vacuous}


@dataclass
class MorseReport:
    lam: Fraction
    eps: Fraction
    constant: int
    path: DiscretePath | None
    point: int | None
    exact: bool = True
    nodes: int = 0
    scale: int = 1
    vacuous: bool = False

    def to_json(self) -> dict[str, Any]:
        w = {"lambda": _json_value(self.lam), "eps": _json_value(self.eps), "exact": self.exact}
        if self.path is not None:
            w["path"] = list(self.path.points)
            w["point"] = self.point
        return {"invariant": "morse", "value": self.constant, "scale": self.scale,
                "witnesses": w, "vacuous": self.vacuous}


@dataclass
class HyperbolicityReport:
    delta: int
    quadruple: tuple[int, int, int, int] | None
    scale: int = 1
    vacuous: bool = False

    def to_json(self) -> dict[str, Any]:
        w = {} if self.quadruple is None else {"quadruple": list(self.quadruple)}
        return {"invariant": "gromov_delta", "value": self.delta, "scale": self.scale,
                "witnesses": w, "vacuous": self.vacuous}


# --------------------------------------------------------------------------
# projections


def projection_matrix(X: FiniteMetricSpace, Y: Sequence[int], slack=None) -> np.ndarray:
    """``P[x, k]`` is True iff ``Y[k]`` lies in the coarse projection of x."""
    s = _slack(X, slack)
    DY = X.dist[:, list(Y)]
    return DY <= DY.min(axis=1, keepdims=True) + s


def coarse_projection(X: FiniteMetricSpace, Y: Sequence[int], x: int, slack=None) -> tuple[int, ...]:
    """Points of Y within d(x, Y) + slack of x."""
    Y = as_subset(Y, X.n)
    d = X.dist[x, list(Y)]
    keep = d <= d.min() + _slack(X, slack)
    return tuple(y for y, k in zip(Y, keep) if k)


def projection_of_set(X: FiniteMetricSpace, Y: Sequence[int], B: Iterable[int], slack=None) -> tuple[int, ...]:
    Y = as_subset(Y, X.n)
    B = list(B)
    if not B:
        return ()
    P = projection_matrix(X, Y, slack)[B].any(axis=0)
    return tuple(y for y, k in zip(Y, P) if k)


def diameter_of(X: FiniteMetricSpace, S: Sequence[int]) -> int:
    S = list(S)
    return int(X.dist[np.ix_(S, S)].max()) if S else 0


def _first_diameter_pair(X, S, diam):
    sub = X.dist[np.ix_(S, S)]
    i, j = np.argwhere(sub == diam)[0]
    a, b = S[i], S[j]
    return (min(a, b), max(a, b))


# --------------------------------------------------------------------------
# strong contraction


def contraction_constant(X: FiniteMetricSpace, Y: Sequence[int], slack=None) -> ContractionReport:
    """Largest diameter of the projection of a ball disjoint from Y.

    Ball composition around a center x only changes at radii d(x, z), so the
    candidate radii are those below d(x, Y).  Ties go to the smallest center,
    then the smallest radius, then the smallest pair.
    """
    Y = list(as_subset(Y, X.n))
    P = projection_matrix(X, Y, slack)
    dY = X.dist[:, Y].min(axis=1)
    DYY = X.dist[np.ix_(Y, Y)]
    best, best_ball, best_set = -1, None, None
    for x in range(X.n):
        if dY[x] == 0:
            continue
        row = X.dist[x]
        order = np.argsort(row, kind="stable")
        union = np.zeros(len(Y), dtype=bool)
        diam = 0
        k = 0
        while k < X.n and row[order[k]] < dY[x]:
            r = row[order[k]]
            new = np.zeros(len(Y), dtype=bool)
            while k < X.n and row[order[k]] == r:
                new |= P[order[k]]
                k += 1
            new &= ~union
            if new.any():
                union |= new
                diam = max(diam, int(DYY[np.ix_(new, union)].max()))
            if diam > best:
                best, best_ball, best_set = diam, Ball(x, int(r)), union.copy()
    if best_ball is None:
        return ContractionReport(0, None, None, X.scale, vacuous=True)
    S = [Y[k] for k in np.flatnonzero(best_set)]
    return ContractionReport(best, best_ball, _first_diameter_pair(X, S, best), X.scale)


def is_strongly_contracting(X: FiniteMetricSpace, Y: Sequence[int], D: int, slack=None) -> bool:
    return contraction_constant(X, Y, slack).constant <= D


def check_contraction_witness(X: FiniteMetricSpace, Y, report: ContractionReport, slack=None) -> bool:
    """Replay a contraction witness: ball misses Y, pair in its projection at the stated distance."""
    if report.ball is None:
        return report.constant == 0
    members = ball_members(X, report.ball)
    if set(members) & set(Y):
        return False
    proj = set(projection_of_set(X, Y, members, slack))
    a, b = report.pair
    return a in proj and b in proj and X.d(a, b) == report.constant


# --------------------------------------------------------------------------
# Morse constants


def morse_constant(
    X: FiniteMetricSpace, Y: Sequence[int], lam=1, eps=0, budget: int | None = 2 * 10**5
) -> MorseReport:
    """Farthest excursion from Y of a unit-step (lam, eps)-quasi-geodesic with ends on Y.

    Branch and bound over paths between every pair of Y-points.  A branch is
    cut when no point it can still visit (and return from) is farther from Y
    than the best complete path found.  If ``budget`` node expansions run out
    the result is a lower bound with ``exact=False``.
    """
    Y = list(as_subset(Y, X.n))
    lam, eps = Fraction(lam), Fraction(eps)
    dY = X.dist[:, Y].min(axis=1)
    report = MorseReport(lam, eps, 0, DiscretePath([Y[0]], lam, eps), Y[0], scale=X.scale)
    if len(Y) == X.n:
        return report
    search = _QGSearch(X, lam, eps, budget)
    state = {"best": 0, "path": report.path, "point": report.point}
    ceiling = int(dY.max())
    pairs = [(a, b) for a, b in combinations(Y, 2)]
    if search.allow_stay or max_length(X, Y[0], Y[0], lam, eps) >= 2:
        pairs = [(a, a) for a in Y] + pairs
    # far pairs first: they admit the longest excursions
    pairs.sort(key=lambda ab: (-X.d(*ab), ab))
    try:
        for a, b in pairs:
            if state["best"] >= ceiling:
                break
            _morse_pair(X, search, a, b, lam, eps, dY, state)
    except BudgetExceeded:
        report.exact = False
    report.constant = state["best"]
    report.path = state["path"]
    report.point = state["point"]
    report.nodes = search.nodes
    return report


def _morse_pair(X, search, a, b, lam, eps, dY, state):
    Lmax = max_length(X, a, b, lam, eps)
    if Lmax < 1:
        return
    thr = min_gap_distances(X, lam, eps, Lmax + 1)
    reach = X.dist // X.scale  # lower bound on steps between points
    path = [a]
    far = [int(dY[a])]

    def bound(dt, cur, left):
        ok = dt + reach[cur] <= left
        return int(dY[ok].max()) if ok.any() else -1

    def rec():
        search._tick(state["best"])
        cur = path[-1]
        if cur == b and len(path) > 1 and far[-1] > state["best"]:
            state["best"] = far[-1]
            state["path"] = DiscretePath(path, lam, eps)
            state["point"] = _argfirst(path, dY, far[-1])
        kids, dt = search.children(path, b, Lmax, thr)
        if not kids:
            return
        left = Lmax - len(path)
        if max(far[-1], bound(dt, cur, left + 1)) <= state["best"]:
            return
        kids.sort(key=lambda z: (-int(dY[z]), z))
        for z in kids:
            path.append(z)
            far.append(max(far[-1], int(dY[z])))
            rec()
            path.pop()
            far.pop()
            if state["best"] >= int(dY.max()):
                return

    rec()


def _argfirst(path, dY, value):
    for p in path:
        if dY[p] == value:
            return p
    return path[0]


# --------------------------------------------------------------------------
# hyperbolicity


def gromov_delta(X: FiniteMetricSpace, S: Sequence[int] | None = None) -> HyperbolicityReport:
    """Largest 4-point defect over quadruples of S (largest pairing sum minus the runner-up).

    The witness (x, y, w, z) is the lexicographically first sorted quadruple
    achieving the maximum, reordered so that d(x,y) + d(w,z) is the largest sum.
    """
    pts = list(range(X.n)) if S is None else list(as_subset(S, X.n))
    m = len(pts)
    if m < 4:
        raise TooFewPoints(f"need at least 4 points, got {m}", indices=pts)
    D = X.dist[np.ix_(pts, pts)]
    best, arg = -1, None
    for a in range(m - 3):
        for b in range(a + 1, m - 2):
            c, d = np.triu_indices(m - b - 1, k=1)
            c, d = c + b + 1, d + b + 1
            s1 = D[a, b] + D[c, d]
            s2 = D[a, c] + D[b, d]
            s3 = D[a, d] + D[b, c]
            top = np.maximum(np.maximum(s1, s2), s3)
            low = np.minimum(np.minimum(s1, s2), s3)
            defect = 2 * top - (s1 + s2 + s3 - low)
            k = int(np.argmax(defect))
            if defect[k] > best:
                best, arg = int(defect[k]), (a, b, int(c[k]), int(d[k]))
    a, b, c, d = arg
    pairings = [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))]
    top = max(pairings, key=lambda p: D[p[0]] + D[p[1]])
    quad = tuple(pts[i] for i in (*top[0], *top[1]))
    return HyperbolicityReport(best, quad, X.scale)


def four_point_defect(X: FiniteMetricSpace, x: int, y: int, w: int, z: int) -> int:
    sums = sorted([X.d(x, y) + X.d(w, z), X.d(x, z) + X.d(w, y), X.d(x, w) + X.d(y, z)])
    return sums[2] - sums[1]


def delta_with_added_points(X: FiniteMetricSpace, Y: Sequence[int], x: int, y: int) -> HyperbolicityReport:
    return gromov_delta(X, set(Y) | {x, y})


# --------------------------------------------------------------------------
# local-to-global diagnostics


def bounded_jump_check(
    X: FiniteMetricSpace, gamma1: DiscretePath, gamma2: DiscretePath, x: int, Dprime: int, slack=None
) -> tuple[bool, dict]:
    """Bounded-jump property at x for the concatenation gamma1 * gamma2.

    If every point of the projection of x to gamma1 is at least ``Dprime``
    from the junction p, every point of the projection to gamma2 must be
    within ``Dprime`` of p.
    """
    if gamma1.end != gamma2.start:
        raise NotConcatenable(f"gamma1 ends at {gamma1.end}, gamma2 starts at {gamma2.start}",
                              indices=(gamma1.end, gamma2.start))
    p = gamma1.end
    pi1 = coarse_projection(X, gamma1.support(), x, slack)
    pi2 = coarse_projection(X, gamma2.support(), x, slack)
    near1 = min(X.d(q, p) for q in pi1)
    far2 = max(X.d(q, p) for q in pi2)
    info = {"x": x, "p": p, "d_pi1_p": near1, "max_d_pi2_p": far2}
    if near1 < Dprime:
        info["vacuous"] = True
        return True, info
    info["vacuous"] = False
    if far2 <= Dprime:
        return True, info
    info["far_point"] = next(q for q in pi2 if X.d(q, p) == far2)
    return False, info


def local_contraction_scan(
    X: FiniteMetricSpace, path: DiscretePath, L: int, D: int, k=1, c=0, slack=None,
    _cache: dict | None = None,
) -> tuple[bool, dict | None]:
    """Check every window [s, t] with 0 < t - s <= L.

    Each window must be a (k, c)-quasi-geodesic and its point set must be
    D-strongly contracting.  Returns the first failing window in (s, t) order.
    """
    if L < 1:
        raise ValueError("window length L must be >= 1")
    cache = {} if _cache is None else _cache
    pts = path.points
    for s in range(len(pts)):
        for t in range(s + 1, min(len(pts), s + L + 1)):
            win = DiscretePath(pts[s : t + 1], k, c)
            ok, pair = is_quasi_geodesic(X, win)
            if not ok:
                return False, {"window": (s, t), "reason": "quasi_geodesic", "pair": (s + pair[0], s + pair[1])}
            key = (win.support(), slack)
            if key not in cache:
                cache[key] = contraction_constant(X, win.support(), slack).constant
            if cache[key] > D:
                return False, {"window": (s, t), "reason": "contraction", "constant": cache[key]}
    return True, None

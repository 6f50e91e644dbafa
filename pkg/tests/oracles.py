"""Slow brute-force reference implementations used only by the tests.

Nothing here imports the search or pruning code of the package; each oracle
works straight from the definitions.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction

import numpy as np


def bfs_metric(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    D = [[-1] * n for _ in range(n)]
    for s in range(n):
        D[s][s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if D[s][v] < 0:
                    D[s][v] = D[s][u] + 1
                    dq.append(v)
    return D


def is_qg(D, Q, path, lam, eps):
    """Unit steps plus (j - i)/lam - eps <= d(p_i, p_j)/Q for every i < j."""
    lam, eps = Fraction(lam), Fraction(eps)
    for a, b in zip(path, path[1:]):
        if D[a][b] > Q:
            return False
    for i in range(len(path)):
        for j in range(i + 1, len(path)):
            if Fraction(j - i) / lam - eps > Fraction(int(D[path[i]][path[j]]), Q):
                return False
    return True


def all_qg(D, Q, x, y, lam, eps):
    """Every unit-step (lam, eps)-quasi-geodesic from x to y with at least one step."""
    n = len(D)
    lam, eps = Fraction(lam), Fraction(eps)
    cap = math.floor(lam * (Fraction(int(D[x][y]), Q) + eps))
    out = []

    def rec(path):
        if len(path) > 1 and path[-1] == y and is_qg(D, Q, path, lam, eps):
            out.append(tuple(path))
        if len(path) - 1 >= cap:
            return
        for z in range(n):
            if D[path[-1]][z] <= Q:
                path.append(z)
                if is_qg(D, Q, path, lam, eps):
                    rec(path)
                path.pop()

    rec([x])
    return sorted(set(out))


def morse(D, Q, Y, lam, eps):
    dY = [min(D[v][y] for y in Y) for v in range(len(D))]
    best = 0
    for a in Y:
        for b in Y:
            for p in all_qg(D, Q, a, b, lam, eps):
                best = max(best, max(dY[v] for v in p))
    return best


def contraction(D, Y, slack):
    """max over balls missing Y of the diameter of their projection."""
    D = np.asarray(D)
    n = len(D)
    Y = list(Y)
    dY = D[:, Y].min(axis=1)
    proj = [{y for y in Y if D[x, y] <= dY[x] + slack} for x in range(n)]
    best = 0
    for c in range(n):
        for r in range(int(D.max()) + 1):
            ball = [v for v in range(n) if D[c, v] <= r]
            if any(v in Y for v in ball):
                break
            P = set().union(*(proj[v] for v in ball))
            best = max(best, max(D[a, b] for a in P for b in P))
    return int(best)


def delta(D, pts=None):
    pts = range(len(D)) if pts is None else pts
    best = 0
    for x, y, w, z in itertools.combinations(pts, 4):
        s = sorted([D[x][y] + D[w][z], D[x][w] + D[y][z], D[x][z] + D[y][w]])
        best = max(best, s[2] - s[1])
    return int(best)


def extremal_forms(D):
    """All integer vectors with f(x) = max_y d(x, y) - f(y), by exhaustive product."""
    D = np.asarray(D)
    ecc = D.max(axis=1)
    out = []
    for f in itertools.product(*[range(int(e) + 1) for e in ecc]):
        v = np.array(f)
        if np.array_equal((D - v[None, :]).max(axis=1), v):
            out.append(tuple(int(t) for t in f))
    return sorted(out)


def extremal_forms_vectorized(D):
    """Same as :func:`extremal_forms`, vectorised for up to a few hundred thousand vectors."""
    D = np.asarray(D)
    ecc = D.max(axis=1)
    grids = np.array(list(itertools.product(*[range(int(e) + 1) for e in ecc])), dtype=np.int64)
    tight = (D[None, :, :] - grids[:, None, :]).max(axis=2)
    keep = (tight == grids).all(axis=1)
    return sorted(tuple(int(t) for t in f) for f in grids[keep])


def balls(D):
    n = len(D)
    out = {}
    for c in range(n):
        for r in range(int(max(D[c])) + 1):
            key = frozenset(v for v in range(n) if D[c][v] <= r)
            out.setdefault(key, (c, r))
    return out


def helly_brute(D):
    """Every family of distinct balls that meets pairwise must meet totally."""
    fam = list(balls(D))
    for k in range(2, len(fam) + 1):
        for sub in itertools.combinations(fam, k):
            if all(a & b for a, b in itertools.combinations(sub, 2)) and not frozenset.intersection(*sub):
                return False
    return True


def geodesics(D, x, y):
    n = len(D)
    out = []

    def rec(path):
        cur = path[-1]
        if cur == y:
            out.append(tuple(path))
            return
        for z in range(n):
            if D[cur][z] == 1 and D[z][y] == D[cur][y] - 1:
                rec(path + [z])

    rec([x])
    return out

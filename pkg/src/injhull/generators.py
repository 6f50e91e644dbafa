"""Graph families used by the corpus and the command line."""

from __future__ import annotations

import random

from .errors import BadParams
from .metric import Graph


def path(n: int) -> Graph:
    _need(n >= 1, "path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    _need(n >= 3, "cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def grid(rows: int, cols: int) -> Graph:
    """Vertex r*cols + c sits at row r, column c."""
    _need(rows >= 1 and cols >= 1, "grid needs positive dimensions")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def king(rows: int, cols: int) -> Graph:
    """Grid plus both diagonals in every square (the l-infinity grid, a Helly graph)."""
    g = grid(rows, cols)
    edges = set(g.edges)
    for r in range(rows - 1):
        for c in range(cols - 1):
            v = r * cols + c
            edges.add((v, v + cols + 1))
            edges.add((v + 1, v + cols))
    return Graph(rows * cols, edges)


def tree_random(n: int, seed: int = 0) -> Graph:
    """Uniform random attachment tree: vertex i > 0 hangs off a random earlier vertex."""
    _need(n >= 1, "tree needs n >= 1")
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


def star_subdiv(arms: int, length: int) -> Graph:
    """Star with ``arms`` arms, each a path of ``length`` edges; center is vertex 0."""
    _need(arms >= 1 and length >= 1, "star needs arms >= 1 and length >= 1")
    edges = []
    v = 1
    for _ in range(arms):
        prev = 0
        for _ in range(length):
            edges.append((prev, v))
            prev = v
            v += 1
    return Graph(v, edges)


def caterpillar(spine: int, legs: int = 1) -> Graph:
    """Spine path 0..spine-1 with ``legs`` pendant vertices on every spine vertex."""
    _need(spine >= 1 and legs >= 0, "caterpillar needs spine >= 1 and legs >= 0")
    edges = [(i, i + 1) for i in range(spine - 1)]
    v = spine
    for i in range(spine):
        for _ in range(legs):
            edges.append((i, v))
            v += 1
    return Graph(v, edges)


GENERATORS = {
    "path": (path, 1),
    "cycle": (cycle, 1),
    "grid": (grid, 2),
    "king": (king, 2),
    "tree_random": (tree_random, 1),
    "star_subdiv": (star_subdiv, 2),
    "caterpillar": (caterpillar, 1),
}


def generate(kind: str, params, seed: int = 0) -> Graph:
    if kind not in GENERATORS:
        raise BadParams(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    fn, arity = GENERATORS[kind]
    params = [int(p) for p in params]
    if kind == "tree_random":
        if len(params) != 1:
            raise BadParams("tree_random takes one parameter n")
        return fn(params[0], seed)
    if kind == "caterpillar" and len(params) == 2:
        return fn(*params)
    if len(params) != arity:
        raise BadParams(f"{kind} takes {arity} parameter(s), got {len(params)}")
    return fn(*params)


def _need(cond: bool, msg: str):
    if not cond:
        raise BadParams(msg)

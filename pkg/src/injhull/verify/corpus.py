"""Test corpus: graphs and metric spaces with designated subsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .. import generators as gen
from ..errors import InjhullError
from ..helly import is_helly
from ..hull import HullGraph, hull_graph
from ..metric import FiniteMetricSpace, Graph, geodesic_path, graph_metric, graph_of_space


@dataclass(frozen=True)
class Designated:
    """A designated subset Y.

    ``path`` is an ordered geodesic through the members when Y is one.
    ``contracting`` is what the family is known to be (None if unknown);
    suites that need a contracting subset filter on it.
    """

    name: str
    members: tuple
    path: tuple | None = None
    contracting: bool | None = None


@dataclass
class Instance:
    id: str
    space: FiniteMetricSpace
    graph: Graph | None
    subsets: list
    family: str
    size: int
    tags: frozenset = frozenset()
    helly_claim: bool | None = None
    hull: HullGraph | None = None
    base_id: str | None = None
    hull_budget: int | None = None
    extras: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.space.n

    @cached_property
    def is_helly(self) -> bool:
        if "hull" in self.tags:
            return True  # verified by hull_graph
        if self.graph is None:
            return False
        return is_helly(self.graph)[0]

    @property
    def helly(self) -> bool:
        """Treated as Helly: the claim if one was made, else the computed answer."""
        return self.is_helly if self.helly_claim is None else self.helly_claim

    @property
    def is_tree(self) -> bool:
        return "tree" in self.tags

    def get_hull(self) -> HullGraph:
        if self.hull is None:
            self.hull = hull_graph(self.space, budget=self.hull_budget)
        return self.hull


@dataclass
class Corpus:
    instances: list

    def __iter__(self):
        return iter(self.instances)

    def __len__(self):
        return len(self.instances)

    def by_id(self, iid: str) -> Instance:
        for inst in self.instances:
            if inst.id == iid:
                return inst
        raise KeyError(iid)

    def families(self) -> dict:
        out: dict = {}
        for inst in self.instances:
            out.setdefault(inst.family, []).append(inst)
        for v in out.values():
            v.sort(key=lambda i: i.size)
        return out


def graph_instance(iid, g, subsets, family, size, tags=(), **kw) -> Instance:
    X = graph_metric(g)
    return Instance(iid, X, g, list(subsets), family, size, frozenset(tags), **kw)


def metric_instance(iid, X: FiniteMetricSpace, subsets, family, size, tags=(), **kw) -> Instance:
    return Instance(iid, X, graph_of_space(X) if X.scale == 1 else None, list(subsets), family,
                    size, frozenset(tags), **kw)


def _geo(g: Graph, a: int, b: int, name="geo", contracting=None) -> Designated:
    p = geodesic_path(graph_metric(g), a, b)
    return Designated(name, tuple(sorted(p)), p, contracting)


def _diametral_geodesic(g: Graph, contracting=True) -> Designated:
    X = graph_metric(g)
    D = X.dist
    a, b = divmod(int(D.argmax()), X.n)
    return _geo(g, min(a, b), max(a, b), "geo", contracting)


def staircase(n: int) -> tuple[int, ...]:
    """Bottom-left to top-right geodesic in the n x n grid, alternating right and up."""
    r = c = 0
    out = [0]
    while (r, c) != (n - 1, n - 1):
        if c <= r:
            c += 1
        else:
            r += 1
        out.append(r * n + c)
    return tuple(out)


def hull_instance(base: Instance) -> Instance:
    H = base.get_hull()
    subsets = []
    for s in base.subsets:
        path = None if s.path is None else tuple(H.embedding[p] for p in s.path)
        subsets.append(Designated(s.name, H.embed(s.members), path, s.contracting))
    tags = {"hull", "helly"} | ({"tree"} if base.is_tree else set())
    inst = Instance(f"hull({base.id})", H.space, H.graph, subsets, "hull_" + base.family, base.size,
                    frozenset(tags), hull=None, base_id=base.id)
    inst.extras["of"] = base.id
    return inst


def default_corpus(seed: int = 0, max_hull_base: int = 12, hull_budget: int | None = 10**7) -> Corpus:
    """Paths, cycles, random trees, grids, king strips, subdivided stars, caterpillars and hulls.

    Hulls are added for every base graph with at most ``max_hull_base``
    vertices, and for the whole caterpillar family.
    """
    insts: list[Instance] = []

    for n in range(2, 9):
        g = gen.path(n)
        insts.append(graph_instance(f"P{n}", g, [
            _geo(g, 0, n - 1, "whole", True),
            Designated("ends", (0, n - 1), None, None),
        ], "path", n, {"tree"}))

    for n in range(4, 11):
        g = gen.cycle(n)
        half = n // 2
        insts.append(graph_instance(f"C{n}", g, [
            Designated("arc", tuple(range(half + 1)), tuple(range(half + 1)), None),
        ], "cycle", n, {"cycle"}))

    for k, n in enumerate(range(6, 13)):
        g = gen.tree_random(n, seed * 1000 + k)
        insts.append(graph_instance(f"T{n}s{seed}", g, [_diametral_geodesic(g)], "tree_random", n, {"tree"}))

    for n in range(2, 7):
        g = gen.grid(2, n)
        insts.append(graph_instance(f"grid2x{n}", g, [
            Designated("bottom", tuple(range(n)), tuple(range(n)), True),
        ], "ladder", n, {"grid"}))

    for n in range(3, 7):
        g = gen.grid(n, n)
        st = staircase(n)
        insts.append(graph_instance(f"grid{n}x{n}", g, [
            Designated("staircase", tuple(sorted(st)), st, False),
            Designated("bottom", tuple(range(n)), tuple(range(n)), False),
        ], "square_grid", n, {"grid"}))

    for n in range(2, 7):
        g = gen.king(2, n)
        insts.append(graph_instance(f"king2x{n}", g, [
            Designated("bottom", tuple(range(n)), tuple(range(n)), True),
        ], "king_strip", n, {"king"}))

    for length in range(1, 5):
        g = gen.star_subdiv(3, length)
        # arms 1 and 2 meet at the center 0
        a, b = length, 2 * length
        insts.append(graph_instance(f"star3x{length}", g, [_geo(g, a, b, "arms", True)],
                                    "star_subdiv", length, {"tree"}))

    for spine in range(4, 11):
        g = gen.caterpillar(spine)
        insts.append(graph_instance(f"cat{spine}", g, [
            Designated("spine", tuple(range(spine)), tuple(range(spine)), True),
        ], "caterpillar", spine, {"tree"}))

    for inst in list(insts):
        if inst.n <= max_hull_base or inst.family == "caterpillar":
            inst.hull_budget = hull_budget
            try:
                insts.append(hull_instance(inst))
            except InjhullError as exc:
                inst.extras["hull_error"] = exc.witness.to_json()
    return Corpus(insts)


def small_corpus(seed: int = 0) -> Corpus:
    """A fast subset of the default corpus for smoke tests."""
    keep = {"P4", "P6", "C4", "C6", "C8", f"T8s{seed}", "grid2x4", "grid3x3", "grid4x4", "king2x4",
            "star3x2", "cat4", "cat5", "cat6"}
    full = default_corpus(seed)
    picked = [i for i in full if i.id in keep or (i.base_id in keep)]
    return Corpus(picked)

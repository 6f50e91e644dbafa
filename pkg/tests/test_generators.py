from __future__ import annotations

import pytest

from injhull import generators as gen
from injhull.errors import BadParams
from injhull.metric import graph_metric


def test_sizes():
    assert (gen.path(5).n, gen.path(5).m) == (5, 4)
    assert (gen.cycle(6).n, gen.cycle(6).m) == (6, 6)
    assert (gen.grid(3, 4).n, gen.grid(3, 4).m) == (12, 17)
    assert gen.king(3, 3).m == 12 + 8
    assert (gen.star_subdiv(3, 2).n, gen.star_subdiv(3, 2).m) == (7, 6)
    assert (gen.caterpillar(4, 2).n, gen.caterpillar(4, 2).m) == (12, 11)


def test_random_tree_is_seeded_tree():
    a, b = gen.tree_random(20, 3), gen.tree_random(20, 3)
    assert a == b and a.m == 19
    graph_metric(a)  # connected
    assert gen.tree_random(20, 4) != a


def test_generate_dispatch():
    assert gen.generate("grid", ["2", "3"]) == gen.grid(2, 3)
    assert gen.generate("caterpillar", [3]) == gen.caterpillar(3)
    assert gen.generate("tree_random", [6], seed=1) == gen.tree_random(6, 1)
    with pytest.raises(BadParams):
        gen.generate("moebius", [3])
    with pytest.raises(BadParams):
        gen.generate("grid", [3])
    with pytest.raises(BadParams):
        gen.cycle(2)

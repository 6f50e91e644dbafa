"""Helly recognition and tripods in Helly graphs."""

from __future__ import annotations

from injhull import generators as gen
from injhull.helly import is_helly, tripod
from injhull.hull import hull_graph
from injhull.metric import graph_metric

for name, g in (("C4", gen.cycle(4)), ("C5", gen.cycle(5)), ("king 3x3", gen.king(3, 3)),
                ("grid 3x3", gen.grid(3, 3)), ("star", gen.star_subdiv(3, 2))):
    ok, balls = is_helly(g)
    print(f"{name:9s} Helly={ok}" + ("" if ok else f"  witness balls (center, radius) {balls}"))

H = hull_graph(graph_metric(gen.cycle(6)))
print("hull of C6 is Helly:", is_helly(H)[0])
a, b, c = (H.embedding[i] for i in (0, 2, 4))
t = tripod(H, a, b, c)
print(f"tripod on the images of 0, 2, 4: center form {H.forms[t.center]}, radii {t.radii}, slack {t.slack}")

T = gen.star_subdiv(3, 3)
t = tripod(T, 3, 6, 9)
print("tripod on the three leaves of a star:", t.center, t.legs)

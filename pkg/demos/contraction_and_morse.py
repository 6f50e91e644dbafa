"""Contraction and Morse constants: a tree geodesic versus a grid staircase.

A geodesic in a tree stays uniformly contracting as the tree grows, while the
staircase geodesic of an n x n grid does not.  The Morse constants tell the
same story from the quasi-geodesic side.
"""

from __future__ import annotations

from injhull import generators as gen
from injhull.invariants import contraction_constant, gromov_delta, morse_constant
from injhull.metric import geodesic_path, graph_metric
from injhull.verify.corpus import staircase

print("caterpillar spines (trees)")
for spine in range(4, 9):
    X = graph_metric(gen.caterpillar(spine))
    Y = range(spine)
    D = contraction_constant(X, Y).constant
    M = morse_constant(X, Y, 9, 0)
    print(f"  spine {spine}: D = {D}  M(9,0) = {M.constant}  delta = {gromov_delta(X).delta}")

print("grid staircases")
for n in range(3, 7):
    X = graph_metric(gen.grid(n, n))
    Y = staircase(n)
    rep = contraction_constant(X, Y)
    M = morse_constant(X, Y, 3, 0)
    print(f"  {n}x{n}: D = {rep.constant} (ball {rep.ball})  M(3,0) = {M.constant}")

X = graph_metric(gen.cycle(8))
arc = geodesic_path(X, 0, 4)
rep = morse_constant(X, sorted(arc), 1, 0)
print(f"C8 half arc {arc}: M(1,0) = {rep.constant}, far geodesic {rep.path.points}")

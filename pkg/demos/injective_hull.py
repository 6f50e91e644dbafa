"""Integer injective hulls: enumerate extremal forms and build the hull graph."""

from __future__ import annotations

from injhull import generators as gen
from injhull.hull import hull_graph
from injhull.metric import graph_metric, validate_metric

H = hull_graph(graph_metric(gen.cycle(4)))
print("C4 hull forms:")
for i, f in enumerate(H.forms):
    nbrs = sorted(v for e in H.graph.edges if i in e for v in e if v != i)
    print(f"  {i}: {f}  neighbors {nbrs}")
print("embedding of C4:", H.embedding)

for n in range(4, 11):
    X = graph_metric(gen.cycle(n))
    H = hull_graph(X)
    h = int(H.space.dist[:, list(H.embedding)].min(axis=1).max())
    print(f"C{n}: {H.n} forms, {H.graph.m} edges, every form within {h} of the cycle")

T = graph_metric(gen.tree_random(10, seed=2))
print("random tree on 10 vertices: hull has", hull_graph(T).n, "forms")

X = validate_metric([[0, 2], [2, 0]])
print("segment of length 2:", hull_graph(X).forms)

"""Shared fixtures-in-plain-functions for the test suite."""

import numpy as np

from edgesync import WeightedGraph, random_connected_graph

# Canonical small graphs used all over the suite.
P2 = WeightedGraph(2, ((1, 2, 1.0),))
P3 = WeightedGraph(3, ((1, 2, 1.0), (2, 3, 1.0)))
C3 = WeightedGraph(3, ((1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)))

DOUBLE_INTEGRATOR_A = np.array([[0.0, 1.0], [0.0, 0.0]])
DOUBLE_INTEGRATOR_B = np.array([0.0, 1.0])


def shifted_union(g1, g2):
    """Disjoint union with g2's node labels offset past g1's."""
    edges = list(g1.edges)
    edges += [(k + g1.n, l + g1.n, w) for k, l, w in g2.edges]
    return WeightedGraph.from_pairs(g1.n + g2.n, edges)


def graph_family(count=100):
    """Deterministic mixed family: sizes 2..12, weights in [0.1, 6].

    Every fourth graph is disconnected (two random connected blocks),
    the rest come straight from the seeded generator with varying edge
    density, so trees and dense graphs both appear.
    """
    graphs = []
    for i in range(count):
        rng = np.random.default_rng(1000 + i)
        if i % 4 == 3:
            n1 = int(rng.integers(2, 7))
            n2 = int(rng.integers(2, 7))
            g1 = random_connected_graph(
                n1, float(rng.uniform(0.0, 0.8)), (0.1, 6.0),
                int(rng.integers(0, 2**31)))
            g2 = random_connected_graph(
                n2, float(rng.uniform(0.0, 0.8)), (0.1, 6.0),
                int(rng.integers(0, 2**31)))
            graphs.append(shifted_union(g1, g2))
        else:
            n = int(rng.integers(2, 13))
            graphs.append(random_connected_graph(
                n, float(rng.uniform(0.0, 0.9)), (0.1, 6.0),
                int(rng.integers(0, 2**31))))
    return graphs

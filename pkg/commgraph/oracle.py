"""
Brute-force reference for the commuting-graph engine.

Nothing here uses conjugacy classes, conjugator witnesses or cached
centralizers: the graph is built from a direct pairwise commutation test on
image arrays and handed to networkx for all-pairs shortest paths.
"""
import logging

import networkx as nx
import numpy as np

from .graph import (
    BALANCED,
    BALANCED_BOUND,
    DIAM_GT4,
    DIAMETER_BOUND,
    NEITHER,
    UNREACHED,
    BalancedWitness,
    as_distance,
)
from .group import OrderCapExceeded
from .utils import ORACLE_MAX_ORDER

logger = logging.getLogger(__name__)

DEFAULT_DIFF_LIMIT = 20


def _check_cap(group, cap):
    cap = ORACLE_MAX_ORDER if cap is None else cap
    if cap > ORACLE_MAX_ORDER:
        logger.warning(f"{group.name}: oracle cap raised to {cap}")
    if group.order > cap:
        raise OrderCapExceeded(
            f"{group.name}: order {group.order} exceeds the oracle cap of {cap}"
        )


def naive_commute_matrix(group):
    images = group.images
    n = group.order
    commute = np.zeros((n, n), dtype=bool)
    for x in range(n):
        img = images[x]
        commute[x] = np.all(images[:, img] == img[images], axis=1)
    return commute


def naive_product_table(group):
    """table[x, y] = index of xy, found through a private dict of image bytes."""
    index = {row.tobytes(): i for i, row in enumerate(group.images)}
    n = group.order
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        rows = group.images[:, group.images[x]]
        table[x] = [index[row.tobytes()] for row in rows]
    return table


def commuting_graph_nx(group, cap=None):
    _check_cap(group, cap)
    commute = naive_commute_matrix(group)
    graph = nx.Graph()
    graph.add_nodes_from(range(1, group.order))
    xs, ys = np.nonzero(np.triu(commute, k=1))
    graph.add_edges_from(
        (int(x), int(y)) for x, y in zip(xs, ys) if x != 0 and y != 0
    )
    return graph


def naive_distance_matrix(group, cap=None):
    """APSP over the networkx graph; unreachable pairs hold UNREACHED."""
    graph = commuting_graph_nx(group, cap)
    n = group.order
    matrix = np.full((n, n), UNREACHED, dtype=np.int32)
    for source, lengths in nx.all_pairs_shortest_path_length(graph):
        targets = np.fromiter(lengths.keys(), dtype=np.int64)
        matrix[source, targets] = np.fromiter(lengths.values(), dtype=np.int32)
    return matrix


def naive_components(group, cap=None):
    graph = commuting_graph_nx(group, cap)
    components = [np.array(sorted(c)) for c in nx.connected_components(graph)]
    return sorted(components, key=lambda c: c[0])


def naive_diameter(matrix):
    if matrix.shape[0] < 2:
        raise ValueError("The commuting graph has no vertices")
    return as_distance(matrix[1:, 1:].max())


def naive_balanced_pairs(group, matrix=None, products=None):
    """All ordered non-degenerate balanced pairs, by exhaustive search."""
    matrix = naive_distance_matrix(group) if matrix is None else matrix
    products = naive_product_table(group) if products is None else products
    inverse = np.array(
        [int(np.flatnonzero(products[x] == 0)[0]) for x in range(group.order)]
    )
    pairs = []
    ys = np.arange(group.order)
    for x in range(1, group.order):
        xy = products[x]
        xinvy = products[inverse[x]]
        ok = (
            (ys != 0)
            & (xy != 0)
            & (xinvy != 0)
            & (matrix[x, ys] > BALANCED_BOUND)
            & (matrix[x, xy] > BALANCED_BOUND)
            & (matrix[ys, xy] > BALANCED_BOUND)
            & (matrix[x, xinvy] > BALANCED_BOUND)
            & (matrix[ys, xinvy] > BALANCED_BOUND)
        )
        pairs.extend((x, int(y)) for y in np.flatnonzero(ok))
    return pairs


def naive_find_balanced_pair(group, matrix=None, products=None):
    pairs = naive_balanced_pairs(group, matrix, products)
    return pairs[0] if pairs else None


def naive_verdict(group, matrix=None):
    matrix = naive_distance_matrix(group) if matrix is None else matrix
    if naive_diameter(matrix) > DIAMETER_BOUND:
        return DIAM_GT4
    if naive_find_balanced_pair(group, matrix) is not None:
        return BALANCED
    return NEITHER


def verify_witness(group, witness, matrix=None, products=None):
    """Recompute the five distances of a witness from scratch."""
    matrix = naive_distance_matrix(group) if matrix is None else matrix
    products = naive_product_table(group) if products is None else products
    x, y = witness.x, witness.y
    inverse = int(np.flatnonzero(products[x] == 0)[0])
    xy, xinvy = products[x, y], products[inverse, y]
    recomputed = BalancedWitness(
        x,
        y,
        [matrix[x, y], matrix[x, xy], matrix[y, xy], matrix[x, xinvy], matrix[y, xinvy]],
    )
    return recomputed == witness and recomputed.is_balanced


class OracleDiff(object):
    """Differences between the engine and the brute-force oracle."""

    def __init__(self, group, mismatches, mismatch_count, components, diameter):
        self.group = group
        self.mismatches = mismatches
        self.mismatch_count = mismatch_count
        self.components = components
        self.diameter = diameter

    @property
    def passed(self):
        return (
            self.mismatch_count == 0
            and self.components[0] == self.components[1]
            and self.diameter[0] == self.diameter[1]
        )

    def to_dict(self):
        return {
            "group": self.group,
            "passed": self.passed,
            "mismatch_count": self.mismatch_count,
            "mismatches": [
                {"x": x, "y": y, "engine": a, "oracle": b}
                for x, y, a, b in self.mismatches
            ],
            "components": {"engine": self.components[0], "oracle": self.components[1]},
            "diameter": {"engine": self.diameter[0], "oracle": self.diameter[1]},
        }


def oracle_diff(graph, cap=None, limit=DEFAULT_DIFF_LIMIT):
    """
    Compare every distance, the component partition and the diameter of the
    engine against the oracle. At most `limit` mismatching pairs are listed;
    `mismatch_count` counts all of them.
    """
    group = graph.group
    _check_cap(group, cap)
    naive = naive_distance_matrix(group, cap)
    engine = graph.distance_matrix()

    diff = engine[1:, 1:] != naive[1:, 1:]
    xs, ys = np.nonzero(diff)
    mismatches = [
        (int(x) + 1, int(y) + 1, as_distance(engine[x + 1, y + 1]), as_distance(naive[x + 1, y + 1]))
        for x, y in zip(xs[:limit], ys[:limit])
    ]
    if len(xs):
        logger.warning(f"{group.name}: {len(xs)} distance mismatches")

    engine_components = [c.tolist() for c in graph.components()]
    oracle_components = [c.tolist() for c in naive_components(group, cap)]
    if group.order > 1:
        diameters = (graph.diameter(), naive_diameter(naive))
    else:
        diameters = (None, None)
    return OracleDiff(
        group.name,
        mismatches,
        int(len(xs)),
        (engine_components, oracle_components),
        diameters,
    )

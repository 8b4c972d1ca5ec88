"""
The commuting graph of a finite group: vertices are the non-identity
elements, edges join distinct commuting elements.

Conjugation is a graph automorphism, so every distance reduces to a BFS row
from a conjugacy class representative:
``d(x, y) = d(rep(x), y^g)`` with ``g = conjugator[x]``.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import utils
from .container import Container
from .group import is_simple

logger = logging.getLogger(__name__)

INFINITY = math.inf
UNREACHED = np.iinfo(np.int32).max

DIAM_GT4 = "DIAM_GT4"
BALANCED = "BALANCED"
NEITHER = "NEITHER"

BALANCED_BOUND = 3
DIAMETER_BOUND = 4


class DegeneratePairError(ValueError):
    pass


def as_distance(value):
    if value == UNREACHED or value == INFINITY:
        return INFINITY
    return int(value)


class DistanceRow(object):
    """
    Single-source distances indexed by element index. The identity slot
    holds UNREACHED and is not a vertex.
    """

    def __init__(self, source, dist):
        self.source = source
        self.dist = dist

    def __getitem__(self, y):
        if y == 0:
            raise ValueError("The identity is not a vertex of the commuting graph")
        return as_distance(self.dist[y])


class BalancedWitness(object):
    """The five distances of a pair (x, y) and whether all exceed 3."""

    fields = ["d_xy", "d_x_xy", "d_y_xy", "d_x_xinvy", "d_y_xinvy"]

    def __init__(self, x, y, distances):
        self.x = int(x)
        self.y = int(y)
        self.distances = tuple(as_distance(d) for d in distances)

    def __getattr__(self, name):
        if name in BalancedWitness.fields:
            return self.distances[BalancedWitness.fields.index(name)]
        raise AttributeError(name)

    @property
    def is_balanced(self):
        return all(d > BALANCED_BOUND for d in self.distances)

    def to_dict(self):
        return {"x": self.x, "y": self.y, "distances": list(self.distances)}

    def __eq__(self, other):
        return isinstance(other, BalancedWitness) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"BalancedWitness(x={self.x}, y={self.y}, distances={self.distances})"


class GraphReport(object):
    def __init__(
        self,
        group,
        order,
        classes,
        components,
        diameter,
        verdict,
        witness=None,
        skipped_pairs=0,
        simple=None,
        millis=None,
    ):
        self.group = group
        self.order = order
        self.classes = classes
        self.components = components
        self.diameter = diameter
        self.verdict = verdict
        self.witness = witness
        self.skipped_pairs = skipped_pairs
        self.simple = simple
        self.millis = millis

    def to_dict(self):
        d = {
            "group": self.group,
            "order": self.order,
            "classes": self.classes,
            "components": self.components,
            "diameter": self.diameter,
            "verdict": self.verdict,
        }
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        d["skipped_pairs"] = self.skipped_pairs
        if self.simple is not None:
            d["simple"] = self.simple
        if self.millis is not None:
            d["millis"] = self.millis
        return d

    def csv_row(self):
        return {
            "name": self.group,
            "order": self.order,
            "classes": self.classes,
            "components": self.components,
            "diameter": self.diameter,
            "verdict": self.verdict,
            "witness_x": None if self.witness is None else self.witness.x,
            "witness_y": None if self.witness is None else self.witness.y,
            "millis": self.millis,
        }


class CommGraph(Container):
    """
    The commuting graph of `group` with adjacency taken on the fly from
    centralizers. Immutable; caches are filled lazily.
    """

    cached_properties = ["_rows", "_components", "_balanced", "_matrix"]

    def __init__(self, group, settings=None):
        self.group = group
        self.settings = utils.resolve_settings(settings)

    @property
    def vertex_count(self):
        return self.group.order - 1

    def _check_vertex(self, x):
        if x == 0:
            raise ValueError("The identity is not a vertex of the commuting graph")
        if not 0 < x < self.group.order:
            raise ValueError(f"Vertex {x} out of range 1..{self.group.order - 1}")

    def neighbors(self, x):
        self._check_vertex(x)
        c = self.group.centralizer(x)
        return c[(c != 0) & (c != x)]

    def _bfs(self, x):
        dist = np.full(self.group.order, UNREACHED, dtype=np.int32)
        visited = np.zeros(self.group.order, dtype=bool)
        visited[0] = True
        visited[x] = True
        dist[x] = 0
        frontier = [x]
        level = 0
        while frontier:
            level += 1
            reached = np.concatenate([self.group.centralizer(v) for v in frontier])
            reached = np.unique(reached[~visited[reached]])
            visited[reached] = True
            dist[reached] = level
            frontier = reached.tolist()
        return dist

    def bfs_from(self, x):
        """Exact single-source distances by level-synchronous BFS."""
        self._check_vertex(x)
        return DistanceRow(x, self._bfs(x))

    @property
    def rows(self):
        """BFS rows from every class representative, indexed by class id."""
        if hasattr(self, "_rows"):
            return self._rows
        reps = [int(r) for r in self.group.class_reps[1:]]
        workers = self.settings["workers"]
        if workers > 1 and len(reps) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                computed = list(pool.map(self._bfs, reps))
        else:
            computed = [self._bfs(r) for r in reps]
        rows = [None] + computed
        for row in computed:
            row.setflags(write=False)
        logger.debug(f"{self.group.name}: computed {len(computed)} BFS rows")
        self._rows = rows
        return self._rows

    def distance(self, x, y):
        self._check_vertex(x)
        self._check_vertex(y)
        if x == y:
            return 0
        g = self.group
        row = self.rows[g.class_of[x]]
        return as_distance(row[g.conjugate(y, int(g.conjugator[x]))])

    def distances_from(self, x):
        """The full distance row of `x`, transported from its representative."""
        self._check_vertex(x)
        g = self.group
        row = self.rows[g.class_of[x]]
        return row[g.conjugate_all(int(g.conjugator[x]))]

    def distance_matrix(self):
        """All-pairs distances from the engine; row and column 0 are unused."""
        if hasattr(self, "_matrix"):
            return self._matrix
        n = self.group.order
        matrix = np.full((n, n), UNREACHED, dtype=np.int32)
        for x in range(1, n):
            matrix[x] = self.distances_from(x)
        self._matrix = matrix
        return self._matrix

    def eccentricity(self, x):
        self._check_vertex(x)
        row = self.rows[self.group.class_of[x]]
        return as_distance(row[1:].max())

    def components(self):
        """Connected components as sorted index arrays, ordered by smallest member."""
        if hasattr(self, "_components"):
            return self._components
        n = self.group.order
        label = np.full(n, -1, dtype=np.int64)
        components = []
        for v in range(1, n):
            if label[v] >= 0:
                continue
            members = np.flatnonzero(self._bfs(v) != UNREACHED)
            label[members] = len(components)
            components.append(members)
        self._components = components
        return self._components

    def diameter(self):
        """
        Largest eccentricity, taken over class representatives only since
        eccentricity is constant on conjugacy classes.
        """
        if self.vertex_count == 0:
            raise ValueError(f"{self.group.name}: the commuting graph has no vertices")
        return max(as_distance(row[1:].max()) for row in self.rows[1:])

    def five_distances(self, x, y):
        g = self.group
        xy = g.mul(x, y)
        xinvy = g.mul(int(g.inverse_index[x]), y)
        if xy == 0 or xinvy == 0:
            raise DegeneratePairError(
                f"Pair ({x}, {y}) is degenerate: xy or x^-1 y is the identity"
            )
        return (
            self.distance(x, y),
            self.distance(x, xy),
            self.distance(y, xy),
            self.distance(x, xinvy),
            self.distance(y, xinvy),
        )

    def is_balanced_pair(self, x, y):
        """
        Whether the distances d(x,y), d(x,xy), d(y,xy), d(x,x^-1y),
        d(y,x^-1y) all exceed 3. Returns the flag and the witness carrying
        the five values.
        """
        self._check_vertex(x)
        self._check_vertex(y)
        witness = BalancedWitness(x, y, self.five_distances(x, y))
        return witness.is_balanced, witness

    def _scan_pairs(self):
        g = self.group
        n = g.order
        skipped = 0
        for c in range(1, g.class_count):
            x = int(g.class_reps[c])
            row_x = self.rows[c]
            xy = g.left_multiply_all(x)
            xinvy = g.left_multiply_all(int(g.inverse_index[x]))
            degenerate = (xy == 0) | (xinvy == 0)
            degenerate[0] = False
            skipped += int(degenerate.sum())

            candidate = (
                (row_x > BALANCED_BOUND)
                & (row_x[xy] > BALANCED_BOUND)
                & (row_x[xinvy] > BALANCED_BOUND)
                & ~degenerate
            )
            candidate[0] = False
            for y in np.flatnonzero(candidate).tolist():
                ok, witness = self.is_balanced_pair(x, y)
                if ok:
                    logger.debug(f"{g.name}: balanced pair ({x}, {y})")
                    return witness, skipped
        return None, skipped

    def find_balanced_pair(self):
        """
        First balanced pair in (class representative, y) lexicographic order,
        or None. Pairs with xy = 1 or x^-1 y = 1 are skipped and counted in
        `skipped_pairs`.
        """
        if not hasattr(self, "_balanced"):
            self._balanced = self._scan_pairs()
        return self._balanced[0]

    @property
    def skipped_pairs(self):
        if not hasattr(self, "_balanced"):
            self.find_balanced_pair()
        return self._balanced[1]

    def hypothesis_check(self):
        """
        DIAM_GT4 when the diameter exceeds 4 (disconnected graphs included),
        else BALANCED with a witness when a balanced pair exists, else
        NEITHER.
        """
        if self.diameter() > DIAMETER_BOUND:
            return DIAM_GT4, None
        witness = self.find_balanced_pair()
        if witness is not None:
            return BALANCED, witness
        return NEITHER, None

    def report(self):
        record = {}
        with utils.stopwatch(record):
            verdict, witness = self.hypothesis_check()
            components = len(self.components())
            diameter = self.diameter()
            skipped = self.skipped_pairs if verdict != DIAM_GT4 else 0
            simple = is_simple(self.group)
        abelian = self.group.class_count == self.group.order
        if simple and not abelian and verdict == NEITHER:
            logger.warning(
                f"{self.group.name} is simple but neither has diameter > 4 "
                "nor a balanced pair"
            )
        return GraphReport(
            self.group.name,
            self.group.order,
            self.group.class_count,
            components,
            diameter,
            verdict,
            witness=witness,
            skipped_pairs=skipped,
            simple=simple,
            millis=record["millis"] if self.settings["timing"] else None,
        )

    def to_dict(self):
        return self.report().to_dict()

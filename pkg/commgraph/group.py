"""
Finite permutation groups, fully enumerated.

Composition is left to right: ``compose(p, q)`` applies ``p`` first, then
``q``, so ``compose(p, q).images[x] == q.images[p.images[x]]``. Products of
element indices (``Group.mul``) and conjugation ``x^g = g^-1 x g`` follow the
same convention.
"""
import json
import logging
import math
from collections import deque

import numpy as np

from . import utils
from .container import Container

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = utils.DEFAULT_MAX_ORDER
EXHAUSTIVE_CLOSURE_ORDER = 2000
DEFAULT_CLOSURE_SAMPLES = 10000


class InvalidGroupSpec(ValueError):
    pass


class OrderCapExceeded(ValueError):
    pass


def _bijection_error(images):
    degree = len(images)
    seen = set()
    for pos, x in enumerate(images):
        if not 0 <= x < degree:
            return f"position {pos}: point {x} out of range 0..{degree - 1}"
        if x in seen:
            return f"position {pos}: point {x} appears twice"
        seen.add(x)
    return None


class Permutation(object):
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        if len(images) == 0:
            raise InvalidGroupSpec("A permutation needs degree >= 1")
        error = _bijection_error(images)
        if error is not None:
            raise InvalidGroupSpec(f"Not a bijection: {error}")
        self.images = images

    @classmethod
    def identity(cls, degree):
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles, degree):
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        return cls(images)

    @property
    def degree(self):
        return len(self.images)

    @property
    def cycles(self):
        """Nontrivial cycles, each starting at its smallest point."""
        seen = set()
        cycles = []
        for start in range(self.degree):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self.images[x]
            if len(cycle) > 1:
                cycles.append(tuple(cycle))
        return cycles

    @property
    def order(self):
        return math.lcm(*(len(c) for c in self.cycles)) if self.cycles else 1

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.images))

    def __call__(self, point):
        return self.images[point]

    def __mul__(self, other):
        return compose(self, other)

    def __invert__(self):
        return invert(self)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __len__(self):
        return self.degree

    def __repr__(self):
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)
        return f"Permutation({body or '()'}, degree={self.degree})"


def compose(p, q):
    """Apply `p` first, then `q`."""
    if p.degree != q.degree:
        raise InvalidGroupSpec(
            f"Cannot compose permutations of degree {p.degree} and {q.degree}"
        )
    return Permutation(q.images[x] for x in p.images)


def invert(p):
    images = [0] * p.degree
    for x, y in enumerate(p.images):
        images[y] = x
    return Permutation(images)


class GroupSpec(object):
    """A named finite group given by permutation generators."""

    def __init__(self, name, generators, max_order=None):
        generators = tuple(generators)
        if len(generators) == 0:
            raise InvalidGroupSpec(f"{name}: generator list is empty")
        degrees = set(g.degree for g in generators)
        if len(degrees) > 1:
            raise InvalidGroupSpec(
                f"{name}: generators have mixed degrees {sorted(degrees)}"
            )
        if max_order is not None and max_order < 1:
            raise InvalidGroupSpec(f"{name}: max_order must be positive")
        self.name = name
        self.generators = generators
        self.max_order = max_order

    @property
    def degree(self):
        return self.generators[0].degree

    def to_dict(self):
        return {
            "name": self.name,
            "degree": self.degree,
            "generators": [list(g.images) for g in self.generators],
        }

    @classmethod
    def from_dict(cls, data, source="<spec>"):
        """
        Build a spec from the group-spec JSON object
        ``{"name": str, "degree": int, "generators": [[int, ...], ...]}``.
        Errors name the offending field.
        """
        if not isinstance(data, dict):
            raise InvalidGroupSpec(f"{source}: expected a JSON object")
        for key in ("name", "degree", "generators"):
            if key not in data:
                raise InvalidGroupSpec(f"{source}: missing field '{key}'")
        name, degree, raw = data["name"], data["degree"], data["generators"]
        if not isinstance(name, str):
            raise InvalidGroupSpec(f"{source}: field 'name' must be a string")
        if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
            raise InvalidGroupSpec(
                f"{source}: field 'degree' must be a positive integer"
            )
        if not isinstance(raw, list) or len(raw) == 0:
            raise InvalidGroupSpec(
                f"{source}: field 'generators' must be a nonempty list"
            )
        generators = []
        for i, images in enumerate(raw):
            field = f"{source}: generators[{i}]"
            if not isinstance(images, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in images
            ):
                raise InvalidGroupSpec(f"{field}: expected a list of integers")
            if len(images) != degree:
                raise InvalidGroupSpec(
                    f"{field}: has {len(images)} images, degree is {degree}"
                )
            error = _bijection_error(images)
            if error is not None:
                raise InvalidGroupSpec(f"{field}: not a bijection, {error}")
            generators.append(Permutation(images))
        max_order = data.get("max_order")
        if max_order is not None and (
            not isinstance(max_order, int)
            or isinstance(max_order, bool)
            or max_order < 1
        ):
            raise InvalidGroupSpec(
                f"{source}: field 'max_order' must be a positive integer"
            )
        return cls(name, generators, max_order=max_order)

    @classmethod
    def load(cls, path):
        with open(path, "r") as fp:
            text = fp.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidGroupSpec(f"{path}:{e.lineno}:{e.colno}: {e.msg}")
        return cls.from_dict(data, source=str(path))


class Group(Container):
    """
    A finite group with every element interned as a dense index.

    Elements are ordered canonically: identity first, then lexicographically
    by image array. All derived tables are filled in by `enumerate_group`.
    """

    cached_properties = ["_centralizers"]

    def __init__(self, name, images, generators):
        self.name = name
        self.images = images
        self.images.setflags(write=False)
        self.order, self.degree = images.shape
        if not np.array_equal(images[0], np.arange(self.degree)):
            raise ValueError("Element 0 must be the identity")
        self._build_lookup()

        self.inverse_index = self.lookup(utils.inverse_images(images))
        gens = np.array([g.images for g in generators], dtype=images.dtype)
        self.generators = self.lookup(gens)
        self._right = [self.lookup(s[images]) for s in gens]
        self._conj = []
        for s in gens:
            s_inv = np.argsort(s)
            self._conj.append(self.lookup(s[images[:, s_inv]]))

        self.class_of = None
        self.class_reps = None
        self.class_sizes = None
        self.conjugator = None

    def _build_lookup(self):
        # Mixed-radix keys keep lexicographic order, so the key array of the
        # canonically ordered elements is sorted and lookups are a binary
        # search. Degrees too large for int64 keys fall back to a dict.
        if self.degree ** self.degree < 2**63:
            self._weights = np.array(
                [self.degree**k for k in reversed(range(self.degree))], dtype=np.int64
            )
            self._keys = self.images.astype(np.int64) @ self._weights
            self._index = None
        else:
            self._weights = None
            self._keys = None
            self._index = {row.tobytes(): i for i, row in enumerate(self.images)}

    def lookup(self, rows, strict=True):
        """
        Indices of the elements whose image arrays are the rows of `rows`.
        Rows that are not group elements raise ValueError, or map to -1 when
        `strict` is False.
        """
        rows = np.asarray(rows)
        single = rows.ndim == 1
        rows = rows.reshape(-1, self.degree)
        if self._weights is not None:
            keys = rows.astype(np.int64) @ self._weights
            idx = np.searchsorted(self._keys, keys)
            clipped = np.minimum(idx, self.order - 1)
            missing = (idx >= self.order) | (self._keys[clipped] != keys)
            idx = np.where(missing, -1, clipped)
        else:
            rows = rows.astype(self.images.dtype)
            idx = np.array(
                [self._index.get(row.tobytes(), -1) for row in rows], dtype=np.int64
            )
            missing = idx < 0
        if strict and missing.any():
            raise ValueError(f"{self.name}: product left the element list")
        return int(idx[0]) if single else idx

    @property
    def class_count(self):
        return len(self.class_reps)

    def element(self, i):
        return Permutation(self.images[i])

    def index_of(self, perm):
        if perm.degree != self.degree:
            raise InvalidGroupSpec(
                f"{self.name}: permutation of degree {perm.degree}, "
                f"group has degree {self.degree}"
            )
        i = self.lookup(np.array(perm.images), strict=False)
        if i < 0:
            raise ValueError(f"{perm!r} is not an element of {self.name}")
        return i

    def mul(self, i, j):
        """Index of the product e_i e_j."""
        return self.lookup(self.images[j][self.images[i]])

    def conjugate(self, x, g):
        """Index of x^g = g^-1 x g."""
        g_img = self.images[g]
        g_inv = self.images[self.inverse_index[g]]
        return self.lookup(g_img[self.images[x][g_inv]])

    def conjugate_many(self, xs, g):
        g_img = self.images[g]
        g_inv = self.images[self.inverse_index[g]]
        return self.lookup(g_img[self.images[xs][:, g_inv]]).reshape(-1)

    def conjugate_all(self, g):
        """The index permutation x -> g^-1 x g over all elements."""
        return self.conjugate_many(np.arange(self.order), g)

    def left_multiply_all(self, x):
        """Indices of x y for every element y."""
        return self.lookup(self.images[:, self.images[x]])

    def right_multiply_all(self, x):
        """Indices of y x for every element y."""
        return self.lookup(self.images[x][self.images])

    def centralizer(self, x):
        return centralizer(self, x)

    def class_members(self, c):
        return np.flatnonzero(self.class_of == c)

    def class_summary(self):
        return [
            {
                "size": int(self.class_sizes[c]),
                "element_order": self.element(int(rep)).order,
                "rep": int(rep),
            }
            for c, rep in enumerate(self.class_reps)
        ]

    def to_dict(self):
        return {
            "name": self.name,
            "order": self.order,
            "degree": self.degree,
            "classes": self.class_summary(),
        }

    def __repr__(self):
        return f"<Group {self.name} order={self.order} degree={self.degree}>"


def enumerate_group(spec, max_order=None):
    """
    Breadth-first closure of the generators under right multiplication.

    The result is independent of everything but `spec` (generator order
    included), since elements are sorted canonically afterwards. The cap is
    the smaller of `max_order` and the spec's own.
    """
    caps = [c for c in (max_order, spec.max_order) if c is not None]
    cap = min(caps) if caps else DEFAULT_MAX_ORDER
    if cap < 1:
        raise OrderCapExceeded(f"{spec.name}: order exceeds the cap of {cap} elements")
    if cap > DEFAULT_MAX_ORDER:
        logger.warning(f"{spec.name}: order cap raised to {cap}")
    degree = spec.degree
    dtype = utils.image_dtype(degree)
    gens = np.array([g.images for g in spec.generators], dtype=dtype)

    identity = np.arange(degree, dtype=dtype)
    seen = {identity.tobytes()}
    found = [identity[None, :]]
    frontier = identity[None, :]
    while len(frontier):
        new_rows = []
        for s in gens:
            for row in s[frontier]:
                key = row.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                new_rows.append(row)
                if len(seen) > cap:
                    raise OrderCapExceeded(
                        f"{spec.name}: order exceeds the cap of {cap} elements"
                    )
        frontier = np.array(new_rows, dtype=dtype).reshape(-1, degree)
        found.append(frontier)

    images = np.concatenate(found)
    images = np.ascontiguousarray(images[utils.lexicographic_order(images)])
    logger.debug(f"{spec.name}: enumerated {len(images)} elements")

    group = Group(spec.name, images, spec.generators)
    conjugacy_classes(group)
    return group


def conjugacy_classes(group):
    """
    Partition the elements into conjugacy classes by orbit BFS under
    conjugation by the generators.

    The representative of a class is its smallest index. While walking an
    orbit, the word h with rep^h = e is carried along as a single element
    index, so ``conjugator[e] = h^-1`` satisfies
    ``conjugate(e, conjugator[e]) == rep``.
    """
    n = group.order
    class_of = [-1] * n
    word = [0] * n
    conj = [t.tolist() for t in group._conj]
    right = [t.tolist() for t in group._right]
    reps, sizes = [], []
    for e in range(n):
        if class_of[e] >= 0:
            continue
        c = len(reps)
        reps.append(e)
        class_of[e] = c
        queue = deque([e])
        size = 1
        while queue:
            v = queue.popleft()
            for s_conj, s_right in zip(conj, right):
                u = s_conj[v]
                if class_of[u] < 0:
                    class_of[u] = c
                    word[u] = s_right[word[v]]
                    queue.append(u)
                    size += 1
        sizes.append(size)

    group.class_of = np.array(class_of, dtype=np.int64)
    group.class_reps = np.array(reps, dtype=np.int64)
    group.class_sizes = np.array(sizes, dtype=np.int64)
    group.conjugator = group.inverse_index[np.array(word, dtype=np.int64)]
    for arr in (group.class_of, group.class_reps, group.class_sizes, group.conjugator):
        arr.setflags(write=False)

    bad = [s for s in sizes if n % s != 0]
    if bad:
        raise ValueError(f"{group.name}: class sizes {bad} do not divide {n}")
    logger.debug(f"{group.name}: {len(reps)} conjugacy classes")
    return group


def centralizer(group, x):
    """
    Sorted indices of the elements commuting with `x`.

    Computed exhaustively for class representatives only; any other element
    gets its representative's centralizer conjugated back by the conjugator
    witness. Results are cached per element.
    """
    cache = group.cached("_centralizers", dict)
    if x in cache:
        return cache[x]
    rep = int(group.class_reps[group.class_of[x]])
    if x == rep:
        img = group.images[x]
        mask = np.all(group.images[:, img] == img[group.images], axis=1)
        members = np.flatnonzero(mask)
    else:
        g_inv = int(group.inverse_index[group.conjugator[x]])
        members = np.sort(group.conjugate_many(centralizer(group, rep), g_inv))
    members.setflags(write=False)
    cache[x] = members
    return members


def center(group):
    """
    The elements alone in their conjugacy class, which is the intersection
    of all centralizers.
    """
    return np.flatnonzero(group.class_sizes[group.class_of] == 1)


def _as_index_array(group, subset):
    arr = np.unique(np.fromiter((int(a) for a in subset), dtype=np.int64))
    if len(arr) and (arr[0] < 0 or arr[-1] >= group.order):
        raise ValueError(f"{group.name}: element index out of range")
    return arr


def is_normal_subset(group, subset):
    arr = _as_index_array(group, subset)
    touched = np.unique(group.class_of[arr])
    return int(group.class_sizes[touched].sum()) == len(arr)


def is_subgroup(group, subset):
    arr = _as_index_array(group, subset)
    if len(arr) == 0 or arr[0] != 0:
        return False
    mask = np.zeros(group.order, dtype=bool)
    mask[arr] = True
    if not mask[group.inverse_index[arr]].all():
        return False
    rows = group.images[arr]
    for s in arr:
        products = group.lookup(rows[:, group.images[s]])
        if not mask[products].all():
            return False
    return True


def subgroup_closure(group, generators):
    """Sorted indices of the subgroup generated by the given elements."""
    gens = [int(g) for g in generators]
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    while len(frontier) and not mask.all():
        found = []
        for s in gens:
            products = group.lookup(group.images[s][group.images[frontier]])
            fresh = np.unique(products[~mask[products]])
            mask[fresh] = True
            found.append(fresh)
        frontier = np.concatenate(found) if found else np.array([], dtype=np.int64)
    return np.flatnonzero(mask)


def normal_closure(group, subset):
    arr = _as_index_array(group, subset)
    classes = np.unique(group.class_of[arr])
    gens = np.flatnonzero(np.isin(group.class_of, classes))
    return subgroup_closure(group, gens)


def is_simple(group):
    """True when the group is nontrivial and has no proper nontrivial normal subgroup."""
    if group.order == 1:
        return False
    for rep in group.class_reps[1:]:
        if len(normal_closure(group, [rep])) != group.order:
            return False
    return True


def normal_subset_stabilizer(group, subset):
    """
    X = {x : xA is contained in A} for a nonempty proper normal subset A.

    X is a proper normal subgroup of the group, trivial when the group is
    simple.
    """
    arr = _as_index_array(group, subset)
    if len(arr) == 0:
        raise ValueError(f"{group.name}: the subset is empty")
    if len(arr) == group.order:
        raise ValueError(f"{group.name}: the subset is the whole group")
    if not is_normal_subset(group, arr):
        raise ValueError(f"{group.name}: the subset is not closed under conjugation")

    mask = np.zeros(group.order, dtype=bool)
    mask[arr] = True
    rows = group.images[arr]
    stabilizer = [
        x
        for x in range(group.order)
        if mask[group.lookup(rows[:, group.images[x]])].all()
    ]
    return np.array(stabilizer, dtype=np.int64)


def check_closure(group, samples=None, seed=0):
    """
    Check that products of elements stay in the element list: exhaustively
    up to EXHAUSTIVE_CLOSURE_ORDER elements, on `samples` seeded random
    pairs otherwise. Returns the offending pairs.
    """
    n = group.order
    failures = []
    if samples is None and n <= EXHAUSTIVE_CLOSURE_ORDER:
        for x in range(n):
            products = group.lookup(group.images[:, group.images[x]], strict=False)
            failures.extend((x, int(y)) for y in np.flatnonzero(products < 0))
        return failures

    gen = utils.rng(seed)
    count = samples or DEFAULT_CLOSURE_SAMPLES
    xs = gen.integers(0, n, size=count)
    ys = gen.integers(0, n, size=count)
    rows = group.images[ys[:, None], group.images[xs]]
    products = group.lookup(rows, strict=False)
    failures.extend(
        (int(x), int(y)) for x, y, p in zip(xs, ys, products) if p < 0
    )
    return failures

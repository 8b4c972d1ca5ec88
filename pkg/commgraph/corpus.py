"""
Named groups for analysis runs: the classical families as permutation
generators, PSL(2, q) acting on the projective line, and group-spec files.
"""
import itertools
import logging
import math
import re
from functools import partial

import sympy

from .group import GroupSpec, InvalidGroupSpec, Permutation, enumerate_group
from .quatval import Quaternion

logger = logging.getLogger(__name__)

MAX_ALTERNATING_DEGREE = 9
MAX_SYMMETRIC_DEGREE = 9
MAX_CYCLIC_ORDER = 10_000
PSL2_FIELD_SIZES = (4, 5, 7, 8, 9, 11, 13, 16, 17, 19)

QUATERNION_UNITS = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]


class GaloisField(object):
    """
    GF(q) for a prime power q = p^k. Elements are the integers 0..q-1, read
    as base-p digit vectors of polynomials modulo a monic irreducible of
    degree k.
    """

    def __init__(self, q):
        factors = sympy.factorint(q) if q >= 2 else {}
        if len(factors) != 1:
            raise ValueError(f"{q} is not a prime power")
        ((p, k),) = factors.items()
        self.q, self.p, self.k = q, int(p), int(k)
        self.modulus = self._find_modulus()
        self._add = [[self._digits_add(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[self._poly_mul(a, b) for b in range(q)] for a in range(q)]
        self._inv = [None] + [self._mul[a].index(1) for a in range(1, q)]

    def _find_modulus(self):
        """Lower coefficients (constant first) of the first monic irreducible."""
        if self.k == 1:
            return [0]
        x = sympy.Symbol("x")
        for low in itertools.product(range(self.p), repeat=self.k):
            coeffs = [1] + list(reversed(low))
            if sympy.Poly(coeffs, x, modulus=self.p).is_irreducible:
                logger.debug(f"GF({self.q}): modulus {coeffs}")
                return list(low)
        raise ArithmeticError(f"No irreducible polynomial of degree {self.k}")

    def digits(self, a):
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def from_digits(self, digits):
        return sum((d % self.p) * self.p**i for i, d in enumerate(digits))

    def _digits_add(self, a, b):
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def _poly_mul(self, a, b):
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        # x^k = -(low[0] + low[1] x + ... )
        for deg in range(len(prod) - 1, self.k - 1, -1):
            c = prod[deg] % self.p
            prod[deg] = 0
            for i, m in enumerate(self.modulus):
                prod[deg - self.k + i] -= c * m
        return self.from_digits(prod[: self.k])

    def add(self, a, b):
        return self._add[a][b]

    def neg(self, a):
        return self._add[a].index(0)

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        return self._inv[a]

    def multiplicative_order(self, a):
        x, n = a, 1
        while x != 1:
            x = self.mul(x, a)
            n += 1
        return n

    def primitive(self):
        """The smallest generator of the multiplicative group."""
        for a in range(1, self.q):
            if self.multiplicative_order(a) == self.q - 1:
                return a
        raise ArithmeticError(f"GF({self.q}) has no primitive element")


def _cycle(points):
    return [tuple(points)]


def alternating(n):
    if not 1 <= n <= MAX_ALTERNATING_DEGREE:
        raise InvalidGroupSpec(
            f"alternating degree {n} outside 1..{MAX_ALTERNATING_DEGREE}"
        )
    if n < 3:
        return GroupSpec(f"A{n}", [Permutation.identity(n)])
    gens = [Permutation.from_cycles(_cycle([0, 1, 2]), n)]
    if n > 3:
        # (0 1 2) with (0 .. n-1) for odd n, with (1 .. n-1) for even n
        start = 0 if n % 2 else 1
        gens.append(Permutation.from_cycles(_cycle(range(start, n)), n))
    return GroupSpec(f"A{n}", gens)


def symmetric(n):
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise InvalidGroupSpec(
            f"symmetric degree {n} outside 1..{MAX_SYMMETRIC_DEGREE}"
        )
    if n == 1:
        return GroupSpec("S1", [Permutation.identity(1)])
    gens = [Permutation.from_cycles(_cycle([0, 1]), n)]
    if n > 2:
        gens.append(Permutation.from_cycles(_cycle(range(n)), n))
    return GroupSpec(f"S{n}", gens)


def dihedral(n):
    """The symmetries of a regular n-gon: order 2n acting on n points."""
    if n < 3:
        raise InvalidGroupSpec(f"dihedral group needs n >= 3, got {n}")
    rotation = Permutation([(x + 1) % n for x in range(n)])
    reflection = Permutation([(-x) % n for x in range(n)])
    return GroupSpec(f"D{2 * n}", [rotation, reflection])


def cyclic(n):
    if not 1 <= n <= MAX_CYCLIC_ORDER:
        raise InvalidGroupSpec(f"cyclic order {n} outside 1..{MAX_CYCLIC_ORDER}")
    return GroupSpec(f"Z{n}", [Permutation([(x + 1) % n for x in range(n)])])


def _quaternion_units():
    one, i, j, k = (Quaternion.basis(name) for name in ("1", "i", "j", "k"))
    return [one, -one, i, -i, j, -j, k, -k]


def quaternion8_element(name):
    """
    The permutation of the eight units u -> u g for the unit g named
    `name`, one of 1, -1, i, -i, j, -j, k, -k.
    """
    if name not in QUATERNION_UNITS:
        raise ValueError(f"Unknown quaternion unit '{name}'")
    units = _quaternion_units()
    g = units[QUATERNION_UNITS.index(name)]
    return Permutation(units.index(u * g) for u in units)


def quaternion8():
    return GroupSpec("Q8", [quaternion8_element("i"), quaternion8_element("j")])


def psl2_order(q):
    return q * (q * q - 1) // math.gcd(2, q - 1)


def build_psl2(q):
    """
    PSL(2, q) acting on the q + 1 points of the projective line, point q
    standing for infinity. Generated by x -> x + 1, x -> -1/x and
    x -> w^2 x with w primitive; the last one is needed when q is not prime.
    """
    if q not in PSL2_FIELD_SIZES:
        raise InvalidGroupSpec(
            f"psl2 field size {q} not in {', '.join(map(str, PSL2_FIELD_SIZES))}"
        )
    field = GaloisField(q)
    inf = q
    one = 1

    translate = [field.add(x, one) for x in range(q)] + [inf]

    invert = [inf] + [field.neg(field.inv(x)) for x in range(1, q)] + [0]

    w = field.primitive()
    square = field.mul(w, w)
    scale = [field.mul(square, x) for x in range(q)] + [inf]

    gens = [Permutation(translate), Permutation(invert)]
    if square != 1:
        gens.append(Permutation(scale))
    return GroupSpec(f"PSL(2,{q})", gens)


def from_file(path):
    return GroupSpec.load(path)


class CorpusEntry(object):
    """A named builder plus the order the built group must have, if known."""

    def __init__(self, name, builder, expected_order=None):
        self.name = name
        self.builder = builder
        self.expected_order = expected_order

    def spec(self):
        return self.builder()

    def build(self, max_order=None):
        group = enumerate_group(self.spec(), max_order=max_order)
        if self.expected_order is not None and group.order != self.expected_order:
            raise ValueError(
                f"{self.name}: built order {group.order}, "
                f"expected {self.expected_order}"
            )
        return group

    def __repr__(self):
        return f"CorpusEntry({self.name!r}, expected_order={self.expected_order})"


ENTRY_PATTERN = re.compile(r"^(a|s|d|z)(\d+)$")
PSL2_PATTERN = re.compile(r"^psl2_(\d+)$")


def parse_entry(name):
    """
    `a<n>`, `s<n>`, `d<2n>`, `z<n>`, `q8`, `psl2_<q>` or `file:<path>`.
    """
    raw = name.strip()
    if raw.startswith("file:"):
        path = raw[len("file:") :]
        if not path:
            raise InvalidGroupSpec("file entry without a path")
        return CorpusEntry(raw, partial(from_file, path))

    key = raw.lower()
    if key == "q8":
        return CorpusEntry(key, quaternion8, 8)

    m = PSL2_PATTERN.match(key)
    if m is not None:
        q = int(m.group(1))
        return CorpusEntry(key, partial(build_psl2, q), psl2_order(q))

    m = ENTRY_PATTERN.match(key)
    if m is None:
        raise InvalidGroupSpec(f"Unrecognized group entry: '{name}'")
    family, n = m.group(1), int(m.group(2))
    if family == "a":
        return CorpusEntry(key, partial(alternating, n), max(math.factorial(n) // 2, 1))
    if family == "s":
        return CorpusEntry(key, partial(symmetric, n), math.factorial(n))
    if family == "z":
        return CorpusEntry(key, partial(cyclic, n), n)
    if n % 2:
        raise InvalidGroupSpec(f"Dihedral entry '{name}' needs an even order")
    return CorpusEntry(key, partial(dihedral, n // 2), n)


def load_corpus(path):
    """One entry per line; blank lines and `#` comments are skipped."""
    entries = []
    with open(path, "r") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                entries.append(parse_entry(line))
            except InvalidGroupSpec as e:
                raise InvalidGroupSpec(f"{path}:{lineno}: {e}")
    if not entries:
        raise InvalidGroupSpec(f"{path}: no entries")
    return entries

"""
Exact rational Hamilton quaternions (-1,-1 / Q) with the valuation
w(q) = v2(nrd(q)), and samplewise checkers for the U-Hypothesis and its
ordered-valuation consequences in that model.

The cells of the nonzero quaternions N are
    U    = {w = 0}   (units),
    M    = {w < 0},
    NBAR = {w > 0},
and the normal subset NN = U | M.
"""
import logging
import math
from fractions import Fraction

import sympy

from . import utils

logger = logging.getLogger(__name__)

Rational = Fraction

U = "U"
M = "M"
NBAR = "NBAR"

DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 42
DEFAULT_SAMPLE_BOUND = 1000
DEFAULT_WEDDERBURN_SAMPLES = 100
DEGREE = 2
SCALAR_WITNESS = 2
MAX_VALUE_SPREAD = 6
MAX_SUM_TERMS = 5
MAX_FAILURES = 50


class Quaternion(object):
    """
    a + bi + cj + dk with i^2 = j^2 = -1, k = ij, stored as four integers
    over one positive common denominator, always in lowest terms.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, a=0, b=0, c=0, d=0):
        parts = [Fraction(x) for x in (a, b, c, d)]
        den = math.lcm(*(p.denominator for p in parts))
        self._set(tuple(p.numerator * (den // p.denominator) for p in parts), den)

    def _set(self, num, den):
        g = math.gcd(*num, den)
        if g > 1:
            num = tuple(x // g for x in num)
            den //= g
        self._num = num
        self._den = den

    @classmethod
    def _raw(cls, num, den):
        q = cls.__new__(cls)
        if den < 0:
            num, den = tuple(-x for x in num), -den
        q._set(num, den)
        return q

    @classmethod
    def basis(cls, name):
        return {
            "1": cls(1),
            "i": cls(0, 1),
            "j": cls(0, 0, 1),
            "k": cls(0, 0, 0, 1),
        }[name]

    @property
    def a(self):
        return Fraction(self._num[0], self._den)

    @property
    def b(self):
        return Fraction(self._num[1], self._den)

    @property
    def c(self):
        return Fraction(self._num[2], self._den)

    @property
    def d(self):
        return Fraction(self._num[3], self._den)

    @property
    def components(self):
        return (self.a, self.b, self.c, self.d)

    def is_zero(self):
        return not any(self._num)

    def is_scalar(self):
        return not any(self._num[1:])

    def __add__(self, other):
        other = _coerce(other)
        den = self._den * other._den
        num = tuple(x * other._den + y * self._den for x, y in zip(self._num, other._num))
        return Quaternion._raw(num, den)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion._raw(tuple(-x for x in self._num), self._den)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        a1, b1, c1, d1 = self._num
        a2, b2, c2, d2 = other._num
        num = (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
        return Quaternion._raw(num, self._den * other._den)

    def __rmul__(self, other):
        return _coerce(other) * self

    def __truediv__(self, other):
        return self * _coerce(other).inv()

    def __pow__(self, k):
        result = Quaternion(1)
        for _ in range(k):
            result = result * self
        return result

    def conj(self):
        a, b, c, d = self._num
        return Quaternion._raw((a, -b, -c, -d), self._den)

    def norm_numerator(self):
        return sum(x * x for x in self._num)

    def nrd(self):
        return Fraction(self.norm_numerator(), self._den * self._den)

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("The zero quaternion has no inverse")
        # conj(q) / nrd(q) with q = num / den: den * conj(num) / |num|^2
        a, b, c, d = self._num
        scale = self._den
        return Quaternion._raw(
            (a * scale, -b * scale, -c * scale, -d * scale), self.norm_numerator()
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Quaternion(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        return hash((self._num, self._den))

    def __str__(self):
        a, b, c, d = self.components
        parts = [str(a)]
        for x, unit in ((b, "i"), (c, "j"), (d, "k")):
            parts.append(f"{'-' if x < 0 else '+'}{abs(x)}{unit}")
        return "".join(parts)

    def __repr__(self):
        return f"Quaternion({str(self)})"


def _coerce(x):
    return x if isinstance(x, Quaternion) else Quaternion(x)


def q_add(p, q):
    return p + q


def q_mul(p, q):
    return p * q


def q_conj(q):
    return q.conj()


def q_inv(q):
    return q.inv()


def nrd(q):
    """Reduced norm a^2 + b^2 + c^2 + d^2."""
    return q.nrd()


def v2(r):
    r = Fraction(r)
    if r == 0:
        raise ValueError("v2(0) is undefined")
    return utils.v2_int(r.numerator) - utils.v2_int(r.denominator)


def w(q):
    """v2 of the reduced norm."""
    if q.is_zero():
        raise ValueError("w(0) is undefined")
    return utils.v2_int(q.norm_numerator()) - 2 * utils.v2_int(q._den)


def classify(q):
    value = w(q)
    if value == 0:
        return U
    return M if value < 0 else NBAR


class ValuationModel(object):
    """
    The partition of the nonzero quaternions induced by w. Stateless; the
    order predicates are defined from cell membership only, so the checkers
    test the axioms rather than the formula for w.
    """

    def w(self, q):
        return w(q)

    def classify(self, q):
        return classify(q)

    def in_nn(self, q):
        return self.classify(q) in (U, M)

    def in_nbar(self, q):
        return self.classify(q) == NBAR

    def in_unit(self, q):
        return self.classify(q) == U

    def in_m(self, q):
        return self.classify(q) == M

    def in_uf(self, q):
        """Membership in U F^#: q = alpha u with alpha a nonzero rational and u a unit."""
        value = self.w(q)
        if value % 2:
            return False
        alpha = Fraction(2) ** (value // 2)
        return self.in_unit(q / alpha)

    def same_coset(self, a, b):
        return self.in_unit(a * b.inv())

    def less(self, a, b):
        """Ua < Ub: distinct cosets and b a^-1 in NBAR."""
        return not self.same_coset(a, b) and self.in_nbar(b * a.inv())

    def less_equal(self, a, b):
        return self.same_coset(a, b) or self.less(a, b)


class QuaternionSampler(object):
    """
    Seeded source of rationals and quaternions. Components are p/q with p
    uniform in [-bound, bound] and q uniform in [1, bound]; draws come from
    numpy's PCG64 generator.
    """

    def __init__(self, seed=DEFAULT_SEED, bound=DEFAULT_SAMPLE_BOUND):
        if bound < 1:
            raise ValueError("bound must be positive")
        self.seed = seed
        self.bound = bound
        self.rng = utils.rng(seed)

    def integer(self, low, high):
        return int(self.rng.integers(low, high, endpoint=True))

    def rational(self):
        return Fraction(self.integer(-self.bound, self.bound), self.integer(1, self.bound))

    def nonzero_rational(self):
        while True:
            r = self.rational()
            if r:
                return r

    def quaternion(self):
        return Quaternion(*(self.rational() for _ in range(4)))

    def nonzero(self):
        while True:
            q = self.quaternion()
            if not q.is_zero():
                return q

    def noncentral(self):
        while True:
            q = self.nonzero()
            if not q.is_scalar():
                return q

    def value(self, low=-MAX_VALUE_SPREAD, high=MAX_VALUE_SPREAD):
        return self.integer(low, high)

    def with_value(self, target):
        """A random quaternion with w equal to `target`."""
        q = self.nonzero()
        value = w(q)
        if (value - target) % 2:
            q = q * Quaternion(1, 1)
            value += 1
        return q * (Fraction(2) ** ((target - value) // 2))

    def from_cell(self, cell):
        if cell == U:
            return self.with_value(0)
        if cell == M:
            return self.with_value(-self.integer(1, MAX_VALUE_SPREAD))
        if cell == NBAR:
            return self.with_value(self.integer(1, MAX_VALUE_SPREAD))
        if cell == "NN":
            return self.with_value(-self.integer(0, MAX_VALUE_SPREAD))
        raise ValueError(f"Unknown cell '{cell}'")

    def element(self):
        """A nonzero quaternion with w spread over [-6, 6]."""
        return self.with_value(self.value())


class CheckReport(object):
    def __init__(self, lemma, samples, failures, seed, claims=None, witness=None):
        self.lemma = lemma
        self.samples = samples
        self.failures = failures
        self.seed = seed
        self.claims = claims or {}
        self.witness = witness

    @property
    def passed(self):
        return len(self.failures) == 0

    def to_dict(self):
        d = {
            "lemma": self.lemma,
            "samples": self.samples,
            "failures": [list(f) for f in self.failures],
            "seed": self.seed,
            "claims": dict(self.claims),
        }
        if self.witness is not None:
            d["witness"] = self.witness
        return d

    def __repr__(self):
        return (
            f"CheckReport({self.lemma!r}, samples={self.samples}, "
            f"failures={len(self.failures)}, seed={self.seed})"
        )


class _Tally(object):
    """Counts checked claims and keeps the first counterexamples."""

    def __init__(self):
        self.claims = {}
        self.failures = []

    def check(self, claim, index, ok, *values):
        self.claims[claim] = self.claims.get(claim, 0) + 1
        if not ok and len(self.failures) < MAX_FAILURES:
            self.failures.append((claim, index) + tuple(str(v) for v in values))

    def report(self, lemma, samples, seed, witness=None):
        if self.failures:
            logger.warning(f"{lemma}: {len(self.failures)} counterexamples")
        return CheckReport(lemma, samples, self.failures, seed, self.claims, witness)


ONE = Quaternion(1)
MINUS_ONE = Quaternion(-1)


def check_arithmetic(sampler, n, model=None):
    """Exact arithmetic: nrd and w are multiplicative, inverses invert, v2 adds."""
    tally = _Tally()
    for i in range(n):
        p, q = sampler.quaternion(), sampler.quaternion()
        tally.check("nrd-multiplicative", i, nrd(p * q) == nrd(p) * nrd(q), p, q)

        s = sampler.nonzero()
        tally.check("inverse", i, s * q_inv(s) == ONE and q_inv(s) * s == ONE, s)

        a, b = sampler.element(), sampler.element()
        tally.check("w-additive", i, w(a * b) == w(a) + w(b), a, b)

        r, t = sampler.nonzero_rational(), sampler.nonzero_rational()
        tally.check("v2-additive", i, v2(r * t) == v2(r) + v2(t), r, t)
    return tally.report("arithmetic", n, sampler.seed)


def check_axioms(sampler, n, model=None):
    """
    U1: 1, -1 lie in NN. U2: NN is closed under products, and every element
    of NN is a product (x = x * 1). U3: for nbar in NBAR, nbar + 1 lies in
    NN and nbar - 1 is nonzero. Also checks NN is closed under conjugation.
    """
    model = model or ValuationModel()
    tally = _Tally()
    tally.check("U1", 0, model.in_nn(ONE), ONE)
    tally.check("U1", 0, model.in_nn(MINUS_ONE), MINUS_ONE)
    for i in range(n):
        a, b = sampler.from_cell("NN"), sampler.from_cell("NN")
        tally.check("U2", i, model.in_nn(a * b), a, b)
        tally.check("U2-onto", i, model.in_nn(a) and a * ONE == a, a)

        nbar = sampler.from_cell(NBAR)
        tally.check("U3", i, model.in_nn(nbar + 1) and not (nbar - 1).is_zero(), nbar)

        g = sampler.element()
        tally.check("nn-normal", i, model.in_nn(g * a * g.inv()), g, a)
    return tally.report("axioms", n, sampler.seed)


def check_unit_group(sampler, n, model=None):
    """
    The unit set U: its two characterizations, normality, -1 in U, how
    NBAR shifts U, inverses across M and NBAR, and the product closures of
    M and NBAR.
    """
    model = model or ValuationModel()
    tally = _Tally()
    tally.check("minus-one-unit", 0, model.in_unit(MINUS_ONE), MINUS_ONE)
    for i in range(n):
        s = sampler.element()
        by_inverse = model.in_nn(s) and model.in_nn(s.inv())
        tally.check("unit-definition", i, by_inverse == model.in_unit(s), s)

        u, u2 = sampler.from_cell(U), sampler.from_cell(U)
        a = sampler.from_cell("NN")
        nbar = sampler.from_cell(NBAR)
        tally.check(
            "unit-stabilizes",
            i,
            model.in_nn(u * a)
            and model.in_nn(u.inv() * a)
            and model.in_nn(a * u)
            and model.in_nn(a * u.inv())
            and model.in_nbar(u * nbar)
            and model.in_nbar(nbar * u),
            u,
            a,
            nbar,
        )
        g = sampler.element()
        tally.check(
            "unit-normal",
            i,
            model.in_unit(g * u * g.inv())
            and model.in_unit(u * u2)
            and model.in_unit(u.inv()),
            g,
            u,
            u2,
        )

        tally.check("nbar-minus-one", i, model.in_nn(nbar - 1), nbar)
        tally.check(
            "nbar-plus-minus-one",
            i,
            model.in_unit(nbar + 1) and model.in_unit(nbar - 1),
            nbar,
        )
        tally.check(
            "nbar-plus-unit",
            i,
            model.in_unit(nbar + u) and model.in_unit(u - nbar),
            nbar,
            u,
        )
        tally.check("nbar-inverse", i, model.in_nn(nbar.inv()), nbar)

        if not model.in_unit(s):
            tally.check(
                "m-iff-inverse-nbar", i, model.in_m(s) == model.in_nbar(s.inv()), s
            )

        m, m2 = sampler.from_cell(M), sampler.from_cell(M)
        tally.check(
            "unit-action",
            i,
            model.in_m(u * m * u2)
            and model.in_m(m * u)
            and model.in_nbar(u * nbar * u2),
            u,
            m,
            nbar,
            u2,
        )
        nbar2 = sampler.from_cell(NBAR)
        tally.check(
            "cell-closure",
            i,
            model.in_nbar(nbar * nbar2) and model.in_m(m * m2),
            nbar,
            nbar2,
            m,
            m2,
        )
    return tally.report("unit-group", n, sampler.seed)


def _ordered_pair(model, p, q):
    return (p, q) if model.less_equal(p, q) else (q, p)


def check_value_order(sampler, n, model=None):
    """
    The order on cosets of U: linear, independent of representatives,
    agreeing with w, monotone under products; sums of elements from
    distinct cosets land in the smaller coset, sums within one coset do not
    drop, and a k-term sum with a unique smallest coset lands there.
    """
    model = model or ValuationModel()
    tally = _Tally()
    for i in range(n):
        a, b, c = sampler.element(), sampler.element(), sampler.element()
        lt, gt, eq = model.less(a, b), model.less(b, a), model.same_coset(a, b)
        tally.check("order-linear", i, (lt + gt + eq) == 1, a, b)
        tally.check("order-matches-w", i, lt == (w(a) < w(b)), a, b)
        if model.less(a, b) and model.less(b, c):
            tally.check("order-transitive", i, model.less(a, c), a, b, c)

        u, u2 = sampler.from_cell(U), sampler.from_cell(U)
        tally.check(
            "order-representatives", i, model.less(u * a, b * u2) == lt, a, b, u, u2
        )

        p, r = _ordered_pair(model, a, sampler.element())
        q, s = _ordered_pair(model, b, sampler.element())
        tally.check("order-monotone", i, model.less_equal(p * q, r * s), p, r, q, s)

        if not eq:
            total = a + b
            smaller = a if lt else b
            tally.check(
                "min-rule",
                i,
                not total.is_zero()
                and model.same_coset(total, smaller)
                and w(total) == min(w(a), w(b)),
                a,
                b,
            )

        y = u * a
        total = a + y
        if not total.is_zero():
            tally.check("same-coset-sum", i, model.less_equal(a, total), a, y)

        k = sampler.integer(2, MAX_SUM_TERMS)
        low = sampler.value()
        terms = [sampler.with_value(low)] + [
            sampler.with_value(low + sampler.integer(1, MAX_VALUE_SPREAD)) for _ in range(k - 1)
        ]
        total = terms[0]
        for t in terms[1:]:
            total = total + t
        tally.check(
            "unique-min-sum",
            i,
            not total.is_zero() and model.same_coset(total, terms[0]),
            *terms,
        )

        tally.check("w-additive", i, w(a * b) == w(a) + w(b), a, b)
        if not (a + b).is_zero():
            tally.check("ultrametric", i, w(a + b) >= min(w(a), w(b)), a, b)
        r1, r2 = sampler.nonzero_rational(), sampler.nonzero_rational()
        if r1 + r2:
            tally.check(
                "ultrametric-scalar", i, v2(r1 + r2) >= min(v2(r1), v2(r2)), r1, r2
            )
    return tally.report("value-order", n, sampler.seed)


def minimal_polynomial_terms(q):
    """
    The nonzero terms alpha_i q^k_i of the minimal polynomial of q over Q
    evaluated at q: x^2 - 2a x + nrd for noncentral q, x - a for scalars.
    """
    if q.is_scalar():
        return [q, Quaternion(-q.a)]
    terms = [q * q, q * (-2 * q.a), Quaternion(q.nrd())]
    return [t for t in terms if not t.is_zero()]


def check_power_to_scalar(sampler, n, model=None):
    """
    For n outside U: n lies in U F^# exactly when w(n) is even, and n^r lies
    in U F^# for some r <= 2. The terms of the minimal polynomial of n never
    have a unique smallest coset.
    """
    model = model or ValuationModel()
    tally = _Tally()
    for i in range(n):
        q = sampler.element()
        while w(q) == 0:
            q = sampler.element()
        tally.check("uf-parity", i, model.in_uf(q) == (w(q) % 2 == 0), q)
        r = 1 if model.in_uf(q) else 2
        tally.check("power-to-scalar", i, r <= DEGREE and model.in_uf(q**r), q, r)

        terms = minimal_polynomial_terms(q)
        smallest = min(w(t) for t in terms)
        tally.check(
            "min-poly-tie", i, sum(1 for t in terms if w(t) == smallest) >= 2, q
        )
    return tally.report("power-to-scalar", n, sampler.seed)


def check_norm_and_commutators(sampler, n, model=None):
    """
    An element whose reduced norm is a unit is itself a unit, commutators
    g^-1 n^-1 g n are units, and the scalar 2 is not a unit.
    """
    model = model or ValuationModel()
    tally = _Tally()
    for i in range(n):
        q = sampler.element() if i % 2 else sampler.from_cell(U)
        if model.in_unit(Quaternion(q.nrd())):
            tally.check("norm-unit", i, model.in_unit(q), q)
        g, h = sampler.element(), sampler.element()
        commutator = g.inv() * h.inv() * g * h
        tally.check("commutator-unit", i, model.in_unit(commutator), g, h)
    witness = Quaternion(SCALAR_WITNESS)
    tally.check("scalar-not-unit", 0, not model.in_unit(witness), witness)
    return tally.report(
        "norm-and-commutators",
        n,
        sampler.seed,
        witness={"scalar": SCALAR_WITNESS, "w": w(witness), "cell": classify(witness)},
    )


def wedderburn_conjugate(q):
    """
    A nonzero g with g^-1 q g = conj(q), so that nrd(q) = q (g^-1 q g) writes
    the reduced norm as a product of two conjugates of q.

    Solves the rational linear system q g = g conj(q) exactly; for a scalar
    q the answer is g = 1 and nrd(q) = q q.
    """
    if q.is_zero():
        raise ValueError("The zero quaternion has no conjugator")
    if q.is_scalar():
        logger.debug(f"{q} is scalar, returning g = 1")
        return Quaternion(1)
    target = q.conj()
    basis = [Quaternion.basis(name) for name in ("1", "i", "j", "k")]
    columns = [(q * e - e * target).components for e in basis]
    matrix = sympy.Matrix(4, 4, lambda r, col: sympy.Rational(
        columns[col][r].numerator, columns[col][r].denominator
    ))
    nullspace = matrix.nullspace()
    if not nullspace:
        raise ArithmeticError(f"No conjugator found for {q}")
    vector = nullspace[0]
    coeffs = [Fraction(int(v.p), int(v.q)) for v in vector]
    scale = math.lcm(*(c.denominator for c in coeffs))
    return Quaternion(*(c * scale for c in coeffs))


def check_wedderburn(sampler, n=DEFAULT_WEDDERBURN_SAMPLES, model=None):
    tally = _Tally()
    for i in range(n):
        q = sampler.noncentral()
        g = wedderburn_conjugate(q)
        conjugate = g.inv() * q * g
        tally.check(
            "wedderburn",
            i,
            not g.is_zero()
            and q * g == g * q.conj()
            and conjugate == q.conj()
            and q * conjugate == Quaternion(q.nrd()),
            q,
            g,
        )
    return tally.report("wedderburn", n, sampler.seed)


CHECKERS = [
    check_arithmetic,
    check_axioms,
    check_unit_group,
    check_value_order,
    check_power_to_scalar,
    check_norm_and_commutators,
]


def run_all(
    samples=DEFAULT_SAMPLES,
    seed=DEFAULT_SEED,
    bound=DEFAULT_SAMPLE_BOUND,
    wedderburn_samples=DEFAULT_WEDDERBURN_SAMPLES,
):
    """Every checker, each with a fresh sampler on the same seed."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    reports = [check(QuaternionSampler(seed, bound), samples) for check in CHECKERS]
    reports.append(
        check_wedderburn(QuaternionSampler(seed, bound), min(samples, wedderburn_samples))
    )
    return reports

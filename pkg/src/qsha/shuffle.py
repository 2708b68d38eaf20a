"""
The graded shuffle algebra of a quiver with symmetrizer and weights, in its
generic form (parameters t1, t2, t3) and its sign-twisted form (t1 = t2 =
hbar/2, t3 = -hbar).

An element of degree ``v`` is a polynomial in ``lambda^i_s`` (color ``i``,
slot ``s <= v^i``), symmetric in the slots of each color.  In a product of
degrees ``v1`` and ``v2`` the first factor keeps slots ``1..v1^i`` and the
second factor's slot ``t`` becomes ``t + v1^i``.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, DivisibilityError, StructuralError, ValidationError
from .poly import (
    MPoly,
    ONE,
    RatExpr,
    is_symmetric,
    lam,
    param,
    product,
    shuffle_maps,
    symmetrize,
)
from .quiver import cartan_to_quiver, check_specialization, default_weights, require_valid

log = logging.getLogger(__name__)

GENERIC = "generic-t"
TWISTED = "twisted-hbar"
MODES = (GENERIC, TWISTED)

HALF = Fraction(1, 2)


def unit_vector(k, n):
    return tuple(int(i == k) for i in range(n))


def add_grades(v1, v2):
    if len(v1) != len(v2):
        raise StructuralError("dimension vectors of different lengths")
    return tuple(a + b for a, b in zip(v1, v2))


@dataclass(frozen=True)
class KernelConfig:
    quiver: object
    weights: object
    mode: str = TWISTED
    corrupt_sign: bool = False  # negative-control hook: drops the twisting sign

    def __post_init__(self):
        if self.mode not in MODES:
            raise StructuralError(f"unknown mode {self.mode!r}")
        if self.weights.quiver is not self.quiver and self.weights.quiver != self.quiver:
            raise StructuralError("weights belong to a different quiver")
        if self.mode == TWISTED and not check_specialization(self.weights, HALF, HALF, -1):
            raise ValidationError("weights are incompatible with t1 = t2 = hbar/2, t3 = -hbar")

    @classmethod
    def from_cartan(cls, cartan, mode=TWISTED, corrupt_sign=False):
        require_valid(cartan)
        q = cartan_to_quiver(cartan)
        return cls(q, default_weights(q, cartan.D), mode, corrupt_sign)

    @property
    def n(self):
        return self.quiver.n_vertices

    def t(self, i):
        """t1, t2, t3 as polynomials in the active mode."""
        if self.mode == GENERIC:
            return MPoly.param(f"t{i}")
        hbar = MPoly.param("hbar")
        return hbar.scale(HALF) if i in (1, 2) else -hbar


@dataclass(frozen=True)
class ShuffleElement:
    grade: tuple
    value: object  # MPoly, or RatExpr for series-valued intermediate elements

    def __post_init__(self):
        object.__setattr__(self, "grade", tuple(int(x) for x in self.grade))
        if any(x < 0 for x in self.grade):
            raise StructuralError("grades are nonnegative")
        if not isinstance(self.value, (MPoly, RatExpr)):
            object.__setattr__(self, "value", MPoly.const(self.value))

    @classmethod
    def unit(cls, n):
        return cls((0,) * n, ONE)

    def is_polynomial(self):
        return isinstance(self.value, MPoly)

    def __add__(self, other):
        if self.grade != other.grade:
            raise StructuralError("cannot add elements of different grades")
        return ShuffleElement(self.grade, self.value + other.value)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c):
        """Scalar multiplication by a rational or a parameter polynomial."""
        return ShuffleElement(self.grade, self.value * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ShuffleElement):
            return NotImplemented
        return self.grade == other.grade and self.value == other.value

    __hash__ = None

    def is_zero(self):
        return self.value.is_zero()

    def to_json(self, mode=TWISTED):
        value = self.value.to_json() if self.is_polynomial() else self.value.to_json()
        return {"grade": list(self.grade), "poly": value, "mode": mode}

    @classmethod
    def from_json(cls, data):
        try:
            grade = [int(x) for x in data["grade"]]
            poly = MPoly.from_json(data["poly"])
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad shuffle element JSON: {exc}") from None
        el = cls(grade, poly)
        check_grade(el)
        return el


def check_grade(el):
    """Every lambda variable must be a slot inside the element's grade."""
    from .poly import is_lambda, lambda_index

    values = [el.value] if el.is_polynomial() else [el.value.num, *el.value.den_factors]
    for p in values:
        for var in p.variables():
            if is_lambda(var):
                color, slot = lambda_index(var)
                if color >= len(el.grade) or slot > el.grade[color]:
                    raise StructuralError(f"variable l:{color}:{slot} lies outside grade {list(el.grade)}")


def twist_exponent(v1, v2, q):
    """Sum over arrows h of v1^inc(h) v2^out(h)."""
    return sum(v1[a.inc] * v2[a.out] for a in q.arrows)


def _primed(i, s):
    return MPoly.lam(i, s)


def fac1(v1, v2, cfg):
    """Diagonal kernel: one quotient per color and pair of slots across the blocks."""
    t3 = cfg.t(3)
    num, den = [], []
    for i in range(cfg.n):
        mt3 = t3 * cfg.weights.m_vertex[i]
        for s in range(1, v1[i] + 1):
            for t in range(1, v2[i] + 1):
                x1, x2 = _primed(i, s), _primed(i, v1[i] + t)
                if cfg.mode == GENERIC:
                    num.append(x2 - x1 + mt3)
                    den.append(x2 - x1)
                else:
                    num.append(x1 - x2 - mt3)
                    den.append(x1 - x2)
    return RatExpr.from_factors(product(num), den)


def fac2(v1, v2, cfg):
    """Arrow kernel: linear factors from every h and its reversal."""
    q, w = cfg.quiver, cfg.weights
    t1, t2 = cfg.t(1), cfg.t(2)
    factors = []
    for k, a in enumerate(q.arrows):
        i, o = a.inc, a.out
        for s in range(1, v1[o] + 1):
            for t in range(1, v2[i] + 1):
                factors.append(_primed(i, v1[i] + t) - _primed(o, s) + t1 * w.m_arrow[k])
        for s in range(1, v1[i] + 1):
            for t in range(1, v2[o] + 1):
                if cfg.mode == GENERIC:
                    factors.append(_primed(o, v1[o] + t) - _primed(i, s) + t2 * w.m_reversed[k])
                else:
                    factors.append(_primed(i, s) - _primed(o, v1[o] + t) - t2 * w.m_reversed[k])
    return product(factors)


def shift_map(v1, v2):
    """Send the second factor's slot t of color i to slot t + v1^i."""
    mapping = {}
    for i, (p, q) in enumerate(zip(v1, v2)):
        for t in range(q, 0, -1):
            mapping[lam(i, t)] = lam(i, t + p)
    return mapping


def integrand(f1, f2, cfg):
    """f1 * shifted f2 * fac1 * fac2, before symmetrization."""
    v1, v2 = f1.grade, f2.grade
    if len(v1) != cfg.n or len(v2) != cfg.n:
        raise StructuralError(f"grades must have {cfg.n} entries")
    g = f2.value.rename(shift_map(v1, v2))
    kernel = fac1(v1, v2, cfg) * fac2(v1, v2, cfg)
    return kernel * f1.value * g


def shuffle_mul(f1, f2, cfg):
    """The (twisted) shuffle product.

    Polynomial inputs give a polynomial: the shuffle sum is formed over one
    common denominator and divided out exactly, and the division together with
    a symmetry check serves as an internal consistency assertion.  Inputs that
    are rational expressions (generating series) give a rational expression.
    """
    v1, v2 = f1.grade, f2.grade
    v = add_grades(v1, v2)
    terms = integrand(f1, f2, cfg)
    total = RatExpr.sum(terms.rename(m) for m in shuffle_maps(v1, v2))
    if cfg.corrupt_sign and twist_exponent(v1, v2, cfg.quiver) % 2:
        total = -total
    if not (f1.is_polynomial() and f2.is_polynomial()):
        return ShuffleElement(v, total)
    try:
        value = total.to_poly()
    except DivisibilityError as exc:
        raise ConsistencyError(f"shuffle sum in grade {v} is not a polynomial: {exc}") from None
    if not is_symmetric(value, v):
        raise ConsistencyError(f"shuffle product in grade {v} is not symmetric")
    return ShuffleElement(v, value)


def star_power(x, n, cfg):
    """x * x * ... * x (n copies), multiplied from the left."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    if n == 0:
        return ShuffleElement.unit(cfg.n)
    out = x
    for _ in range(n - 1):
        out = shuffle_mul(out, x, cfg)
    return out


def random_symmetric(grade, rng, max_degree=2, n_terms=3, coeff_range=5, params=()):
    """A random symmetric polynomial: the symmetrization of a few random monomials."""
    vars_ = [lam(i, s) for i, n in enumerate(grade) for s in range(1, n + 1)]
    vars_ += [param(p) for p in params]
    terms = {}
    for _ in range(n_terms):
        mono = {}
        for _ in range(rng.randint(0, max_degree)):
            if vars_:
                v = rng.choice(vars_)
                mono[v] = mono.get(v, 0) + 1
        terms[tuple(sorted(mono.items()))] = rng.randint(-coeff_range, coeff_range)
    return ShuffleElement(grade, symmetrize(MPoly(terms), grade))


@dataclass
class AssociativityResult:
    ok: bool
    trials: int
    witness: tuple = None


def check_associativity(cfg, grades, trials=5, seed=0, max_degree=2):
    """(f g) h == f (g h) for random symmetric f, g, h of the given grades."""
    rng = random.Random(seed)
    params = ("t1", "t2", "t3") if cfg.mode == GENERIC else ("hbar",)
    for trial in range(trials):
        f, g, h = (random_symmetric(gr, rng, max_degree, params=params) for gr in grades)
        left = shuffle_mul(shuffle_mul(f, g, cfg), h, cfg)
        right = shuffle_mul(f, shuffle_mul(g, h, cfg), cfg)
        if left != right:
            log.warning("associativity fails on trial %d", trial)
            return AssociativityResult(False, trial + 1, (f, g, h))
    return AssociativityResult(True, trials)

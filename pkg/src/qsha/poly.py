"""
Exact sparse multivariate polynomials and rational expressions over Q.

Variables are small integers.  The six parameters ``t1, t2, t3, hbar, u, v``
come first in the variable order, followed by the colored variables
``lambda^i_s`` ordered by ``(color, slot)``; slots start at 1.

A monomial is a tuple of ``(var, exponent)`` pairs sorted by ``var`` with
positive exponents.  An :class:`MPoly` maps monomials to nonzero rational
coefficients (``int`` or :class:`fractions.Fraction`).  The monomial order is
graded lexicographic with ``t1`` the largest variable.

:class:`RatExpr` keeps its denominator as a multiset of monic factors.  Sums
use the least common multiple of the factor multisets, so adding the terms of a
symmetrization never squares a denominator, and equality is decided by
cross-multiplication without any gcd computation.
"""

import heapq
import itertools
import logging
from contextlib import contextmanager
from fractions import Fraction

from .errors import DivisibilityError, ResourceError, StructuralError

log = logging.getLogger(__name__)

PARAMS = ("t1", "t2", "t3", "hbar", "u", "v")
_PARAM_INDEX = {name: i for i, name in enumerate(PARAMS)}
_LAMBDA_BASE = 16
_SLOT_SPAN = 1 << 16

DEFAULT_TERM_CAP = 10**6
_term_cap = DEFAULT_TERM_CAP


def set_term_cap(cap):
    """Set the global maximum number of terms an MPoly may have."""
    global _term_cap
    if cap is None or cap <= 0:
        raise ValueError("term cap must be a positive integer")
    _term_cap = int(cap)


def get_term_cap():
    return _term_cap


@contextmanager
def term_cap(cap):
    old = _term_cap
    set_term_cap(cap)
    try:
        yield
    finally:
        set_term_cap(old)


def _check_size(n):
    if n > _term_cap:
        raise ResourceError(f"polynomial with {n} terms exceeds the cap of {_term_cap}")


# -- variables ---------------------------------------------------------------

def param(name):
    try:
        return _PARAM_INDEX[name]
    except KeyError:
        raise StructuralError(f"unknown parameter {name!r}") from None


def lam(color, slot):
    if color < 0 or slot < 1 or slot >= _SLOT_SPAN:
        raise StructuralError(f"bad lambda index ({color}, {slot})")
    return _LAMBDA_BASE + color * _SLOT_SPAN + slot


def is_lambda(var):
    return var >= _LAMBDA_BASE


def lambda_index(var):
    """Return ``(color, slot)`` of a lambda variable."""
    return divmod(var - _LAMBDA_BASE, _SLOT_SPAN)


def var_name(var):
    if is_lambda(var):
        color, slot = lambda_index(var)
        return f"l:{color}:{slot}"
    return PARAMS[var]


def parse_var(name):
    if name.startswith("l:"):
        try:
            _, color, slot = name.split(":")
            return lam(int(color), int(slot))
        except ValueError:
            raise StructuralError(f"bad variable name {name!r}") from None
    return param(name)


# -- coefficients --------------------------------------------------------------

def as_rational(c):
    """Coerce ``c`` to an exact rational (``int`` when integral)."""
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        try:
            return as_rational(Fraction(c))
        except ValueError:
            raise StructuralError(f"bad rational {c!r}") from None
    raise TypeError(f"inexact or unsupported coefficient {c!r}")


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    q = Fraction(a) / b
    return q.numerator if q.denominator == 1 else q


def format_rational(c):
    return str(as_rational(c))


# -- monomials -----------------------------------------------------------------

def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a, b):
    """``a / b`` when ``b`` divides ``a``, else None."""
    d = dict(a)
    for v, e in b:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def _mono_rename(m, mapping):
    d = {}
    for v, e in m:
        w = mapping.get(v, v)
        d[w] = d.get(w, 0) + e
    return tuple(sorted(d.items()))


def grlex_key(m):
    """Sort key realizing the graded lexicographic order."""
    return (sum(e for _, e in m), tuple((-v, e) for v, e in m))


def _grlex_neg_key(m):
    # Reverses grlex_key; valid because equal-degree keys are never proper prefixes.
    return (-sum(e for _, e in m), tuple((v, -e) for v, e in m))


# -- polynomials ---------------------------------------------------------------

def _coerce(x):
    if isinstance(x, MPoly):
        return x
    return MPoly.const(x)


class MPoly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = as_rational(c)
                if c:
                    m = tuple(sorted((v, e) for v, e in m if e))
                    if any(e < 0 for _, e in m):
                        raise StructuralError("negative exponent")
                    clean[m] = clean.get(m, 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        c = as_rational(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, var, power=1):
        if power == 0:
            return cls.const(1)
        return cls._raw({((var, power),): 1})

    @classmethod
    def lam(cls, color, slot, power=1):
        return cls.var(lam(color, slot), power)

    @classmethod
    def param(cls, name, power=1):
        return cls.var(param(name), power)

    # -- inspection
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant(self):
        """The value of a constant polynomial."""
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((), 0)

    def coefficient(self, mono):
        return self._terms.get(tuple(sorted(mono)), 0)

    def variables(self):
        return sorted({v for m in self._terms for v, _ in m})

    def degree(self, var=None):
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self._terms)
        return max(dict(m).get(var, 0) for m in self._terms)

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=grlex_key)
        return m, self._terms[m]

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = MPoly.const(other)
            except TypeError:
                return NotImplemented
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        _check_size(len(out))
        return MPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = MPoly.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_rational(c)
        if not c:
            return MPoly._raw({})
        return MPoly._raw({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if len(self._terms) < len(other._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        if not b:
            return MPoly._raw({})
        if len(b) == 1:
            (mb, cb), = b.items()
            if not mb:
                return MPoly._raw({m: c * cb for m, c in a.items()})
        out = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = _mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
            _check_size(len(out))
        return MPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        if isinstance(other, MPoly):
            return RatExpr(self, other)
        if isinstance(other, RatExpr):
            return RatExpr(self) / other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({(): other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- variable maps
    def rename(self, mapping):
        """Apply a variable-to-variable map (a permutation or relabeling)."""
        if not mapping:
            return self
        out = {}
        for m, c in self._terms.items():
            m2 = _mono_rename(m, mapping)
            s = out.get(m2, 0) + c
            if s:
                out[m2] = s
            else:
                del out[m2]
        return MPoly._raw(out)

    def substitute(self, bindings):
        """Simultaneously replace variables by polynomials."""
        if not bindings:
            return self
        bindings = {v: _coerce(p) for v, p in bindings.items()}
        powers = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                powers[key] = bindings[v] ** e
            return powers[key]

        out = MPoly._raw({})
        for m, c in self._terms.items():
            keep = tuple((v, e) for v, e in m if v not in bindings)
            term = MPoly._raw({keep: c})
            for v, e in m:
                if v in bindings:
                    term = term * power(v, e)
            out = out + term
        return out

    def map_coefficients(self, f):
        return MPoly({m: f(c) for m, c in self._terms.items()})

    # -- output
    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: grlex_key(mc[0]), reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(var_name(v) + (f"^{e}" if e > 1 else "") for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MPoly({self})"

    def to_json(self):
        return [
            {"c": format_rational(c), "m": {var_name(v): e for v, e in m}}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list):
            raise StructuralError("polynomial JSON must be a list of terms")
        terms = {}
        for t in data:
            try:
                c = as_rational(t["c"] if isinstance(t["c"], str) else t["c"])
                m = tuple(sorted((parse_var(k), int(e)) for k, e in t.get("m", {}).items()))
            except (KeyError, TypeError, AttributeError):
                raise StructuralError(f"bad polynomial term {t!r}") from None
            terms[m] = terms.get(m, 0) + c
        return cls(terms)


ZERO = MPoly.const(0)
ONE = MPoly.const(1)


def exact_div(a, b):
    """Return ``q`` with ``a == q * b``; raise DivisibilityError otherwise.

    Multivariate division under grlex.  A leading term that ``LT(b)`` does not
    divide would go to the remainder and never be cancelled, so the first such
    term ends the division.
    """
    a, b = _coerce(a), _coerce(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return ZERO
    if b.is_constant():
        return a.scale(Fraction(1) / b.constant())
    lt_m, lt_c = b.leading_term()
    rest = [(m, c) for m, c in b._terms.items() if m != lt_m]
    rem = dict(a._terms)
    heap = [(_grlex_neg_key(m), m) for m in rem]
    heapq.heapify(heap)
    quot = {}
    while rem:
        _, m = heapq.heappop(heap)
        if m not in rem:
            continue
        c = rem.pop(m)
        qm = _mono_div(m, lt_m)
        if qm is None:
            raise DivisibilityError(f"nonzero remainder dividing by {b}")
        qc = _div(c, lt_c)
        quot[qm] = qc
        for bm, bc in rest:
            mm = _mono_mul(qm, bm)
            old = rem.get(mm)
            if old is None:
                rem[mm] = -qc * bc
                heapq.heappush(heap, (_grlex_neg_key(mm), mm))
            else:
                s = old - qc * bc
                if s:
                    rem[mm] = s
                else:
                    del rem[mm]
    return MPoly._raw(quot)


def divides(b, a):
    try:
        exact_div(a, b)
    except DivisibilityError:
        return False
    return True


def product(polys):
    out = ONE
    for p in polys:
        out = out * p
    return out


def _monic(f):
    """Split ``f`` as ``scalar * g`` with ``g`` monic; ``g`` is None for constants."""
    if f.is_constant():
        return f.constant(), None
    _, c = f.leading_term()
    if c == 1:
        return 1, f
    return c, f.scale(Fraction(1) / c)


# -- rational expressions -------------------------------------------------------

class RatExpr:
    """Quotient ``num / den`` with ``den`` stored as a multiset of monic factors."""

    __slots__ = ("num", "_factors")

    def __init__(self, num, den=1):
        num = _coerce(num)
        if isinstance(den, RatExpr):
            raise TypeError("use division for nested quotients")
        den = _coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        scalar, g = _monic(den)
        self.num = num.scale(Fraction(1) / scalar) if scalar != 1 else num
        self._factors = {g: 1} if g is not None else {}

    @classmethod
    def _make(cls, num, factors):
        obj = cls.__new__(cls)
        obj.num = num
        obj._factors = {f: k for f, k in factors.items() if k}
        return obj

    @classmethod
    def from_factors(cls, num, factors):
        """Build ``num / prod(factors)`` keeping the given factorization."""
        num = _coerce(num)
        fs = {}
        for f in factors:
            f = _coerce(f)
            if not f:
                raise ZeroDivisionError("zero denominator factor")
            scalar, g = _monic(f)
            if scalar != 1:
                num = num.scale(Fraction(1) / scalar)
            if g is not None:
                fs[g] = fs.get(g, 0) + 1
        return cls._make(num, fs)

    @property
    def den_factors(self):
        return dict(self._factors)

    @property
    def den(self):
        return _expand(self._factors)

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return not self._factors

    # -- arithmetic
    def __add__(self, other):
        return RatExpr.sum([self, _as_ratexpr(other)])

    __radd__ = __add__

    def __neg__(self):
        return RatExpr._make(-self.num, self._factors)

    def __sub__(self, other):
        return RatExpr.sum([self, -_as_ratexpr(other)])

    def __rsub__(self, other):
        return RatExpr.sum([_as_ratexpr(other), -self])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatExpr._make(self.num.scale(other), self._factors)
        other = _as_ratexpr(other)
        fs = dict(self._factors)
        for f, k in other._factors.items():
            fs[f] = fs.get(f, 0) + k
        return RatExpr._make(self.num * other.num, fs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatExpr._make(self.num.scale(Fraction(1) / other), self._factors)
        other = _as_ratexpr(other)
        if not other.num:
            raise ZeroDivisionError("division by zero rational expression")
        inv = RatExpr.from_factors(other.den, [other.num])
        return self * inv

    def __rtruediv__(self, other):
        return _as_ratexpr(other) / self

    def __pow__(self, n):
        out = RatExpr(ONE)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, (RatExpr, MPoly, int, Fraction)):
            return NotImplemented
        other = _as_ratexpr(other)
        lcm = _lcm(self._factors, other._factors)
        return self.num * _expand(_missing(lcm, self._factors)) == other.num * _expand(
            _missing(lcm, other._factors)
        )

    __hash__ = None

    @staticmethod
    def sum(terms):
        """Add many expressions over the lcm of their denominators."""
        terms = [_as_ratexpr(t) for t in terms]
        if not terms:
            return RatExpr(ZERO)
        lcm = {}
        for t in terms:
            lcm = _lcm(lcm, t._factors)
        cache = {}
        num = ZERO
        for t in terms:
            if not t.num:
                continue
            miss = _missing(lcm, t._factors)
            key = tuple(sorted((id(f), k) for f, k in miss.items()))
            if key not in cache:
                cache[key] = _expand(miss)
            num = num + t.num * cache[key]
        return RatExpr._make(num, lcm)

    # -- simplification
    def normalize(self):
        """Cancel denominator factors that divide the numerator (trial division)."""
        num = self.num
        fs = {}
        if not num:
            return RatExpr(ZERO)
        for f, k in self._factors.items():
            left = k
            while left:
                try:
                    num = exact_div(num, f)
                except DivisibilityError:
                    break
                left -= 1
            if left:
                fs[f] = left
        return RatExpr._make(num, fs)

    def to_poly(self):
        """Exactly divide out the denominator; raise DivisibilityError if impossible."""
        num = self.num
        for f, k in self._factors.items():
            for _ in range(k):
                num = exact_div(num, f)
        return num

    # -- variable maps
    def rename(self, mapping):
        if not mapping:
            return self
        return RatExpr.from_factors(
            self.num.rename(mapping),
            [f.rename(mapping) for f, k in self._factors.items() for _ in range(k)],
        )

    def substitute(self, bindings):
        return RatExpr.from_factors(
            self.num.substitute(bindings),
            [f.substitute(bindings) for f, k in self._factors.items() for _ in range(k)],
        )

    def __str__(self):
        if not self._factors:
            return str(self.num)
        den = "*".join(f"({f})" + (f"^{k}" if k > 1 else "") for f, k in self._factors.items())
        return f"({self.num}) / {den}"

    def __repr__(self):
        return f"RatExpr({self})"

    def to_json(self):
        return {
            "num": self.num.to_json(),
            "den": [{"factor": f.to_json(), "mult": k} for f, k in self._factors.items()],
        }


def _as_ratexpr(x):
    if isinstance(x, RatExpr):
        return x
    return RatExpr._make(_coerce(x), {})


def _lcm(a, b):
    out = dict(a)
    for f, k in b.items():
        if out.get(f, 0) < k:
            out[f] = k
    return out


def _missing(lcm, factors):
    return {f: k - factors.get(f, 0) for f, k in lcm.items() if k > factors.get(f, 0)}


def _expand(factors):
    out = ONE
    for f, k in factors.items():
        out = out * f ** k
    return out


def to_ratexpr(x):
    return _as_ratexpr(x)


# -- symmetric-group combinatorics ------------------------------------------------

def _color_perm_maps(v):
    """Yield variable maps for every element of S_v = prod_i S_{v^i}."""
    per_color = []
    for color, n in enumerate(v):
        slots = range(1, n + 1)
        per_color.append([(color, p) for p in itertools.permutations(slots)])
    for choice in itertools.product(*per_color):
        mapping = {}
        for color, p in choice:
            for s, t in zip(range(1, len(p) + 1), p):
                if s != t:
                    mapping[lam(color, s)] = lam(color, t)
        yield mapping


def shuffle_maps(v1, v2):
    """Yield variable maps for Sh(v1, v2) = prod_i Sh(v1^i, v2^i).

    Per color, the first-block slots ``1..v1^i`` go to a chosen increasing set
    of positions and the second-block slots ``v1^i+1..`` go to the complement,
    in order.
    """
    if len(v1) != len(v2):
        raise StructuralError("dimension vectors of different lengths")
    per_color = []
    for color, (p, q) in enumerate(zip(v1, v2)):
        n = p + q
        choices = []
        for first in itertools.combinations(range(1, n + 1), p):
            chosen = set(first)
            second = [s for s in range(1, n + 1) if s not in chosen]
            targets = list(first) + second
            choices.append({lam(color, s): lam(color, t) for s, t in zip(range(1, n + 1), targets) if s != t})
        per_color.append(choices)
    for choice in itertools.product(*per_color):
        mapping = {}
        for m in choice:
            mapping.update(m)
        yield mapping


def _sum_images(a, maps):
    if isinstance(a, RatExpr):
        return RatExpr.sum(a.rename(m) for m in maps)
    a = _coerce(a)
    out = {}
    for mapping in maps:
        for m, c in a.rename(mapping)._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        _check_size(len(out))
    return MPoly._raw(out)


def symmetrize(a, v):
    """Sum of ``sigma(a)`` over sigma in S_v (slots permuted within each color)."""
    return _sum_images(a, _color_perm_maps(v))


def shuffle_sum(a, v1, v2):
    """Sum of ``sigma(a)`` over the (v1, v2)-shuffles."""
    return _sum_images(a, shuffle_maps(v1, v2))


def is_symmetric(a, v):
    """Invariance under the adjacent transpositions of every S_{v^i}."""
    a = a if isinstance(a, RatExpr) else _coerce(a)
    for color, n in enumerate(v):
        for s in range(1, n):
            swap = {lam(color, s): lam(color, s + 1), lam(color, s + 1): lam(color, s)}
            if a.rename(swap) != a:
                return False
    return True


def substitute(a, bindings):
    return a.substitute(bindings)


def specialize_twisted(a):
    """Apply t1 = t2 = hbar/2, t3 = -hbar."""
    hbar = MPoly.param("hbar")
    return a.substitute({
        param("t1"): hbar.scale(Fraction(1, 2)),
        param("t2"): hbar.scale(Fraction(1, 2)),
        param("t3"): -hbar,
    })

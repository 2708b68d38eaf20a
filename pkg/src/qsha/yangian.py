"""
Exact verification of the Yangian relations in the sign-twisted shuffle
algebra of a symmetrizable Cartan matrix.

x_{k,r} is sent to (lambda^(k))^r in degree e_k, and the generating series
x_k(u) = hbar sum_r x_{k,r} u^{-r-1} to the rational expression
hbar / (u - lambda^(k)), with u and v inert parameters.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from math import comb

from .errors import ConsistencyError
from .poly import MPoly, RatExpr, lam, product, symmetrize, shuffle_sum
from .quiver import validate_cartan, require_valid
from .shuffle import HALF, TWISTED, KernelConfig, ShuffleElement, shuffle_mul, star_power, unit_vector

log = logging.getLogger(__name__)

HBAR = MPoly.param("hbar")
U = MPoly.param("u")
V = MPoly.param("v")


@dataclass(frozen=True)
class PairData:
    """Weight data of the arrows between k and l.

    ``orientation`` is +1 when the arrows go k -> l, -1 when they go l -> k and
    0 when k and l are not adjacent.
    """

    k: int
    l: int
    n: int
    d: int
    a: int
    S: tuple
    S_prime: tuple
    orientation: int

    @property
    def sign(self):
        """(-1)^n when the arrows point l -> k, else 1."""
        return (-1) ** self.n if self.orientation < 0 else 1


@dataclass
class YangianContext:
    cartan: object
    cfg: KernelConfig
    pairs: dict
    coprime: bool

    @property
    def quiver(self):
        return self.cfg.quiver

    @property
    def weights(self):
        return self.cfg.weights

    @property
    def n(self):
        return self.cartan.n

    def d(self, k):
        return self.cartan.D[k]

    def a_entry(self, k, l):
        return self.cartan.A[k][l]


def build_context(cartan, corrupt_sign=False):
    require_valid(cartan)
    coprime = math.gcd(*cartan.D) == 1
    if not coprime:
        log.warning("symmetrizer entries %s are not relatively prime", list(cartan.D))
    cfg = KernelConfig.from_cartan(cartan, TWISTED, corrupt_sign)
    q, w = cfg.quiver, cfg.weights
    A, D = cartan.A, cartan.D
    pairs = {}
    for k in range(cartan.n):
        for l in range(cartan.n):
            if k == l:
                continue
            fwd, back = q.arrows_between(k, l), q.arrows_between(l, k)
            ids = fwd or back
            if not ids:
                pairs[(k, l)] = PairData(k, l, 0, 0, 0, (), (), 0)
                continue
            n = len(ids)
            d = w.m_vertex[k] * q.l(k, l)
            a = n * d
            if not (a == -D[k] * A[k][l] == -D[l] * A[l][k]):
                raise ConsistencyError(f"pair ({k}, {l}): a = {a} disagrees with the Cartan data")
            S = tuple(a - 2 * d * p for p in range(n))
            if Counter(w.m_arrow[h] for h in ids) != Counter(S) or Counter(w.m_reversed[h] for h in ids) != Counter(S):
                raise ConsistencyError(f"pair ({k}, {l}): arrow weights do not form {S}")
            S_prime = S[1:]
            if Counter(S_prime) != Counter(-m for m in S_prime):
                raise ConsistencyError(f"pair ({k}, {l}): S' is not symmetric")
            pairs[(k, l)] = PairData(k, l, n, d, a, S, S_prime, 1 if fwd else -1)
    return YangianContext(cartan, cfg, pairs, coprime)


# -- generator images -----------------------------------------------------------

def mode_image(ctx, k, r):
    return ShuffleElement(unit_vector(k, ctx.n), MPoly.lam(k, 1, r))


def series_image(ctx, k, param):
    return ShuffleElement(unit_vector(k, ctx.n), RatExpr(HBAR, param - MPoly.lam(k, 1)))


def _star(ctx, x, y):
    return shuffle_mul(x, y, ctx.cfg)


def _pair_factor(pair, lam_l, lam_k, sign):
    """prod over m in S of (lambda_l - lambda_k + sign * m hbar/2)."""
    return product(lam_l - lam_k + HBAR * (sign * m * HALF) for m in pair.S)


# -- (Y1) ---------------------------------------------------------------------------

@dataclass
class Y1Result:
    ok: bool
    residual: object = None
    closed_form_ok: bool = None
    lhs: object = None
    rhs: object = None

    def to_json(self):
        if self.ok and self.closed_form_ok is not False:
            return "ok"
        out = {"ok": self.ok, "closed_form_ok": self.closed_form_ok}
        if self.residual is not None and not self.residual.is_zero():
            out["residual"] = str(self.residual)
        return out


def y1_closed_form(ctx, k, l):
    """The common value of both sides of the series identity."""
    if k == l:
        l1, l2 = MPoly.lam(k, 1), MPoly.lam(k, 2)
        inner = (RatExpr(1, V - l2) - RatExpr(1, V - l1) - RatExpr(1, U - l1) + RatExpr(1, U - l2))
        return RatExpr(HBAR ** 3 * (2 * ctx.d(k)), l1 - l2) * inner
    pair = ctx.pairs[(k, l)]
    lk, ll = MPoly.lam(k, 1), MPoly.lam(l, 1)
    common = HBAR ** 2 * product(ll - lk + HBAR * (m * HALF) for m in pair.S_prime) * pair.sign
    return RatExpr.from_factors(common * HBAR * pair.a * (U - V + ll - lk), [U - lk, V - ll])


def verify_Y1(ctx, k, l):
    """The quadratic relation on generating series, as an identity of rational expressions."""
    c = HBAR * (ctx.d(k) * ctx.a_entry(k, l) * HALF)
    xu, xv = series_image(ctx, k, U), series_image(ctx, l, V)
    one_k, one_l = mode_image(ctx, k, 0), mode_image(ctx, l, 0)
    lhs = (U - V - c) * _star(ctx, xu, xv).value - (U - V + c) * _star(ctx, xv, xu).value
    rhs = HBAR * (
        _star(ctx, one_k, xv).value
        - _star(ctx, xv, one_k).value
        - _star(ctx, xu, one_l).value
        + _star(ctx, one_l, xu).value
    )
    residual = lhs - rhs
    ok = residual.is_zero()
    expected = y1_closed_form(ctx, k, l)
    closed_ok = lhs == expected and rhs == expected
    return Y1Result(ok, residual, closed_ok, lhs, rhs)


@dataclass
class Y1ModesResult:
    ok: bool
    R: int
    failure: tuple = None

    def to_json(self):
        out = {"R": self.R, "ok": self.ok}
        if self.failure is not None:
            out["first_failure"] = list(self.failure)
        return out


def verify_Y1_modes(ctx, k, l, R=3):
    """The quadratic relation coefficient by coefficient, using only polynomial products.

    With P_{r,s} = x_{k,r} * x_{l,s} and Q_{r,s} = x_{l,s} * x_{k,r}, the
    coefficient of u^{-r-1} v^{-s-1} (r, s >= -1; index -1 is the u^0 or v^0
    boundary) of the series identity divided by hbar^2 reads

        P_{r+1,s} - P_{r,s+1} - c P_{r,s} - (Q_{r+1,s} - Q_{r,s+1} + c Q_{r,s})
          = [r = -1] (P_{0,s} - Q_{0,s}) - [s = -1] (P_{r,0} - Q_{r,0})

    where c = d_k a_kl hbar / 2 and entries with a negative index vanish.
    """
    c = HBAR * (ctx.d(k) * ctx.a_entry(k, l) * HALF)
    xk = [mode_image(ctx, k, r) for r in range(R + 2)]
    xl = [mode_image(ctx, l, s) for s in range(R + 2)]
    P, Q = {}, {}
    for r in range(R + 2):
        for s in range(R + 2):
            if r + s <= 2 * R + 2:
                P[(r, s)] = _star(ctx, xk[r], xl[s]).value
                Q[(r, s)] = _star(ctx, xl[s], xk[r]).value
    zero = MPoly.const(0)

    def p(r, s):
        return P.get((r, s), zero) if r >= 0 and s >= 0 else zero

    def q(r, s):
        return Q.get((r, s), zero) if r >= 0 and s >= 0 else zero

    for r in range(-1, R + 1):
        for s in range(-1, R + 1):
            left = p(r + 1, s) - p(r, s + 1) - c * p(r, s) - (q(r + 1, s) - q(r, s + 1) + c * q(r, s))
            right = zero
            if r == -1 and s >= 0:
                right = p(0, s) - q(0, s)
            if s == -1 and r >= 0:
                right = right - (p(r, 0) - q(r, 0))
            if left != right:
                return Y1ModesResult(False, R, (r, s))
    return Y1ModesResult(True, R)


# -- (Y2) ---------------------------------------------------------------------------

@dataclass
class SerreResult:
    ok: bool
    N: int
    residual: object = None

    def to_json(self):
        if self.ok:
            return "ok"
        return {"N": self.N, "residual": str(self.residual)}


def serre_sum(ctx, k, l):
    """sum_p (-1)^p C(N, p) x_k^p * x_l * x_k^(N-p) with N = 1 - a_kl."""
    N = 1 - ctx.a_entry(k, l)
    xk, xl = mode_image(ctx, k, 0), mode_image(ctx, l, 0)
    powers = [star_power(xk, p, ctx.cfg) for p in range(N + 1)]
    grade = tuple(N * a + b for a, b in zip(xk.grade, xl.grade))
    total = ShuffleElement(grade, 0)
    for p in range(N + 1):
        term = _star(ctx, _star(ctx, powers[p], xl), powers[N - p])
        if term.grade != grade:
            raise ConsistencyError(f"Serre term has grade {term.grade}, expected {grade}")
        total = total + term * ((-1) ** p * comb(N, p))
    return total


def verify_serre(ctx, k, l):
    total = serre_sum(ctx, k, l)
    return SerreResult(total.is_zero(), 1 - ctx.a_entry(k, l), total.value)


def reduced_serre_expression(ctx, k, l):
    """The Serre sum after cancelling its common factor, in shifted variables.

    Slot i of color k stands for lambda^(k)_i - lambda^(l).
    """
    N = 1 - ctx.a_entry(k, l)
    a = ctx.pairs[(k, l)].a
    dk = ctx.d(k)
    x = [MPoly.lam(k, i) for i in range(1, N + 1)]
    kernel = RatExpr.from_factors(
        product(x[i] - x[j] + HBAR * dk for i in range(N) for j in range(i + 1, N)),
        [x[i] - x[j] for i in range(N) for j in range(i + 1, N)],
    )
    inner = MPoly.const(0)
    for p in range(N + 1):
        term = product(x[s] - HBAR * (a * HALF) for s in range(p)) * product(
            x[t] + HBAR * (a * HALF) for t in range(p, N)
        )
        inner = inner + term * ((-1) ** p * comb(N, p))
    grade = tuple(N if i == k else 0 for i in range(ctx.n))
    return symmetrize(kernel * inner, grade)


def verify_reduced_serre_identity(ctx, k, l):
    expr = reduced_serre_expression(ctx, k, l)
    return SerreResult(expr.is_zero(), 1 - ctx.a_entry(k, l), expr)


# -- closed forms ---------------------------------------------------------------------

def star_power_closed_form(ctx, k, n, first_slot=1):
    """Symmetrization of prod_{i<j} (lambda_ij + d_k hbar) / lambda_ij over n slots."""
    x = [MPoly.lam(k, first_slot + i) for i in range(n)]
    expr = RatExpr.from_factors(
        product(x[i] - x[j] + HBAR * ctx.d(k) for i in range(n) for j in range(i + 1, n)),
        [x[i] - x[j] for i in range(n) for j in range(i + 1, n)],
    )
    slots = range(first_slot, first_slot + n)
    return RatExpr.sum(expr.rename(_slot_perm(k, slots, perm)) for perm in _perms(slots))


def _perms(slots):
    import itertools

    return itertools.permutations(slots)


def _slot_perm(k, slots, perm):
    return {lam(k, s): lam(k, t) for s, t in zip(slots, perm) if s != t}


def power_times_l_closed_form(ctx, k, l, n):
    """Closed form of x_k^n * x_l."""
    pair = ctx.pairs[(k, l)]
    ll = MPoly.lam(l, 1)
    extra = product(_pair_factor(pair, ll, MPoly.lam(k, i), +1) for i in range(1, n + 1))
    return star_power_closed_form(ctx, k, n) * extra * pair.sign ** n


def mixed_closed_form(ctx, k, l, p, q):
    """Closed form of (x_k^p * x_l) * x_k^q, assembled from the other two closed forms."""
    pair = ctx.pairs[(k, l)]
    dk = ctx.d(k)
    ll = MPoly.lam(l, 1)
    xs = {i: MPoly.lam(k, i) for i in range(1, p + q + 1)}
    first = power_times_l_closed_form(ctx, k, l, p)
    second = star_power_closed_form(ctx, k, q, first_slot=p + 1)
    cross = RatExpr.from_factors(
        product(xs[s] - xs[t] + HBAR * dk for s in range(1, p + 1) for t in range(p + 1, p + q + 1)),
        [xs[s] - xs[t] for s in range(1, p + 1) for t in range(p + 1, p + q + 1)],
    )
    tail = product(_pair_factor(pair, ll, xs[t], -1) for t in range(p + 1, p + q + 1))
    body = first * second * cross * tail * pair.sign ** q
    v1 = tuple(p if i == k else (1 if i == l else 0) for i in range(ctx.n))
    v2 = tuple(q if i == k else 0 for i in range(ctx.n))
    return shuffle_sum(body, v1, v2)


@dataclass
class ClosedFormsResult:
    star_power: dict = field(default_factory=dict)
    power_times_l: dict = field(default_factory=dict)
    mixed: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.star_power.values()) and all(self.power_times_l.values()) and all(self.mixed.values())

    def to_json(self):
        return {
            "ok": self.ok,
            "star_power": {str(n): v for n, v in self.star_power.items()},
            "power_times_l": {str(n): v for n, v in self.power_times_l.items()},
            "mixed": {f"{p},{q}": v for (p, q), v in self.mixed.items()},
        }


def verify_closed_forms(ctx, k, l, n_max=4, pq_max=4):
    """Compare iterated products with their closed forms."""
    res = ClosedFormsResult()
    xk, xl = mode_image(ctx, k, 0), mode_image(ctx, l, 0)
    powers = [star_power(xk, n, ctx.cfg) for n in range(max(n_max, pq_max) + 1)]
    for n in range(1, n_max + 1):
        res.star_power[n] = powers[n].value == star_power_closed_form(ctx, k, n)
    if k == l:
        return res
    for n in range(1, n_max + 1):
        prod_ = _star(ctx, powers[n], xl)
        res.power_times_l[n] = prod_.value == power_times_l_closed_form(ctx, k, l, n)
    for p in range(pq_max + 1):
        for q in range(pq_max + 1 - p):
            left = _star(ctx, _star(ctx, powers[p], xl), powers[q])
            res.mixed[(p, q)] = left.value == mixed_closed_form(ctx, k, l, p, q)
    return res


# -- reports ---------------------------------------------------------------------------

SUITES = ("y1", "serre", "closed-forms")


def verify_pair(ctx, k, l, suites=SUITES, R=3):
    """Run the selected checks for one ordered pair; returns (ok, report dict)."""
    report = {"pair": [k, l]}
    ok = True
    if "y1" in suites:
        y1 = verify_Y1(ctx, k, l)
        modes = verify_Y1_modes(ctx, k, l, R)
        report["Y1"] = y1.to_json()
        report["Y1_modes"] = modes.to_json()
        ok &= y1.ok and y1.closed_form_ok and modes.ok
    if k != l and "serre" in suites:
        serre = verify_serre(ctx, k, l)
        reduced = verify_reduced_serre_identity(ctx, k, l)
        report["serre"] = serre.to_json()
        report["serre_reduced"] = reduced.to_json()
        ok &= serre.ok and reduced.ok
    if "closed-forms" in suites:
        cf = verify_closed_forms(ctx, k, l)
        report["closed_forms"] = cf.to_json()
        ok &= cf.ok
    return ok, report


def cartan_report(cartan):
    return {"valid": not validate_cartan(cartan), "A": [list(r) for r in cartan.A], "D": list(cartan.D)}

"""
Noncommutative polynomials in the path algebra of an extended quiver.

Paths compose right to left, like maps: the word ``h hs`` means "first
``hs``, then ``h``".  For an arrow ``h: i -> j`` the word ``B_j h hs`` is a
cycle at ``j``::

    j --hs--> i --h--> j --B_j--> j

so a path ``a_1 a_2 ... a_n`` is composable when
``source(a_k) == target(a_{k+1})``, runs from ``source(a_n)`` to
``target(a_1)``, and a representation evaluates it as the matrix product
``M(a_1) @ ... @ M(a_n)``.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, StructuralError
from .poly import as_rational, format_rational


@dataclass(frozen=True)
class Path:
    gens: tuple
    vertex: int  # source vertex; the only datum of an empty path

    @classmethod
    def of(cls, *gens):
        if not gens:
            raise ValueError("use Path.trivial for the empty path")
        for left, right in zip(gens, gens[1:]):
            if left.source != right.target:
                raise StructuralError(f"{left} cannot follow {right}")
        return cls(tuple(gens), gens[-1].source)

    @classmethod
    def trivial(cls, vertex):
        return cls((), vertex)

    @property
    def source(self):
        return self.vertex

    @property
    def target(self):
        return self.gens[0].target if self.gens else self.vertex

    def is_cycle(self):
        return self.source == self.target

    def __len__(self):
        return len(self.gens)

    def compose(self, right):
        """``self`` after ``right``, or None when they do not compose."""
        if right.target != self.source:
            return None
        return Path(self.gens + right.gens, right.vertex)

    def names(self):
        return [g.name for g in self.gens]

    def __str__(self):
        return " ".join(self.names()) if self.gens else f"e:{self.vertex}"


def canonical_rotation(path):
    """Lexicographically least rotation (by generator name) of a cycle."""
    if not path.is_cycle():
        raise DomainError(f"{path} is not a cycle")
    gens = path.gens
    if not gens:
        return path
    names = [g.name for g in gens]
    best = min(range(len(gens)), key=lambda r: names[r:] + names[:r])
    rot = gens[best:] + gens[:best]
    return Path(rot, rot[-1].source)


class NCPoly:
    """Finite rational combination of paths; incomposable products vanish."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for p, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                clean[p] = clean.get(p, 0) + c
        self._terms = {p: c for p, c in clean.items() if c}

    @classmethod
    def gen(cls, g, coeff=1):
        return cls({Path.of(g): coeff})

    @classmethod
    def path(cls, *gens, coeff=1):
        return cls({Path.of(*gens): coeff})

    @classmethod
    def idempotent(cls, vertex):
        return cls({Path.trivial(vertex): 1})

    def items(self):
        return self._terms.items()

    @property
    def terms(self):
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other):
        out = dict(self._terms)
        for p, c in other._terms.items():
            out[p] = out.get(p, 0) + c
        return NCPoly(out)

    def __neg__(self):
        return NCPoly({p: -c for p, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NCPoly({p: c * other for p, c in self._terms.items()})
        out = {}
        for p, c in self._terms.items():
            for q, d in other._terms.items():
                pq = p.compose(q)
                if pq is not None:
                    out[pq] = out.get(pq, 0) + c * d
        return NCPoly(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        if n == 0:
            raise ValueError("zeroth power needs a vertex; use NCPoly.idempotent")
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda pc: (len(pc[0]), pc[0].names(), pc[0].vertex))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for p, c in self.sorted_terms():
            parts.append(("" if c == 1 else "-" if c == -1 else f"({c})") + str(p))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"NCPoly({self})"

    def to_json(self):
        return [
            {"coeff": format_rational(c), "path": p.names(), **({} if p.gens else {"vertex": p.vertex})}
            for p, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data, eq):
        terms = {}
        for t in data:
            try:
                names = t["path"]
                c = as_rational(t["coeff"])
            except (KeyError, TypeError):
                raise StructuralError(f"bad NCPoly term {t!r}") from None
            p = Path.of(*(eq.generator(n) for n in names)) if names else Path.trivial(int(t["vertex"]))
            terms[p] = terms.get(p, 0) + c
        return cls(terms)


def _loop_power(eq, i, e):
    if e == 0:
        return NCPoly.idempotent(i)
    return NCPoly.gen(eq.loop(i)) ** e


def build_potential(eq):
    """W^L = sum over arrows h of B_inc^l(inc,out) h h* - B_out^l(out,inc) h* h."""
    q = eq.base
    w = NCPoly()
    for k, a in enumerate(q.arrows):
        h, hs = NCPoly.gen(eq.arrow(k)), NCPoly.gen(eq.reversed_arrow(k))
        w = w + _loop_power(eq, a.inc, q.l(a.inc, a.out)) * h * hs
        w = w - _loop_power(eq, a.out, q.l(a.out, a.inc)) * hs * h
    return w


def cyclic_derivative(w, a):
    """Cut every cycle of ``w`` at each occurrence of generator ``a``."""
    out = {}
    for p, c in w.items():
        if not p.is_cycle():
            raise DomainError(f"term {p} of the potential is not a cycle")
        gens = p.gens
        for i, g in enumerate(gens):
            if g != a:
                continue
            rest = gens[i + 1:] + gens[:i]
            path = Path(rest, rest[-1].source) if rest else Path.trivial(a.target)
            out[path] = out.get(path, 0) + c
    return NCPoly(out)


def closed_form_derivative(eq, a):
    """The hand-derived cyclic derivative of W^L with respect to ``a``."""
    q = eq.base
    if a.kind in ("h", "hs"):
        k = a.index
        arr = q.arrows[k]
        h, hs = NCPoly.gen(eq.arrow(k)), NCPoly.gen(eq.reversed_arrow(k))
        b_inc = _loop_power(eq, arr.inc, q.l(arr.inc, arr.out))
        b_out = _loop_power(eq, arr.out, q.l(arr.out, arr.inc))
        if a.kind == "h":
            return hs * b_inc - b_out * hs
        return b_inc * h - h * b_out
    i = a.index
    out = NCPoly()
    for k, arr in enumerate(q.arrows):
        h, hs = NCPoly.gen(eq.arrow(k)), NCPoly.gen(eq.reversed_arrow(k))
        if arr.inc == i:
            l = q.l(i, arr.out)
            for e in range(l):
                out = out + _loop_power(eq, i, l - 1 - e) * h * hs * _loop_power(eq, i, e)
        if arr.out == i:
            l = q.l(i, arr.inc)
            for e in range(l):
                out = out - _loop_power(eq, i, l - 1 - e) * hs * h * _loop_power(eq, i, e)
    return out


def verify_closed_form_derivatives(eq):
    w = build_potential(eq)
    return all(cyclic_derivative(w, g) == closed_form_derivative(eq, g) for g in eq.generators())


def cut_degree(path, cut):
    cut = set(cut)
    return sum(1 for g in path.gens if g in cut)


def check_cut(w, cut):
    """Whether every term of ``w`` has exactly one generator from ``cut``."""
    return all(cut_degree(p, cut) == 1 for p, _ in w.items())


def rotation_classes(w):
    """Multiset of (canonical rotation, coefficient) over the terms of ``w``."""
    out = Counter()
    for p, c in w.items():
        out[canonical_rotation(p)] += c
    return Counter({p: c for p, c in out.items() if c})


def euler_sum(w, cut):
    """Sum over ``a`` in ``cut`` of (dW/da) * a."""
    out = NCPoly()
    for a in cut:
        out = out + cyclic_derivative(w, a) * NCPoly.gen(a)
    return out

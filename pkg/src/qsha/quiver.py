"""
Quivers with symmetrizer, their extended quivers, weight functions, and the
construction of all of these from a symmetrizable Cartan matrix.

Vertices are ``0..n-1``.  An arrow ``h`` goes from ``out(h)`` (its source) to
``inc(h)`` (its target), so a representation assigns to ``h`` a map
``V^out(h) -> V^inc(h)``.  Arrow ids are list positions; they fix the
numbering ``h_1, ..., h_n`` used by the default weights.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter

from .errors import StructuralError, UnsupportedInputError, ValidationError, WeightConditionError


@dataclass(frozen=True)
class CartanData:
    A: tuple
    D: tuple

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        D = tuple(int(x) for x in self.D)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "D", D)

    @property
    def n(self):
        return len(self.A)

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data["A"], data["D"])
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad Cartan JSON: {exc}") from None

    def to_json(self):
        return {"A": [list(r) for r in self.A], "D": list(self.D)}


CARTAN_EXAMPLES = {
    "A1": CartanData([[2]], [1]),
    "A1xA1": CartanData([[2, 0], [0, 2]], [1, 1]),
    "A2": CartanData([[2, -1], [-1, 2]], [1, 1]),
    "B2": CartanData([[2, -1], [-2, 2]], [2, 1]),
    "G2": CartanData([[2, -1], [-3, 2]], [3, 1]),
    "A1^(1)": CartanData([[2, -2], [-2, 2]], [1, 1]),
}


def validate_cartan(data):
    """Return a list of violated invariants; empty iff ``data`` is valid.

    Raises StructuralError when ``A`` is not square or ``D`` has the wrong length.
    """
    A, D = data.A, data.D
    n = len(A)
    if any(len(row) != n for row in A):
        raise StructuralError("Cartan matrix is not square")
    if len(D) != n:
        raise StructuralError(f"symmetrizer has length {len(D)}, expected {n}")
    report = []
    for i, d in enumerate(D):
        if d <= 0:
            report.append(f"d_{i} = {d} is not positive")
    for i in range(n):
        if A[i][i] != 2:
            report.append(f"a_{i}{i} = {A[i][i]} != 2")
        for j in range(n):
            if i == j:
                continue
            if A[i][j] > 0:
                report.append(f"a_{i}{j} = {A[i][j]} > 0")
            if (A[i][j] == 0) != (A[j][i] == 0):
                report.append(f"a_{i}{j} = {A[i][j]} but a_{j}{i} = {A[j][i]}")
            if i < j and D[i] * A[i][j] != D[j] * A[j][i]:
                report.append(
                    f"d_{i} a_{i}{j} = {D[i] * A[i][j]} != d_{j} a_{j}{i} = {D[j] * A[j][i]}"
                )
    return report


def require_valid(data):
    report = validate_cartan(data)
    if report:
        raise ValidationError("invalid Cartan data: " + "; ".join(report), report)
    return data


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int

    @property
    def out(self):
        return self.source

    @property
    def inc(self):
        return self.target


@dataclass(frozen=True)
class QuiverWithSymmetrizer:
    n_vertices: int
    arrows: tuple
    symmetrizer: dict = field(hash=False)

    def __post_init__(self):
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        sym = {(int(i), int(j)): int(l) for (i, j), l in self.symmetrizer.items()}
        object.__setattr__(self, "symmetrizer", sym)
        n = self.n_vertices
        adjacent = set()
        for k, a in enumerate(arrows):
            if not (0 <= a.source < n and 0 <= a.target < n):
                raise StructuralError(f"arrow {k} has an endpoint outside 0..{n - 1}")
            if a.source == a.target:
                raise UnsupportedInputError(f"arrow {k} is a self-loop")
            adjacent.add((a.source, a.target))
            adjacent.add((a.target, a.source))
        if set(sym) != adjacent:
            missing = sorted(adjacent - set(sym))
            extra = sorted(set(sym) - adjacent)
            raise StructuralError(
                f"symmetrizer must be defined exactly on adjacent pairs; missing {missing}, extra {extra}"
            )
        bad = [p for p, l in sym.items() if l <= 0]
        if bad:
            raise StructuralError(f"symmetrizer entries must be positive: {bad}")

    @property
    def vertices(self):
        return range(self.n_vertices)

    def l(self, i, j):
        try:
            return self.symmetrizer[(i, j)]
        except KeyError:
            raise StructuralError(f"no symmetrizer entry for ({i}, {j})") from None

    def arrows_between(self, i, j):
        """Ids of the arrows from i to j, in id order."""
        return [k for k, a in enumerate(self.arrows) if a.source == i and a.target == j]

    def adjacent_pairs(self):
        """Ordered pairs (i, j) with at least one arrow i -> j."""
        return sorted({(a.source, a.target) for a in self.arrows})

    def is_acyclic(self):
        ts = TopologicalSorter({v: set() for v in self.vertices})
        for a in self.arrows:
            ts.add(a.target, a.source)
        try:
            tuple(ts.static_order())
        except CycleError:
            return False
        return True

    def to_json(self, vertex_weights=None):
        out = {
            "vertices": self.n_vertices,
            "arrows": [{"from": a.source, "to": a.target} for a in self.arrows],
            "symmetrizer": {f"{i},{j}": l for (i, j), l in sorted(self.symmetrizer.items())},
        }
        if vertex_weights is not None:
            out["vertex_weights"] = list(vertex_weights)
        return out

    @classmethod
    def from_json(cls, data):
        try:
            n = int(data["vertices"])
            arrows = [(int(a["from"]), int(a["to"])) for a in data.get("arrows", [])]
            sym = {}
            for key, l in data.get("symmetrizer", {}).items():
                i, j = (int(x) for x in key.split(","))
                sym[(i, j)] = int(l)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise StructuralError(f"bad quiver JSON: {exc}") from None
        return cls(n, arrows, sym)


def cartan_to_quiver(data):
    """Quiver with symmetrizer of a Cartan matrix with symmetrizer.

    For i < j with a_ij != 0 there are |gcd(a_ij, a_ji)| arrows i -> j, and
    l_ij = |a_ij / gcd(a_ij, a_ji)|.
    """
    require_valid(data)
    A = data.A
    arrows, sym = [], {}
    for i in range(data.n):
        for j in range(i + 1, data.n):
            if A[i][j] == 0:
                continue
            g = math.gcd(A[i][j], A[j][i])
            arrows.extend([(i, j)] * g)
            sym[(i, j)] = abs(A[i][j]) // g
            sym[(j, i)] = abs(A[j][i]) // g
    return QuiverWithSymmetrizer(data.n, tuple(arrows), sym)


@dataclass(frozen=True)
class Generator:
    """A generator of the extended quiver's path algebra: ``h:k``, ``hs:k`` or ``B:i``."""

    name: str
    source: int
    target: int

    def __str__(self):
        return self.name

    @property
    def kind(self):
        return self.name.split(":")[0]

    @property
    def index(self):
        return int(self.name.split(":")[1])


@dataclass(frozen=True)
class ExtendedQuiver:
    base: QuiverWithSymmetrizer

    @property
    def n_vertices(self):
        return self.base.n_vertices

    def arrow(self, k):
        a = self.base.arrows[k]
        return Generator(f"h:{k}", a.source, a.target)

    def reversed_arrow(self, k):
        a = self.base.arrows[k]
        return Generator(f"hs:{k}", a.target, a.source)

    def loop(self, i):
        return Generator(f"B:{i}", i, i)

    @property
    def H(self):
        return [self.arrow(k) for k in range(len(self.base.arrows))]

    @property
    def H_op(self):
        return [self.reversed_arrow(k) for k in range(len(self.base.arrows))]

    @property
    def B(self):
        return [self.loop(i) for i in self.base.vertices]

    def generators(self):
        return self.H + self.H_op + self.B

    def generator(self, name):
        try:
            kind, idx = name.split(":")
            idx = int(idx)
            if kind == "h":
                return self.arrow(idx)
            if kind == "hs":
                return self.reversed_arrow(idx)
            if kind == "B":
                if not 0 <= idx < self.n_vertices:
                    raise IndexError
                return self.loop(idx)
        except (ValueError, IndexError):
            pass
        raise StructuralError(f"unknown generator {name!r}")


def extend_quiver(q):
    return ExtendedQuiver(q)


@dataclass(frozen=True)
class WeightFunction:
    quiver: QuiverWithSymmetrizer
    m_vertex: tuple
    m_arrow: tuple
    m_reversed: tuple

    def violations(self):
        q = self.quiver
        return [
            (i, j)
            for (i, j) in q.symmetrizer
            if i < j and self.m_vertex[i] * q.l(i, j) != self.m_vertex[j] * q.l(j, i)
        ]

    def to_json(self):
        return {
            "vertex": list(self.m_vertex),
            "arrow": list(self.m_arrow),
            "reversed": list(self.m_reversed),
        }


def default_weights(q, m_vertex):
    """Weights of the standard one-dimensional torus for an acyclic quiver.

    For the n arrows h_1..h_n from i to j (id order) and d = m_i l_ij:
    m_{h_p} = (n + 2 - 2p) d and m_{h_p*} = (2p - n) d.
    """
    m_vertex = tuple(int(m) for m in m_vertex)
    if len(m_vertex) != q.n_vertices:
        raise StructuralError("one vertex weight per vertex is required")
    if not q.is_acyclic():
        raise UnsupportedInputError("default weights need a quiver without oriented cycles")
    bad = [
        (i, j) for (i, j) in q.symmetrizer
        if i < j and m_vertex[i] * q.l(i, j) != m_vertex[j] * q.l(j, i)
    ]
    if bad:
        raise WeightConditionError(f"m_i l_ij != m_j l_ji for pairs {bad}", bad)
    m_arrow = [0] * len(q.arrows)
    m_rev = [0] * len(q.arrows)
    for i, j in q.adjacent_pairs():
        ids = q.arrows_between(i, j)
        n = len(ids)
        d = m_vertex[i] * q.l(i, j)
        for p, k in enumerate(ids, start=1):
            m_arrow[k] = (n + 2 - 2 * p) * d
            m_rev[k] = (2 * p - n) * d
    return WeightFunction(q, m_vertex, tuple(m_arrow), tuple(m_rev))


def check_specialization(w, t1, t2, t3):
    """Whether the weights make W^L invariant under (t1, t2, t3)."""
    t1, t2, t3 = Fraction(t1), Fraction(t2), Fraction(t3)
    q = w.quiver
    for k, a in enumerate(q.arrows):
        base = t1 * w.m_arrow[k] + t2 * w.m_reversed[k]
        if base + t3 * w.m_vertex[a.inc] * q.l(a.inc, a.out) != 0:
            return False
        if base + t3 * w.m_vertex[a.out] * q.l(a.out, a.inc) != 0:
            return False
    return True


def random_acyclic_quiver(rng, max_vertices=4, max_l=3, max_parallel=2):
    """Random quiver with symmetrizer whose arrows all go from lower to higher ids.

    The symmetrizer is built from random vertex weights m, so that
    m_i l_ij = m_j l_ji holds and ``default_weights(q, m)`` applies.
    Returns ``(q, m)``.
    """
    n = rng.randint(2, max_vertices)
    m = [rng.randint(1, max_l) for _ in range(n)]
    arrows, sym = [], {}
    for i in range(n):
        for j in range(i + 1, n):
            k = rng.randint(0, max_parallel)
            if not k:
                continue
            # m_i l_ij = m_j l_ji: take l_ij = m_j / g, l_ji = m_i / g
            g = math.gcd(m[i], m[j])
            if m[j] // g > max_l or m[i] // g > max_l:
                continue
            arrows.extend([(i, j)] * k)
            sym[(i, j)] = m[j] // g
            sym[(j, i)] = m[i] // g
    return QuiverWithSymmetrizer(n, tuple(arrows), sym), tuple(m)

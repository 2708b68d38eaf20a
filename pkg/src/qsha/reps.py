"""
Concrete matrix representations of an extended quiver over Q.

Matrices are numpy arrays of dtype ``object`` holding exact rationals.  The
generator ``a`` acts by a ``v^target(a) x v^source(a)`` matrix; paths are
evaluated right to left, matching :mod:`qsha.paths`.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, StructuralError
from .paths import check_cut, cyclic_derivative
from .poly import as_rational, format_rational


def zeros(rows, cols):
    return np.full((rows, cols), Fraction(0), dtype=object)


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = Fraction(1)
    return m


def as_matrix(rows, shape=None):
    if shape is not None and shape[0] * shape[1] == 0:
        return zeros(*shape)
    m = np.array([[Fraction(as_rational(x)) for x in r] for r in rows], dtype=object)
    if m.ndim != 2:
        raise StructuralError("matrix must be a list of rows")
    return m


def matmul(a, b):
    if a.shape[1] != b.shape[0]:
        raise StructuralError(f"cannot multiply {a.shape} by {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def trace(m):
    return sum((m[i, i] for i in range(min(m.shape))), Fraction(0))


@dataclass
class QuiverRep:
    eq: object
    dim: tuple
    matrices: dict = field(default_factory=dict)

    def __post_init__(self):
        self.dim = tuple(int(x) for x in self.dim)
        if len(self.dim) != self.eq.n_vertices:
            raise StructuralError("dimension vector length does not match the quiver")
        if any(x < 0 for x in self.dim):
            raise StructuralError("dimension vector must be nonnegative")
        for name, m in self.matrices.items():
            g = self.eq.generator(name)
            if m.shape != self.shape(g):
                raise StructuralError(f"{name} has shape {m.shape}, expected {self.shape(g)}")

    def shape(self, g):
        return (self.dim[g.target], self.dim[g.source])

    def matrix(self, g):
        try:
            return self.matrices[g.name]
        except KeyError:
            raise StructuralError(f"representation has no matrix for {g}") from None

    def with_matrices(self, updates):
        m = dict(self.matrices)
        m.update(updates)
        return QuiverRep(self.eq, self.dim, m)

    def covers(self, gens):
        return all(g.name in self.matrices for g in gens)

    def to_json(self):
        return {
            "dim": list(self.dim),
            "matrices": {
                name: [[format_rational(x) for x in row] for row in m.tolist()]
                for name, m in sorted(self.matrices.items())
            },
        }

    @classmethod
    def from_json(cls, data, eq):
        try:
            dim = [int(x) for x in data["dim"]]
            mats = {}
            for name, rows in data["matrices"].items():
                g = eq.generator(name)
                shape = (dim[g.target], dim[g.source])
                mats[name] = as_matrix(rows, shape)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise StructuralError(f"bad representation JSON: {exc}") from None
        return cls(eq, dim, mats)


def zero_rep(eq, dim, gens=None):
    gens = eq.generators() if gens is None else gens
    rep = QuiverRep(eq, dim)
    return rep.with_matrices({g.name: zeros(*rep.shape(g)) for g in gens})


def random_rep(eq, dim, rng, gens=None, lo=-9, hi=9, max_den=4):
    """Entries uniform in {lo..hi} / {1..max_den}."""
    gens = eq.generators() if gens is None else gens
    rep = QuiverRep(eq, dim)
    mats = {}
    for g in gens:
        r, c = rep.shape(g)
        m = zeros(r, c)
        for i in range(r):
            for j in range(c):
                m[i, j] = Fraction(rng.randint(lo, hi), rng.randint(1, max_den))
        mats[g.name] = m
    return rep.with_matrices(mats)


def evaluate_path(rep, path):
    if not path.gens:
        return identity(rep.dim[path.vertex])
    out = rep.matrix(path.gens[0])
    for g in path.gens[1:]:
        out = matmul(out, rep.matrix(g))
    return out


def evaluate(rep, poly, shape):
    """Evaluate an NCPoly whose paths all have the given matrix shape."""
    out = zeros(*shape)
    for p, c in poly.items():
        m = evaluate_path(rep, p)
        if m.shape != shape:
            raise StructuralError(f"path {p} evaluates to shape {m.shape}, expected {shape}")
        out = out + m * c
    return out


def trace_potential(rep, w):
    total = Fraction(0)
    for p, c in w.items():
        if not p.is_cycle():
            raise DomainError(f"term {p} is not a cycle")
        total += c * trace(evaluate_path(rep, p))
    return total


def evaluate_derivative(rep, w, a):
    """(dW/da)(rep), a ``v^source(a) x v^target(a)`` matrix."""
    return evaluate(rep, cyclic_derivative(w, a), (rep.dim[a.source], rep.dim[a.target]))


def is_critical(rep, w):
    for g in rep.eq.generators():
        d = evaluate_derivative(rep, w, g)
        if any(x != 0 for x in d.flat):
            return False
    return True


def pairing(m, l):
    """The trace pairing tr(m l)."""
    return trace(matmul(m, l))


def check_euler_trace_identity(rep, w, cut):
    """tr W(rep) == sum over a in cut of tr((dW/da)(rep) . rep[a])."""
    if not check_cut(w, cut):
        raise DomainError("potential is not homogeneous of degree 1 in the cut")
    rhs = sum((pairing(evaluate_derivative(rep, w, a), rep.matrix(a)) for a in cut), Fraction(0))
    return trace_potential(rep, w) == rhs


def directional_derivative(rep, w, direction):
    """First-order coefficient in eps of tr W(rep + eps * direction), by the product rule."""
    total = Fraction(0)
    for p, c in w.items():
        gens = p.gens
        for i, g in enumerate(gens):
            if g.name not in direction:
                continue
            mats = [rep.matrix(x) for x in gens]
            mats[i] = direction[g.name]
            prod = mats[0]
            for m in mats[1:]:
                prod = matmul(prod, m)
            total += c * trace(prod)
    return total


@dataclass
class LemmaZJResult:
    in_J: bool
    holds: bool
    samples: list = field(default_factory=list)
    witness: dict = None
    witness_trace: Fraction = None


def in_J(rep, w, cut):
    """Whether every cut derivative vanishes at ``rep``."""
    return all(not any(x != 0 for x in evaluate_derivative(rep, w, a).flat) for a in cut)


def check_lemma_ZJ(rep, w, cut, trials=20, seed=0):
    """Compare J-membership with vanishing of tr W on the whole cut fiber.

    ``rep`` carries matrices for the non-cut generators only.  A J-member must
    give tr W = 0 for ``trials`` random cut coordinates.  Otherwise a witness
    is built from the nonzero derivative D via the trace pairing: putting
    ``l_a = D^T`` gives tr W = sum of squares of D's entries, which is nonzero.
    """
    cut = list(cut)
    if not check_cut(w, cut):
        raise DomainError("potential is not homogeneous of degree 1 in the cut")
    probe = rep.with_matrices({a.name: zeros(*rep.shape(a)) for a in cut})
    derivs = {a.name: evaluate_derivative(probe, w, a) for a in cut}
    member = all(not any(x != 0 for x in d.flat) for d in derivs.values())
    rng = random.Random(seed)
    if member:
        samples = []
        for _ in range(trials):
            full = random_rep(rep.eq, rep.dim, rng, gens=cut)
            samples.append(trace_potential(rep.with_matrices(full.matrices), w))
        return LemmaZJResult(True, all(s == 0 for s in samples), samples)
    witness = {name: d.T.copy() for name, d in derivs.items()}
    value = trace_potential(rep.with_matrices(witness), w)
    return LemmaZJResult(False, value != 0, [], witness, value)


def conjugate(rep, g):
    """Act by g = (g_i) in G_v: M(a) -> g_target M(a) g_source^{-1}."""
    inv = {i: _inverse(m) for i, m in g.items()}
    mats = {}
    for name, m in rep.matrices.items():
        a = rep.eq.generator(name)
        mats[name] = matmul(matmul(g[a.target], m), inv[a.source])
    return rep.with_matrices(mats)


def _inverse(m):
    """Gauss-Jordan inverse over Q."""
    n = m.shape[0]
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.tolist())]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return np.array([row[n:] for row in a], dtype=object).reshape(n, n)

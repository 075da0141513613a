"""Tangent directions at a Gram matrix A.

A symmetric B is a harmonic direction at A when tr(A^-1 B) = 0; these are
the deformations that keep det A fixed.  Everything stays in Z^n coordinates
and rational, so no orthonormalisation is done; callers correct with the
Killing Gram matrix instead.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import _exact
from .errors import DimensionMismatch, ThetaError
from .lattice import GramMatrix, SymMatrix

__all__ = ["SymMatrix", "TangentBasis", "harmonic_dim", "tangent_basis", "killing_pair"]


def harmonic_dim(n):
    """Dimension (n^2 + n - 2) / 2 of the harmonic quadratic forms in n variables."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n * n + n - 2) // 2


def killing_pair(A, H1, H2):
    """The Killing pairing 2 tr(A^-1 H1 A^-1 H2)."""
    if not (A.n == H1.n == H2.n):
        raise DimensionMismatch(f"sizes {A.n}, {H1.n}, {H2.n} differ")
    Ainv = _exact.inverse(A.entries)
    left = _exact.matmul(Ainv, H1.entries)
    right = _exact.matmul(Ainv, H2.entries)
    return 2 * _exact.trace(_exact.matmul(left, right))


def _a_trace(Ainv, B):
    # tr(A^-1 B)
    n = len(Ainv)
    return sum((Ainv[i][j] * B[j][i] for i in range(n) for j in range(n)), Fraction(0))


def _primitive(rows):
    """Scale a nonzero rational matrix to coprime integer entries, first nonzero positive."""
    flat = [v for row in rows for v in row]
    d = lcm(*(v.denominator for v in flat))
    ints = [int(v * d) for v in flat]
    g = 0
    for v in ints:
        g = gcd(g, v)
    first = next(v for v in ints if v)
    s = g if first > 0 else -g
    return [[Fraction(int(v * d) // s) for v in row] for row in rows]


def _flat_upper(M):
    n = M.n
    return [M.entries[i][j] for i in range(n) for j in range(i, n)]


@dataclass(frozen=True)
class TangentBasis:
    base_form: GramMatrix
    vectors: tuple
    killing_gram: tuple

    @classmethod
    def from_vectors(cls, A, vectors):
        """Wrap an arbitrary basis of the harmonic directions, checking it."""
        vectors = tuple(v if isinstance(v, SymMatrix) else SymMatrix(v) for v in vectors)
        m = harmonic_dim(A.n)
        if len(vectors) != m:
            raise ThetaError(f"need {m} directions, got {len(vectors)}")
        Ainv = _exact.inverse(A.entries)
        for k, B in enumerate(vectors):
            if B.n != A.n:
                raise DimensionMismatch(f"direction {k} has size {B.n}, expected {A.n}")
            if _a_trace(Ainv, B.entries):
                raise ThetaError(f"direction {k} is not harmonic: tr(A^-1 B) != 0")
        if _exact.rank([_flat_upper(B) for B in vectors]) != m:
            raise ThetaError("directions are linearly dependent")
        return cls(A, vectors, _killing_gram(Ainv, vectors))

    def __len__(self):
        return len(self.vectors)

    def gram_det(self):
        return _exact.det(self.killing_gram)

    def gram_inverse(self):
        return _exact.inverse(self.killing_gram)


def _killing_gram(Ainv, vectors):
    prods = [_exact.matmul(Ainv, B.entries) for B in vectors]
    # tr(P Q) = sum_ab P[a][b] Q[b][a]; flatten P and Q^t once
    flat = [[v for row in P for v in row] for P in prods]
    flat_t = [[v for col in zip(*P) for v in col] for P in prods]
    m = len(vectors)
    G = [[Fraction(0)] * m for _ in range(m)]
    for j in range(m):
        for k in range(j, m):
            G[j][k] = G[k][j] = 2 * sum((x * y for x, y in zip(flat[j], flat_t[k])), Fraction(0))
    return tuple(tuple(row) for row in G)


def _reduce_into(echelon, v):
    """Reduce v against echelon rows [(pivot, row)]; append and return True if independent."""
    v = list(v)
    for p, row in echelon:
        if v[p]:
            f = v[p] / row[p]
            v = [x - f * y for x, y in zip(v, row)]
    p = next((k for k, x in enumerate(v) if x), None)
    if p is None:
        return False
    echelon.append((p, v))
    return True


def tangent_basis(A):
    """Deterministic rational basis of {B : tr(A^-1 B) = 0}.

    Each elementary symmetric matrix E_ij (i <= j, row-major order) is
    projected along A, B = E_ij - tr(A^-1 E_ij)/n * A, and scaled to a
    primitive integer matrix.  The n(n+1)/2 projections span a space of one
    dimension less; the first one that depends on its predecessors is dropped.
    """
    n = A.n
    Ainv = _exact.inverse(A.entries)
    kept, echelon = [], []
    for i in range(n):
        for j in range(i, n):
            E = [[Fraction(int((r, c) in ((i, j), (j, i)))) for c in range(n)] for r in range(n)]
            t = _a_trace(Ainv, E) / n
            B = [[E[r][c] - t * A.entries[r][c] for c in range(n)] for r in range(n)]
            if not any(v for row in B for v in row):
                continue
            B = SymMatrix(_primitive(B))
            if _reduce_into(echelon, _flat_upper(B)):
                kept.append(B)
    assert len(kept) == harmonic_dim(n)
    return TangentBasis(A, tuple(kept), _killing_gram(Ainv, kept))

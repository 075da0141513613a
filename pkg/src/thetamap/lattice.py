"""Gram matrices and enumeration of lattice vectors of bounded norm."""
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from . import _exact
from ._exact import format_rational, parse_rational
from .errors import DimensionMismatch, NotPositiveDefinite, NotSymmetric, NotUnimodular


class SymMatrix:
    """Immutable symmetric rational matrix (a quadratic form on Z^n)."""

    __slots__ = ("entries", "n", "_hash")

    def __init__(self, entries):
        rows = _exact.to_fraction_matrix(entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square and non-empty")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise NotSymmetric(f"entry ({i},{j}) = {rows[i][j]} but ({j},{i}) = {rows[j][i]}")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("matrices are immutable")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.entries))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_rational(v) for v in row) + "]"
                         for row in self.entries)
        return f"{type(self).__name__}([{body}])"

    def tolist(self):
        return [list(row) for row in self.entries]

    def scaled(self, c):
        c = Fraction(c)
        return type(self)([[c * v for v in row] for row in self.entries])

    def __add__(self, other):
        if not isinstance(other, SymMatrix) or other.n != self.n:
            return NotImplemented
        return SymMatrix([[a + b for a, b in zip(r, s)]
                          for r, s in zip(self.entries, other.entries)])

    def value(self, v):
        """v^T M v for an integer (or rational) vector v."""
        return sum((self.entries[i][j] * v[i] * v[j]
                    for i in range(self.n) for j in range(self.n)), Fraction(0))

    def pair(self, u, v):
        return sum((self.entries[i][j] * u[i] * v[j]
                    for i in range(self.n) for j in range(self.n)), Fraction(0))

    def det(self):
        return _exact.det(self.entries)

    def integer_form(self):
        """(M, d): integer numpy matrix and denominator with self == M / d."""
        return _exact.integer_form(self.entries)


class GramMatrix(SymMatrix):
    """Symmetric positive definite rational matrix A; the form x -> x^T A x."""

    __slots__ = ()

    def __init__(self, entries):
        super().__init__(entries)
        pivots = _exact.leading_pivots(self.entries)
        if pivots[-1] <= 0:
            k = len(pivots)
            minor = Fraction(1)
            for p in pivots:
                minor *= p
            raise NotPositiveDefinite(k, minor)

    def inverse(self):
        return SymMatrix(_exact.inverse(self.entries))


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple
    norm: Fraction


def validate(entries):
    """Check symmetry and positive definiteness exactly; return a GramMatrix."""
    if isinstance(entries, GramMatrix):
        return entries
    if isinstance(entries, SymMatrix):
        entries = entries.entries
    return GramMatrix(entries)


def cholesky_float(A):
    """Upper triangular Q with positive diagonal and Q^T Q = A (floating point)."""
    a = np.array([[float(v) for v in row] for row in A.entries])
    return np.linalg.cholesky(a).T


def transform(A, T):
    """Return T^t A T for an integer matrix T with det T = +-1."""
    T = [[int(v) for v in row] for row in T]
    if len(T) != A.n or any(len(row) != A.n for row in T):
        raise DimensionMismatch(f"transform must be {A.n}x{A.n}")
    if abs(_exact.det(_exact.to_fraction_matrix(T))) != 1:
        raise NotUnimodular("transform matrix must have determinant +1 or -1")
    Tf = _exact.to_fraction_matrix(T)
    return GramMatrix(_exact.matmul(_exact.transpose(Tf), _exact.matmul(A.entries, Tf)))


def direct_sum(A1, A2):
    """Block diagonal Gram matrix of the orthogonal sum."""
    n1, n2 = A1.n, A2.n
    rows = [list(r) + [0] * n2 for r in A1.entries]
    rows += [[0] * n1 + list(r) for r in A2.entries]
    return GramMatrix(rows)


def thread_count():
    """Worker threads for enumeration: THETA_THREADS, 0 or unset meaning auto."""
    raw = os.environ.get("THETA_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError:
        k = 0
    if k <= 0:
        k = os.cpu_count() or 1
    return k


def _float_margin(X):
    return 1e-7 * (float(X) + 1.0)


def _expand(frontier, partial, level, Q, mu, X):
    """One Fincke-Pohst level, vectorised over the current frontier.

    frontier holds the already fixed coordinates (levels > `level`) as
    columns level+1..n-1.  Candidate intervals are widened by one unit on
    each side; the float partial norm prunes with a small tolerance and the
    exact check happens later.
    """
    n = Q.shape[0]
    if frontier.shape[0] == 0:
        return frontier, partial
    fixed = frontier[:, level + 1:]
    center = -(fixed @ mu[level, level + 1:]) if level + 1 < n else np.zeros(frontier.shape[0])
    room = np.maximum(X - partial, 0.0)
    rad = np.sqrt(room) / Q[level, level]
    lo = np.ceil(center - rad).astype(np.int64) - 1
    hi = np.floor(center + rad).astype(np.int64) + 1
    counts = hi - lo + 1
    idx = np.repeat(np.arange(frontier.shape[0]), counts)
    starts = np.cumsum(counts) - counts
    offsets = np.arange(idx.shape[0]) - np.repeat(starts, counts)
    vals = lo[idx] + offsets
    newpart = partial[idx] + (Q[level, level] * (vals - center[idx])) ** 2
    keep = newpart <= X + _float_margin(X)
    out = frontier[idx[keep]].copy()
    out[:, level] = vals[keep]
    return out, newpart[keep]


def _enumerate_block(top_values, Q, mu, X):
    n = Q.shape[0]
    frontier = np.zeros((len(top_values), n), dtype=np.int64)
    frontier[:, n - 1] = top_values
    partial = (Q[n - 1, n - 1] * frontier[:, n - 1].astype(float)) ** 2
    keep = partial <= X + _float_margin(X)
    frontier, partial = frontier[keep], partial[keep]
    for level in range(n - 2, -1, -1):
        frontier, partial = _expand(frontier, partial, level, Q, mu, X)
    return frontier


class Shells:
    """Enumerated vectors {x : x^T A x <= X} with exact integer-scaled norms.

    coords: (N, n) integer array, lexicographically sorted.
    norm_num: integer array with norm = norm_num / denom exactly.
    gram_int: integer matrix equal to denom * A.
    """

    def __init__(self, A, X, coords, norm_num, gram_int, denom):
        self.A = A
        self.X = X
        self.coords = coords
        self.norm_num = norm_num
        self.gram_int = gram_int
        self.denom = denom
        self._groups = None

    def __len__(self):
        return self.coords.shape[0]

    def groups(self):
        """List of (norm, coords of that norm) in ascending norm, zero included."""
        if self._groups is None:
            buckets = {}
            for i, k in enumerate(self.norm_num.tolist()):
                buckets.setdefault(int(k), []).append(i)
            self._groups = [(Fraction(k, self.denom), self.coords[idx])
                            for k, idx in sorted(buckets.items())]
        return self._groups

    def vectors(self):
        return [LatticeVector(tuple(int(v) for v in row), Fraction(int(k), self.denom))
                for row, k in zip(self.coords, self.norm_num)]


def _row_norms(V, gram_int):
    return (V @ gram_int * V).sum(axis=1)


def shells(A, X, threads=None):
    """Exact enumeration of every x in Z^n with x^T A x <= X."""
    X = parse_rational(X) if not isinstance(X, Fraction) else X
    if X < 0:
        raise ValueError("enumeration bound must be non-negative")
    n = A.n
    gram_int, denom = A.integer_form()
    Q = cholesky_float(A)
    mu = Q / np.diag(Q)[:, None]
    Xf = float(X)
    top = isqrt(int(Xf / Q[n - 1, n - 1] ** 2) + 1) + 1
    top_values = np.arange(-top, top + 1, dtype=np.int64)
    threads = thread_count() if threads is None else max(1, threads)
    if threads > 1 and len(top_values) >= 2 * threads and Xf > 0:
        chunks = np.array_split(top_values, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _enumerate_block(c, Q, mu, Xf), chunks))
        cand = np.concatenate(parts, axis=0)
    else:
        cand = _enumerate_block(top_values, Q, mu, Xf)
    # exact filter: norm_num / denom <= X  <=>  norm_num * X.den <= X.num * denom
    maxc = int(np.abs(cand).max()) if cand.size else 0
    bound = maxc * maxc * int(np.abs(gram_int).sum() if gram_int.dtype != object
                              else sum(abs(int(v)) for v in gram_int.flat)) + 1
    if _exact.safe_dtype(bound * X.denominator) is object:
        cand = cand.astype(object)
        gi = gram_int.astype(object)
    else:
        gi = gram_int.astype(np.int64)
    norms = _row_norms(cand, gi)
    ok = norms * X.denominator <= X.numerator * denom
    cand, norms = cand[ok], norms[ok]
    order = np.lexsort(cand.T[::-1]) if cand.shape[0] else np.arange(0)
    return Shells(A, X, cand[order], norms[order], gi, denom)


def enumerate_vectors(A, X):
    """All lattice vectors with x^T A x <= X, lexicographic order, exact norms."""
    return shells(A, X).vectors()


def spectrum(A, X):
    """[(norm, multiplicity)] of the nonzero norms <= X, ascending."""
    return [(norm, len(vs)) for norm, vs in shells(A, X).groups() if norm]


# --- JSON file format: {"n": int, "gram": [["p/q", ...], ...]} ---

def matrix_to_json(M, key="gram"):
    return json.dumps({"n": M.n, key: [[format_rational(v) for v in row] for row in M.entries]})


def _rows_from_json(obj):
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object with keys 'n' and 'gram'")
    rows = obj.get("gram", obj.get("matrix"))
    if rows is None or "n" not in obj:
        raise ValueError("expected keys 'n' and 'gram'")
    n = obj["n"]
    if not isinstance(n, int) or not isinstance(rows, list) or len(rows) != n \
            or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise DimensionMismatch(f"'gram' must be an {n}x{n} array")
    for r in rows:
        for v in r:
            if not isinstance(v, (str, int)) or isinstance(v, bool):
                raise ValueError(f"entries must be strings 'p/q' or integers, got {v!r}")
    return [[parse_rational(v) for v in r] for r in rows]


def gram_from_json(text):
    return GramMatrix(_rows_from_json(json.loads(text)))


def sym_from_json(text):
    return SymMatrix(_rows_from_json(json.loads(text)))

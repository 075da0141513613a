"""Theta series invariants of a positive definite form A.

Conventions.  All Euclidean quantities are taken through the Gram matrix:
<x, y> = x^T A y and |x|^2 = x^T A x, so every coefficient is an exact
rational.  theta11 is normalised as

    a_m = sum over (g, d) with |g|^2 + |d|^2 = m of  <g,d>^2 / 2 - |g|^2 |d|^2 / (2n).

With the Killing Gram matrix G of any rational harmonic basis B_1..B_m,
sum_jk (G^-1)_jk dtheta(B_j) dtheta(B_k) reproduces this series exactly, so
the two routes agree with constant ROUTE_CONSTANT = 1.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _exact
from .errors import DimensionMismatch
from .harmonic import harmonic_dim, tangent_basis
from .lattice import direct_sum, shells  # noqa: F401  (direct_sum re-exported)
from .qseries import QSeries, add, det_series, is_zero, mul, qderiv, scale

# theta11_direct == ROUTE_CONSTANT * theta11_harmonic
ROUTE_CONSTANT = Fraction(1)

# Scalar in front of F_1(f, g) = k f Dg - l Df g in the direct-sum formula,
# fitted against theta11_direct on Z + 2Z (see tests/test_invariants.py).
RANKIN_COHEN_SCALE = Fraction(1)

_CHUNK = 4096


@dataclass(frozen=True)
class Theta11Report:
    series: QSeries
    route: str
    bound: Fraction


@dataclass(frozen=True)
class WronskianResult:
    raw_det: QSeries
    gram_det: Fraction
    normalized_square: QSeries


def theta_weight(n):
    return Fraction(n, 2)


def dtheta_weight(n):
    """Weight of dtheta(A, B) for harmonic B."""
    return Fraction(n + 4, 2)


def wronskian_weight(n):
    return Fraction((n + 2) ** 2 * n * (n - 1), 4)


def det2_weight(n):
    """Weight of the squared Wronskian invariant (metadata only)."""
    return Fraction((n + 2) ** 2 * n * (n - 1), 2)


def _bound(X):
    return X if isinstance(X, Fraction) else _exact.parse_rational(X)


def _int_sum(arr):
    return int(arr.sum()) if arr.dtype == object else sum(int(v) for v in arr.tolist())


def _quad_values(V, Mi):
    """Row-wise V[r]^T Mi V[r] with an overflow-safe dtype."""
    if V.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    maxc = int(np.abs(V).max())
    mag = maxc * maxc * sum(abs(int(v)) for v in np.asarray(Mi).flat) * max(1, V.shape[0])
    if _exact.safe_dtype(mag) is object:
        V, Mi = V.astype(object), np.asarray(Mi).astype(object)
    else:
        V, Mi = V.astype(np.int64), np.asarray(Mi).astype(np.int64)
    return (V @ Mi * V).sum(axis=1)


def _theta_from_shells(sh):
    return QSeries(((norm, len(V)) for norm, V in sh.groups()), sh.X)


def theta_series(A, X):
    """Sum of q^(x^T A x) over x in Z^n, up to q^X."""
    return _theta_from_shells(shells(A, _bound(X)))


def _dtheta_from_shells(sh, B):
    Bi, dB = B.integer_form()
    terms = []
    for norm, V in sh.groups():
        if norm == 0:
            continue
        total = _int_sum(_quad_values(V, Bi))
        if total:
            terms.append((norm, Fraction(total, dB)))
    return QSeries._raw(terms, sh.X)


def dtheta(A, B, X):
    """Sum of (x^T B x) q^(x^T A x): the derivative of theta along direction B."""
    if A.n != B.n:
        raise DimensionMismatch(f"form has size {A.n}, direction has size {B.n}")
    return _dtheta_from_shells(shells(A, _bound(X)), B)


def _half(V):
    """Rows whose first nonzero coordinate is positive (one of each +-x pair)."""
    if V.shape[0] == 0:
        return V
    nz = V != 0
    first = np.argmax(nz, axis=1)
    return V[V[np.arange(V.shape[0]), first] > 0]


def _sum_sq_pairings(H1, H2, gram_int):
    """sum over rows g of H1, d of H2 of (g^T G d)^2, as a Python int."""
    if H1.shape[0] == 0 or H2.shape[0] == 0:
        return 0
    m1 = int(np.abs(H1).max())
    m2 = int(np.abs(H2).max())
    g = sum(abs(int(v)) for v in gram_int.flat)
    pmax = m1 * m2 * g
    use_obj = _exact.safe_dtype(pmax * pmax * H2.shape[0]) is object
    dt = object if use_obj else np.int64
    right = (gram_int.astype(dt) @ H2.astype(dt).T)
    total = 0
    for start in range(0, H1.shape[0], _CHUNK):
        P = H1[start:start + _CHUNK].astype(dt) @ right
        sq = P * P
        total += int(sq.sum()) if use_obj else sum(int(v) for v in sq.sum(axis=1).tolist())
    return total


def _theta11_direct_from_shells(sh):
    n = sh.A.n
    D = sh.denom
    X = sh.X
    groups = [(norm, V, _half(V)) for norm, V in sh.groups() if norm]
    acc = {}
    for s, (Ns, Vs, Hs) in enumerate(groups):
        for t in range(s, len(groups)):
            Nt, Vt, Ht = groups[t]
            if Ns + Nt > X:
                break
            # (g, d) -> (+-g, +-d) leaves every term unchanged
            sq = 4 * _sum_sq_pairings(Hs, Ht, sh.gram_int)
            coeff = Fraction(sq, 2 * D * D) - Fraction(len(Vs) * len(Vt)) * Ns * Nt / (2 * n)
            if s != t:
                coeff *= 2
            e = Ns + Nt
            acc[e] = acc.get(e, 0) + coeff
    return QSeries(acc, X)


def theta11_direct(A, X):
    """theta11 from its defining pair sum."""
    X = _bound(X)
    return Theta11Report(_theta11_direct_from_shells(shells(A, X)), "direct", X)


def theta11_harmonic(A, X, basis=None):
    """theta11 as sum_jk (G^-1)_jk dtheta(B_j) dtheta(B_k) over a harmonic basis."""
    X = _bound(X)
    basis = tangent_basis(A) if basis is None else basis
    if basis.base_form != A:
        raise DimensionMismatch("tangent basis belongs to a different form")
    sh = shells(A, X)
    ds = [_dtheta_from_shells(sh, B) for B in basis.vectors]
    total = QSeries._raw((), X)
    live = [j for j, d in enumerate(ds) if not is_zero(d)]
    if live:
        Ginv = basis.gram_inverse()
        for a, j in enumerate(live):
            for k in live[a:]:
                c = Ginv[j][k] if j == k else 2 * Ginv[j][k]
                if c:
                    total = add(total, scale(c, mul(ds[j], ds[k])))
    return Theta11Report(total, "harmonic", X)


def wronskian_matrix(A, X, basis=None):
    """Rows k = 0..m-1 holding qderiv^k of dtheta(A, B_j, X)."""
    X = _bound(X)
    basis = tangent_basis(A) if basis is None else basis
    sh = shells(A, X)
    row = [_dtheta_from_shells(sh, B) for B in basis.vectors]
    rows = []
    for _ in range(len(row)):
        rows.append(row)
        row = [qderiv(f) for f in row]
    return rows, basis


def wronskian(A, X, basis=None):
    """Wronskian of the harmonic theta series, plus its basis-free square.

    raw_det depends on the basis through det(M) for a change of basis M, and
    the Killing Gram determinant picks up det(M)^2, so
    normalized_square = raw_det^2 / det(G) does not depend on the basis.
    The cost grows like m 2^m with m = (n^2 + n - 2)/2; n >= 5 is impractical.
    """
    X = _bound(X)
    if harmonic_dim(A.n) == 0:
        one = QSeries.constant(1, X)
        return WronskianResult(one, Fraction(1), one)
    rows, basis = wronskian_matrix(A, X, basis)
    raw = det_series(rows)
    gram_det = basis.gram_det()
    return WronskianResult(raw, gram_det, scale(1 / gram_det, mul(raw, raw)))


def wronskian_start_bound(A):
    """Sum of the m smallest distinct nonzero norms.

    Expanding the determinant column by column, every term uses m distinct
    norm shells, so no exponent below this sum can appear in raw_det.
    """
    m = harmonic_dim(A.n)
    Y = Fraction(1)
    while True:
        norms = [norm for norm, _ in shells(A, Y).groups() if norm]
        if len(norms) >= m:
            return sum(norms[:m], Fraction(0))
        Y *= 2


def wronskian_adaptive(A, max_steps=8):
    """Wronskian at the smallest bound where raw_det has a term.

    Starts from wronskian_start_bound and moves to the next shell norm sum
    until a term survives; returns (bound, result), or the last attempt
    if max_steps is exhausted.
    """
    X = wronskian_start_bound(A)
    for _ in range(max_steps):
        w = wronskian(A, X)
        if not is_zero(w.raw_det):
            return X, w
        nxt = [norm for norm, _ in shells(A, X + 1).groups() if norm > X]
        X = nxt[0] if nxt else X + 1
    return X, w


def rankin_cohen_f1(f, k, g, l):
    """First Rankin-Cohen bracket k f Dg - l Df g, with D = q d/dq."""
    return add(scale(k, mul(f, qderiv(g))), scale(-Fraction(l), mul(qderiv(f), g)))


def theta11_direct_sum(theta1, theta11_1, n1, theta2, theta11_2, n2):
    """theta11 of an orthogonal sum from the data of the two summands.

    The classical formula is written for theta11 divided by the rank; inputs
    and output here use the normalisation of theta11_direct, so the summand
    invariants are divided by n1, n2 going in and the result multiplied by
    n1 + n2 coming out.
    """
    n = n1 + n2
    h1 = scale(Fraction(1, n1), theta11_1)
    h2 = scale(Fraction(1, n2), theta11_2)
    f1 = scale(RANKIN_COHEN_SCALE,
               rankin_cohen_f1(theta1, Fraction(n1, 2), theta2, Fraction(n2, 2)))
    hat = add(add(scale(Fraction(n1, n), mul(h1, mul(theta2, theta2))),
                  scale(Fraction(n2, n), mul(h2, mul(theta1, theta1)))),
              scale(Fraction(2, n1 * n2 * n * n), mul(f1, f1)))
    return scale(n, hat)


@dataclass(frozen=True)
class InvariantComparison:
    theta_equal: bool
    theta11_equal: bool
    theta_differs_at: Fraction = None
    theta11_differs_at: Fraction = None

    def render(self):
        def verdict(equal, at):
            return "EQUAL" if equal else f"DIFFER@{_exact.format_rational(at)}"
        return (f"theta: {verdict(self.theta_equal, self.theta_differs_at)}\n"
                f"theta11: {verdict(self.theta11_equal, self.theta11_differs_at)}\n")


def first_difference(f, g):
    """Smallest exponent where two series differ, or None."""
    a, b = f.as_dict(), g.as_dict()
    diffs = [e for e in set(a) | set(b) if a.get(e, 0) != b.get(e, 0)]
    return min(diffs) if diffs else None


def compare_invariants(A1, A2, X):
    """Truncated comparison of theta and theta11 for two forms of equal rank."""
    if A1.n != A2.n:
        raise DimensionMismatch(f"ranks differ: {A1.n} vs {A2.n}")
    X = _bound(X)
    s1, s2 = shells(A1, X), shells(A2, X)
    d_theta = first_difference(_theta_from_shells(s1), _theta_from_shells(s2))
    d_11 = first_difference(_theta11_direct_from_shells(s1), _theta11_direct_from_shells(s2))
    return InvariantComparison(d_theta is None, d_11 is None, d_theta, d_11)

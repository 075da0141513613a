"""Binary forms: Gauss reduction, the degeneracy classification, the explicit
rank-2 Wronskian, and recovery of the form from its first norms.

A reduced form [[a, b], [b, c]] satisfies 0 <= 2b <= a <= c, i.e.
tau = (b + i sqrt(ac - b^2)) / a lies in {|tau| >= 1, 0 <= Re tau <= 1/2}.
The three boundary pieces b = 0, 2b = a and a = c are exactly the lattices
with a reflection symmetry, where the Wronskian vanishes.
"""
import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._exact import format_rational
from .errors import Ambiguous, DimensionMismatch, NoMatch
from .invariants import _half, _theta11_direct_from_shells
from .lattice import GramMatrix, shells, spectrum, transform
from .qseries import QSeries

# proof-style coefficient 2<g,d>^2 - |g|^2|d|^2 per pair is this multiple of
# the theta11_direct term <g,d>^2/2 - |g|^2|d|^2/4 in rank 2
PROOF_NORMALIZATION = 4

_ROMAN = {1: "i", 2: "ii", 3: "iii"}


class Verdict(enum.Enum):
    VANISHING = "VANISHING"
    DEGENERATE = "DEGENERATE"
    NONDEGENERATE = "NONDEGENERATE"


@dataclass(frozen=True)
class Rank2Class:
    verdict: Verdict
    case: int
    reduced: GramMatrix
    tau: tuple

    def render(self):
        label = self.verdict.value
        if self.verdict is Verdict.DEGENERATE:
            label += f"({_ROMAN[self.case]})"
        (a, b), (_, c) = self.reduced.entries
        re_, im_ = self.tau
        red = f"[[{format_rational(a)},{format_rational(b)}],[{format_rational(b)},{format_rational(c)}]]"
        return f"rank2: {label}; reduced={red}; tau={re_:.6f}+{im_:.6f}i"


def _check_rank2(A):
    if A.n != 2:
        raise DimensionMismatch(f"expected a rank-2 form, got rank {A.n}")


def reduce(A):
    """Gauss reduction.  Returns (R, T) with T^t A T = R and R reduced."""
    _check_rank2(A)
    (a, b), (_, c) = A.entries
    # columns of T are the current basis vectors
    t = [[1, 0], [0, 1]]
    while True:
        if a > c:
            a, c = c, a
            t = [[t[0][1], t[0][0]], [t[1][1], t[1][0]]]
        k = math.floor(b / a + Fraction(1, 2))
        if k:
            b, c = b - k * a, c - 2 * k * b + k * k * a
            t = [[t[0][0], t[0][1] - k * t[0][0]], [t[1][0], t[1][1] - k * t[1][0]]]
        if c >= a:
            break
    if b < 0:
        b = -b
        t = [[t[0][0], -t[0][1]], [t[1][0], -t[1][1]]]
    R = GramMatrix([[a, b], [b, c]])
    assert transform(A, t) == R
    return R, t


def tau(R):
    """Point of the upper half plane for a reduced form (floating, display only)."""
    (a, b), (_, c) = R.entries
    return float(b / a), math.sqrt(float(a * c - b * b)) / float(a)


def classify(A):
    R, _ = reduce(A)
    (a, b), (_, c) = R.entries
    if (b == 0 and a == c) or (2 * b == a == c):
        verdict, case = Verdict.VANISHING, None
    elif b == 0:
        verdict, case = Verdict.DEGENERATE, 1
    elif 2 * b == a:
        verdict, case = Verdict.DEGENERATE, 2
    elif a == c:
        verdict, case = Verdict.DEGENERATE, 3
    else:
        verdict, case = Verdict.NONDEGENERATE, None
    return Rank2Class(verdict, case, R, tau(R))


def det_dtheta_rank2(A, X):
    """Rational part of the rank-2 Wronskian

        1/2 sum over (l, m) of <l,m> det(l,m) (|m|^2 - |l|^2) q^(|l|^2 + |m|^2)

    with <l,m> = l^T A m and det(l,m) = l1 m2 - l2 m1 on integer coordinates.
    The Euclidean determinant carries an extra factor sqrt(det A), which is
    left symbolic: the full value is sqrt(A.det()) times the returned series.
    Defined up to a global sign (orientation).
    """
    _check_rank2(A)
    sh = shells(A, X)
    G, D = sh.gram_int, sh.denom
    groups = [(norm, _half(V)) for norm, V in sh.groups() if norm]
    acc = {}
    for s, (Ns, Hs) in enumerate(groups):
        for t in range(s + 1, len(groups)):
            Nt, Ht = groups[t]
            if Ns + Nt > sh.X:
                break
            Hs_o, Ht_o = Hs.astype(object), Ht.astype(object)
            P = Hs_o @ G.astype(object) @ Ht_o.T
            det = np.outer(Hs_o[:, 0], Ht_o[:, 1]) - np.outer(Hs_o[:, 1], Ht_o[:, 0])
            # 4: sign flips of both vectors; 2 * 1/2: ordered pairs (s,t),(t,s)
            total = 4 * int((P * det).sum())
            if total:
                e = Ns + Nt
                acc[e] = acc.get(e, 0) + Fraction(total, D) * (Nt - Ns)
    return QSeries(acc, sh.X)


@dataclass(frozen=True)
class MinimalVectorData:
    pairs: int
    c2: Fraction
    theta11_q2: Fraction
    scale: Fraction


def minimal_vector_test(A):
    """Coefficient of q^2 in theta11 after scaling the minimum to 1.

    c2 is summed over ordered pairs of minimal vectors with the per-pair
    weight 2<g,d>^2 - |g|^2 |d|^2; it must equal PROOF_NORMALIZATION times the
    q^2 coefficient of theta11_direct of the scaled form.
    """
    R, _ = reduce(A)
    a = R.entries[0][0]
    S = A.scaled(1 / a)
    sh = shells(S, 2)
    minimal = [V for norm, V in sh.groups() if norm == 1][0]
    vecs = [tuple(int(x) for x in row) for row in minimal]
    c2 = Fraction(0)
    for g in vecs:
        for d in vecs:
            c2 += 2 * S.pair(g, d) ** 2 - S.value(g) * S.value(d)
    q2 = _theta11_direct_from_shells(sh).coefficient(2)
    if c2 != PROOF_NORMALIZATION * q2:
        raise RuntimeError(f"minimal-pair sum {c2} disagrees with theta11 coefficient {q2}")
    return MinimalVectorData(len(vecs) // 2, c2, q2, 1 / a)


def _matches(cand, spec_list, top):
    return spectrum(cand, top) == spec_list


def gram_from_spectrum(spec_list):
    """Reduced rank-2 form whose nonzero norms up to the last listed one,
    with multiplicities, are exactly `spec_list`.

    Raises NoMatch when no reduced form fits and Ambiguous when several do
    (including when the list is too short to pin the form down).
    """
    spec_list = [(Fraction(n), int(k)) for n, k in spec_list]
    if not spec_list:
        raise NoMatch("empty spectrum")
    norms = [n for n, _ in spec_list]
    if norms[0] <= 0 or any(x >= y for x, y in zip(norms, norms[1:])):
        raise NoMatch("norms must be positive and strictly increasing")
    if any(k <= 0 or k % 2 for _, k in spec_list):
        raise NoMatch("multiplicities must be positive and even")
    a, top = norms[0], norms[-1]

    found = []
    # c above every listed norm: only multiples of the minimal vector show up
    only_multiples = all(k == 2 and (n / a).denominator == 1
                         and math.isqrt(int(n / a)) ** 2 == n / a for n, k in spec_list)
    if only_multiples:
        raise Ambiguous("spectrum lists only multiples of one minimal vector; "
                        "the second basis vector is undetermined")
    for c in norms:
        if a + c > top:
            # |e1 - e2|^2 = a + c - 2b can sit above the listed range, and then
            # every b below (a + c - top) / 2 gives the same list; b = 0 stands in
            if _matches(GramMatrix([[a, 0], [0, c]]), spec_list, top):
                raise Ambiguous(f"spectrum up to {top} does not determine the form: "
                                f"any b with a + c - 2b > {top} fits",
                                [GramMatrix([[a, 0], [0, c]])])
        bs = {(a + c - N) / 2 for N in norms if c <= N <= a + c}
        for b in sorted(bs):
            if not (0 <= 2 * b <= a <= c):
                continue
            cand = GramMatrix([[a, b], [b, c]])
            if _matches(cand, spec_list, top) and cand not in found:
                found.append(cand)
    if not found:
        raise NoMatch("no reduced binary form has this spectrum")
    if len(found) > 1:
        raise Ambiguous(f"{len(found)} reduced forms share this spectrum", found)
    return found[0]

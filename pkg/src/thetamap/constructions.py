"""Named lattices: Gaussian and Eisenstein integers, root lattices, E8, and
the cyclotomic family Lp(p) coming from Z[exp(2 pi i / p)].

Name grammar (CLI): "A1^2", "A2", "E8", "A<n>", "D<n>", "Lp<p>", "Z",
"<name>^<k>" for orthogonal powers.  "A1" and "A2" use the normalisation with
minimal norm 1 (Z and the Eisenstein integers); "A<n>" for n >= 3, "D<n>"
and "E8" are the Cartan matrices, minimal norm 2.
"""
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnknownLattice
from .lattice import GramMatrix, direct_sum


@dataclass(frozen=True)
class NamedLattice:
    name: str
    gram: GramMatrix


def gaussian():
    return NamedLattice("A1^2", GramMatrix([[1, 0], [0, 1]]))


def eisenstein():
    h = Fraction(1, 2)
    return NamedLattice("A2", GramMatrix([[1, h], [h, 1]]))


def integers():
    return NamedLattice("Z", GramMatrix([[1]]))


def e8():
    # Cartan matrix; node 2 hangs off node 4 (Bourbaki labelling)
    edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]
    return NamedLattice("E8", GramMatrix(_cartan(8, edges)))


def _cartan(n, edges):
    m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        m[i][j] = m[j][i] = -1
    return m


def root_A(n):
    if n < 1:
        raise UnknownLattice(f"A{n}: rank must be >= 1")
    return NamedLattice(f"A{n}", GramMatrix(_cartan(n, [(i, i + 1) for i in range(n - 1)])))


def root_D(n):
    if n < 3:
        raise UnknownLattice(f"D{n}: rank must be >= 3")
    edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    return NamedLattice(f"D{n}", GramMatrix(_cartan(n, edges)))


def power(lattice, k):
    if k < 1:
        raise UnknownLattice(f"power must be >= 1, got {k}")
    gram = lattice.gram
    for _ in range(k - 1):
        gram = direct_sum(gram, lattice.gram)
    return NamedLattice(lattice.name if k == 1 else f"{lattice.name}^{k}", gram)


def _is_odd_prime(p):
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def construct_Ap(p):
    """Gram matrix of Z[zeta_p] under the Minkowski embedding.

    (p-1) x (p-1), diagonal (p-1)/2 and every off-diagonal entry -1/2.
    """
    if not isinstance(p, int) or not _is_odd_prime(p):
        raise UnknownLattice(f"Lp{p}: p must be an odd prime")
    n = p - 1
    diag, off = Fraction(p - 1, 2), Fraction(-1, 2)
    return NamedLattice(f"Lp{p}", GramMatrix([[diag if i == j else off for j in range(n)]
                                              for i in range(n)]))


_POWER_RE = re.compile(r"^(.+)\^(\d+)$")
_FAMILY_RE = re.compile(r"^(A|D|E|Lp)(\d+)$")


def construct(name):
    """Build a NamedLattice from its name."""
    name = name.strip()
    m = _POWER_RE.match(name)
    if m:
        return power(construct(m.group(1)), int(m.group(2)))
    if name == "Z":
        return integers()
    m = _FAMILY_RE.match(name)
    if not m:
        raise UnknownLattice(f"unknown lattice name {name!r}")
    family, k = m.group(1), int(m.group(2))
    if family == "A":
        if k == 1:
            return NamedLattice("A1", GramMatrix([[1]]))
        if k == 2:
            return eisenstein()
        return root_A(k)
    if family == "D":
        return root_D(k)
    if family == "E":
        if k != 8:
            raise UnknownLattice(f"E{k} is not available (only E8)")
        return e8()
    return construct_Ap(k)

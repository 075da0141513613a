"""Small exact linear algebra over Fraction.

Matrices are tuples of tuples (or lists of lists) of Fraction.  Sizes here
never exceed a few dozen, so plain Gaussian elimination is fine.
"""
import re
from fractions import Fraction
from math import lcm

import numpy as np

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

# int64 products stay exact below this
_INT64_SAFE = 2 ** 62


def parse_rational(text):
    """Parse "p" or "p/q" into a Fraction.  Floats are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ValueError(f"not a rational of the form p or p/q: {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_fraction_matrix(rows):
    return tuple(tuple(Fraction(v) if not isinstance(v, str) else parse_rational(v)
                       for v in row) for row in rows)


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def matmul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt)
                 for row in a)


def transpose(a):
    return tuple(tuple(col) for col in zip(*a))


def trace(a):
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def leading_pivots(a):
    """Pivots of elimination without row exchange.

    The k-th leading principal minor is the product of the first k pivots.
    Stops at the first non-positive pivot, which is returned last.
    """
    m = [list(row) for row in a]
    n = len(m)
    pivots = []
    for k in range(n):
        p = m[k][k]
        pivots.append(p)
        if p <= 0:
            break
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return pivots


def det(a):
    m = [list(row) for row in a]
    n = len(m)
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            result = -result
        p = m[k][k]
        result *= p
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return result


def inverse(a):
    n = len(a)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [v / p for v in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return tuple(tuple(row[n:]) for row in m)


def rank(rows):
    """Rank of a list of equal-length Fraction vectors."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def integer_form(a):
    """Return (M, d) with M an integer numpy array and a == M / d exactly."""
    d = lcm(*(Fraction(v).denominator for row in a for v in row)) if a else 1
    ints = [[int(Fraction(v) * d) for v in row] for row in a]
    big = max((abs(v) for row in ints for v in row), default=0) >= _INT64_SAFE
    return np.array(ints, dtype=object if big else np.int64), d


def safe_dtype(bound):
    """int64 when every intermediate stays below `bound`, else Python ints."""
    return np.int64 if bound < _INT64_SAFE else object

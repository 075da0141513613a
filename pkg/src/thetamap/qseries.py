"""Truncated q-expansions with rational exponents and rational coefficients.

A QSeries stands for sum(a_m q^m) over a finite set of exponents m with
0 <= m <= bound.  It says nothing about exponents above the bound, so every
binary operation works at the smaller of the two bounds.

Text format (canonical, used for golden files)::

    # bound=X
    EXPONENT<TAB>COEFFICIENT
    ...

with rationals written as "p" or "p/q" in lowest terms and exponents ascending.
"""
from fractions import Fraction
from math import lcm

from ._exact import format_rational, parse_rational
from .errors import DimensionMismatch


def _frac(x):
    return x if isinstance(x, Fraction) else parse_rational(x)


class QSeries:
    __slots__ = ("_terms", "_bound", "_hash")

    def __init__(self, terms=None, bound=0):
        bound = _frac(bound)
        if bound < 0:
            raise ValueError("bound must be non-negative")
        items = terms.items() if hasattr(terms, "items") else (terms or ())
        acc = {}
        for e, c in items:
            e, c = _frac(e), _frac(c)
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            if e > bound or not c:
                continue
            acc[e] = acc.get(e, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._bound = bound
        self._hash = None

    @classmethod
    def _raw(cls, sorted_terms, bound):
        # trusted constructor: terms already sorted, nonzero and within bound
        s = object.__new__(cls)
        s._terms = tuple(sorted_terms)
        s._bound = bound
        s._hash = None
        return s

    @classmethod
    def constant(cls, c, bound):
        return cls({0: c}, bound)

    @classmethod
    def monomial(cls, exponent, coefficient, bound):
        return cls({exponent: coefficient}, bound)

    @property
    def bound(self):
        return self._bound

    @property
    def terms(self):
        """Tuple of (exponent, coefficient) pairs, ascending."""
        return self._terms

    def as_dict(self):
        return dict(self._terms)

    def exponents(self):
        return [e for e, _ in self._terms]

    def coefficient(self, exponent):
        e = _frac(exponent)
        if e > self._bound:
            raise ValueError(f"exponent {e} is above the truncation bound {self._bound}")
        for k, c in self._terms:
            if k == e:
                return c
        return Fraction(0)

    def leading_exponent(self):
        return self._terms[0][0] if self._terms else None

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._bound == other._bound and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._bound, self._terms))
        return self._hash

    def __repr__(self):
        if not self._terms:
            body = "0"
        else:
            parts = []
            for e, c in self._terms:
                parts.append(f"{format_rational(c)}" if e == 0
                             else f"{format_rational(c)}*q^{format_rational(e)}")
            body = " + ".join(parts)
        return f"QSeries({body}; bound={format_rational(self._bound)})"

    def __add__(self, other):
        if isinstance(other, QSeries):
            return add(self, other)
        return add(self, QSeries.constant(other, self._bound))

    __radd__ = __add__

    def __neg__(self):
        return scale(-1, self)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        return scale(other, self)

    __rmul__ = __mul__


def add(f, g):
    bound = min(f.bound, g.bound)
    acc = {}
    for e, c in f.terms:
        if e > bound:
            break
        acc[e] = c
    for e, c in g.terms:
        if e > bound:
            break
        acc[e] = acc.get(e, 0) + c
    return QSeries._raw(sorted((e, c) for e, c in acc.items() if c), bound)


def mul(f, g):
    """Cauchy product, truncated at min(f.bound, g.bound)."""
    bound = min(f.bound, g.bound)
    if len(f) > len(g):
        f, g = g, f
    if not f.terms or not g.terms:
        return QSeries._raw((), bound)
    # clear denominators so the double loop runs on Python ints
    ed = lcm(bound.denominator, *(e.denominator for e, _ in f.terms),
             *(e.denominator for e, _ in g.terms))
    fd = lcm(*(c.denominator for _, c in f.terms))
    gd = lcm(*(c.denominator for _, c in g.terms))
    top = int(bound * ed)
    fi = [(int(e * ed), int(c * fd)) for e, c in f.terms]
    gi = [(int(e * ed), int(c * gd)) for e, c in g.terms]
    acc = {}
    for e1, c1 in fi:
        if e1 > top:
            break
        room = top - e1
        for e2, c2 in gi:
            if e2 > room:
                break
            e = e1 + e2
            acc[e] = acc.get(e, 0) + c1 * c2
    d = fd * gd
    return QSeries._raw(sorted((Fraction(e, ed), Fraction(c, d)) for e, c in acc.items() if c),
                        bound)


def scale(c, f):
    c = _frac(c)
    if not c:
        return QSeries._raw((), f.bound)
    return QSeries._raw(((e, c * a) for e, a in f.terms), f.bound)


def qderiv(f):
    """q d/dq, i.e. (1/2 pi i) d/dz on the q-expansion: a_m q^m -> m a_m q^m."""
    return QSeries._raw(((e, e * c) for e, c in f.terms if e), f.bound)


def truncate(f, bound):
    bound = _frac(bound)
    if bound > f.bound:
        raise ValueError(f"cannot extend a series known only up to {f.bound}")
    return QSeries._raw((t for t in f.terms if t[0] <= bound), bound)


def is_zero(f):
    return not f.terms


def det_series(matrix):
    """Determinant of a square matrix of QSeries.

    Laplace expansion row by row, memoised over column subsets: m * 2^(m-1)
    series products and no division, so truncation stays exact.
    """
    m = len(matrix)
    if m == 0:
        raise DimensionMismatch("empty matrix")
    if any(len(row) != m for row in matrix):
        raise DimensionMismatch("matrix of series is not square")
    bounds = {entry.bound for row in matrix for entry in row}
    if len(bounds) != 1:
        raise DimensionMismatch(f"entries have different truncation bounds: {sorted(bounds)}")
    bound = bounds.pop()
    # partial[mask] = minor on rows 0..popcount(mask)-1 and columns in mask
    partial = {0: QSeries.constant(1, bound)}
    for r in range(m):
        nxt = {}
        for mask, minor in partial.items():
            if is_zero(minor):
                continue
            for j in range(m):
                if mask >> j & 1:
                    continue
                entry = matrix[r][j]
                if is_zero(entry):
                    continue
                # columns already used to the right of j give the sign
                sign = -1 if bin(mask >> (j + 1)).count("1") % 2 else 1
                term = mul(minor, entry)
                if sign < 0:
                    term = scale(-1, term)
                key = mask | (1 << j)
                nxt[key] = add(nxt[key], term) if key in nxt else term
        partial = nxt
    return partial.get((1 << m) - 1, QSeries._raw((), bound))


def render(f):
    lines = [f"# bound={format_rational(f.bound)}"]
    lines.extend(f"{format_rational(e)}\t{format_rational(c)}" for e, c in f.terms)
    return "\n".join(lines) + "\n"


def parse(text):
    bound = None
    terms = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            if key.strip() == "bound":
                bound = parse_rational(value)
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ValueError(f"malformed series line: {raw!r}")
        terms.append((parse_rational(fields[0]), parse_rational(fields[1])))
    if bound is None:
        raise ValueError("missing '# bound=X' header")
    return QSeries(terms, bound)

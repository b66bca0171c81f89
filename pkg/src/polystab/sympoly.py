"""Sparse multivariate polynomials over a grid of variables.

Variables are arranged as ``rows x cols``: row r holds the coefficients of
the r-th generic form, column i the coefficient of z^i.  A diagonal torus
element acts column-wise, so the character of a monomial is its vector of
column exponent sums.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded, DimensionMismatch, PolystabError, ZeroPolynomialError
from .lattice import check_dims, pair
from .polytope import LatticePolytope, hull

RESULTANT_CAP = 10  # m + n
DISCRIMINANT_CAP = 6


def _coeff_str(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def _parse_coeff(s: str):
    if "/" in s:
        return Fraction(s)
    return int(s)


class SparsePolynomial:
    """Immutable map from exponent vectors to nonzero coefficients."""

    __slots__ = ("rows", "cols", "terms")

    def __init__(self, rows: int, cols: int, terms: Mapping[tuple, object] = ()):
        self.rows = rows
        self.cols = cols
        nvars = rows * cols
        clean = {}
        for e, c in dict(terms).items():
            if not c:
                continue
            e = tuple(e)
            if len(e) != nvars:
                raise DimensionMismatch(nvars, len(e))
            if min(e, default=0) < 0:
                raise PolystabError(f"negative exponent in {e}")
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            clean[e] = c
        self.terms = clean

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def constant(cls, rows, cols, c):
        return cls(rows, cols, {(0,) * (rows * cols): c})

    @classmethod
    def variable(cls, rows, cols, r, i, coeff=1):
        e = [0] * (rows * cols)
        e[r * cols + i] = 1
        return cls(rows, cols, {tuple(e): coeff})

    # arithmetic ----------------------------------------------------------

    def _same_layout(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch((self.rows, self.cols), (other.rows, other.cols))

    def __add__(self, other):
        self._same_layout(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePolynomial(self.rows, self.cols, out)

    def __neg__(self):
        return SparsePolynomial(self.rows, self.cols, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SparsePolynomial):
            return SparsePolynomial(self.rows, self.cols,
                                    {e: c * other for e, c in self.terms.items()})
        self._same_layout(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePolynomial(self.rows, self.cols, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = SparsePolynomial.constant(self.rows, self.cols, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.terms == other.terms

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SparsePolynomial({self.rows}x{self.cols}, {len(self.terms)} terms)"

    def exact_div(self, other: "SparsePolynomial") -> "SparsePolynomial":
        """Exact division by a single-term polynomial."""
        if len(other.terms) != 1:
            raise PolystabError("exact_div supports monomial divisors only")
        (e0, c0), = other.terms.items()
        out = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, e0))
            if min(q) < 0 or (isinstance(c, int) and isinstance(c0, int) and c % c0):
                raise ArithmeticError(f"{other!r} does not divide term {e}")
            out[q] = c // c0 if isinstance(c, int) and isinstance(c0, int) else Fraction(c) / c0
        return SparsePolynomial(self.rows, self.cols, out)

    def evaluate(self, values: Sequence):
        """Evaluate at a flat row-major assignment of the grid variables."""
        check_dims(values, (0,) * (self.rows * self.cols))
        total = 0
        for e, c in self.terms.items():
            m = c
            for x, k in zip(values, e):
                if k:
                    m *= x ** k
            total += m
        return total

    def swap_rows(self, perm: Sequence[int]) -> "SparsePolynomial":
        """Rename variables so that new row r is old row perm[r]."""
        C = self.cols
        out = {}
        for e, c in self.terms.items():
            ne = []
            for r in perm:
                ne.extend(e[r * C:(r + 1) * C])
            out[tuple(ne)] = c
        return SparsePolynomial(self.rows, self.cols, out)

    # serialization -------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "terms": [{"exps": list(e), "coeff": _coeff_str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SparsePolynomial":
        terms = {}
        for t in data["terms"]:
            e = tuple(int(x) for x in t["exps"])
            if e in terms:
                raise PolystabError(f"duplicate exponent vector {list(e)}")
            terms[e] = _parse_coeff(str(t["coeff"]))
        return cls(int(data["rows"]), int(data["cols"]), terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# degrees and weights


def _nonzero(p: SparsePolynomial):
    if not p.terms:
        raise ZeroPolynomialError("operation undefined for the zero polynomial")


def total_degree(p: SparsePolynomial) -> int:
    _nonzero(p)
    return max(sum(e) for e in p.terms)


def row_degrees(p: SparsePolynomial) -> list:
    """Per-row degrees; asserts multihomogeneity."""
    _nonzero(p)
    C = p.cols
    seen = {tuple(sum(e[r * C:(r + 1) * C]) for r in range(p.rows)) for e in p.terms}
    if len(seen) != 1:
        raise PolystabError(f"polynomial is not multihomogeneous: row degrees {sorted(seen)}")
    return list(seen.pop())


def character(p: SparsePolynomial, e: Sequence[int]) -> tuple:
    C = p.cols
    return tuple(sum(e[r * C + i] for r in range(p.rows)) for i in range(C))


@dataclass(frozen=True)
class WeightSupport:
    """Characters of a vector with the number of monomials of each weight."""

    dim: int
    points: Mapping[tuple, int] = field(default_factory=dict)

    def __post_init__(self):
        pts = {tuple(int(c) for c in k): int(m) for k, m in dict(self.points).items()}
        for k, m in pts.items():
            if len(k) != self.dim:
                raise DimensionMismatch(self.dim, len(k))
            if m <= 0:
                raise PolystabError("multiplicities must be positive")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "WeightSupport":
        counts = Counter(tuple(int(c) for c in p) for p in points)
        if not counts:
            raise PolystabError("empty support")
        dim = len(next(iter(counts)))
        return cls(dim, counts)

    def sorted_points(self) -> list:
        return sorted(self.points)

    def __iter__(self):
        return iter(self.sorted_points())

    def __len__(self):
        return len(self.points)

    def __contains__(self, chi):
        return tuple(chi) in self.points

    def hull(self) -> LatticePolytope:
        return hull(self.points)


def weight_support(p: SparsePolynomial) -> WeightSupport:
    _nonzero(p)
    return WeightSupport(p.cols, Counter(character(p, e) for e in p.terms))


def newton_polytope(p: SparsePolynomial) -> LatticePolytope:
    return hull(weight_support(p).points)


# ---------------------------------------------------------------------------
# torus and linear actions


def act_diagonal(p: SparsePolynomial, t, lam: Sequence[int]) -> SparsePolynomial:
    """Scale each monomial of character chi by t^<lam, chi>."""
    t = Fraction(t)
    if t == 0:
        raise PolystabError("t must be nonzero")
    check_dims(lam, range(p.cols))
    return SparsePolynomial(p.rows, p.cols, {
        e: c * t ** pair(lam, character(p, e)) for e, c in p.terms.items()})


def graded_action(p: SparsePolynomial, lam: Sequence[int]) -> dict:
    """lambda(t) . p as a Laurent polynomial in t: {power of t: coefficient polynomial}."""
    check_dims(lam, range(p.cols))
    parts: dict = {}
    for e, c in p.terms.items():
        parts.setdefault(pair(lam, character(p, e)), {})[e] = c
    return {k: SparsePolynomial(p.rows, p.cols, v) for k, v in parts.items()}


def act_linear(p: SparsePolynomial, sigma: Sequence[Sequence]) -> SparsePolynomial:
    """sigma . p (A) = p(A . sigma): substitute x[r][i] -> sum_j x[r][j] sigma[j][i]."""
    C, R = p.cols, p.rows
    if len(sigma) != C or any(len(row) != C for row in sigma):
        raise DimensionMismatch(C, len(sigma))
    images = {}
    for r in range(R):
        for i in range(C):
            terms = {}
            for j in range(C):
                s = sigma[j][i]
                if s:
                    e = [0] * (R * C)
                    e[r * C + j] = 1
                    terms[tuple(e)] = Fraction(s) if not isinstance(s, int) else s
            images[r * C + i] = SparsePolynomial(R, C, terms)
    powers: dict = {}

    def image_pow(v, k):
        key = (v, k)
        if key not in powers:
            powers[key] = images[v] if k == 1 else image_pow(v, k - 1) * images[v]
        return powers[key]

    acc: dict = {}
    for e, c in p.sorted_terms():
        term = SparsePolynomial.constant(R, C, c)
        for v, k in enumerate(e):
            if k:
                term = term * image_pow(v, k)
        for te, tc in term.terms.items():
            acc[te] = acc.get(te, 0) + tc
    return SparsePolynomial(R, C, acc)


# ---------------------------------------------------------------------------
# symbolic determinants, resultants, discriminants


def symbolic_det(matrix: Sequence[Sequence], rows: int, cols: int) -> SparsePolynomial:
    """Determinant of a square matrix of SparsePolynomial (or None for zero) entries.

    Laplace expansion column by column, memoized on the set of rows still
    available; the memo lives only for this call.
    """
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise PolystabError("matrix is not square")
    memo: dict = {}

    def minor(col: int, avail: int) -> SparsePolynomial:
        if col == n:
            return SparsePolynomial.constant(rows, cols, 1)
        if avail in memo:
            return memo[avail]
        acc: dict = {}
        sign = 1
        for r in range(n):
            bit = 1 << r
            if not avail & bit:
                continue
            entry = matrix[r][col]
            if entry is not None and entry.terms:
                sub = minor(col + 1, avail & ~bit)
                if sub.terms:
                    for e, c in (entry * sub).terms.items():
                        acc[e] = acc.get(e, 0) + sign * c
            sign = -sign
        result = SparsePolynomial(rows, cols, acc)
        memo[avail] = result
        return result

    return minor(0, (1 << n) - 1)


def sylvester_matrix(f: Sequence, g: Sequence) -> list:
    """Sylvester matrix of f = sum f[i] z^i (degree m) and g (degree n).

    Rows 0..n-1 carry f's coefficients from the leading one down, shifted;
    rows n..n+m-1 carry g's.  Entries are whatever f and g hold.
    """
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    M = [[None] * size for _ in range(size)]
    for r in range(n):
        for i, c in enumerate(reversed(f)):
            M[r][r + i] = c
    for r in range(m):
        for i, c in enumerate(reversed(g)):
            M[n + r][r + i] = c
    return M


def _check_resultant_cap(m, n):
    if m < 1 or n < 1:
        raise PolystabError(f"resultant needs m, n >= 1 (got m={m}, n={n})")
    if m + n > RESULTANT_CAP:
        raise CapExceeded(
            f"Sylvester matrix of size {m + n} exceeds cap {RESULTANT_CAP} "
            f"(up to 2^{m + n} memoized minors)", estimate=2 ** (m + n))


def sylvester_resultant(m: int, n: int) -> SparsePolynomial:
    """Generic resultant R_{m,n} in a_0..a_m (row 0) and b_0..b_n (row 1)."""
    _check_resultant_cap(m, n)
    C = max(m, n) + 1
    a = [SparsePolynomial.variable(2, C, 0, i) for i in range(m + 1)]
    b = [SparsePolynomial.variable(2, C, 1, i) for i in range(n + 1)]
    return symbolic_det(sylvester_matrix(a, b), 2, C)


def discriminant(d: int) -> SparsePolynomial:
    """R_{d,d-1}(P, P') divided exactly by a_d, in the 1 x (d+1) grid."""
    if d < 2:
        raise PolystabError(f"discriminant needs d >= 2 (got {d})")
    if d > DISCRIMINANT_CAP:
        raise CapExceeded(f"discriminant degree {d} exceeds cap {DISCRIMINANT_CAP}",
                          estimate=2 ** (2 * d - 1))
    C = d + 1
    a = [SparsePolynomial.variable(1, C, 0, i) for i in range(C)]
    da = [a[i + 1] * (i + 1) for i in range(d)]
    res = symbolic_det(sylvester_matrix(a, da), 1, C)
    try:
        return res.exact_div(a[d])
    except ArithmeticError as exc:  # pragma: no cover - would be a bug
        raise AssertionError(f"R(P, P') not divisible by a_d: {exc}") from exc

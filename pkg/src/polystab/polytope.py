"""Exact lattice polytopes.

Every polytope is built by :func:`hull`, which

1. reduces the input to its affine hull (weight polytopes usually sit inside
   one or more degree hyperplanes),
2. projects onto the pivot coordinates of that hull, where the polytope is
   full dimensional, and
3. enumerates facets with an incremental double description over the
   integers.

Facet inequalities read ``<normal, x> >= offset`` and are valid on the affine
hull; together with the equations they cut out the polytope exactly.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import CapExceeded, DimensionMismatch, PolystabError
from .lattice import OneParamSubgroup, lift_functional, project_quotient

AMBIENT = "ambient"
QUOTIENT = "quotient"

LATTICE_POINT_CAP = 1_000_000


def _primitive(v: Sequence[int]) -> tuple:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _integral_primitive(v: Sequence[Fraction]) -> tuple:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return _primitive([int(x * den) for x in v])


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


class _RowReducer:
    """Incrementally maintained reduced row echelon basis over Q."""

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def reduce(self, v: Sequence) -> list[Fraction]:
        v = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, v: Sequence) -> bool:
        v = self.reduce(v)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        lead = v[p]
        v = [x / lead for x in v]
        for i, row in enumerate(self.rows):
            c = row[p]
            if c:
                self.rows[i] = [x - c * y for x, y in zip(row, v)]
        # keep rows ordered by pivot column
        pos = sum(1 for q in self.pivots if q < p)
        self.rows.insert(pos, v)
        self.pivots.insert(pos, p)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _nullspace(reducer: _RowReducer) -> list[tuple]:
    free = [j for j in range(reducer.width) if j not in reducer.pivots]
    out = []
    for f in free:
        e = [Fraction(0)] * reducer.width
        e[f] = Fraction(1)
        for row, p in zip(reducer.rows, reducer.pivots):
            e[p] = -row[f]
        out.append(_integral_primitive(e))
    return out


def _facets_full_dim(points: list[tuple], k: int) -> list[tuple]:
    """Facet inequalities (a, b), a.y >= b, of conv(points) full dimensional in Z^k.

    Double description on the cone {z = (z0, a) : z0 + a.y >= 0 for all y};
    its extreme rays are exactly the facets.
    """
    rows = [(1,) + y for y in points]
    # initial simplex: k+1 affinely independent points
    red = _RowReducer(k + 1)
    basis_idx = []
    for i, g in enumerate(rows):
        if red.add(g):
            basis_idx.append(i)
            if red.rank == k + 1:
                break
    if red.rank != k + 1:
        raise AssertionError("points are not full dimensional")

    # rays = columns of the inverse of the basis matrix, scaled to integers
    size = k + 1
    aug = [[Fraction(x) for x in rows[i]] + [Fraction(int(r == c)) for c in range(size)]
           for r, i in enumerate(basis_idx)]
    for col in range(size):
        piv = next(r for r in range(col, size) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        lead = aug[col][col]
        aug[col] = [x / lead for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    inverse = [row[size:] for row in aug]
    rays = [_integral_primitive([inverse[r][j] for r in range(size)]) for j in range(size)]

    # constraint numbering for zero sets: position in processing order
    order = basis_idx + [i for i in range(len(rows)) if i not in set(basis_idx)]
    zero = []
    for j in range(size):
        mask = 0
        for bit, i in enumerate(basis_idx):
            if bit != j:
                mask |= 1 << bit
        zero.append(mask)

    for bit in range(size, len(order)):
        g = rows[order[bit]]
        vals = [_dot(g, z) for z in rays]
        neg = [i for i, s in enumerate(vals) if s < 0]
        if not neg:
            flag = 1 << bit
            for i, s in enumerate(vals):
                if s == 0:
                    zero[i] |= flag
            continue
        pos = [i for i, s in enumerate(vals) if s > 0]
        new_rays, new_zero = [], []
        for p in pos:
            for n in neg:
                common = zero[p] & zero[n]
                if common.bit_count() < k - 1:
                    continue
                if any(r != p and r != n and zero[r] & common == common
                       for r in range(len(rays))):
                    continue
                sp, sn = vals[p], vals[n]
                z = _primitive([sp * a - sn * b for a, b in zip(rays[n], rays[p])])
                new_rays.append(z)
                new_zero.append(common | (1 << bit))
        kept = [i for i, s in enumerate(vals) if s >= 0]
        rays = [rays[i] for i in kept] + new_rays
        zero = [zero[i] | ((1 << bit) if vals[i] == 0 else 0) for i in kept] + new_zero

    return [(z[1:], -z[0]) for z in rays]


@dataclass(frozen=True)
class LatticePolytope:
    dim: int
    vertices: tuple
    affine_base_point: tuple
    affine_basis: tuple
    equations: tuple  # ((normal, value), ...) with <normal, x> == value on the hull
    facets: tuple  # ((normal, offset), ...) with <normal, x> >= offset

    @property
    def affine_dim(self) -> int:
        return len(self.affine_basis)

    def __len__(self):
        return len(self.vertices)

    def contains(self, x: Sequence[int], mode: str = AMBIENT) -> bool:
        if len(x) != self.dim:
            raise DimensionMismatch(self.dim, len(x))
        if mode == AMBIENT:
            return (all(_dot(e, x) == c for e, c in self.equations)
                    and all(_dot(n, x) >= b for n, b in self.facets))
        if mode == QUOTIENT:
            return _line_meets(self, x)
        raise PolystabError(f"unknown inclusion mode {mode!r}")

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(n), "offset": b} for n, b in self.facets],
            "affine_basis": [list(b) for b in self.affine_basis],
            "affine_base_point": list(self.affine_base_point),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LatticePolytope":
        verts = data["vertices"]
        P = hull(verts)
        if P.dim != data.get("dim", P.dim):
            raise DimensionMismatch(data["dim"], P.dim)
        return P

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"


def _line_meets(P: LatticePolytope, x: Sequence[int]) -> bool:
    """Does {x + t(1,...,1) : t in Q} meet P?  Interval feasibility in t."""
    lo = hi = None
    for e, c in P.equations:
        s = sum(e)
        r = c - _dot(e, x)
        if s == 0:
            if r != 0:
                return False
            continue
        t = Fraction(r, s)
        if lo is not None and (t < lo or t > hi):
            return False
        lo = hi = t
    for n, b in P.facets:
        s = sum(n)
        r = b - _dot(n, x)
        if s == 0:
            if r > 0:
                return False
            continue
        t = Fraction(r, s)
        if s > 0:
            if lo is None or t > lo:
                lo = t
        else:
            if hi is None or t < hi:
                hi = t
        if lo is not None and hi is not None and lo > hi:
            return False
    return True


def hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if not pts:
        raise PolystabError("hull of an empty point set")
    dim = len(pts[0])
    for p in pts:
        if len(p) != dim:
            raise DimensionMismatch(dim, len(p))

    base = pts[0]
    red = _RowReducer(dim)
    for p in pts[1:]:
        if red.rank == dim:
            break
        red.add([a - b for a, b in zip(p, base)])
    k = red.rank
    basis = tuple(_integral_primitive(r) for r in red.rows)
    equations = tuple((e, _dot(e, base)) for e in _nullspace(red))

    if k == 0:
        return LatticePolytope(dim, (base,), base, (), equations, ())

    pivots = red.pivots
    projected = [tuple(p[j] for j in pivots) for p in pts]
    raw = _facets_full_dim(projected, k)

    facets = []
    for a, _ in raw:
        n = [0] * dim
        for j, c in zip(pivots, a):
            n[j] = c
        facets.append(_primitive(n))

    verts = []
    for p, y in zip(pts, projected):
        tight = [a for a, b in raw if _dot(a, y) == b]
        if len(tight) < k:
            continue
        r = _RowReducer(k)
        for a in tight:
            r.add(a)
            if r.rank == k:
                break
        if r.rank == k:
            verts.append(p)
    verts = tuple(verts)
    facet_list = sorted({(n, min(_dot(n, v) for v in verts)) for n in facets})
    return LatticePolytope(dim, verts, base, basis, equations, tuple(facet_list))


def translate(P: LatticePolytope, v: Sequence[int]) -> LatticePolytope:
    if len(v) != P.dim:
        raise DimensionMismatch(P.dim, len(v))
    return hull(tuple(a + b for a, b in zip(p, v)) for p in P.vertices)


def scale(P: LatticePolytope, k: int) -> LatticePolytope:
    if k < 0:
        raise PolystabError("scale factor must be non-negative")
    if k == 0:
        return hull([(0,) * P.dim])
    if k == 1:
        return P
    return LatticePolytope(
        P.dim,
        tuple(tuple(k * c for c in v) for v in P.vertices),
        tuple(k * c for c in P.affine_base_point),
        P.affine_basis,
        tuple((e, k * c) for e, c in P.equations),
        tuple((n, k * b) for n, b in P.facets),
    )


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.dim != Q.dim:
        raise DimensionMismatch(P.dim, Q.dim)
    return hull(tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices)


def support_min(P: LatticePolytope, l: Sequence[int], require_sum_zero: bool = True) -> int:
    """min over P of the linear functional l."""
    if len(l) != P.dim:
        raise DimensionMismatch(P.dim, len(l))
    if require_sum_zero and not isinstance(l, OneParamSubgroup):
        OneParamSubgroup(l)
    return min(_dot(l, v) for v in P.vertices)


def includes(P: LatticePolytope, Q: LatticePolytope, mode: str = AMBIENT) -> bool:
    """True iff Q is contained in P (P + R(1,...,1) in quotient mode)."""
    if P.dim != Q.dim:
        raise DimensionMismatch(P.dim, Q.dim)
    return all(P.contains(q, mode) for q in Q.vertices)


def equals(P: LatticePolytope, Q: LatticePolytope) -> bool:
    return P.dim == Q.dim and P.vertices == Q.vertices


def vertex_count(P: LatticePolytope) -> int:
    return len(P.vertices)


def lattice_points(P: LatticePolytope, cap: int = LATTICE_POINT_CAP) -> list:
    lo = [min(v[i] for v in P.vertices) for i in range(P.dim)]
    hi = [max(v[i] for v in P.vertices) for i in range(P.dim)]
    box = 1
    for a, b in zip(lo, hi):
        box *= b - a + 1
    if box > cap:
        raise CapExceeded(f"bounding box has {box} points (cap {cap})", estimate=box)
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return [x for x in itertools.product(*ranges) if P.contains(x)]


def standard_simplex(dim: int) -> LatticePolytope:
    """Weight polytope of a generic vector of the standard representation."""
    return hull(tuple(int(i == j) for j in range(dim)) for i in range(dim))


def quotient_polytope(P: LatticePolytope) -> LatticePolytope:
    """Image of P in Z^D / Z(1,...,1), written in Z^(D-1) coordinates."""
    return hull(project_quotient(v) for v in P.vertices)


def quotient_functionals(P: LatticePolytope) -> list[OneParamSubgroup]:
    """Sum-zero functionals whose half-spaces cut out P + R(1,...,1).

    Facet normals of the quotient image, plus both signs of each equation.
    """
    if P.dim < 2:
        return []
    Q = quotient_polytope(P)
    out = [lift_functional(n) for n, _ in Q.facets]
    for e, _ in Q.equations:
        out.append(lift_functional(e))
        out.append(lift_functional([-c for c in e]))
    return out


def separating_functional(P: LatticePolytope, Q: LatticePolytope):
    """A sum-zero l with support_min(Q, l) < support_min(P, l), or None if Q is
    contained in P in quotient mode."""
    for l in quotient_functionals(P):
        if support_min(Q, l) < support_min(P, l):
            return l
    return None

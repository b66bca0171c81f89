"""Weight polytopes of type A modules: Weyl orbits, hypersimplices, dominance,
the degree q(V) and genericity tests."""
from __future__ import annotations

from itertools import accumulate, combinations, zip_longest
from typing import Iterable, Sequence

from sympy.utilities.iterables import multiset_permutations

from .errors import CapExceeded, DimensionMismatch, PolystabError
from .polytope import (QUOTIENT, LatticePolytope, equals, hull, includes, scale,
                       standard_simplex)
from .sympoly import SparsePolynomial, WeightSupport, weight_support

ORBIT_DIM_CAP = 10


class Partition(tuple):
    """Weakly decreasing non-negative integers, optionally zero-padded to ``dim``."""

    def __new__(cls, parts: Iterable[int], dim: int | None = None):
        parts = [int(p) for p in parts]
        if dim is not None:
            if len(parts) > dim:
                if any(parts[dim:]):
                    raise DimensionMismatch(dim, len(parts))
                parts = parts[:dim]
            parts += [0] * (dim - len(parts))
        if any(p < 0 for p in parts):
            raise PolystabError(f"partition parts must be non-negative: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise PolystabError(f"partition must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)


def orbit_points(lam: Sequence[int]) -> list:
    """Distinct permutations of lam."""
    if len(lam) > ORBIT_DIM_CAP:
        raise CapExceeded(f"orbit dimension {len(lam)} exceeds cap {ORBIT_DIM_CAP}")
    return [tuple(p) for p in multiset_permutations(sorted(lam))]


def orbit_polytope(lam: Sequence[int]) -> LatticePolytope:
    """Convex hull of the symmetric-group orbit of lam."""
    return hull(orbit_points(lam))


def hypersimplex(k: int, l: int) -> LatticePolytope:
    if not 0 < k < l:
        raise PolystabError(f"hypersimplex needs 0 < k < l (got k={k}, l={l})")
    pts = []
    for ones in combinations(range(l), k):
        v = [0] * l
        for i in ones:
            v[i] = 1
        pts.append(tuple(v))
    return hull(pts)


def dominance_leq(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """lam is dominated by mu: every partial sum of lam <= that of mu."""
    pairs = zip_longest(accumulate(lam), accumulate(mu))
    last_l = last_m = 0
    for a, b in pairs:
        last_l = a if a is not None else last_l
        last_m = b if b is not None else last_m
        if last_l > last_m:
            return False
    return True


def q_degree(P: LatticePolytope) -> int:
    """Least k >= 0 with P inside k * standard simplex modulo the diagonal."""
    S = standard_simplex(P.dim)

    def fits(k):
        return includes(scale(S, k), P, QUOTIENT)

    # k * S + R(1,..,1) = {x : sum(x) - D min(x) <= k}, so this bound always fits
    hi = max(sum(v) - P.dim * min(v) for v in P.vertices)
    hi = max(hi, 0)
    lo = 0
    if fits(0):
        return 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fits(mid):
            hi = mid
        else:
            lo = mid
    assert fits(hi) and not fits(hi - 1) and fits(hi + 1), "inclusion not monotone in k"
    return hi


def is_generic(v_support: WeightSupport, module_polytope: LatticePolytope) -> bool:
    if v_support.dim != module_polytope.dim:
        raise DimensionMismatch(v_support.dim, module_polytope.dim)
    return equals(v_support.hull(), module_polytope)


def genericity_certificate(v: SparsePolynomial, lam: Sequence[int] | None = None,
                           weights: Iterable[Sequence[int]] | None = None) -> bool:
    """Q_{lam; v}(identity) != 0: v has a nonzero component on every s . lam.

    ``weights`` replaces the Weyl orbit by an explicit list of extreme weights.
    Evaluate at sigma by passing ``act_linear(v, sigma)``.
    """
    if (lam is None) == (weights is None):
        raise PolystabError("give exactly one of lam or weights")
    supp = weight_support(v)
    targets = orbit_points(lam) if weights is None else [tuple(w) for w in weights]
    for w in targets:
        if len(w) != supp.dim:
            raise DimensionMismatch(supp.dim, len(w))
    return all(w in supp for w in targets)

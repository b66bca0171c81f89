"""K-(semi)stability of pairs via weight polytopes.

A :class:`StabilityPair` holds the weight supports of two vectors v and w
with their degrees.  By default the pair is *scaled*: it stands for
(v^deg_w, w^deg_v), whose weight polytopes are deg_w N(v) and deg_v N(w).
That is the normalization used for Chow forms and hyperdiscriminants.  With
``scaled=False`` the pair is taken verbatim as (v, w).
"""
from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath

from .errors import DimensionMismatch, PolystabError
from .lattice import OneParamSubgroup, pair
from .polytope import (QUOTIENT, LatticePolytope, includes, minkowski_sum,
                       quotient_functionals, scale, separating_functional,
                       standard_simplex, support_min)
from .sympoly import (SparsePolynomial, WeightSupport, character, discriminant,
                      graded_action, sylvester_resultant, total_degree,
                      weight_support)

SEMISTABLE = "semistable-along-λ"
DESTABILIZING = "destabilizing"

DEFAULT_PRECISION_BITS = 256
CURVE_CAP = 5


def precision_bits() -> int:
    return int(os.environ.get("POLYSTAB_PRECISION_BITS", DEFAULT_PRECISION_BITS))


@dataclass(frozen=True)
class StabilityPair:
    support_v: WeightSupport
    deg_v: int
    support_w: WeightSupport
    deg_w: int
    label: str = ""
    scaled: bool = True
    poly_v: SparsePolynomial | None = field(default=None, compare=False, repr=False)
    poly_w: SparsePolynomial | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.deg_v < 1 or self.deg_w < 1:
            raise PolystabError("pair degrees must be positive")
        if self.support_v.dim != self.support_w.dim:
            raise DimensionMismatch(self.support_v.dim, self.support_w.dim)
        for name, supp, deg in (("v", self.support_v, self.deg_v), ("w", self.support_w, self.deg_w)):
            if not len(supp):
                raise PolystabError(f"support of {name} is empty")
            bad = [p for p in supp if sum(p) != deg]
            if bad:
                raise PolystabError(
                    f"support of {name} is not homogeneous of degree {deg}: {list(bad[0])}")

    @classmethod
    def from_polynomials(cls, v: SparsePolynomial, w: SparsePolynomial,
                         label: str = "", scaled: bool = True) -> "StabilityPair":
        return cls(weight_support(v), total_degree(v), weight_support(w), total_degree(w),
                   label, scaled, v, w)

    @property
    def dim(self) -> int:
        return self.support_v.dim

    @property
    def power_v(self) -> int:
        return self.deg_w if self.scaled else 1

    @property
    def power_w(self) -> int:
        return self.deg_v if self.scaled else 1

    @property
    def q(self) -> int:
        """Coefficient of the standard simplex in the proper-inclusion test."""
        return self.deg_v * self.deg_w if self.scaled else self.deg_v

    def polytope_v(self) -> LatticePolytope:
        return scale(self.support_v.hull(), self.power_v)

    def polytope_w(self) -> LatticePolytope:
        return scale(self.support_w.hull(), self.power_w)

    def with_polynomials(self, v: SparsePolynomial, w: SparsePolynomial) -> "StabilityPair":
        """Same degrees, label and scaling; supports re-read from new polynomials."""
        return StabilityPair(weight_support(v), self.deg_v, weight_support(w), self.deg_w,
                             self.label, self.scaled, v, w)

    def to_json(self) -> dict:
        def side(supp, deg, poly):
            out = {"support": [list(p) for p in supp], "deg": deg}
            if poly is not None:
                out["poly"] = poly.to_json()
            return out

        return {
            "label": self.label,
            "scaled": self.scaled,
            "v": side(self.support_v, self.deg_v, self.poly_v),
            "w": side(self.support_w, self.deg_w, self.poly_w),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "StabilityPair":
        def side(key):
            d = data[key]
            poly = SparsePolynomial.from_json(d["poly"]) if d.get("poly") else None
            if poly is None and "support" not in d:
                raise PolystabError(f"pair side {key!r} needs a support or a poly")
            if poly is None:
                return WeightSupport.from_points(d["support"]), int(d["deg"]), None
            # the polynomial also knows how many monomials share each weight
            supp = weight_support(poly)
            if "support" in d and {tuple(p) for p in d["support"]} != supp.points.keys():
                raise PolystabError(f"support of {key} disagrees with its polynomial")
            return supp, int(d["deg"]), poly

        sv, dv, pv = side("v")
        sw, dw, pw = side("w")
        return cls(sv, dv, sw, dw, str(data.get("label", "")), bool(data.get("scaled", True)), pv, pw)


@dataclass(frozen=True)
class DegenerationReport:
    lam: OneParamSubgroup
    w_v: int
    w_w: int
    futaki: int
    verdict: str

    def to_json(self) -> dict:
        return {"lambda": list(self.lam), "w_v": self.w_v, "w_w": self.w_w,
                "futaki": self.futaki, "verdict": self.verdict}


@dataclass(frozen=True)
class SemistabilityResult:
    semistable: bool
    certificate: DegenerationReport | None = None

    def __bool__(self):
        return self.semistable


def _points(support) -> Iterable:
    if isinstance(support, WeightSupport):
        return support.points
    if isinstance(support, LatticePolytope):
        return support.vertices
    return support


def weight(support, lam: Sequence[int]) -> int:
    """w_lam(v): least pairing of lam with a character in the support."""
    lam = lam if isinstance(lam, OneParamSubgroup) else OneParamSubgroup(lam)
    return min(pair(lam, chi) for chi in _points(support))


def degeneration_report(p: StabilityPair, lam: Sequence[int]) -> DegenerationReport:
    lam = OneParamSubgroup(lam)
    if len(lam) != p.dim:
        raise DimensionMismatch(p.dim, len(lam))
    w_v = weight(p.support_v, lam)
    w_w = weight(p.support_w, lam)
    f = p.power_w * w_w - p.power_v * w_v
    return DegenerationReport(lam, w_v, w_w, f, DESTABILIZING if f > 0 else SEMISTABLE)


def futaki(p: StabilityPair, lam: Sequence[int]) -> int:
    """deg_v * w_lam(w) - deg_w * w_lam(v) for scaled pairs.

    Positive exactly when lam destabilizes.
    """
    return degeneration_report(p, lam).futaki


def is_semistable(p: StabilityPair) -> SemistabilityResult:
    V, W = p.polytope_v(), p.polytope_w()
    if includes(W, V, QUOTIENT):
        return SemistabilityResult(True)
    lam = separating_functional(W, V)
    assert lam is not None, "inclusion failed but no separating facet found"
    report = degeneration_report(p, lam)
    assert report.futaki > 0
    return SemistabilityResult(False, report)


def scan_radius(p: StabilityPair) -> int:
    """Max-norm bound on the functionals that certify inclusion into N(w)."""
    fs = quotient_functionals(p.support_w.hull())
    return max((max(abs(c) for c in l) for l in fs), default=0)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def find_m0(p: StabilityPair) -> int | None:
    """Least m0 >= 1 with (m-1) N_v + q S inside m N_w (mod diagonal) for all m >= m0.

    Here N_v, N_w are the (scaled) polytopes of the pair.  The inclusion is
    affine in m on every facet of N_w, so each facet contributes a threshold.
    """
    A, B = p.power_v, p.power_w
    P, Q = p.support_v.hull(), p.support_w.hull()
    S = standard_simplex(p.dim)
    m0 = 1
    for lam in quotient_functionals(Q):
        hp, hq, hs = support_min(P, lam), support_min(Q, lam), support_min(S, lam)
        slope = A * hp - B * hq
        const = A * hp - p.q * hs
        if slope < 0:
            return None
        if slope == 0:
            if const > 0:
                return None
            continue
        m0 = max(m0, _ceil_div(const, slope))
    return m0


def proper_inclusion_holds(p: StabilityPair, m: int) -> bool:
    """Direct Minkowski-sum test of (m-1) N_v + q S inside m N_w at one m."""
    if m < 1:
        raise PolystabError("m must be >= 1")
    lhs = minkowski_sum(scale(p.polytope_v(), m - 1), scale(standard_simplex(p.dim), p.q))
    return includes(scale(p.polytope_w(), m), lhs, QUOTIENT)


# ---------------------------------------------------------------------------
# energy asymptotics


def _factorial_weight(e: Sequence[int]) -> Fraction:
    den = 1
    for k in e:
        den *= math.factorial(k)
    return Fraction(1, den)


def weight_norms(v, norm: str = "unit") -> dict:
    """Squared norm of each weight component of v (monomials orthogonal)."""
    if isinstance(v, SparsePolynomial):
        out: dict = {}
        for e, c in v.terms.items():
            c2 = Fraction(c) ** 2
            if norm == "factorial":
                c2 *= _factorial_weight(e)
            elif norm != "unit":
                raise PolystabError(f"unknown norm {norm!r}")
            chi = character(v, e)
            out[chi] = out.get(chi, 0) + c2
        return out
    if isinstance(v, WeightSupport):
        return {chi: Fraction(m) for chi, m in v.points.items()}
    raise PolystabError(f"cannot take weight norms of {type(v).__name__}")


def _log_norm_sq(norms: Mapping, lam, t) -> mpmath.mpf:
    total = mpmath.mpf(0)
    for chi, n2 in norms.items():
        total += mpmath.mpf(n2.numerator) / n2.denominator * t ** (2 * pair(lam, chi))
    return mpmath.log(total)


def _grid(t_grid) -> list:
    ts = [Fraction(t) for t in t_grid]
    if len(ts) < 2:
        raise PolystabError("energy slope needs at least two grid points")
    for t in ts:
        if not 0 < t < 1:
            raise PolystabError(f"grid points must lie in (0, 1), got {t}")
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise PolystabError("grid must decrease toward 0")
    return ts


def energy_profile(obj, lam: Sequence[int], t_grid, norm: str = "unit",
                   rescale: Mapping | None = None, bits: int | None = None) -> list:
    """Finite-difference slopes d(log energy)/d(log t^2) between consecutive grid points.

    ``obj`` is a StabilityPair (pair energy p_{w,v}), a SparsePolynomial or a
    WeightSupport (log ||lam(t) v||^2).  ``rescale`` multiplies the squared
    norm of selected weights, for norm-independence checks.
    """
    lam = OneParamSubgroup(lam)
    ts = _grid(t_grid)
    bits = bits or precision_bits()

    if isinstance(obj, StabilityPair):
        nv = weight_norms(obj.poly_v if obj.poly_v is not None else obj.support_v, norm)
        nw = weight_norms(obj.poly_w if obj.poly_w is not None else obj.support_w, norm)
        parts = [(obj.power_w, nw), (-obj.power_v, nv)]
    else:
        parts = [(1, weight_norms(obj, norm))]
    if rescale:
        parts = [(k, {chi: n2 * Fraction(rescale.get(chi, 1)) for chi, n2 in norms.items()})
                 for k, norms in parts]
    for _, norms in parts:
        if len(next(iter(norms))) != len(lam):
            raise DimensionMismatch(len(next(iter(norms))), len(lam))

    with mpmath.workprec(bits):
        values, logs = [], []
        for t in ts:
            tm = mpmath.mpf(t.numerator) / t.denominator
            values.append(sum(k * _log_norm_sq(norms, lam, tm) for k, norms in parts))
            logs.append(2 * mpmath.log(tm))
        return [(values[i + 1] - values[i]) / (logs[i + 1] - logs[i]) for i in range(len(ts) - 1)]


def energy_slope(obj, lam: Sequence[int], t_grid, norm: str = "unit",
                 rescale: Mapping | None = None, bits: int | None = None) -> mpmath.mpf:
    """Slope estimate at the smallest grid point; tends to the weight (or Futaki invariant)."""
    return energy_profile(obj, lam, t_grid, norm, rescale, bits)[-1]


def weight_limit_check(p: SparsePolynomial, lam: Sequence[int], w: int | None = None) -> bool:
    """t^-w lam(t).p has only non-negative powers of t and a nonzero t^0 part.

    With ``w`` omitted, the weight of p's support is used.
    """
    lam = OneParamSubgroup(lam)
    graded = graded_action(p, lam)
    if w is None:
        w = weight(weight_support(p), lam)
    shifted = [k - w for k in graded]
    return min(shifted) >= 0 and bool(graded.get(w))


def limit_exponent(p: SparsePolynomial, lam: Sequence[int]) -> int:
    """The unique w for which weight_limit_check holds, found from the t-expansion."""
    graded = graded_action(p, OneParamSubgroup(lam))
    return min(k for k, part in graded.items() if part)


# ---------------------------------------------------------------------------
# degree formulas and concrete pairs


def hyperdiscriminant_degree(n: int, d: int, mu_times_d) -> Fraction:
    """n(n+1)d - d*mu, the degree of the hyperdiscriminant of format (n-1)."""
    if n < 1 or d < 2:
        raise PolystabError("need n >= 1 and d >= 2")
    return Fraction(n * (n + 1) * d) - Fraction(mu_times_d)


def mu_times_d_from_sectional_genus(n: int, d: int, g: int) -> int:
    """Solve 2g - 2 = -d mu / n + d(n - 1) for d mu."""
    return n * (d * (n - 1) - (2 * g - 2))


def veronese_mu_times_d(n: int) -> int:
    return n * (n + 1)


def veronese_degree(n: int, d: int) -> int:
    return n * (n + 1) * (d - 1)


def curve_degree(d: int, g: int) -> int:
    return 2 * d - 2 + 2 * g


def complete_intersection_mu_times_d(n: int, degrees: Sequence[int]) -> int:
    """d mu for a smooth complete intersection of the given degrees in P^(n+k).

    Uses c_1(X) = (n + k + 1 - sum d_i) H and deg X = prod d_i.
    """
    k = len(degrees)
    return n * math.prod(degrees) * (n + k + 1 - sum(degrees))


def complete_intersection_degree(n: int, degrees: Sequence[int]) -> int:
    k = len(degrees)
    return n * math.prod(degrees) * (sum(degrees) - k)


def curve_pair(d: int) -> StabilityPair:
    """(resultant R_{d,d}, discriminant Delta_d): Chow form and hyperdiscriminant
    of the rational normal curve of degree d."""
    if not 2 <= d <= CURVE_CAP:
        raise PolystabError(f"curve pair needs 2 <= d <= {CURVE_CAP} (got {d})")
    return StabilityPair.from_polynomials(
        sylvester_resultant(d, d), discriminant(d), label=f"rational normal curve d={d}")


def hilbert_mumford_pair(support: Iterable[Sequence[int]], deg: int, d: int) -> StabilityPair:
    """Unscaled pair (v, v^d) from the support of v."""
    pts = [tuple(p) for p in support]
    powers = Counter({tuple(0 for _ in pts[0]): 1})
    for _ in range(d):
        nxt: Counter = Counter()
        for a, ma in powers.items():
            for b in pts:
                nxt[tuple(x + y for x, y in zip(a, b))] += ma
        powers = nxt
    wv = WeightSupport.from_points(pts)
    ww = WeightSupport(wv.dim, powers)
    return StabilityPair(wv, deg, ww, d * deg, label=f"(v, v^{d})", scaled=False)

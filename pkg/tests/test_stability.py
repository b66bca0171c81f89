import json
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from polystab.errors import DimensionMismatch, NotSumZero, PolystabError
from polystab.lattice import OneParamSubgroup, sum_zero_box
from polystab.polytope import hull, includes, scale
from polystab.stability import (DESTABILIZING, SEMISTABLE, DegenerationReport,
                                StabilityPair, complete_intersection_degree,
                                complete_intersection_mu_times_d, curve_degree, curve_pair,
                                degeneration_report, energy_profile, energy_slope, find_m0,
                                futaki, hilbert_mumford_pair, hyperdiscriminant_degree,
                                is_semistable, limit_exponent, mu_times_d_from_sectional_genus,
                                proper_inclusion_holds, scan_radius, veronese_degree,
                                veronese_mu_times_d, weight, weight_limit_check, weight_norms)
from polystab.sympoly import (SparsePolynomial, WeightSupport, act_linear, discriminant,
                              total_degree, weight_support)

from oracles import in_convex_hull
from pair_factory import collect_m0_pairs, collect_pairs, random_pair

GRID = ("1/100000", "1/1000000")
TOL = mpmath.mpf("0.01")


def support(*pts):
    return WeightSupport.from_points(pts)


def simple_pair(v, dv, w, dw, **kw):
    return StabilityPair(support(*v), dv, support(*w), dw, **kw)


@st.composite
def small_polys(draw, cols=3, max_terms=4):
    exps = st.lists(st.integers(0, 2), min_size=cols, max_size=cols).map(tuple)
    terms = draw(st.dictionaries(exps, st.integers(-3, 3).filter(bool),
                                 min_size=1, max_size=max_terms))
    return SparsePolynomial(1, cols, terms)


@st.composite
def sum_zero_lambdas(draw, dim, bound=3):
    head = draw(st.lists(st.integers(-bound, bound), min_size=dim - 1, max_size=dim - 1))
    return OneParamSubgroup(head + [-sum(head)])


# --- pairs ------------------------------------------------------------------

def test_pair_validation():
    with pytest.raises(PolystabError):
        simple_pair([(1, 0)], 0, [(1, 0)], 1)
    with pytest.raises(DimensionMismatch):
        simple_pair([(1, 0)], 1, [(1, 0, 0)], 1)
    with pytest.raises(PolystabError, match="homogeneous"):
        simple_pair([(1, 0), (1, 1)], 1, [(1, 0)], 1)


def test_pair_json_round_trip():
    p = curve_pair(2)
    data = json.loads(json.dumps(p.to_json()))
    assert set(data) == {"label", "scaled", "v", "w"}
    q = StabilityPair.from_json(data)
    assert q == p
    assert q.poly_v == p.poly_v and q.poly_w == p.poly_w
    data["v"]["support"] = [[2, 0, 2]]
    with pytest.raises(PolystabError):
        StabilityPair.from_json(data)


# --- weights and Futaki invariants ----------------------------------------

def test_weight_examples():
    D2 = weight_support(discriminant(2))
    assert weight(D2, (1, -2, 1)) == -4
    assert weight(D2, (0, 0, 0)) == 0
    with pytest.raises(NotSumZero):
        weight(D2, (1, 1, 1))
    with pytest.raises(DimensionMismatch):
        weight(D2, (1, -1))


@settings(max_examples=60, deadline=None)
@given(small_polys(), small_polys(), sum_zero_lambdas(3))
def test_weight_is_additive_on_products(v, w, lam):
    wv, ww = weight(weight_support(v), lam), weight(weight_support(w), lam)
    assert wv + ww == weight(weight_support(v * w), lam)


def test_futaki_examples():
    p = curve_pair(2)
    assert (p.deg_v, p.deg_w) == (4, 2)
    assert futaki(p, (0, 0, 0)) == 0
    # w_lam(R_2) = -2 from the support {(1,2,1), (2,0,2)}; w_lam(Delta_2) = -4
    assert futaki(p, (1, -2, 1)) == 4 * (-4) - 2 * (-2) == -12
    report = degeneration_report(p, (1, -2, 1))
    assert report.to_json() == {"lambda": [1, -2, 1], "w_v": -2, "w_w": -4, "futaki": -12,
                                "verdict": SEMISTABLE}


def test_degeneration_report_verdicts():
    p = simple_pair([(1, 1, 1)], 3, [(3, 0, 0)], 3)
    bad = degeneration_report(p, (1, 0, -1))
    assert (bad.w_v, bad.w_w, bad.futaki) == (0, 3, 9)
    assert bad.verdict == DESTABILIZING
    good = degeneration_report(p, (-1, 0, 1))
    assert good.futaki == -9 and good.verdict == SEMISTABLE
    assert isinstance(bad, DegenerationReport)


@pytest.mark.parametrize("d", [2, 3])
def test_curve_pairs_semistable_and_futaki_nonpositive(d):
    p = curve_pair(d)
    assert is_semistable(p)
    assert max(futaki(p, lam) for lam in sum_zero_box(d + 1, scan_radius(p))) <= 0


def test_is_semistable_examples():
    v = support((2, 0, 0), (0, 2, 0), (1, 0, 1))
    assert is_semistable(StabilityPair(v, 2, v, 2))
    p = simple_pair([(2, 0, 0), (0, 2, 0), (0, 0, 2)], 2, [(1, 1, 1)], 3)
    res = is_semistable(p)
    assert not res
    assert res.certificate.futaki > 0
    assert sum(res.certificate.lam) == 0


def test_certificates_are_sound_and_scan_agrees():
    good, bad = collect_pairs(seed=5, semistable=15, destabilized=15)
    for p in good + bad:
        verdict = is_semistable(p)
        worst = max(futaki(p, lam) for lam in sum_zero_box(p.dim, scan_radius(p)))
        assert bool(verdict) == (worst <= 0)
        if not verdict:
            assert futaki(p, verdict.certificate.lam) == verdict.certificate.futaki > 0


# --- find_m0 ---------------------------------------------------------------

def test_find_m0_barycenter_in_simplex():
    p = simple_pair([(1, 1, 1)], 3, [(3, 0, 0), (0, 3, 0), (0, 0, 3)], 3)
    assert find_m0(p) == 1
    assert proper_inclusion_holds(p, 1)


def test_find_m0_semistable_but_not_stable():
    # v = w is always semistable, but a segment has no room for the simplex
    seg = [(2, 0, 0), (0, 2, 0)]
    p = simple_pair(seg, 2, seg, 2)
    assert is_semistable(p)
    assert find_m0(p) is None
    assert not any(proper_inclusion_holds(p, m) for m in range(1, 51))


def test_find_m0_boundary_contact_can_still_be_stable():
    # v sits on an edge of w, but w's polytope already holds q * S, so m0 = 1
    p = simple_pair([(1, 1, 0)], 2, [(2, 0, 0), (0, 2, 0), (0, 0, 2)], 2)
    assert is_semistable(p)
    assert find_m0(p) == 1
    assert all(proper_inclusion_holds(p, m) for m in range(1, 11))


def test_find_m0_matches_direct_inclusion():
    pairs = collect_m0_pairs(seed=77, count=12)
    assert any(m0 > 1 for _, m0 in pairs)
    for p, m0 in pairs:
        for m in range(1, m0 + 8):
            assert proper_inclusion_holds(p, m) == (m >= m0)


def test_find_m0_none_agrees_with_direct_inclusion():
    rnd = random.Random(31)
    nones = 0
    while nones < 8:
        p = random_pair(rnd)
        if is_semistable(p) and find_m0(p) is None:
            nones += 1
            assert not any(proper_inclusion_holds(p, m) for m in range(1, 51))


def test_curve_pairs_not_stable_on_standard_torus_but_stable_on_conjugates():
    sigma = [[1, 2, -1], [0, 1, 1], [2, -1, 1]]
    p = curve_pair(2)
    assert find_m0(p) is None
    q = p.with_polynomials(act_linear(p.poly_v, sigma), act_linear(p.poly_w, sigma))
    assert is_semistable(q)
    assert find_m0(q) == 1
    assert proper_inclusion_holds(q, 1)


# --- Hilbert-Mumford special case -----------------------------------------

HM_CASES = [
    # (support of v, degree, origin in the quotient polytope?, in its interior?)
    ([(2, 0, 0), (0, 2, 0), (0, 0, 2)], 2, True, True),
    ([(2, 0, 0), (0, 2, 0)], 2, False, False),
    ([(1, 1, 0), (0, 0, 2)], 2, True, False),
    ([(3, 0, 0), (0, 3, 0), (1, 1, 1)], 3, True, False),
    ([(2, 1, 0), (0, 2, 1), (1, 0, 2)], 3, True, True),
    ([(2, 1, 0), (1, 2, 0)], 3, False, False),
    ([(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2)], 2, True, True),
    ([(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 1, 1)], 2, True, False),
]


def origin_in_quotient(pts):
    return in_convex_hull(pts, (0,) * len(pts[0]), along_diagonal=True)


def origin_in_quotient_interior(pts, eps=Fraction(1, 1000)):
    D = len(pts[0])
    for i in range(D - 1):
        for s in (eps, -eps):
            x = [0] * D
            x[i] = float(s)
            if not in_convex_hull(pts, x, along_diagonal=True):
                return False
    return True


@pytest.mark.parametrize("pts,deg,contains,interior", HM_CASES)
@pytest.mark.parametrize("d", [2, 3])
def test_hilbert_mumford_pairs(pts, deg, contains, interior, d):
    assert origin_in_quotient(pts) == contains
    assert origin_in_quotient_interior(pts) == interior
    p = hilbert_mumford_pair(pts, deg, d)
    assert not p.scaled and p.deg_w == d * deg
    assert includes(p.support_w.hull(), scale(hull(pts), d)) and includes(
        scale(hull(pts), d), p.support_w.hull())
    assert bool(is_semistable(p)) == contains
    assert (find_m0(p) is not None) == interior


def test_hilbert_mumford_random_against_lp():
    rnd = random.Random(12)
    for _ in range(40):
        D = rnd.choice([3, 4])
        deg = rnd.randint(1, 3)
        pts = []
        for _ in range(rnd.randint(1, 4)):
            cuts = sorted(rnd.randint(0, deg) for _ in range(D - 1))
            pts.append(tuple(b - a for a, b in zip([0] + cuts, cuts + [deg])))
        p = hilbert_mumford_pair(pts, deg, 2)
        assert bool(is_semistable(p)) == origin_in_quotient(pts)
        assert (find_m0(p) is not None) == origin_in_quotient_interior(pts)


def test_scaled_encoding_of_v_with_its_power_is_always_semistable():
    # the (deg_w N(v), deg_v N(v^d)) scaling makes both sides equal
    pts = [(2, 0, 0), (0, 2, 0)]
    p = StabilityPair(support(*pts), 2, hilbert_mumford_pair(pts, 2, 2).support_w, 4)
    assert is_semistable(p)


# --- energy asymptotics -----------------------------------------------------

def test_energy_slope_single_monomial_is_exact():
    m = SparsePolynomial(1, 3, {(2, 0, 1): 5})
    for s in energy_profile(m, (1, -2, 1), ("1/10", "1/100", "1/1000")):
        assert abs(s - 3) < mpmath.mpf(10) ** -60


def test_energy_slope_discriminant():
    s = energy_slope(discriminant(2), (1, -2, 1), GRID)
    assert abs(s - (-4)) < TOL


@pytest.mark.parametrize("d", [2, 3])
def test_energy_slope_of_curve_pair_matches_futaki(d):
    p = curve_pair(d)
    rnd = random.Random(d)
    for _ in range(5):
        head = [rnd.randint(-3, 3) for _ in range(d)]
        lam = head + [-sum(head)]
        s = energy_slope(p, lam, GRID)
        assert abs(s - futaki(p, lam)) < TOL


def test_energy_slope_norm_independence():
    p = curve_pair(2)
    lam = (2, -1, -1)
    base = futaki(p, lam)
    rnd = random.Random(4)
    pts = set(p.support_v) | set(p.support_w)
    for _ in range(5):
        rescale = {chi: Fraction(rnd.randint(1, 50), rnd.randint(1, 50)) for chi in pts}
        assert abs(energy_slope(p, lam, GRID, rescale=rescale) - base) < TOL
    assert abs(energy_slope(p, lam, GRID, norm="factorial") - base) < TOL


def test_energy_slope_precision_setting(monkeypatch):
    monkeypatch.setenv("POLYSTAB_PRECISION_BITS", "300")
    s = energy_slope(discriminant(2), (1, -2, 1), GRID)
    assert s.context.prec >= 53
    assert abs(s + 4) < TOL


def test_energy_slope_rejects_bad_grids():
    D = discriminant(2)
    with pytest.raises(PolystabError):
        energy_slope(D, (1, -2, 1), [])
    with pytest.raises(PolystabError):
        energy_slope(D, (1, -2, 1), ["1/10"])
    with pytest.raises(PolystabError):
        energy_slope(D, (1, -2, 1), ["2", "1/10"])
    with pytest.raises(PolystabError):
        energy_slope(D, (1, -2, 1), ["1/100", "1/10"])
    with pytest.raises(PolystabError):
        weight_norms(D, norm="euclid")


def test_weight_norms_factorial():
    D = discriminant(2)
    norms = weight_norms(D, "factorial")
    # a1^2 / 2!  and 16 a0 a2 / (1! 1!)
    assert norms == {(0, 2, 0): Fraction(1, 2), (1, 0, 1): 16}


# --- limits -------------------------------------------------------------------

def test_weight_limit_check_examples():
    D = discriminant(2)
    assert weight_limit_check(D, (0, 0, 0))
    assert weight_limit_check(D, (1, -2, 1))
    assert weight_limit_check(SparsePolynomial(1, 3, {(0, 1, 4): 2}), (3, 1, -4))
    assert not weight_limit_check(D, (1, -2, 1), w=-3)
    assert not weight_limit_check(D, (1, -2, 1), w=-5)


@settings(max_examples=60, deadline=None)
@given(small_polys(cols=4, max_terms=5), sum_zero_lambdas(4))
def test_weight_is_the_limit_exponent(p, lam):
    w = weight(weight_support(p), lam)
    assert limit_exponent(p, lam) == w
    assert weight_limit_check(p, lam, w)
    assert not weight_limit_check(p, lam, w + 1)
    assert not weight_limit_check(p, lam, w - 1)


# --- degree formulas --------------------------------------------------------

def test_veronese_degrees():
    assert veronese_degree(2, 3) == 12
    for n in range(1, 5):
        for d in range(2, 6):
            assert hyperdiscriminant_degree(n, d, veronese_mu_times_d(n)) == veronese_degree(n, d)


def test_curve_degrees():
    assert curve_degree(4, 0) == 6
    for d in range(2, 8):
        for g in range(0, 4):
            mu = mu_times_d_from_sectional_genus(1, d, g)
            assert mu == 2 - 2 * g
            assert hyperdiscriminant_degree(1, d, mu) == curve_degree(d, g)
    for d in range(2, 6):
        assert curve_degree(d, 0) == total_degree(discriminant(d))


def test_complete_intersection_degrees():
    cases = [(1, [2]), (1, [3]), (2, [2]), (2, [3]), (2, [2, 2]), (1, [2, 2]),
             (3, [2]), (2, [2, 3]), (1, [4]), (3, [2, 2])]
    for n, degs in cases:
        deg_x = 1
        for di in degs:
            deg_x *= di
        mu = complete_intersection_mu_times_d(n, degs)
        # adjunction: c_1 = (n + k + 1 - sum d_i) H, and d mu = n c_1 H^(n-1) = n deg_x c_1
        assert mu == n * deg_x * (n + len(degs) + 1 - sum(degs))
        assert hyperdiscriminant_degree(n, deg_x, mu) == complete_intersection_degree(n, degs)


def test_complete_intersection_curves_agree_with_genus_formula():
    # plane curve of degree e: genus (e-1)(e-2)/2, degree e
    for e in range(2, 7):
        g = (e - 1) * (e - 2) // 2
        assert complete_intersection_degree(1, [e]) == curve_degree(e, g)
    # a (2,3) complete intersection curve in P^3 has genus 4 and degree 6
    assert complete_intersection_degree(1, [2, 3]) == curve_degree(6, 4)


def test_hyperdiscriminant_degree_validation():
    with pytest.raises(PolystabError):
        hyperdiscriminant_degree(0, 3, 0)
    with pytest.raises(PolystabError):
        hyperdiscriminant_degree(1, 1, 0)
    assert hyperdiscriminant_degree(1, 2, Fraction(1, 2)) == Fraction(7, 2)

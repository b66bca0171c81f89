"""Exact polytope tests for K-(semi)stability of pairs of torus-weighted polynomials."""

__version__ = "0.1.0"

from .lattice import OneParamSubgroup, pair, quotient_equal, validate_1ps
from .polytope import (AMBIENT, QUOTIENT, LatticePolytope, equals, hull, includes,
                       lattice_points, minkowski_sum, scale, standard_simplex,
                       support_min, vertex_count)
from .rep_weyl import (Partition, dominance_leq, genericity_certificate, hypersimplex,
                       is_generic, orbit_polytope, q_degree)
from .stability import (DegenerationReport, StabilityPair, curve_pair, energy_slope,
                        find_m0, futaki, hyperdiscriminant_degree, is_semistable,
                        weight, weight_limit_check)
from .sympoly import (SparsePolynomial, WeightSupport, act_diagonal, act_linear,
                      discriminant, newton_polytope, row_degrees, sylvester_resultant,
                      total_degree, weight_support)

__all__ = [
    "AMBIENT", "QUOTIENT", "DegenerationReport", "LatticePolytope", "OneParamSubgroup",
    "Partition", "SparsePolynomial", "StabilityPair", "WeightSupport", "act_diagonal",
    "act_linear", "curve_pair", "discriminant", "dominance_leq", "energy_slope", "equals",
    "find_m0", "futaki", "genericity_certificate", "hull", "hyperdiscriminant_degree",
    "hypersimplex", "includes", "is_generic", "is_semistable", "lattice_points",
    "minkowski_sum", "newton_polytope", "orbit_polytope", "pair", "q_degree",
    "quotient_equal", "row_degrees", "scale", "standard_simplex", "support_min",
    "sylvester_resultant", "total_degree", "validate_1ps", "vertex_count", "weight",
    "weight_limit_check", "weight_support",
]

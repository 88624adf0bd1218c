"""Exact checks for Weyl invariants of types B_n/D_n, the invariant ideal they
generate, its 2-saturation, and torsion annihilator bounds."""

from .bounds import chow_bound, gamma_bound
from .exponents import (
    GroupRingElement,
    orbit_sum,
    phi_leading,
    saturation_exponent,
    tau_divisor_bound,
)
from .invariants import (
    basic_invariants,
    fixed_sublattice,
    ideal_slice,
    is_invariant,
    verify_halfinteger_generation,
)
from .lattice import GradedLattice, hnf, lattice_member, p_saturate, quotient_divisors, snf, solve_integer
from .poly import Basis, Dyadic, Polynomial, parse_polynomial
from .rewriting import Presentation, delta_decompose, expand_presentation, rewrite_divisible
from .rootdata import RootDatum, SignedPermutation, act, make_root_datum, orbit, weyl_elements

__version__ = "0.1.0"

import random
from fractions import Fraction

import pytest

from weyl_torsion.exponents import (
    GroupRingElement,
    NotInFiltration,
    exponential_components,
    filtration_degree,
    fundamental_deviations,
    generated_family,
    im_leading_lattice,
    orbit_sum,
    phi_leading,
    saturation_exponent,
    tau_divisor_bound,
    truncated_series,
)
from weyl_torsion.invariants import basic_invariants, ideal_slice
from weyl_torsion.lattice import smith_diagonal, valuation
from weyl_torsion.poly import Basis, parse_polynomial
from weyl_torsion.rootdata import HypothesisError, make_root_datum, weyl_elements


def W(text, n=3):
    return parse_polynomial(text, n, Basis.OMEGA)


def y(datum, weight):
    return GroupRingElement.exp(datum, weight) - 1


# group ring

def test_orbit_sum_examples(b3):
    assert orbit_sum(b3, (0, 0, 0)) == GroupRingElement.one(b3)
    rho = orbit_sum(b3, (1, 0, 0))
    assert len(rho) == 6 and rho.augmentation == 6
    for w in weyl_elements(b3):
        assert rho.acted(w) == rho
    with pytest.raises(ValueError):
        orbit_sum(b3, (Fraction(1, 2), 0, 0))


def test_group_ring_arithmetic(b3):
    a = GroupRingElement.exp(b3, (1, 0, 0))
    b = GroupRingElement.exp(b3, (-1, 0, 0))
    assert a * b == GroupRingElement.one(b3)
    assert (a - a).augmentation == 0 and len(a - a) == 0
    assert (2 * a + 1).augmentation == 3
    with pytest.raises(ValueError):
        GroupRingElement.exp(b3, (0.5, 0, 0))


# leading forms

def test_phi_examples(b3):
    assert phi_leading(y(b3, (1, 0, 0)), 1) == W("w1")
    assert phi_leading(y(b3, (0, 1, 0)), 1) == W("w2 - w1")
    lam, mu = (1, 0, 0), b3.fundamental_weight(3)
    assert phi_leading(y(b3, lam) * y(b3, mu), 2) == W("w1*w3")
    with pytest.raises(NotInFiltration) as info:
        phi_leading(GroupRingElement.exp(b3, lam), 1)
    assert info.value.degree == 0


def test_exponential_components_denominators(b3):
    comps = exponential_components(GroupRingElement.exp(b3, (1, 0, 0)), 3)
    assert comps[3] == W("1/6*w1^3")
    assert filtration_degree(y(b3, (1, 0, 0)), 3) == 1
    assert filtration_degree(GroupRingElement(b3, {}), 3) is None


def _random_weight(datum, rng):
    coords = [rng.randint(-2, 2) for _ in range(datum.rank)]
    return tuple(sum(c * row[k] for c, row in zip(coords, datum.omega_in_e)) for k in range(datum.rank))


def test_phi_multiplicative(b3, d4):
    rng = random.Random(2)
    for datum in (b3, d4):
        for _ in range(25):
            a, b = rng.randint(1, 2), rng.randint(1, 2)
            x = GroupRingElement.one(datum)
            for _ in range(a):
                x = x * y(datum, _random_weight(datum, rng))
            z = GroupRingElement.one(datum)
            for _ in range(b):
                z = z * y(datum, _random_weight(datum, rng))
            if filtration_degree(x, a) != a or filtration_degree(z, b) != b:
                continue
            assert phi_leading(x * z, a + b) == phi_leading(x, a) * phi_leading(z, b)


def test_generated_family_is_integral(b3):
    for a, x in generated_family(b3, 3):
        assert x.augmentation == 0
        # each deviation is even, so a product of |a| of them starts in degree >= 2|a|
        k = filtration_degree(x, 2 * sum(a))
        assert k == 2 * sum(a)
        assert phi_leading(x, k).is_integral()


def test_truncated_series_is_multiplicative(b3):
    from weyl_torsion.exponents import _series_product
    devs = fundamental_deviations(b3)
    for i in range(3):
        for j in range(3):
            direct = truncated_series(devs[i] * devs[j], 4)
            assert direct == _series_product(truncated_series(devs[i], 4), truncated_series(devs[j], 4), 4)


# image lattice

def test_image_contains_rho_square(b3):
    rho = orbit_sum(b3, (1, 0, 0)) - 6
    image = im_leading_lattice(b3, 2, 2)
    lead = phi_leading(rho * rho, 2)
    assert lead.coefficient_vector(image.lattice.monomials) in image.lattice


def test_image_contains_generated_elements(b3):
    image = im_leading_lattice(b3, 2, 3, scope="invariant")
    for _, x in generated_family(b3, 3):
        if filtration_degree(x, 2) == 2:
            lead = phi_leading(x, 2)
            assert lead.coefficient_vector(image.lattice.monomials) in image.lattice


@pytest.mark.parametrize("scope", ["ideal", "invariant"])
def test_image_monotone_in_cutoff(b3, scope):
    for d in (2, 3):
        small = im_leading_lattice(b3, d, 2, scope).lattice
        large = im_leading_lattice(b3, d, 3, scope).lattice
        assert all(list(r) in large for r in small.basis)


def test_image_stability_flag(b3):
    assert im_leading_lattice(b3, 2, 4, check_stability=True).stable is True


def test_image_limits(b3):
    with pytest.raises(HypothesisError):
        im_leading_lattice(make_root_datum("B", 5), 2, 2)
    with pytest.raises(HypothesisError):
        im_leading_lattice(b3, 0, 2)
    with pytest.raises(ValueError):
        im_leading_lattice(b3, 2, 2, scope="everything")


# saturation exponent

def _exponent_oracle(datum, d):
    # 2-part of the torsion of Z^m / K, read off the Smith form of K directly
    k = ideal_slice(basic_invariants(datum), d)
    if not k.basis:
        return 0
    return max((valuation(x, 2) for x in smith_diagonal(k.matrix()) if x), default=0)


@pytest.mark.parametrize("family,n,degrees", [("B", 3, (2, 3, 4)), ("B", 4, (2, 3, 4)), ("D", 4, (2, 3))])
def test_saturation_exponent_matches_oracle(family, n, degrees):
    datum = make_root_datum(family, n)
    for d in degrees:
        report = saturation_exponent(datum, d)
        assert report.min_exponent == _exponent_oracle(datum, d)
        assert report.passed and report.witnessed and report.min_exponent <= d


def test_saturation_exponent_examples(b3):
    assert saturation_exponent(b3, 2).min_exponent == 1
    assert saturation_exponent(b3, 3).min_exponent == 1
    zero = saturation_exponent(b3, 1)
    assert zero.k_slice.rank == 0 and zero.min_exponent == 0 and zero.passed
    with pytest.raises(HypothesisError, match="n>d≥2"):
        saturation_exponent(make_root_datum("D", 4), 4)


def test_saturation_report_dict(b3):
    doc = saturation_exponent(b3, 2).as_dict()
    assert doc["pass"] is True and doc["bound"] == 2 and doc["slice_rank"] == 1


# tau

def test_tau_b3(b3):
    report = tau_divisor_bound(b3, 2, 4)
    assert report.bound in (1, 2)
    assert report.divides_two and report.verified and report.stable
    assert "lower bound" in report.as_dict()["caveat"]


def test_tau_zero_slice(b3):
    assert tau_divisor_bound(b3, 1, 3).bound == 1


def test_tau_invariant_scope_odd_degree(b3):
    # invariant elements are even (-1 is in W), so odd leading forms never appear
    report = tau_divisor_bound(b3, 3, 3, scope="invariant", check_stability=False)
    assert report.bound is None and report.image_rank == 0
    assert tau_divisor_bound(b3, 3, 3, scope="ideal", check_stability=False).bound == 1

"""Saturation exponents of the invariant ideal and the d-th exponent estimate.

The group ring Z[Λ] is modelled by :class:`GroupRingElement`.  Its map to the
completed symmetric algebra sends ``e^λ`` to the truncated exponential
``sum_k λ^k / k!``; the leading form of an element whose components below
degree ``d`` vanish is its degree-``d`` component.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm
from typing import Mapping, Sequence

from .invariants import basic_invariants, check_slice_hypotheses, ideal_slice
from .lattice import (
    GradedLattice,
    NotMember,
    lattice_member,
    left_kernel,
    p_saturate,
    quotient_divisors,
    valuation,
)
from .poly import Basis, Polynomial, monomials_of_degree
from .rootdata import HypothesisError, RootDatum, Weight, format_weight, orbit


class NotInFiltration(ValueError):
    def __init__(self, degree: int):
        super().__init__(f"nonzero component in degree {degree}")
        self.degree = degree


class IntegralityFailure(ArithmeticError):
    pass


class GroupRingElement:
    """Finite sum ``sum c_λ e^λ`` with integer ``c_λ`` and λ in the weight lattice."""

    __slots__ = ("datum", "_terms")

    def __init__(self, datum: RootDatum, terms: Mapping[Sequence, int] | None = None,
                 check: bool = True):
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(Fraction(x) for x in w)
            if c:
                if check and not datum.in_lattice(w):
                    raise ValueError(f"weight {format_weight(w)} is not in the weight lattice")
                clean[w] = clean.get(w, 0) + c
        self.datum = datum
        self._terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def one(cls, datum: RootDatum) -> "GroupRingElement":
        return cls(datum, {(0,) * datum.rank: 1}, check=False)

    @classmethod
    def exp(cls, datum: RootDatum, weight: Sequence) -> "GroupRingElement":
        return cls(datum, {tuple(weight): 1})

    @property
    def terms(self) -> dict[Weight, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    @property
    def augmentation(self) -> int:
        return sum(self._terms.values())

    def _other(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement(self.datum, {(0,) * self.datum.rank: other}, check=False)
        if other.datum != self.datum:
            raise ValueError("group ring elements of different root data")
        return other

    def __add__(self, other):
        other = self._other(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(self.datum, out, check=False)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.datum, {w: -c for w, c in self._terms.items()}, check=False)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.datum, {w: c * other for w, c in self._terms.items()},
                                    check=False)
        other = self._other(other)
        out: dict = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = tuple(a + b for a, b in zip(w1, w2))
                out[w] = out.get(w, 0) + c1 * c2
        return GroupRingElement(self.datum, out, check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.datum == other.datum and self._terms == other._terms

    def __hash__(self):
        return hash((self.datum, frozenset(self._terms.items())))

    def acted(self, w) -> "GroupRingElement":
        return GroupRingElement(self.datum, {w.apply_vector(k): c for k, c in self._terms.items()},
                                check=False)

    def __repr__(self):
        body = " + ".join(f"{c}*e^({format_weight(w)})" for w, c in sorted(self._terms.items()))
        return f"GroupRingElement({body or '0'})"


def orbit_sum(datum: RootDatum, weight: Sequence) -> GroupRingElement:
    return GroupRingElement(datum, {w: 1 for w in orbit(datum, weight)})


def exponential_components(x: GroupRingElement, top: int) -> list[Polynomial]:
    """Components ``0..top`` of ``sum c_λ exp(λ)`` as ω-polynomials over Q.

    The coefficient of ``ω^a`` in degree ``k`` is ``(sum_λ c_λ λ^a) / a!``
    where ``λ^a`` uses the ω-coordinates of λ.
    """
    datum = x.datum
    n = datum.rank
    coords = [(datum.omega_coords(w), c) for w, c in x.items()]
    out = []
    for k in range(top + 1):
        terms = {}
        for a in monomials_of_degree(n, k):
            moment = 0
            for lam, c in coords:
                v = c
                for li, ai in zip(lam, a):
                    if ai:
                        v *= li ** ai
                moment += v
            if moment:
                denom = 1
                for ai in a:
                    denom *= factorial(ai)
                terms[a] = Fraction(moment, denom)
        out.append(Polynomial(terms, n, Basis.OMEGA))
    return out


def filtration_degree(x: GroupRingElement, top: int) -> int | None:
    """Lowest degree ``<= top`` with a nonzero component, or ``None``."""
    for k, comp in enumerate(exponential_components(x, top)):
        if comp:
            return k
    return None


def phi_leading(x: GroupRingElement, d: int) -> Polynomial:
    comps = exponential_components(x, d)
    for k in range(d):
        if comps[k]:
            raise NotInFiltration(k)
    lead = comps[d]
    if not lead.is_integral():
        raise IntegralityFailure(f"leading form {lead} is not in S^{d}(Λ)")
    return lead


# image lattice ------------------------------------------------------------------

def desk_limits() -> tuple[int, int]:
    return (int(os.environ.get("WEYL_TORSION_TAU_MAX_RANK", "4")),
            int(os.environ.get("WEYL_TORSION_TAU_MAX_DEGREE", "4")))


def fundamental_deviations(datum: RootDatum) -> list[GroupRingElement]:
    """``ρ(ω_j) - |W ω_j|``: augmentation-zero invariant elements."""
    out = []
    for j in range(1, datum.rank + 1):
        rho = orbit_sum(datum, datum.fundamental_weight(j))
        out.append(rho - rho.augmentation)
    return out


def generated_family(datum: RootDatum, cutoff: int) -> list[tuple[tuple[int, ...], GroupRingElement]]:
    """All monomials ``g^a`` in the fundamental deviations with ``1 <= |a| <= cutoff``."""
    gens = fundamental_deviations(datum)
    n = len(gens)
    cache: dict[tuple[int, ...], GroupRingElement] = {(0,) * n: GroupRingElement.one(datum)}
    out = []
    for size in range(1, cutoff + 1):
        for a in monomials_of_degree(n, size):
            j = next(i for i, e in enumerate(a) if e)
            prev = a[:j] + (a[j] - 1,) + a[j + 1:]
            cache[a] = cache[prev] * gens[j]
            out.append((a, cache[a]))
    return out


SCOPES = ("ideal", "invariant")


@dataclass
class ImageLattice:
    lattice: GradedLattice
    cutoff: int
    elements: int
    scope: str
    stable: bool | None = None

    caveat = ("lower bound: spanned by leading forms of a generated family of "
              "elements of I_m^W; completeness not certified")


def im_leading_lattice(datum: RootDatum, d: int, cutoff: int, scope: str = "ideal",
                       check_stability: bool = False) -> ImageLattice:
    """Leading forms in degree ``d`` of Z-combinations of a generated family
    that lie in filtration ``>= d``.

    The family is ``g^a`` (``g_j`` the fundamental deviations, ``|a| >= 1``);
    with ``scope="ideal"`` also ``g^a * y^b`` with ``y_j = e^{ω_j} - 1``, which
    spans the ideal of Z[Λ] generated by the invariant elements.  Total factor
    count is at most ``cutoff``.
    """
    max_r, max_d = desk_limits()
    if datum.rank > max_r or d > max_d:
        raise HypothesisError(
            f"leading-form image limited to rank ≤ {max_r}, d ≤ {max_d} at desk scale")
    if d < 1:
        raise HypothesisError("leading-form image needs d ≥ 1")
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}")
    lattice, count = _image(datum, d, cutoff, scope)
    stable = None
    if check_stability:
        stable = _image(datum, d, cutoff + 1, scope)[0] == lattice
    return ImageLattice(lattice, cutoff, count, scope, stable)


def _truncate(p: Polynomial, top: int) -> Polynomial:
    return Polynomial({m: c for m, c in p.items() if sum(m) <= top}, p.rank, p.basis)


def _series_product(p: Polynomial, q: Polynomial, top: int) -> Polynomial:
    out: dict = {}
    for m1, c1 in p.items():
        d1 = sum(m1)
        for m2, c2 in q.items():
            if d1 + sum(m2) <= top:
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
    return Polynomial(out, p.rank, p.basis)


def truncated_series(x: GroupRingElement, top: int) -> Polynomial:
    """``sum_{k<=top}`` of the exponential components as one ω-polynomial."""
    total: dict = {}
    for comp in exponential_components(x, top):
        total.update(comp.terms)
    return Polynomial(total, x.datum.rank, Basis.OMEGA)


def _image(datum: RootDatum, d: int, cutoff: int, scope: str):
    # the exponential map is a ring homomorphism, so the truncated series of a
    # product is the truncated product of the factors' series
    n = datum.rank
    g_series = [truncated_series(g, d) for g in fundamental_deviations(datum)]
    factors = list(g_series)
    if scope == "ideal":
        for j in range(1, n + 1):
            y = GroupRingElement.exp(datum, datum.fundamental_weight(j)) - 1
            factors.append(truncated_series(y, d))
    ng = len(g_series)
    one = Polynomial.constant(1, n, Basis.OMEGA)
    cache = {(0,) * len(factors): one}
    family = []
    for size in range(1, cutoff + 1):
        for a in monomials_of_degree(len(factors), size):
            j = next(i for i, e in enumerate(a) if e)
            prev = a[:j] + (a[j] - 1,) + a[j + 1:]
            cache[a] = _series_product(cache[prev], factors[j], d)
            if any(a[:ng]):
                family.append(cache[a])

    low_monos = [a for k in range(d) for a in monomials_of_degree(n, k)]
    top_monos = monomials_of_degree(n, d)
    low_rows, top_rows = [], []
    for series in family:
        # k! * (component k) is integral
        low_rows.append([int(series.coefficient(a) * factorial(sum(a))) for a in low_monos])
        top_rows.append([int(series.coefficient(a) * factorial(d)) for a in top_monos])
    combos = left_kernel(low_rows, len(low_monos)) if family else []
    rows = []
    for c in combos:
        v = [0] * len(top_monos)
        for ci, r in zip(c, top_rows):
            if ci:
                v = [a + ci * b for a, b in zip(v, r)]
        if any(x % factorial(d) for x in v):
            raise IntegralityFailure("leading form of a filtration element is not integral")
        rows.append([x // factorial(d) for x in v])
    return GradedLattice.from_rows(d, top_monos, rows), len(family)


# reports -------------------------------------------------------------------------

@dataclass
class ExponentReport:
    family: str
    rank: int
    degree: int
    k_slice: GradedLattice = field(repr=False)
    saturated: GradedLattice = field(repr=False)
    divisors: list[int]
    min_exponent: int
    bound: int
    witnessed: bool
    violation: list[int] | None = None

    @property
    def passed(self) -> bool:
        return self.min_exponent <= self.bound and self.witnessed

    def as_dict(self) -> dict:
        return {
            "type": self.family,
            "rank": self.rank,
            "degree": self.degree,
            "slice_rank": self.k_slice.rank,
            "ambient_dim": self.k_slice.dim,
            "divisors": self.divisors,
            "min_exponent": self.min_exponent,
            "bound": self.bound,
            "direct_witness": self.witnessed,
            "violation": self.violation,
            "pass": self.passed,
        }


def saturation_exponent(datum: RootDatum, d: int) -> ExponentReport:
    """Smallest ``r`` with ``2^r * Sat_2(K^(d)) ⊆ K^(d)``, checked against ``r <= d``."""
    check_slice_hypotheses(datum, d)
    family = basic_invariants(datum)
    k_slice = ideal_slice(family, d)
    ambient = GradedLattice.full(d, k_slice.monomials)
    saturated = p_saturate(ambient, k_slice, 2)
    divisors = quotient_divisors(saturated, k_slice)
    r = max((valuation(x, 2) for x in divisors if x), default=0)
    witnessed, violation = True, None
    scale = 2 ** d
    for v in saturated.basis:
        try:
            lattice_member(k_slice, [scale * x for x in v])
        except NotMember:
            witnessed, violation = False, list(v)
            break
    return ExponentReport(datum.family, datum.rank, d, k_slice, saturated, divisors,
                          r, d, witnessed, violation)


@dataclass
class TauReport:
    family: str
    rank: int
    degree: int
    cutoff: int
    scope: str
    bound: int | None
    row_orders: list[int | None]
    image_rank: int
    slice_rank: int
    elements: int
    stable: bool | None
    verified: bool
    caveat: str = ImageLattice.caveat

    @property
    def divides_two(self) -> bool:
        return self.bound is not None and 2 % self.bound == 0

    def as_dict(self) -> dict:
        return {
            "type": self.family,
            "rank": self.rank,
            "degree": self.degree,
            "cutoff": self.cutoff,
            "scope": self.scope,
            "tau_upper_bound": self.bound,
            "row_orders": self.row_orders,
            "slice_rank": self.slice_rank,
            "image_rank": self.image_rank,
            "generated_elements": self.elements,
            "stable_at_next_cutoff": self.stable,
            "membership_verified": self.verified,
            "tau_divides_2": self.divides_two,
            "caveat": self.caveat,
        }


def _rational_order(lattice: GradedLattice, v: Sequence[int]) -> int | None:
    """Smallest ``N >= 1`` with ``N*v`` in the lattice, ``None`` if no such N."""
    res = [Fraction(x) for x in v]
    coeffs = []
    for row, c in zip(lattice.basis, lattice.pivots):
        if any(res[j] for j in range(c)):
            return None
        q = res[c] / row[c]
        coeffs.append(q)
        if q:
            res = [a - q * b for a, b in zip(res, row)]
    if any(res):
        return None
    return lcm(1, *(q.denominator for q in coeffs))


def tau_divisor_bound(datum: RootDatum, d: int, cutoff: int, scope: str = "ideal",
                      check_stability: bool = True) -> TauReport:
    """Smallest ``N`` with ``N * K^(d)`` inside the certified image; an upper bound for τ_d.

    ``bound`` is ``None`` when some row of ``K^(d)`` has no multiple in the image.
    """
    check_slice_hypotheses(datum, d)
    image = im_leading_lattice(datum, d, cutoff, scope, check_stability)
    k_slice = ideal_slice(basic_invariants(datum), d)
    orders = [_rational_order(image.lattice, v) for v in k_slice.basis]
    bound = None if any(o is None for o in orders) else lcm(1, *orders)
    verified = bound is not None
    if bound is not None:
        for v in k_slice.basis:
            try:
                lattice_member(image.lattice, [bound * x for x in v])
            except NotMember:
                verified = False
    return TauReport(datum.family, datum.rank, d, cutoff, scope, bound, orders,
                     image.lattice.rank, k_slice.rank, image.elements, image.stable, verified)


__all__ = [
    "ExponentReport",
    "GroupRingElement",
    "ImageLattice",
    "IntegralityFailure",
    "NotInFiltration",
    "TauReport",
    "exponential_components",
    "filtration_degree",
    "fundamental_deviations",
    "generated_family",
    "im_leading_lattice",
    "orbit_sum",
    "phi_leading",
    "truncated_series",
    "saturation_exponent",
    "tau_divisor_bound",
]

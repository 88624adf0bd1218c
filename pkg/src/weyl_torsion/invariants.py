"""Basic invariants t_i (and p_n), their ideal slices and W-fixed lattices.

All lattices live in ``S^d(Λ)`` written in the ω-monomial basis, so that an
integer coordinate vector is exactly an element of the symmetric power of the
weight lattice.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .lattice import (
    GradedLattice,
    left_kernel,
    p_saturate,
    quotient_divisors,
    saturation_in_ambient,
    valuation,
)
from .poly import (
    Basis,
    Polynomial,
    elementary_symmetric,
    monomial_index,
    monomials_of_degree,
    substitute_linear,
    variables,
)
from .rootdata import HypothesisError, RootDatum, SignedPermutation, act, weyl_elements


def max_degree() -> int:
    return int(os.environ.get("WEYL_TORSION_MAX_DEGREE", "8"))


@lru_cache(maxsize=None)
def t_invariant(n: int, i: int) -> Polynomial:
    """``t_i = s_i(e_1^2, ..., e_n^2)``."""
    sq = [x * x for x in variables(n)]
    return elementary_symmetric(i, sq)


@lru_cache(maxsize=None)
def p_invariant(n: int) -> Polynomial:
    return Polynomial.monomial((1,) * n)


class InvarianceCheck(NamedTuple):
    invariant: bool
    witness: SignedPermutation | None

    def __bool__(self):
        return self.invariant


def is_invariant(datum: RootDatum, p: Polynomial) -> InvarianceCheck:
    """Exhaustive check over W; the witness is the first violating element."""
    if p.basis is not Basis.E:
        p = datum.to_e(p)
    for w in weyl_elements(datum):
        if act(w, p) != p:
            return InvarianceCheck(False, w)
    return InvarianceCheck(True, None)


class InvarianceError(AssertionError):
    pass


@dataclass(frozen=True)
class InvariantFamily:
    datum: RootDatum
    generators: tuple[Polynomial, ...]
    degrees: tuple[int, ...]
    names: tuple[str, ...]

    @property
    def rank(self) -> int:
        return self.datum.rank

    def omega_generators(self) -> tuple[Polynomial, ...]:
        return _omega_generators(self)


@lru_cache(maxsize=None)
def _omega_generators(family: InvariantFamily) -> tuple[Polynomial, ...]:
    return tuple(family.datum.to_omega(g) for g in family.generators)


@lru_cache(maxsize=None)
def basic_invariants(datum: RootDatum, verify: bool = True) -> InvariantFamily:
    n = datum.rank
    if datum.family == "B":
        gens = [t_invariant(n, i) for i in range(1, n + 1)]
        degrees = [2 * i for i in range(1, n + 1)]
        names = [f"t{i}" for i in range(1, n + 1)]
    else:
        gens = [t_invariant(n, i) for i in range(1, n)] + [p_invariant(n)]
        degrees = [2 * i for i in range(1, n)] + [n]
        names = [f"t{i}" for i in range(1, n)] + [f"p{n}"]
    if verify:
        for name, g in zip(names, gens):
            check = is_invariant(datum, g)
            if not check:
                raise InvarianceError(f"{name} is moved by {check.witness}")
    return InvariantFamily(datum, tuple(gens), tuple(degrees), tuple(names))


def check_slice_hypotheses(datum: RootDatum, d: int) -> None:
    """Degree hypotheses shared by rewriting and the saturation bound."""
    if d < 0:
        raise HypothesisError(f"degree must be non-negative (got d={d})")
    if datum.family == "D" and d >= datum.rank:
        raise HypothesisError(
            f"requires n>d≥2 for type D (got n={datum.rank}, d={d})")


def _rows_of_products(polys, n: int, d: int) -> list[list[int]]:
    index = monomial_index(n, d)
    rows = []
    for p in polys:
        row = [0] * len(index)
        for m, c in p.items():
            row[index[m]] = c
        rows.append(row)
    return rows


def ideal_slice(family: InvariantFamily, d: int, check: bool = True) -> GradedLattice:
    """Degree-``d`` piece of the Z-ideal generated by the family, in ω-coordinates.

    Degrees below every generator degree give the zero lattice.
    """
    n = family.rank
    if check:
        check_slice_hypotheses(family.datum, d)
    products = []
    for g, deg in zip(family.omega_generators(), family.degrees):
        if deg <= d:
            for m in monomials_of_degree(n, d - deg):
                products.append(g.shift(m))
    monomials = monomials_of_degree(n, d)
    return GradedLattice.from_rows(d, monomials, _rows_of_products(products, n, d))


def generator_product_span(family: InvariantFamily, d: int) -> GradedLattice:
    """Z-span of the monomials in the generators of total degree ``d``."""
    n = family.rank
    gens = family.omega_generators()
    products = []

    def rec(k: int, remaining: int, current: Polynomial):
        if remaining == 0:
            products.append(current)
            return
        if k == len(gens):
            return
        deg = family.degrees[k]
        power = current
        e = 0
        while e * deg <= remaining:
            rec(k + 1, remaining - e * deg, power)
            power = power * gens[k]
            e += 1

    rec(0, d, Polynomial.constant(1, n, Basis.OMEGA))
    monomials = monomials_of_degree(n, d)
    return GradedLattice.from_rows(d, monomials, _rows_of_products(products, n, d))


def _monomial_action(w: SignedPermutation, m):
    new = [0] * len(m)
    sign = 1
    for j, a in enumerate(m):
        new[w.perm[j]] = a
        if a & 1 and w.signs[j] < 0:
            sign = -sign
    return tuple(new), sign


def fixed_sublattice(datum: RootDatum, d: int) -> GradedLattice:
    """W-fixed sublattice of ``S^d(Λ)``.

    The fixed space is the common kernel of the stacked ``(w - 1)`` over the
    simple reflections.  In e-coordinates those operators are signed monomial
    permutations, so the kernel splits into blocks (one per monomial orbit);
    each block's kernel is computed exactly and the result is intersected with
    the ω-integral lattice.
    """
    n = datum.rank
    gens = datum.generators()
    e_monos = monomials_of_degree(n, d)
    parent = {m: m for m in e_monos}

    def find(m):
        while parent[m] != m:
            parent[m] = parent[parent[m]]
            m = parent[m]
        return m

    images = {}
    for m in e_monos:
        for gi, g in enumerate(gens):
            m2, s = _monomial_action(g, m)
            images[m, gi] = (m2, s)
            a, b = find(m), find(m2)
            if a != b:
                parent[a] = b
    blocks: dict = {}
    for m in e_monos:
        blocks.setdefault(find(m), []).append(m)

    kernel_polys = []
    for block in blocks.values():
        pos = {m: i for i, m in enumerate(block)}
        k = len(block)
        # row m of the stacked operator: coefficient of each image monomial
        rows = []
        for m in block:
            row = [0] * (k * len(gens))
            for gi in range(len(gens)):
                m2, s = images[m, gi]
                row[gi * k + pos[m2]] += s
                row[gi * k + pos[m]] -= 1
            rows.append(row)
        for vec in left_kernel(rows, k * len(gens)):
            kernel_polys.append(Polynomial(dict(zip(block, vec)), n, Basis.E))

    monomials = monomials_of_degree(n, d)
    omega_rows = _rows_of_products([datum.to_omega(p) for p in kernel_polys], n, d)
    return GradedLattice(d, monomials, tuple(tuple(r) for r in saturation_in_ambient(omega_rows, len(monomials))))


def omega_action_matrix(datum: RootDatum, w: SignedPermutation, d: int) -> list[list[int]]:
    """Matrix of ``w`` on ``S^d(Λ)`` in the ω-monomial basis (row = image of a monomial)."""
    n = datum.rank
    act_rows = datum.omega_action(w)
    images = [Polynomial({tuple(int(k == i) for k in range(n)): c
                          for i, c in enumerate(row) if c}, n, Basis.OMEGA)
              for row in act_rows]
    monomials = monomials_of_degree(n, d)
    polys = [substitute_linear(Polynomial.monomial(m, 1, Basis.OMEGA), images) for m in monomials]
    return _rows_of_products(polys, n, d)


def fixed_sublattice_direct(datum: RootDatum, d: int) -> GradedLattice:
    """Same lattice as :func:`fixed_sublattice`, straight from the ω-basis operators."""
    n = datum.rank
    monomials = monomials_of_degree(n, d)
    k = len(monomials)
    gens = datum.generators()
    stacked = [[] for _ in range(k)]
    for g in gens:
        mat = omega_action_matrix(datum, g, d)
        for i in range(k):
            row = list(mat[i])
            row[i] -= 1
            stacked[i].extend(row)
    kern = left_kernel(stacked, k * len(gens))
    return GradedLattice.from_rows(d, monomials, kern)


@dataclass
class HalfIntegerReport:
    family: str
    rank: int
    degree: int
    fixed_rank: int
    span_rank: int
    fixed_over_span: list[int]
    saturated_fixed: GradedLattice = field(repr=False)
    saturated_span: GradedLattice = field(repr=False)
    passed: bool

    def as_dict(self) -> dict:
        twos = [valuation(x, 2) if x else None for x in self.fixed_over_span]
        return {
            "type": self.family,
            "rank": self.rank,
            "degree": self.degree,
            "fixed_rank": self.fixed_rank,
            "span_rank": self.span_rank,
            "fixed_over_span_divisors": self.fixed_over_span,
            "divisor_2_valuations": twos,
            "equal_after_2_saturation": self.passed,
        }


def verify_halfinteger_generation(datum: RootDatum, d: int, cutoff: int | None = None) -> HalfIntegerReport:
    """Compare the W-fixed lattice with the generator-product span after 2-saturation."""
    cutoff = max_degree() if cutoff is None else cutoff
    if d > cutoff:
        raise HypothesisError(f"degree {d} exceeds the configured cutoff {cutoff}")
    if d < 0:
        raise HypothesisError(f"degree must be non-negative (got d={d})")
    family = basic_invariants(datum)
    fixed = fixed_sublattice(datum, d)
    span = generator_product_span(family, d)
    ambient = GradedLattice.full(d, fixed.monomials)
    sat_fixed = p_saturate(ambient, fixed, 2)
    sat_span = p_saturate(ambient, span, 2)
    if fixed.rank:
        divisors = quotient_divisors(fixed, span)
    else:
        divisors = []
    return HalfIntegerReport(
        datum.family, datum.rank, d, fixed.rank, span.rank, divisors,
        sat_fixed, sat_span, sat_fixed == sat_span,
    )


__all__ = [
    "InvariantFamily",
    "InvarianceCheck",
    "InvarianceError",
    "HalfIntegerReport",
    "basic_invariants",
    "check_slice_hypotheses",
    "fixed_sublattice",
    "fixed_sublattice_direct",
    "generator_product_span",
    "ideal_slice",
    "is_invariant",
    "p_invariant",
    "t_invariant",
    "verify_halfinteger_generation",
]

"""Rewriting an M-divisible presentation ``P = sum_i f_{d-2i} t_i``.

Given integer polynomials ``f_{d-2i}`` in the e-variables with ``M | P``, find
``fhat_{d-2i}`` with the same sum and every ``fhat`` divisible by ``M``.  Each
``f`` is split by the parity pattern of its exponents; since the ``t_i`` are
even, the problem decouples per parity class into a problem in the squared
variables ``x_j = e_j^2``, which is solved by an exact integer linear solve.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .invariants import InvariantFamily, t_invariant
from .lattice import LinearSolver, NoSolution, left_kernel
from .poly import (
    Basis,
    NotDivisible,
    Polynomial,
    elementary_symmetric,
    format_polynomial,
    monomial_index,
    monomials_of_degree,
    parse_polynomial,
    scalar_divide_exact,
    variables,
)
from .rootdata import HypothesisError

Parity = tuple[int, ...]


class WitnessNotFound(ArithmeticError):
    """No M-divisible witness exists: either the input broke the precondition or the
    rewriting claim itself fails in this degree."""


def truncation(n: int, d: int) -> int:
    return min(2 * n, d)


def check_rewrite_hypotheses(family: InvariantFamily, d: int) -> None:
    n = family.rank
    fam = family.datum.family
    if fam == "B" and d < 2:
        raise HypothesisError(f"requires d≥2 for type B (got d={d})")
    if fam == "D" and not n > d >= 2:
        raise HypothesisError(f"requires n>d≥2 for type D (got n={n}, d={d})")


@dataclass(frozen=True)
class Presentation:
    """``coeffs[i]`` is ``f_{d-2i}``, the coefficient of ``t_i``."""

    family: InvariantFamily
    degree: int
    coeffs: Mapping[int, Polynomial] = field(default_factory=dict)

    def __post_init__(self):
        n = self.family.rank
        top = truncation(n, self.degree) // 2
        clean = {}
        for i, f in sorted(self.coeffs.items()):
            if self.family.datum.family == "D" and i == n:
                raise HypothesisError(
                    f"p{n} terms are outside the rewriting hypotheses for type D")
            if not 1 <= i <= top:
                raise ValueError(f"generator index {i} outside 1..{top} for d={self.degree}")
            if f.basis is not Basis.E or f.rank != n:
                raise ValueError(f"coefficient of t{i} must be an e-polynomial of rank {n}")
            if not f.is_integral():
                raise ValueError(f"coefficient of t{i} is not over Z")
            if not f.is_homogeneous(self.degree - 2 * i):
                raise ValueError(f"coefficient of t{i} must be homogeneous of degree {self.degree - 2 * i}")
            if f:
                clean[i] = f
        object.__setattr__(self, "coeffs", clean)

    @property
    def rank(self) -> int:
        return self.family.rank

    @property
    def d0(self) -> int:
        return truncation(self.rank, self.degree)

    def indices(self) -> range:
        return range(1, self.d0 // 2 + 1)

    def coefficient(self, i: int) -> Polynomial:
        return self.coeffs.get(i, Polynomial.zero(self.rank))

    def to_json(self) -> dict:
        return {str(i): format_polynomial(f) for i, f in sorted(self.coeffs.items())}


def presentation_from_json(family: InvariantFamily, degree: int, doc: Mapping) -> Presentation:
    n = family.rank
    coeffs = {int(k): parse_polynomial(str(v), n) for k, v in doc.items()}
    return Presentation(family, degree, coeffs)


def load_presentation(family: InvariantFamily, degree: int, path) -> Presentation:
    with open(path) as fh:
        return presentation_from_json(family, degree, json.load(fh))


def expand_presentation(pres: Presentation) -> Polynomial:
    n = pres.rank
    total = Polynomial.zero(n)
    for i, f in pres.coeffs.items():
        total = total + f * t_invariant(n, i)
    return total


# parity decomposition ---------------------------------------------------------

def delta_decompose(f: Polynomial) -> dict[Parity, Polynomial]:
    """Split ``f = sum_δ e^δ f^δ`` with every ``f^δ`` even; keys sorted."""
    parts: dict[Parity, dict] = {}
    for m, c in f.items():
        delta = tuple(a & 1 for a in m)
        even = tuple(a - b for a, b in zip(m, delta))
        parts.setdefault(delta, {})[even] = c
    return {delta: Polynomial(parts[delta], f.rank, f.basis) for delta in sorted(parts)}


def reassemble(parts: Mapping[Parity, Polynomial], rank: int, basis: Basis = Basis.E) -> Polynomial:
    total = Polynomial.zero(rank, basis)
    for delta, g in parts.items():
        total = total + g.shift(delta)
    return total


def halve_exponents(f: Polynomial) -> Polynomial:
    """Even e-polynomial -> polynomial in ``x_j = e_j^2``."""
    out = {}
    for m, c in f.items():
        if any(a & 1 for a in m):
            raise ValueError("polynomial has an odd exponent")
        out[tuple(a // 2 for a in m)] = c
    return Polynomial(out, f.rank, f.basis)


def double_exponents(f: Polynomial) -> Polynomial:
    return Polynomial({tuple(2 * a for a in m): c for m, c in f.items()}, f.rank, f.basis)


# the squared-variable subproblem ----------------------------------------------

@lru_cache(maxsize=None)
def _x_symmetric(n: int, i: int) -> Polynomial:
    return elementary_symmetric(i, variables(n))


@lru_cache(maxsize=None)
def _slice_solver(n: int, degree: int, top: int):
    """Solver for ``sum_{i<=top} h_i s_i(x) = target`` in degree ``degree``."""
    index = monomial_index(n, degree)
    layout = []
    rows = []
    for i in range(1, top + 1):
        s = _x_symmetric(n, i)
        for m in monomials_of_degree(n, degree - i):
            row = [0] * len(index)
            for k, c in s.shift(m).items():
                row[index[k]] = c
            rows.append(row)
            layout.append((i, m))
    return LinearSolver(rows, len(index)) if rows else None, layout


def inner_rewrite(parts: Mapping[int, Polynomial], n: int, degree: int, modulus: int) -> dict[int, Polynomial]:
    """M-divisible ``ghat`` with ``sum ghat_i s_i(x) == sum g_i s_i(x)`` (x-variables).

    ``degree`` is the x-degree of the sum; indices run up to ``min(degree, n)``.
    """
    top = min(degree, n)
    target = Polynomial.zero(n)
    for i, g in parts.items():
        if not 1 <= i <= top:
            raise ValueError(f"index {i} outside 1..{top}")
        target = target + g * _x_symmetric(n, i)
    if target.is_zero():
        return {}
    if all(c % modulus == 0 for g in parts.values() for _, c in g.items()):
        # already divisible: keep the input rather than the solver's witness
        return {i: g for i, g in sorted(parts.items()) if g}
    try:
        reduced = scalar_divide_exact(target, modulus)
    except NotDivisible as exc:
        raise WitnessNotFound(f"{modulus} does not divide the parity component: {exc}") from None
    solver, layout = _slice_solver(n, degree, top)
    if solver is None:
        raise WitnessNotFound("empty ideal slice but nonzero target")
    vec = reduced.coefficient_vector(monomials_of_degree(n, degree))
    try:
        x = solver.solve(vec)
    except NoSolution as exc:
        raise WitnessNotFound(
            f"target/{modulus} is not in the ideal of elementary symmetric polynomials ({exc})"
        ) from None
    out: dict[int, dict] = {}
    for c, (i, m) in zip(x, layout):
        if c:
            out.setdefault(i, {})[m] = modulus * c
    return {i: Polynomial(t, n) for i, t in sorted(out.items())}


def rewrite_divisible(pres: Presentation, modulus: int) -> Presentation:
    """Presentation with the same expansion and every coefficient divisible by ``modulus``."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    check_rewrite_hypotheses(pres.family, pres.degree)
    n, d = pres.rank, pres.degree
    original = expand_presentation(pres)
    scalar_divide_exact(original, modulus)  # raises NotDivisible with a witness term
    if original.is_zero():
        return Presentation(pres.family, d, {})

    by_delta: dict[Parity, dict[int, Polynomial]] = {}
    for i, f in pres.coeffs.items():
        for delta, g in delta_decompose(f).items():
            by_delta.setdefault(delta, {})[i] = halve_exponents(g)

    new_coeffs: dict[int, Polynomial] = {}
    for delta in sorted(by_delta):
        size = sum(delta)
        x_degree = (d - size) // 2
        hat = inner_rewrite(by_delta[delta], n, x_degree, modulus)
        for i, h in hat.items():
            term = double_exponents(h).shift(delta)
            new_coeffs[i] = new_coeffs.get(i, Polynomial.zero(n)) + term

    result = Presentation(pres.family, d, new_coeffs)
    if expand_presentation(result) != original:
        raise AssertionError("rewritten presentation does not expand to the input")
    for i, f in result.coeffs.items():
        scalar_divide_exact(f, modulus)
    return result


# sampling valid inputs ------------------------------------------------------------

@lru_cache(maxsize=None)
def _divisible_kernel(family: InvariantFamily, d: int, modulus: int):
    """Basis of ``{f : modulus | expand(f)}`` over the coefficient unknowns."""
    n = family.rank
    top = truncation(n, d) // 2
    index = monomial_index(n, d)
    layout = []
    rows = []
    for i in range(1, top + 1):
        t = t_invariant(n, i)
        for m in monomials_of_degree(n, d - 2 * i):
            row = [0] * len(index)
            for k, c in t.shift(m).items():
                row[index[k]] = c
            rows.append(row)
            layout.append((i, m))
    k = len(index)
    stacked = rows + [[modulus * int(a == b) for b in range(k)] for a in range(k)]
    kernel = left_kernel(stacked, k)
    return [v[:len(rows)] for v in kernel], layout


def sample_divisible_presentations(family: InvariantFamily, d: int, modulus: int,
                                   count: int, rng: random.Random,
                                   spread: int = 2) -> list[Presentation]:
    """Random presentations with ``modulus | P``, drawn from the kernel of the
    expansion map reduced mod ``modulus`` (independent of the rewriting path)."""
    basis, layout = _divisible_kernel(family, d, modulus)
    n = family.rank
    out = []
    for _ in range(count):
        vec = [0] * len(layout)
        for b in basis:
            c = rng.randint(-spread, spread)
            if c:
                for j, x in enumerate(b):
                    if x:
                        vec[j] += c * x
        coeffs: dict[int, dict] = {}
        for c, (i, m) in zip(vec, layout):
            if c:
                coeffs.setdefault(i, {})[m] = c
        out.append(Presentation(family, d, {i: Polynomial(t, n) for i, t in coeffs.items()}))
    return out


def qsquared_fixture(family: InvariantFamily) -> Presentation:
    """B3, d=6: ``f_4 = (e1e2+e1e3+e2e3)^2``, ``f_2 = (e1+e2+e3)^2``."""
    n = family.rank
    q = parse_polynomial("e1*e2 + e1*e3 + e2*e3", n)
    lin = parse_polynomial("e1 + e2 + e3", n)
    return Presentation(family, 6, {1: q * q, 2: lin * lin})

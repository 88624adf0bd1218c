"""Root data of types B_n and D_n: weight lattice, basis change, Weyl group.

Weights and the fundamental weights are kept in orthogonal coordinates
``e_1..e_n`` with dyadic entries.  The Weyl group is realised as signed
permutations (all sign patterns for B, even ones for D).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterator, Sequence

from .poly import Basis, Polynomial, substitute_linear

Weight = tuple[Fraction, ...]

MIN_RANK = {"B": 3, "D": 4}


def max_rank() -> int:
    """Largest rank allowed for exhaustive Weyl enumeration (env override)."""
    return int(os.environ.get("WEYL_TORSION_MAX_RANK", "5"))


class HypothesisError(ValueError):
    """Input outside the rank/degree hypotheses of a result."""


@dataclass(frozen=True)
class SignedPermutation:
    """``e_j -> signs[j] * e_{perm[j]}`` (0-based)."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad signs {self.signs}")

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    @property
    def rank(self) -> int:
        return len(self.perm)

    @property
    def negatives(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """``self ∘ other`` (apply ``other`` first)."""
        perm = tuple(self.perm[other.perm[j]] for j in range(self.rank))
        signs = tuple(other.signs[j] * self.signs[other.perm[j]] for j in range(self.rank))
        return SignedPermutation(perm, signs)

    __matmul__ = compose

    def inverse(self) -> "SignedPermutation":
        n = self.rank
        perm = [0] * n
        signs = [1] * n
        for j in range(n):
            perm[self.perm[j]] = j
            signs[self.perm[j]] = self.signs[j]
        return SignedPermutation(tuple(perm), tuple(signs))

    def apply_vector(self, v: Sequence) -> tuple:
        out = [0] * self.rank
        for j, x in enumerate(v):
            out[self.perm[j]] = self.signs[j] * x
        return tuple(out)

    def images(self, basis: Basis = Basis.E) -> list[Polynomial]:
        n = self.rank
        return [self.signs[j] * Polynomial.variable(self.perm[j], n, basis) for j in range(n)]

    def __str__(self):
        parts = []
        for j in range(self.rank):
            s = "-" if self.signs[j] < 0 else ""
            parts.append(f"e{j + 1}->{s}e{self.perm[j] + 1}")
        return "[" + ", ".join(parts) + "]"


def act(w: SignedPermutation, p: Polynomial) -> Polynomial:
    """``(w.p)(x) = p(w^-1 x)``; on e-variables this is ``e_j -> signs[j] e_{perm[j]}``."""
    if p.basis is not Basis.E:
        raise ValueError("act needs a polynomial in the e-basis; convert first")
    if p.rank != w.rank:
        raise ValueError(f"rank mismatch: {p.rank} vs {w.rank}")
    out = {}
    for m, c in p.items():
        new = [0] * w.rank
        sign = 1
        for j, a in enumerate(m):
            new[w.perm[j]] = a
            if a & 1 and w.signs[j] < 0:
                sign = -sign
        out[tuple(new)] = sign * c
    return Polynomial(out, p.rank, Basis.E)


def _fr(x) -> Fraction:
    return Fraction(x)


@dataclass(frozen=True)
class RootDatum:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in MIN_RANK:
            raise HypothesisError(f"unsupported type {self.family!r}; only B and D")
        lo = MIN_RANK[self.family]
        if self.rank < lo:
            raise HypothesisError(
                f"type {self.family}_n requires n≥{lo} (got n={self.rank})")

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @cached_property
    def omega_in_e(self) -> tuple[tuple[Fraction, ...], ...]:
        """Row ``j`` is ``ω_{j+1}`` in e-coordinates."""
        n = self.rank
        rows = []
        half = Fraction(1, 2)
        last_full = n - 1 if self.family == "B" else n - 2
        for i in range(last_full):
            rows.append(tuple(_fr(1) if k <= i else _fr(0) for k in range(n)))
        if self.family == "D":
            rows.append(tuple(half if k < n - 1 else -half for k in range(n)))
        rows.append(tuple(half for _ in range(n)))
        return tuple(rows)

    @cached_property
    def e_in_omega(self) -> tuple[tuple[int, ...], ...]:
        """Row ``j`` is ``e_{j+1}`` in ω-coordinates (always integral)."""
        inv = _invert(self.omega_in_e)
        rows = []
        for r in inv:
            if any(x.denominator != 1 for x in r):
                raise AssertionError("e-basis is not integral in the weight lattice")
            rows.append(tuple(int(x) for x in r))
        return tuple(rows)

    @property
    def weyl_order(self) -> int:
        n = self.rank
        return 2 ** n * factorial(n) if self.family == "B" else 2 ** (n - 1) * factorial(n)

    def contains_sign_pattern(self, signs: Sequence[int]) -> bool:
        return self.family == "B" or sum(1 for s in signs if s < 0) % 2 == 0

    def generators(self) -> list[SignedPermutation]:
        """Simple reflections."""
        n = self.rank
        gens = []
        for i in range(n - 1):
            perm = list(range(n))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            gens.append(SignedPermutation(tuple(perm), (1,) * n))
        if self.family == "B":
            gens.append(SignedPermutation(tuple(range(n)), (1,) * (n - 1) + (-1,)))
        else:
            perm = list(range(n))
            perm[n - 2], perm[n - 1] = n - 1, n - 2
            gens.append(SignedPermutation(tuple(perm), (1,) * (n - 2) + (-1, -1)))
        return gens

    # weights ---------------------------------------------------------------
    def to_omega_coords(self, weight: Sequence) -> tuple[Fraction, ...]:
        w = [Fraction(x) for x in weight]
        return tuple(sum((w[j] * self.e_in_omega[j][i] for j in range(self.rank)), Fraction(0))
                     for i in range(self.rank))

    def in_lattice(self, weight: Sequence) -> bool:
        return len(weight) == self.rank and all(
            c.denominator == 1 for c in self.to_omega_coords(weight))

    def omega_coords(self, weight: Sequence) -> tuple[int, ...]:
        c = self.to_omega_coords(weight)
        if any(x.denominator != 1 for x in c):
            raise ValueError(f"weight {format_weight(weight)} is not in the weight lattice")
        return tuple(int(x) for x in c)

    def fundamental_weight(self, j: int) -> Weight:
        """``ω_j`` for 1-based ``j``."""
        return self.omega_in_e[j - 1]

    # polynomials -------------------------------------------------------------
    @cached_property
    def _omega_images_in_e(self) -> list[Polynomial]:
        n = self.rank
        return [Polynomial({tuple(int(k == j) for k in range(n)): c
                            for j, c in enumerate(row) if c}, n, Basis.E)
                for row in self.omega_in_e]

    @cached_property
    def _e_images_in_omega(self) -> list[Polynomial]:
        n = self.rank
        return [Polynomial({tuple(int(k == i) for k in range(n)): c
                            for i, c in enumerate(row) if c}, n, Basis.OMEGA)
                for row in self.e_in_omega]

    def to_omega(self, p: Polynomial) -> Polynomial:
        """Rewrite an e-polynomial in ω-variables."""
        if p.basis is Basis.OMEGA:
            return p
        return substitute_linear(p, self._e_images_in_omega)

    def to_e(self, p: Polynomial) -> Polynomial:
        """Rewrite an ω-polynomial in e-variables (dyadic coefficients appear)."""
        if p.basis is Basis.E:
            return p
        return substitute_linear(p, self._omega_images_in_e)

    def omega_action(self, w: SignedPermutation) -> tuple[tuple[int, ...], ...]:
        """Row ``j``: ``w(ω_j)`` in ω-coordinates."""
        return tuple(self.omega_coords(w.apply_vector(row)) for row in self.omega_in_e)


def _invert(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c])
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def make_root_datum(family: str, n: int) -> RootDatum:
    family = family.upper()
    datum = RootDatum(family, n)
    # omegaInE @ eInOmega == I is part of the contract
    om, eo = datum.omega_in_e, datum.e_in_omega
    for i in range(n):
        for j in range(n):
            if sum(om[i][k] * eo[k][j] for k in range(n)) != int(i == j):
                raise AssertionError("basis change matrices are not inverse")
    return datum


def weyl_elements(datum: RootDatum) -> Iterator[SignedPermutation]:
    """Every Weyl group element exactly once."""
    n = datum.rank
    if n > max_rank():
        raise HypothesisError(
            f"exhaustive Weyl enumeration is limited to rank ≤ {max_rank()} (got {n})")
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            if datum.contains_sign_pattern(signs):
                yield SignedPermutation(perm, signs)


def orbit(datum: RootDatum, weight: Sequence) -> frozenset[Weight]:
    """W-orbit of a weight (closure under the simple reflections)."""
    start = tuple(Fraction(x) for x in weight)
    if not datum.in_lattice(start):
        raise ValueError(f"weight {format_weight(start)} is not in the weight lattice")
    gens = datum.generators()
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for g in gens:
            u = g.apply_vector(v)
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return frozenset(seen)


def parse_weight(text: str) -> Weight:
    return tuple(Fraction(x.strip()) for x in text.split(","))


def format_weight(weight: Sequence) -> str:
    return ",".join(str(Fraction(x)) for x in weight)

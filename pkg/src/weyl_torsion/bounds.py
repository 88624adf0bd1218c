"""Torsion annihilator values for the gamma filtration and Chow groups of G/B."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod

NOTE = ("(i-1)!*2^(i+1) annihilates torsion of the i-th gamma graded piece; "
        "(d-1)!*prod_{i=2..d} (i-1)!*2^(i+1) annihilates torsion of CH^d. "
        "Formula values only; applicability per type is not asserted.")


def gamma_bound(i: int) -> int:
    if i < 2:
        raise ValueError(f"gamma bound needs i ≥ 2 (got {i})")
    return factorial(i - 1) * 2 ** (i + 1)


def chow_bound(d: int) -> int:
    if d < 2:
        raise ValueError(f"Chow bound needs d ≥ 2 (got {d})")
    return factorial(d - 1) * prod(gamma_bound(i) for i in range(2, d + 1))


@dataclass(frozen=True)
class BoundRow:
    index: int
    gamma: int
    chow: int

    def as_dict(self) -> dict:
        return {"index": self.index, "gamma_bound": self.gamma, "chow_bound": self.chow}


def bounds_table(max_degree: int) -> list[BoundRow]:
    return [BoundRow(k, gamma_bound(k), chow_bound(k)) for k in range(2, max_degree + 1)]

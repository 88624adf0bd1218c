"""Exact integer matrix algebra: HNF, SNF, integer solving and lattice operations.

Matrices are plain row-major ``list[list[int]]``.  Everything is exact with
Python's arbitrary-precision ints.

HNF convention (row style): nonzero rows first, each row's leading entry
(pivot) is positive and strictly to the right of the previous row's pivot,
and every entry above a pivot lies in ``[0, pivot)``.  So
``hnf([[2, 4], [1, 3]])`` is ``[[1, 1], [0, 2]]``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

Matrix = list[list[int]]
Vector = list[int]


class NoSolution(ValueError):
    """``x @ A == b`` has no integer solution; ``column`` is where it broke."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


class NotMember(ValueError):
    pass


class NotSublattice(ValueError):
    pass


# basic helpers ---------------------------------------------------------------

def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def copy_matrix(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in a]


def transpose(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*a)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    bt = transpose(b)
    if not bt:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: Sequence[int], a: Sequence[Sequence[int]], ncols: int) -> Vector:
    out = [0] * ncols
    for c, row in zip(v, a):
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return out


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    m = copy_matrix(a)
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_hnf(h: Sequence[Sequence[int]]) -> bool:
    last = -1
    seen_zero = False
    pivots = []
    for r in h:
        nz = next((j for j, x in enumerate(r) if x), None)
        if nz is None:
            seen_zero = True
            continue
        if seen_zero or nz <= last or r[nz] <= 0:
            return False
        pivots.append(nz)
        last = nz
    for i, c in enumerate(pivots):
        p = h[i][c]
        if any(not 0 <= h[k][c] < p for k in range(i)):
            return False
    return True


# Hermite normal form ----------------------------------------------------------

def _combine(ri, rj, x, y, u, v):
    return [x * a + y * b for a, b in zip(ri, rj)], [u * a + v * b for a, b in zip(ri, rj)]


def _axpy(row, q, other):
    # row - q*other
    return [a - q * b for a, b in zip(row, other)]


def _hnf_core(rows: Sequence[Sequence[int]], ncols: int, transform: bool):
    a = copy_matrix(rows)
    m = len(a)
    u = identity(m) if transform else None
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == m:
            break
        nz = [i for i in range(r, m) if a[i][c]]
        if not nz:
            continue
        best = min(nz, key=lambda i: abs(a[i][c]))
        if best != r:
            a[r], a[best] = a[best], a[r]
            if transform:
                u[r], u[best] = u[best], u[r]
        for i in range(r + 1, m):
            if not a[i][c]:
                continue
            p, b = a[r][c], a[i][c]
            if b % p == 0:
                q = b // p
                a[i] = _axpy(a[i], q, a[r])
                if transform:
                    u[i] = _axpy(u[i], q, u[r])
            else:
                g, x, y = xgcd(p, b)
                s, t = -b // g, p // g
                a[r], a[i] = _combine(a[r], a[i], x, y, s, t)
                if transform:
                    u[r], u[i] = _combine(u[r], u[i], x, y, s, t)
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            if transform:
                u[r] = [-x for x in u[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = _axpy(a[i], q, a[r])
                if transform:
                    u[i] = _axpy(u[i], q, u[r])
        pivots.append(c)
        r += 1
    return a, u, pivots


def hnf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row HNF with transform: returns ``(H, U)`` with ``U @ m == H`` and ``det U == ±1``."""
    ncols = len(m[0]) if m else 0
    h, u, _ = _hnf_core(m, ncols, True)
    return h, u


def hnf_basis(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Nonzero rows of the HNF (a canonical basis of the row lattice)."""
    h, _, pivots = _hnf_core(rows, ncols, False)
    return h[:len(pivots)]


def left_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis of ``{x : x @ a == 0}`` over Z (always a saturated lattice)."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    h, u, pivots = _hnf_core(a, ncols, True)
    return hnf_basis(u[len(pivots):], len(a)) if len(pivots) < len(a) else []


def right_kernel(a: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis (as rows) of ``{x : a @ x == 0}`` over Z."""
    if not a:
        return identity(ncols)
    return left_kernel(transpose(a), len(a))


# Smith normal form -------------------------------------------------------------

def snf(m: Sequence[Sequence[int]], inverse: bool = False):
    """Smith form ``(S, U, V)`` with ``U @ m @ V == S``.

    ``S`` is diagonal with non-negative ``d1 | d2 | ...``.  With ``inverse=True``
    a fourth matrix ``V^-1`` is also returned.
    """
    a = copy_matrix(m)
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity(nr)
    v = identity(nc)
    vinv = identity(nc) if inverse else None

    def col_op(j, t, q):
        # column j -= q * column t
        for row in a:
            row[j] -= q * row[t]
        for row in v:
            row[j] -= q * row[t]
        if inverse:
            vinv[t] = [x + q * y for x, y in zip(vinv[t], vinv[j])]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        if inverse:
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    for t in range(min(nr, nc)):
        cands = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not cands:
            break
        _, i0, j0 = min(cands)
        if i0 != t:
            row_swap(t, i0)
        if j0 != t:
            col_swap(t, j0)
        while True:
            dirty = False
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = _axpy(a[i], q, a[t])
                    u[i] = _axpy(u[i], q, u[t])
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_op(j, t, a[t][j] // p)
                    if a[t][j]:
                        dirty = True
            if dirty:
                cands = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
                _, i0, j0 = min(cands)
                if i0 != t:
                    row_swap(t, i0)
                if j0 != t:
                    col_swap(t, j0)
                continue
            bad = next((i for i in range(t + 1, nr)
                        if any(a[i][j] % p for j in range(t + 1, nc))), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    if inverse:
        return a, u, v, vinv
    return a, u, v


def smith_diagonal(m: Sequence[Sequence[int]]) -> list[int]:
    s = snf(m)[0]
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def is_snf(s: Sequence[Sequence[int]]) -> bool:
    nr = len(s)
    nc = len(s[0]) if nr else 0
    for i in range(nr):
        for j in range(nc):
            if i != j and s[i][j]:
                return False
    diag = [s[i][i] for i in range(min(nr, nc))]
    if any(x < 0 for x in diag):
        return False
    for x, y in zip(diag, diag[1:]):
        if x == 0 and y != 0:
            return False
        if x and y % x:
            return False
    return True


# solving ----------------------------------------------------------------------

class LinearSolver:
    """Solve ``x @ A == b`` over Z for many right-hand sides with one HNF."""

    def __init__(self, a: Sequence[Sequence[int]], ncols: int | None = None):
        self.nrows = len(a)
        self.ncols = ncols if ncols is not None else (len(a[0]) if a else 0)
        h, u, pivots = _hnf_core(a, self.ncols, True)
        self.h = h[:len(pivots)]
        self.u = u
        self.pivots = pivots

    def coordinates(self, b: Sequence[int]) -> Vector:
        """``y`` with ``y @ H == b`` for the stored HNF rows ``H``."""
        if len(b) != self.ncols:
            raise ValueError(f"right-hand side has length {len(b)}, expected {self.ncols}")
        return hnf_coordinates(self.h, self.pivots, b)

    def solve(self, b: Sequence[int]) -> Vector:
        y = self.coordinates(b)
        return vecmat(y, self.u[:len(self.pivots)], self.nrows)


def hnf_coordinates(h: Sequence[Sequence[int]], pivots: Sequence[int], b: Sequence[int]) -> Vector:
    res = list(b)
    y = []
    start = 0
    for row, c in zip(h, pivots):
        for j in range(start, c):
            if res[j]:
                raise NoSolution(f"column {j} is outside the row span", j)
        val = res[c]
        p = row[c]
        if val % p:
            raise NoSolution(f"pivot {p} in column {c} does not divide {val}", c)
        q = val // p
        y.append(q)
        if q:
            for j in range(c, len(res)):
                if row[j]:
                    res[j] -= q * row[j]
        start = c + 1
    for j in range(start, len(res)):
        if res[j]:
            raise NoSolution(f"column {j} is outside the row span", j)
    return y


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> Vector:
    """Integer ``x`` with ``x @ a == b``; raises :class:`NoSolution` otherwise."""
    ncols = len(b)
    if not a:
        if any(b):
            raise NoSolution("empty system with nonzero right-hand side")
        return []
    return LinearSolver(a, ncols).solve(b)


def snf_solvable(a: Sequence[Sequence[int]], b: Sequence[int]) -> bool:
    """Independent solvability test through the Smith form: ``y @ S == b @ V``."""
    if not a:
        return not any(b)
    s, _, v = snf(a)
    bv = vecmat(b, v, len(v))
    for j, x in enumerate(bv):
        d = s[j][j] if j < len(s) else 0
        if d == 0:
            if x:
                return False
        elif x % d:
            return False
    return True


# graded lattices ----------------------------------------------------------------

@dataclass(frozen=True)
class GradedLattice:
    """A subgroup of the degree-``degree`` piece, as HNF rows over ``monomials``."""

    degree: int
    monomials: tuple
    basis: tuple

    @classmethod
    def from_rows(cls, degree: int, monomials: Sequence, rows: Iterable[Sequence[int]]):
        monomials = tuple(monomials)
        rows = [list(r) for r in rows]
        for r in rows:
            if len(r) != len(monomials):
                raise ValueError(f"row of length {len(r)} for {len(monomials)} monomials")
        h = hnf_basis(rows, len(monomials))
        return cls(degree, monomials, tuple(tuple(r) for r in h))

    @classmethod
    def full(cls, degree: int, monomials: Sequence):
        n = len(monomials)
        return cls(degree, tuple(monomials), tuple(tuple(r) for r in identity(n)))

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.basis]

    def coordinates(self, v: Sequence[int]) -> Vector:
        return hnf_coordinates(self.basis, self.pivots, v)

    def __contains__(self, v) -> bool:
        try:
            self.coordinates(v)
        except NoSolution:
            return False
        return True

    def matrix(self) -> Matrix:
        return [list(r) for r in self.basis]


def lattice_member(lattice: GradedLattice, v: Sequence[int]) -> Vector:
    """Integer combination of ``lattice.basis`` equal to ``v``, or :class:`NotMember`."""
    if len(v) != lattice.dim:
        raise ValueError(f"vector length {len(v)} != lattice dimension {lattice.dim}")
    try:
        return lattice.coordinates(v)
    except NoSolution as exc:
        raise NotMember(f"vector is not in the lattice ({exc})") from None


def _check_compatible(ambient: GradedLattice, sub: GradedLattice):
    if ambient.monomials != sub.monomials:
        raise ValueError("lattices live over different monomial bases")


def relative_coordinates(ambient: GradedLattice, sub: GradedLattice) -> Matrix:
    _check_compatible(ambient, sub)
    out = []
    for r in sub.basis:
        try:
            out.append(ambient.coordinates(r))
        except NoSolution:
            raise NotSublattice("sub is not contained in ambient") from None
    return out


def quotient_divisors(ambient: GradedLattice, sub: GradedLattice) -> list[int]:
    """Elementary divisors of ``ambient / sub``, one per ambient rank.

    A ``0`` stands for a free summand Z (ranks differ).
    """
    coords = relative_coordinates(ambient, sub)
    if not coords:
        return [0] * ambient.rank
    diag = [d for d in smith_diagonal(coords) if d]
    return diag + [0] * (ambient.rank - len(diag))


def _left_kernel_mod_p(rows: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    k = len(rows)
    ncols = len(rows[0]) if k else 0
    aug = [[x % p for x in r] + [int(i == j) for j in range(k)] for i, r in enumerate(rows)]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, k) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(k):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[ncols:] for row in aug[r:]]


def p_saturate(ambient: GradedLattice, sub: GradedLattice, p: int) -> GradedLattice:
    """Smallest ``L`` with ``sub <= L <= ambient`` and ``p*v in L, v in ambient => v in L``."""
    coords = relative_coordinates(ambient, sub)
    a = ambient.rank
    while coords:
        kernel = _left_kernel_mod_p(coords, p)
        if not kernel:
            break
        new = []
        for c in kernel:
            w = vecmat(c, coords, a)
            assert all(x % p == 0 for x in w)
            new.append([x // p for x in w])
        coords = hnf_basis(coords + new, a)
    rows = [vecmat(c, ambient.basis, ambient.dim) for c in coords]
    return GradedLattice.from_rows(ambient.degree, ambient.monomials, rows)


def saturation_in_ambient(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of ``(Q-span of rows) ∩ Z^ncols`` via the Smith form's ``V^-1``."""
    rows = hnf_basis(rows, ncols)
    if not rows:
        return []
    s, _, _, vinv = snf(rows, inverse=True)
    r = sum(1 for i in range(min(len(s), ncols)) if s[i][i])
    return hnf_basis(vinv[:r], ncols)


def lattice_sum(a: GradedLattice, b: GradedLattice) -> GradedLattice:
    _check_compatible(a, b)
    return GradedLattice.from_rows(a.degree, a.monomials, list(a.basis) + list(b.basis))


def valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


# golden-file matrix format ---------------------------------------------------------

def format_matrix(a: Sequence[Sequence[int]], ncols: int | None = None) -> str:
    ncols = ncols if ncols is not None else (len(a[0]) if a else 0)
    lines = [f"{len(a)} {ncols}"]
    lines += [" ".join(str(x) for x in r) for r in a]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> Matrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    nr, nc = (int(x) for x in lines[0].split())
    rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    if len(rows) != nr or any(len(r) != nc for r in rows):
        raise ValueError(f"matrix body does not match header {nr} {nc}")
    return rows


def write_matrix(path: str | os.PathLike, a: Sequence[Sequence[int]], ncols: int | None = None):
    with open(path, "w") as fh:
        fh.write(format_matrix(a, ncols))


def read_matrix(path: str | os.PathLike) -> Matrix:
    with open(path) as fh:
        return parse_matrix(fh.read())

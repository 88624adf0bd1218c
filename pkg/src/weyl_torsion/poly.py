"""Exact sparse multivariate polynomials over Z, Z[1/2] and Q.

Coefficients are plain ``int`` for Z, :class:`Dyadic` for Z[1/2] and
``fractions.Fraction`` for Q.  Every arithmetic result is pushed back into the
smallest of the three rings that holds it (see :func:`coerce`), so integer
polynomials never leave native ints.

Monomials are exponent tuples.  The global monomial order is graded
lexicographic, and "sorted" always means *descending* in that order; the same
order fixes the column order of every lattice matrix built from polynomials.
"""

from __future__ import annotations

import ast
import enum
import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence, Union

Monomial = tuple[int, ...]


class Dyadic:
    """The number ``odd * 2**exp`` with ``odd`` odd (or zero, with ``exp == 0``)."""

    __slots__ = ("odd", "exp")

    def __init__(self, odd: int, exp: int = 0):
        if odd == 0:
            exp = 0
        else:
            while odd % 2 == 0:
                odd //= 2
                exp += 1
        self.odd = odd
        self.exp = exp

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        den = q.denominator
        k = den.bit_length() - 1
        if den != 1 << k:
            raise ValueError(f"{q} is not dyadic")
        return cls(q.numerator, -k)

    @property
    def numerator(self) -> int:
        return self.odd << self.exp if self.exp >= 0 else self.odd

    @property
    def denominator(self) -> int:
        return 1 << -self.exp if self.exp < 0 else 1

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def _binop(self, other, op):
        if isinstance(other, (Dyadic, int, Fraction)):
            return coerce(op(as_fraction(self), as_fraction(other)))
        return NotImplemented

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binop(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        if isinstance(other, Dyadic):
            return coerce(Dyadic(self.odd * other.odd, self.exp + other.exp))
        if isinstance(other, int):
            return coerce(Dyadic(self.odd * other, self.exp))
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        return Dyadic(-self.odd, self.exp)

    def __bool__(self):
        return self.odd != 0

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.odd == other.odd and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            return as_fraction(self) == other
        return NotImplemented

    def __hash__(self):
        return hash(as_fraction(self))

    def __lt__(self, other):
        return as_fraction(self) < as_fraction(other)

    def __repr__(self):
        return f"Dyadic({self.odd}, {self.exp})"

    def __str__(self):
        return format_coefficient(self)


Coefficient = Union[int, Dyadic, Fraction]


def as_fraction(x: Coefficient) -> Fraction:
    if isinstance(x, Dyadic):
        return x.to_fraction()
    return Fraction(x)


def coerce(x: Coefficient) -> Coefficient:
    """Return ``x`` in the smallest of Z, Z[1/2], Q containing it."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Dyadic):
        if x.exp >= 0:
            return x.odd << x.exp
        return x
    q = Fraction(x)
    if q.denominator == 1:
        return q.numerator
    den = q.denominator
    if den & (den - 1) == 0:
        return Dyadic.from_fraction(q)
    return q


def ring_of(x: Coefficient) -> str:
    x = coerce(x)
    if isinstance(x, int):
        return "Z"
    if isinstance(x, Dyadic):
        return "Z[1/2]"
    return "Q"


_RING_ORDER = {"Z": 0, "Z[1/2]": 1, "Q": 2}


def format_coefficient(c: Coefficient) -> str:
    c = coerce(c)
    if isinstance(c, Dyadic):
        return f"{c.odd}/2^{-c.exp}"
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


class Basis(enum.Enum):
    E = "e"
    OMEGA = "w"

    @property
    def prefix(self) -> str:
        return self.value


class NotDivisible(ArithmeticError):
    """Raised when an integer does not divide every coefficient."""

    def __init__(self, modulus: int, witness: Monomial, coefficient: Coefficient):
        super().__init__(
            f"{modulus} does not divide coefficient {coefficient} of monomial {witness}"
        )
        self.modulus = modulus
        self.witness = witness
        self.coefficient = coefficient


def order_key(m: Monomial):
    return (sum(m), m)


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple[Monomial, ...]:
    """All exponent vectors of length ``n`` and total degree ``d``, grlex-descending."""
    if d < 0:
        return ()
    if n == 0:
        return ((),) if d == 0 else ()
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    assert len(out) == comb(n + d - 1, d) if n else True
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_of_degree(n, d))}


class Polynomial:
    """Immutable sparse polynomial in ``rank`` variables of a fixed basis."""

    __slots__ = ("rank", "basis", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coefficient] | None = None,
                 rank: int = 1, basis: Basis = Basis.E):
        clean: dict[Monomial, Coefficient] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != rank:
                    raise ValueError(f"monomial {m} does not have rank {rank}")
                if any(a < 0 for a in m):
                    raise ValueError(f"negative exponent in {m}")
                c = coerce(c)
                if c:
                    clean[tuple(m)] = c
        self.rank = rank
        self.basis = basis
        self._terms = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, rank: int, basis: Basis = Basis.E) -> "Polynomial":
        return cls({}, rank, basis)

    @classmethod
    def constant(cls, c: Coefficient, rank: int, basis: Basis = Basis.E) -> "Polynomial":
        return cls({(0,) * rank: c}, rank, basis)

    @classmethod
    def variable(cls, j: int, rank: int, basis: Basis = Basis.E) -> "Polynomial":
        """The ``j``-th variable, 0-based."""
        if not 0 <= j < rank:
            raise IndexError(f"variable index {j} out of range for rank {rank}")
        m = [0] * rank
        m[j] = 1
        return cls({tuple(m): 1}, rank, basis)

    @classmethod
    def monomial(cls, m: Sequence[int], c: Coefficient = 1,
                 basis: Basis = Basis.E) -> "Polynomial":
        return cls({tuple(m): c}, len(m), basis)

    @classmethod
    def from_vector(cls, vector: Sequence[Coefficient], monomials: Sequence[Monomial],
                    rank: int, basis: Basis = Basis.E) -> "Polynomial":
        return cls(dict(zip(monomials, vector)), rank, basis)

    # accessors
    @property
    def terms(self) -> dict[Monomial, Coefficient]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_terms(self) -> list[tuple[Monomial, Coefficient]]:
        return sorted(self._terms.items(), key=lambda t: order_key(t[0]), reverse=True)

    def coefficient(self, m: Sequence[int]) -> Coefficient:
        return self._terms.get(tuple(m), 0)

    def coefficient_vector(self, monomials: Sequence[Monomial]) -> list[Coefficient]:
        return [self._terms.get(m, 0) for m in monomials]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(m) for m in self._terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    @property
    def ring(self) -> str:
        """Smallest of ``"Z"``, ``"Z[1/2]"``, ``"Q"`` holding every coefficient."""
        best = "Z"
        for c in self._terms.values():
            r = ring_of(c)
            if _RING_ORDER[r] > _RING_ORDER[best]:
                best = r
        return best

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        if other.basis != self.basis:
            raise ValueError(f"basis mismatch: {self.basis.name} vs {other.basis.name}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction, Dyadic)):
            return Polynomial.constant(other, self.rank, self.basis)
        self._check(other)
        return other

    # arithmetic
    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out, self.rank, self.basis)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms.items()}, self.rank, self.basis)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Dyadic)):
            return Polynomial({m: c * other for m, c in self._terms.items()},
                              self.rank, self.basis)
        self._check(other)
        out: dict[Monomial, Coefficient] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out, self.rank, self.basis)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.rank, self.basis)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, m: Sequence[int]) -> "Polynomial":
        """Multiply by the monomial with exponent vector ``m``."""
        return Polynomial({tuple(a + b for a, b in zip(k, m)): c
                           for k, c in self._terms.items()}, self.rank, self.basis)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Dyadic)):
            other = Polynomial.constant(other, self.rank, self.basis)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.rank == other.rank and self.basis == other.basis
                and self._terms == other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, self.basis,
                               frozenset((m, as_fraction(c)) for m, c in self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, rank={self.rank}, basis={self.basis.name})"

    def __str__(self):
        return format_polynomial(self)


# module-level operations --------------------------------------------------

def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p * q


def graded_part(p: Polynomial, d: int) -> Polynomial:
    return Polynomial({m: c for m, c in p.items() if sum(m) == d}, p.rank, p.basis)


def homogeneous_components(p: Polynomial) -> dict[int, Polynomial]:
    out: dict[int, dict] = {}
    for m, c in p.items():
        out.setdefault(sum(m), {})[m] = c
    return {d: Polynomial(t, p.rank, p.basis) for d, t in sorted(out.items())}


def scalar_divide_exact(p: Polynomial, m: int) -> Polynomial:
    """``p / m`` for an integer polynomial, or :class:`NotDivisible` naming the first bad term."""
    if m < 1:
        raise ValueError("modulus must be a positive integer")
    if not p.is_integral():
        raise TypeError("scalar_divide_exact needs a polynomial over Z")
    out = {}
    for mono, c in p.sorted_terms():
        if c % m:
            raise NotDivisible(m, mono, c)
        out[mono] = c // m
    return Polynomial(out, p.rank, p.basis)


def substitute_linear(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Apply the ring homomorphism sending variable ``j`` to ``images[j]``."""
    if len(images) != p.rank:
        raise ValueError(f"need {p.rank} images, got {len(images)}")
    if not images:
        return p
    target = images[0]
    for img in images[1:]:
        target._check(img)
    powers: list[list[Polynomial]] = [[Polynomial.constant(1, target.rank, target.basis)]
                                      for _ in images]

    def power(j: int, k: int) -> Polynomial:
        cache = powers[j]
        while len(cache) <= k:
            cache.append(cache[-1] * images[j])
        return cache[k]

    out: dict[Monomial, Coefficient] = {}
    for mono, c in p.items():
        term = Polynomial.constant(c, target.rank, target.basis)
        for j, a in enumerate(mono):
            if a:
                term = term * power(j, a)
        for k, v in term.items():
            out[k] = out.get(k, 0) + v
    return Polynomial(out, target.rank, target.basis)


def elementary_symmetric(k: int, args: Sequence[Polynomial]) -> Polynomial:
    """The ``k``-th elementary symmetric polynomial evaluated at ``args``."""
    if not 1 <= k <= len(args):
        raise ValueError(f"k={k} out of range 1..{len(args)}")
    first = args[0]
    total = Polynomial.zero(first.rank, first.basis)
    for combo in itertools.combinations(args, k):
        term = combo[0]
        for f in combo[1:]:
            term = term * f
        total = total + term
    return total


def power_sum_check(xs: Sequence[Polynomial]) -> bool:
    """Newton identity ``s1^2 - 2 s2 == sum x_i^2``."""
    s1 = elementary_symmetric(1, xs)
    s2 = elementary_symmetric(2, xs)
    rhs = Polynomial.zero(xs[0].rank, xs[0].basis)
    for x in xs:
        rhs = rhs + x * x
    return s1 * s1 - 2 * s2 == rhs


# text form -----------------------------------------------------------------

def _format_monomial(m: Monomial, prefix: str) -> str:
    parts = []
    for j, a in enumerate(m):
        if a == 1:
            parts.append(f"{prefix}{j + 1}")
        elif a > 1:
            parts.append(f"{prefix}{j + 1}^{a}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text: grlex-descending terms, e.g. ``2*e1^2*e2 - e3^3``."""
    if p.is_zero():
        return "0"
    chunks = []
    for mono, c in p.sorted_terms():
        neg = as_fraction(c) < 0
        mag = -c if neg else c
        body = _format_monomial(mono, p.basis.prefix)
        if not body:
            text = format_coefficient(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{format_coefficient(mag)}*{body}"
        if not chunks:
            chunks.append(f"-{text}" if neg else text)
        else:
            chunks.append(f"- {text}" if neg else f"+ {text}")
    return " ".join(chunks)


class PolynomialSyntaxError(ValueError):
    pass


def parse_polynomial(text: str, rank: int, basis: Basis = Basis.E) -> Polynomial:
    """Parse polynomial text.

    Accepts the canonical form plus parentheses and integer powers, so
    fixtures may be written as ``(e1*e2 + e1*e3 + e2*e3)^2``.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PolynomialSyntaxError(f"cannot parse {text!r}: {exc.msg}") from None
    prefix = basis.prefix

    def ev(node) -> Polynomial:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Polynomial.constant(node.value, rank, basis)
        if isinstance(node, ast.Name):
            name = node.id
            if name.startswith(prefix) and name[len(prefix):].isdigit():
                j = int(name[len(prefix):]) - 1
                if 0 <= j < rank:
                    return Polynomial.variable(j, rank, basis)
            raise PolynomialSyntaxError(f"unknown variable {name!r} (basis {prefix}, rank {rank})")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                k = ev(node.right)
                if k.degree > 0 or not k.is_integral():
                    raise PolynomialSyntaxError("exponents must be integer constants")
                return ev(node.left) ** k.coefficient((0,) * rank)
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.degree > 0 or right.is_zero():
                    raise PolynomialSyntaxError("can only divide by nonzero constants")
                return left * (1 / as_fraction(right.coefficient((0,) * rank)))
        raise PolynomialSyntaxError(f"unsupported syntax in {text!r}")

    return ev(tree.body)


def variables(rank: int, basis: Basis = Basis.E) -> list[Polynomial]:
    return [Polynomial.variable(j, rank, basis) for j in range(rank)]


def sum_polynomials(ps: Iterable[Polynomial], rank: int, basis: Basis = Basis.E) -> Polynomial:
    out: dict[Monomial, Coefficient] = {}
    for p in ps:
        for m, c in p.items():
            out[m] = out.get(m, 0) + c
    return Polynomial(out, rank, basis)

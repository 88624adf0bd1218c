"""Shared generators and independent checks for the lattice tests."""

import itertools
import random

from weyl_torsion.lattice import determinant, hnf, is_hnf, is_snf, matmul, snf


def random_matrix(rng: random.Random, max_dim=12, bound=1000):
    m = rng.randint(1, max_dim)
    n = rng.randint(1, max_dim)
    style = rng.random()
    if style < 0.15:
        # low rank: product of thin factors
        k = rng.randint(1, min(m, n))
        a = [[rng.randint(-9, 9) for _ in range(k)] for _ in range(m)]
        b = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(k)]
        return matmul(a, b)
    if style < 0.25:
        return [[rng.choice([0, 0, 0, rng.randint(-bound, bound)]) for _ in range(n)] for _ in range(m)]
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]


def random_unimodular(rng: random.Random, n: int, steps=None):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        kind = rng.random()
        if n > 1 and kind < 0.6:
            q = rng.randint(-3, 3)
            u[i] = [a + q * b for a, b in zip(u[i], u[j])]
        elif n > 1 and kind < 0.8:
            u[i], u[j] = u[j], u[i]
        else:
            u[i] = [-a for a in u[i]]
    return u


def check_hnf_instance(a, rng) -> list[str]:
    """Problems found with ``hnf``/``snf`` on ``a`` (empty list = all good)."""
    problems = []
    h, u = hnf(a)
    if matmul(u, a) != h:
        problems.append("U*A != H")
    if abs(determinant(u)) != 1:
        problems.append("HNF transform not unimodular")
    if not is_hnf(h):
        problems.append("H not in canonical form")
    w = random_unimodular(rng, len(a))
    h2, _ = hnf(matmul(w, a))
    if h2 != h:
        problems.append("HNF not canonical under unimodular premultiplication")
    s, su, sv = snf(a)
    if matmul(matmul(su, a), sv) != s:
        problems.append("U*A*V != S")
    if abs(determinant(su)) != 1 or abs(determinant(sv)) != 1:
        problems.append("SNF transforms not unimodular")
    if not is_snf(s):
        problems.append("S not a divisor chain")
    s2 = snf(matmul(w, a))[0]
    if s2 != s:
        problems.append("SNF not canonical under unimodular premultiplication")
    return problems


def leibniz_determinant(a):
    n = len(a)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i, p in enumerate(perm):
            term *= a[i][p]
        total += term
    return total

"""Symmetric bilinear forms over ℤ: exact signature and small classification helpers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FormNotSymmetric


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    zero: int

    @property
    def signature(self):
        return self.positive - self.negative

    @property
    def rank(self):
        return self.positive + self.negative


def check_symmetric(G):
    n = len(G)
    for i in range(n):
        if len(G[i]) != n:
            raise FormNotSymmetric("form matrix is not square")
        for j in range(i):
            if G[i][j] != G[j][i]:
                raise FormNotSymmetric(f"form is not symmetric at ({i}, {j}): {G[i][j]} ≠ {G[j][i]}")


def inertia(G) -> Inertia:
    """Sylvester inertia by exact congruence diagonalization over ℚ.

    A zero diagonal with a nonzero off-diagonal entry G[i][j] is repaired by
    adding row/column j to row/column i, which puts 2·G[i][j] on the diagonal.
    """
    check_symmetric(G)
    a = [[Fraction(x) for x in row] for row in G]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in active if i != piv]
        for i in rest:
            if a[i][piv] != 0:
                q = a[i][piv] / p
                for k in rest:
                    a[i][k] -= q * a[piv][k]
                a[i][piv] = Fraction(0)
        for i in rest:
            a[piv][i] = Fraction(0)
        active = rest
    return Inertia(pos, neg, n - pos - neg)


def signature_of_form(G) -> int:
    return inertia(G).signature


def determinant(G):
    """Exact determinant (Bareiss fraction-free elimination)."""
    n = len(G)
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in G]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(G):
    return abs(determinant(G)) == 1


def is_even(G):
    return all(G[i][i] % 2 == 0 for i in range(len(G)))


def is_hyperbolic(G):
    """Congruent over ℤ to a sum of hyperbolic planes.

    An indefinite unimodular form is determined by rank, signature and
    parity, so the test reduces to: unimodular, even, signature 0, rank > 0.
    """
    if not G:
        return False
    return is_unimodular(G) and is_even(G) and signature_of_form(G) == 0


def congruent_transform(G, P):
    """Pᵀ G P for integer matrices given as lists of rows."""
    n = len(G)
    m = len(P[0]) if P else 0
    GP = [[sum(G[i][k] * P[k][j] for k in range(n)) for j in range(m)] for i in range(n)]
    return [[sum(P[k][i] * GP[k][j] for k in range(n)) for j in range(m)] for i in range(m)]

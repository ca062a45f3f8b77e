#!/usr/bin/env python3
"""
Integer and modular arithmetic primitives: inverses, trial-division
factorization, divisor functions and the q-part split c = c0 * c'.

Residues modulo 1 form the single class 0; its inverse is 0 and sums over
units modulo 1 contain exactly the term 0.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import List, Tuple

from .errors import NotInvertible, OutOfRange

FACTORIZE_BOUND = 10**12


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition of a positive integer."""

    n: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        product = 1
        previous = 1
        for p, e in self.factors:
            if p <= previous or e < 1:
                raise ValueError(f"Malformed factorization of {self.n}: {self.factors}")
            previous = p
            product *= p**e
        if product != self.n:
            raise ValueError(f"Factors {self.factors} do not multiply to {self.n}")

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def prime_powers(self) -> List[int]:
        return [p**e for p, e in self.factors]


@dataclass(frozen=True)
class QSplit:
    """c = c0 * c_prime with c0 | q^inf and gcd(c_prime, q) = 1."""

    c0: int
    c_prime: int


def mod_inverse(a: int, m: int) -> int:
    """Return x in [0, m) with a*x = 1 (mod m); modulus one gives 0."""
    if m < 1:
        raise ValueError(f"Modulus must be positive, got {m}")
    if m == 1:
        return 0
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} is not invertible modulo {m} (gcd={gcd(a, m)})")


def _trial_factor(n: int) -> List[Tuple[int, int]]:
    factors: List[Tuple[int, int]] = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
    # 2*3*5 wheel
    increments = (4, 2, 4, 2, 4, 6, 2, 6)
    p, i = 7, 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += increments[i]
        i = (i + 1) % 8
    if n > 1:
        factors.append((n, 1))
    return factors


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Factor 1 <= n <= 10^12 by trial division with a small-prime wheel."""
    if n < 1 or n > FACTORIZE_BOUND:
        raise OutOfRange(f"factorize supports 1 <= n <= {FACTORIZE_BOUND}, got {n}")
    return Factorization(n, tuple(_trial_factor(n)))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n).factors == ((n, 1),)


def q_part(c: int, q: int) -> QSplit:
    """Split c into its q-part c0 = (c, q^inf) and the coprime cofactor."""
    if c < 1 or q < 1:
        raise ValueError(f"q_part needs positive inputs, got c={c}, q={q}")
    c0, rest = 1, c
    g = gcd(rest, q)
    while g > 1:
        rest //= g
        c0 *= g
        g = gcd(rest, q)
    return QSplit(c0=c0, c_prime=rest)


def divides_power(c: int, q: int) -> bool:
    """True when every prime of c divides q (c | q^inf)."""
    return q_part(abs(c), q).c_prime == 1


@lru_cache(maxsize=16384)
def divisors(n: int) -> Tuple[int, ...]:
    result = [1]
    for p, e in factorize(n).factors:
        result = [d * p**i for d in result for i in range(e + 1)]
    return tuple(sorted(result))


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n).factors:
        result -= result // p
    return result


@lru_cache(maxsize=4096)
def units(m: int) -> Tuple[int, ...]:
    """Residues in [0, m) coprime to m; (0,) for m = 1."""
    if m == 1:
        return (0,)
    return tuple(x for x in range(1, m) if gcd(x, m) == 1)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Combine residues modulo coprime m1, m2 into one residue mod m1*m2."""
    return (r1 + m1 * ((r2 - r1) * mod_inverse(m1, m2) % m2)) % (m1 * m2)


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo an odd prime p."""
    order = p - 1
    cofactors = [order // r for r, _ in factorize(order).factors] if order > 1 else []
    for g in range(2, p):
        if all(pow(g, d, p) != 1 for d in cofactors):
            return g
    return 1


def sigma_table(N: int, k: int) -> List[int]:
    """sigma_k(n) for 0 <= n <= N (entry 0 is 0)."""
    table = [0] * (N + 1)
    for d in range(1, N + 1):
        dk = d**k
        for multiple in range(d, N + 1, d):
            table[multiple] += dk
    return table


def sigma(n: int, k: int) -> int:
    return sum(d**k for d in divisors(n))


def smooth_parts(q: int, limit: int) -> List[int]:
    """All c0 <= limit with c0 | q^inf, ascending."""
    if q < 1 or limit < 1:
        return []
    result = [1]
    for p in factorize(q).primes:
        extended = []
        for c0 in result:
            while c0 <= limit:
                extended.append(c0)
                c0 *= p
        result = extended
    return sorted(result)

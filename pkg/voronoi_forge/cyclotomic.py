#!/usr/bin/env python3
"""
Exact arithmetic in Z[zeta_L].

Elements live on the redundant spanning set {zeta^j : 0 <= j < L}; equality
is decided only at comparison time by reducing modulo the cyclotomic
polynomial. Coefficients are held in int64 numpy arrays while a product
bound stays below 2**62 and in object arrays of Python ints beyond that.
"""

import threading
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import OverflowPolicyError
from .residues import factorize

MAX_ORDER = 10**6
_INT64_SAFE = float(2**62)

_phi_lock = threading.Lock()
_phi_memo: Dict[int, Tuple[int, ...]] = {1: (-1, 1)}


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def common_order(*orders: int) -> int:
    """lcm of the given orders, checked against the overflow policy."""
    L = 1
    for order in orders:
        L = _lcm(L, order)
    if L > MAX_ORDER:
        raise OverflowPolicyError(
            f"Cyclotomic order {L} exceeds the configured bound {MAX_ORDER}"
        )
    return L


def _magnitude(coeffs: np.ndarray) -> float:
    if coeffs.dtype == object:
        return float(sum(abs(int(c)) for c in coeffs))
    return float(np.abs(coeffs.astype(np.float64)).sum())


@dataclass(frozen=True, eq=False)
class CyclotomicElement:
    """Element sum_j coeffs[j] * zeta_L^j of Z[zeta_L]."""

    order: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"Cyclotomic order must be positive, got {self.order}")
        if len(self.coeffs) != self.order:
            raise ValueError(
                f"Coefficient vector has length {len(self.coeffs)}, expected {self.order}"
            )

    def lift(self, L: int) -> "CyclotomicElement":
        return cyc_lift(self, L)

    def __add__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        return cyc_arith(self, other, "add")

    def __sub__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        return cyc_arith(self, other, "sub")

    def __mul__(self, other: Union["CyclotomicElement", int]) -> "CyclotomicElement":
        if isinstance(other, (int, np.integer)):
            return cyc_scale(self, int(other))
        return cyc_arith(self, other, "mul")

    __rmul__ = __mul__

    def __neg__(self) -> "CyclotomicElement":
        return cyc_scale(self, -1)

    def conj(self) -> "CyclotomicElement":
        return cyc_conj(self)

    def is_zero(self) -> bool:
        return cyc_is_zero(self)

    def equals(self, other: "CyclotomicElement") -> bool:
        return cyc_is_zero(self - other)

    def embed(self) -> complex:
        return cyc_embed(self)

    def __repr__(self) -> str:
        terms = [f"{int(c)}*z^{j}" for j, c in enumerate(self.coeffs) if c != 0]
        body = " + ".join(terms) if terms else "0"
        return f"CyclotomicElement(L={self.order}: {body})"


def cyc_zero(L: int) -> CyclotomicElement:
    return CyclotomicElement(L, np.zeros(L, dtype=np.int64))


def cyc_int(L: int, n: int) -> CyclotomicElement:
    coeffs = np.zeros(L, dtype=np.int64 if abs(n) < _INT64_SAFE else object)
    coeffs[0] = n
    return CyclotomicElement(L, coeffs)


def cyc_root(L: int, j: int) -> CyclotomicElement:
    """The element zeta_L^(j mod L)."""
    if L < 1:
        raise ValueError(f"Root order must be positive, got {L}")
    coeffs = np.zeros(L, dtype=np.int64)
    coeffs[j % L] = 1
    return CyclotomicElement(L, coeffs)


def cyc_from_exponents(
    L: int,
    exponents: Union[Sequence[int], np.ndarray],
    weights: Optional[Union[Sequence[int], np.ndarray]] = None,
) -> CyclotomicElement:
    """Sum of weights[i] * zeta_L^exponents[i] (unit weights by default)."""
    exps = np.asarray(exponents, dtype=np.int64) % L
    if weights is None:
        coeffs = np.bincount(exps, minlength=L).astype(np.int64)
    else:
        w = np.asarray(weights, dtype=np.int64)
        coeffs = np.zeros(L, dtype=np.int64)
        np.add.at(coeffs, exps, w)
    return CyclotomicElement(L, coeffs)


def cyc_lift(x: CyclotomicElement, L: int) -> CyclotomicElement:
    """Re-express x in Z[zeta_L]; requires x.order | L."""
    if L == x.order:
        return x
    if L % x.order != 0:
        raise ValueError(f"Cannot lift order {x.order} to {L}")
    common_order(L)
    coeffs = np.zeros(L, dtype=x.coeffs.dtype)
    coeffs[:: L // x.order] = x.coeffs
    return CyclotomicElement(L, coeffs)


def _promote(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if a.dtype == object or b.dtype == object:
        return a.astype(object), b.astype(object)
    return a, b


def cyc_scale(x: CyclotomicElement, n: int) -> CyclotomicElement:
    coeffs = x.coeffs
    if coeffs.dtype != object and _magnitude(coeffs) * abs(n) >= _INT64_SAFE:
        coeffs = coeffs.astype(object)
    return CyclotomicElement(x.order, coeffs * n)


def cyc_arith(x: CyclotomicElement, y: CyclotomicElement, op: str) -> CyclotomicElement:
    """Exact add, sub or mul after lifting both operands to lcm(Lx, Ly)."""
    L = common_order(x.order, y.order)
    xa, ya = _promote(cyc_lift(x, L).coeffs, cyc_lift(y, L).coeffs)
    if op in ("add", "sub"):
        if xa.dtype != object and _magnitude(xa) + _magnitude(ya) >= _INT64_SAFE:
            xa, ya = xa.astype(object), ya.astype(object)
        return CyclotomicElement(L, xa + ya if op == "add" else xa - ya)
    if op != "mul":
        raise ValueError(f"Unknown cyclotomic operation: {op}")

    # iterate over the sparser factor, rotating the denser one
    if np.count_nonzero(xa) > np.count_nonzero(ya):
        xa, ya = ya, xa
    if xa.dtype != object and _magnitude(xa) * _magnitude(ya) >= _INT64_SAFE:
        xa, ya = xa.astype(object), ya.astype(object)
    result = np.zeros(L, dtype=xa.dtype)
    for j in np.flatnonzero(xa):
        result = result + xa[j] * np.roll(ya, int(j))
    return CyclotomicElement(L, result)


def cyc_conj(x: CyclotomicElement) -> CyclotomicElement:
    """Complex conjugation: coefficient of zeta^j moves to zeta^(-j)."""
    L = x.order
    idx = (-np.arange(L)) % L
    return CyclotomicElement(L, x.coeffs[idx])


def cyc_sum(elements: Iterable[CyclotomicElement]) -> CyclotomicElement:
    total: Optional[CyclotomicElement] = None
    for element in elements:
        total = element if total is None else total + element
    return total if total is not None else cyc_zero(1)


def _reduce_axis(tensor: np.ndarray, axis: int, p: int, q: int) -> np.ndarray:
    # zeta_{p^e}^{(p-1)p^{e-1}+t} = -sum_{i<p-1} zeta_{p^e}^{i p^{e-1}+t}
    block = q // p
    moved = np.moveaxis(tensor, axis, 0)
    moved = moved.reshape((p, block) + moved.shape[1:])
    reduced = moved[:-1] - moved[-1:]
    reduced = reduced.reshape(((p - 1) * block,) + reduced.shape[2:])
    return np.moveaxis(reduced, 0, axis)


def cyc_is_zero(x: CyclotomicElement) -> bool:
    """Exact zero test in Z[zeta_L].

    Z[zeta_L] is the tensor product of Z[zeta_{p^e}] over the prime powers of
    L (zeta_L^j maps to the tuple of zeta_{p^e}^{j mod p^e}). Each tensor axis
    is reduced modulo Phi_{p^e}; the element vanishes iff all power-basis
    coefficients of the product basis vanish.
    """
    coeffs = x.coeffs
    if not np.any(coeffs):
        return True
    L = x.order
    if L == 1:
        return False
    powers = [(p, p**e) for p, e in factorize(L).factors]
    if coeffs.dtype != object:
        if float(np.abs(coeffs).max()) * 2 ** len(powers) >= _INT64_SAFE:
            coeffs = coeffs.astype(object)
    indices = np.arange(L)
    tensor = np.zeros(tuple(q for _, q in powers), dtype=coeffs.dtype)
    tensor[tuple(indices % q for _, q in powers)] = coeffs
    for axis, (p, q) in enumerate(powers):
        tensor = _reduce_axis(tensor, axis, p, q)
    return not np.any(tensor)


def cyc_embed(x: CyclotomicElement) -> complex:
    """Double-precision value sum_j coeffs[j] exp(2 pi i j / L).

    Error is at most L * max|coeff| * 2^-50.
    """
    if not np.any(x.coeffs):
        return 0j
    roots = np.exp(2j * np.pi * np.arange(x.order) / x.order)
    return complex(np.dot(x.coeffs.astype(np.float64), roots))


def _poly_divide_exact(num: List[int], den: Sequence[int]) -> List[int]:
    """Exact quotient of integer polynomials (low-to-high) by a monic divisor."""
    num = list(num)
    d = len(den) - 1
    quotient = [0] * (len(num) - d)
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        if c:
            quotient[i - d] = c
            for j, dj in enumerate(den):
                num[i - d + j] -= c * dj
    if any(num[:d]):
        raise ArithmeticError("Cyclotomic division left a remainder")
    return quotient


def cyclotomic_polynomial(L: int) -> Tuple[int, ...]:
    """Coefficients (low-to-high) of Phi_L by iterated exact division, memoized."""
    with _phi_lock:
        cached = _phi_memo.get(L)
    if cached is not None:
        return cached
    num = [-1] + [0] * (L - 1) + [1]
    for d in range(1, L):
        if L % d == 0:
            num = _poly_divide_exact(num, cyclotomic_polynomial(d))
    result = tuple(num)
    with _phi_lock:
        _phi_memo.setdefault(L, result)
    return result


def cyc_reduce(x: CyclotomicElement) -> Tuple[int, ...]:
    """Power-basis remainder of the coefficient polynomial modulo Phi_L."""
    phi = cyclotomic_polynomial(x.order)
    d = len(phi) - 1
    rem = [int(c) for c in x.coeffs]
    for j in range(len(rem) - 1, d - 1, -1):
        c = rem[j]
        if c:
            for i, pi in enumerate(phi):
                rem[j - d + i] -= c * pi
    return tuple(rem[:d])

#!/usr/bin/env python3
"""
Level-1 holomorphic modular forms: exact q-expansions, Hecke operators and
normalized Hecke eigenforms.

Coefficients are Python integers, Fractions or QuadraticNumber values held
in numpy object arrays, so products never overflow. Spaces of dimension two
(weight 24) have eigenvalues in a real quadratic field and are handled with
exact x + y sqrt(D) arithmetic; floats appear only in the final lambda(n).
"""

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from .cache import get_expansion_cache
from .errors import InvalidParams, OutOfRange, PrecisionExhausted
from .report import CheckResult
from .residues import divisors, factorize, sigma, sigma_table

DEFAULT_PRECISION = 2000
MAX_PRECISION = 10**4
CUSP_WEIGHTS = range(12, 27, 2)
EIGENFORM_WEIGHTS = (12, 16, 18, 20, 22, 24, 26)


# Exact real quadratic numbers


@dataclass(frozen=True)
class QuadraticNumber:
    """x + y sqrt(D) with rational x, y and squarefree D > 1."""

    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.D < 2:
            raise InvalidParams(f"Quadratic field needs D >= 2, got {self.D}")

    def _coerce(self, other: Any) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if other.D != self.D:
                raise InvalidParams(
                    f"Mixed quadratic fields D={self.D} and D={other.D}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(Fraction(other), Fraction(0), self.D)
        return NotImplemented

    def __add__(self, other: Any) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.x, -self.y, self.D)

    def __sub__(self, other: Any) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.x - o.x, self.y - o.y, self.D)

    def __rsub__(self, other: Any) -> "QuadraticNumber":
        return (-self) + other

    def __mul__(self, other: Any) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(
            self.x * o.x + self.D * self.y * o.y, self.x * o.y + self.y * o.x, self.D
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.x * self.x - self.D * self.y * self.y

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.x, -self.y, self.D)

    def __truediv__(self, other: Any) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("Division by zero in quadratic field")
        p = self * o.conjugate()
        return QuadraticNumber(p.x / n, p.y / n, self.D)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if isinstance(other, QuadraticNumber):
            return (self.x, self.y, self.D) == (other.x, other.y, other.D)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.x, self.y, self.D))

    def to_mpf(self) -> Any:
        """Real embedding with sqrt(D) > 0 at the current mpmath precision."""
        x = mpmath.mpf(self.x.numerator) / self.x.denominator
        y = mpmath.mpf(self.y.numerator) / self.y.denominator
        return x + y * mpmath.sqrt(self.D)

    def __float__(self) -> float:
        with mpmath.workdps(40):
            return float(self.to_mpf())

    def __str__(self) -> str:
        return f"{self.x} + {self.y}*sqrt({self.D})"


Coefficient = Union[int, Fraction, QuadraticNumber]


def _normalize(value: Any) -> Any:
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def _to_mpf(value: Coefficient) -> Any:
    if isinstance(value, QuadraticNumber):
        return value.to_mpf()
    value = Fraction(value)
    return mpmath.mpf(value.numerator) / value.denominator


def _all_int(coeffs: Sequence[Any]) -> bool:
    return all(type(c) is int for c in coeffs)


def _int_convolve(a: Sequence[int], b: Sequence[int], N: int) -> List[int]:
    """Truncated product of integer sequences by Kronecker substitution.

    Each sequence is packed into one big integer with fixed-width slots wide
    enough that no product coefficient can overflow into its neighbour; the
    slots of the product are read back after adding a half-slot offset.
    """
    a, b = list(a[: N + 1]), list(b[: N + 1])
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    width = (bound.bit_length() + 9) // 8
    bits = 8 * width
    half = 1 << (bits - 1)

    def pack(seq: List[int]) -> int:
        positive = b"".join(
            (c if c > 0 else 0).to_bytes(width, "little") for c in seq
        )
        negative = b"".join(
            (-c if c < 0 else 0).to_bytes(width, "little") for c in seq
        )
        return int.from_bytes(positive, "little") - int.from_bytes(negative, "little")

    slots = len(a) + len(b) - 1
    offset = int.from_bytes(half.to_bytes(width, "little") * slots, "little")
    raw = (pack(a) * pack(b) + offset).to_bytes(width * slots, "little")
    return [
        int.from_bytes(raw[i * width : (i + 1) * width], "little") - half
        for i in range(N + 1)
    ]


# q-expansions


@dataclass(frozen=True)
class QExpansion:
    """Truncated q-expansion a(0..N) of a weight-k form."""

    weight: int
    coeffs: Tuple[Any, ...]

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_cusp(self) -> bool:
        return self.coeffs[0] == 0

    def __getitem__(self, n: int) -> Any:
        if n < 0 or n > self.precision:
            raise PrecisionExhausted(
                f"Coefficient a({n}) requested, expansion known to n={self.precision}"
            )
        return self.coeffs[n]

    def _array(self, N: int) -> np.ndarray:
        return np.array(self.coeffs[: N + 1], dtype=object)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise InvalidParams(
                f"Cannot add weight {self.weight} and weight {other.weight} forms"
            )
        N = min(self.precision, other.precision)
        total = self._array(N) + other._array(N)
        return QExpansion(self.weight, tuple(_normalize(c) for c in total))

    def __neg__(self) -> "QExpansion":
        return QExpansion(self.weight, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + (-other)

    def __mul__(self, other: Union["QExpansion", Coefficient]) -> "QExpansion":
        if isinstance(other, QExpansion):
            N = min(self.precision, other.precision)
            if _all_int(self.coeffs) and _all_int(other.coeffs):
                return QExpansion(
                    self.weight + other.weight,
                    tuple(_int_convolve(self.coeffs, other.coeffs, N)),
                )
            product = np.convolve(self._array(N), other._array(N))[: N + 1]
            return QExpansion(
                self.weight + other.weight, tuple(_normalize(c) for c in product)
            )
        scaled = tuple(_normalize(c * other) for c in self.coeffs)
        return QExpansion(self.weight, scaled)

    __rmul__ = __mul__

    def truncate(self, N: int) -> "QExpansion":
        if N > self.precision:
            raise PrecisionExhausted(f"Cannot extend precision {self.precision} to {N}")
        return QExpansion(self.weight, self.coeffs[: N + 1])

    def power(self, e: int) -> "QExpansion":
        """self**e for e >= 0 (e = 0 gives the weight-0 constant 1)."""
        if e == 0:
            return QExpansion(0, (1,) + (0,) * self.precision)
        result: Optional["QExpansion"] = None
        base = self
        while True:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if not e:
                assert result is not None
                return result
            base = base * base


def _check_precision(N: int) -> None:
    if not 1 <= N <= MAX_PRECISION:
        raise OutOfRange(f"Precision N={N} outside [1, {MAX_PRECISION}]")


def _cached_integer_expansion(
    name: str, weight: int, N: int, build: Callable[[], List[int]]
) -> QExpansion:
    cache = get_expansion_cache()
    coeffs = cache.load(name, weight, N)
    if coeffs is None:
        coeffs = list(build())
        cache.store(name, weight, N, coeffs)
    return QExpansion(weight, tuple(coeffs))


_expansion_lock = threading.Lock()


@lru_cache(maxsize=16)
def _eisenstein_and_delta(N: int) -> Tuple[QExpansion, QExpansion, QExpansion]:
    def e4() -> List[int]:
        return [1] + [240 * s for s in sigma_table(N, 3)[1:]]

    def e6() -> List[int]:
        return [1] + [-504 * s for s in sigma_table(N, 5)[1:]]

    E4 = _cached_integer_expansion("E4", 4, N, e4)
    E6 = _cached_integer_expansion("E6", 6, N, e6)

    def delta() -> List[int]:
        numerator = E4.power(3) - E6 * E6
        coeffs = []
        for c in numerator.coeffs:
            quotient, remainder = divmod(int(c), 1728)
            assert remainder == 0, "E4^3 - E6^2 not divisible by 1728"
            coeffs.append(quotient)
        return coeffs

    Delta = _cached_integer_expansion("Delta", 12, N, delta)
    return E4, E6, Delta


def eisenstein_and_delta(
    N: int = DEFAULT_PRECISION,
) -> Tuple[QExpansion, QExpansion, QExpansion]:
    """E4, E6 and Delta = (E4^3 - E6^2)/1728 to precision N, exactly."""
    _check_precision(N)
    with _expansion_lock:
        return _eisenstein_and_delta(N)


def delta_product_expansion(N: int) -> Tuple[int, ...]:
    """Coefficients 0..N of q prod (1 - q^n)^24, independent of the Eisenstein route."""
    _check_precision(N)
    # Euler's pentagonal series for prod (1 - q^n)
    euler: Dict[int, int] = {0: 1}
    m = 1
    while m * (3 * m - 1) // 2 <= N:
        sign = -1 if m % 2 else 1
        euler[m * (3 * m - 1) // 2] = sign
        if m * (3 * m + 1) // 2 <= N:
            euler[m * (3 * m + 1) // 2] = sign
        m += 1
    terms = sorted((i, p) for i, p in euler.items() if i > 0)
    # Miller's recurrence for P^alpha: n b_n = sum_i ((alpha + 1) i - n) p_i b_{n-i}
    alpha = 24
    b = [1] + [0] * N
    for n in range(1, N):
        total = 0
        for i, p in terms:
            if i > n:
                break
            total += ((alpha + 1) * i - n) * p * b[n - i]
        quotient, remainder = divmod(total, n)
        assert remainder == 0, "Miller recurrence left a remainder"
        b[n] = quotient
    return (0,) + tuple(b[:N])


def cusp_basis(k: int, N: int = DEFAULT_PRECISION) -> List[QExpansion]:
    """Monomials Delta^j E4^a E6^b (j >= 1, b <= 1) with 12j + 4a + 6b = k."""
    if k not in CUSP_WEIGHTS:
        raise OutOfRange(f"Weight {k} outside the supported range 12..26 (even)")
    E4, E6, Delta = eisenstein_and_delta(N)
    basis = []
    for j in range(1, k // 12 + 1):
        rest = k - 12 * j
        for b in (0, 1):
            if (rest - 6 * b) >= 0 and (rest - 6 * b) % 4 == 0:
                a = (rest - 6 * b) // 4
                form = Delta.power(j)
                for factor, e in ((E4, a), (E6, b)):
                    if e:
                        form = form * factor.power(e)
                basis.append(form)
    return basis


def hecke_apply(m: int, f: QExpansion) -> QExpansion:
    """(T_m f)(n) = sum over d | (m, n) of d^(k-1) a(mn/d^2); precision floor(N/m)."""
    if m < 1:
        raise InvalidParams(f"Hecke index must be positive, got {m}")
    N_out = f.precision // m
    if N_out < 1:
        raise PrecisionExhausted(
            f"T_{m} needs precision >= {m}, expansion has {f.precision}"
        )
    k = f.weight
    coeffs: List[Any] = [_normalize(sigma(m, k - 1) * f.coeffs[0])]
    for n in range(1, N_out + 1):
        total: Any = 0
        for d in divisors(gcd(m, n)):
            total = total + d ** (k - 1) * f.coeffs[m * n // (d * d)]
        coeffs.append(_normalize(total))
    return QExpansion(k, tuple(coeffs))


# Eigenforms


@dataclass(frozen=True)
class Eigenform:
    """Normalized Hecke eigenform with exact a(n) and double lambda(n)."""

    weight: int
    label: str
    field_degree: int
    coeffs: Tuple[Coefficient, ...]
    lambdas: np.ndarray = field(compare=False, repr=False)

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    @property
    def expansion(self) -> QExpansion:
        return QExpansion(self.weight, self.coeffs)

    def a(self, n: int) -> Coefficient:
        return self.expansion[n]

    def lam(self, n: int) -> float:
        if n < 1 or n > self.precision:
            raise PrecisionExhausted(
                f"lambda({n}) requested for {self.label}, known to n={self.precision}"
            )
        return float(self.lambdas[n])

    def lambda_array(self, n_max: int) -> np.ndarray:
        """lambda(0..n_max) with lambda(0) = 0."""
        if n_max > self.precision:
            raise PrecisionExhausted(
                f"lambda up to {n_max} requested for {self.label}, known to n={self.precision}"
            )
        return self.lambdas[: n_max + 1]


def _echelon(basis: List[QExpansion]) -> List[QExpansion]:
    """Row-reduce so that the i-th form has a(j) = delta_ij for 1 <= j <= d."""
    rows = [list(map(Fraction, f.coeffs)) for f in basis]
    d = len(rows)
    for col in range(d):
        pivot = next(r for r in range(col, d) if rows[r][col + 1] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col + 1]
        rows[col] = [c / lead for c in rows[col]]
        for r in range(d):
            if r != col and rows[r][col + 1] != 0:
                factor = rows[r][col + 1]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    k = basis[0].weight
    return [QExpansion(k, tuple(_normalize(c) for c in row)) for row in rows]


def _squarefree_split(n: int) -> Tuple[int, int]:
    """n = s^2 * D with D squarefree; returns (s, D)."""
    s, D = 1, 1
    for p, e in factorize(n).factors:
        s *= p ** (e // 2)
        if e % 2:
            D *= p
    return s, D


def _lambdas(coeffs: Tuple[Coefficient, ...], k: int) -> np.ndarray:
    out = np.zeros(len(coeffs), dtype=np.float64)
    with mpmath.workdps(40):
        for n in range(1, len(coeffs)):
            out[n] = float(_to_mpf(coeffs[n]) / mpmath.power(n, mpmath.mpf(k - 1) / 2))
    out.setflags(write=False)
    return out


def _make_eigenform(
    k: int, label: str, degree: int, coeffs: Tuple[Any, ...]
) -> Eigenform:
    return Eigenform(
        weight=k,
        label=label,
        field_degree=degree,
        coeffs=coeffs,
        lambdas=_lambdas(coeffs, k),
    )


@lru_cache(maxsize=32)
def _eigenforms(k: int, N: int) -> Tuple[Eigenform, ...]:
    basis = _echelon(cusp_basis(k, N))
    if len(basis) == 1:
        return (_make_eigenform(k, str(k), 1, basis[0].coeffs),)
    if len(basis) != 2:
        raise OutOfRange(f"Spaces of dimension {len(basis)} are not supported")
    f1, f2 = basis
    images = [hecke_apply(2, f) for f in (f1, f2)]
    # matrix of T_2 in the echelon basis: column i holds T_2 f_i
    a11, a21 = Fraction(images[0][1]), Fraction(images[0][2])
    a12, a22 = Fraction(images[1][1]), Fraction(images[1][2])
    trace = a11 + a22
    det = a11 * a22 - a12 * a21
    disc = trace * trace - 4 * det
    if disc <= 0 or disc.denominator != 1:
        raise OutOfRange(f"T_2 discriminant {disc} is not a positive integer")
    s, D = _squarefree_split(int(disc))
    if D == 1:
        roots: List[Coefficient] = [
            _normalize((trace + s) / 2),
            _normalize((trace - s) / 2),
        ]
        degree = 1
    else:
        roots = [
            QuadraticNumber(trace / 2, Fraction(s, 2), D),
            QuadraticNumber(trace / 2, Fraction(-s, 2), D),
        ]
        degree = 2
    forms = []
    for suffix, root in zip("ab", roots):
        # the eigenvector with a(1) = 1 has coordinates (1, a(2)) = (1, root)
        coeffs = tuple(_normalize(x + root * y) for x, y in zip(f1.coeffs, f2.coeffs))
        forms.append(_make_eigenform(k, f"{k}{suffix}", degree, coeffs))
    return tuple(forms)


def eigenforms(k: int, N: int = DEFAULT_PRECISION) -> List[Eigenform]:
    """a(1) = 1 normalized eigenforms of S_k(SL2(Z))."""
    if k not in EIGENFORM_WEIGHTS:
        raise OutOfRange(
            f"No eigenforms for weight {k}; supported: {EIGENFORM_WEIGHTS}"
        )
    _check_precision(N)
    return list(_eigenforms(k, N))


def eigenform_by_label(label: str, N: int = DEFAULT_PRECISION) -> Eigenform:
    """Look up "12", "16", ..., "24a", "24b", "26"."""
    digits = label.rstrip("ab")
    if not digits.isdigit():
        raise InvalidParams(f"Malformed eigenform label: {label!r}")
    for form in eigenforms(int(digits), N):
        if form.label == label:
            return form
    raise InvalidParams(f"No eigenform with label {label!r}")


def hecke_relation_check(f: Eigenform, m: int, n: int) -> CheckResult:
    """|lambda(m) lambda(n) - sum over d | (m, n) of lambda(mn/d^2)|."""
    if m < 1 or n < 1:
        raise InvalidParams(f"Hecke indices must be positive, got {m}, {n}")
    if m * n > f.precision:
        raise PrecisionExhausted(
            f"lambda({m * n}) needed, {f.label} known to n={f.precision}"
        )
    lhs = f.lam(m) * f.lam(n)
    rhs = sum(f.lam(m * n // (d * d)) for d in divisors(gcd(m, n)))
    return CheckResult(exact=None, residual=abs(lhs - rhs), lhs=lhs, rhs=rhs)


def eigenvector_check(f: Eigenform, m: int) -> CheckResult:
    """Exact test of T_m f = a(m) f over the precision T_m leaves."""
    image = hecke_apply(m, f.expansion)
    eigenvalue = f.a(m)
    mismatches = [
        n for n in range(image.precision + 1) if image[n] != eigenvalue * f.coeffs[n]
    ]
    return CheckResult(
        exact=not mismatches,
        residual=0.0 if not mismatches else float("inf"),
        details={"precision": image.precision, "mismatches": mismatches[:5]},
    )


def dimension(k: int) -> int:
    return len(cusp_basis(k, 4))

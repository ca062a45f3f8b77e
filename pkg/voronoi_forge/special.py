#!/usr/bin/env python3
"""
Archimedean layer: J-Bessel values, the gamma factor, the Mellin-Barnes
representation of J, Hankel transforms and Weber's exponential integral.

Weights k are even integers >= 6 and all Bessel orders are k - 1 (odd), so
J_{k-1} is an odd function.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple, Union

import mpmath
import numpy as np
from scipy import special as sp

from .errors import InvalidParams, OutOfDomain, PoleError
from .quadrature import (
    QuadratureConfig,
    adaptive_integrate,
    oscillation_panels,
)
from .report import CheckResult

BESSEL_DOMAIN = 1e4
COMPLEX_BESSEL_DOMAIN = 120.0
SERIES_RADIUS = 12.0

Number = Union[float, complex]


def check_weight(k: int) -> int:
    if k < 6 or k % 2:
        raise InvalidParams(f"Weight must be an even integer >= 6, got {k}")
    return k


def i_power(n: int) -> complex:
    """i**n computed exactly from n mod 4."""
    return (1 + 0j, 1j, -1 + 0j, -1j)[n % 4]


def _series_j(nu: int, z: complex) -> complex:
    half = z / 2
    term = half**nu / math.factorial(nu)
    total = term
    square = half * half
    r = 0
    while True:
        r += 1
        term *= -square / (r * (r + nu))
        total += term
        if r > abs(half) and abs(term) <= 1e-17 * max(abs(total), 1e-300):
            return total


def bessel_j(k: int, z: Number) -> Number:
    """J_{k-1}(z); real inputs return float, complex inputs complex."""
    nu = k - 1
    if z == 0:
        return 0j if isinstance(z, complex) else 0.0
    size = abs(z)
    if size > BESSEL_DOMAIN:
        raise OutOfDomain(f"|z|={size} exceeds the Bessel domain {BESSEL_DOMAIN}")
    is_complex = isinstance(z, complex) and z.imag != 0
    if is_complex:
        if size > COMPLEX_BESSEL_DOMAIN:
            raise OutOfDomain(
                f"Complex Bessel argument |z|={size} exceeds {COMPLEX_BESSEL_DOMAIN}"
            )
        if size <= SERIES_RADIUS:
            return _series_j(nu, complex(z))
        # cancellation in the series is absorbed by doubled working precision
        with mpmath.workdps(34):
            return complex(mpmath.besselj(nu, mpmath.mpc(z.real, z.imag)))
    x = float(z.real) if isinstance(z, complex) else float(z)
    if abs(x) <= SERIES_RADIUS:
        value = _series_j(nu, complex(x)).real
    else:
        value = float(sp.jv(nu, abs(x))) * (1 if x > 0 else -1)
    return complex(value) if isinstance(z, complex) else value


def bessel_j_real(k: int, x: np.ndarray) -> np.ndarray:
    """Vectorized J_{k-1} on real arrays."""
    x = np.asarray(x, dtype=np.float64)
    return sp.jv(k - 1, np.abs(x)) * np.sign(x)


def _check_pole(k: int, s: complex) -> None:
    shifted = s + (k - 1) / 2
    if abs(shifted.imag) < 1e-14 and shifted.real <= 0:
        if abs(shifted.real - round(shifted.real)) < 1e-12:
            raise PoleError(f"gamma_factor has a pole at s={s} for k={k}")


def gamma_factor(k: int, s: Number) -> complex:
    """2^((3-k)/2) sqrt(pi) (2 pi)^(-s) Gamma(s + (k-1)/2)."""
    s = complex(s)
    _check_pole(k, s)
    log_value = (
        (3 - k) / 2 * math.log(2)
        + 0.5 * math.log(math.pi)
        - s * math.log(2 * math.pi)
        + complex(sp.loggamma(s + (k - 1) / 2))
    )
    return cmath.exp(log_value)


def gamma_factor_duplicated(k: int, s: Number) -> complex:
    """pi^(-s) Gamma((s + (k-1)/2)/2) Gamma((s + (k+1)/2)/2)."""
    s = complex(s)
    _check_pole(k, s)
    log_value = (
        -s * math.log(math.pi)
        + complex(sp.loggamma((s + (k - 1) / 2) / 2))
        + complex(sp.loggamma((s + (k + 1) / 2) / 2))
    )
    return cmath.exp(log_value)


def gamma_ratio(k: int, s: np.ndarray) -> np.ndarray:
    """gamma_k(1-s) / gamma_k(s) = (2 pi)^(2s-1) Gamma((k+1)/2 - s) / Gamma(s + (k-1)/2)."""
    s = np.asarray(s, dtype=np.complex128)
    return np.exp(
        (2 * s - 1) * math.log(2 * math.pi)
        + sp.loggamma((k + 1) / 2 - s)
        - sp.loggamma(s + (k - 1) / 2)
    )


def mellin_barnes_check(
    k: int, x: float, a: float, cfg: Optional[QuadratureConfig] = None
) -> CheckResult:
    """Contour integral of gamma_k(1-s)/gamma_k(s) x^(2(s-1)) on Re s = a against J_{k-1}(4 pi x)."""
    check_weight(k)
    cfg = cfg or QuadratureConfig()
    if not 1 < a < (k + 1) / 2:
        raise InvalidParams(f"Contour Re s={a} must lie in (1, {(k + 1) / 2})")
    if not 0 < x <= 5:
        raise InvalidParams(f"mellin_barnes_check needs 0 < x <= 5, got {x}")
    log_x = math.log(x)
    scale = x ** (2 * (a - 1)) / (4 * math.pi**2)

    def integrand(tau: np.ndarray) -> np.ndarray:
        s = a + 1j * tau
        return np.real(gamma_ratio(k, s) * np.exp(2 * (s - 1) * log_x))

    def tail(T: float) -> float:
        # |ratio| ~ C tau^(1-2a); both half-lines
        ratio = complex(gamma_ratio(k, np.array([a + 1j * T]))[0])
        return 2 * abs(ratio) * T / (2 * a - 2)

    T = 32.0
    while scale * tail(T) > cfg.abs_tol / cfg.safety:
        T *= 2
        if T > 1e7:
            raise OutOfDomain(
                f"Mellin-Barnes tail does not fall below tolerance for a={a}"
            )
    # Stirling: the phase of ratio(s) x^(2(s-1)) moves at rate 2 |log(2 pi x / tau)|
    rate = max(2 * abs(math.log(T / (2 * math.pi * x))), 2 * abs(log_x), 1.0)
    panels = oscillation_panels(T, 2 * math.pi / rate, cfg)
    result = adaptive_integrate(integrand, 0.0, T, cfg, min_panels=panels)
    # conjugate symmetry of the integrand folds [-T, T] onto [0, T]
    lhs = 2 * float(result.value) / (4 * math.pi**2)
    rhs = float(bessel_j(k, 4 * math.pi * x))
    return CheckResult(
        exact=None,
        residual=abs(lhs - rhs),
        lhs=lhs,
        rhs=rhs,
        details={"T": T, "tail_bound": scale * tail(T), "panels": result.panels},
    )


# Test functions


@dataclass(frozen=True)
class TestFunction:
    """Bump amplitude * exp(1 - 1/(1 - t^2)) with t = (x - center)/half_width."""

    center: float
    half_width: float
    amplitude: float = 1.0

    __test__ = False

    def __post_init__(self) -> None:
        if self.half_width <= 0 or self.center - self.half_width <= 0:
            raise InvalidParams(
                f"Bump support ({self.center - self.half_width}, "
                f"{self.center + self.half_width}) must lie in (0, inf)"
            )

    @property
    def support(self) -> Tuple[float, float]:
        return self.center - self.half_width, self.center + self.half_width

    def __call__(self, x: Any) -> Any:
        x = np.asarray(x, dtype=np.float64)
        t = (x - self.center) / self.half_width
        inside = np.abs(t) < 1
        safe = np.where(inside, 1 - t * t, 1.0)
        values = np.where(inside, self.amplitude * np.exp(1 - 1 / safe), 0.0)
        return values if values.ndim else float(values)

    def scaled(self, factor: float) -> "TestFunction":
        return TestFunction(self.center, self.half_width, self.amplitude * factor)


@dataclass(frozen=True)
class CompactFunction:
    """A vectorized callable with explicit compact support [lo, hi] in (0, inf)."""

    fn: Callable[[np.ndarray], np.ndarray]
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not 0 < self.lo < self.hi:
            raise InvalidParams(f"Support [{self.lo}, {self.hi}] must lie in (0, inf)")

    @property
    def support(self) -> Tuple[float, float]:
        return self.lo, self.hi

    def __call__(self, x: Any) -> Any:
        x = np.asarray(x, dtype=np.float64)
        values = np.where((x >= self.lo) & (x <= self.hi), self.fn(x), 0.0)
        return values if values.ndim else float(values)


SupportedFunction = Union[TestFunction, CompactFunction]


# Hankel transforms, in the variable t = sqrt(x) where J(4 pi sqrt(a x)) has
# the constant period 1/(2 sqrt(a))


def hankel_transform_many(
    F: SupportedFunction,
    k: int,
    a_values: Any,
    cfg: Optional[QuadratureConfig] = None,
    chunk: int = 256,
) -> np.ndarray:
    """(H_k F)(a) = 2 pi int F(x) J_{k-1}(4 pi sqrt(a x)) dx for many a > 0."""
    cfg = cfg or QuadratureConfig()
    a = np.atleast_1d(np.asarray(a_values, dtype=np.float64))
    if np.any(a < 0):
        raise InvalidParams("Hankel transform needs a >= 0")
    lo, hi = F.support
    t_lo, t_hi = math.sqrt(lo), math.sqrt(hi)
    out = np.zeros(a.shape, dtype=np.float64)
    order = np.argsort(a)
    for start in range(0, len(order), chunk):
        idx = order[start : start + chunk]
        roots = np.sqrt(a[idx])
        fastest = float(roots.max())
        period = 1 / (2 * fastest) if fastest > 0 else t_hi - t_lo

        def integrand(t: np.ndarray) -> np.ndarray:
            weight = 2 * t * F(t * t)
            return weight[:, None] * bessel_j_real(k, 4 * math.pi * np.outer(t, roots))

        panels = oscillation_panels(t_hi - t_lo, period, cfg)
        result = adaptive_integrate(integrand, t_lo, t_hi, cfg, min_panels=panels)
        out[idx] = 2 * math.pi * np.asarray(result.value)
    return out


def hankel_transform(
    F: SupportedFunction, k: int, a: float, cfg: Optional[QuadratureConfig] = None
) -> float:
    if a <= 0:
        raise InvalidParams(f"Hankel transform needs a > 0, got {a}")
    return float(hankel_transform_many(F, k, [a], cfg)[0])


def hankel_decay_point(
    g: SupportedFunction,
    k: int,
    threshold: float,
    cfg: Optional[QuadratureConfig] = None,
    samples: int = 64,
) -> float:
    """Smallest scanned A with |(H_k g)(a)| < threshold on [A, 4A]."""
    cfg = cfg or QuadratureConfig()
    A = 1.0
    while A < 1e7:
        grid = np.linspace(A, 4 * A, samples)
        if np.max(np.abs(hankel_transform_many(g, k, grid, cfg))) < threshold:
            return A
        A *= 2
    raise OutOfDomain(f"Hankel transform did not decay below {threshold}")


@dataclass
class DoubleHankel:
    value: float
    cutoff: float
    panels: int


def double_hankel(
    g: SupportedFunction,
    k: int,
    b: float,
    cfg: Optional[QuadratureConfig] = None,
    decay_point: Optional[float] = None,
) -> DoubleHankel:
    """(H_k H_k g)(b), the outer integral cut at 4A where |H_k g| has decayed past A."""
    cfg = cfg or QuadratureConfig()
    if b <= 0:
        raise InvalidParams(f"Inversion point must be positive, got {b}")
    A = decay_point or hankel_decay_point(g, k, cfg.abs_tol / cfg.safety, cfg)
    cut = 4 * A
    s_hi = math.sqrt(cut)

    # outer variable s = sqrt(a); both phases have constant period in s
    def integrand(s: np.ndarray) -> np.ndarray:
        inner = hankel_transform_many(g, k, s * s, cfg)
        return 2 * s * inner * bessel_j_real(k, 4 * math.pi * s * math.sqrt(b))

    _, hi = g.support
    period = 1 / (2 * (math.sqrt(b) + math.sqrt(hi)))
    panels = oscillation_panels(s_hi, period, cfg)
    result = adaptive_integrate(integrand, 0.0, s_hi, cfg, min_panels=panels)
    return DoubleHankel(
        value=2 * math.pi * float(result.value), cutoff=cut, panels=result.panels
    )


def hankel_inversion_check(
    g: SupportedFunction, k: int, b: float, cfg: Optional[QuadratureConfig] = None
) -> CheckResult:
    """|(H_k H_k g)(b) - g(b)|."""
    check_weight(k)
    twice = double_hankel(g, k, b, cfg)
    rhs = float(g(b))
    return CheckResult(
        exact=None,
        residual=abs(twice.value - rhs),
        lhs=twice.value,
        rhs=rhs,
        details={"cutoff": twice.cutoff, "panels": twice.panels},
    )


# Weber's exponential integral


def weber_closed_form(k: int, alpha: complex, beta: float, gamma: float) -> complex:
    """(i^(1-k) / (2 pi alpha)) J_{k-1}(4 pi i beta gamma / alpha) exp(-2 pi (beta^2 + gamma^2) / alpha)."""
    arg = 4j * math.pi * beta * gamma / alpha
    if abs(arg) > COMPLEX_BESSEL_DOMAIN:
        raise OutOfDomain(
            f"4 pi beta gamma / |alpha| = {abs(arg)} exceeds {COMPLEX_BESSEL_DOMAIN}"
        )
    bessel = complex(bessel_j(k, complex(arg)))
    return (
        i_power(1 - k)
        / (2 * math.pi * alpha)
        * bessel
        * cmath.exp(-2 * math.pi * (beta**2 + gamma**2) / alpha)
    )


def weber_check(
    k: int,
    alpha: complex,
    beta: float,
    gamma: float,
    cfg: Optional[QuadratureConfig] = None,
) -> CheckResult:
    """Quadrature of int e^(-2 pi alpha y) J(4 pi beta sqrt y) J(4 pi gamma sqrt y) dy against its closed form."""
    check_weight(k)
    cfg = cfg or QuadratureConfig()
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise InvalidParams(f"Weber integral needs Re alpha > 0, got {alpha}")
    if beta <= 0 or gamma <= 0:
        raise InvalidParams(f"beta and gamma must be positive, got {beta}, {gamma}")
    rhs = weber_closed_form(k, alpha, beta, gamma)
    Y = math.log(1 / cfg.abs_tol) / (2 * math.pi * alpha.real)
    t_hi = math.sqrt(Y)

    # y = t^2; the Bessel phases have period 1/(2 max(beta, gamma)) in t
    def integrand(t: np.ndarray) -> np.ndarray:
        decay = np.exp(-2 * math.pi * alpha * t * t)
        return (
            2
            * t
            * decay
            * bessel_j_real(k, 4 * math.pi * beta * t)
            * bessel_j_real(k, 4 * math.pi * gamma * t)
        )

    period = 1 / (2 * max(beta, gamma))
    if alpha.imag:
        period = min(period, 1 / (2 * abs(alpha.imag) * t_hi))
    panels = oscillation_panels(t_hi, period, cfg)
    result = adaptive_integrate(integrand, 0.0, t_hi, cfg, min_panels=panels)
    lhs = complex(result.value)
    return CheckResult(
        exact=None,
        residual=abs(lhs - rhs),
        lhs=lhs,
        rhs=rhs,
        details={"Y": Y, "panels": result.panels},
    )


def weber_real_frequency(
    k: int,
    alpha0: float,
    beta: float,
    gamma: float,
    epsilons: Tuple[float, ...] = (0.1, 0.05, 0.025),
) -> CheckResult:
    """Approach the real-frequency identity from alpha = eps - i alpha0 by Richardson extrapolation."""
    check_weight(k)
    if alpha0 == 0:
        raise InvalidParams("Real frequency alpha0 must be non-zero")
    values = [
        weber_closed_form(k, complex(eps, -alpha0), beta, gamma) for eps in epsilons
    ]
    # values(eps) = V + c1 eps + c2 eps^2 for halving eps
    first = [2 * values[i + 1] - values[i] for i in range(len(values) - 1)]
    extrapolated = first[0] if len(first) == 1 else (4 * first[1] - first[0]) / 3
    sign = 1 if alpha0 > 0 else -1
    limit = (
        1j
        * cmath.exp(2j * math.pi * sign * (k - 1) / 4)
        / (2 * math.pi * alpha0)
        * float(bessel_j(k, 4 * math.pi * beta * gamma / abs(alpha0)))
        * cmath.exp(-2j * math.pi * (beta**2 + gamma**2) / alpha0)
    )
    details: Dict[str, Any] = {
        "epsilons": list(epsilons),
        "relative": abs(extrapolated - limit) / max(abs(limit), 1e-300),
    }
    return CheckResult(
        exact=None,
        residual=abs(extrapolated - limit),
        lhs=extrapolated,
        rhs=limit,
        details=details,
    )

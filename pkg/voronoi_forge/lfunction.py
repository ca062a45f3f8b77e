#!/usr/bin/env python3
"""
Completed twisted L-functions from the Mellin integral

    Gamma(w) (2 pi)^(-w) L(s, f x chi) = int_0^inf f_chi(iy) y^w dy/y,
    w = s + (k-1)/2,  f_chi(iy) = sum a(n) chi(n) e^(-2 pi n y),

evaluated on a certified window [y_min, Y]. Below y_min the twisted
modularity estimate |f_chi(iy)| = (qy)^(-k) |f_chi-bar(i/(q^2 y))| bounds
the dropped mass; above Y the series is dominated by its first term.
Coefficients past the known precision are bounded through
|lambda(n)| <= d(n) <= 2 sqrt(n).
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import mpmath
import numpy as np
from scipy import special as sp

from .characters import DirichletCharacter, gauss_sum
from .errors import AccuracyNotCertified, NotPrimitive
from .modforms import Eigenform
from .quadrature import QuadratureConfig, adaptive_integrate, integrate
from .report import CheckResult
from .special import gamma_ratio, i_power

MAX_MODULUS = 7
MIN_WEIGHT, MAX_WEIGHT = 12, 26
MIN_SIGMA, MAX_SIGMA = -2.0, 4.0
MAX_HEIGHT = 5.0
DEFAULT_TARGET = 1e-6
FALLBACK_DPS = 30
NODE_CHUNK = 128


@dataclass
class CompletedLValue:
    """Lambda(s) with the bounds that certify it."""

    value: complex
    gamma_factor: complex
    y_min: float
    y_max: float
    lower_bound: float
    upper_bound: float
    coefficient_tail: float
    rounding: float
    quadrature_error: float
    working_dps: int

    @property
    def error_bound(self) -> float:
        return (
            self.lower_bound
            + self.upper_bound
            + self.coefficient_tail
            + self.rounding
            + self.quadrature_error
        )

    @property
    def l_value(self) -> complex:
        return self.value / self.gamma_factor


def mellin_gamma(k: int, s: complex) -> complex:
    """Gamma(s + (k-1)/2) (2 pi)^(-s - (k-1)/2)."""
    w = complex(s) + (k - 1) / 2
    return complex(np.exp(sp.loggamma(w) - w * math.log(2 * math.pi)))


def _check_window(f: Eigenform, chi: DirichletCharacter, s: complex) -> None:
    if not chi.is_primitive:
        raise NotPrimitive(f"Character {chi} is not primitive")
    inside = (
        chi.modulus <= MAX_MODULUS
        and MIN_WEIGHT <= f.weight <= MAX_WEIGHT
        and MIN_SIGMA <= s.real <= MAX_SIGMA
        and abs(s.imag) <= MAX_HEIGHT
    )
    if not inside:
        raise AccuracyNotCertified(
            f"s={s}, q={chi.modulus}, k={f.weight} is outside the certified window "
            f"q <= {MAX_MODULUS}, {MIN_WEIGHT} <= k <= {MAX_WEIGHT}, "
            f"{MIN_SIGMA} <= Re s <= {MAX_SIGMA}, |Im s| <= {MAX_HEIGHT}"
        )


def _coefficient_tail(k: int, N: int, y: float) -> float:
    """Bound on sum_{n > N} |a(n)| e^(-2 pi n y) from |a(n)| <= 2 n^(k/2)."""
    rate = 2 * math.pi * y
    integral = mpmath.gammainc(k / 2 + 1, rate * N) / mpmath.power(rate, k / 2 + 1)
    peak = mpmath.power(N, k / 2) * mpmath.exp(-rate * N)
    return float(2 * (integral + peak))


def _envelope(abs_lam: np.ndarray, k: int, y: float) -> float:
    """e^(2 pi y) sum_n |a(n)| e^(-2 pi n y), known terms plus the coefficient tail."""
    N = abs_lam.size - 1
    n = np.arange(1, N + 1, dtype=np.float64)
    terms = abs_lam[1:] * np.exp((k - 1) / 2 * np.log(n) - 2 * math.pi * (n - 1) * y)
    rate = 2 * math.pi * y
    tail = 2 * mpmath.exp(rate) * (
        mpmath.gammainc(k / 2 + 1, rate * N) / mpmath.power(rate, k / 2 + 1)
        + mpmath.power(N, k / 2) * mpmath.exp(-rate * N)
    )
    return float(np.sum(terms)) + float(tail)


def _lower_bound(
    abs_lam: np.ndarray, k: int, q: int, sigma: float, y_min: float
) -> float:
    """int_0^y_min |f_chi(iy)| y^(sigma + (k-3)/2) dy via the twisted modularity estimate."""
    t0 = 1 / (q * q * y_min)
    beta = sigma - (k + 3) / 2
    tail = mpmath.gammainc((k + 1) / 2 - sigma, 2 * math.pi * t0)
    scale = mpmath.power(q, -k) * mpmath.power(2 * math.pi / (q * q), beta + 1)
    return float(_envelope(abs_lam, k, t0) * scale * tail)


def _upper_bound(abs_lam: np.ndarray, k: int, sigma: float, Y: float) -> float:
    """int_Y^inf |f_chi(iy)| y^(sigma + (k-3)/2) dy from the first-coefficient envelope."""
    w = sigma + (k - 1) / 2
    tail = mpmath.power(2 * math.pi, -w) * mpmath.gammainc(w, 2 * math.pi * Y)
    return float(_envelope(abs_lam, k, Y) * tail)


def _window(
    abs_lam: np.ndarray, k: int, q: int, sigma: float, budget: float
) -> Tuple[float, float, float, float]:
    y_min = 0.5 / (q * q)
    for _ in range(60):
        lower = _lower_bound(abs_lam, k, q, sigma, y_min)
        if lower <= budget:
            break
        y_min /= 1.25
    else:
        raise AccuracyNotCertified(f"Small-y mass did not fall below {budget}")
    Y = 1.0
    for _ in range(60):
        upper = _upper_bound(abs_lam, k, sigma, Y)
        if upper <= budget:
            break
        Y *= 1.25
    else:
        raise AccuracyNotCertified(f"Large-y tail did not fall below {budget}")
    return y_min, Y, lower, upper


def _series_double(lam_chi: np.ndarray, k: int, y: np.ndarray) -> np.ndarray:
    """f_chi(iy) = sum lambda(n) chi(n) n^((k-1)/2) e^(-2 pi n y) on a vector of y."""
    n = np.arange(1, lam_chi.size, dtype=np.float64)
    log_n = np.log(n)
    out = np.empty(y.size, dtype=np.result_type(lam_chi, np.float64))
    for start in range(0, y.size, NODE_CHUNK):
        ys = y[start : start + NODE_CHUNK]
        scale = np.exp((k - 1) / 2 * log_n[:, None] - 2 * math.pi * np.outer(n, ys))
        out[start : start + NODE_CHUNK] = lam_chi[1:] @ scale
    return out


def _series_mp(lam_chi: np.ndarray, k: int, y: np.ndarray) -> np.ndarray:
    out = np.empty(y.size, dtype=np.complex128)
    with mpmath.workdps(FALLBACK_DPS):
        half = mpmath.mpf(k - 1) / 2
        weights = [
            mpmath.mpc(complex(c).real, complex(c).imag) * mpmath.power(n, half)
            for n, c in enumerate(lam_chi[1:], start=1)
        ]
        for i, yi in enumerate(y):
            decay = mpmath.exp(-2 * mpmath.pi * mpmath.mpf(float(yi)))
            term, total = mpmath.mpf(1), mpmath.mpc(0)
            for weight in weights:
                term *= decay
                total += weight * term
            out[i] = complex(total)
    return out


Series = Callable[[np.ndarray, int, np.ndarray], np.ndarray]


def completed_L(
    f: Eigenform,
    chi: DirichletCharacter,
    s: complex,
    cfg: Optional[QuadratureConfig] = None,
    target: float = DEFAULT_TARGET,
    panels: int = 16,
) -> CompletedLValue:
    """Certified Lambda(s, f x chi); refuses outside the certified window.

    `panels` is the initial Gauss-Legendre panel count in t = log y.
    """
    s = complex(s)
    _check_window(f, chi, s)
    k, q = f.weight, chi.modulus
    N = f.precision
    lam = np.asarray(f.lambda_array(N), dtype=np.float64)
    lam_chi = lam * chi.values(np.arange(N + 1))
    abs_lam = np.abs(lam)

    gamma = mellin_gamma(k, s)
    budget = target * abs(gamma) / 5
    cfg = cfg or QuadratureConfig(abs_tol=min(budget, 0.5), rel_tol=1e-10)
    y_min, Y, lower, upper = _window(abs_lam, k, q, s.real, budget)
    w = s + (k - 1) / 2
    exponent = s.real + (k - 3) / 2
    coefficient_tail = _coefficient_tail(k, N, y_min) * (
        (Y ** (exponent + 1) - y_min ** (exponent + 1)) / (exponent + 1)
    )
    t_lo, t_hi = math.log(y_min), math.log(Y)

    def integrand_for(series: Series) -> Callable[[np.ndarray], np.ndarray]:
        def integrand(t: np.ndarray) -> np.ndarray:
            return series(lam_chi, k, np.exp(t)) * np.exp(w * t)

        return integrand

    def magnitude(t: np.ndarray) -> np.ndarray:
        return _series_double(abs_lam, k, np.exp(t)) * np.exp(w.real * t)

    mass = float(integrate(magnitude, t_lo, t_hi, 4 * panels, cfg.nodes_per_panel))
    # pairwise summation over N terms, a few ulps per exponential
    dps = 15
    rounding = np.finfo(np.float64).eps * (math.log2(N) + 4) * mass
    series: Series = _series_double
    if rounding > budget:
        dps = FALLBACK_DPS
        rounding = 10.0 ** (1 - dps) * N * mass
        series = _series_mp
    result = adaptive_integrate(
        integrand_for(series), t_lo, t_hi, cfg, min_panels=panels
    )
    value = CompletedLValue(
        value=complex(result.value),
        gamma_factor=gamma,
        y_min=y_min,
        y_max=Y,
        lower_bound=lower,
        upper_bound=upper,
        coefficient_tail=coefficient_tail,
        rounding=float(rounding),
        quadrature_error=float(result.error),
        working_dps=dps,
    )
    relative = value.error_bound / abs(gamma)
    if relative > target:
        raise AccuracyNotCertified(
            f"Error bound {relative:.3e} on L({s}) exceeds target {target}"
        )
    return value


def l_value(
    f: Eigenform,
    chi: DirichletCharacter,
    s: complex,
    cfg: Optional[QuadratureConfig] = None,
    target: float = DEFAULT_TARGET,
) -> complex:
    return completed_L(f, chi, s, cfg, target).l_value


def dirichlet_series(
    f: Eigenform, chi: DirichletCharacter, s: complex, N: Optional[int] = None
) -> Tuple[complex, float]:
    """sum_{n <= N} lambda(n) chi(n) n^(-s) for Re s > 1, with a tail estimate.

    The tail is the smaller of the d(n)-envelope bound and the partial
    summation bound B N^(1/2 - sigma) (1 + |s|/(sigma - 1/2)), where B is
    the largest |sum_{m <= n} lambda(m) chi(m)| / sqrt(n) seen on [N/2, N].
    The second assumes the partial sums keep their square-root growth
    past N; near sigma = 2 it is the only one of the two that is useful.
    """
    s = complex(s)
    if s.real <= 1:
        raise AccuracyNotCertified(f"Dirichlet series needs Re s > 1, got {s}")
    N = N or f.precision
    lam = f.lambda_array(N)[1:]
    n = np.arange(1, N + 1, dtype=np.float64)
    twisted = lam * chi.values(n.astype(np.int64))
    value = complex(np.sum(twisted * np.exp(-s * np.log(n))))
    sigma = s.real
    envelope = 2 * N ** (1 - sigma) * (
        math.log(N) / (sigma - 1) + 1 / (sigma - 1) ** 2
    )
    partial = np.abs(np.cumsum(twisted))[N // 2 :] / np.sqrt(n[N // 2 :])
    growth = float(np.max(partial))
    summation = growth * N ** (0.5 - sigma) * (1 + abs(s) / (sigma - 0.5))
    return value, min(envelope, summation)


def functional_equation_check(
    f: Eigenform,
    chi: DirichletCharacter,
    s: complex,
    cfg: Optional[QuadratureConfig] = None,
    target: float = DEFAULT_TARGET,
) -> CheckResult:
    """|L(s) - i^k eps^2 q^(1-2s) (gamma(1-s)/gamma(s)) L(1-s, chi-bar)|."""
    s = complex(s)
    k, q = f.weight, chi.modulus
    eps = gauss_sum(chi).epsilon
    lhs = l_value(f, chi, s, cfg, target)
    dual = l_value(f, chi.conjugate(), 1 - s, cfg, target)
    factor = i_power(k) * eps * eps * q ** (1 - 2 * s) * complex(gamma_ratio(k, s))
    rhs = factor * dual
    return CheckResult(
        exact=None,
        residual=abs(lhs - rhs),
        lhs=lhs,
        rhs=rhs,
        details={"root_number": i_power(k) * eps * eps},
    )

#!/usr/bin/env python3
"""
Geometric side of the Petersson formula and the summation identities built
on it: the twisted trace identity and the Voronoi formula.

Spectral averages are never formed from Petersson norms. They are computed
as delta(n = l) + 2 pi i^(-k) sum_c S(n, l; c)/c J_{k-1}(4 pi sqrt(nl)/c),
with the c-sum cut where an explicit tail bound falls below tolerance.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .characters import DirichletCharacter, gauss_sum
from .errors import InvalidParams, NotPrimitive, PrecisionExhausted, ToleranceNotMet
from .expsums import kloosterman_row
from .modforms import Eigenform
from .quadrature import QuadratureConfig
from .report import CheckResult
from .residues import mod_inverse
from .special import (
    CompactFunction,
    SupportedFunction,
    TestFunction,
    bessel_j_real,
    check_weight,
    hankel_transform_many,
    i_power,
)

MAX_KERNEL_CUTOFF = 200_000
DECAY_WINDOW = 20
MAX_DUAL_TERMS = 10**6


# Kloosterman-Bessel kernel


def kernel_tail_bound(k: int, n_ell: float, C: int, mass: float = 1.0) -> float:
    """Bound on mass * sum_{c > C} |S/c J_{k-1}(4 pi sqrt(n l)/c)|, valid for C >= 4 pi sqrt(n l).

    Uses |S(n, l; c)| <= c and |J_{k-1}(y)| <= e^(1/4) (y/2)^(k-1)/(k-1)! on y <= 1.
    """
    if C < 4 * math.pi * math.sqrt(n_ell):
        return math.inf
    log_bound = (
        math.log(mass)
        + 0.25
        + (k - 1) * math.log(2 * math.pi * math.sqrt(n_ell))
        - math.lgamma(k)
        - math.log(k - 2)
        - (k - 2) * math.log(C)
    )
    return math.exp(log_bound)


def kernel_cutoff(
    k: int, n_ell: float, tol: float, mass: float = 1.0
) -> Tuple[int, float]:
    """Smallest C >= 4 pi sqrt(n l) whose tail bound is below tol."""
    if mass <= 0:
        return max(1, math.ceil(4 * math.pi * math.sqrt(n_ell))), 0.0
    log_c = (
        math.log(mass)
        + 0.25
        + (k - 1) * math.log(2 * math.pi * math.sqrt(n_ell))
        - math.lgamma(k)
        - math.log(k - 2)
        - math.log(tol)
    ) / (k - 2)
    C = max(1, math.ceil(4 * math.pi * math.sqrt(n_ell)), math.ceil(math.exp(log_c)))
    return C, kernel_tail_bound(k, n_ell, C, mass)


@dataclass
class KernelResult:
    """sum_{c <= cutoff} S(n, l; c)/c J_{k-1}(4 pi sqrt(n l)/c) for every n."""

    values: np.ndarray
    cutoff: int
    tail_bound: float


def kloosterman_bessel_kernel(
    k: int, ell: int, n_values: Any, tol: float = 1e-10
) -> KernelResult:
    """Off-diagonal Petersson sums for many n at once, one Kloosterman FFT per c."""
    check_weight(k)
    if ell < 1:
        raise InvalidParams(f"ell must be positive, got {ell}")
    n = np.atleast_1d(np.asarray(n_values, dtype=np.int64))
    if n.size == 0:
        return KernelResult(values=np.zeros(0), cutoff=0, tail_bound=0.0)
    if np.any(n < 1):
        raise InvalidParams("Petersson indices must be positive")
    C, tail = kernel_cutoff(k, float(n.max()) * ell, tol)
    if C > MAX_KERNEL_CUTOFF:
        raise ToleranceNotMet(
            f"Kloosterman-Bessel sum needs c up to {C}, above {MAX_KERNEL_CUTOFF}"
        )
    roots = 4 * math.pi * np.sqrt(n.astype(np.float64) * ell)
    total = np.zeros(n.shape, dtype=np.float64)
    for c in range(1, C + 1):
        row = kloosterman_row(ell, c)
        total += row[n % c] / c * bessel_j_real(k, roots / c)
    return KernelResult(values=total, cutoff=C, tail_bound=tail)


def petersson_row(
    k: int, ell: int, n_values: Any, tol: float = 1e-10
) -> Tuple[np.ndarray, KernelResult]:
    """G_k(l, n) = delta(n = l) + 2 pi i^(-k) K(l, n) for every n."""
    kernel = kloosterman_bessel_kernel(k, ell, n_values, tol / (2 * math.pi))
    n = np.atleast_1d(np.asarray(n_values, dtype=np.int64))
    values = 2 * math.pi * i_power(-k).real * kernel.values
    values = values + (n == ell)
    return values, kernel


@dataclass
class PeterssonValue:
    k: int
    ell: int
    n: int
    value: float
    truncation_c: int
    tail_bound: float


def petersson_geometric(k: int, ell: int, n: int, tol: float = 1e-10) -> PeterssonValue:
    """Harmonic average of lambda(l) lambda(n) from the geometric side."""
    if n < 1:
        raise InvalidParams(f"n must be positive, got {n}")
    values, kernel = petersson_row(k, ell, [n], tol)
    return PeterssonValue(
        k=k,
        ell=ell,
        n=n,
        value=float(values[0]),
        truncation_c=kernel.cutoff,
        tail_bound=2 * math.pi * kernel.tail_bound,
    )


def petersson_dim1_factorization(
    k: int, m: int, n: int, tol: float = 1e-10
) -> CheckResult:
    """Rank-one defect |G(m,n) G(1,1) - G(m,1) G(n,1)|; zero when dim S_k = 1."""
    if m < 1 or n < 1:
        raise InvalidParams(f"m and n must be positive, got {m}, {n}")
    g_mn = petersson_geometric(k, m, n, tol).value
    g_11 = petersson_geometric(k, 1, 1, tol).value
    g_m1 = petersson_geometric(k, m, 1, tol).value
    g_n1 = petersson_geometric(k, n, 1, tol).value
    lhs = g_mn * g_11
    rhs = g_m1 * g_n1
    return CheckResult(exact=None, residual=abs(lhs - rhs), lhs=lhs, rhs=rhs)


# Dual sums weighted by the Hankel transform


@dataclass
class DualSeries:
    """(H_k g)(n/q^2) for n = 1..N, N fixed by windowed decay detection."""

    n: np.ndarray
    hankel: np.ndarray
    threshold: float
    window_start: int
    certificate: Dict[str, Any] = field(default_factory=dict)


def dual_series(
    g: SupportedFunction,
    k: int,
    q: int,
    cfg: Optional[QuadratureConfig] = None,
    block: int = 256,
) -> DualSeries:
    """Scan n until |(H_k g)(n/q^2)| < abs_tol/(safety n) on DECAY_WINDOW consecutive n.

    The scan only starts counting once the Bessel argument at the lower end
    of supp g has passed the order k - 1, beyond which H_k g can only decay.
    """
    cfg = cfg or QuadratureConfig()
    lo, _ = g.support
    a_turn = ((k - 1) / (4 * math.pi)) ** 2 / lo
    window_start = max(1, math.ceil(a_turn * q * q))
    base = cfg.abs_tol / cfg.safety
    chunks = []
    run = 0
    start = 1
    while start <= MAX_DUAL_TERMS:
        ns = np.arange(start, start + block, dtype=np.int64)
        values = hankel_transform_many(g, k, ns / (q * q), cfg)
        for i in range(block):
            small = ns[i] >= window_start and abs(values[i]) < base / ns[i]
            run = run + 1 if small else 0
            if run >= DECAY_WINDOW:
                chunks.append(values[: i + 1])
                hankel = np.concatenate(chunks)
                return DualSeries(
                    n=np.arange(1, hankel.size + 1, dtype=np.int64),
                    hankel=hankel,
                    threshold=base,
                    window_start=window_start,
                    certificate={"terms": int(hankel.size), "window": DECAY_WINDOW},
                )
        chunks.append(values)
        start += block
    raise ToleranceNotMet(
        f"(H_k g)(n/q^2) did not decay below {base}/n within {MAX_DUAL_TERMS} terms"
    )


def _scaled(g: SupportedFunction, scale: float) -> SupportedFunction:
    if scale == 1.0:
        return g
    if isinstance(g, TestFunction):
        return g.scaled(scale)
    fn = g.fn
    return CompactFunction(lambda x: scale * fn(x), g.lo, g.hi)


def _integer_points(g: SupportedFunction) -> np.ndarray:
    lo, hi = g.support
    return np.arange(max(1, math.floor(lo) + 1), math.ceil(hi), dtype=np.int64)


def main_identity_check(
    k: int,
    chi: DirichletCharacter,
    ell: int,
    g: SupportedFunction,
    cfg: Optional[QuadratureConfig] = None,
    scale: float = 1.0,
) -> CheckResult:
    """sum chi(n) g(n) G(l, n) against i^k (eps^2/q) sum chi-bar(n) G(l, n) (H_k g)(n/q^2)."""
    check_weight(k)
    if not chi.is_primitive:
        raise NotPrimitive(f"Character {chi} is not primitive")
    if ell < 1:
        raise InvalidParams(f"ell must be positive, got {ell}")
    cfg = cfg or QuadratureConfig()
    g = _scaled(g, scale)
    q = chi.modulus
    eps = gauss_sum(chi).epsilon
    tol = cfg.abs_tol / cfg.safety

    n_lhs = _integer_points(g)
    lhs = 0j
    if n_lhs.size:
        G_lhs, _ = petersson_row(k, ell, n_lhs, tol)
        lhs = complex(np.sum(chi.values(n_lhs) * g(n_lhs) * G_lhs))

    dual = dual_series(g, k, q, cfg)
    G_dual, kernel = petersson_row(k, ell, dual.n, tol)
    weights = np.conj(chi.values(dual.n)) * G_dual * dual.hankel
    rhs = complex(i_power(k) * eps * eps / q * np.sum(weights))
    return CheckResult(
        exact=None,
        residual=abs(lhs - rhs),
        lhs=lhs,
        rhs=rhs,
        details={
            "dual_terms": int(dual.n.size),
            "kernel_cutoff": kernel.cutoff,
            "kernel_tail": kernel.tail_bound,
        },
    )


def voronoi_check(
    f: Eigenform,
    q: int,
    a: int,
    g: SupportedFunction,
    cfg: Optional[QuadratureConfig] = None,
    lambda_perturbation: Optional[Tuple[int, float]] = None,
    dual: Optional[DualSeries] = None,
) -> CheckResult:
    """sum lambda(n) e_q(an) g(n) against (i^k/q) sum lambda(n) e_q(-a-bar n) (H_k g)(n/q^2).

    `dual` is the precomputed dual_series(g, k, q, cfg); it does not depend on a.
    """
    k = f.weight
    if q < 1:
        raise InvalidParams(f"Modulus must be positive, got {q}")
    if math.gcd(a, q) != 1:
        raise InvalidParams(f"Need gcd(a, q) = 1, got a={a}, q={q}")
    cfg = cfg or QuadratureConfig()
    a_bar = mod_inverse(a % q, q)

    if dual is None:
        dual = dual_series(g, k, q, cfg)
    n_lhs = _integer_points(g)
    n_max = int(max(dual.n.max(), n_lhs.max() if n_lhs.size else 0))
    if n_max > f.precision:
        raise PrecisionExhausted(
            f"Voronoi sums need lambda up to {n_max}, {f.label} known to {f.precision}"
        )
    lam = np.array(f.lambda_array(n_max), dtype=np.float64)
    if lambda_perturbation is not None:
        n0, delta = lambda_perturbation
        if not 1 <= n0 <= n_max:
            raise InvalidParams(f"Perturbed index {n0} outside 1..{n_max}")
        lam[n0] += delta

    twists = np.exp(2j * math.pi * (a * n_lhs % q) / q)
    lhs = complex(np.sum(lam[n_lhs] * twists * g(n_lhs)))
    phases = np.exp(-2j * math.pi * (a_bar * dual.n % q) / q)
    rhs = complex(i_power(k) / q * np.sum(lam[dual.n] * phases * dual.hankel))
    return CheckResult(
        exact=None,
        residual=abs(lhs - rhs),
        lhs=lhs,
        rhs=rhs,
        details={"dual_terms": int(dual.n.size), "a_bar": a_bar},
    )

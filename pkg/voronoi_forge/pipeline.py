#!/usr/bin/env python3
"""
Staged evaluation of the twisted Petersson sum

    I_k(l; chi) = sum_n chi(n) g(n) G_k(l, n)

along the chain of transformations that turns it into the dual side.
Each stage is computed from its own formula with its own truncation:

    A  the sum itself, G_k from the Kloosterman-Bessel kernel
    B  Poisson in n modulo cq, the dual character sums split along
       c = c0 c' (c0 | q^inf), one folded FFT per modulus c
    C  after the second Poisson step: a sum over the dual variable weighted
       by (H_k g)(n/q^2) and the kernel, minus the cancelled term g(l) chi(l)
    D  (optional) after the analytic preparation and before the arithmetic
       one: for each m >= 1 the weights chi(c') e_{c0 m}(l q inv(c')) times
       the alpha-sum mod c0, against an x-integral of (H_k g)(x/q^2)

B, C and D share the head g(l) chi(l) + i^(-k) (eps^2/q) chi-bar(l) (H_k g)(l/q^2).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .characters import DirichletCharacter, gauss_sum
from .cyclotomic import cyc_is_zero
from .errors import InvalidParams, NotPrimitive, ToleranceNotMet
from .expsums import d_chi, unit_table
from .quadrature import QuadratureConfig, adaptive_integrate, oscillation_panels
from .report import CheckResult
from .residues import divisors, mod_inverse, q_part, smooth_parts
from .special import (
    SupportedFunction,
    bessel_j_real,
    check_weight,
    double_hankel,
    hankel_decay_point,
    hankel_transform,
    hankel_transform_many,
    i_power,
)
from .spectral import dual_series, kernel_cutoff, petersson_row

STAGES = ("A", "B", "C", "D")
STAGE_D_TOLERANCE = 1e-4
NYQUIST_WINDOW = 20
FOURIER_DENSITY = 128
MAX_FOURIER_DENSITY = 4096
STAGE_D_DENSITY = 32
MAX_STAGE_D_DENSITY = 256


@dataclass
class StageValue:
    value: complex
    certificate: Dict[str, Any] = field(default_factory=dict)


@dataclass
class PipelineTrace:
    """Values of every computed stage, each with its truncation certificate."""

    stage_a: StageValue
    stage_b: StageValue
    stage_c: StageValue
    stage_d: Optional[StageValue]
    max_pairwise_residual: float
    zeroth_frequency_direct: complex
    zeroth_frequency_closed: complex
    t2_branch: Optional[complex] = None

    def stages(self) -> Dict[str, StageValue]:
        found = {"A": self.stage_a, "B": self.stage_b, "C": self.stage_c}
        if self.stage_d is not None:
            found["D"] = self.stage_d
        return found

    def check(self) -> CheckResult:
        return CheckResult(
            exact=None,
            residual=self.max_pairwise_residual,
            lhs=self.stage_a.value,
            rhs=self.stage_c.value,
            details={
                name: stage.value for name, stage in self.stages().items()
            },
        )


@dataclass
class _Setup:
    k: int
    chi: DirichletCharacter
    ell: int
    g: SupportedFunction
    cfg: QuadratureConfig
    q: int
    eps: complex

    @property
    def tol(self) -> float:
        return self.cfg.abs_tol / self.cfg.safety


def _inverse_array(values: np.ndarray, n: int) -> np.ndarray:
    """Elementwise inverse modulo n by vectorized extended Euclid; 0 where not invertible."""
    a = np.asarray(values, dtype=np.int64) % n
    if n == 1:
        return np.zeros_like(a)
    r0, r1 = np.full(a.shape, n, dtype=np.int64), a.copy()
    s0, s1 = np.zeros_like(a), np.ones_like(a)
    while np.any(r1 != 0):
        live = r1 != 0
        quotient = np.where(live, r0 // np.where(live, r1, 1), 0)
        r0, r1 = np.where(live, r1, r0), np.where(live, r0 - quotient * r1, r1)
        s0, s1 = np.where(live, s1, s0), np.where(live, s0 - quotient * s1, s1)
    return np.where(r0 == 1, s0 % n, 0)


def _phase(numerators: Any, modulus: int) -> np.ndarray:
    """e(x / modulus) on integer arrays."""
    reduced = np.asarray(numerators, dtype=np.int64) % modulus
    return np.exp(2j * math.pi * reduced / modulus)


def _head(setup: _Setup) -> Tuple[complex, complex]:
    """(g(l) chi(l), i^(-k) (eps^2/q) chi-bar(l) (H_k g)(l/q^2))."""
    chi, ell, q = setup.chi, setup.ell, setup.q
    diagonal = complex(float(setup.g(ell)) * chi(ell))
    hankel = hankel_transform(setup.g, setup.k, ell / (q * q), setup.cfg)
    zeroth = i_power(-setup.k) * setup.eps**2 / q * np.conj(chi(ell)) * hankel
    return diagonal, complex(zeroth)


# Stage A


def _stage_a(setup: _Setup) -> StageValue:
    lo, hi = setup.g.support
    n = np.arange(max(1, math.floor(lo) + 1), math.ceil(hi), dtype=np.int64)
    if n.size == 0:
        return StageValue(0j, {"terms": 0})
    G, kernel = petersson_row(setup.k, setup.ell, n, setup.tol)
    value = complex(np.sum(setup.chi.values(n) * setup.g(n) * G))
    return StageValue(
        value,
        {
            "terms": int(n.size),
            "kernel_cutoff": kernel.cutoff,
            "kernel_tail": kernel.tail_bound,
        },
    )


# Stage B


@lru_cache(maxsize=4096)
def _alpha_table(chi: DirichletCharacter, ell: int, c0: int, cp_inv: int) -> np.ndarray:
    """sum*_{alpha mod c0, m = -alpha q (c0)} e_c0(l inv(alpha c')) chi-bar((alpha q + m)/c0), for m mod c0 q.

    Residues m = -alpha q + c0 t run over the admissible m for alpha, and
    (alpha q + m)/c0 = t modulo q.
    """
    q = chi.modulus
    alphas, inverses = unit_table(c0)
    t = np.arange(q, dtype=np.int64)
    index = (-alphas[:, None] * q + c0 * t[None, :]) % (c0 * q)
    phases = _phase(ell * inverses * cp_inv, c0)
    values = phases[:, None] * np.conj(chi.values(t))[None, :]
    table = np.zeros(c0 * q, dtype=np.complex128)
    np.add.at(table, index.ravel(), values.ravel())
    table.setflags(write=False)
    return table


def dual_weights(chi: DirichletCharacter, ell: int, c: int) -> np.ndarray:
    """Poisson-dual weights T(c, m) for m mod cq, assembled from the c = c0 c' split.

    T(c, m) = chi(c') e_c'(-l q inv(c0 m)) sum*_alpha(...), zero unless (m, c') = 1.
    """
    q = chi.modulus
    split = q_part(c, q)
    c0, cp = split.c0, split.c_prime
    A = _alpha_table(chi, ell, c0, mod_inverse(cp % c0, c0))
    B = np.zeros(cp, dtype=np.complex128)
    units_cp, inverses_cp = unit_table(cp)
    B[units_cp] = _phase(-ell * q * mod_inverse(c0 % cp, cp) * inverses_cp, cp)
    r = np.arange(c * q, dtype=np.int64)
    return chi(cp) * A[r % (c0 * q)] * B[r % cp]


def _zero_frequency_sum(chi: DirichletCharacter, ell: int, c: int) -> complex:
    """sum*_{x mod c, c | xq} e_c(l x-bar) chi-bar(qx/c) by explicit enumeration."""
    q = chi.modulus
    total = 0j
    for x, x_bar in zip(*unit_table(c)):
        if (int(x) * q) % c:
            continue
        total += complex(_phase(ell * int(x_bar), c)) * np.conj(chi(int(x) * q // c))
    return total


@dataclass
class _FourierSamples:
    values: np.ndarray
    density: int
    nyquist: float


def _fourier_samples(
    fn: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    period: int,
    density: int,
    threshold: float,
) -> _FourierSamples:
    """int fn(y) e(-m y/period) dy for every m mod period*density.

    Samples y = j/density are folded modulo the FFT length. The density
    doubles until the NYQUIST_WINDOW frequencies on each side of the
    Nyquist index are below threshold.
    """
    while density <= MAX_FOURIER_DENSITY:
        size = period * density
        j = np.arange(
            math.ceil(lo * density), math.floor(hi * density) + 1, dtype=np.int64
        )
        samples = fn(j / density)
        folded = np.bincount(j % size, weights=samples, minlength=size)
        values = np.fft.fft(folded) / density
        half = size // 2
        window = np.arange(half - NYQUIST_WINDOW, half + NYQUIST_WINDOW) % size
        nyquist = float(np.max(np.abs(values[window])))
        if nyquist < threshold:
            return _FourierSamples(values, density, nyquist)
        density *= 2
    raise ToleranceNotMet(
        f"Fourier transform did not decay below {threshold} at density {MAX_FOURIER_DENSITY}"
    )


def _stage_b_dual_sum(setup: _Setup) -> Tuple[complex, Dict[str, Any]]:
    """2 pi i^(-k) (eps/sqrt q) sum_c (1/c) sum_{m != 0} T(c, m) int g(y) J(4 pi sqrt(yl)/c) e(-my/(cq)) dy."""
    k, ell, q, g = setup.k, setup.ell, setup.q, setup.g
    lo, hi = g.support
    n = np.arange(max(1, math.floor(lo) + 1), math.ceil(hi), dtype=np.int64)
    mass = float(np.sum(np.abs(g(n)))) if n.size else 0.0
    C, tail = kernel_cutoff(k, hi * ell, setup.tol / (2 * math.pi), mass)
    density = FOURIER_DENSITY
    worst = 0.0
    total = 0j
    for c in range(1, C + 1):
        period = c * q

        def integrand(y: np.ndarray, c: int = c) -> np.ndarray:
            return g(y) * bessel_j_real(k, 4 * math.pi * np.sqrt(y * ell) / c)

        threshold = setup.tol / C
        samples = _fourier_samples(integrand, lo, hi, period, density, threshold)
        density, worst = samples.density, max(worst, samples.nyquist)
        tiled = np.tile(dual_weights(setup.chi, ell, c), samples.density)
        # only m = 0 itself belongs to the head, not m = 0 mod cq
        tiled[0] = 0
        total += np.sum(tiled * samples.values) / c
    value = 2 * math.pi * i_power(-k) * setup.eps / math.sqrt(q) * total
    return complex(value), {
        "c_cutoff": C,
        "c_tail": 2 * math.pi * tail,
        "density": density,
        "nyquist": worst,
    }


def zeroth_frequency(setup: _Setup) -> complex:
    """The m = 0 Poisson terms from their defining sums and integrals; only c | q survive."""
    k, ell, q, g = setup.k, setup.ell, setup.q, setup.g
    lo, hi = g.support
    total = 0j
    for c in divisors(q):
        weight = _zero_frequency_sum(setup.chi, ell, c)
        if weight == 0:
            continue

        def integrand(y: np.ndarray, c: int = c) -> np.ndarray:
            return g(y) * bessel_j_real(k, 4 * math.pi * np.sqrt(y * ell) / c)

        period = c * math.sqrt(lo / ell)
        panels = oscillation_panels(hi - lo, period, setup.cfg)
        result = adaptive_integrate(integrand, lo, hi, setup.cfg, min_panels=panels)
        total += weight * float(result.value) / c
    return complex(2 * math.pi * i_power(-k) * setup.eps / math.sqrt(q) * total)


# Stage C


def _stage_c_dual_sum(setup: _Setup) -> Tuple[complex, Dict[str, Any]]:
    """2 pi (eps^2/q) sum_n chi-bar(n) K(l, n) (H_k g)(n/q^2) - g(l) chi(l)."""
    dual = dual_series(setup.g, setup.k, setup.q, setup.cfg)
    G, kernel = petersson_row(setup.k, setup.ell, dual.n, setup.tol)
    # K(l, n) = (G - delta(n = l)) / (2 pi i^(-k))
    off_diagonal = (G - (dual.n == setup.ell)) * i_power(-setup.k).real
    weights = np.conj(setup.chi.values(dual.n)) * off_diagonal * dual.hankel
    value = setup.eps**2 / setup.q * np.sum(weights)
    value -= float(setup.g(setup.ell)) * setup.chi(setup.ell)
    return complex(value), {
        "dual_terms": int(dual.n.size),
        "kernel_cutoff": kernel.cutoff,
        "kernel_tail": kernel.tail_bound,
    }


def t2_branch(setup: _Setup) -> complex:
    """-(2 pi/q)(eps/sqrt q) sum_{m0 | q} (1/m0) D(0; m0, 1) int (H_k g)(x/q^2) J(4 pi sqrt(lx)/m0) dx.

    The x-integral is q^2 (H_k H_k g)(l q^2/m0^2)/(2 pi).
    """
    k, ell, q = setup.k, setup.ell, setup.q
    total = 0j
    for m0 in divisors(q):
        weight = d_chi(setup.chi, ell, 0, m0, 1)
        if cyc_is_zero(weight.exact):
            continue
        twice = double_hankel(setup.g, k, ell * q * q / (m0 * m0), setup.cfg)
        total += weight.numeric / m0 * q * q * twice.value / (2 * math.pi)
    return complex(-2 * math.pi / q * setup.eps / math.sqrt(q) * total)


# Stage D


def _stage_d_weights(
    chi: DirichletCharacter, ell: int, m: int, c: np.ndarray
) -> np.ndarray:
    """chi(c') e_{c0 m}(l q inv(c')) sum*_alpha(...) for nonzero c = c0 c', zero elsewhere."""
    q = chi.modulus
    weights = np.zeros(c.shape, dtype=np.complex128)
    limit = int(np.max(np.abs(c))) if c.size else 0
    for c0 in smooth_parts(q, limit):
        alphas, inverses = unit_table(c0)
        admissible = (alphas * q + m) % c0 == 0
        if not np.any(admissible):
            continue
        index = np.nonzero((c % c0 == 0) & (c != 0))[0]
        cp = c[index] // c0
        keep = (np.gcd(cp, q) == 1) & (np.gcd(cp, m) == 1)
        index, cp = index[keep], cp[keep]
        if not index.size:
            continue
        cp_inv = _inverse_array(cp, c0)
        alpha_sum = np.zeros(cp.shape, dtype=np.complex128)
        for alpha, alpha_bar in zip(alphas[admissible], inverses[admissible]):
            t = (int(alpha) * q + m) // c0
            alpha_sum += _phase(ell * int(alpha_bar) * cp_inv, c0) * np.conj(chi(t))
        outer = _phase(ell * q * _inverse_array(cp, c0 * m), c0 * m)
        weights[index] = chi.values(cp) * outer * alpha_sum
    return weights


def _stage_d_transform(
    hankel: np.ndarray, j: np.ndarray, k: int, ell: int, q: int, m: int, density: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Frequencies c and int (H_k g)(x/q^2) J(4 pi sqrt(lx)/m) e(cx/(qm)) dx on x = j/density."""
    size = q * m * density
    samples = hankel * bessel_j_real(k, 4 * math.pi * np.sqrt(ell * j / density) / m)
    folded = np.bincount(j % size, weights=samples, minlength=size)
    transform = np.fft.ifft(folded) * (size / density)
    frequencies = np.rint(np.fft.fftfreq(size, d=1.0 / size)).astype(np.int64)
    return frequencies, transform


def _stage_d_dual_sum(setup: _Setup) -> Tuple[complex, Dict[str, Any]]:
    """(2 pi/q)(eps/sqrt q) sum_{m >= 1} (1/m) sum_{c != 0} W(m, c) int_0^X (H_k g)(x/q^2) J(4 pi sqrt(lx)/m) e(cx/(qm)) dx.

    X = q^2 A with |H_k g| below abs_tol past A. The grid density is fixed
    on m = 1, where J(4 pi sqrt(lx)/m) varies fastest.
    """
    k, ell, q, cfg = setup.k, setup.ell, setup.q, setup.cfg
    A = hankel_decay_point(setup.g, k, cfg.abs_tol, cfg)
    X = q * q * A
    density = STAGE_D_DENSITY
    while True:
        j = np.arange(1, math.floor(X * density) + 1, dtype=np.int64)
        hankel = hankel_transform_many(setup.g, k, j / (density * q * q), cfg)
        _, first = _stage_d_transform(hankel, j, k, ell, q, 1, density)
        half = first.size // 2
        window = np.arange(half - NYQUIST_WINDOW, half + NYQUIST_WINDOW) % first.size
        nyquist = float(np.max(np.abs(first[window])))
        if nyquist < STAGE_D_TOLERANCE / (cfg.safety * first.size):
            break
        density *= 2
        if density > MAX_STAGE_D_DENSITY:
            raise ToleranceNotMet(
                f"Stage D x-grid did not resolve the integrand at density {MAX_STAGE_D_DENSITY}"
            )

    mass = float(np.sum(np.abs(hankel))) / density
    m_max, tail = kernel_cutoff(k, ell * X, cfg.abs_tol / cfg.safety, mass)
    total = 0j
    for m in range(1, m_max + 1):
        frequencies, transform = _stage_d_transform(hankel, j, k, ell, q, m, density)
        weights = _stage_d_weights(setup.chi, ell, m, frequencies)
        total += np.sum(weights * transform) / m
    value = 2 * math.pi / q * setup.eps / math.sqrt(q) * total
    return complex(value), {
        "x_cutoff": X,
        "m_cutoff": m_max,
        "m_tail": tail,
        "density": density,
        "nyquist": nyquist,
    }


def _make_setup(
    k: int,
    chi: DirichletCharacter,
    ell: int,
    g: SupportedFunction,
    cfg: Optional[QuadratureConfig],
) -> _Setup:
    check_weight(k)
    if not chi.is_primitive:
        raise NotPrimitive(f"Character {chi} is not primitive")
    if ell < 1:
        raise InvalidParams(f"ell must be positive, got {ell}")
    return _Setup(
        k=k,
        chi=chi,
        ell=ell,
        g=g,
        cfg=cfg or QuadratureConfig(),
        q=chi.modulus,
        eps=gauss_sum(chi).epsilon,
    )


def pipeline_trace(
    k: int,
    chi: DirichletCharacter,
    ell: int,
    g: SupportedFunction,
    cfg: Optional[QuadratureConfig] = None,
    stages: Sequence[str] = ("A", "B", "C"),
    with_t2: bool = True,
) -> PipelineTrace:
    """Evaluate I_k(l; chi) at every requested stage; A, B and C are always computed."""
    unknown = set(stages) - set(STAGES)
    if unknown:
        raise InvalidParams(
            f"Unknown pipeline stages {sorted(unknown)}; choose from {STAGES}"
        )
    setup = _make_setup(k, chi, ell, g, cfg)
    diagonal, zeroth = _head(setup)
    head = diagonal + zeroth

    stage_a = _stage_a(setup)
    value_b, cert_b = _stage_b_dual_sum(setup)
    stage_b = StageValue(head + value_b, cert_b)
    value_c, cert_c = _stage_c_dual_sum(setup)
    stage_c = StageValue(head + value_c, cert_c)
    stage_d = None
    if "D" in stages:
        value_d, cert_d = _stage_d_dual_sum(setup)
        stage_d = StageValue(head + value_d, {**cert_d, "tolerance": STAGE_D_TOLERANCE})

    computed = [stage_a, stage_b, stage_c] + ([stage_d] if stage_d else [])
    residual = max(abs(x.value - y.value) for x, y in combinations(computed, 2))
    return PipelineTrace(
        stage_a=stage_a,
        stage_b=stage_b,
        stage_c=stage_c,
        stage_d=stage_d,
        max_pairwise_residual=float(residual),
        zeroth_frequency_direct=zeroth_frequency(setup),
        zeroth_frequency_closed=zeroth,
        t2_branch=t2_branch(setup) if with_t2 else None,
    )


def zeroth_frequency_check(
    k: int,
    chi: DirichletCharacter,
    ell: int,
    g: SupportedFunction,
    cfg: Optional[QuadratureConfig] = None,
) -> CheckResult:
    """The m = 0 Poisson terms by direct quadrature against their closed form."""
    setup = _make_setup(k, chi, ell, g, cfg)
    _, closed = _head(setup)
    direct = zeroth_frequency(setup)
    return CheckResult(
        exact=None, residual=abs(direct - closed), lhs=direct, rhs=closed
    )


def t2_branch_check(
    k: int,
    chi: DirichletCharacter,
    ell: int,
    g: SupportedFunction,
    cfg: Optional[QuadratureConfig] = None,
) -> CheckResult:
    """The zero-frequency branch of the second Poisson step against -g(l) chi(l)."""
    setup = _make_setup(k, chi, ell, g, cfg)
    branch = t2_branch(setup)
    expected = -complex(float(g(ell)) * chi(ell))
    return CheckResult(
        exact=None, residual=abs(branch - expected), lhs=branch, rhs=expected
    )

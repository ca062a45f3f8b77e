#!/usr/bin/env python3
"""
Finite exponential sums and exact verifiers for their identities.

Every sum is assembled as a vector of exponents j of zeta_L (one entry per
term) and turned into a CyclotomicElement in one pass; the double-precision
value is summed from the same phases. Verifiers compare both sides exactly
in Z[zeta_L] first and report the numeric residual alongside.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, sqrt
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .characters import DirichletCharacter, character_product, gauss_sum
from .cyclotomic import CyclotomicElement, common_order, cyc_from_exponents, cyc_root
from .errors import InvalidParams, NotPrimitive
from .report import CheckResult
from .residues import divides_power, divisors, mod_inverse, q_part, units


@dataclass(frozen=True)
class SumValue:
    """Exact value in Z[zeta_L] together with its double-precision value."""

    exact: CyclotomicElement
    numeric: complex


def _phase_sum(L: int, exponents: Union[Sequence[int], np.ndarray]) -> SumValue:
    exps = np.asarray(exponents, dtype=np.int64) % L
    exact = cyc_from_exponents(L, exps)
    numeric = complex(np.exp(2j * np.pi * exps / L).sum()) if exps.size else 0j
    return SumValue(exact=exact, numeric=numeric)


def _relative_gap(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


@lru_cache(maxsize=1024)
def unit_table(c: int) -> Tuple[np.ndarray, np.ndarray]:
    """Units x mod c and their inverses, as int64 arrays."""
    xs = np.array(units(c), dtype=np.int64)
    inv = np.array([mod_inverse(int(x), c) for x in xs], dtype=np.int64)
    return xs, inv


# Kloosterman sums


def kloosterman(m: int, n: int, c: int) -> SumValue:
    """S(m, n; c) = sum over units x mod c of e_c(m x + n x-bar)."""
    if c < 1:
        raise ValueError(f"Kloosterman modulus must be positive, got {c}")
    xs, inv = unit_table(c)
    exps = ((m % c) * xs + (n % c) * inv) % c
    return _phase_sum(c, exps)


def kloosterman_row(ell: int, c: int) -> np.ndarray:
    """Real vector of S(g, ell; c) for g = 0..c-1 from one inverse FFT."""
    xs, inv = unit_table(c)
    weights = np.zeros(c, dtype=np.complex128)
    weights[xs] = np.exp(2j * np.pi * ((ell % c) * inv % c) / c)
    return np.real(np.fft.ifft(weights)) * c


def selberg_factorization_check(m: int, n: int, c: int) -> CheckResult:
    """S(m,n;c) against sum_{d | (m,n,c)} d S(1, mn/d^2; c/d)."""
    if m < 1 or n < 1 or c < 1:
        raise ValueError(
            f"selberg_factorization_check needs m, n, c >= 1: {m}, {n}, {c}"
        )
    lhs = kloosterman(m, n, c)
    rhs_exact = cyc_from_exponents(c, [])
    rhs_num = 0j
    for d in divisors(gcd(gcd(m, n), c)):
        term = kloosterman(1, m * n // (d * d), c // d)
        rhs_exact = rhs_exact + term.exact * d
        rhs_num += d * term.numeric
    return CheckResult(
        exact=(lhs.exact - rhs_exact).is_zero(),
        residual=abs(lhs.numeric - rhs_num),
        lhs=lhs.numeric.real,
        rhs=rhs_num.real,
    )


# The four-variable character sum


@dataclass(frozen=True)
class CharSumParams:
    """Arguments of C_psi^h(a, u, b, v) with psi a character mod r."""

    psi: DirichletCharacter
    h: int
    a: int
    u: int
    b: int
    v: int

    @property
    def r(self) -> int:
        return self.psi.modulus

    def validate(self) -> None:
        if self.a < 1 or self.b < 1:
            raise InvalidParams(f"a and b must be positive, got a={self.a}, b={self.b}")
        if not divides_power(self.a * self.b, self.r):
            raise InvalidParams(
                f"ab={self.a * self.b} does not divide a power of r={self.r}"
            )
        if gcd(self.u * self.v, self.r) != 1:
            raise InvalidParams(
                f"gcd(uv, r) must be 1, got u={self.u}, v={self.v}, r={self.r}"
            )

    def swapped(self) -> "CharSumParams":
        return CharSumParams(self.psi, self.h, self.b, self.v, self.a, self.u)


def char_sum_C(p: CharSumParams) -> SumValue:
    """psi(u) sum*_{alpha mod a, bv = -alpha r (a)} e_a(h inv(alpha u)) psi-bar((alpha r + bv)/a)."""
    p.validate()
    psi, a, r = p.psi, p.a, p.r
    E = psi.base
    L = common_order(a, E)
    t_u = psi.log(p.u)
    assert t_u is not None
    exps: List[int] = []
    for alpha in units(a):
        shifted = alpha * r + p.b * p.v
        if shifted % a:
            continue
        t = psi.log(shifted // a)
        if t is None:
            continue
        inv = mod_inverse(alpha * p.u, a)
        exps.append((p.h * inv % a) * (L // a) + (t_u - t) * (L // E))
    return _phase_sum(L, exps)


def verify_reciprocity(p: CharSumParams, flip_sign: bool = False) -> CheckResult:
    """C(a,u,b,v) = e_ab(-h r inv(uv)) conj(C(b,v,a,u)), exactly.

    flip_sign negates the exponent of the e_ab factor.
    """
    p.validate()
    lhs = char_sum_C(p)
    dual = char_sum_C(p.swapped())
    ab = p.a * p.b
    shift = (-p.h * p.r * mod_inverse(p.u * p.v, ab)) % ab
    if flip_sign:
        shift = -shift
    twist = cyc_root(ab, shift)
    rhs_exact = twist * dual.exact.conj()
    rhs_num = np.exp(2j * np.pi * shift / ab) * dual.numeric.conjugate()
    return CheckResult(
        exact=(lhs.exact - rhs_exact).is_zero(),
        residual=abs(lhs.numeric - rhs_num),
        lhs=lhs.numeric,
        rhs=complex(rhs_num),
    )


def verify_multiplicativity(
    psi1: DirichletCharacter,
    psi2: DirichletCharacter,
    a1: int,
    b1: int,
    a2: int,
    b2: int,
    h: int,
    u: int,
    v: int,
) -> CheckResult:
    """Both CRT factorizations of C_{psi1 psi2}^h(a1 a2, u, b1 b2, v)."""
    r1, r2 = psi1.modulus, psi2.modulus
    if gcd(r1, r2) != 1:
        raise InvalidParams(f"Moduli must be coprime, got {r1} and {r2}")
    psi = character_product(psi1, psi2)
    lhs = char_sum_C(CharSumParams(psi, h, a1 * a2, u, b1 * b2, v))

    conj1, conj2 = psi1.conjugate(), psi2.conjugate()

    def variant(w1: int, w2: int, first: bool) -> Tuple[CyclotomicElement, complex]:
        # w1, w2 are the scaling factors a2*b2 and a1*b1 moved onto u or v
        u1, v1 = (w1 * u, v) if first else (u, w1 * v)
        u2, v2 = (w2 * u, v) if first else (u, w2 * v)
        c1 = CharSumParams(psi1, h * r2, a1, u1, b1, v1)
        c2 = CharSumParams(psi2, h * r1, a2, u2, b2, v2)
        s1, s2 = char_sum_C(c1), char_sum_C(c2)
        n1, n2 = (b2 * b2, b1 * b1) if first else (a2 * a2, a1 * a1)
        f1, f2 = conj1.exact(n1), conj2.exact(n2)
        assert f1 is not None and f2 is not None
        exact = f1 * f2 * s1.exact * s2.exact
        numeric = conj1(n1) * conj2(n2) * s1.numeric * s2.numeric
        return exact, numeric

    first_exact, first_num = variant(a2 * b2, a1 * b1, True)
    second_exact, second_num = variant(a2 * b2, a1 * b1, False)
    ok_first = (lhs.exact - first_exact).is_zero()
    ok_second = (lhs.exact - second_exact).is_zero()
    return CheckResult(
        exact=ok_first and ok_second,
        residual=max(abs(lhs.numeric - first_num), abs(lhs.numeric - second_num)),
        lhs=lhs.numeric,
        rhs=first_num,
        details={"first_variant": ok_first, "second_variant": ok_second},
    )


def support_predicate(s: int, t: int, k: int) -> bool:
    """True in the three cases s = t <= k, t = k < s, s = k < t."""
    return (s == t and s <= k) or (t == k < s) or (s == k < t)


def verify_support_claim(
    psi: DirichletCharacter, p: int, k: int, h: int, u: int, v: int, s: int, t: int
) -> CheckResult:
    """Outside the three allowed cases both C(p^s,u,p^t,v) and C(p^t,v,p^s,u) vanish.

    The converse (allowed case implies non-zero) is reported in details only.
    """
    if psi.modulus != p**k:
        raise InvalidParams(f"Character modulus {psi.modulus} is not {p}^{k}")
    forward = char_sum_C(CharSumParams(psi, h, p**s, u, p**t, v))
    backward = char_sum_C(CharSumParams(psi, h, p**t, v, p**s, u))
    vanishes = forward.exact.is_zero() and backward.exact.is_zero()
    allowed = support_predicate(s, t, k)
    return CheckResult(
        exact=allowed or vanishes,
        residual=0.0 if allowed else abs(forward.numeric) + abs(backward.numeric),
        lhs=forward.numeric,
        rhs=backward.numeric,
        details={"allowed": allowed, "vanishes": vanishes},
    )


# Fourier transform of chi(gamma) S(gamma, ell; c)


def dft_d(chi: DirichletCharacter, ell: int, m: int, c: int) -> SumValue:
    """sum_{gamma mod cq} chi(gamma) S(gamma, ell; c) e_{cq}(m gamma)."""
    if c < 1:
        raise ValueError(f"dft_d modulus must be positive, got {c}")
    q = chi.modulus
    cq = c * q
    E = chi.base
    L = common_order(cq, E)
    gammas = np.arange(cq, dtype=np.int64)
    t = chi.exponent_table[gammas % q]
    mask = t >= 0
    gammas, t = gammas[mask], t[mask]
    xs, inv = unit_table(c)
    # gamma along rows, units x along columns
    kl = (np.outer(gammas % c, xs) + (ell % c) * inv[None, :]) % c
    exps = (
        t[:, None] * (L // E)
        + kl * (L // c)
        + ((m % cq) * gammas % cq)[:, None] * (L // cq)
    )
    return _phase_sum(L, exps.ravel())


def verify_dft_duality(
    chi: DirichletCharacter, ell: int, m: int, c: int, mutate_root_number: bool = False
) -> CheckResult:
    """D(m,c) = eps^2 (c/m) conj(D(c,m)) e(-1/(mc)) for primitive chi.

    The exact side checks m conj(G) D(m,c) = c G conj(D(c,m)) zeta_{mc}^{-1},
    with G the un-normalized Gauss sum. mutate_root_number uses |eps|^2 = 1
    in place of eps^2.
    """
    if not chi.is_primitive:
        raise NotPrimitive(f"Character {chi} is not primitive")
    if m < 1 or c < 1:
        raise ValueError(f"verify_dft_duality needs m, c >= 1, got m={m}, c={c}")
    forward = dft_d(chi, ell, m, c)
    backward = dft_d(chi, ell, c, m)
    twist = cyc_root(m * c, -1)
    if mutate_root_number:
        lhs_exact = forward.exact * m
        rhs_exact = backward.exact.conj() * twist * c
        eps_sq = 1.0 + 0j
    else:
        g = gauss_sum(chi)
        lhs_exact = g.exact.conj() * forward.exact * m
        rhs_exact = g.exact * backward.exact.conj() * twist * c
        eps_sq = g.epsilon**2
    twist_num = np.exp(-2j * np.pi / (m * c))
    rhs_num = eps_sq * (c / m) * backward.numeric.conjugate() * twist_num
    return CheckResult(
        exact=(lhs_exact - rhs_exact).is_zero(),
        residual=_relative_gap(forward.numeric, complex(rhs_num)),
        lhs=forward.numeric,
        rhs=complex(rhs_num),
    )


# Supplementary identities along the Poisson and reciprocity steps


def verify_additive_reciprocity(m: int, c: int) -> CheckResult:
    """inv(m mod c)/c + inv(c mod m)/m - 1/(mc) is an integer for coprime m, c."""
    if m < 1 or c < 1 or gcd(m, c) != 1:
        raise InvalidParams(f"Additive reciprocity needs coprime m, c >= 1: {m}, {c}")
    total = (
        Fraction(mod_inverse(m, c), c)
        + Fraction(mod_inverse(c, m), m)
        - Fraction(1, m * c)
    )
    return CheckResult(
        exact=total.denominator == 1,
        residual=float(abs(total - round(total))),
        lhs=float(total),
        rhs=float(round(total)),
    )


def _restricted_sum(
    chi: DirichletCharacter,
    modulus: int,
    shift: int,
    ell_scale: int,
    char_sign: int,
    outer: Optional[Tuple[int, int]] = None,
) -> SumValue:
    """sum*_{x mod modulus, shift = -x q (modulus)} e_modulus(ell_scale inv(x)) chi^sign((x q + shift)/modulus).

    outer=(n, e) multiplies every term by zeta_n^e.
    """
    q = chi.modulus
    E = chi.base
    n, e = outer if outer is not None else (1, 0)
    L = common_order(modulus, E, n)
    exps: List[int] = []
    for x in units(modulus):
        value = x * q + shift
        if value % modulus:
            continue
        t = chi.log(value // modulus)
        if t is None:
            continue
        phase = ell_scale * mod_inverse(x, modulus) % modulus
        exps.append(phase * (L // modulus) + char_sign * t * (L // E) + e * (L // n))
    return _phase_sum(L, exps)


def verify_split_identity(
    chi: DirichletCharacter, ell: int, c: int, m: int
) -> CheckResult:
    """Split of the dual character sum along c = c0 c' with c0 = (c, q^inf)."""
    q = chi.modulus
    lhs = _restricted_sum(chi, c, m, ell, -1)
    split = q_part(c, q)
    c0, cp = split.c0, split.c_prime
    if gcd(m, cp) != 1:
        rhs = SumValue(exact=cyc_from_exponents(1, []), numeric=0j)
    else:
        t = chi.log(cp)
        assert t is not None
        # chi(c') e_{c'}(-ell q inv(c0 m)) folded into every term
        inner_order = common_order(cp, chi.base)
        outer = (-ell * q * mod_inverse(c0 * m, cp)) % cp * (inner_order // cp) + t * (
            inner_order // chi.base
        )
        rhs = _restricted_sum(
            chi, c0, m, ell * mod_inverse(cp, c0), -1, outer=(inner_order, outer)
        )
    return CheckResult(
        exact=(lhs.exact - rhs.exact).is_zero(),
        residual=abs(lhs.numeric - rhs.numeric),
        lhs=lhs.numeric,
        rhs=rhs.numeric,
        details={"c0": c0, "c_prime": cp},
    )


def verify_recombination(
    chi: DirichletCharacter, ell: int, c0: int, cp: int, m0: int, mp: int
) -> CheckResult:
    """e_{c0 m0 m'}(ell q inv(c')) C(c0,c',m0,m') = e_{m'}(ell q inv(c0 c' m0)) conj(C(m0,m',c0,c'))."""
    q = chi.modulus
    if gcd(cp, mp * q) != 1 or gcd(mp, q) != 1:
        raise InvalidParams(
            f"Need gcd(c', m' q) = gcd(m', q) = 1, got c'={cp}, m'={mp}"
        )
    lhs_sum = char_sum_C(CharSumParams(chi, ell, c0, cp, m0, mp))
    rhs_sum = char_sum_C(CharSumParams(chi, ell, m0, mp, c0, cp))
    n_left = c0 * m0 * mp
    e_left = ell * q * mod_inverse(cp, n_left) % n_left
    e_right = ell * q * mod_inverse(c0 * cp * m0, mp) % mp
    lhs_exact = cyc_root(n_left, e_left) * lhs_sum.exact
    rhs_exact = cyc_root(mp, e_right) * rhs_sum.exact.conj()
    lhs_num = np.exp(2j * np.pi * e_left / n_left) * lhs_sum.numeric
    rhs_num = np.exp(2j * np.pi * e_right / mp) * rhs_sum.numeric.conjugate()
    return CheckResult(
        exact=(lhs_exact - rhs_exact).is_zero(),
        residual=abs(lhs_num - rhs_num),
        lhs=complex(lhs_num),
        rhs=complex(rhs_num),
    )


def d_chi(chi: DirichletCharacter, ell: int, c: int, m0: int, mp: int) -> SumValue:
    """delta((c,m')=1) chi-bar(m') e_{m'}(ell q inv(c m0)) sum*_{alpha mod m0, c = -alpha q (m0)} e_{m0}(-ell inv(alpha m')) chi((alpha q + c)/m0)."""
    q = chi.modulus
    if gcd(mp, q) != 1 or not divides_power(m0, q):
        raise InvalidParams(f"Need m0 | q^inf and gcd(m', q) = 1, got m0={m0}, m'={mp}")
    if gcd(c, mp) != 1:
        return SumValue(exact=cyc_from_exponents(1, []), numeric=0j)
    t = chi.log(mp)
    assert t is not None
    order = common_order(mp, chi.base)
    outer = (ell * q * mod_inverse(c * m0, mp)) % mp * (order // mp) - t * (
        order // chi.base
    )
    return _restricted_sum(
        chi, m0, c, -ell * mod_inverse(mp, m0), 1, outer=(order, outer)
    )


def verify_dual_gauss(
    chi: DirichletCharacter, ell: int, c: int, m0: int, mp: int
) -> CheckResult:
    """m q D(c; m0, m') = G conj(dft_d(chi, ell, c, m)) with m = m0 m'."""
    if not chi.is_primitive:
        raise NotPrimitive(f"Character {chi} is not primitive")
    q = chi.modulus
    m = m0 * mp
    d = d_chi(chi, ell, c, m0, mp)
    transform = dft_d(chi, ell, c, m)
    g = gauss_sum(chi)
    lhs_exact = d.exact * (m * q)
    rhs_exact = g.exact * transform.exact.conj()
    lhs_num = m * q * d.numeric
    rhs_num = sqrt(q) * g.epsilon * transform.numeric.conjugate()
    return CheckResult(
        exact=(lhs_exact - rhs_exact).is_zero(),
        residual=_relative_gap(lhs_num, rhs_num),
        lhs=lhs_num,
        rhs=rhs_num,
    )

#!/usr/bin/env python3
"""
Dirichlet characters stored by generator exponents.

The generating set of (Z/qZ)^x is fixed for reproducible exponent vectors:
prime powers in increasing order, a primitive root for odd p^e, -1 for 4,
and the pair (-1, 5) for 2^e with e >= 3. Characters are addressed
externally as "q:e1,e2,..." in that generator order.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from .cyclotomic import CyclotomicElement, common_order, cyc_from_exponents, cyc_root
from .errors import NotPrimitive, OutOfRange
from .report import CheckResult
from .residues import crt_pair, factorize, is_prime, primitive_root

MAX_CHARACTER_MODULUS = 10**4


@dataclass(frozen=True)
class _Component:
    """One prime-power factor of the modulus and its local generators."""

    p: int
    e: int
    modulus: int
    local_generators: Tuple[int, ...]
    orders: Tuple[int, ...]


def _components(q: int) -> List[_Component]:
    comps = []
    for p, e in factorize(q).factors:
        pe = p**e
        if p == 2:
            if e == 1:
                comps.append(_Component(2, 1, 2, (), ()))
            elif e == 2:
                comps.append(_Component(2, 2, 4, (3,), (2,)))
            else:
                comps.append(_Component(2, e, pe, (pe - 1, 5), (2, 2 ** (e - 2))))
        else:
            g = primitive_root(p)
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            comps.append(_Component(p, e, pe, (g,), (pe - pe // p,)))
    return comps


class CharacterGroup:
    """Structure of (Z/qZ)^x: global generators, orders and discrete logs."""

    def __init__(self, q: int) -> None:
        if q < 1 or q > MAX_CHARACTER_MODULUS:
            raise OutOfRange(
                f"Character modulus must be in [1, {MAX_CHARACTER_MODULUS}], got {q}"
            )
        self.modulus = q
        self.components = _components(q)
        generators: List[int] = []
        orders: List[int] = []
        for comp in self.components:
            rest = q // comp.modulus
            for g, n in zip(comp.local_generators, comp.orders):
                # g locally, 1 at every other prime power
                generators.append(crt_pair(g, comp.modulus, 1, rest))
                orders.append(n)
        self.generators: Tuple[int, ...] = tuple(generators)
        self.orders: Tuple[int, ...] = tuple(orders)
        exponent = 1
        for n in orders:
            exponent = exponent // gcd(exponent, n) * n
        self.exponent = exponent
        self._log_table: Optional[Dict[int, Tuple[int, ...]]] = None
        self._lock = threading.Lock()

    def _local_logs(self, comp: _Component) -> Dict[int, Tuple[int, ...]]:
        table: Dict[int, Tuple[int, ...]] = {}
        if not comp.orders:
            table[1 % comp.modulus] = ()
        elif len(comp.orders) == 1:
            g, n = comp.local_generators[0], comp.orders[0]
            x = 1
            for t in range(n):
                table[x] = (t,)
                x = x * g % comp.modulus
        else:
            m = comp.modulus
            x = 1
            for b in range(comp.orders[1]):
                table[x] = (0, b)
                table[(-x) % m] = (1, b)
                x = x * 5 % m
        return table

    @property
    def log_table(self) -> Dict[int, Tuple[int, ...]]:
        """Discrete logs of every unit mod q on the fixed generators."""
        if self._log_table is None:
            with self._lock:
                if self._log_table is None:
                    local = [(c.modulus, self._local_logs(c)) for c in self.components]
                    table: Dict[int, Tuple[int, ...]] = {}
                    for n in range(self.modulus):
                        if gcd(n, self.modulus) != 1:
                            continue
                        logs: Tuple[int, ...] = ()
                        for m, lt in local:
                            logs += lt[n % m]
                        table[n] = logs
                    self._log_table = table
        return self._log_table

    def characters(self) -> List["DirichletCharacter"]:
        return [
            DirichletCharacter(self.modulus, tuple(exps))
            for exps in product(*(range(n) for n in self.orders))
        ]


_groups: Dict[int, CharacterGroup] = {}
_groups_lock = threading.Lock()


def get_character_group(q: int) -> CharacterGroup:
    with _groups_lock:
        group = _groups.get(q)
        if group is None:
            group = CharacterGroup(q)
            _groups[q] = group
    return group


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod q given by exponents k_i: chi(g_i) = e(k_i / n_i)."""

    modulus: int
    exponents: Tuple[int, ...]

    def __post_init__(self) -> None:
        group = get_character_group(self.modulus)
        if len(self.exponents) != len(group.orders):
            raise ValueError(
                f"Character mod {self.modulus} needs {len(group.orders)} exponents, "
                f"got {self.exponents}"
            )
        reduced = tuple(k % n for k, n in zip(self.exponents, group.orders))
        object.__setattr__(self, "exponents", reduced)

    @property
    def group(self) -> CharacterGroup:
        return get_character_group(self.modulus)

    @property
    def base(self) -> int:
        """Common order E of all character values of the group."""
        return self.group.exponent

    @cached_property
    def order(self) -> int:
        result = 1
        for k, n in zip(self.exponents, self.group.orders):
            o = n // gcd(k, n)
            result = result // gcd(result, o) * o
        return result

    @cached_property
    def exponent_table(self) -> np.ndarray:
        """chi(n) = zeta_E^table[n mod q]; entry -1 marks non-units."""
        group = self.group
        E = group.exponent
        weights = [k * (E // n) for k, n in zip(self.exponents, group.orders)]
        table = np.full(self.modulus, -1, dtype=np.int64)
        for n, logs in group.log_table.items():
            table[n] = sum(w * t for w, t in zip(weights, logs)) % E
        return table

    def log(self, n: int) -> Optional[int]:
        t = int(self.exponent_table[n % self.modulus])
        return None if t < 0 else t

    def phase(self, n: int) -> Optional[Fraction]:
        t = self.log(n)
        return None if t is None else Fraction(t, self.base)

    def __call__(self, n: int) -> complex:
        t = self.log(n)
        if t is None:
            return 0j
        return complex(np.exp(2j * np.pi * t / self.base))

    def values(self, n: np.ndarray) -> np.ndarray:
        """Vectorized complex values on an integer array."""
        t = self.exponent_table[np.asarray(n, dtype=np.int64) % self.modulus]
        out = np.exp(2j * np.pi * t / self.base)
        out[t < 0] = 0
        return out

    def exact(self, n: int, L: Optional[int] = None) -> Optional[CyclotomicElement]:
        """chi(n) as a root of unity in Z[zeta_L] (L defaults to E)."""
        t = self.log(n)
        if t is None:
            return None
        E = self.base
        L = E if L is None else L
        return cyc_root(L, t * (L // E))

    @cached_property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @cached_property
    def is_real(self) -> bool:
        return self.order <= 2

    @cached_property
    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        t = self.log(-1)
        return 1 if t == 0 else -1

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-k for k in self.exponents))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus != self.modulus:
            return character_product(self, other)
        return DirichletCharacter(
            self.modulus, tuple(a + b for a, b in zip(self.exponents, other.exponents))
        )

    @cached_property
    def conductor(self) -> int:
        return conductor(self)[0]

    @cached_property
    def is_primitive(self) -> bool:
        return conductor(self)[1]

    def __str__(self) -> str:
        return f"{self.modulus}:" + ",".join(str(k) for k in self.exponents)


def character_group(q: int) -> List[DirichletCharacter]:
    """All phi(q) characters mod q, principal first, lexicographic in exponents."""
    return get_character_group(q).characters()


def primitive_characters(q: int) -> List[DirichletCharacter]:
    return [chi for chi in character_group(q) if chi.is_primitive]


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def conductor(chi: DirichletCharacter) -> Tuple[int, bool]:
    """Smallest f | q through which chi factors, and whether f = q."""
    f = 1
    position = 0
    for comp in chi.group.components:
        ks = chi.exponents[position : position + len(comp.orders)]
        position += len(comp.orders)
        if comp.p != 2:
            n = comp.orders[0]
            o = n // gcd(ks[0], n)
            local = 0 if o == 1 else 1 + _valuation(o, comp.p)
        elif comp.e == 1:
            local = 0
        elif comp.e == 2:
            local = 2 if ks[0] % 2 else 0
        else:
            n5 = comp.orders[1]
            o5 = n5 // gcd(ks[1], n5)
            if o5 > 1:
                local = 2 + _valuation(o5, 2)
            else:
                local = 2 if ks[0] % 2 else 0
        f *= comp.p**local
    return f, f == chi.modulus


def character_from_exponents(q: int, exponents: Tuple[int, ...]) -> DirichletCharacter:
    return DirichletCharacter(q, tuple(exponents))


def parse_character(text: str) -> DirichletCharacter:
    """Parse "q:e1,e2" (or "q" for the principal character)."""
    modulus_text, _, exps_text = text.partition(":")
    try:
        q = int(modulus_text)
        exps = tuple(int(e) for e in exps_text.split(",") if e.strip())
    except ValueError:
        raise ValueError(f"Character must be given as q:e1,e2,..., got '{text}'")
    if not exps:
        exps = tuple(0 for _ in get_character_group(q).orders)
    return DirichletCharacter(q, exps)


def quadratic_character(q: int) -> DirichletCharacter:
    """The primitive real character mod an odd prime q, or mod 4."""
    if q == 4:
        return DirichletCharacter(4, (1,))
    if not (q > 2 and is_prime(q)):
        raise ValueError(f"quadratic_character expects an odd prime or 4, got {q}")
    return DirichletCharacter(q, ((q - 1) // 2,))


def character_product(
    chi1: DirichletCharacter, chi2: DirichletCharacter
) -> DirichletCharacter:
    """The character n -> chi1(n) chi2(n) mod r1*r2 for coprime r1, r2."""
    r1, r2 = chi1.modulus, chi2.modulus
    if gcd(r1, r2) != 1:
        raise ValueError(f"character_product needs coprime moduli, got {r1}, {r2}")
    group = get_character_group(r1 * r2)
    exps = []
    for g, n in zip(group.generators, group.orders):
        phase = (chi1.phase(g) or 0) + (chi2.phase(g) or 0)
        k = phase * n
        assert k.denominator == 1
        exps.append(int(k))
    return DirichletCharacter(r1 * r2, tuple(exps))


@dataclass(frozen=True)
class GaussSum:
    """Exact sum_alpha chi(alpha) zeta_q^alpha and the normalized epsilon."""

    exact: CyclotomicElement
    epsilon: complex


def gauss_sum(chi: DirichletCharacter) -> GaussSum:
    q = chi.modulus
    E = chi.base
    L = common_order(q, E)
    alphas = np.arange(q)
    t = chi.exponent_table[alphas]
    mask = t >= 0
    exps = t[mask] * (L // E) + alphas[mask] * (L // q)
    exact = cyc_from_exponents(L, exps)
    numeric = np.exp(2j * np.pi * (t[mask] / E + alphas[mask] / q)).sum()
    return GaussSum(exact=exact, epsilon=complex(numeric) / sqrt(q))


def primitive_twist_relation(chi: DirichletCharacter, m: int) -> CheckResult:
    """sum_alpha chi(alpha) e_q(alpha m) against sqrt(q) eps chi-bar(m)."""
    if not chi.is_primitive:
        raise NotPrimitive(f"Character {chi} is not primitive")
    q = chi.modulus
    E = chi.base
    L = common_order(q, E)
    alphas = np.arange(q)
    t = chi.exponent_table[alphas]
    mask = t >= 0
    lhs_exact = cyc_from_exponents(L, t[mask] * (L // E) + alphas[mask] * m * (L // q))
    lhs_num = complex(
        np.exp(2j * np.pi * (t[mask] / E + (alphas[mask] * m % q) / q)).sum()
    )

    gauss = gauss_sum(chi)
    chi_bar_m = chi.conjugate().exact(m, L)
    if chi_bar_m is None:
        rhs_exact = lhs_exact * 0
        rhs_num = 0j
    else:
        rhs_exact = gauss.exact * chi_bar_m
        rhs_num = sqrt(q) * gauss.epsilon * chi.conjugate()(m)
    return CheckResult(
        exact=(lhs_exact - rhs_exact).is_zero(),
        residual=abs(lhs_num - rhs_num),
        lhs=lhs_num,
        rhs=rhs_num,
    )

#!/usr/bin/env python3
"""
Verification suites: seeded parameter sweeps over every identity.

A suite is a generator of (check, params, tolerance) triples registered with
`registry.suite`; each check name maps to an evaluator registered with
`registry.check`. Parameters are kept JSON-ready (characters as "q:e1,e2",
eigenforms by label) so cases can be shipped to worker processes and written
to the report unchanged.
"""

import time
import zlib
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .characters import (
    DirichletCharacter,
    character_group,
    gauss_sum,
    parse_character,
    primitive_characters,
    primitive_twist_relation,
    quadratic_character,
)
from .config import SuiteConfig
from .errors import (
    AccuracyNotCertified,
    ConfigError,
    InvalidParams,
    NotPrimitive,
    OutOfDomain,
    OutOfRange,
    PrecisionExhausted,
    ToleranceNotMet,
)
from .expsums import (
    CharSumParams,
    selberg_factorization_check,
    verify_dft_duality,
    verify_multiplicativity,
    verify_reciprocity,
    verify_support_claim,
)
from .lfunction import dirichlet_series, functional_equation_check, l_value
from .modforms import dimension, eigenform_by_label, eigenforms
from .pipeline import (
    STAGE_D_TOLERANCE,
    pipeline_trace,
    t2_branch_check,
    zeroth_frequency_check,
)
from .quadrature import QuadratureConfig
from .report import CheckResult, VerificationReport
from .residues import divisors, is_prime, smooth_parts, units
from .special import (
    TestFunction,
    hankel_inversion_check,
    mellin_barnes_check,
    weber_check,
)
from .spectral import (
    DualSeries,
    dual_series,
    main_identity_check,
    petersson_dim1_factorization,
    petersson_geometric,
    voronoi_check,
)
from .utils import traced

ALL = "all"
MASK64 = (1 << 64) - 1

# errors that turn a case into a failing record instead of aborting the run
NUMERIC_ERRORS = (ToleranceNotMet, PrecisionExhausted, AccuracyNotCertified)
SETUP_ERRORS = (InvalidParams, NotPrimitive, OutOfRange, OutOfDomain)


class SplitMix64:
    """64-bit splitmix generator; constants fixed so sweeps reproduce anywhere."""

    INCREMENT = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    @classmethod
    def for_suite(cls, seed: int, suite: str) -> "SplitMix64":
        return cls(seed ^ zlib.crc32(suite.encode("utf-8")))

    def next(self) -> int:
        self.state = (self.state + self.INCREMENT) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MIX1) & MASK64
        z = ((z ^ (z >> 27)) * self.MIX2) & MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"randbelow needs n >= 1, got {n}")
        return self.next() % n

    def choice(self, items: Sequence[Any]) -> Any:
        return items[self.randbelow(len(items))]


@dataclass
class Case:
    suite: str
    index: int
    check: str
    params: Dict[str, Any]
    tolerance: float

    def report_params(self) -> Dict[str, Any]:
        return {"check": self.check, **self.params}


CaseItem = Tuple[str, Dict[str, Any], float]
Evaluator = Callable[[Dict[str, Any], SuiteConfig], CheckResult]


class SuiteRegistry:
    """Registry of sweep generators and the checks that evaluate their cases."""

    def __init__(self) -> None:
        self._suites: Dict[str, Dict[str, Any]] = {}
        self._checks: Dict[str, Evaluator] = {}

    def suite(self, name: str, description: Optional[str] = None) -> Any:
        """Decorator registering a generator `(cfg, rng) -> Iterator[CaseItem]`."""

        def decorator(func: Callable) -> Callable:
            doc = (func.__doc__ or f"Suite: {name}").strip().splitlines()[0]
            self._suites[name] = {"function": func, "description": description or doc}
            return func

        return decorator

    def check(self, name: str) -> Any:
        """Decorator registering an evaluator `(params, cfg) -> CheckResult`."""

        def decorator(func: Evaluator) -> Evaluator:
            self._checks[name] = func
            return func

        return decorator

    @property
    def names(self) -> List[str]:
        return list(self._suites)

    def describe(self, name: str) -> str:
        return str(self._suites[name]["description"])

    def expand(self, name: str) -> List[str]:
        if name == ALL:
            return self.names
        if name not in self._suites:
            raise ConfigError(
                f"Unknown suite '{name}'; choose from {', '.join(self.names + [ALL])}"
            )
        return [name]

    def cases(self, name: str, cfg: SuiteConfig, seed: int) -> List[Case]:
        """Materialize the sweep of one suite in deterministic order."""
        if name not in self._suites:
            raise ConfigError(f"Unknown suite '{name}'")
        rng = SplitMix64.for_suite(seed, name)
        try:
            items = list(self._suites[name]["function"](cfg, rng))
        except SETUP_ERRORS as e:
            raise ConfigError(f"Suite {name}: {e}") from e
        return [
            Case(suite=name, index=i, check=check, params=params, tolerance=tol)
            for i, (check, params, tol) in enumerate(items)
        ]

    def evaluate(self, case: Case, cfg: SuiteConfig) -> CheckResult:
        return self._checks[case.check](case.params, cfg)


registry = SuiteRegistry()


def execute_case(
    case: Case,
    cfg: SuiteConfig,
    seed: int,
    trace: bool = False,
    timing: bool = False,
) -> Tuple[VerificationReport, Optional[str]]:
    """Run one case; numeric failures become failing records with their message."""
    evaluate = traced(registry.evaluate, f"verify/{case.suite}", trace)
    params = case.report_params()
    start = time.perf_counter()
    try:
        check = evaluate(case, cfg)
    except NUMERIC_ERRORS as e:
        record = VerificationReport.failure(case.suite, params, case.tolerance, seed)
        return record, f"{type(e).__name__}: {e}"
    runtime_ms = int(round((time.perf_counter() - start) * 1000)) if timing else 0
    record = VerificationReport.from_check(
        case.suite, params, check, case.tolerance, seed, runtime_ms
    )
    return record, None


# Sampling helpers


def _unit(rng: SplitMix64, modulus: int) -> int:
    return rng.choice(units(modulus)) or 1


def _all_splits(n: int) -> List[Tuple[int, int]]:
    return [(a, n // a) for a in divisors(n)]


def _split(rng: SplitMix64, n: int) -> Tuple[int, int]:
    a = rng.choice(divisors(n))
    return a, n // a


def _coprime_pair(rng: SplitMix64, limit: int) -> Tuple[int, int]:
    while True:
        m, c = 1 + rng.randbelow(limit), 1 + rng.randbelow(limit)
        if gcd(m, c) == 1:
            return m, c


def _primitive(q: int) -> List[DirichletCharacter]:
    found = primitive_characters(q)
    if not found:
        raise InvalidParams(f"There are no primitive characters mod {q}")
    return found


def _bump(params: Dict[str, Any]) -> TestFunction:
    return TestFunction(float(params["center"]), float(params["half_width"]))


def _parse_complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def _form_label(k: int) -> str:
    return eigenforms(k, 8)[0].label


# Exact suites


@registry.suite("charsum-reciprocity")
def charsum_reciprocity_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """C(a,u,b,v) = e_ab(-h r inv(uv)) conj(C(b,v,a,u)) for every character mod r."""
    for r in range(1, cfg.charsum_max_r + 1):
        smooth = smooth_parts(r, cfg.charsum_max_ab)
        pairs = [pair for n in smooth for pair in _all_splits(n)]
        for psi in character_group(r):
            for a, b in pairs:
                for _ in range(cfg.charsum_samples):
                    params = {
                        "psi": str(psi),
                        "a": a,
                        "b": b,
                        "u": _unit(rng, r),
                        "v": _unit(rng, r),
                        "h": rng.randbelow(a * b * r),
                    }
                    yield "reciprocity", params, cfg.numeric_tolerance


@registry.check("reciprocity")
def _reciprocity(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    p = CharSumParams(
        parse_character(params["psi"]),
        params["h"],
        params["a"],
        params["u"],
        params["b"],
        params["v"],
    )
    return verify_reciprocity(p, flip_sign=cfg.charsum_flip_sign)


@registry.suite("charsum-mult")
def charsum_mult_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Both CRT factorizations of C for primitive characters mod coprime r1 < r2."""
    limit = cfg.mult_max_product
    for r1 in range(1, limit + 1):
        for r2 in range(r1 + 1, limit // r1 + 1):
            if gcd(r1, r2) != 1:
                continue
            chars1, chars2 = primitive_characters(r1), primitive_characters(r2)
            if not chars1 or not chars2:
                continue
            ns1 = smooth_parts(r1, cfg.mult_max_ab)
            ns2 = smooth_parts(r2, cfg.mult_max_ab)
            for _ in range(cfg.mult_samples):
                n1, n2 = rng.choice(ns1), rng.choice(ns2)
                a1, b1 = _split(rng, n1)
                a2, b2 = _split(rng, n2)
                params = {
                    "psi1": str(rng.choice(chars1)),
                    "psi2": str(rng.choice(chars2)),
                    "a1": a1,
                    "b1": b1,
                    "a2": a2,
                    "b2": b2,
                    "h": rng.randbelow(n1 * n2 * r1 * r2),
                    "u": _unit(rng, r1 * r2),
                    "v": _unit(rng, r1 * r2),
                }
                yield "multiplicativity", params, cfg.numeric_tolerance


@registry.check("multiplicativity")
def _multiplicativity(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return verify_multiplicativity(
        parse_character(params["psi1"]),
        parse_character(params["psi2"]),
        params["a1"],
        params["b1"],
        params["a2"],
        params["b2"],
        params["h"],
        params["u"],
        params["v"],
    )


@registry.suite("charsum-support")
def charsum_support_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Vanishing of C(p^s,u,p^t,v) outside the three allowed exponent patterns."""
    for p in cfg.support_primes:
        if not is_prime(p):
            raise InvalidParams(f"support_primes must be primes, got {p}")
        for k in range(1, cfg.support_max_k + 1):
            chars = primitive_characters(p**k)
            if not chars:
                continue
            for s in range(cfg.support_max_exponent + 1):
                for t in range(cfg.support_max_exponent + 1):
                    for _ in range(cfg.support_samples):
                        params = {
                            "psi": str(rng.choice(chars)),
                            "p": p,
                            "k": k,
                            "s": s,
                            "t": t,
                            "u": _unit(rng, p),
                            "v": _unit(rng, p),
                            "h": rng.randbelow(p ** (s + t + k)),
                        }
                        yield "support", params, cfg.numeric_tolerance


@registry.check("support")
def _support(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return verify_support_claim(
        parse_character(params["psi"]),
        params["p"],
        params["k"],
        params["h"],
        params["u"],
        params["v"],
        params["s"],
        params["t"],
    )


@registry.suite("kloosterman-factorization")
def kloosterman_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """S(m,n;c) against sum_{d | (m,n,c)} d S(1, mn/d^2; c/d) on the full grid."""
    for m in range(1, cfg.kloosterman_max_mn + 1):
        for n in range(1, cfg.kloosterman_max_mn + 1):
            for c in range(1, cfg.kloosterman_max_c + 1):
                yield "selberg", {"m": m, "n": n, "c": c}, cfg.numeric_tolerance


@registry.check("selberg")
def _selberg(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return selberg_factorization_check(params["m"], params["n"], params["c"])


@registry.suite("gauss")
def gauss_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """|eps| = 1 and the primitive-twist relation for every primitive character."""
    for q in range(1, cfg.gauss_max_q + 1):
        for chi in primitive_characters(q):
            yield "root-number-modulus", {"chi": str(chi)}, cfg.gauss_tolerance
            params = {"chi": str(chi), "m": rng.randbelow(q)}
            yield "primitive-twist", params, cfg.gauss_tolerance


@registry.check("root-number-modulus")
def _root_number_modulus(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    eps = gauss_sum(parse_character(params["chi"])).epsilon
    return CheckResult(exact=None, residual=abs(abs(eps) - 1.0), lhs=eps, rhs=1.0)


@registry.check("primitive-twist")
def _primitive_twist(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return primitive_twist_relation(parse_character(params["chi"]), params["m"])


@registry.suite("dft-duality")
def dft_duality_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """D(m,c) against eps^2 (c/m) conj(D(c,m)) e(-1/(mc)), exactly and numerically."""
    for q in cfg.dft_moduli:
        for chi in _primitive(q):
            for ell in range(1, cfg.dft_max_ell + 1):
                for _ in range(cfg.dft_samples):
                    m, c = _coprime_pair(rng, cfg.dft_max_mc)
                    params = {"chi": str(chi), "ell": ell, "m": m, "c": c}
                    yield "dft-duality", params, cfg.dft_tolerance


@registry.check("dft-duality")
def _dft_duality(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    check = verify_dft_duality(
        parse_character(params["chi"]),
        params["ell"],
        params["m"],
        params["c"],
        mutate_root_number=cfg.dft_mutate_root_number,
    )
    # the numeric path has to agree as well
    if check.exact and check.residual > cfg.dft_tolerance:
        check.exact = None
    return check


# Special functions


@registry.suite("bessel")
def bessel_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Mellin-Barnes contour integral against J_{k-1}(4 pi x)."""
    for k in cfg.weights(cfg.mellin_weights):
        for x in cfg.mellin_x:
            params = {"k": k, "x": x, "a": cfg.mellin_contour}
            yield "mellin-barnes", params, cfg.mellin_tolerance


@registry.check("mellin-barnes")
def _mellin_barnes(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return mellin_barnes_check(params["k"], params["x"], params["a"], cfg.quadrature())


@registry.suite("hankel")
def hankel_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """H_k(H_k g)(b) = g(b) for the bump g."""
    for k in cfg.weights([cfg.hankel_weight]):
        for b in cfg.hankel_points:
            params = {
                "k": k,
                "center": cfg.hankel_center,
                "half_width": cfg.hankel_half_width,
                "b": b,
            }
            yield "hankel-inversion", params, cfg.hankel_tolerance


@registry.check("hankel-inversion")
def _hankel_inversion(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return hankel_inversion_check(
        _bump(params), params["k"], params["b"], cfg.quadrature()
    )


@registry.suite("weber")
def weber_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Weber's exponential integral of two Bessel functions against its closed form."""
    for k in cfg.weights([cfg.weber_weight]):
        for point in cfg.weber_points:
            alpha, beta, gamma = point.split(":")
            params = {
                "k": k,
                "alpha": alpha,
                "beta": float(beta),
                "gamma": float(gamma),
            }
            yield "weber", params, cfg.weber_tolerance


@registry.check("weber")
def _weber(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return weber_check(
        params["k"],
        _parse_complex(params["alpha"]),
        params["beta"],
        params["gamma"],
        cfg.quadrature(),
    )


# Spectral suites


@registry.suite("petersson")
def petersson_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Geometric side of the Petersson formula: empty spaces, rank one, eigenvalues."""
    if cfg.k is not None:
        size = dimension(cfg.k)
        if size > 1:
            raise InvalidParams(
                f"petersson needs dim S_k <= 1, weight {cfg.k} has {size}"
            )
        empty, rank_one = ([cfg.k], []) if size == 0 else ([], [cfg.k])
    else:
        empty, rank_one = [cfg.petersson_empty_weight], list(cfg.petersson_weights)
    for k in empty:
        if dimension(k) != 0:
            raise InvalidParams(f"Weight {k} has non-zero cusp forms")
        for ell in (1, 2, 3):
            for n in (1, 2, 3):
                params = {"k": k, "ell": ell, "n": n}
                yield "empty-space", params, cfg.petersson_tolerance
    for k in rank_one:
        if dimension(k) != 1:
            raise InvalidParams(f"Weight {k} is not one-dimensional")
        for m in range(1, cfg.petersson_max_mn + 1):
            for n in range(m, cfg.petersson_max_mn + 1):
                yield "rank-one", {"k": k, "m": m, "n": n}, cfg.petersson_tolerance
        for n in range(1, cfg.petersson_max_eigen_n + 1):
            yield "eigenvalue-ratio", {"k": k, "n": n}, cfg.petersson_tolerance


def _petersson_tol(cfg: SuiteConfig) -> float:
    return cfg.petersson_tolerance / cfg.quad_safety


@registry.check("empty-space")
def _empty_space(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    value = petersson_geometric(
        params["k"], params["ell"], params["n"], _petersson_tol(cfg)
    ).value
    return CheckResult(exact=None, residual=abs(value), lhs=value, rhs=0.0)


@registry.check("rank-one")
def _rank_one(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return petersson_dim1_factorization(
        params["k"], params["m"], params["n"], _petersson_tol(cfg)
    )


@registry.check("eigenvalue-ratio")
def _eigenvalue_ratio(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    k, n = params["k"], params["n"]
    tol = _petersson_tol(cfg)
    diagonal = petersson_geometric(k, 1, 1, tol).value
    ratio = petersson_geometric(k, n, 1, tol).value / diagonal
    form = eigenforms(k, max(100, cfg.petersson_max_eigen_n))[0]
    expected = form.lam(n)
    return CheckResult(
        exact=None, residual=abs(ratio - expected), lhs=ratio, rhs=expected
    )


@registry.suite("main-identity")
def main_identity_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Twisted Petersson sum against its dual through the Hankel transform."""
    for q in cfg.main_moduli:
        chi = rng.choice(_primitive(q))
        for k in cfg.weights(cfg.main_weights):
            for ell in cfg.main_ells:
                params = {
                    "chi": str(chi),
                    "k": k,
                    "ell": ell,
                    "center": cfg.main_center,
                    "half_width": cfg.main_half_width,
                }
                yield "main-identity", params, cfg.main_tolerance


@registry.check("main-identity")
def _main_identity(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return main_identity_check(
        params["k"],
        parse_character(params["chi"]),
        params["ell"],
        _bump(params),
        cfg.quadrature(cfg.spectral_abs_tol),
    )


@registry.suite("voronoi")
def voronoi_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Voronoi summation for a level-one eigenform twisted by e_q(an)."""
    label = _form_label(cfg.weights([cfg.voronoi_weight])[0])
    for q in cfg.voronoi_moduli:
        if q < 1:
            raise InvalidParams(f"voronoi_moduli must be positive, got {q}")
        # distinct units, all of them when there are fewer than requested
        pool = list(units(q))
        a_values: List[int] = []
        while pool and len(a_values) < cfg.voronoi_a_samples:
            a_values.append(pool.pop(rng.randbelow(len(pool))))
        for bump in cfg.voronoi_bumps:
            center, half_width = (float(x) for x in bump.split(":"))
            for a in a_values:
                params = {
                    "form": label,
                    "q": q,
                    "a": a,
                    "center": center,
                    "half_width": half_width,
                }
                yield "voronoi", params, cfg.voronoi_tolerance


@lru_cache(maxsize=32)
def _voronoi_dual(k: int, q: int, bump: TestFunction, quad_json: str) -> DualSeries:
    return dual_series(bump, k, q, QuadratureConfig.model_validate_json(quad_json))


@registry.check("voronoi")
def _voronoi(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    form = eigenform_by_label(params["form"], cfg.voronoi_precision)
    perturbation = None
    if cfg.voronoi_perturb_index > 0:
        perturbation = (cfg.voronoi_perturb_index, cfg.voronoi_perturb_delta)
    bump = _bump(params)
    quad = cfg.quadrature(cfg.spectral_abs_tol)
    return voronoi_check(
        form,
        params["q"],
        params["a"],
        bump,
        quad,
        lambda_perturbation=perturbation,
        dual=_voronoi_dual(form.weight, params["q"], bump, quad.model_dump_json()),
    )


@registry.suite("pipeline")
def pipeline_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Every stage of the transformation chain, plus its two isolated branches."""
    for triple in cfg.pipeline_cases:
        q, k, ell = (int(x) for x in triple.split(":"))
        if cfg.k is not None:
            k = cfg.k
        params = {
            "chi": str(rng.choice(_primitive(q))),
            "k": k,
            "ell": ell,
            "center": cfg.pipeline_center,
            "half_width": cfg.pipeline_half_width,
        }
        stage_tol = cfg.pipeline_tolerance
        if cfg.pipeline_stage_d:
            stage_tol = STAGE_D_TOLERANCE
        yield "stages", {**params, "stage_d": cfg.pipeline_stage_d}, stage_tol
        yield "zeroth-frequency", params, cfg.pipeline_zeroth_tolerance
        # l near the bump center, where -g(l) chi(l) is nonzero
        branch_ell = max(1, round(cfg.pipeline_center))
        while gcd(branch_ell, q) != 1:
            branch_ell += 1
        branch = {**params, "ell": branch_ell}
        yield "t2-branch", branch, cfg.pipeline_branch_tolerance


PipelineArgs = Tuple[int, DirichletCharacter, int, TestFunction]


def _pipeline_args(params: Dict[str, Any]) -> PipelineArgs:
    return params["k"], parse_character(params["chi"]), params["ell"], _bump(params)


@registry.check("stages")
def _stages(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    stages = ("A", "B", "C", "D") if params["stage_d"] else ("A", "B", "C")
    trace = pipeline_trace(
        *_pipeline_args(params),
        cfg.quadrature(cfg.spectral_abs_tol),
        stages=stages,
        with_t2=False,
    )
    return trace.check()


@registry.check("zeroth-frequency")
def _zeroth_frequency(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return zeroth_frequency_check(*_pipeline_args(params), cfg.quadrature())


@registry.check("t2-branch")
def _t2_branch(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    cfg_quad = cfg.quadrature(cfg.spectral_abs_tol)
    return t2_branch_check(*_pipeline_args(params), cfg_quad)


@registry.suite("functional-equation")
def functional_equation_cases(cfg: SuiteConfig, rng: SplitMix64) -> Iterator[CaseItem]:
    """Functional equation of L(s, f x chi) and the direct Dirichlet series."""
    label = _form_label(cfg.weights([cfg.fe_weight])[0])
    for q in cfg.fe_moduli:
        chi = str(quadratic_character(q))
        for s in cfg.fe_points:
            params = {"form": label, "chi": chi, "s": s}
            yield "functional-equation", params, cfg.fe_tolerance
        for s in cfg.fe_series_points:
            params = {"form": label, "chi": chi, "s": s}
            yield "dirichlet-series", params, cfg.fe_series_tolerance


@registry.check("functional-equation")
def _functional_equation(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    return functional_equation_check(
        eigenform_by_label(params["form"]),
        parse_character(params["chi"]),
        _parse_complex(params["s"]),
        target=cfg.fe_target,
    )


@registry.check("dirichlet-series")
def _dirichlet_series(params: Dict[str, Any], cfg: SuiteConfig) -> CheckResult:
    form = eigenform_by_label(params["form"], cfg.fe_series_precision)
    chi = parse_character(params["chi"])
    s = _parse_complex(params["s"])
    integral = l_value(form, chi, s, target=cfg.fe_target)
    series, tail = dirichlet_series(form, chi, s)
    # only the gap beyond the truncation tail of the series counts
    return CheckResult(
        exact=None,
        residual=max(0.0, abs(integral - series) - tail),
        lhs=integral,
        rhs=series,
        details={"tail": tail},
    )

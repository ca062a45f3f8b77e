#!/usr/bin/env python3
"""
Sweep configuration for `voronoi-forge verify`.

A plain key=value file (read with python-dotenv, comments allowed) layered
under command-line overrides and validated into SuiteConfig. List-valued
keys are comma separated:

    # smaller sweep for a quick run
    charsum_max_r=12
    dft_moduli=3,4,5
    k=12
"""

import typing
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError
from .quadrature import QuadratureConfig


class SuiteConfig(BaseModel):
    """Every grid, tolerance and quadrature knob of the verification suites."""

    model_config = ConfigDict(extra="forbid")

    # restricts the weight-indexed suites to a single weight
    k: Optional[int] = None

    # exact suites still report the double-precision residual
    numeric_tolerance: float = Field(default=1e-9, gt=0)

    charsum_max_r: int = Field(default=30, ge=1)
    charsum_max_ab: int = Field(default=200, ge=1)
    charsum_samples: int = Field(default=8, ge=1)
    charsum_flip_sign: bool = False

    mult_max_product: int = Field(default=105, ge=2)
    mult_max_ab: int = Field(default=50, ge=1)
    mult_samples: int = Field(default=4, ge=1)

    support_primes: List[int] = [2, 3, 5]
    support_max_k: int = Field(default=3, ge=1)
    support_max_exponent: int = Field(default=4, ge=0)
    support_samples: int = Field(default=4, ge=1)

    kloosterman_max_mn: int = Field(default=30, ge=1)
    kloosterman_max_c: int = Field(default=60, ge=1)

    gauss_max_q: int = Field(default=200, ge=1)
    gauss_tolerance: float = Field(default=1e-10, gt=0)

    dft_moduli: List[int] = [3, 4, 5, 7, 8, 9, 11, 12, 13]
    dft_max_mc: int = Field(default=40, ge=1)
    dft_max_ell: int = Field(default=6, ge=1)
    dft_samples: int = Field(default=6, ge=1)
    dft_tolerance: float = Field(default=1e-10, gt=0)
    dft_mutate_root_number: bool = False

    mellin_weights: List[int] = [12, 16]
    mellin_x: List[float] = [0.01, 0.5, 1.0]
    mellin_contour: float = 3.0
    mellin_tolerance: float = Field(default=1e-8, gt=0)

    hankel_weight: int = 12
    hankel_center: float = 3.0
    hankel_half_width: float = 1.0
    hankel_points: List[float] = [3.0, 3.5, 10.0]
    hankel_tolerance: float = Field(default=1e-6, gt=0)

    weber_weight: int = 12
    # alpha:beta:gamma, alpha may be complex ("1-0.5j")
    weber_points: List[str] = ["1:1:1", "1:0.001:1", "1-0.5j:1:0.7"]
    weber_tolerance: float = Field(default=1e-8, gt=0)

    petersson_empty_weight: int = 14
    petersson_weights: List[int] = [12, 16, 18, 20, 22, 26]
    petersson_max_mn: int = Field(default=12, ge=1)
    petersson_max_eigen_n: int = Field(default=20, ge=1)
    petersson_tolerance: float = Field(default=1e-6, gt=0)

    # tolerance of the quadratures inside the spectral suites
    spectral_abs_tol: float = Field(default=1e-8, gt=0, lt=1)

    main_moduli: List[int] = [1, 3, 4, 5, 7]
    main_weights: List[int] = [12, 16]
    main_ells: List[int] = [1, 2, 3]
    main_center: float = 20.0
    main_half_width: float = 10.0
    main_tolerance: float = Field(default=1e-6, gt=0)

    voronoi_weight: int = 12
    voronoi_moduli: List[int] = [1, 3, 5, 7]
    # center:half_width
    voronoi_bumps: List[str] = ["10:5", "20:10"]
    # distinct a values per modulus, capped by phi(q)
    voronoi_a_samples: int = Field(default=10, ge=1)
    # dual sums of the bump test functions reach n in the thousands
    voronoi_precision: int = Field(default=10_000, ge=10, le=10_000)
    voronoi_tolerance: float = Field(default=1e-6, gt=0)
    # n0 > 0 perturbs lambda(n0) by voronoi_perturb_delta
    voronoi_perturb_index: int = Field(default=0, ge=0)
    voronoi_perturb_delta: float = 1e-3

    # q:k:ell
    pipeline_cases: List[str] = ["3:12:1", "5:12:2"]
    pipeline_center: float = 8.0
    pipeline_half_width: float = 4.0
    pipeline_tolerance: float = Field(default=1e-5, gt=0)
    pipeline_stage_d: bool = False
    pipeline_zeroth_tolerance: float = Field(default=1e-9, gt=0)
    pipeline_branch_tolerance: float = Field(default=1e-6, gt=0)

    fe_weight: int = 12
    fe_moduli: List[int] = [3, 5]
    fe_points: List[str] = ["0.5", "0.5+1j"]
    fe_tolerance: float = Field(default=1e-4, gt=0)
    fe_target: float = Field(default=1e-6, gt=0)
    fe_series_points: List[str] = ["2", "2+1j"]
    # the series at Re s = 2 needs every known coefficient
    fe_series_precision: int = Field(default=10_000, ge=10, le=10_000)
    fe_series_tolerance: float = Field(default=1e-6, gt=0)

    quad_abs_tol: float = Field(default=1e-10, gt=0, lt=1)
    quad_rel_tol: float = Field(default=1e-10, gt=0, lt=1)
    quad_max_panels: int = Field(default=1 << 16, gt=0)
    quad_nodes_per_panel: int = Field(default=20, gt=1)
    quad_safety: float = Field(default=10.0, ge=1)

    @field_validator("fe_points", "fe_series_points", "weber_points", "voronoi_bumps")
    @classmethod
    def _complex_fields(cls, values: List[str]) -> List[str]:
        for text in values:
            for part in text.split(":"):
                try:
                    complex(part.replace(" ", ""))
                except ValueError:
                    raise ValueError(f"Not a number: {part!r} in {text!r}")
        return values

    @field_validator("pipeline_cases")
    @classmethod
    def _pipeline_triples(cls, values: List[str]) -> List[str]:
        for text in values:
            parts = text.split(":")
            if len(parts) != 3 or not all(p.strip().isdigit() for p in parts):
                raise ValueError(f"pipeline case must be q:k:ell, got {text!r}")
        return values

    def quadrature(self, abs_tol: Optional[float] = None) -> QuadratureConfig:
        return QuadratureConfig(
            abs_tol=abs_tol or self.quad_abs_tol,
            rel_tol=self.quad_rel_tol,
            max_panels=self.quad_max_panels,
            nodes_per_panel=self.quad_nodes_per_panel,
            safety=self.quad_safety,
        )

    def weights(self, defaults: List[int]) -> List[int]:
        """Weights of a weight-indexed suite after the `k` override."""
        return [self.k] if self.k is not None else list(defaults)


def _is_list(name: str) -> bool:
    annotation = SuiteConfig.model_fields[name].annotation
    return typing.get_origin(annotation) in (list, List)


def _coerce(raw: Dict[str, Optional[str]]) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        name = key.strip().lower().replace("-", "_")
        if name not in SuiteConfig.model_fields:
            raise ConfigError(f"Unknown configuration key: {key}")
        if value is None:
            raise ConfigError(f"Configuration key {key} has no value")
        text = value.strip()
        if _is_list(name):
            values[name] = [v.strip() for v in text.split(",") if v.strip()]
        else:
            values[name] = text
    return values


def load_config(
    path: Optional[str] = None, overrides: Optional[Dict[str, str]] = None
) -> SuiteConfig:
    """Read the key=value file at `path`, apply overrides, validate."""
    raw: Dict[str, Optional[str]] = {}
    if path:
        config_path = Path(path)
        if not config_path.is_file():
            raise ConfigError(f"Configuration file not found: {path}")
        raw.update(dotenv_values(config_path))
    values = _coerce(raw)
    values.update(_coerce(dict(overrides or {})))
    try:
        return SuiteConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigError(f"Invalid configuration: {problems}") from e

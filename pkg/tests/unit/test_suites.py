#!/usr/bin/env python3
"""
Unit tests for voronoi_forge.suites module.
Tests the seeded sampler, the suite registry and cheap sweeps end to end.
"""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from voronoi_forge.config import load_config
from voronoi_forge.errors import ConfigError
from voronoi_forge.suites import ALL, SplitMix64, execute_case, registry

EXPECTED_SUITES = {
    "charsum-reciprocity",
    "charsum-mult",
    "charsum-support",
    "kloosterman-factorization",
    "gauss",
    "dft-duality",
    "bessel",
    "hankel",
    "weber",
    "petersson",
    "main-identity",
    "voronoi",
    "pipeline",
    "functional-equation",
}


def run_suite(name, overrides, seed=0):
    cfg = load_config(overrides=overrides)
    cases = registry.cases(name, cfg, seed)
    return [execute_case(case, cfg, seed)[0] for case in cases]


class TestSplitMix64:
    """Test cases for the reproducible sampler."""

    def test_reference_output(self):
        """Test the first output for seed 0."""
        assert SplitMix64(0).next() == 0xE220A8397B1DCDAF

    def test_suite_streams_differ(self):
        """Test that each suite gets its own stream."""
        a = SplitMix64.for_suite(0, "gauss").next()
        b = SplitMix64.for_suite(0, "dft-duality").next()
        assert a != b

    @given(st.integers(min_value=0, max_value=2**64 - 1), st.integers(1, 1000))
    def test_randbelow(self, seed, n):
        """Test that randbelow stays in range."""
        rng = SplitMix64(seed)
        assert all(0 <= rng.randbelow(n) < n for _ in range(5))

    def test_randbelow_empty(self):
        """Test that an empty range is refused."""
        with pytest.raises(ValueError, match="n >= 1"):
            SplitMix64(1).randbelow(0)


class TestRegistry:
    """Test cases for suite lookup."""

    def test_names(self):
        """Test that every suite is registered."""
        assert set(registry.names) == EXPECTED_SUITES
        assert registry.expand(ALL) == registry.names
        assert registry.expand("gauss") == ["gauss"]

    def test_descriptions(self):
        """Test that every suite has a one-line description."""
        for name in registry.names:
            assert registry.describe(name)
            assert "\n" not in registry.describe(name)

    def test_unknown_suite(self):
        """Test unknown suite names."""
        with pytest.raises(ConfigError, match="Unknown suite 'nosuch'"):
            registry.expand("nosuch")
        with pytest.raises(ConfigError, match="Unknown suite"):
            registry.cases("nosuch", load_config(), 0)

    def test_deterministic(self):
        """Test that a seed fixes the sweep and another seed changes it."""
        cfg = load_config(overrides={"charsum_max_r": "5", "charsum_max_ab": "20"})
        first = registry.cases("charsum-reciprocity", cfg, 7)
        again = registry.cases("charsum-reciprocity", cfg, 7)
        other = registry.cases("charsum-reciprocity", cfg, 8)
        assert [c.params for c in first] == [c.params for c in again]
        assert [c.params for c in first] != [c.params for c in other]
        assert [c.index for c in first] == list(range(len(first)))

    def test_setup_error(self):
        """Test that a bad sweep definition becomes a configuration error."""
        cfg = load_config(overrides={"support_primes": "4"})
        with pytest.raises(ConfigError, match="support_primes must be primes"):
            registry.cases("charsum-support", cfg, 0)


class TestExactSweeps:
    """Test cases running small exact sweeps."""

    def test_gauss(self):
        """Test the Gauss-sum sweep up to modulus 30."""
        records = run_suite("gauss", {"gauss_max_q": "30"})
        assert records and all(r.passed for r in records)

    def test_kloosterman(self):
        """Test the Selberg factorization sweep on a small grid."""
        records = run_suite(
            "kloosterman-factorization",
            {"kloosterman_max_mn": "6", "kloosterman_max_c": "12"},
        )
        assert len(records) == 6 * 6 * 12
        assert all(r.passed and r.exact for r in records)

    def test_reciprocity(self):
        """Test the reciprocity sweep on a small grid."""
        records = run_suite(
            "charsum-reciprocity",
            {"charsum_max_r": "6", "charsum_max_ab": "30", "charsum_samples": "2"},
        )
        assert records and all(r.passed for r in records)

    def test_reciprocity_flipped_sign(self):
        """Test that the flipped phase is caught."""
        records = run_suite(
            "charsum-reciprocity",
            {
                "charsum_max_r": "6",
                "charsum_max_ab": "30",
                "charsum_samples": "2",
                "charsum_flip_sign": "true",
            },
        )
        assert any(not r.passed for r in records)

    def test_support(self):
        """Test the support sweep for p = 2, 3."""
        records = run_suite(
            "charsum-support",
            {
                "support_primes": "2,3",
                "support_max_k": "2",
                "support_max_exponent": "3",
            },
        )
        assert records and all(r.passed for r in records)

    def test_dft_duality(self):
        """Test the DFT duality sweep and its mutation."""
        overrides = {"dft_moduli": "3,5", "dft_max_ell": "2", "dft_samples": "3"}
        records = run_suite("dft-duality", overrides)
        assert records and all(r.passed for r in records)
        overrides["dft_mutate_root_number"] = "true"
        assert any(not r.passed for r in run_suite("dft-duality", overrides))

    def test_records_carry_seed(self):
        """Test the seed and check name in every record."""
        records = run_suite("gauss", {"gauss_max_q": "5"}, seed=11)
        assert all(r.seed == 11 for r in records)
        assert {r.params["check"] for r in records} == {
            "root-number-modulus",
            "primitive-twist",
        }


class TestSweepDefinitions:
    """Test cases for the parameters the analytic sweeps generate."""

    def test_branch_inside_support(self):
        """Test the T2 branch cases sit where g(l) chi(l) is nonzero."""
        cfg = load_config()
        cases = registry.cases("pipeline", cfg, 0)
        branches = [c for c in cases if c.check == "t2-branch"]
        assert len(branches) == len(cfg.pipeline_cases)
        for case in branches:
            q = int(case.params["chi"].split(":")[0])
            center, half_width = case.params["center"], case.params["half_width"]
            assert abs(case.params["ell"] - center) < half_width
            assert math.gcd(case.params["ell"], q) == 1

    def test_series_on_line_two(self):
        """Test the direct-series comparison runs at Re s = 2."""
        cases = registry.cases("functional-equation", load_config(), 0)
        points = {c.params["s"] for c in cases if c.check == "dirichlet-series"}
        assert points == {"2", "2+1j"}

    def test_voronoi_a_values(self):
        """Test the Voronoi sweep draws distinct units, up to ten per modulus."""
        cases = registry.cases("voronoi", load_config(), 0)
        for q, phi in [(1, 1), (3, 2), (5, 4), (7, 6)]:
            drawn = [c.params["a"] for c in cases if c.params["q"] == q]
            # each a appears once per bump
            assert len(drawn) == 2 * phi
            assert len(set(drawn)) == phi
            assert all(math.gcd(a, q) == 1 for a in drawn)

    def test_voronoi_a_values_capped(self):
        """Test voronoi_a_samples caps the number of a values."""
        cfg = load_config(overrides={"voronoi_a_samples": "3", "voronoi_moduli": "11"})
        drawn = [c.params["a"] for c in registry.cases("voronoi", cfg, 5)]
        assert len(drawn) == 2 * 3
        assert len(set(drawn)) == 3

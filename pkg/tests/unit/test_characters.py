#!/usr/bin/env python3
"""
Unit tests for voronoi_forge.characters module.
Tests character enumeration, conductors, Gauss sums and the twist relation.
"""

import cmath

import pytest
from hypothesis import given
from hypothesis import strategies as st

from voronoi_forge.characters import (
    DirichletCharacter,
    character_group,
    character_product,
    gauss_sum,
    parse_character,
    primitive_characters,
    primitive_twist_relation,
    quadratic_character,
)
from voronoi_forge.errors import NotPrimitive, OutOfRange
from voronoi_forge.residues import euler_phi


class TestCharacterGroup:
    """Test cases for enumeration and basic structure."""

    @pytest.mark.parametrize("q", [1, 2, 3, 4, 8, 9, 12, 16, 15, 35])
    def test_group_size(self, q):
        """Test that there are phi(q) characters, principal first."""
        chars = character_group(q)
        assert len(chars) == euler_phi(q)
        assert chars[0].is_principal

    @pytest.mark.parametrize(
        "q, count", [(1, 1), (2, 0), (3, 1), (4, 1), (8, 2), (9, 4), (12, 1), (15, 3)]
    )
    def test_primitive_count(self, q, count):
        """Test the number of primitive characters."""
        assert len(primitive_characters(q)) == count

    def test_modulus_bound(self):
        """Test that moduli above the bound are refused."""
        with pytest.raises(OutOfRange, match="Character modulus"):
            character_group(10_001)

    def test_wrong_exponent_count(self):
        """Test that exponent vectors must match the generators."""
        with pytest.raises(ValueError, match="needs 2 exponents"):
            DirichletCharacter(8, (1,))

    @given(
        st.sampled_from([5, 8, 12, 16, 21]),
        st.integers(min_value=0, max_value=200),
        st.integers(min_value=0, max_value=200),
        st.data(),
    )
    def test_multiplicative(self, q, a, b, data):
        """Test chi(ab) = chi(a) chi(b)."""
        chi = data.draw(st.sampled_from(character_group(q)))
        assert abs(chi(a * b) - chi(a) * chi(b)) < 1e-12

    def test_values_vectorized(self):
        """Test that values() agrees with pointwise calls."""
        chi = parse_character("15:1,1")
        assert all(
            abs(v - chi(n)) < 1e-15 for n, v in zip(range(30), chi.values(range(30)))
        )


class TestParsing:
    """Test cases for the q:e1,e2 addressing."""

    def test_round_trip(self):
        """Test that str() and parse_character agree."""
        chi = parse_character("24:1,0,1")
        assert str(chi) == "24:1,0,1"
        assert parse_character(str(chi)) == chi

    def test_principal_shorthand(self):
        """Test that a bare modulus is the principal character."""
        assert parse_character("7").is_principal

    def test_exponents_reduced(self):
        """Test that exponents are reduced modulo the generator orders."""
        assert str(parse_character("5:5")) == "5:1"

    def test_bad_text(self):
        """Test malformed character text."""
        with pytest.raises(ValueError, match="q:e1,e2"):
            parse_character("seven:1")


class TestConductor:
    """Test cases for conductors and parity."""

    def test_principal(self):
        """Test that the principal character has conductor 1."""
        assert parse_character("12").conductor == 1

    def test_induced(self):
        """Test a character mod 12 induced from the quadratic character mod 3."""
        chi = character_product(parse_character("4"), quadratic_character(3))
        assert chi.conductor == 3
        assert not chi.is_primitive

    def test_quadratic_parity(self):
        """Test the parity of the quadratic characters mod 3 and 5."""
        assert quadratic_character(3).parity == -1
        assert quadratic_character(5).parity == 1
        assert quadratic_character(4).parity == -1

    def test_quadratic_requires_prime(self):
        """Test quadratic_character input checks."""
        with pytest.raises(ValueError, match="odd prime or 4"):
            quadratic_character(9)

    def test_product_values(self):
        """Test that character_product multiplies values."""
        chi1, chi2 = quadratic_character(3), parse_character("5:1")
        chi = character_product(chi1, chi2)
        assert chi.modulus == 15
        for n in range(30):
            assert abs(chi(n) - chi1(n) * chi2(n)) < 1e-12


class TestGaussSum:
    """Test cases for Gauss sums and root numbers."""

    def test_mod_three(self):
        """Test epsilon = i for the quadratic character mod 3."""
        assert abs(gauss_sum(quadratic_character(3)).epsilon - 1j) < 1e-12

    def test_mod_five(self):
        """Test epsilon = 1 for the quadratic character mod 5."""
        assert abs(gauss_sum(quadratic_character(5)).epsilon - 1) < 1e-12

    def test_mod_four(self):
        """Test epsilon = i for the character mod 4."""
        assert abs(gauss_sum(quadratic_character(4)).epsilon - 1j) < 1e-12

    @pytest.mark.parametrize("q", [3, 5, 7, 8, 9, 13, 16, 21])
    def test_unit_modulus(self, q):
        """Test |epsilon| = 1 for every primitive character."""
        for chi in primitive_characters(q):
            assert abs(abs(gauss_sum(chi).epsilon) - 1) < 1e-12

    @pytest.mark.parametrize("q", [5, 7, 9])
    def test_conjugate_root_number(self, q):
        """Test eps(chi-bar) = chi(-1) * conj(eps(chi))."""
        for chi in primitive_characters(q):
            eps = gauss_sum(chi).epsilon
            eps_bar = gauss_sum(chi.conjugate()).epsilon
            assert abs(eps_bar - chi.parity * eps.conjugate()) < 1e-12

    def test_exact_matches_numeric(self):
        """Test that the exact Gauss sum embeds to sqrt(q) * epsilon."""
        chi = parse_character("7:1")
        g = gauss_sum(chi)
        assert abs(g.exact.embed() - cmath.sqrt(7) * g.epsilon) < 1e-12


class TestPrimitiveTwist:
    """Test cases for the primitive twist relation."""

    @pytest.mark.parametrize("m", [0, 1, 2, 3, 5, 10, 11])
    def test_exact_mod_five(self, m):
        """Test the relation exactly for every primitive character mod 5."""
        for chi in primitive_characters(5):
            assert primitive_twist_relation(chi, m).exact is True

    def test_exact_mod_sixteen(self):
        """Test the relation for m sharing a factor with q."""
        for chi in primitive_characters(16):
            result = primitive_twist_relation(chi, 6)
            assert result.exact is True
            assert result.residual < 1e-10

    def test_requires_primitive(self):
        """Test that a non-primitive character is refused."""
        with pytest.raises(NotPrimitive, match="not primitive"):
            primitive_twist_relation(parse_character("4"), 1)

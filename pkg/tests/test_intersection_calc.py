"""
Tests for the closed-form intersection-theory calculator.
"""

import random
from math import comb

import pytest
import yaml

from intersection_calc import (CIData, ChowClass, chern_classes, closed_form_ledger, complement_euler,
                               double_cover_euler, double_cover_hyperplane_cube, euler_complete_intersection, grassmannian_dim,
                               harris_tu_symmetric_degree, hodge_from_euler, incidence_dimension_ledger,
                               multiproj_top_degree, nodal_euler_chain, quadric_space_dim,
                               symmetric_determinantal_locus)
from quadric_web_manager import DEFAULT_CONFIG


class TestChowRing:
    """Top degrees on products of projective spaces."""

    def test_nodes_on_plane(self):
        """(H1 + H2)^5 on P^3 x P^2 has degree C(5, 2) = 10."""
        dims = (3, 2)
        h = ChowClass.hyperplane(dims, 0) + ChowClass.hyperplane(dims, 1)
        assert multiproj_top_degree(dims, h ** 5) == 10

    def test_single_projective_space(self):
        """H^n on P^n is one point."""
        assert multiproj_top_degree((4,), ChowClass.hyperplane((4,), 0) ** 4) == 1

    def test_binomial_case(self):
        """(H1 + H2)^4 on P^2 x P^2 gives 6."""
        dims = (2, 2)
        h = ChowClass.hyperplane(dims, 0) + ChowClass.hyperplane(dims, 1)
        assert multiproj_top_degree(dims, h ** 4) == 6

    def test_truncation(self):
        """Powers beyond the dimension vanish."""
        assert (ChowClass.hyperplane((2,), 0) ** 3).coefficients == {}

    def test_ring_laws(self):
        """Commutative ring with unit on P^2 x P^3."""
        dims = (2, 3)
        rng = random.Random(4)

        def random_class():
            return ChowClass(dims, {(rng.randrange(3), rng.randrange(4)): rng.randrange(-5, 6) for _ in range(4)})

        one = ChowClass.one(dims)
        for _ in range(20):
            a, b, c = random_class(), random_class(), random_class()
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * one == a
            assert a - a == ChowClass(dims)
            assert 3 * a == a + a + a

    def test_wrong_degree_rejected(self):
        """Only top-degree classes have a degree."""
        with pytest.raises(ValueError):
            multiproj_top_degree((3,), ChowClass.hyperplane((3,), 0))


class TestCompleteIntersections:
    """Chern classes and Euler characteristics."""

    def test_base_locus_of_a_web(self):
        """Four quadrics in P^7: degree 16, Euler characteristic -128."""
        ci = CIData(7, (2, 2, 2, 2))
        assert ci.degree == 16
        assert ci.dimension == 3
        assert euler_complete_intersection(ci) == -128

    def test_octic_surface(self):
        """An octic surface has c2 = 38 h^2 and Euler characteristic 304."""
        assert chern_classes(CIData(3, (8,))) == [1, -4, 38]
        assert euler_complete_intersection(CIData(3, (8,))) == 304

    def test_elliptic_curve(self):
        """Two quadrics in P^3 meet in a genus-one curve."""
        assert euler_complete_intersection(CIData(3, (2, 2))) == 0

    def test_projective_space_itself(self):
        """With no equations the complete intersection is P^n, of Euler characteristic n + 1."""
        for n in range(1, 12):
            assert euler_complete_intersection(CIData(n, ())) == n + 1

    def test_too_many_equations(self):
        """More hypersurfaces than the ambient dimension is an error."""
        with pytest.raises(ValueError):
            CIData(2, (2, 2, 2))

    def test_double_cover(self):
        """The double cover branched along an octic has Euler characteristic -296."""
        assert complement_euler(8) == -300
        assert double_cover_euler(8) == -296
        with pytest.raises(ValueError):
            double_cover_euler(7)

    def test_hyperplane_cube_on_double_cover(self):
        """H^3 on a double cover of P^3 is two."""
        assert double_cover_hyperplane_cube() == 2
        assert double_cover_hyperplane_cube(sheets=1) == 1


class TestDeterminantalLoci:
    """Symmetric determinantal degrees."""

    def test_rank_six_in_eight_by_eight(self):
        """Degree 84, codimension 3, dimension 32 in P^35."""
        assert harris_tu_symmetric_degree(8, 6) == 84
        assert symmetric_determinantal_locus(8, 6) == (84, 3, 32)

    def test_symmetric_determinant_hypersurface(self):
        """Corank one is the determinant hypersurface of degree n."""
        for n in range(2, 9):
            assert harris_tu_symmetric_degree(n, n - 1) == n

    def test_veronese(self):
        """Rank-one 3x3 symmetric matrices form the Veronese surface of degree 4."""
        assert symmetric_determinantal_locus(3, 1) == (4, 3, 2)

    def test_integral_for_all_small_sizes(self):
        """Every degree with 0 < r < n <= 10 is a positive integer with the known boundary values."""
        for n in range(2, 11):
            for r in range(1, n):
                degree = harris_tu_symmetric_degree(n, r)
                assert isinstance(degree, int) and degree > 0
            assert harris_tu_symmetric_degree(n, 1) == 2 ** (n - 1)
            if n > 2:
                assert harris_tu_symmetric_degree(n, n - 2) == comb(n + 1, 3)

    def test_rank_out_of_range(self):
        """0 < r < n is required."""
        with pytest.raises(ValueError):
            harris_tu_symmetric_degree(4, 4)


class TestEulerBookkeeping:
    """Nodal degenerations and Hodge numbers."""

    def test_nodal_chains(self):
        """Both routes to the plane-web threefold end at -108."""
        assert nodal_euler_chain(-296, 84) == (-212, -128)
        assert nodal_euler_chain(-296, 94) == (-202, -108)
        assert nodal_euler_chain(-128, 10) == (-118, -108)

    def test_hodge_numbers(self):
        """h12 = 65 for the generic web and 56 for the plane web."""
        assert hodge_from_euler(-128, 1) == 65
        assert hodge_from_euler(-108, 2) == 56
        with pytest.raises(ValueError):
            hodge_from_euler(-107, 1)


class TestDimensionCounts:
    """Families of webs, recomputed from monomial counts."""

    def test_quadric_spaces(self):
        """36 quadrics in P^7, 30 of them vanish on a fixed plane."""
        assert quadric_space_dim(8) == 36
        assert quadric_space_dim(8, [(5, 6, 7)]) == 30
        assert grassmannian_dim(4, 36) == 128

    def test_incidence_ledger(self):
        """Every family dimension matches its published value."""
        assert incidence_dimension_ledger() == {
            "all_webs": 128,
            "webs_with_fixed_plane": 104,
            "webs_with_plane": 119,
            "two_disjoint_planes": 110,
            "two_planes_line": 114,
            "two_planes_point": 111,
            "plane_line_incidence": 23,
            "fiber_G(4,28)": 96,
            "line_on_P_bound": 102,
            "rank7_singular_bound": 127,
        }


class TestClosedFormLedger:
    """The full ledger against the shipped configuration."""

    def test_every_entry_matches_configuration(self):
        """Each ledger value equals the published constant in quadric_webs.yaml."""
        with open(DEFAULT_CONFIG, "r", encoding="utf-8") as f:
            expected = yaml.safe_load(f)["quadric_webs"]["expected_invariants"]
        ledger = closed_form_ledger()
        assert {e.name for e in ledger} == set(expected)
        for entry in ledger:
            assert entry.computed == expected[entry.name], entry.name

    def test_resolved_chains_agree(self):
        """The two small resolutions have the same Euler characteristic."""
        values = {e.name: e.computed for e in closed_form_ledger()}
        assert values["chi_cover_94_nodes_resolved"] == values["chi_base_locus_10_nodes_resolved"] == -108
        assert values["resolved_chains_agree"] == 1

"""
Tests for exact matrices, kernels and subspaces.
"""

import random
from fractions import Fraction

import pytest
import sympy

from exact_field import FieldCtx
from exact_linalg import (Mat, Subspace, normalize_point, random_matrix, random_symmetric,
                          rank_kernel, restrict_form, span_join)

P = 65537


@pytest.fixture
def ctx():
    return FieldCtx.prime_field(P)


class TestMat:
    """Dense matrices."""

    def test_rank_and_kernels(self, ctx):
        """Rank-nullity on both sides and kernel vectors really are annihilated."""
        rng = random.Random(1)
        a = random_matrix(ctx, rng, 4, 2)
        b = random_matrix(ctx, rng, 2, 6)
        m = a * b
        rk = rank_kernel(m)
        assert rk.rank == 2
        assert rk.kernel.dim == 4
        assert rk.left_kernel.dim == 2
        for v in rk.kernel.vectors:
            assert not any(m.apply(v))
        for u in rk.left_kernel.vectors:
            assert not any(m.transpose().apply(u))

    def test_det_matches_sympy(self, ctx):
        """Numeric determinants agree with sympy mod p."""
        rng = random.Random(2)
        m = random_matrix(ctx, rng, 6, 6)
        expected = int(sympy.Matrix([list(r) for r in m.rows]).det()) % P
        assert m.det().value == expected

    def test_inverse(self, ctx):
        """m * m^-1 is the identity; singular matrices raise."""
        rng = random.Random(3)
        m = random_symmetric(ctx, rng, 5)
        assert m * m.inverse() == Mat.identity(ctx, 5)
        with pytest.raises(ZeroDivisionError):
            Mat.zeros(ctx, 3, 3).inverse()

    def test_rational_matrices(self):
        """Everything works over Q with Fractions."""
        q = FieldCtx.rationals()
        m = Mat(q, [[1, 2], [3, 4]])
        assert m.det() == -2
        assert m.inverse()[0, 1] == 1
        assert m.inverse()[1, 1].value == Fraction(-1, 2)

    def test_json_round_trip(self, ctx):
        """to_json/from_json restore the same matrix."""
        m = random_matrix(ctx, random.Random(4), 3, 4)
        assert Mat.from_json(ctx, m.to_json()) == m

    def test_bilinear(self, ctx):
        """u^T m v for the identity is the dot product."""
        assert Mat.identity(ctx, 3).bilinear([1, 2, 3], [4, 5, 6]) == 32


class TestSubspace:
    """Canonical subspaces."""

    def test_canonical_equality(self, ctx):
        """Different spanning sets of one space compare equal."""
        s1 = Subspace(ctx, 4, [[1, 1, 0, 0], [0, 1, 1, 0]])
        s2 = Subspace(ctx, 4, [[1, 2, 1, 0], [1, 0, -1, 0]])
        assert s1 == s2
        assert hash(s1) == hash(s2)

    def test_contains_and_join(self, ctx):
        """A point joined to a plane gives a 3-space containing both."""
        plane = Subspace.coordinate(ctx, 8, (5, 6, 7))
        point = (1, 0, 0, 0, 0, 3, 0, 0)
        space = span_join(plane, point)
        assert space.dim == 4
        assert space.contains(plane)
        assert space.contains(point)
        assert not plane.contains(point)

    def test_intersection(self, ctx):
        """Two planes in k^4 meeting in a line."""
        a = Subspace.coordinate(ctx, 4, (0, 1))
        b = Subspace(ctx, 4, [[0, 1, 0, 0], [1, 0, 1, 0]])
        assert a.intersect(b) == Subspace.coordinate(ctx, 4, (1,))

    def test_complement_and_coordinates(self, ctx):
        """Complement vectors fill up the ambient space; coordinates read off pivots."""
        s = Subspace(ctx, 5, [[1, 2, 0, 0, 0], [0, 0, 1, 1, 0]])
        full = s.join(Subspace(ctx, 5, s.complement_vectors()))
        assert full.dim == 5
        assert s.coordinates((2, 4, 3, 3, 0)) == (2, 3)
        with pytest.raises(ValueError):
            s.coordinates((0, 1, 0, 0, 0))

    def test_modular_law(self, ctx):
        """For A inside C: A + (B meet C) = (A + B) meet C."""
        rng = random.Random(21)
        for _ in range(20):
            c = Subspace(ctx, 6, random_matrix(ctx, rng, 4, 6).rows)
            a = Subspace(ctx, 6, [[sum(x * y for x, y in zip(coeffs, col)) for col in zip(*c.vectors)]
                                  for coeffs in random_matrix(ctx, rng, 2, c.dim).rows])
            b = Subspace(ctx, 6, random_matrix(ctx, rng, 3, 6).rows)
            assert c.contains(a)
            assert span_join(a, b.intersect(c)) == span_join(a, b).intersect(c)

    def test_normalize_point(self, ctx):
        """First nonzero coordinate becomes 1; the zero vector is rejected."""
        assert normalize_point(ctx, (0, 2, 4)) == (0, 1, 2)
        with pytest.raises(ValueError):
            normalize_point(ctx, (0, 0, 0))


class TestRestrictForm:
    """Restriction of symmetric forms to subspaces."""

    def test_restriction_to_zero_block(self, ctx):
        """A form with a zero block restricts to zero on that coordinate plane."""
        m = random_symmetric(ctx, random.Random(5), 8, zero_block=(5, 6, 7))
        assert restrict_form(m, Subspace.coordinate(ctx, 8, (5, 6, 7))).is_zero()
        assert not restrict_form(m, Subspace.coordinate(ctx, 8, (0, 5))).is_zero()

    def test_values_on_coordinates(self, ctx):
        """The restricted form evaluated on coordinates equals the form on the vectors."""
        rng = random.Random(22)
        m = random_symmetric(ctx, rng, 8)
        s = Subspace(ctx, 8, random_matrix(ctx, rng, 3, 8).rows)
        restricted = restrict_form(m, s)
        basis = s.basis()
        for _ in range(10):
            a = [rng.randrange(P) for _ in range(s.dim)]
            b = [rng.randrange(P) for _ in range(s.dim)]
            assert restricted.bilinear(a, b) == m.bilinear(basis.apply(a), basis.apply(b))
            assert s.coordinates(basis.apply(a)) == tuple(a)

    def test_restriction_is_functorial(self, ctx):
        """Restricting to S and then to T inside S is restricting to T."""
        rng = random.Random(23)
        m = random_symmetric(ctx, rng, 8)
        s = Subspace(ctx, 8, random_matrix(ctx, rng, 5, 8).rows)
        t = Subspace(ctx, 8, [s.basis().apply(row) for row in random_matrix(ctx, rng, 2, s.dim).rows])
        inclusion = Mat.from_columns(ctx, [s.coordinates(v) for v in t.vectors])
        assert restrict_form(m, t) == inclusion.transpose() * restrict_form(m, s) * inclusion

    def test_asymmetric_rejected(self, ctx):
        """Only symmetric matrices are forms."""
        with pytest.raises(ValueError):
            restrict_form(Mat(ctx, [[0, 1], [0, 0]]), Subspace.coordinate(ctx, 2, (0,)))

"""
Tests for sparse multivariate polynomials and polynomial matrices.
"""

import random

import pytest
import sympy

from exact_field import FieldCtx
from exact_linalg import Mat, random_matrix, random_symmetric
from multipoly import (MultiPoly, PolyMat, interpolate_homogeneous, mp_grad, polmat_adjugate, polmat_det,
                       sum_polys)

P = 10007


@pytest.fixture
def ctx():
    return FieldCtx.prime_field(P)


def variables(ctx, n):
    return [MultiPoly.variable(ctx, n, i) for i in range(n)]


def random_homogeneous(ctx, rng, nvars, degree, terms=12):
    poly = MultiPoly.zero(ctx, nvars)
    for _ in range(terms):
        exps = [0] * nvars
        for _ in range(degree):
            exps[rng.randrange(nvars)] += 1
        poly = poly + MultiPoly.monomial(ctx, exps, rng.randrange(1, P))
    return poly


class TestMultiPolyArithmetic:
    """Ring operations and evaluation."""

    def test_binomial_square(self, ctx):
        """(x + y)^2 expands with a middle coefficient of 2."""
        x, y = variables(ctx, 2)
        assert (x + y) ** 2 == x * x + (x * y).scale(2) + y * y

    def test_zero_terms_are_pruned(self, ctx):
        """x - x is the zero polynomial with no stored terms."""
        x, _ = variables(ctx, 2)
        assert (x - x).is_zero()
        assert len(x - x) == 0
        assert (x - x).total_degree == -1

    def test_evaluation_matches_sympy(self, ctx):
        """Exact evaluation agrees with sympy mod p."""
        x, y, z = variables(ctx, 3)
        f = x ** 3 + (y * z).scale(5) - z ** 2 + MultiPoly.constant(ctx, 3, 7)
        X, Y, Z = sympy.symbols("X Y Z")
        g = X ** 3 + 5 * Y * Z - Z ** 2 + 7
        point = (1234, 5678, 42)
        assert f(point).value == int(g.subs({X: point[0], Y: point[1], Z: point[2]})) % P

    def test_gradient(self, ctx):
        """Partial derivatives of x^2 y."""
        x, y = variables(ctx, 2)
        dx, dy = (x * x * y).gradient()
        assert dx == (x * y).scale(2)
        assert dy == x * x

    def test_grad_and_sum(self, ctx):
        """Euler: the sum of x_i d f / d x_i is deg(f) f."""
        rng = random.Random(5)
        f = random_homogeneous(ctx, rng, 4, 3)
        xs = variables(ctx, 4)
        assert sum_polys(ctx, 4, (x * g for x, g in zip(xs, mp_grad(f)))) == f.scale(3)
        assert sum_polys(ctx, 4, ()).is_zero()

    def test_homogeneity(self, ctx):
        """is_homogeneous honours the requested degree."""
        x, y = variables(ctx, 2)
        assert (x * y + y * y).is_homogeneous(2)
        assert not (x * y + y).is_homogeneous()

    def test_divide_exact(self, ctx):
        """Exact quotients come back; a remainder raises."""
        rng = random.Random(5)
        f = random_homogeneous(ctx, rng, 3, 3)
        g = random_homogeneous(ctx, rng, 3, 2)
        assert (f * g).divide_exact(g) == f
        x, y, _ = variables(ctx, 3)
        with pytest.raises(ValueError):
            (x * x + y).divide_exact(x)

    def test_text_form_is_canonical(self, ctx):
        """Monomials appear in grlex-descending order."""
        x, y = variables(ctx, 2)
        assert (y + x * x).to_text() == "(1)*x0^2 + (1)*x1"


class TestSubstitution:
    """Restriction to lines, linear substitution and (de)homogenization."""

    def test_restrict_to_line(self, ctx):
        """The univariate restriction agrees with direct evaluation."""
        rng = random.Random(2)
        f = random_homogeneous(ctx, rng, 4, 5)
        base, direction = [3, 1, 4, 1], [5, 9, 2, 6]
        line = f.restrict_to_line(base, direction)
        for t in (0, 7, 1000):
            point = [(a + t * b) % P for a, b in zip(base, direction)]
            assert line(t) == f(point)

    def test_compose_linear(self, ctx):
        """f(L x) evaluated at x equals f evaluated at L x."""
        rng = random.Random(4)
        f = random_homogeneous(ctx, rng, 3, 3)
        matrix = random_matrix(ctx, rng, 3, 3)
        forms = [MultiPoly.linear_form(ctx, row) for row in matrix.rows]
        composed = f.compose_linear(forms)
        point = (2, 3, 5)
        assert composed(point) == f(matrix.apply(point))

    def test_dehomogenize_is_the_affine_chart(self, ctx):
        """Dropping x0 agrees with evaluating at x0 = 1."""
        rng = random.Random(6)
        f = random_homogeneous(ctx, rng, 3, 4)
        affine = f.dehomogenize(0)
        assert affine.nvars == 2
        for _ in range(5):
            point = (rng.randrange(P), rng.randrange(P))
            assert affine(point) == f((1, *point))

    def test_interpolate_homogeneous(self, ctx):
        """Values on the chart grid determine a homogeneous quartic in four variables."""
        rng = random.Random(8)
        f = random_homogeneous(ctx, rng, 4, 4, terms=20)
        assert interpolate_homogeneous(ctx, 4, 4, f.evaluate_raw) == f


class TestPolyMat:
    """Symbolic determinants and adjugates."""

    def test_determinant_routes_agree_with_numeric(self, ctx):
        """Minor DP, Bareiss and numeric determinants coincide on a symmetric pencil."""
        rng = random.Random(11)
        matrices = [random_symmetric(ctx, rng, 5).rows for _ in range(3)]
        pencil = PolyMat.linear_pencil(ctx, matrices)
        det = polmat_det(pencil)
        assert det == polmat_det(pencil, method="bareiss")
        assert det.is_homogeneous(5)
        for _ in range(5):
            lam = [rng.randrange(P) for _ in range(3)]
            numeric = [[sum(l * m[i][j] for l, m in zip(lam, matrices)) % P for j in range(5)] for i in range(5)]
            assert det(lam).value == int(sympy.Matrix(numeric).det()) % P
            assert det(lam) == Mat(ctx, numeric).det()

    def test_adjugate_identity(self, ctx):
        """adj(M) M = det(M) I."""
        rng = random.Random(12)
        pencil = PolyMat.linear_pencil(ctx, [random_symmetric(ctx, rng, 3).rows for _ in range(2)])
        det = polmat_det(pencil)
        product = polmat_adjugate(pencil) * pencil
        assert product == PolyMat.identity(ctx, 3, 2).scale(det)

    def test_determinant_is_multiplicative(self, ctx):
        """det(AB) = det(A) det(B) for pencils sharing their variables."""
        rng = random.Random(14)
        for size in (2, 3, 4):
            a = PolyMat.linear_pencil(ctx, [random_matrix(ctx, rng, size, size).rows for _ in range(2)])
            b = PolyMat.linear_pencil(ctx, [random_matrix(ctx, rng, size, size).rows for _ in range(2)])
            assert polmat_det(a * b) == polmat_det(a) * polmat_det(b)
            assert polmat_det(a * b, method="bareiss") == polmat_det(a) * polmat_det(b)

    def test_symbolic_size_limit(self, ctx):
        """Nine-by-nine symbolic determinants are refused."""
        rng = random.Random(13)
        pencil = PolyMat.linear_pencil(ctx, [random_symmetric(ctx, rng, 9).rows])
        with pytest.raises(ValueError):
            polmat_det(pencil)

    def test_unknown_method(self, ctx):
        """Only the two determinant routes exist."""
        pencil = PolyMat.identity(ctx, 2, 1)
        with pytest.raises(ValueError):
            polmat_det(pencil, method="laplace")

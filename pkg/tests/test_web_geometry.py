"""
Tests for webs of quadrics, the determinantal octic and the correspondence
between quadrics of a plane web and points of its base locus.
"""

import random
from fractions import Fraction

import pytest

from exact_field import FieldCtx
from exact_linalg import Mat, Subspace, normalize_point, random_symmetric, restrict_form
from multipoly import MultiPoly
from web_geometry import (MemberClass, NonGenericError, Plane, PreconditionError, ResidualTag, Web,
                          binary_quotient_form, classify_member, det_octic, det_octic_interpolated,
                          node_census, node_ideal_generators, node_jacobian, planted_rank6_web, point_to_quadric,
                          quadric_to_points, residual_intersection, sample_octic_point, sample_web,
                          tangent_hull)

P = 65537


@pytest.fixture(scope="module")
def ctx():
    return FieldCtx.prime_field(P)


@pytest.fixture(scope="module")
def plane_web(ctx):
    return sample_web(ctx, "tests", Plane.default(ctx))


def unit(i):
    return tuple(1 if j == i else 0 for j in range(8))


def worked_quadric(ctx):
    """x0x5 + x1x6 + x2x7 + x3^2 + x4^2."""
    rows = [[0] * 8 for _ in range(8)]
    for i, j in ((0, 5), (1, 6), (2, 7)):
        rows[i][j] = rows[j][i] = Fraction(1, 2)
    rows[3][3] = rows[4][4] = 1
    return Mat(ctx, rows)


def worked_web(ctx, seed=0):
    rng = random.Random(seed)
    others = [random_symmetric(ctx, rng, 8, zero_block=(5, 6, 7)) for _ in range(3)]
    return Web(ctx, (worked_quadric(ctx), *others), Plane.default(ctx))


def residual_web(ctx, forms):
    """Web whose residual forms on V = span(e0, P) are the given coefficient rows (z0, z1, z2, z3)."""
    quadrics = []
    for index, coeffs in enumerate(forms):
        rows = [[0] * 8 for _ in range(8)]
        rows[0][0] = coeffs[0]
        for j in range(1, 4):
            rows[0][4 + j] = rows[4 + j][0] = Fraction(coeffs[j], 2)
        # something off V so the quadrics differ
        rows[1][index + 1] = rows[index + 1][1] = 1
        quadrics.append(Mat(ctx, rows))
    return Web(ctx, tuple(quadrics), Plane.default(ctx))


class TestWeb:
    """Sampling, serialization and hashing."""

    def test_plane_web_contains_plane(self, ctx, plane_web):
        """Every quadric restricts to zero on the plane."""
        for q in plane_web.quadrics:
            assert q.is_symmetric()
            assert restrict_form(q, plane_web.plane.space).is_zero()

    def test_sampling_is_seeded(self, ctx, plane_web):
        """Same seed, same web; another seed, another web."""
        assert sample_web(ctx, "tests", Plane.default(ctx)).content_hash() == plane_web.content_hash()
        assert sample_web(ctx, "other", Plane.default(ctx)).content_hash() != plane_web.content_hash()

    def test_dict_round_trip(self, ctx, plane_web):
        """to_dict/from_dict keep the web and its content hash."""
        restored = Web.from_dict(plane_web.to_dict())
        assert restored.quadrics == plane_web.quadrics
        assert restored.plane == plane_web.plane
        assert restored.content_hash() == plane_web.content_hash()

    def test_rational_web_round_trip(self):
        """Rational webs serialize their fractions."""
        q = FieldCtx.rationals()
        web = sample_web(q, 1, Plane.default(q), entry_bound=3)
        assert Web.from_dict(web.to_dict()).quadrics == web.quadrics

    def test_rejects_quadric_missing_plane(self, ctx):
        """A web declared to contain a plane must really contain it."""
        bad = Mat.identity(ctx, 8)
        others = tuple(random_symmetric(ctx, random.Random(i), 8, zero_block=(5, 6, 7)) for i in range(3))
        with pytest.raises(ValueError):
            Web(ctx, (bad, *others), Plane.default(ctx))


class TestOctic:
    """The determinantal octic."""

    def test_octic_matches_numeric_determinants(self, ctx, plane_web):
        """Homogeneous of degree 8 and equal to det M(lambda) at random points."""
        octic = plane_web.octic
        assert octic.det_poly.is_homogeneous(8)
        rng = random.Random(1)
        for _ in range(20):
            lam = [rng.randrange(P) for _ in range(4)]
            assert octic.value(lam) == plane_web.matrix(lam).det().value

    def test_interpolation_route_agrees(self, ctx, plane_web):
        """Grid interpolation reproduces the minor expansion."""
        assert det_octic_interpolated(plane_web).det_poly == plane_web.octic.det_poly

    def test_bareiss_route_agrees(self, ctx):
        """Fraction-free elimination gives the same octic on a generic web."""
        web = sample_web(ctx, "bareiss")
        assert det_octic(web, method="bareiss").det_poly == det_octic(web).det_poly

    def test_diagonal_web(self, ctx):
        """Diagonal quadrics give a product of eight linear forms."""
        rng = random.Random(2)
        diagonals = [[rng.randrange(1, P) for _ in range(8)] for _ in range(4)]
        quadrics = tuple(Mat(ctx, [[d[i] if i == j else 0 for j in range(8)] for i in range(8)]) for d in diagonals)
        web = Web(ctx, quadrics)
        expected = MultiPoly.constant(ctx, 4, 1)
        for i in range(8):
            expected = expected * MultiPoly.linear_form(ctx, [d[i] for d in diagonals])
        assert det_octic(web).det_poly == expected


class TestClassification:
    """Rank stratification of web members."""

    def test_random_member_is_smooth(self, ctx, plane_web):
        """A random member has nonzero determinant."""
        assert classify_member(plane_web, plane_web.member([1, 2, 3, 4])) is MemberClass.SMOOTH

    def test_planted_rank6_member(self, ctx):
        """A rank-6 member is a singular point of the octic."""
        web = planted_rank6_web(ctx, 3)
        member = web.member([1, 0, 0, 0])
        assert member.rank() == 6
        assert classify_member(web, member) is MemberClass.RANK_LE6
        assert not any(web.octic.gradient_at(member.lam))

    def test_octic_sample_is_smooth_point(self, ctx, plane_web):
        """Random octic points have rank 7 and a nonvanishing gradient."""
        member = sample_octic_point(plane_web, "classify")
        assert member.matrix.det().is_zero()
        assert member.rank() == 7
        assert classify_member(plane_web, member) is MemberClass.OCTIC_SMOOTH_POINT


class TestWorkedQuadric:
    """The quadric x0x5 + x1x6 + x2x7 + x3^2 + x4^2 containing the coordinate plane."""

    def test_tangent_hull(self, ctx):
        """The hull is {x0 = x1 = x2 = 0}."""
        web = worked_web(ctx)
        hull = tangent_hull(web.member([1, 0, 0, 0]), web.plane)
        assert hull == Subspace.coordinate(ctx, 8, (3, 4, 5, 6, 7))

    def test_binary_form(self, ctx):
        """The quotient form is y0^2 + y1^2 with discriminant -1."""
        web = worked_web(ctx)
        form = binary_quotient_form(web.member([1, 0, 0, 0]), web.plane)
        assert (form.a, form.b, form.c) == (1, 0, 1)
        assert form.discriminant == P - 1

    def test_three_spaces_over_split_field(self, ctx):
        """Over F_65537 two 3-spaces through the plane lie in the quadric."""
        web = worked_web(ctx)
        result = quadric_to_points(web, web.member([1, 0, 0, 0]))
        assert result.split
        assert len(result.three_spaces) == 2
        q = worked_quadric(ctx)
        for space in result.three_spaces:
            assert space.contains(web.plane.space)
            assert restrict_form(q, space).is_zero()

    def test_unsplit_over_f7(self):
        """-1 is not a square mod 7, so no 3-space is defined over the field."""
        f7 = FieldCtx.prime_field(7)
        web = worked_web(f7)
        result = quadric_to_points(web, web.member([1, 0, 0, 0]))
        assert not result.split
        assert result.points == ()


class TestResidualIntersection:
    """Tags of the residual intersection inside V = span(e0, plane)."""

    @pytest.mark.parametrize("forms, tag", [
        ([(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 0, 0, 0)], ResidualTag.POINT_OFF_PLANE),
        ([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 0)], ResidualTag.POINT_ON_PLANE),
        ([(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 0), (0, 0, 0, 0)], ResidualTag.LINE_PROPER),
        ([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)], ResidualTag.LINE_ON_PLANE),
        ([(1, 0, 0, 0), (2, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)], ResidualTag.DOUBLE_PLANE),
        ([(0, 1, 1, 0), (0, 2, 2, 0), (0, 0, 0, 0), (0, 0, 0, 0)], ResidualTag.TWO_PLANES),
        ([(0, 0, 0, 0)] * 4, ResidualTag.ALL),
        ([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], ResidualTag.PLANE_ONLY),
    ])
    def test_tags(self, ctx, forms, tag):
        """The rank of the form matrix and the kernel position decide the tag."""
        web = residual_web(ctx, forms)
        space = web.plane.space.join(unit(0))
        assert residual_intersection(web, space).tag is tag

    def test_point_off_plane_location(self, ctx):
        """Forms (z1, z2, z3, 0) leave the point e0."""
        web = residual_web(ctx, [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 0, 0, 0)])
        residual = residual_intersection(web, web.plane.space.join(unit(0)))
        assert residual.point == unit(0)

    def test_space_must_contain_plane(self, ctx, plane_web):
        """A 3-space missing the plane is a precondition error."""
        with pytest.raises(PreconditionError):
            residual_intersection(plane_web, Subspace.coordinate(ctx, 8, (0, 1, 2, 3)))


class TestCorrespondence:
    """The maps between members and base-locus points."""

    def test_round_trip(self, ctx, plane_web):
        """Both residual points of a split member map back to that member."""
        rng = random.Random(7)
        checked = 0
        while checked < 5:
            member = plane_web.member([rng.randrange(P) for _ in range(4)])
            result = quadric_to_points(plane_web, member)
            if not result.split:
                continue
            assert result.tags == (ResidualTag.POINT_OFF_PLANE, ResidualTag.POINT_OFF_PLANE)
            assert len(set(result.points)) == 2
            for point in result.points:
                assert plane_web.contains_point(point)
                assert not plane_web.plane.contains(point)
                assert point_to_quadric(plane_web, point).lam == member.lam
            checked += 1

    def test_octic_member_has_one_point(self, ctx, plane_web):
        """On the octic the discriminant vanishes and one residual point remains."""
        member = sample_octic_point(plane_web, "one-point")
        result = quadric_to_points(plane_web, member)
        assert result.discriminant == 0
        assert len(result.points) == 1
        assert point_to_quadric(plane_web, result.points[0]).lam == member.lam

    def test_point_must_be_in_base_locus(self, ctx, plane_web):
        """psi is only defined on the base locus."""
        with pytest.raises(PreconditionError):
            point_to_quadric(plane_web, unit(0))

    def test_points_on_plane_round_trip(self, ctx, plane_web):
        """A point of P maps through its tangent space to a member whose residuals are P-point and one more."""
        rng = random.Random(30)
        basis = plane_web.plane.basis()
        checked = 0
        while checked < 30:
            p = normalize_point(ctx, basis.apply([rng.randrange(P) for _ in range(3)]))
            try:
                member = point_to_quadric(plane_web, p)
            except NonGenericError:
                continue
            result = quadric_to_points(plane_web, member)
            assert result.split
            assert set(result.tags) == {ResidualTag.POINT_ON_PLANE, ResidualTag.POINT_OFF_PLANE}
            assert p in result.points
            assert plane_web.contains_point(p)
            for point in result.points:
                assert point_to_quadric(plane_web, point).lam == member.lam
            checked += 1

    def test_tangent_hull_dimension(self, ctx, plane_web):
        """Every sampled member has a 5-dimensional tangent hull containing the plane."""
        rng = random.Random(34)
        for _ in range(200):
            member = plane_web.member([rng.randrange(1, P) for _ in range(4)])
            hull = tangent_hull(member, plane_web.plane)
            assert hull.dim == 5
            assert hull.contains(plane_web.plane.space)

    def test_random_members_only_give_points(self, ctx, plane_web):
        """Over a thousand random members the residuals are always points, never planes or everything."""
        rng = random.Random(31)
        seen = set()
        split = 0
        for _ in range(1000):
            member = plane_web.member([rng.randrange(1, P) for _ in range(4)])
            result = quadric_to_points(plane_web, member)
            if result.split:
                split += 1
                seen.update(result.tags)
        assert split > 300
        assert seen <= {ResidualTag.POINT_OFF_PLANE, ResidualTag.POINT_ON_PLANE}
        assert not seen & {ResidualTag.TWO_PLANES, ResidualTag.ALL, ResidualTag.DOUBLE_PLANE}

    def test_discriminant_vanishes_exactly_on_octic(self, ctx, plane_web):
        """Five hundred samples, half of them on the octic: disc = 0 iff det = 0."""
        rng = random.Random(32)
        on_octic = 0
        for k in range(500):
            if k % 2:
                member = sample_octic_point(plane_web, f"branch:{k}")
            else:
                member = plane_web.member([rng.randrange(1, P) for _ in range(4)])
            form = binary_quotient_form(member, plane_web.plane)
            singular = member.matrix.det().is_zero()
            assert (form.discriminant == 0) == singular
            on_octic += singular
        assert on_octic >= 250

    def test_web_without_plane(self, ctx):
        """phi needs a plane."""
        web = sample_web(ctx, "no-plane")
        with pytest.raises(PreconditionError):
            quadric_to_points(web, web.member([1, 0, 0, 0]))


class TestNodes:
    """Singular points of the base locus on the plane."""

    def test_generators_vanish_at_nodes(self, ctx, plane_web):
        """Every node found by elimination kills the five maximal minors."""
        generators = node_ideal_generators(plane_web)
        assert len(generators) == 5
        assert all(g.is_homogeneous(4) for g in generators)
        basis = plane_web.plane.basis()
        for record in node_census(plane_web, rng=random.Random(0)):
            y = [record.node[i] for i in (5, 6, 7)]
            assert basis.apply(y) == record.node
            assert all(g(y).is_zero() for g in generators)

    def test_node_members(self, ctx, plane_web):
        """Node members have rank 7, vertex on the plane and vanishing octic gradient."""
        records = node_census(plane_web, rng=random.Random(0))
        assert len(records) <= 10
        assert len({r.lam for r in records}) == len(records)
        for record in records:
            assert record.member.rank() == 7
            assert plane_web.plane.contains(record.node)
            assert classify_member(plane_web, record.member) is MemberClass.RANK7_SING_ON_PLANE

    def test_brute_and_eliminate_agree(self):
        """Both node searches find the same rational nodes over a small field."""
        f101 = FieldCtx.prime_field(101)
        web = sample_web(f101, "small", Plane.default(f101))
        brute = node_census(web, mode="brute")
        eliminated = node_census(web, mode="eliminate", rng=random.Random(1))
        assert [r.node for r in brute] == [r.node for r in eliminated]

    def test_brute_limited_to_small_primes(self, ctx, plane_web):
        """Scanning all of P^2(F_65537) is refused."""
        with pytest.raises(PreconditionError):
            node_census(plane_web, mode="brute", brute_prime_limit=1000)

    def test_node_jacobian_is_bilinear_pairing(self, ctx, plane_web):
        """A(y)[i][j] is Q_i evaluated on the complement vector c_j and the plane point B y."""
        rng = random.Random(33)
        basis = plane_web.plane.basis()
        complements = plane_web.plane.complement_vectors()
        for _ in range(5):
            y = [rng.randrange(P) for _ in range(3)]
            x = basis.apply(y)
            expected = [[q.bilinear(c, x) for c in complements] for q in plane_web.quadrics]
            assert node_jacobian(plane_web, y) == Mat(ctx, expected)

    def test_unknown_mode(self, ctx, plane_web):
        """Only brute and eliminate exist."""
        with pytest.raises(ValueError):
            node_census(plane_web, mode="guess")

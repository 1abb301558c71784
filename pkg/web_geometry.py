"""
Webs of quadrics in P^7, their determinantal octic, and the correspondence
between the base locus of a web containing a plane and the double cover of
P^3 branched along the octic.

Points and parameter vectors are tuples of raw field values, normalized so
that the first nonzero coordinate is 1. A quadric is x -> x^T M x with M
symmetric, so the coefficient of x_i x_j (i != j) is 2 M_ij.
"""

import hashlib
import json
import logging
import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from exact_field import FieldCtx, Raw, UniPoly, unipoly_roots
from exact_linalg import (Mat, Subspace, Vector, normalize_point, random_symmetric,
                          rank_kernel, restrict_form)
from groebner import rational_points
from multipoly import MultiPoly, PolyMat, interpolate_homogeneous, mp_grad, polmat_det, sum_polys

logger = logging.getLogger(__name__)

AMBIENT = 8
WEB_SIZE = 4
OCTIC_DEGREE = 8
DEFAULT_PLANE_INDICES = (5, 6, 7)
DEFAULT_RETRY_BUDGET = 16


class DegenerateWebError(RuntimeError):
    """Sampling could not produce a nondegenerate web or member within its retry budget."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NonGenericError(RuntimeError):
    """A configuration that only occurs on a measure-zero set; the caller resamples."""


class NonUniqueQuadricError(NonGenericError):
    """More than one member of the web vanishes on the 3-space through a point."""


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


class InvariantViolation(AssertionError):
    """An exact identity that must hold for every input failed."""


class MemberClass(Enum):
    SMOOTH = "Smooth"
    OCTIC_SMOOTH_POINT = "OcticSmoothPoint"
    RANK_LE6 = "RankLE6"
    RANK7_SING_ON_PLANE = "Rank7SingOnPlane"


class ResidualTag(Enum):
    POINT_OFF_PLANE = "PointOffPlane"
    POINT_ON_PLANE = "PointOnPlane"
    LINE_PROPER = "LineProper"
    LINE_ON_PLANE = "LineOnPlane"
    DOUBLE_PLANE = "DoublePlane"
    TWO_PLANES = "TwoPlanes"
    ALL = "All"
    PLANE_ONLY = "PlaneOnly"

    @property
    def is_point(self) -> bool:
        return self in (ResidualTag.POINT_OFF_PLANE, ResidualTag.POINT_ON_PLANE)


@dataclass(frozen=True)
class Plane:
    """A projective plane in P^7, stored as a canonical 3-dimensional subspace of k^8."""
    space: Subspace

    def __post_init__(self):
        if self.space.ambient != AMBIENT or self.space.dim != 3:
            raise ValueError(f"A plane in P^7 needs a 3-dimensional subspace of k^8, got {self.space!r}")

    @classmethod
    def default(cls, ctx: FieldCtx) -> "Plane":
        """The coordinate plane x0 = ... = x4 = 0."""
        return cls(Subspace.coordinate(ctx, AMBIENT, DEFAULT_PLANE_INDICES))

    @classmethod
    def from_json(cls, ctx: FieldCtx, data: Sequence[Sequence[Any]]) -> "Plane":
        basis = Mat.from_json(ctx, data)
        return cls(Subspace(ctx, AMBIENT, basis.columns()))

    @property
    def ctx(self) -> FieldCtx:
        return self.space.ctx

    def basis(self) -> Mat:
        return self.space.basis()

    def complement_vectors(self) -> List[Vector]:
        return self.space.complement_vectors()

    def contains(self, point: Union[Subspace, Sequence[Any]]) -> bool:
        return self.space.contains(point)

    def is_default(self) -> bool:
        return self.space == Plane.default(self.ctx).space

    def to_json(self) -> List[List[Any]]:
        return self.basis().to_json()


@dataclass(frozen=True)
class WebMember:
    """Q_lambda = sum_i lambda_i Q_i, with lambda normalized projectively."""
    lam: Vector
    matrix: Mat

    @property
    def ctx(self) -> FieldCtx:
        return self.matrix.ctx

    def rank(self) -> int:
        return self.matrix.rank()


@dataclass(frozen=True)
class OcticSurface:
    """The determinant octic of a web and its four partial derivatives."""
    det_poly: MultiPoly
    gradient: Tuple[MultiPoly, ...]

    def value(self, lam: Sequence[Any]) -> Raw:
        return self.det_poly.evaluate(lam).value

    def gradient_at(self, lam: Sequence[Any]) -> Tuple[Raw, ...]:
        return tuple(g.evaluate(lam).value for g in self.gradient)

    def is_singular_at(self, lam: Sequence[Any]) -> bool:
        return self.value(lam) == 0 and not any(self.gradient_at(lam))


@dataclass(frozen=True)
class Web:
    """
    Four linearly independent symmetric 8x8 matrices, optionally all vanishing
    on a common plane.
    """
    ctx: FieldCtx
    quadrics: Tuple[Mat, ...]
    plane: Optional[Plane] = None
    seed: Optional[Any] = None

    def __post_init__(self):
        if len(self.quadrics) != WEB_SIZE:
            raise ValueError(f"A web needs {WEB_SIZE} quadrics, got {len(self.quadrics)}")
        for q in self.quadrics:
            if q.shape != (AMBIENT, AMBIENT) or not q.is_symmetric():
                raise ValueError("Web quadrics must be symmetric 8x8 matrices")
            if q.ctx != self.ctx:
                raise ValueError("Web quadrics must share the web's field")
        if self.plane is not None:
            for i, q in enumerate(self.quadrics):
                if not restrict_form(q, self.plane.space).is_zero():
                    raise ValueError(f"Quadric {i} does not contain the plane")

    def matrix(self, lam: Sequence[Any]) -> Mat:
        ctx = self.ctx
        coeffs = [ctx.reduce(x) for x in lam]
        rows = [[ctx.reduce(sum(c * q.rows[i][j] for c, q in zip(coeffs, self.quadrics)))
                 for j in range(AMBIENT)] for i in range(AMBIENT)]
        return Mat(ctx, rows)

    def member(self, lam: Sequence[Any]) -> WebMember:
        normalized = normalize_point(self.ctx, lam)
        return WebMember(normalized, self.matrix(normalized))

    def pencil(self) -> PolyMat:
        """M(lambda) as a matrix of linear forms in lambda_0..lambda_3."""
        return PolyMat.linear_pencil(self.ctx, [q.rows for q in self.quadrics])

    @cached_property
    def octic(self) -> OcticSurface:
        return det_octic(self)

    @cached_property
    def node_coefficients(self) -> List[List[List[Raw]]]:
        return _node_coefficients(self)

    def quadric_values(self, point: Sequence[Any]) -> Tuple[Raw, ...]:
        return tuple(q.bilinear(point, point) for q in self.quadrics)

    def contains_point(self, point: Sequence[Any]) -> bool:
        """Membership in the base locus BS(W)."""
        return not any(self.quadric_values(point))

    def jacobian(self, point: Sequence[Any]) -> Mat:
        """4 x 8 matrix with rows Q_i p (half the gradient of each quadric)."""
        return Mat(self.ctx, [q.apply(point) for q in self.quadrics])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": self.ctx.kind,
            "prime": self.ctx.modulus,
            "plane": self.plane.to_json() if self.plane else None,
            "quadrics": [q.to_json() for q in self.quadrics],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Web":
        if data.get("prime") is not None:
            ctx = FieldCtx.prime_field(int(data["prime"]))
        else:
            ctx = FieldCtx.rationals()
        plane = Plane.from_json(ctx, data["plane"]) if data.get("plane") is not None else None
        quadrics = tuple(Mat.from_json(ctx, q) for q in data["quadrics"])
        return cls(ctx, quadrics, plane, data.get("seed"))

    def content_hash(self) -> str:
        payload = {key: value for key, value in self.to_dict().items() if key in ("prime", "plane", "quadrics")}
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class BinaryForm:
    """a y0^2 + 2b y0 y1 + c y1^2 on hull / plane, with the lifts of y0, y1."""
    a: Raw
    b: Raw
    c: Raw
    discriminant: Raw
    hull: Subspace
    quotient_basis: Tuple[Vector, Vector]


@dataclass(frozen=True)
class ResidualIntersection:
    """
    Residual part of BS(W) inside a 3-space V containing the plane.

    `forms` holds the linear forms f_i (rows) in frame coordinates
    (z0; z1, z2, z3), where the frame's first column lies off the plane.
    """
    tag: ResidualTag
    forms: Mat
    frame: Mat
    rank: int
    point: Optional[Vector] = None
    line: Optional[Subspace] = None


@dataclass(frozen=True)
class CorrespondenceResult:
    member: WebMember
    binary_form: BinaryForm
    three_spaces: Tuple[Subspace, ...]
    residuals: Tuple[ResidualIntersection, ...]
    points: Tuple[Vector, ...]
    split: bool

    @property
    def discriminant(self) -> Raw:
        return self.binary_form.discriminant

    @property
    def hull(self) -> Subspace:
        return self.binary_form.hull

    @property
    def tags(self) -> Tuple[ResidualTag, ...]:
        return tuple(r.tag for r in self.residuals)


@dataclass(frozen=True)
class NodeRecord:
    node: Vector
    member: WebMember
    jacobian_rank: int

    @property
    def lam(self) -> Vector:
        return self.member.lam


# -- sampling ---------------------------------------------------------------


def _plane_frame(plane: Plane) -> Mat:
    """Invertible T whose last three columns span the plane."""
    ctx = plane.ctx
    columns = list(plane.complement_vectors()) + list(plane.space.vectors)
    return Mat.from_columns(ctx, columns)


def _random_quadric(ctx: FieldCtx, rng: random.Random, plane: Optional[Plane], bound: int) -> Mat:
    if plane is None:
        return random_symmetric(ctx, rng, AMBIENT, bound)
    block = random_symmetric(ctx, rng, AMBIENT, bound, zero_block=DEFAULT_PLANE_INDICES)
    if plane.is_default():
        return block
    # x = T y maps the coordinate plane onto `plane`
    inv = _plane_frame(plane).inverse()
    return inv.transpose() * block * inv


def _independent(ctx: FieldCtx, quadrics: Sequence[Mat]) -> bool:
    vectors = [[q.rows[i][j] for i in range(AMBIENT) for j in range(i, AMBIENT)] for q in quadrics]
    return Mat(ctx, vectors).rank() == len(quadrics)


def _random_lambda(ctx: FieldCtx, rng: random.Random, bound: int = 10) -> List[Raw]:
    while True:
        lam = [ctx.random_element(rng, bound) for _ in range(WEB_SIZE)]
        if any(lam):
            return lam


def sample_web(ctx: FieldCtx, seed: Any, plane: Optional[Plane] = None,
               retry_budget: int = DEFAULT_RETRY_BUDGET, entry_bound: int = 10) -> Web:
    """
    Draw four random symmetric matrices, vanishing on `plane` when given.

    Rejects samples whose quadrics are dependent, whose determinant vanishes
    identically, or (plane case) whose node Jacobian drops rank at a random
    point of the plane.
    """
    rng = random.Random(f"{seed}:web")
    reasons: List[str] = []
    for attempt in range(retry_budget):
        quadrics = tuple(_random_quadric(ctx, rng, plane, entry_bound) for _ in range(WEB_SIZE))
        if not _independent(ctx, quadrics):
            reasons.append("dependent quadrics")
            continue
        web = Web(ctx, quadrics, plane, seed)
        if web.matrix(_random_lambda(ctx, rng, entry_bound)).det().is_zero():
            reasons.append("determinant vanishes at a random member")
            continue
        if plane is not None:
            y = _random_lambda(ctx, rng, entry_bound)[:3]
            if not any(y) or node_jacobian(web, y).rank() < WEB_SIZE:
                reasons.append("node Jacobian rank drop")
                continue
        logger.debug(f"Sampled web after {attempt + 1} attempt(s)")
        return web
    raise DegenerateWebError(f"No nondegenerate web in {retry_budget} attempts",
                             {"seed": seed, "attempts": retry_budget, "reasons": reasons})


def planted_rank6_web(ctx: FieldCtx, seed: Any, retry_budget: int = DEFAULT_RETRY_BUDGET,
                      entry_bound: int = 10) -> Web:
    """
    Plane web whose first quadric has rank 6.

    The planted quadric is x0x5 + x1x6 + x2x7 moved by a random coordinate
    change preserving the plane x0 = ... = x4 = 0, so the member (1:0:0:0)
    has rank exactly 6.
    """
    rng = random.Random(f"{seed}:planted")
    plane = Plane.default(ctx)
    half = ctx.inv(ctx.reduce(2))
    standard = [[0] * AMBIENT for _ in range(AMBIENT)]
    for i, j in ((0, 5), (1, 6), (2, 7)):
        standard[i][j] = standard[j][i] = half
    base = Mat(ctx, standard)
    for _ in range(retry_budget):
        rows = [[ctx.random_element(rng, entry_bound) for _ in range(AMBIENT)] for _ in range(AMBIENT)]
        for i in range(5):
            for j in DEFAULT_PLANE_INDICES:
                rows[i][j] = 0
        change = Mat(ctx, rows)
        if change.det().is_zero():
            continue
        planted = change.transpose() * base * change
        others = [random_symmetric(ctx, rng, AMBIENT, entry_bound, zero_block=DEFAULT_PLANE_INDICES)
                  for _ in range(WEB_SIZE - 1)]
        quadrics = (planted, *others)
        if _independent(ctx, quadrics):
            return Web(ctx, quadrics, plane, seed)
    raise DegenerateWebError("Could not plant a rank-6 quadric", {"seed": seed, "attempts": retry_budget})


# -- the octic ----------------------------------------------------------------


def det_octic(web: Web, method: str = "minors") -> OcticSurface:
    """det(sum lambda_i Q_i) as a degree-8 form in lambda, with its gradient."""
    poly = polmat_det(web.pencil(), method)
    return _octic_surface(web, poly)


def det_octic_interpolated(web: Web) -> OcticSurface:
    """The same octic recovered from numeric determinants on a grid."""
    poly = interpolate_homogeneous(web.ctx, WEB_SIZE, OCTIC_DEGREE,
                                   lambda lam: web.matrix(lam).det().value)
    return _octic_surface(web, poly)


def _octic_surface(web: Web, poly: MultiPoly) -> OcticSurface:
    if poly.is_zero():
        raise DegenerateWebError("Determinant of the web vanishes identically", {"seed": web.seed})
    if not poly.is_homogeneous(OCTIC_DEGREE):
        raise InvariantViolation("Determinant of the web is not homogeneous of degree 8")
    return OcticSurface(poly, tuple(poly.gradient()))


# -- rank stratification ----------------------------------------------------


def classify_member(web: Web, member: WebMember) -> MemberClass:
    """
    Smooth, smooth point of the octic, or one of its two kinds of singular point.

    A rank-7 member with kernel k is a singular point of the octic exactly
    when k lies in the base locus; that equivalence is checked against the
    gradient of the octic on every rank-7 call.
    """
    if not member.matrix.det().is_zero():
        return MemberClass.SMOOTH
    rk = rank_kernel(member.matrix)
    gradient_vanishes = not any(web.octic.gradient_at(member.lam))
    if rk.rank <= 6:
        if not gradient_vanishes:
            raise InvariantViolation(f"Rank {rk.rank} member {member.lam} is a smooth point of the octic")
        return MemberClass.RANK_LE6

    kernel = rk.kernel.vectors[0]
    if gradient_vanishes != web.contains_point(kernel):
        raise InvariantViolation(f"Gradient of the octic disagrees with the kernel test at {member.lam}")
    if web.plane is not None and web.plane.contains(kernel):
        return MemberClass.RANK7_SING_ON_PLANE
    if gradient_vanishes:
        raise NonGenericError(f"Rank 7 member {member.lam} has its vertex on the base locus off the plane")
    return MemberClass.OCTIC_SMOOTH_POINT


# -- the map from quadrics to points --------------------------------------------


def tangent_hull(member: WebMember, plane: Plane) -> Subspace:
    """The 5-space {x : x^T M B = 0}, the intersection of tangent spaces along the plane."""
    mb = member.matrix * plane.basis()
    if mb.rank() < 3:
        raise NonGenericError(f"Member {member.lam} is singular along the plane (rank M B < 3)")
    return rank_kernel(mb.transpose()).kernel


def binary_quotient_form(member: WebMember, plane: Plane) -> BinaryForm:
    """Restrict the member to its tangent hull; the result lives on hull / plane."""
    ctx = member.ctx
    hull = tangent_hull(member, plane)
    span = plane.space
    lifts: List[Vector] = []
    for v in hull.vectors:
        if not span.contains(v):
            lifts.append(v)
            span = span.join(v)
    if len(lifts) != 2:
        raise InvariantViolation(f"Tangent hull of dimension {hull.dim} does not contain the plane")

    m = member.matrix
    for w in lifts + list(plane.space.vectors):
        for b in plane.space.vectors:
            if m.bilinear(w, b) != 0:
                raise InvariantViolation("Restricted form pairs nontrivially with the plane")
    a, b, c = m.bilinear(lifts[0], lifts[0]), m.bilinear(lifts[0], lifts[1]), m.bilinear(lifts[1], lifts[1])
    disc = ctx.sub(ctx.mul(b, b), ctx.mul(a, c))
    return BinaryForm(a, b, c, disc, hull, (lifts[0], lifts[1]))


def _zero_directions(ctx: FieldCtx, form: BinaryForm) -> Optional[List[Tuple[Raw, Raw]]]:
    """Isotropic vectors (y0, y1) of the binary form; None if they are not defined over the field."""
    a, b, c, disc = form.a, form.b, form.c, form.discriminant
    if a == 0 and b == 0 and c == 0:
        raise NonGenericError("Binary form vanishes identically: a pencil of 3-spaces lies in the quadric")
    if disc == 0:
        return [(ctx.neg(b), a)] if a != 0 else [(ctx.one, ctx.zero)]
    if a == 0:
        return [(ctx.one, ctx.zero), (c, ctx.neg(ctx.mul(ctx.reduce(2), b)))]
    s = ctx.sqrt(disc)
    if s is None:
        return None
    return [(ctx.sub(s, b), a), (ctx.sub(ctx.neg(s), b), a)]


def quadric_to_points(web: Web, member: WebMember) -> CorrespondenceResult:
    """
    The 3-spaces through the plane inside the quadric, and the residual point
    of the base locus in each.

    Two points for a member off the octic with a square discriminant, one
    for a member on the octic. A non-square discriminant gives an unsplit
    result with no points.
    """
    if web.plane is None:
        raise PreconditionError("quadric_to_points needs a web containing a plane")
    ctx = web.ctx
    form = binary_quotient_form(member, web.plane)
    on_octic = member.matrix.det().is_zero()
    if on_octic != (form.discriminant == 0):
        raise InvariantViolation(f"Discriminant and determinant disagree at {member.lam}")

    directions = _zero_directions(ctx, form)
    if directions is None:
        return CorrespondenceResult(member, form, (), (), (), split=False)

    w0, w1 = form.quotient_basis
    spaces, residuals, points = [], [], []
    for y0, y1 in directions:
        lift = [ctx.add(ctx.mul(y0, u), ctx.mul(y1, v)) for u, v in zip(w0, w1)]
        space = web.plane.space.join(lift)
        residual = residual_intersection(web, space)
        spaces.append(space)
        residuals.append(residual)
        if residual.tag.is_point:
            if not web.contains_point(residual.point):
                raise InvariantViolation(f"Residual point {residual.point} is not in the base locus")
            points.append(residual.point)
    return CorrespondenceResult(member, form, tuple(spaces), tuple(residuals), tuple(points), split=True)


def residual_intersection(web: Web, space: Subspace) -> ResidualIntersection:
    """
    Classify BS(W) inside a 3-space containing the plane.

    Each quadric restricts to z0 * f_i; the rank of the 4x4 matrix of the f_i
    and the position of its kernel relative to {z0 = 0} decide the tag.
    """
    ctx = web.ctx
    plane = web.plane
    if plane is None:
        raise PreconditionError("residual_intersection needs a web containing a plane")
    if space.dim != 4 or not space.contains(plane.space):
        raise PreconditionError("Residual intersection needs a 3-space containing the plane")
    offset = next(v for v in space.vectors if not plane.contains(v))
    frame = Mat.from_columns(ctx, [offset] + list(plane.space.vectors))

    rows = []
    two = ctx.reduce(2)
    for q in web.quadrics:
        r = frame.transpose() * q * frame
        if any(r.rows[i][j] for i in range(1, 4) for j in range(1, 4)):
            raise PreconditionError("Restricted quadric is not divisible by the plane equation")
        rows.append([r.rows[0][0]] + [ctx.mul(two, r.rows[0][j]) for j in range(1, 4)])
    forms = Mat(ctx, rows)
    rk = rank_kernel(forms)

    def to_ambient(z: Sequence[Raw]) -> Vector:
        return normalize_point(ctx, frame.apply(z))

    if rk.rank == 4:
        return ResidualIntersection(ResidualTag.PLANE_ONLY, forms, frame, 4)
    if rk.rank == 3:
        z = rk.kernel.vectors[0]
        tag = ResidualTag.POINT_OFF_PLANE if z[0] != 0 else ResidualTag.POINT_ON_PLANE
        return ResidualIntersection(tag, forms, frame, 3, point=to_ambient(z))
    if rk.rank == 2:
        on_plane = all(z[0] == 0 for z in rk.kernel.vectors)
        line = Subspace(ctx, AMBIENT, [frame.apply(z) for z in rk.kernel.vectors])
        tag = ResidualTag.LINE_ON_PLANE if on_plane else ResidualTag.LINE_PROPER
        return ResidualIntersection(tag, forms, frame, 2, line=line)
    if rk.rank == 1:
        common = next(r for r in forms.rows if any(r))
        tag = ResidualTag.DOUBLE_PLANE if not any(common[1:]) else ResidualTag.TWO_PLANES
        return ResidualIntersection(tag, forms, frame, 1)
    return ResidualIntersection(ResidualTag.ALL, forms, frame, 0)


# -- the map from points to quadrics --------------------------------------------


def point_to_quadric(web: Web, point: Sequence[Any]) -> WebMember:
    """
    The unique member of the web containing the 3-space through the plane and `point`.

    For a point on the plane the 3-space is the tangent space of the base
    locus there.
    """
    ctx = web.ctx
    plane = web.plane
    if plane is None:
        raise PreconditionError("point_to_quadric needs a web containing a plane")
    p = normalize_point(ctx, point)
    if not web.contains_point(p):
        raise PreconditionError(f"Point {p} is not in the base locus")

    if plane.contains(p):
        tangent = rank_kernel(web.jacobian(p)).kernel
        if tangent.dim != 4:
            raise NonGenericError(f"Base locus is singular at {p} (tangent space of dimension {tangent.dim})")
        space = tangent
    else:
        space = plane.space.join(p)

    residual = residual_intersection(web, space)
    left = rank_kernel(residual.forms).left_kernel
    if left.dim != 1:
        raise NonUniqueQuadricError(f"{left.dim} independent members vanish on the 3-space through {p}")
    lam = left.vectors[0]
    combined = [ctx.reduce(sum(l * f for l, f in zip(lam, col))) for col in zip(*residual.forms.rows)]
    if any(combined):
        raise InvariantViolation("Left kernel vector does not annihilate the residual forms")
    return web.member(lam)


# -- octic sampling -----------------------------------------------------------


def sample_octic_point(web: Web, seed: Any, line_budget: int = 64) -> WebMember:
    """Random member on the octic: restrict det to a random line and take an F_p root."""
    ctx = web.ctx
    if not ctx.is_prime_field:
        raise PreconditionError("Octic sampling needs a prime field")
    rng = random.Random(f"{seed}:octic")
    ts = list(range(OCTIC_DEGREE + 1))
    for attempt in range(line_budget):
        base = _random_lambda(ctx, rng)
        direction = _random_lambda(ctx, rng)
        values = [web.matrix([ctx.add(a, ctx.mul(t, d)) for a, d in zip(base, direction)]).det().value for t in ts]
        restricted = UniPoly.interpolate(ctx, ts, values)
        if restricted.is_zero():
            continue
        roots = unipoly_roots(restricted, rng)
        if not roots:
            continue
        t = rng.choice(roots).value
        lam = [ctx.add(a, ctx.mul(t, d)) for a, d in zip(base, direction)]
        if not any(lam):
            continue
        logger.debug(f"Octic point found on line {attempt + 1}")
        return web.member(lam)
    raise DegenerateWebError(f"No F_p-rational octic point on {line_budget} random lines",
                             {"seed": seed, "lines": line_budget})


# -- nodes on the plane ---------------------------------------------------------


def quadratic_form(ctx: FieldCtx, m: Mat) -> MultiPoly:
    """The polynomial x^T m x of a symmetric matrix."""
    n = m.nrows
    terms: Dict[tuple, Any] = {}
    for i in range(n):
        for j in range(n):
            mono = tuple((i == k) + (j == k) for k in range(n))
            terms[mono] = ctx.add(terms.get(mono, ctx.zero), m.rows[i][j])
    return MultiPoly(ctx, n, terms)


def _node_coefficients(web: Web) -> List[List[List[Raw]]]:
    """coeff[i][j][k] = c_j^T Q_i b_k: A(y)[i][j] = sum_k coeff[i][j][k] y_k."""
    if web.plane is None:
        raise PreconditionError("Nodes live on the plane of a plane-containing web")
    ctx = web.ctx
    complements = web.plane.complement_vectors()
    plane_vectors = web.plane.space.vectors
    dim = len(plane_vectors)
    # x = B y in the plane coordinates y
    frame = [MultiPoly.linear_form(ctx, [v[k] for v in plane_vectors]) for k in range(AMBIENT)]
    units = [tuple(int(m == k) for m in range(dim)) for k in range(dim)]
    half = ctx.inv(ctx.reduce(2))
    coeffs = []
    for q in web.quadrics:
        # half the gradient of x^T Q x at B y is Q B y
        grad = [g.compose_linear(frame) for g in mp_grad(quadratic_form(ctx, q))]
        rows = []
        for c in complements:
            form = sum_polys(ctx, dim, (g.scale(ck) for g, ck in zip(grad, c) if ck))
            rows.append([ctx.mul(half, form.coefficient(unit).value) for unit in units])
        coeffs.append(rows)
    return coeffs


def node_jacobian(web: Web, y: Sequence[Any]) -> Mat:
    """The 4x5 matrix A(y): Jacobian of the quadrics at B y against the complement directions."""
    ctx = web.ctx
    ys = [ctx.reduce(v) for v in y]
    coeffs = web.node_coefficients
    return Mat(ctx, [[ctx.reduce(sum(c * v for c, v in zip(entry, ys))) for entry in row] for row in coeffs])


def node_ideal_generators(web: Web) -> List[MultiPoly]:
    """The five maximal minors of A(y): quartics in the three plane coordinates."""
    ctx = web.ctx
    coeffs = web.node_coefficients
    matrix = PolyMat([[MultiPoly.linear_form(ctx, entry) for entry in row] for row in coeffs])
    generators = []
    for cols in combinations(range(5), 4):
        minor = polmat_det(matrix.submatrix(range(4), cols))
        if not minor.is_zero():
            generators.append(minor)
    return generators


def _plane_points(ctx: FieldCtx):
    p = ctx.modulus
    for y1 in range(p):
        for y2 in range(p):
            yield (1, y1, y2)
    for y2 in range(p):
        yield (0, 1, y2)
    yield (0, 0, 1)


def node_census(web: Web, mode: str = "eliminate", brute_prime_limit: int = 1000,
                rng: Optional[random.Random] = None, max_pairs: Optional[int] = None,
                max_degree: Optional[int] = None) -> List[NodeRecord]:
    """
    F_p-rational singular points of the base locus on the plane, each with its
    rank-7 member of the web.

    `brute` scans every point of the plane (small primes only); `eliminate`
    solves the node ideal with a lex Groebner basis.
    """
    ctx = web.ctx
    if web.plane is None:
        raise PreconditionError("node_census needs a web containing a plane")
    if not ctx.is_prime_field:
        raise PreconditionError("node_census needs a prime field")

    if mode == "brute":
        if ctx.modulus > brute_prime_limit:
            raise PreconditionError(f"Brute node scan limited to p <= {brute_prime_limit}, got {ctx.modulus}")
        candidates = [y for y in _plane_points(ctx) if node_jacobian(web, y).rank() < WEB_SIZE]
    elif mode == "eliminate":
        candidates = rational_points(node_ideal_generators(web), rng=rng or random.Random(0),
                                     max_pairs=max_pairs, max_degree=max_degree)
    else:
        raise ValueError(f"Unknown node census mode: {mode}")

    basis = web.plane.basis()
    records = []
    for y in candidates:
        a = normalize_point(ctx, basis.apply(y))
        jac = node_jacobian(web, y)
        rk = rank_kernel(jac)
        if rk.left_kernel.dim != 1:
            raise NonGenericError(f"Node {a} has {rk.left_kernel.dim} independent singular members")
        member = web.member(rk.left_kernel.vectors[0])
        if any(member.matrix.apply(a)):
            raise InvariantViolation(f"Node {a} is not the vertex of its member")
        if member.rank() != 7:
            raise InvariantViolation(f"Node member {member.lam} has rank {member.rank()}, expected 7")
        if any(web.octic.gradient_at(member.lam)):
            raise InvariantViolation(f"Node member {member.lam} is not a singular point of the octic")
        records.append(NodeRecord(a, member, rk.rank))

    lams = [r.lam for r in records]
    if len(set(lams)) != len(lams):
        raise InvariantViolation("Two nodes share the same singular member")
    records.sort(key=lambda r: r.node)
    logger.debug(f"Node census ({mode}) found {len(records)} rational node(s)")
    return records

"""
Closed-form invariants: Chow rings of products of projective spaces, Chern
classes and Euler characteristics of complete intersections, degrees of
symmetric determinantal loci, nodal Euler bookkeeping, Hodge numbers of
Calabi-Yau threefolds and the dimension counts of web families.

Everything is exact integer (or Fraction) arithmetic.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, prod
from typing import Dict, Iterable, List, NamedTuple, Sequence, Set, Tuple

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


@dataclass(frozen=True)
class ChowClass:
    """
    Element of Z[h_1..h_k] / (h_i^(n_i + 1)), the Chow ring of P^n_1 x ... x P^n_k.

    Monomials with an exponent above its bound are dropped on construction.
    """
    dims: Tuple[int, ...]
    coefficients: Dict[Exponents, int] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for exps, c in self.coefficients.items():
            if len(exps) != len(self.dims):
                raise ValueError(f"Exponent vector {exps} does not match dims {self.dims}")
            if c and all(0 <= e <= n for e, n in zip(exps, self.dims)):
                cleaned[tuple(exps)] = c
        object.__setattr__(self, "coefficients", cleaned)

    @classmethod
    def one(cls, dims: Sequence[int]) -> "ChowClass":
        return cls(tuple(dims), {(0,) * len(dims): 1})

    @classmethod
    def hyperplane(cls, dims: Sequence[int], index: int) -> "ChowClass":
        return cls(tuple(dims), {tuple(1 if i == index else 0 for i in range(len(dims))): 1})

    def _check(self, other: "ChowClass"):
        if other.dims != self.dims:
            raise ValueError(f"Chow classes of different spaces: {self.dims} vs {other.dims}")

    def __add__(self, other: "ChowClass") -> "ChowClass":
        self._check(other)
        coeffs = dict(self.coefficients)
        for e, c in other.coefficients.items():
            coeffs[e] = coeffs.get(e, 0) + c
        return ChowClass(self.dims, coeffs)

    def __neg__(self) -> "ChowClass":
        return ChowClass(self.dims, {e: -c for e, c in self.coefficients.items()})

    def __sub__(self, other: "ChowClass") -> "ChowClass":
        return self + (-other)

    def __mul__(self, other) -> "ChowClass":
        if isinstance(other, int):
            return ChowClass(self.dims, {e: c * other for e, c in self.coefficients.items()})
        self._check(other)
        coeffs: Dict[Exponents, int] = {}
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                coeffs[e] = coeffs.get(e, 0) + c1 * c2
        return ChowClass(self.dims, coeffs)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "ChowClass":
        result = ChowClass.one(self.dims)
        for _ in range(exponent):
            result = result * self
        return result

    def degrees(self) -> Set[int]:
        return {sum(e) for e in self.coefficients}

    def coefficient(self, exponents: Sequence[int]) -> int:
        return self.coefficients.get(tuple(exponents), 0)


def multiproj_top_degree(dims: Sequence[int], cls: ChowClass) -> int:
    """Degree of a top-dimensional class: its coefficient on prod h_i^n_i."""
    dims = tuple(dims)
    if cls.dims != dims:
        raise ValueError(f"Class lives on {cls.dims}, not {dims}")
    top = sum(dims)
    if cls.degrees() - {top}:
        raise ValueError(f"Class is not homogeneous of top degree {top}: degrees {sorted(cls.degrees())}")
    return cls.coefficient(dims)


@dataclass(frozen=True)
class CIData:
    """Complete intersection of hypersurfaces of the given degrees in P^ambient."""
    ambient: int
    degrees: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.degrees) > self.ambient:
            raise ValueError(f"{len(self.degrees)} hypersurfaces in P^{self.ambient} leave nothing")
        if any(d < 1 for d in self.degrees):
            raise ValueError(f"Hypersurface degrees must be positive, got {self.degrees}")

    @property
    def dimension(self) -> int:
        return self.ambient - len(self.degrees)

    @property
    def degree(self) -> int:
        return prod(self.degrees)


def chern_classes(ci: CIData) -> List[int]:
    """Coefficients c_0..c_m of c(T_X) = (1+h)^(n+1) / prod(1 + d_i h), m = dim X."""
    m = ci.dimension
    series = [comb(ci.ambient + 1, k) for k in range(m + 1)]
    for d in ci.degrees:
        inverse = [(-d) ** k for k in range(m + 1)]
        series = [sum(series[i] * inverse[k - i] for i in range(k + 1)) for k in range(m + 1)]
    return series


def euler_complete_intersection(ci: CIData) -> int:
    return chern_classes(ci)[ci.dimension] * ci.degree


class DeterminantalLocus(NamedTuple):
    degree: int
    codimension: int
    dimension: int


def harris_tu_symmetric_degree(n: int, r: int) -> int:
    """
    Degree of the locus of symmetric n x n matrices of rank at most r:
    prod_{a=0}^{n-r-1} C(n+a, n-r-a) / C(2a+1, a).
    """
    if not 0 < r < n:
        raise ValueError(f"Need 0 < r < n, got n={n}, r={r}")
    value = Fraction(1)
    for a in range(n - r):
        value *= Fraction(comb(n + a, n - r - a), comb(2 * a + 1, a))
    if value.denominator != 1:
        raise ArithmeticError(f"Non-integral determinantal degree {value} for n={n}, r={r}")
    return int(value)


def symmetric_determinantal_locus(n: int, r: int) -> DeterminantalLocus:
    """Degree, codimension and dimension of the rank <= r locus in P^(n(n+1)/2 - 1)."""
    codim = comb(n - r + 1, 2)
    ambient = n * (n + 1) // 2 - 1
    return DeterminantalLocus(harris_tu_symmetric_degree(n, r), codim, ambient - codim)


def complement_euler(branch_degree: int) -> int:
    """chi(P^3 minus a smooth surface of the given degree)."""
    return 4 - euler_complete_intersection(CIData(3, (branch_degree,)))


def double_cover_euler(branch_degree: int) -> int:
    """chi of the double cover of P^3 branched along a smooth surface: 2 chi(P^3 - S) + chi(S)."""
    if branch_degree % 2:
        raise ValueError(f"A double cover needs an even branch degree, got {branch_degree}")
    return 2 * complement_euler(branch_degree) + euler_complete_intersection(CIData(3, (branch_degree,)))


def double_cover_hyperplane_cube(sheets: int = 2) -> int:
    """H^3 pulled back to a finite cover of P^3: the number of sheets times H^3 on P^3."""
    return sheets * multiproj_top_degree((3,), ChowClass.hyperplane((3,), 0) ** 3)


def nodal_euler_chain(chi_smooth: int, nodes: int) -> Tuple[int, int]:
    """(chi of the nodal degeneration, chi of its small resolution); each step adds one per node."""
    if nodes < 0:
        raise ValueError("Node count must be nonnegative")
    singular = chi_smooth + nodes
    return singular, singular + nodes


def hodge_from_euler(chi: int, h11: int) -> int:
    """h^{1,2} of a Calabi-Yau threefold from chi = 2 (h^{1,1} - h^{1,2})."""
    if chi % 2:
        raise ValueError(f"Euler characteristic of a Calabi-Yau threefold is even, got {chi}")
    return h11 - chi // 2


# -- dimension counts ---------------------------------------------------------


def grassmannian_dim(k: int, n: int) -> int:
    """dim G(k, n), the k-dimensional linear subspaces of an n-dimensional space."""
    if not 0 <= k <= n:
        raise ValueError(f"G({k},{n}) is empty")
    return k * (n - k)


def quadric_space_dim(ambient: int, vanishing: Iterable[Iterable[int]] = (),
                      extra_zeros: Iterable[Tuple[int, int]] = ()) -> int:
    """
    Number of quadratic monomials x_i x_j on k^ambient left free when the quadric
    must vanish on each coordinate subspace span(e_s : s in S) and the listed
    monomials are forced to zero. This is the vector-space dimension of such quadrics.
    """
    supports = [set(s) for s in vanishing]
    zeros = {tuple(sorted(z)) for z in extra_zeros}
    free = 0
    for i, j in combinations_with_replacement(range(ambient), 2):
        if (i, j) in zeros or any(i in s and j in s for s in supports):
            continue
        free += 1
    return free


def web_family_dim(quadric_dim: int, base_dim: int = 0) -> int:
    """Webs (4-dimensional systems) inside a quadric space, plus the base they vary over."""
    return base_dim + grassmannian_dim(4, quadric_dim)


def incidence_dimension_ledger() -> Dict[str, int]:
    """Dimensions of the families of webs in P^7 met along the way, recomputed from monomial counts."""
    n = 8
    plane = (5, 6, 7)
    planes = grassmannian_dim(3, n)
    lines = grassmannian_dim(2, n)
    line_meets_plane = 2 + grassmannian_dim(1, n - 1)  # point on the plane, then a direction

    ledger = {
        "all_webs": web_family_dim(quadric_space_dim(n)),
        "webs_with_fixed_plane": web_family_dim(quadric_space_dim(n, [plane])),
        "webs_with_plane": web_family_dim(quadric_space_dim(n, [plane]), planes),
        "two_disjoint_planes": web_family_dim(quadric_space_dim(n, [(0, 1, 2), (3, 4, 5)]), 2 * planes),
        # a line, then two planes through it
        "two_planes_line": web_family_dim(quadric_space_dim(n, [(0, 1, 2), (1, 2, 3)]),
                                          lines + 2 * grassmannian_dim(1, n - 2)),
        # a point, then two planes through it
        "two_planes_point": web_family_dim(quadric_space_dim(n, [(0, 1, 2), (2, 3, 4)]),
                                           (n - 1) + 2 * grassmannian_dim(2, n - 1)),
        "plane_line_incidence": planes + line_meets_plane,
        "fiber_G(4,28)": web_family_dim(quadric_space_dim(n, [plane, (0, 5)])),
        "line_on_P_bound": web_family_dim(quadric_space_dim(n, [plane], [(4, 6), (4, 7)]),
                                          grassmannian_dim(2, 3) + grassmannian_dim(1, 5)),
        # corner entry zero: a hyperplane of P^35, then three more generators
        "rank7_singular_bound": (quadric_space_dim(n, extra_zeros=[(7, 7)]) - 1)
        + grassmannian_dim(3, quadric_space_dim(n, extra_zeros=[(7, 7)]) - 1),
    }
    logger.debug(f"Incidence ledger: {ledger}")
    return ledger


@dataclass(frozen=True)
class LedgerEntry:
    name: str
    computed: int
    note: str = ""


def closed_form_ledger() -> List[LedgerEntry]:
    """Every closed-form invariant of the octic double cover and the plane-web threefold."""
    entries = [LedgerEntry(name, value, "dimension count") for name, value in incidence_dimension_ledger().items()]

    chi_ci = euler_complete_intersection(CIData(7, (2, 2, 2, 2)))
    chi_octic = euler_complete_intersection(CIData(3, (8,)))
    chi_cover = double_cover_euler(8)
    z_sing, z_res = nodal_euler_chain(chi_cover, 84)
    z94_sing, z94_res = nodal_euler_chain(chi_cover, 94)
    x_sing, x_res = nodal_euler_chain(chi_ci, 10)
    locus = symmetric_determinantal_locus(8, 6)
    dims = (3, 2)
    h = ChowClass.hyperplane(dims, 0) + ChowClass.hyperplane(dims, 1)

    entries += [
        LedgerEntry("base_locus_degree", CIData(7, (2, 2, 2, 2)).degree, "Bezout"),
        LedgerEntry("chi_smooth_base_locus", chi_ci),
        LedgerEntry("c2_octic_surface", chern_classes(CIData(3, (8,)))[2]),
        LedgerEntry("chi_octic_surface", chi_octic),
        LedgerEntry("chi_octic_complement", complement_euler(8)),
        LedgerEntry("chi_double_cover", chi_cover),
        LedgerEntry("chi_cover_84_nodes", z_sing),
        LedgerEntry("chi_cover_84_nodes_resolved", z_res),
        LedgerEntry("chi_cover_94_nodes", z94_sing),
        LedgerEntry("chi_cover_94_nodes_resolved", z94_res),
        LedgerEntry("chi_base_locus_10_nodes", x_sing),
        LedgerEntry("chi_base_locus_10_nodes_resolved", x_res),
        LedgerEntry("resolved_chains_agree", int(z94_res == x_res), "1 when both small resolutions match"),
        LedgerEntry("h12_smooth", hodge_from_euler(chi_ci, 1)),
        LedgerEntry("h12_plane_web", hodge_from_euler(x_res, 2)),
        LedgerEntry("rank6_locus_degree", locus.degree, "symmetric 8x8, rank <= 6"),
        LedgerEntry("rank6_locus_codim", locus.codimension),
        LedgerEntry("rank6_locus_dim", locus.dimension),
        LedgerEntry("nodes_on_plane", multiproj_top_degree(dims, h ** 5), "(H1 + H2)^5 on P^3 x P^2"),
        LedgerEntry("octic_singular_points", locus.degree + multiproj_top_degree(dims, h ** 5)),
        # both sides of the generic pair have chi -128, yet they are not birational
        LedgerEntry("self_intersection_complete_intersection", CIData(7, (2, 2, 2, 2)).degree,
                    "H^3, documentation only"),
        LedgerEntry("self_intersection_double_cover", double_cover_hyperplane_cube(), "H^3, documentation only"),
    ]
    return entries

"""
Groebner certification of the point counts that rational scans can only bound.

Each case builds an ideal with finitely many projective zeros from a seeded
random web and reads its degree off the Hilbert series; the expected value
comes from the closed formulas in intersection_calc.
"""

import logging
import random
import time
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional

from exact_field import FieldCtx
from exact_linalg import random_matrix, random_symmetric
from groebner import BudgetExceededError, IdealPresentation, buchberger, hilbert_degree_dim
from intersection_calc import (CIData, ChowClass, harris_tu_symmetric_degree,
                               multiproj_top_degree)
from multipoly import MultiPoly, PolyMat, polmat_adjugate, polmat_det
from verification_report import FAIL, INCONCLUSIVE, PASS
from web_geometry import DegenerateWebError, Plane, node_ideal_generators, quadratic_form, sample_web

logger = logging.getLogger(__name__)

CASES = ("nodes10", "bezout16", "rank84-slice", "veronese4", "rank6-on-plane")
SLOW_CASES = ("rank84-slice", "rank6-on-plane")


@dataclass
class CensusReport:
    case: str
    expected: int
    computed: Optional[int]
    status: str
    proj_dimension: Optional[int] = None
    generators: int = 0
    pair_count: int = 0
    max_degree: int = 0
    wall_time: float = 0.0
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def expected_degree(case: str) -> int:
    """Predicted degree of each census ideal from intersection theory."""
    if case == "nodes10":
        dims = (3, 2)
        h = ChowClass.hyperplane(dims, 0) + ChowClass.hyperplane(dims, 1)
        return multiproj_top_degree(dims, h ** 5)
    if case == "bezout16":
        return CIData(7, (2, 2, 2, 2)).degree
    if case == "rank84-slice":
        return harris_tu_symmetric_degree(8, 6)
    if case == "veronese4":
        return harris_tu_symmetric_degree(3, 1)
    if case == "rank6-on-plane":
        # no member of rank <= 6 is singular at a point of the plane
        return 0
    raise ValueError(f"Unknown census case: {case}")


def nodes10_generators(ctx: FieldCtx, seed: Any) -> List[MultiPoly]:
    web = sample_web(ctx, seed, Plane.default(ctx))
    return node_ideal_generators(web)


def bezout16_generators(ctx: FieldCtx, seed: Any) -> List[MultiPoly]:
    """Four quadrics of a generic web restricted to a random P^4 (five homogeneous variables)."""
    web = sample_web(ctx, seed)
    rng = random.Random(f"{seed}:slice")
    while True:
        embedding = random_matrix(ctx, rng, 8, 5)
        if embedding.rank() == 5:
            break
    return [quadratic_form(ctx, embedding.transpose() * q * embedding) for q in web.quadrics]


def rank84_generators(ctx: FieldCtx, seed: Any) -> List[MultiPoly]:
    """The 36 distinct adjugate entries of M(lambda): septics whose zeros are the rank <= 6 members."""
    return rank84_generators_of(sample_web(ctx, seed).pencil())


def rank84_generators_of(pencil: PolyMat) -> List[MultiPoly]:
    adjugate = polmat_adjugate(pencil)
    return [adjugate[i, j] for i in range(8) for j in range(i, 8)]


def rank6_on_plane_generators(ctx: FieldCtx, seed: Any) -> List[MultiPoly]:
    """
    Adjugate entries of M(lambda) together with the 3x3 minors of M(lambda) B,
    B the plane basis: members of rank <= 6 with a singular point on the plane.
    """
    web = sample_web(ctx, seed, Plane.default(ctx))
    pencil = web.pencil()
    frame = PolyMat([[MultiPoly.constant(ctx, 4, v[k]) for v in web.plane.space.vectors] for k in range(8)])
    columns = pencil * frame
    generators = rank84_generators_of(pencil)
    for rows in combinations(range(8), 3):
        minor = polmat_det(columns.submatrix(rows, range(3)))
        if not minor.is_zero() and minor not in generators:
            generators.append(minor)
    return generators


def veronese4_generators(ctx: FieldCtx, seed: Any) -> List[MultiPoly]:
    """2x2 minors of a random 4-dimensional system of symmetric 3x3 matrices."""
    pencil = veronese_pencil(ctx, seed)
    generators = []
    for rows in combinations(range(3), 2):
        for cols in combinations(range(3), 2):
            minor = polmat_det(pencil.submatrix(rows, cols))
            if not minor.is_zero() and minor not in generators:
                generators.append(minor)
    return generators


def veronese_pencil(ctx: FieldCtx, seed: Any) -> PolyMat:
    rng = random.Random(f"{seed}:veronese")
    matrices = [random_symmetric(ctx, rng, 3) for _ in range(4)]
    return PolyMat.linear_pencil(ctx, [m.rows for m in matrices])


BUILDERS: Dict[str, Callable[[FieldCtx, Any], List[MultiPoly]]] = {
    "nodes10": nodes10_generators,
    "bezout16": bezout16_generators,
    "rank84-slice": rank84_generators,
    "veronese4": veronese4_generators,
    "rank6-on-plane": rank6_on_plane_generators,
}


def census_degree(case: str, ctx: FieldCtx, seed: Any = 0, max_pairs: Optional[int] = None,
                  max_degree: Optional[int] = None) -> CensusReport:
    """
    Build the named ideal, compute its Groebner basis and Hilbert degree, and
    compare with the predicted count. Budget exhaustion and degenerate samples
    are inconclusive, never failures.
    """
    if case not in BUILDERS:
        raise ValueError(f"Unknown census case: {case}; choose from {', '.join(CASES)}")
    if not ctx.is_prime_field:
        raise ValueError("Census computations run over prime fields")
    started = time.perf_counter()
    logger.info(f"Census {case} started (p={ctx.modulus}, seed={seed})")
    try:
        generators = BUILDERS[case](ctx, seed)
    except DegenerateWebError as e:
        logger.warning(f"Census {case} inconclusive: {e}")
        return CensusReport(case, expected_degree(case), None, INCONCLUSIVE,
                            wall_time=time.perf_counter() - started, message=str(e))
    return certify_ideal(case, generators, max_pairs, max_degree, started)


def certify_ideal(case: str, generators: List[MultiPoly], max_pairs: Optional[int] = None,
                  max_degree: Optional[int] = None, started: Optional[float] = None) -> CensusReport:
    """Groebner basis and Hilbert degree of given generators, compared with the prediction for `case`."""
    expected = expected_degree(case)
    started = time.perf_counter() if started is None else started
    try:
        gb = buchberger(IdealPresentation.of(generators), max_pairs=max_pairs, max_degree=max_degree)
    except BudgetExceededError as e:
        logger.warning(f"Census {case} inconclusive: {e}")
        return CensusReport(case, expected, None, INCONCLUSIVE, pair_count=e.diagnostics.get("pair_count", 0),
                            max_degree=e.diagnostics.get("max_degree", 0),
                            wall_time=time.perf_counter() - started, message=str(e))

    hilbert = hilbert_degree_dim(gb)
    if expected == 0:
        # empty projective zero set: only the irrelevant ideal is left
        computed = 0 if hilbert.proj_dimension < 0 else hilbert.degree
        status = PASS if hilbert.proj_dimension < 0 else FAIL
        message = "" if status == PASS else f"expected no points, got dimension {hilbert.proj_dimension}"
    else:
        computed = hilbert.degree
        status = PASS if hilbert.proj_dimension == 0 and hilbert.degree == expected else FAIL
        message = "" if hilbert.proj_dimension == 0 else \
            f"expected isolated points, got dimension {hilbert.proj_dimension}"
    report = CensusReport(case, expected, computed, status, hilbert.proj_dimension, len(generators),
                          gb.pair_count, gb.max_degree, time.perf_counter() - started, message)
    logger.info(f"Census {case}: degree {computed} (expected {expected}) -> {status}")
    return report

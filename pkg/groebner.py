"""
A small Buchberger engine over prime fields, with Hilbert series degree
extraction and rational point enumeration for zero-dimensional ideals.

Polynomials are handled internally as {monomial: residue} dicts; the public
API speaks MultiPoly.
"""

import logging
import random
from dataclasses import dataclass
from math import comb
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from exact_field import FieldCtx, UniPoly, unipoly_roots
from multipoly import Monomial, MultiPoly

logger = logging.getLogger(__name__)

Terms = Dict[Monomial, int]
ORDERS = ("grevlex", "lex")


class BudgetExceededError(RuntimeError):
    """Buchberger stopped at its pair or degree budget."""

    def __init__(self, message: str, diagnostics: Dict[str, int]):
        super().__init__(message)
        self.diagnostics = diagnostics


class IncompleteSolutionError(RuntimeError):
    """Rational point extraction could not account for the whole Hilbert degree."""


def grevlex_key(m: Monomial) -> Tuple:
    return (sum(m), tuple(-e for e in reversed(m)))


def lex_key(m: Monomial) -> Tuple:
    return m


def order_key(order: str) -> Callable[[Monomial], Tuple]:
    if order == "grevlex":
        return grevlex_key
    if order == "lex":
        return lex_key
    raise ValueError(f"Unknown monomial order: {order}")


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


@dataclass(frozen=True)
class IdealPresentation:
    """Generators of an ideal in a polynomial ring over F_p, with a monomial order."""
    nvars: int
    generators: Tuple[MultiPoly, ...]
    order: str = "grevlex"

    def __post_init__(self):
        if self.order not in ORDERS:
            raise ValueError(f"Unknown monomial order: {self.order}")
        if not self.generators:
            raise ValueError("An ideal presentation needs at least one generator")
        ctx = self.generators[0].ctx
        if not ctx.is_prime_field:
            raise ValueError("Groebner bases are computed over prime fields only")
        for g in self.generators:
            if g.is_zero():
                raise ValueError("Generators must be nonzero")
            if g.nvars != self.nvars or g.ctx != ctx:
                raise ValueError("Generators must share the ring of the presentation")

    @classmethod
    def of(cls, generators: Sequence[MultiPoly], order: str = "grevlex") -> "IdealPresentation":
        gens = tuple(g for g in generators if not g.is_zero())
        if not gens:
            raise ValueError("All generators are zero")
        return cls(gens[0].nvars, gens, order)

    @property
    def ctx(self) -> FieldCtx:
        return self.generators[0].ctx

    @property
    def homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis (monic, sorted by leading monomial) plus run statistics."""
    ctx: FieldCtx
    nvars: int
    order: str
    polys: Tuple[MultiPoly, ...]
    leading: Tuple[Monomial, ...]
    pair_count: int = 0
    max_degree: int = 0
    zero_reductions: int = 0

    @property
    def homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.polys)

    def is_unit(self) -> bool:
        return any(sum(m) == 0 for m in self.leading)


class _Engine:
    """Mutable state of one Buchberger run."""

    def __init__(self, ctx: FieldCtx, nvars: int, order: str,
                 max_pairs: Optional[int], max_degree: Optional[int]):
        self.p = ctx.modulus
        self.ctx = ctx
        self.nvars = nvars
        self.order = order
        self.key = order_key(order)
        self.max_pairs = max_pairs
        self.max_degree = max_degree
        self.basis: List[Terms] = []
        self.leads: List[Monomial] = []
        self.pairs: List[Tuple[int, int]] = []
        self.pair_count = 0
        self.seen_degree = 0
        self.zero_reductions = 0

    def lead(self, f: Terms) -> Monomial:
        return max(f, key=self.key)

    def monic(self, f: Terms) -> Terms:
        inv = pow(f[self.lead(f)], -1, self.p)
        return {m: c * inv % self.p for m, c in f.items()}

    def reduce(self, f: Terms, basis: Optional[List[Terms]] = None, leads: Optional[List[Monomial]] = None) -> Terms:
        """Full reduction of f modulo the current basis (leading coefficients 1)."""
        basis = self.basis if basis is None else basis
        leads = self.leads if leads is None else leads
        p = self.p
        f = dict(f)
        remainder: Terms = {}
        while f:
            top = max(f, key=self.key)
            coef = f[top]
            divisor = next((i for i, lm in enumerate(leads) if _divides(lm, top)), None)
            if divisor is None:
                remainder[top] = coef
                del f[top]
                continue
            shift = tuple(a - b for a, b in zip(top, leads[divisor]))
            for m, c in basis[divisor].items():
                mm = tuple(a + b for a, b in zip(m, shift))
                value = (f.get(mm, 0) - coef * c) % p
                if value:
                    f[mm] = value
                else:
                    f.pop(mm, None)
        return remainder

    def spoly(self, i: int, j: int) -> Terms:
        f, g = self.basis[i], self.basis[j]
        lcm = _lcm(self.leads[i], self.leads[j])
        sf = tuple(a - b for a, b in zip(lcm, self.leads[i]))
        sg = tuple(a - b for a, b in zip(lcm, self.leads[j]))
        out: Terms = {}
        for m, c in f.items():
            mm = tuple(a + b for a, b in zip(m, sf))
            out[mm] = (out.get(mm, 0) + c) % self.p
        for m, c in g.items():
            mm = tuple(a + b for a, b in zip(m, sg))
            out[mm] = (out.get(mm, 0) - c) % self.p
        return {m: c for m, c in out.items() if c}

    def update(self, h: Terms):
        """Add h to the basis: drop old pairs by the chain criterion, add coprime-filtered new pairs."""
        t = len(self.basis)
        lm_h = self.lead(h)
        kept = []
        for i, j in self.pairs:
            lcm_ij = _lcm(self.leads[i], self.leads[j])
            if (_divides(lm_h, lcm_ij) and _lcm(self.leads[i], lm_h) != lcm_ij
                    and _lcm(self.leads[j], lm_h) != lcm_ij):
                continue
            kept.append((i, j))
        self.pairs = kept
        self.basis.append(h)
        self.leads.append(lm_h)
        for i in range(t):
            if not _coprime(self.leads[i], lm_h):
                self.pairs.append((i, t))

    def select(self) -> Tuple[int, int]:
        """Normal strategy: smallest lcm in the monomial order, ties by index."""
        best = min(range(len(self.pairs)),
                   key=lambda k: (self.key(_lcm(self.leads[self.pairs[k][0]], self.leads[self.pairs[k][1]])),
                                  self.pairs[k]))
        return self.pairs.pop(best)

    def diagnostics(self) -> Dict[str, int]:
        return {"pair_count": self.pair_count, "basis_size": len(self.basis),
                "pending_pairs": len(self.pairs), "max_degree": self.seen_degree}

    def run(self, generators: Sequence[Terms]):
        for f in generators:
            r = self.reduce(f)
            if r:
                self.update(self.monic(r))
        while self.pairs:
            i, j = self.select()
            degree = sum(_lcm(self.leads[i], self.leads[j]))
            if self.max_degree is not None and degree > self.max_degree:
                raise BudgetExceededError(f"S-polynomial degree {degree} exceeds budget {self.max_degree}",
                                          self.diagnostics())
            self.pair_count += 1
            if self.max_pairs is not None and self.pair_count > self.max_pairs:
                raise BudgetExceededError(f"More than {self.max_pairs} pairs processed", self.diagnostics())
            self.seen_degree = max(self.seen_degree, degree)
            r = self.reduce(self.spoly(i, j))
            if r:
                self.update(self.monic(r))
            else:
                self.zero_reductions += 1
            if self.pair_count % 500 == 0:
                logger.debug(f"Buchberger progress: {self.diagnostics()}")

    def reduced_basis(self) -> List[Terms]:
        """Minimalize by leading monomials, then interreduce."""
        order = sorted(range(len(self.basis)), key=lambda k: self.key(self.leads[k]))
        kept: List[int] = []
        for k in order:
            if not any(_divides(self.leads[g], self.leads[k]) for g in kept):
                kept.append(k)
        polys = [self.basis[k] for k in kept]
        leads = [self.leads[k] for k in kept]
        reduced = []
        for idx, f in enumerate(polys):
            others = polys[:idx] + polys[idx + 1:]
            other_leads = leads[:idx] + leads[idx + 1:]
            tail = {m: c for m, c in f.items() if m != leads[idx]}
            r = self.reduce(tail, others, other_leads)
            r[leads[idx]] = 1
            reduced.append(r)
        return reduced


def buchberger(ideal: IdealPresentation, max_pairs: Optional[int] = None,
               max_degree: Optional[int] = None) -> GroebnerBasis:
    """
    Reduced Groebner basis of the ideal under its monomial order.

    Runs are deterministic for a given generator order. Raises
    BudgetExceededError once more than `max_pairs` pairs have been reduced
    or an S-polynomial of degree above `max_degree` comes up.
    """
    engine = _Engine(ideal.ctx, ideal.nvars, ideal.order, max_pairs, max_degree)
    engine.run([dict(g.terms) for g in ideal.generators])
    reduced = engine.reduced_basis()
    key = engine.key
    reduced.sort(key=lambda f: key(max(f, key=key)))
    polys = tuple(MultiPoly._trusted(ideal.ctx, ideal.nvars, f) for f in reduced)
    leads = tuple(max(f, key=key) for f in reduced)
    logger.debug(f"Groebner basis: {len(polys)} elements after {engine.pair_count} pairs")
    return GroebnerBasis(ideal.ctx, ideal.nvars, ideal.order, polys, leads,
                         engine.pair_count, engine.seen_degree, engine.zero_reductions)


def normal_form(f: MultiPoly, gb: GroebnerBasis) -> MultiPoly:
    """Remainder of f on division by the basis."""
    engine = _Engine(gb.ctx, gb.nvars, gb.order, None, None)
    engine.basis = [dict(g.terms) for g in gb.polys]
    engine.leads = list(gb.leading)
    return MultiPoly._trusted(gb.ctx, gb.nvars, engine.reduce(f.terms))


def is_groebner_basis(gb: GroebnerBasis) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    engine = _Engine(gb.ctx, gb.nvars, gb.order, None, None)
    engine.basis = [dict(g.terms) for g in gb.polys]
    engine.leads = list(gb.leading)
    for j in range(len(engine.basis)):
        for i in range(j):
            if engine.reduce(engine.spoly(i, j)):
                return False
    return True


# -- Hilbert series ---------------------------------------------------------------


def _minimalize(monomials: Sequence[Monomial]) -> List[Monomial]:
    result: List[Monomial] = []
    for m in sorted(set(monomials), key=sum):
        if not any(_divides(g, m) for g in result):
            result.append(m)
    return result


def _poly_add(a: List[int], b: List[int]) -> List[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def hilbert_numerator(monomials: Sequence[Monomial], nvars: int) -> List[int]:
    """
    Numerator N(t) of the Hilbert series N(t) / (1 - t)^nvars of S / (monomials).

    Pivot recursion: N(I) = N(I + x) + t N(I : x) for the variable x shared by
    the most generators; pairwise coprime generators give prod (1 - t^deg).
    """
    gens = _minimalize(monomials)
    if not gens:
        return [1]
    shared = [sum(1 for g in gens if g[v]) for v in range(nvars)]
    var = max(range(nvars), key=lambda v: shared[v])
    if shared[var] <= 1:
        result = [1]
        for g in gens:
            d = sum(g)
            factor = [1] + [0] * (d - 1) + [-1] if d else [0]
            result = _poly_mul(result, factor)
        return result
    x = tuple(1 if v == var else 0 for v in range(nvars))
    plus = [g for g in gens if not g[var]] + [x]
    colon = [g[:var] + (max(g[var] - 1, 0),) + g[var + 1:] for g in gens]
    return _poly_add(hilbert_numerator(plus, nvars), [0] + hilbert_numerator(colon, nvars))


class HilbertData(NamedTuple):
    proj_dimension: int
    degree: int
    numerator: Tuple[int, ...]


def hilbert_degree_dim(gb: GroebnerBasis) -> HilbertData:
    """
    Projective dimension and degree of the scheme cut out by a homogeneous ideal.

    The numerator of the Hilbert series of the leading-term ideal is divided
    by (1 - t) as often as possible: (1 - t)^k leaves Krull dimension
    nvars - k and degree Q(1). The unit ideal reports dimension -1, degree 0.
    """
    if not gb.homogeneous:
        raise ValueError("Hilbert degree needs a homogeneous ideal")
    if gb.is_unit():
        return HilbertData(-1, 0, (0,))
    numerator = hilbert_numerator(gb.leading, gb.nvars)
    while numerator and numerator[-1] == 0:
        numerator.pop()
    q = list(numerator)
    k = 0
    while q and sum(q) == 0:
        # synthetic division by (1 - t)
        partial, acc = [], 0
        for c in q[:-1]:
            acc += c
            partial.append(acc)
        q = partial
        k += 1
    return HilbertData(gb.nvars - k - 1, sum(q), tuple(numerator))


def hilbert_function(gb: GroebnerBasis, degree: int) -> int:
    """Number of standard monomials of the given degree."""
    numerator = hilbert_numerator(gb.leading, gb.nvars)
    n = gb.nvars
    return sum(c * comb(degree - i + n - 1, n - 1) for i, c in enumerate(numerator) if degree - i >= 0)


# -- rational points ---------------------------------------------------------------


def _affine_standard_count(leads: Sequence[Monomial], nvars: int) -> Optional[int]:
    """Number of standard monomials, or None if the quotient is infinite."""
    bounds = []
    for v in range(nvars):
        powers = [m[v] for m in leads if all(e == 0 for k, e in enumerate(m) if k != v) and m[v] > 0]
        if not powers:
            return None
        bounds.append(min(powers))
    count = 0
    stack: List[Tuple[int, ...]] = [()]
    while stack:
        prefix = stack.pop()
        if len(prefix) == nvars:
            if not any(_divides(m, prefix) for m in leads):
                count += 1
            continue
        for e in range(bounds[len(prefix)]):
            stack.append(prefix + (e,))
    return count


def _solve_triangular(gb: GroebnerBasis, rng: random.Random) -> List[Tuple[int, ...]]:
    """All F_p zeros of a zero-dimensional lex basis, by back substitution."""
    ctx, n = gb.ctx, gb.nvars
    if gb.is_unit():
        return []
    levels = []
    for k in range(n):
        levels.append([g for g in gb.polys if all(m[v] == 0 for m in g.terms for v in range(k))])

    solutions: List[Tuple[int, ...]] = [()]
    for k in range(n - 1, -1, -1):
        extended = []
        for tail in solutions:
            univariate = None
            for g in levels[k]:
                coeffs: Dict[int, int] = {}
                for m, c in g.terms.items():
                    value = c
                    for v, e in zip(range(k + 1, n), m[k + 1:]):
                        value = value * pow(tail[v - k - 1], e, ctx.modulus) % ctx.modulus
                    coeffs[m[k]] = (coeffs.get(m[k], 0) + value) % ctx.modulus
                poly = UniPoly(ctx, [coeffs.get(e, 0) for e in range(max(coeffs) + 1)])
                if poly.is_zero():
                    continue
                univariate = poly if univariate is None else univariate.gcd(poly)
            if univariate is None:
                raise IncompleteSolutionError(f"Variable {k} is not determined by the basis")
            if univariate.degree == 0:
                continue
            for root in unipoly_roots(univariate, rng):
                extended.append((root.value,) + tail)
        solutions = extended
    return solutions


def rational_points(generators: Sequence[MultiPoly], rng: Optional[random.Random] = None,
                    attempts: int = 8, max_pairs: Optional[int] = None,
                    max_degree: Optional[int] = None) -> List[Tuple[int, ...]]:
    """
    All F_p-rational points of the projective scheme cut out by homogeneous generators.

    The scheme must be zero-dimensional. After a random linear change of
    coordinates the ideal is dehomogenized, solved through a lex basis, and
    mapped back. The solution set is accepted only when the affine quotient
    has as many standard monomials as the projective Hilbert degree, so no
    point is lost at infinity.
    """
    ideal = IdealPresentation.of(generators)
    ctx, n = ideal.ctx, ideal.nvars
    if not ideal.homogeneous:
        raise ValueError("rational_points needs homogeneous generators")
    rng = rng or random.Random(0)
    hilbert = hilbert_degree_dim(buchberger(ideal, max_pairs, max_degree))
    if hilbert.proj_dimension < 0:
        return []
    if hilbert.proj_dimension > 0:
        raise ValueError(f"Scheme has dimension {hilbert.proj_dimension}, expected isolated points")

    for attempt in range(attempts):
        change = [[rng.randrange(ctx.modulus) for _ in range(n)] for _ in range(n)]
        forms = [MultiPoly.linear_form(ctx, row) for row in change]
        moved = [g.compose_linear(forms).dehomogenize(0) for g in ideal.generators]
        moved = [g for g in moved if not g.is_zero()]
        if not moved:
            continue
        lex = buchberger(IdealPresentation.of(moved, order="lex"), max_pairs, max_degree)
        count = _affine_standard_count(lex.leading, n - 1)
        if count != hilbert.degree:
            logger.debug(f"Attempt {attempt + 1}: affine count {count} vs Hilbert degree {hilbert.degree}")
            continue
        points = []
        for affine in _solve_triangular(lex, rng):
            y = (1,) + affine
            x = [sum(change[i][j] * y[j] for j in range(n)) % ctx.modulus for i in range(n)]
            if not any(x):
                continue
            if any(g.evaluate_raw(x) for g in ideal.generators):
                raise IncompleteSolutionError(f"Back-substituted point {x} does not solve the system")
            lead = next(v for v in x if v)
            inv = pow(lead, -1, ctx.modulus)
            points.append(tuple(v * inv % ctx.modulus for v in x))
        return sorted(set(points))
    raise IncompleteSolutionError(f"No coordinate change in {attempts} attempts avoided points at infinity")

"""
Sparse multivariate polynomials over an exact field, and matrices of them.

The determinantal octic of a web is built here, either by dynamic
programming over column subsets or by evaluation and interpolation.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from exact_field import FieldCtx, FieldMismatchError, Raw, Scalar, UniPoly

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

# Larger matrices are refused: 2^n subset states stop being cheap.
MAX_SYMBOLIC_SIZE = 8


def grlex_key(monomial: Monomial) -> Tuple[int, Monomial]:
    return (sum(monomial), monomial)


class MultiPoly:
    """
    Polynomial in `nvars` variables stored as {exponent tuple: raw coefficient}.

    Zero coefficients are never stored. Coefficients are raw field values of
    `ctx` (ints mod p or Fractions); `coefficient()` wraps them as Scalars.
    """
    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: Optional[Dict[Monomial, Any]] = None):
        self.ctx = ctx
        self.nvars = nvars
        self.terms: Dict[Monomial, Raw] = {}
        for mono, coef in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError(f"Exponent vector {mono} does not have {nvars} entries")
            value = ctx.reduce(coef)
            if value != 0:
                self.terms[tuple(mono)] = value

    @classmethod
    def _trusted(cls, ctx: FieldCtx, nvars: int, terms: Dict[Monomial, Raw]) -> "MultiPoly":
        # terms already reduced; only zero pruning left
        poly = cls.__new__(cls)
        poly.ctx = ctx
        poly.nvars = nvars
        if ctx.is_prime_field:
            p = ctx.modulus
            poly.terms = {m: c % p for m, c in terms.items() if c % p}
        else:
            poly.terms = {m: c for m, c in terms.items() if c}
        return poly

    @classmethod
    def zero(cls, ctx: FieldCtx, nvars: int) -> "MultiPoly":
        return cls(ctx, nvars)

    @classmethod
    def constant(cls, ctx: FieldCtx, nvars: int, value: Any) -> "MultiPoly":
        return cls(ctx, nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, ctx: FieldCtx, nvars: int, index: int) -> "MultiPoly":
        if not 0 <= index < nvars:
            raise ValueError(f"Variable index {index} out of range for {nvars} variables")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(ctx, nvars, {mono: 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, exponents: Sequence[int], coefficient: Any = 1) -> "MultiPoly":
        return cls(ctx, len(exponents), {tuple(exponents): coefficient})

    @classmethod
    def linear_form(cls, ctx: FieldCtx, coefficients: Sequence[Any]) -> "MultiPoly":
        n = len(coefficients)
        return cls(ctx, n, {tuple(1 if i == k else 0 for i in range(n)): c for k, c in enumerate(coefficients)})

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def total_degree(self) -> int:
        """Largest total degree of a stored monomial, -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        degrees = {sum(m) for m in self.terms}
        if degree is not None:
            return degrees <= {degree}
        return len(degrees) <= 1

    def coefficient(self, monomial: Sequence[int]) -> Scalar:
        return Scalar(self.ctx, self.terms.get(tuple(monomial), 0))

    def monomials(self) -> List[Monomial]:
        """Monomials in graded lexicographic order, largest first."""
        return sorted(self.terms, key=grlex_key, reverse=True)

    def _check(self, other: "MultiPoly"):
        if not isinstance(other, MultiPoly):
            raise TypeError(f"Expected MultiPoly, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise FieldMismatchError(f"Polynomials over {self.ctx} and {other.ctx}")
        if other.nvars != self.nvars:
            raise ValueError(f"Variable count mismatch: {self.nvars} vs {other.nvars}")

    # -- ring arithmetic ------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return MultiPoly._trusted(self.ctx, self.nvars, terms)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._trusted(self.ctx, self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) - c
        return MultiPoly._trusted(self.ctx, self.nvars, terms)

    def __mul__(self, other: Any) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        terms: Dict[Monomial, Raw] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return MultiPoly._trusted(self.ctx, self.nvars, terms)

    def __rmul__(self, other: Any) -> "MultiPoly":
        return self.scale(other)

    def scale(self, factor: Any) -> "MultiPoly":
        f = self.ctx.reduce(factor)
        return MultiPoly._trusted(self.ctx, self.nvars, {m: c * f for m, c in self.terms.items()})

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            raise ValueError("Negative powers are not polynomials")
        result = MultiPoly.constant(self.ctx, self.nvars, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, MultiPoly) and self.ctx == other.ctx
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.ctx, self.nvars, frozenset(self.terms.items())))

    # -- calculus and evaluation -----------------------------------------

    def evaluate_raw(self, point: Sequence[Raw]) -> Raw:
        ctx = self.ctx
        total = 0
        for mono, coef in self.terms.items():
            term = coef
            for x, e in zip(point, mono):
                if e:
                    term = term * x ** e
            total += term
        return ctx.reduce(total) if ctx.is_prime_field else Fraction(total)

    def evaluate(self, point: Sequence[Any]) -> Scalar:
        """Exact value at a point given as Scalars, ints or Fractions."""
        if len(point) != self.nvars:
            raise ValueError(f"Point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        return Scalar(self.ctx, self.evaluate_raw([self.ctx.reduce(x) for x in point]))

    __call__ = evaluate

    def derivative(self, index: int) -> "MultiPoly":
        terms: Dict[Monomial, Raw] = {}
        for mono, coef in self.terms.items():
            e = mono[index]
            if e:
                lowered = mono[:index] + (e - 1,) + mono[index + 1:]
                terms[lowered] = terms.get(lowered, 0) + coef * e
        return MultiPoly._trusted(self.ctx, self.nvars, terms)

    def gradient(self) -> List["MultiPoly"]:
        return [self.derivative(i) for i in range(self.nvars)]

    def restrict_to_line(self, base: Sequence[Any], direction: Sequence[Any]) -> UniPoly:
        """The univariate polynomial t -> f(base + t*direction)."""
        ctx = self.ctx
        a = [ctx.reduce(x) for x in base]
        b = [ctx.reduce(x) for x in direction]
        degree = max(self.total_degree, 0)
        ts = list(range(degree + 1))
        values = [self.evaluate_raw([ctx.add(x, ctx.mul(t, y)) for x, y in zip(a, b)]) for t in ts]
        return UniPoly.interpolate(ctx, ts, values)

    def compose_linear(self, forms: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute x_i -> forms[i]; all forms share one variable count."""
        if len(forms) != self.nvars:
            raise ValueError(f"Need {self.nvars} substitution forms, got {len(forms)}")
        if not forms:
            return self
        target = forms[0].nvars
        result = MultiPoly.zero(self.ctx, target)
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            if (i, e) not in powers:
                powers[(i, e)] = forms[i] ** e
            return powers[(i, e)]

        for mono, coef in self.terms.items():
            term = MultiPoly.constant(self.ctx, target, coef)
            for i, e in enumerate(mono):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def dehomogenize(self, index: int) -> "MultiPoly":
        """Set variable `index` to 1 and drop it."""
        terms: Dict[Monomial, Raw] = {}
        for mono, coef in self.terms.items():
            reduced = mono[:index] + mono[index + 1:]
            terms[reduced] = terms.get(reduced, 0) + coef
        return MultiPoly._trusted(self.ctx, self.nvars - 1, terms)

    def divide_exact(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact quotient self / divisor; raises ValueError if the division leaves a remainder."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("Division by the zero polynomial")
        ctx = self.ctx
        lead = max(divisor.terms, key=grlex_key)
        inv_lead = ctx.inv(divisor.terms[lead])
        remainder = dict(self.terms)
        quotient: Dict[Monomial, Raw] = {}
        while remainder:
            top = max(remainder, key=grlex_key)
            shift = tuple(a - b for a, b in zip(top, lead))
            if min(shift) < 0:
                raise ValueError("Polynomial division is not exact")
            q = ctx.mul(remainder[top], inv_lead)
            quotient[shift] = q
            for m, c in divisor.terms.items():
                mm = tuple(a + b for a, b in zip(m, shift))
                value = ctx.sub(remainder.get(mm, ctx.zero), ctx.mul(q, c))
                if value == 0:
                    remainder.pop(mm, None)
                else:
                    remainder[mm] = value
        return MultiPoly._trusted(ctx, self.nvars, quotient)

    # -- serialization --------------------------------------------------

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        """Canonical text: grlex-descending monomials with explicit coefficients."""
        if not self.terms:
            return "0"
        names = list(names) if names else [f"x{i}" for i in range(self.nvars)]
        parts = []
        for mono in self.monomials():
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
            parts.append("*".join([f"({self.ctx.format(self.terms[mono])})"] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly[{self.ctx}, {self.nvars}]({self.to_text()})"


def mp_grad(f: MultiPoly) -> List[MultiPoly]:
    return f.gradient()


class PolyMat:
    """Rectangular matrix of MultiPoly entries over one field and variable set."""

    def __init__(self, rows: Sequence[Sequence[MultiPoly]]):
        self.rows: List[List[MultiPoly]] = [list(r) for r in rows]
        if not self.rows or not self.rows[0]:
            raise ValueError("PolyMat needs at least one entry")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("PolyMat rows must have equal length")
        first = self.rows[0][0]
        self.ctx = first.ctx
        self.nvars = first.nvars
        for r in self.rows:
            for entry in r:
                if entry.ctx != self.ctx or entry.nvars != self.nvars:
                    raise ValueError("PolyMat entries must share field and variable count")

    @classmethod
    def linear_pencil(cls, ctx: FieldCtx, matrices: Sequence[Sequence[Sequence[Any]]]) -> "PolyMat":
        """The matrix sum_k x_k * matrices[k], one variable per matrix."""
        k = len(matrices)
        n, m = len(matrices[0]), len(matrices[0][0])
        rows = []
        for i in range(n):
            rows.append([MultiPoly.linear_form(ctx, [matrices[t][i][j] for t in range(k)]) for j in range(m)])
        return cls(rows)

    @classmethod
    def identity(cls, ctx: FieldCtx, size: int, nvars: int) -> "PolyMat":
        one = MultiPoly.constant(ctx, nvars, 1)
        zero = MultiPoly.zero(ctx, nvars)
        return cls([[one if i == j else zero for j in range(size)] for i in range(size)])

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, index: Tuple[int, int]) -> MultiPoly:
        i, j = index
        return self.rows[i][j]

    def __mul__(self, other: "PolyMat") -> "PolyMat":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = MultiPoly.zero(self.ctx, self.nvars)
                for t in range(k):
                    acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            out.append(row)
        return PolyMat(out)

    def scale(self, factor: MultiPoly) -> "PolyMat":
        return PolyMat([[e * factor for e in r] for r in self.rows])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMat":
        return PolyMat([[self.rows[i][j] for j in cols] for i in rows])

    def evaluate(self, point: Sequence[Any]) -> List[List[Scalar]]:
        return [[e.evaluate(point) for e in r] for r in self.rows]

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMat) and self.rows == other.rows


def _require_square(m: PolyMat):
    n, c = m.shape
    if n != c:
        raise ValueError(f"Determinant needs a square matrix, got {n}x{c}")
    if n > MAX_SYMBOLIC_SIZE:
        raise ValueError(f"Symbolic determinants are limited to size {MAX_SYMBOLIC_SIZE}, got {n}")


def _det_subset_dp(m: PolyMat) -> MultiPoly:
    # D[S] = signed sum over injections rows[0..|S|) -> S.
    n = m.shape[0]
    ctx, nvars = m.ctx, m.nvars
    layer: Dict[int, MultiPoly] = {0: MultiPoly.constant(ctx, nvars, 1)}
    for k in range(n):
        row = m.rows[k]
        nxt: Dict[int, MultiPoly] = {}
        for subset, partial in layer.items():
            if partial.is_zero():
                continue
            for j in range(n):
                bit = 1 << j
                if subset & bit or row[j].is_zero():
                    continue
                inversions = bin(subset >> (j + 1)).count("1")
                term = row[j] * partial
                if inversions % 2:
                    term = -term
                target = subset | bit
                nxt[target] = nxt[target] + term if target in nxt else term
        layer = nxt
    return layer.get((1 << n) - 1, MultiPoly.zero(ctx, nvars))


def _det_bareiss(m: PolyMat) -> MultiPoly:
    n = m.shape[0]
    a = [list(r) for r in m.rows]
    sign = 1
    prev = MultiPoly.constant(m.ctx, m.nvars, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            pivot = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if pivot is None:
                return MultiPoly.zero(m.ctx, m.nvars)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).divide_exact(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def polmat_det(m: PolyMat, method: str = "minors") -> MultiPoly:
    """
    Exact determinant of a square PolyMat (size at most 8).

    `minors` runs the column-subset dynamic program (2^n states), `bareiss`
    fraction-free elimination with exact polynomial division.
    """
    _require_square(m)
    if method == "minors":
        return _det_subset_dp(m)
    if method == "bareiss":
        return _det_bareiss(m)
    raise ValueError(f"Unknown determinant method: {method}")


def polmat_adjugate(m: PolyMat, method: str = "minors") -> PolyMat:
    """Classical adjoint: adj[i][j] = (-1)^(i+j) det(m without row j and column i)."""
    _require_square(m)
    n = m.shape[0]
    if n == 1:
        return PolyMat([[MultiPoly.constant(m.ctx, m.nvars, 1)]])
    symmetric = m.is_symmetric()
    entries: Dict[Tuple[int, int], MultiPoly] = {}
    for i in range(n):
        for j in range(n):
            if symmetric and j < i:
                entries[(i, j)] = entries[(j, i)]
                continue
            rows = [r for r in range(n) if r != j]
            cols = [c for c in range(n) if c != i]
            minor = polmat_det(m.submatrix(rows, cols), method)
            entries[(i, j)] = -minor if (i + j) % 2 else minor
    return PolyMat([[entries[(i, j)] for j in range(n)] for i in range(n)])


def interpolate_homogeneous(ctx: FieldCtx, nvars: int, degree: int,
                            evaluate: Callable[[Sequence[Raw]], Raw]) -> MultiPoly:
    """
    Recover a homogeneous polynomial of known degree from its values.

    Values are taken on the tensor grid {0..degree}^(nvars-1) of the chart
    x0 = 1, interpolated one axis at a time with Newton divided differences,
    converted to monomials and homogenized back. Needs more than `degree`
    field elements.
    """
    if ctx.is_prime_field and ctx.modulus <= degree:
        raise ValueError(f"Field {ctx} is too small to interpolate degree {degree}")
    free = nvars - 1
    nodes = list(range(degree + 1))
    grid: Dict[Tuple[int, ...], Raw] = {}
    for point in product(nodes, repeat=free):
        grid[point] = ctx.reduce(evaluate([ctx.one] + [ctx.reduce(x) for x in point]))

    newton_to_mono = _newton_basis_matrix(ctx, degree)
    for axis in range(free):
        grid = _transform_axis(ctx, grid, axis, degree, _divided_differences(ctx, degree))
        grid = _transform_axis(ctx, grid, axis, degree, newton_to_mono)

    terms: Dict[Monomial, Raw] = {}
    for exps, coef in grid.items():
        if coef == 0:
            continue
        lead = degree - sum(exps)
        if lead < 0:
            raise ValueError("Interpolated values are not those of a polynomial of the given degree")
        terms[(lead,) + exps] = coef
    return MultiPoly._trusted(ctx, nvars, terms)


def _divided_differences(ctx: FieldCtx, degree: int) -> List[List[Raw]]:
    """Matrix taking values at 0..degree to Newton coefficients (column form)."""
    size = degree + 1
    matrix = []
    for k in range(size):
        # value vector e_k through the divided-difference table
        coef = [ctx.one if i == k else ctx.zero for i in range(size)]
        for level in range(1, size):
            for i in range(size - 1, level - 1, -1):
                coef[i] = ctx.div(ctx.sub(coef[i], coef[i - 1]), ctx.reduce(level))
        matrix.append(coef)
    # matrix[k][i]: contribution of value k to Newton coefficient i
    return matrix


def _newton_basis_matrix(ctx: FieldCtx, degree: int) -> List[List[Raw]]:
    """matrix[i][e] = coefficient of x^e in prod_{m<i} (x - m)."""
    rows = []
    poly = UniPoly.constant(ctx, 1)
    for i in range(degree + 1):
        coeffs = list(poly.coeffs) + [ctx.zero] * (degree + 1 - len(poly.coeffs))
        rows.append(coeffs)
        poly = poly * UniPoly(ctx, [ctx.neg(ctx.reduce(i)), 1])
    return rows


def _transform_axis(ctx: FieldCtx, grid: Dict[Tuple[int, ...], Raw], axis: int, degree: int,
                    matrix: List[List[Raw]]) -> Dict[Tuple[int, ...], Raw]:
    out: Dict[Tuple[int, ...], Raw] = {}
    for key, value in grid.items():
        if value == 0:
            continue
        row = matrix[key[axis]]
        for target in range(degree + 1):
            if row[target] == 0:
                continue
            new_key = key[:axis] + (target,) + key[axis + 1:]
            out[new_key] = ctx.add(out.get(new_key, ctx.zero), ctx.mul(value, row[target]))
    return out


def sum_polys(ctx: FieldCtx, nvars: int, polys: Iterable[MultiPoly]) -> MultiPoly:
    terms: Dict[Monomial, Raw] = {}
    for f in polys:
        for m, c in f.terms.items():
            terms[m] = terms.get(m, 0) + c
    return MultiPoly._trusted(ctx, nvars, terms)

"""
Exact dense linear algebra over a FieldCtx.

Matrices and subspaces hold raw field values (see exact_field.FieldCtx);
all arithmetic goes through the owning context.
"""

import logging
from typing import Any, List, NamedTuple, Optional, Sequence, Tuple, Union

from exact_field import FieldCtx, FieldMismatchError, Raw, Scalar

logger = logging.getLogger(__name__)

Vector = Tuple[Raw, ...]


class Mat:
    """Immutable r x c matrix over one field."""
    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: FieldCtx, rows: Sequence[Sequence[Any]]):
        reduced = tuple(tuple(ctx.reduce(x) for x in row) for row in rows)
        if reduced and any(len(r) != len(reduced[0]) for r in reduced):
            raise ValueError("Matrix rows must have equal length")
        self.ctx = ctx
        self.rows: Tuple[Vector, ...] = reduced

    @classmethod
    def zeros(cls, ctx: FieldCtx, nrows: int, ncols: int) -> "Mat":
        return cls(ctx, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ctx: FieldCtx, size: int) -> "Mat":
        return cls(ctx, [[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def from_columns(cls, ctx: FieldCtx, columns: Sequence[Sequence[Any]]) -> "Mat":
        if not columns:
            raise ValueError("Need at least one column")
        return cls(ctx, [list(col[i] for col in columns) for i in range(len(columns[0]))])

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self.shape[1]

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return Scalar(self.ctx, self.rows[i][j])

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Mat":
        return Mat(self.ctx, list(zip(*self.rows)) if self.rows else [])

    T = property(transpose)

    def _check(self, other: "Mat"):
        if other.ctx != self.ctx:
            raise FieldMismatchError(f"Matrices over {self.ctx} and {other.ctx}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch {self.shape} vs {other.shape}")
        add = self.ctx.add
        return Mat(self.ctx, [[add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(-1)

    def scale(self, factor: Any) -> "Mat":
        f = self.ctx.reduce(factor)
        return Mat(self.ctx, [[self.ctx.mul(a, f) for a in r] for r in self.rows])

    def __mul__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        out = []
        for row in self.rows:
            out.append([sum(a * b for a, b in zip(row, col)) for col in cols])
        return Mat(self.ctx, out)

    def apply(self, vector: Sequence[Any]) -> Vector:
        """Matrix-vector product m.v."""
        v = [self.ctx.reduce(x) for x in vector]
        if len(v) != self.ncols:
            raise ValueError(f"Vector of length {len(v)} for {self.shape} matrix")
        return tuple(self.ctx.reduce(sum(a * b for a, b in zip(row, v))) for row in self.rows)

    def bilinear(self, u: Sequence[Any], v: Sequence[Any]) -> Raw:
        """u^T m v."""
        mv = self.apply(v)
        return self.ctx.reduce(sum(self.ctx.reduce(a) * b for a, b in zip(u, mv)))

    def is_symmetric(self) -> bool:
        n, c = self.shape
        return n == c and all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat(self.ctx, [[self.rows[i][j] for j in cols] for i in rows])

    def hstack(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ctx, [r1 + r2 for r1, r2 in zip(self.rows, other.rows)])

    def rref(self) -> Tuple["Mat", List[int]]:
        """Reduced row echelon form and pivot columns."""
        rows, pivots = _rref(self.ctx, [list(r) for r in self.rows])
        return Mat(self.ctx, rows), pivots

    def rank(self) -> int:
        return len(_rref(self.ctx, [list(r) for r in self.rows])[1])

    def det(self) -> Scalar:
        """Numeric determinant by elimination."""
        n, c = self.shape
        if n != c:
            raise ValueError(f"Determinant needs a square matrix, got {n}x{c}")
        ctx = self.ctx
        a = [list(r) for r in self.rows]
        det = ctx.one
        for k in range(n):
            pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
            if pivot is None:
                return Scalar(ctx, 0)
            if pivot != k:
                a[k], a[pivot] = a[pivot], a[k]
                det = ctx.neg(det)
            det = ctx.mul(det, a[k][k])
            inv = ctx.inv(a[k][k])
            for i in range(k + 1, n):
                if a[i][k] == 0:
                    continue
                factor = ctx.mul(a[i][k], inv)
                a[i] = [ctx.sub(x, ctx.mul(factor, y)) for x, y in zip(a[i], a[k])]
        return Scalar(ctx, det)

    def inverse(self) -> "Mat":
        n, c = self.shape
        if n != c:
            raise ValueError("Only square matrices have inverses")
        reduced, pivots = self.hstack(Mat.identity(self.ctx, n)).rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("Matrix is singular")
        return reduced.submatrix(range(n), range(n, 2 * n))

    def to_json(self) -> List[List[Any]]:
        return [[self.ctx.to_json(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, ctx: FieldCtx, data: Sequence[Sequence[Any]]) -> "Mat":
        return cls(ctx, [[ctx.from_json(x) for x in r] for r in data])

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.ctx == other.ctx and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.ctx, self.rows))

    def __repr__(self) -> str:
        return f"Mat[{self.ctx}]({[list(r) for r in self.rows]})"


def _rref(ctx: FieldCtx, rows: List[List[Raw]]) -> Tuple[List[List[Raw]], List[int]]:
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = ctx.inv(rows[r][col])
        rows[r] = [ctx.mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [ctx.sub(x, ctx.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def normalize_point(ctx: FieldCtx, vector: Sequence[Any]) -> Vector:
    """Projective normalization: first nonzero coordinate becomes 1."""
    v = [ctx.reduce(x) for x in vector]
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        raise ValueError("The zero vector is not a projective point")
    inv = ctx.inv(lead)
    return tuple(ctx.mul(x, inv) for x in v)


class Subspace:
    """
    Linear subspace of k^n in canonical form.

    The basis is the reduced row echelon form of the spanning vectors, so two
    Subspace objects are equal exactly when they describe the same space.
    """
    __slots__ = ("ctx", "ambient", "vectors", "pivots")

    def __init__(self, ctx: FieldCtx, ambient: int, vectors: Sequence[Sequence[Any]] = ()):
        rows = [[ctx.reduce(x) for x in v] for v in vectors]
        if any(len(r) != ambient for r in rows):
            raise ValueError(f"Spanning vectors must have length {ambient}")
        reduced, pivots = _rref(ctx, rows)
        self.ctx = ctx
        self.ambient = ambient
        self.vectors: Tuple[Vector, ...] = tuple(tuple(r) for r in reduced[:len(pivots)])
        self.pivots: Tuple[int, ...] = tuple(pivots)

    @classmethod
    def coordinate(cls, ctx: FieldCtx, ambient: int, indices: Sequence[int]) -> "Subspace":
        """Span of the standard basis vectors e_i, i in indices."""
        return cls(ctx, ambient, [[1 if j == i else 0 for j in range(ambient)] for i in indices])

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def basis(self) -> Mat:
        """ambient x dim matrix whose columns are the canonical basis vectors."""
        if not self.vectors:
            return Mat(self.ctx, [[] for _ in range(self.ambient)])
        return Mat.from_columns(self.ctx, self.vectors)

    def contains(self, other: Union["Subspace", Sequence[Any]]) -> bool:
        if isinstance(other, Subspace):
            return all(self.contains(v) for v in other.vectors)
        return Subspace(self.ctx, self.ambient, list(self.vectors) + [list(other)]).dim == self.dim

    def join(self, other: Union["Subspace", Sequence[Any]]) -> "Subspace":
        extra = other.vectors if isinstance(other, Subspace) else [other]
        return Subspace(self.ctx, self.ambient, list(self.vectors) + list(extra))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of [A | -B]."""
        if other.ambient != self.ambient:
            raise ValueError("Subspaces live in different ambient spaces")
        if not self.vectors or not other.vectors:
            return Subspace(self.ctx, self.ambient)
        ctx = self.ctx
        stacked = Mat.from_columns(ctx, list(self.vectors) + [[ctx.neg(x) for x in v] for v in other.vectors])
        kernel = rank_kernel(stacked).kernel
        k = self.dim
        combos = []
        for coeffs in kernel.vectors:
            combos.append([ctx.reduce(sum(c * v[i] for c, v in zip(coeffs[:k], self.vectors)))
                           for i in range(self.ambient)])
        return Subspace(ctx, self.ambient, combos)

    def complement_vectors(self) -> List[Vector]:
        """Standard basis vectors at non-pivot positions; together with the basis they span k^n."""
        return [tuple(1 if j == i else 0 for j in range(self.ambient))
                for i in range(self.ambient) if i not in self.pivots]

    def coordinates(self, vector: Sequence[Any]) -> Vector:
        """Coefficients of a vector of this subspace in the canonical basis."""
        v = [self.ctx.reduce(x) for x in vector]
        if not self.contains(v):
            raise ValueError("Vector does not lie in the subspace")
        # canonical rows have identity at pivot columns
        return tuple(v[p] for p in self.pivots)

    def to_json(self) -> List[List[Any]]:
        return [[self.ctx.to_json(x) for x in v] for v in self.vectors]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ctx == other.ctx
                and self.ambient == other.ambient and self.vectors == other.vectors)

    def __hash__(self) -> int:
        return hash((self.ctx, self.ambient, self.vectors))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, pivots={self.pivots})"


class RankKernel(NamedTuple):
    rank: int
    kernel: Subspace
    left_kernel: Subspace


def _kernel_from_rref(ctx: FieldCtx, reduced: List[List[Raw]], pivots: List[int], ncols: int) -> List[List[Raw]]:
    free = [j for j in range(ncols) if j not in pivots]
    vectors = []
    for f in free:
        v = [ctx.zero] * ncols
        v[f] = ctx.one
        for r, p in enumerate(pivots):
            v[p] = ctx.neg(reduced[r][f])
        vectors.append(v)
    return vectors


def rank_kernel(m: Mat) -> RankKernel:
    """
    Rank, right kernel {v : m v = 0} and left kernel {u : u^T m = 0}.

    Elimination is exact over the field; both kernels come back in canonical form.
    """
    ctx = m.ctx
    nrows, ncols = m.shape
    reduced, pivots = _rref(ctx, [list(r) for r in m.rows])
    kernel = Subspace(ctx, ncols, _kernel_from_rref(ctx, reduced, pivots, ncols))
    t_reduced, t_pivots = _rref(ctx, [list(r) for r in m.transpose().rows])
    left = Subspace(ctx, nrows, _kernel_from_rref(ctx, t_reduced, t_pivots, nrows))
    rank = len(pivots)
    assert rank + kernel.dim == ncols, "rank-nullity violated"
    assert rank + left.dim == nrows, "rank-nullity violated for the left kernel"
    return RankKernel(rank, kernel, left)


def restrict_form(m: Mat, s: Subspace) -> Mat:
    """B^T m B for the canonical basis B of s: the form in s-coordinates."""
    if not m.is_symmetric():
        raise ValueError("restrict_form needs a symmetric matrix")
    if s.ambient != m.nrows:
        raise ValueError(f"Subspace of k^{s.ambient} cannot restrict a {m.nrows}x{m.nrows} form")
    basis = s.basis()
    return basis.transpose() * m * basis


def span_join(a: Subspace, b: Union[Subspace, Sequence[Any]]) -> Subspace:
    if isinstance(b, Subspace) and b.ambient != a.ambient:
        raise ValueError("Subspaces live in different ambient spaces")
    return a.join(b)


def random_matrix(ctx: FieldCtx, rng, nrows: int, ncols: int, bound: int = 10) -> Mat:
    return Mat(ctx, [[ctx.random_element(rng, bound) for _ in range(ncols)] for _ in range(nrows)])


def random_symmetric(ctx: FieldCtx, rng, size: int, bound: int = 10,
                     zero_block: Optional[Sequence[int]] = None) -> Mat:
    """Uniform symmetric matrix; entries (i, j) with i, j both in zero_block are 0."""
    block = set(zero_block or ())
    rows = [[ctx.zero] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            if i in block and j in block:
                continue
            rows[i][j] = rows[j][i] = ctx.random_element(rng, bound)
    return Mat(ctx, rows)

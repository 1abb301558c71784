"""
Exact scalar arithmetic for quadric web computations.
Rationals and prime fields, plus the univariate polynomial machinery used to
sample points on the determinantal octic.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Any, List, Optional, Sequence, Tuple, Union

import sympy

logger = logging.getLogger(__name__)

DEFAULT_PRIME = 65537
RATIONALS = "rationals"
PRIME_FIELD = "prime-field"

# Below this modulus unipoly_roots scans the whole field instead of splitting.
EXHAUSTIVE_ROOT_THRESHOLD = 257

Raw = Union[int, Fraction]


class FieldMismatchError(ValueError):
    """Raised when scalars from two different fields are combined."""


class UnsupportedOperationError(ValueError):
    """Raised when an operation is not available in the given field."""


@dataclass(frozen=True)
class FieldCtx:
    """
    An exact field: the rationals or a prime field F_p.

    Heavy computations work on raw values (ints reduced mod p, or Fractions)
    through the methods of this class; Scalar wraps a raw value for the
    public API.
    """
    kind: str
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.modulus is not None:
                raise ValueError("The rational field takes no modulus")
        elif self.kind == PRIME_FIELD:
            if not isinstance(self.modulus, int) or self.modulus <= 3:
                raise ValueError(f"Prime modulus must be an integer > 3, got {self.modulus!r}")
            if not sympy.isprime(self.modulus):
                raise ValueError(f"Modulus {self.modulus} is not prime")
        else:
            raise ValueError(f"Unknown field kind: {self.kind}")

    @classmethod
    def prime_field(cls, modulus: int = DEFAULT_PRIME) -> "FieldCtx":
        return cls(PRIME_FIELD, modulus)

    @classmethod
    def rationals(cls) -> "FieldCtx":
        return cls(RATIONALS)

    @property
    def is_prime_field(self) -> bool:
        return self.kind == PRIME_FIELD

    def __str__(self) -> str:
        return f"F_{self.modulus}" if self.is_prime_field else "QQ"

    # -- raw arithmetic -------------------------------------------------

    @property
    def zero(self) -> Raw:
        return 0 if self.is_prime_field else Fraction(0)

    @property
    def one(self) -> Raw:
        return 1 if self.is_prime_field else Fraction(1)

    def reduce(self, value: Any) -> Raw:
        """Bring an int, Fraction or Scalar into this field's raw representation."""
        if isinstance(value, Scalar):
            if value.ctx != self:
                raise FieldMismatchError(f"Scalar from {value.ctx} used in {self}")
            return value.value
        if self.is_prime_field:
            if isinstance(value, Fraction):
                if value.denominator % self.modulus == 0:
                    raise ZeroDivisionError(f"Denominator {value.denominator} vanishes mod {self.modulus}")
                return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
            return int(value) % self.modulus
        return Fraction(value)

    def add(self, a: Raw, b: Raw) -> Raw:
        if self.is_prime_field:
            return (a + b) % self.modulus
        return a + b

    def sub(self, a: Raw, b: Raw) -> Raw:
        if self.is_prime_field:
            return (a - b) % self.modulus
        return a - b

    def neg(self, a: Raw) -> Raw:
        if self.is_prime_field:
            return -a % self.modulus
        return -a

    def mul(self, a: Raw, b: Raw) -> Raw:
        if self.is_prime_field:
            return a * b % self.modulus
        return a * b

    def inv(self, a: Raw) -> Raw:
        if a == 0:
            raise ZeroDivisionError(f"Division by zero in {self}")
        if self.is_prime_field:
            return pow(a, -1, self.modulus)
        return 1 / a

    def div(self, a: Raw, b: Raw) -> Raw:
        return self.mul(a, self.inv(b))

    def power(self, a: Raw, exponent: int) -> Raw:
        if exponent < 0:
            return self.power(self.inv(a), -exponent)
        if self.is_prime_field:
            return pow(a, exponent, self.modulus)
        return a ** exponent

    def random_element(self, rng: random.Random, bound: int = 10, nonzero: bool = False) -> Raw:
        """Uniform element of F_p, or a small random integer over the rationals."""
        while True:
            if self.is_prime_field:
                value = rng.randrange(self.modulus)
            else:
                value = Fraction(rng.randint(-bound, bound))
            if not nonzero or value != 0:
                return value

    def legendre(self, a: Raw) -> int:
        """Euler's criterion: 1 for nonzero squares, -1 for non-squares, 0 for zero."""
        if not self.is_prime_field:
            raise UnsupportedOperationError("Legendre symbol needs a prime field")
        if a == 0:
            return 0
        return 1 if pow(a, (self.modulus - 1) // 2, self.modulus) == 1 else -1

    def sqrt(self, a: Raw) -> Optional[Raw]:
        """
        Square root in the field, or None.

        Over F_p this is Tonelli-Shanks; over the rationals only perfect squares
        of numerator and denominator are split.
        """
        if self.is_prime_field:
            if self.legendre(a) < 0:
                return None
            return _tonelli_shanks(a, self.modulus)
        if a < 0:
            return None
        num, den = isqrt(a.numerator), isqrt(a.denominator)
        if num * num == a.numerator and den * den == a.denominator:
            return Fraction(num, den)
        return None

    def scalar(self, value: Any) -> "Scalar":
        return Scalar(self, value)

    def to_json(self, value: Raw) -> Union[int, List[int]]:
        if self.is_prime_field:
            return int(value)
        return [value.numerator, value.denominator]

    def from_json(self, obj: Union[int, Sequence[int]]) -> Raw:
        if isinstance(obj, (list, tuple)):
            return self.reduce(Fraction(obj[0], obj[1]))
        return self.reduce(obj)

    def format(self, value: Raw) -> str:
        return str(value)


def _tonelli_shanks(a: int, p: int) -> int:
    # a must be a quadratic residue mod p
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        root = pow(a, (p + 1) // 4, p)
        return min(root, p - root)

    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1

    m, c, t, root = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, root = i, b * b % p, t * b * b % p, root * b % p
    return min(root, p - root)


class Scalar:
    """An immutable field element bound to its FieldCtx."""
    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: Any):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "value", ctx.reduce(value))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _coerce(self, other: Any) -> Raw:
        if isinstance(other, Scalar):
            if other.ctx != self.ctx:
                raise FieldMismatchError(f"Cannot combine {self.ctx} and {other.ctx} scalars")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.ctx.reduce(other)
        raise TypeError(f"Cannot combine Scalar with {type(other).__name__}")

    def __add__(self, other):
        return Scalar(self.ctx, self.ctx.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.ctx, self.ctx.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return Scalar(self.ctx, self.ctx.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return Scalar(self.ctx, self.ctx.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.ctx, self.ctx.div(self.value, self._coerce(other)))

    def __rtruediv__(self, other):
        return Scalar(self.ctx, self.ctx.div(self._coerce(other), self.value))

    def __neg__(self):
        return Scalar(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, exponent: int):
        return Scalar(self.ctx, self.ctx.power(self.value, exponent))

    def inverse(self) -> "Scalar":
        return Scalar(self.ctx, self.ctx.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.ctx.reduce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx, self.value))

    def __lt__(self, other: "Scalar") -> bool:
        return self.value < self._coerce(other)

    def __repr__(self) -> str:
        return f"Scalar({self.value}, {self.ctx})"

    def __str__(self) -> str:
        return str(self.value)


def sqrt_mod_p(a: Scalar) -> Optional[Scalar]:
    """
    Square root of a prime-field element (Tonelli-Shanks).

    Returns the smaller of the two roots, None for non-residues, 0 for 0.
    """
    if not a.ctx.is_prime_field:
        raise UnsupportedOperationError("sqrt_mod_p requires a prime field")
    root = a.ctx.sqrt(a.value)
    return None if root is None else Scalar(a.ctx, root)


class UniPoly:
    """
    Dense univariate polynomial over a FieldCtx.

    Coefficients are stored low degree first with no trailing zeros; the
    zero polynomial has an empty coefficient tuple and degree -1.
    """
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[Any] = ()):
        values = [ctx.reduce(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self.ctx = ctx
        self.coeffs: Tuple[Raw, ...] = tuple(values)

    @classmethod
    def x(cls, ctx: FieldCtx) -> "UniPoly":
        return cls(ctx, [0, 1])

    @classmethod
    def constant(cls, ctx: FieldCtx, value: Any) -> "UniPoly":
        return cls(ctx, [value])

    @classmethod
    def from_roots(cls, ctx: FieldCtx, roots: Sequence[Any]) -> "UniPoly":
        result = cls.constant(ctx, 1)
        for r in roots:
            result = result * cls(ctx, [ctx.neg(ctx.reduce(r)), 1])
        return result

    @classmethod
    def interpolate(cls, ctx: FieldCtx, xs: Sequence[Any], ys: Sequence[Any]) -> "UniPoly":
        """Unique polynomial of degree < len(xs) through the given points (Newton form)."""
        xs = [ctx.reduce(x) for x in xs]
        coef = [ctx.reduce(y) for y in ys]
        n = len(xs)
        if len(set(xs)) != n:
            raise ValueError("Interpolation nodes must be distinct")
        for level in range(1, n):
            for i in range(n - 1, level - 1, -1):
                coef[i] = ctx.div(ctx.sub(coef[i], coef[i - 1]), ctx.sub(xs[i], xs[i - level]))
        result = cls.constant(ctx, coef[-1]) if n else cls(ctx)
        for i in range(n - 2, -1, -1):
            result = result * cls(ctx, [ctx.neg(xs[i]), 1]) + cls.constant(ctx, coef[i])
        return result

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Raw:
        if not self.coeffs:
            raise ValueError("Zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "UniPoly":
        inv = self.ctx.inv(self.leading)
        return UniPoly(self.ctx, [self.ctx.mul(c, inv) for c in self.coeffs])

    def evaluate(self, x: Any) -> Scalar:
        return Scalar(self.ctx, self.evaluate_raw(self.ctx.reduce(x)))

    __call__ = evaluate

    def evaluate_raw(self, x: Raw) -> Raw:
        ctx = self.ctx
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def _check(self, other: "UniPoly"):
        if other.ctx != self.ctx:
            raise FieldMismatchError(f"Cannot combine polynomials over {self.ctx} and {other.ctx}")

    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        ctx = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ctx.zero,) * (n - len(self.coeffs))
        b = other.coeffs + (ctx.zero,) * (n - len(other.coeffs))
        return UniPoly(ctx, [ctx.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return UniPoly(self.ctx)
        ctx = self.ctx
        out = [ctx.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
        return UniPoly(ctx, out)

    def scale(self, factor: Any) -> "UniPoly":
        f = self.ctx.reduce(factor)
        return UniPoly(self.ctx, [self.ctx.mul(c, f) for c in self.coeffs])

    def __divmod__(self, other: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("Polynomial division by zero")
        ctx = self.ctx
        rem = list(self.coeffs)
        quot = [ctx.zero] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv_lead = ctx.inv(other.leading)
        d = other.degree
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = ctx.mul(c, inv_lead)
            quot[k - d] = q
            for j, b in enumerate(other.coeffs):
                rem[k - d + j] = ctx.sub(rem[k - d + j], ctx.mul(q, b))
        return UniPoly(ctx, quot), UniPoly(ctx, rem[:d] if d > 0 else [])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic greatest common divisor (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a if a.is_zero() else a.monic()

    def powmod(self, exponent: int, modulus: "UniPoly") -> "UniPoly":
        result = UniPoly.constant(self.ctx, 1) % modulus
        base = self % modulus
        while exponent:
            if exponent & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            exponent >>= 1
        return result

    def derivative(self) -> "UniPoly":
        ctx = self.ctx
        return UniPoly(ctx, [ctx.mul(ctx.reduce(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ctx, self.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)}, {self.ctx})"


def unipoly_roots(f: UniPoly, rng: Optional[random.Random] = None,
                  exhaustive_threshold: int = EXHAUSTIVE_ROOT_THRESHOLD) -> Tuple[Scalar, ...]:
    """
    Distinct roots of f in F_p, sorted by residue.

    The split part g = gcd(f, X^p - X) is computed by modular exponentiation of
    X and then separated by equal-degree splitting with random shifts. Small
    fields are scanned exhaustively.
    """
    ctx = f.ctx
    if not ctx.is_prime_field:
        raise UnsupportedOperationError("unipoly_roots requires a prime field")
    if f.is_zero():
        raise ValueError("The zero polynomial has every element as a root")
    if f.degree == 0:
        return ()

    p = ctx.modulus
    if p <= exhaustive_threshold:
        return tuple(Scalar(ctx, r) for r in range(p) if f.evaluate_raw(r) == 0)

    rng = rng or random.Random(0)
    x = UniPoly.x(ctx)
    g = f.monic().gcd(x.powmod(p, f) - x)
    roots = sorted(_split_linear_factors(g, rng))
    return tuple(Scalar(ctx, r) for r in roots)


def _split_linear_factors(g: UniPoly, rng: random.Random) -> List[int]:
    """Roots of a monic squarefree product of distinct linear factors."""
    ctx = g.ctx
    if g.degree <= 0:
        return []
    if g.degree == 1:
        return [ctx.neg(g.coeffs[0])]
    half = (ctx.modulus - 1) // 2
    one = UniPoly.constant(ctx, 1)
    while True:
        shift = UniPoly(ctx, [rng.randrange(ctx.modulus), 1])
        d = g.gcd(shift.powmod(half, g) - one)
        if 0 < d.degree < g.degree:
            return _split_linear_factors(d, rng) + _split_linear_factors(g // d, rng)

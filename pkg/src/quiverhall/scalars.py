"""Exact arithmetic in Q(sqrt(q)) for a prime q.

Every coefficient in the engine is an element a + b*v with v = sqrt(q) and
a, b rational.  Since q is prime, v is irrational and the pair (a, b) is
unique, so equality of scalars is equality of the pairs.  No floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PreconditionError

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
)


def check_prime(p: int) -> int:
    """Validate the field order guardrail: p prime, 2 <= p <= 97."""
    if p not in _SMALL_PRIMES:
        raise PreconditionError(f"field order must be a prime in [2, 97], got {p}")
    return p


class CoeffScalar:
    """An element a + b*sqrt(q) of Q(sqrt(q)), stored exactly."""

    __slots__ = ("q", "a", "b")

    def __init__(self, q: int, a=0, b=0):
        self.q = q
        self.a = Fraction(a)
        self.b = Fraction(b)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(q: int) -> "CoeffScalar":
        return CoeffScalar(q, 0, 0)

    @staticmethod
    def one(q: int) -> "CoeffScalar":
        return CoeffScalar(q, 1, 0)

    @staticmethod
    def of(q: int, value) -> "CoeffScalar":
        """Rational value as a scalar."""
        return CoeffScalar(q, Fraction(value), 0)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0

    # -- ring operations ----------------------------------------------

    def _check(self, other: "CoeffScalar") -> None:
        if self.q != other.q:
            raise PreconditionError(f"mixing scalars over q={self.q} and q={other.q}")

    def __add__(self, other: "CoeffScalar") -> "CoeffScalar":
        self._check(other)
        return CoeffScalar(self.q, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "CoeffScalar") -> "CoeffScalar":
        self._check(other)
        return CoeffScalar(self.q, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "CoeffScalar":
        return CoeffScalar(self.q, -self.a, -self.b)

    def __mul__(self, other: "CoeffScalar") -> "CoeffScalar":
        self._check(other)
        a, b, c, d, q = self.a, self.b, other.a, other.b, self.q
        return CoeffScalar(q, a * c + q * b * d, a * d + b * c)

    def scale(self, r) -> "CoeffScalar":
        r = Fraction(r)
        return CoeffScalar(self.q, self.a * r, self.b * r)

    def inverse(self) -> "CoeffScalar":
        # (a + b v)^(-1) = (a - b v) / (a^2 - q b^2); the norm is nonzero
        # for (a, b) != (0, 0) because sqrt(q) is irrational.
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        norm = self.a * self.a - self.q * self.b * self.b
        return CoeffScalar(self.q, self.a / norm, -self.b / norm)

    def __truediv__(self, other: "CoeffScalar") -> "CoeffScalar":
        return self * other.inverse()

    def __pow__(self, n: int) -> "CoeffScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = CoeffScalar.one(self.q)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / hashing ------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoeffScalar)
            and self.q == other.q
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.q, self.a, self.b))

    def __repr__(self) -> str:
        return f"CoeffScalar(q={self.q}, {self})"

    def __str__(self) -> str:
        return format_scalar(self)


def q_power(q: int, m) -> CoeffScalar:
    """q**m for m in (1/2)Z, exactly.  q_power(1/2) is v = sqrt(q)."""
    m = Fraction(m)
    if m.denominator == 1:
        k = m.numerator
        return CoeffScalar(q, Fraction(q) ** k, 0)
    if m.denominator == 2:
        k = int(m - Fraction(1, 2))
        return CoeffScalar(q, 0, Fraction(q) ** k)
    raise PreconditionError(f"q_power exponent must be a half-integer, got {m}")


def v_power(q: int, e: int) -> CoeffScalar:
    """v**e with v = sqrt(q), for integer e (possibly negative)."""
    return q_power(q, Fraction(e, 2))


def format_scalar(x: CoeffScalar) -> str:
    """Deterministic compact rendering, e.g. '1', '-1/2', 'v', '1/2+3*v'."""
    if x.is_zero():
        return "0"
    parts = []
    if x.a != 0:
        parts.append(str(x.a))
    if x.b != 0:
        if x.b == 1:
            bs = "v"
        elif x.b == -1:
            bs = "-v"
        else:
            bs = f"{x.b}*v"
        if parts and not bs.startswith("-"):
            parts.append("+" + bs)
        else:
            parts.append(bs)
    return "".join(parts)

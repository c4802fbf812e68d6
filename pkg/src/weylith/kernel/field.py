"""Exact ground fields: the rationals and prime fields GF(p).

Elements of both fields support the ordinary Python arithmetic operators, so
the linear algebra in :mod:`weylith.kernel.linalg` is written once against
``+ - * /`` and ``== 0``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from weylith.errors import InvalidInputError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases (deterministic below 3.18e23)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Fp:
    """A residue modulo a prime, stored in ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other: Any) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"mixing GF({self.p}) with GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return Fp(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.value == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return Fp(o * pow(self.value, -1, self.p), self.p)

    def __neg__(self):
        return Fp(-self.value, self.p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        return Fp(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.value - o) % self.p == 0

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class RationalField:
    """The field of rational numbers, with :class:`fractions.Fraction` elements."""

    characteristic = 0
    name = "QQ"

    def __call__(self, x: Any) -> Fraction:
        if isinstance(x, Fp):
            raise TypeError("cannot lift a prime-field residue to QQ")
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """GF(p) for a prime p."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise InvalidInputError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x: Any) -> Fp:
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ValueError("residue from a different prime field")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return Fp(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return Fp(int(x), self.p)

    @property
    def zero(self) -> Fp:
        return Fp(0, self.p)

    @property
    def one(self) -> Fp:
        return Fp(1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


QQ = RationalField()

# Largest prime below 2**31; comfortably above the 2**20 floor for probabilistic checks.
DEFAULT_PRIME = 2147483647


def field_from_name(name: str):
    """``"QQ"`` or ``"GF(p)"`` / ``"p"`` -> field object."""
    name = name.strip()
    if name.upper() in ("QQ", "Q"):
        return QQ
    if name.upper().startswith("GF(") and name.endswith(")"):
        name = name[3:-1]
    return PrimeField(int(name))


def scalar_to_str(x: Any) -> str:
    """Exact text form used in JSON output."""
    if isinstance(x, Fp):
        return str(x.value)
    return str(x)

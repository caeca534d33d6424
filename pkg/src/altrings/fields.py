"""Exact scalar arithmetic over the supported coefficient fields.

Two kinds of field are provided: the rationals (backed by
``fractions.Fraction``) and prime fields GF(p) (backed by ints reduced
mod p).  All higher layers talk to scalars only through a field object,
so the same elimination and algebra code runs over either.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class FieldError(ValueError):
    """Raised for malformed scalars or invalid field parameters."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class RationalField:
    """The field of rational numbers with exact arithmetic."""

    characteristic = 0
    name = "Q"

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return self.parse(value)
        raise FieldError(f"cannot interpret {value!r} as a rational")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise FieldError("division by zero")
        return Fraction(a) / b

    def is_zero(self, a) -> bool:
        return a == 0

    def parse(self, token: str) -> Fraction:
        try:
            return Fraction(token.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational literal {token!r}") from exc

    def format(self, a) -> str:
        return str(Fraction(a))

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self):
        raise FieldError("the rational field is not enumerable")

    def key(self):
        return ("Q",)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Q"


class PrimeField:
    """The finite field GF(p) for a prime p, elements stored as ints in [0, p)."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1 % p

    def coerce(self, value) -> int:
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise FieldError(f"denominator of {value} vanishes mod {self.p}")
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        raise FieldError(f"cannot interpret {value!r} as an element of {self.name}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError("division by zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def parse(self, token: str) -> int:
        token = token.strip()
        try:
            value = int(token)
        except ValueError as exc:
            raise FieldError(f"bad residue literal {token!r} for {self.name}") from exc
        return value % self.p

    def format(self, a) -> str:
        return str(a % self.p)

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self):
        return range(self.p)

    def key(self):
        return ("GF", self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return self.name


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(name: str):
    """Parse a field name such as ``Q``, ``GF(7)`` or ``GF 7``."""
    text = name.strip()
    if text == "Q":
        return QQ
    compact = text.replace(" ", "")
    if compact.startswith("GF(") and compact.endswith(")"):
        body = compact[3:-1]
    elif text.startswith("GF"):
        body = text[2:].strip()
    else:
        raise FieldError(f"unknown field {name!r}")
    try:
        p = int(body)
    except ValueError as exc:
        raise FieldError(f"unknown field {name!r}") from exc
    return GF(p)

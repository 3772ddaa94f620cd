"""Exact coefficient domains.

Coefficients are stored as native numbers: ``gmpy2.mpq`` for the rationals
(and the localized integers), plain ``int`` for the integers and for residues
modulo a prime.  Each domain knows how to normalise a freshly computed value
(``modulus`` is nonzero exactly for prime fields, where every result is taken
mod p).
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq, mpz, is_prime

__all__ = [
    "ScalarDomain",
    "Rationals",
    "PrimeField",
    "Integers",
    "LocalizedIntegers",
    "QQ",
    "ZZ",
    "GF",
    "parse_domain",
    "DomainError",
]


class DomainError(ArithmeticError):
    pass


def prime_factors(n):
    n = abs(int(n))
    out, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


class ScalarDomain:
    name = "?"
    is_field = True
    modulus = 0
    characteristic = 0

    def coerce(self, value):
        raise NotImplementedError

    def norm(self, c):
        return c

    def is_unit(self, c):
        return c != 0

    def inv(self, c):
        raise NotImplementedError

    def fmt(self, c):
        return str(c)

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))

    def __repr__(self):
        return self.name


def _as_fraction(value):
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, (int, mpz)):
        return int(value), 1
    if isinstance(value, Fraction):
        return value.numerator, value.denominator
    if type(value) is type(mpq()):
        return int(value.numerator), int(value.denominator)
    if isinstance(value, float):
        raise DomainError("floating point coefficients are not allowed")
    raise DomainError(f"cannot interpret {value!r} as an exact scalar")


class Rationals(ScalarDomain):
    name = "Q"

    def coerce(self, value):
        n, d = _as_fraction(value)
        return mpq(n, d)

    def inv(self, c):
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / mpq(c)

    def fmt(self, c):
        c = mpq(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class LocalizedIntegers(Rationals):
    """Z[1/S]: rational arithmetic with a denominator check on demand."""

    def __init__(self, primes):
        primes = tuple(sorted(set(int(p) for p in primes)))
        if not primes:
            raise DomainError("localization needs a nonempty prime set")
        for p in primes:
            if not is_prime(p):
                raise DomainError(f"{p} is not prime")
        self.primes = primes
        self.name = "Z[" + ",".join(f"1/{p}" for p in primes) + "]"

    def coerce(self, value):
        c = super().coerce(value)
        self.check(c)
        return c

    def admits(self, c):
        return prime_factors(mpq(c).denominator) <= set(self.primes)

    def check(self, c):
        if not self.admits(c):
            raise DomainError(f"{c} is not in {self.name}")

    def is_unit(self, c):
        if c == 0:
            return False
        c = mpq(c)
        return prime_factors(c.numerator) <= set(self.primes) and self.admits(c)


class PrimeField(ScalarDomain):
    def __init__(self, p):
        p = int(p)
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.modulus = p
        self.characteristic = p
        self.name = f"F{p}"

    def coerce(self, value):
        n, d = _as_fraction(value)
        if d % self.p == 0:
            raise DomainError(f"denominator {d} is not invertible in {self.name}")
        return n * pow(d, -1, self.p) % self.p

    def norm(self, c):
        return c % self.p

    def is_unit(self, c):
        return c % self.p != 0

    def inv(self, c):
        if c % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(int(c), -1, self.p)

    def fmt(self, c):
        return str(c % self.p)


class Integers(ScalarDomain):
    name = "Z"
    is_field = False

    def coerce(self, value):
        n, d = _as_fraction(value)
        if d != 1:
            raise DomainError(f"{n}/{d} is not an integer")
        return n

    def is_unit(self, c):
        return c in (1, -1)

    def inv(self, c):
        if c not in (1, -1):
            raise DomainError(f"{c} is not a unit in Z")
        return c


QQ = Rationals()
ZZ = Integers()


def GF(p):
    return PrimeField(p)


def parse_domain(spec: str) -> ScalarDomain:
    """``Q``, ``Z``, ``Fp:<p>``/``F<p>``, or ``Z[1/2,1/3]``-style localizations."""
    s = spec.strip()
    if s in ("Q", "QQ"):
        return QQ
    if s in ("Z", "ZZ"):
        return ZZ
    if s.startswith("Fp:"):
        return PrimeField(int(s[3:]))
    if s.startswith("F") and s[1:].isdigit():
        return PrimeField(int(s[1:]))
    if s.startswith("Z[") and s.endswith("]"):
        primes = [int(t.strip().split("/")[-1]) for t in s[2:-1].split(",")]
        return LocalizedIntegers(primes)
    raise DomainError(f"unknown coefficient domain {spec!r}")

"""Coefficient rings for conic arithmetic.

Each context normalizes its own elements (ints, Fractions, or coefficient
tuples for extension fields) and supplies ``half`` so the group law can
divide by 2.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .ntkernel import is_prime


class Integers:
    name = "ZZ"
    finite = False

    def coerce(self, v):
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise ValueError(f"{v} is not an integer")
            return v.numerator
        return int(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def half(self, a):
        if a % 2:
            raise AssertionError(f"integral parity violated: {a} is odd")
        return a // 2

    def is_zero(self, a):
        return a == 0

    def __eq__(self, other):
        return type(other) is type(self)

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class Rationals(Integers):
    name = "QQ"

    def coerce(self, v):
        return Fraction(v)

    def half(self, a):
        return a / 2


class IntegersMod:
    """Z/nZ for odd n >= 3."""

    finite = True

    def __init__(self, n: int):
        if n < 3 or n % 2 == 0:
            raise ValueError(f"modulus must be odd and >= 3, got {n}")
        self.n = n
        self._inv2 = (n + 1) // 2

    @property
    def name(self):
        return f"Z/{self.n}"

    @property
    def size(self):
        return self.n

    def coerce(self, v):
        if isinstance(v, Fraction):
            return v.numerator * pow(v.denominator, -1, self.n) % self.n
        return int(v) % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def mul(self, a, b):
        return a * b % self.n

    def neg(self, a):
        return -a % self.n

    def half(self, a):
        return a * self._inv2 % self.n

    def is_zero(self, a):
        return a % self.n == 0

    def elements(self):
        return range(self.n)

    def __eq__(self, other):
        return type(other) is type(self) and other.n == self.n

    def __hash__(self):
        return hash((self.name, self.n))

    def __repr__(self):
        return f"{type(self).__name__}({self.n})"


class PrimeField(IntegersMod):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        super().__init__(p)
        self.p = p

    @property
    def name(self):
        return f"F_{self.p}"


def _has_root(poly, p):
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def find_irreducible(p: int, f: int):
    """First monic degree-f polynomial over F_p without roots (f <= 3)."""
    if f == 1:
        return (0, 1)
    if f > 3:
        raise ValueError("root test only certifies irreducibility for f <= 3")
    for coeffs in itertools.product(range(p), repeat=f):
        poly = tuple(coeffs) + (1,)
        if coeffs[0] and not _has_root(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class ExtField:
    """F_{p^f} as F_p[t]/(modulus); elements are coefficient tuples, low first."""

    finite = True

    def __init__(self, p: int, f: int, modulus=None):
        if p % 2 == 0 or not is_prime(p):
            raise ValueError(f"{p} must be an odd prime")
        if f < 1:
            raise ValueError("degree must be >= 1")
        if modulus is None:
            modulus = find_irreducible(p, f)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if 1 < f <= 3 and _has_root(modulus, p):
            raise ValueError(f"modulus {modulus} has a root mod {p}")
        if f > 3:
            raise ValueError("desk scale: f <= 3")
        self.p, self.f, self.modulus = p, f, modulus
        self._inv2 = (p + 1) // 2

    @property
    def name(self):
        return f"F_{self.p}^{self.f}"

    @property
    def size(self):
        return self.p**self.f

    def coerce(self, v):
        if isinstance(v, (tuple, list)):
            v = tuple(int(c) % self.p for c in v)
            if len(v) > self.f:
                return self._reduce(list(v))
            return v + (0,) * (self.f - len(v))
        return (int(v) % self.p,) + (0,) * (self.f - 1)

    def _reduce(self, coeffs):
        p, f, mod = self.p, self.f, self.modulus
        for i in range(len(coeffs) - 1, f - 1, -1):
            c = coeffs[i]
            if c:
                for j in range(f + 1):
                    coeffs[i - f + j] = (coeffs[i - f + j] - c * mod[j]) % p
        return tuple(c % p for c in coeffs[:f])

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def half(self, a):
        return tuple(x * self._inv2 % self.p for x in a)

    def is_zero(self, a):
        return not any(a)

    def elements(self):
        return itertools.product(range(self.p), repeat=self.f)

    def __eq__(self, other):
        return type(other) is type(self) and (self.p, self.f, self.modulus) == (
            other.p,
            other.f,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __repr__(self):
        return f"ExtField({self.p}, {self.f}, {self.modulus})"


ZZ = Integers()
QQ = Rationals()

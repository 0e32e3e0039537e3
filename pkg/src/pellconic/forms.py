"""Binary quadratic forms and (narrow) class groups of small discriminants.

Classes are found by brute enumeration of reduced forms.  For disc < 0
every class has one reduced positive-definite form; for disc > 0 the
reduced indefinite forms fall into cycles under rho, one cycle per proper
(narrow) class.  The group law is Dirichlet composition followed by
reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .modular import AbelianInvariants, abelian_invariants
from .ntkernel import is_square

MAX_ABS_DISC = 10**4


class QuadraticForm(tuple):
    """(a, b, c) meaning a x^2 + b x y + c y^2."""

    def __new__(cls, a, b, c):
        return super().__new__(cls, (a, b, c))

    a = property(lambda self: self[0])
    b = property(lambda self: self[1])
    c = property(lambda self: self[2])

    @property
    def disc(self):
        a, b, c = self
        return b * b - 4 * a * c

    def is_primitive(self):
        return gcd(gcd(self[0], self[1]), self[2]) == 1

    def __call__(self, x, y):
        a, b, c = self
        return a * x * x + b * x * y + c * y * y

    def __repr__(self):
        return f"QuadraticForm{tuple(self)}"


def _check_disc(D):
    if D % 4 not in (0, 1) or D in (0, 1) or is_square(D):
        raise ValueError(f"{D} is not a non-square discriminant")
    if abs(D) > MAX_ABS_DISC:
        raise ValueError(f"|disc| > {MAX_ABS_DISC} is beyond desk scale")


def principal_form(D: int) -> QuadraticForm:
    b = D % 2
    return QuadraticForm(1, b, (b * b - D) // 4)


# -- definite -------------------------------------------------------------


def reduce_definite(f) -> QuadraticForm:
    a, b, c = f
    if a <= 0:
        raise ValueError("only positive definite forms")
    while True:
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        return QuadraticForm(a, b, c)


def reduced_definite_forms(D: int) -> list:
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and (a == c)):
                continue
            f = QuadraticForm(a, b, c)
            if f.is_primitive():
                out.append(f)
        a += 1
    return out


# -- indefinite -----------------------------------------------------------


def normalize_indefinite(f) -> QuadraticForm:
    a, b, c = f
    D = b * b - 4 * a * c
    s = isqrt(D)
    m = 2 * abs(a)
    if abs(a) <= s:
        b = s - (s - b) % m
    else:
        b %= m
        if b > abs(a):
            b -= m
    return QuadraticForm(a, b, (b * b - D) // (4 * a))


def rho(f) -> QuadraticForm:
    a, b, c = f
    return normalize_indefinite((c, -b, a))


def is_reduced_indefinite(f) -> bool:
    a, b, c = f
    s = isqrt(b * b - 4 * a * c)
    return 1 <= b <= s and b + 2 * abs(a) > s and 2 * abs(a) - b <= s


def reduce_indefinite(f) -> QuadraticForm:
    f = normalize_indefinite(f)
    for _ in range(10_000):
        if is_reduced_indefinite(f):
            return f
        f = rho(f)
    raise AssertionError(f"reduction of {f} did not terminate")  # pragma: no cover


def reduced_indefinite_forms(D: int) -> list:
    s = isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        for m in range(max(1, (s - b + 2) // 2), (s + b) // 2 + 1):
            if ac % m:
                continue
            for a in (m, -m):
                f = QuadraticForm(a, b, ac // a)
                if is_reduced_indefinite(f) and f.is_primitive():
                    out.append(f)
    return out


def reduce_form(f) -> QuadraticForm:
    return reduce_definite(f) if f[1] ** 2 - 4 * f[0] * f[2] < 0 else reduce_indefinite(f)


# -- composition ----------------------------------------------------------


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(f1, f2) -> QuadraticForm:
    """Dirichlet composition of two primitive forms of the same disc."""
    a1, b1, _ = f1
    a2, b2, _ = f2
    D = f1[1] ** 2 - 4 * f1[0] * f1[2]
    if f2[1] ** 2 - 4 * f2[0] * f2[2] != D:
        raise ValueError("forms have different discriminants")
    beta = (b1 + b2) // 2
    g1, u1, v1 = _xgcd(a1, a2)
    e, w1, w = _xgcd(g1, beta)
    p, q = w1 * u1, w1 * v1
    A = a1 * a2 // (e * e)
    B = (p * a1 * b2 + q * a2 * b1 + w * (b1 * b2 + D) // 2) // e
    B %= 2 * abs(A)
    if (B * B - D) % (4 * A):
        raise AssertionError(f"composition failed for {f1}, {f2}")
    return QuadraticForm(A, B, (B * B - D) // (4 * A))


def inverse(f) -> QuadraticForm:
    a, b, c = f
    return QuadraticForm(a, -b, c)


# -- class groups ---------------------------------------------------------


@dataclass(frozen=True)
class ClassGroupData:
    disc: int
    h_plus: int
    invariants: AbelianInvariants
    squares_order: int
    two_torsion_of_squares: int
    h_wide: int
    representatives: tuple

    @property
    def genus_count(self) -> int:
        return self.h_plus // self.squares_order


class ClassGroup:
    """Proper equivalence classes of primitive forms of discriminant D."""

    def __init__(self, D: int):
        _check_disc(D)
        self.disc = D
        self._index = {}
        self.reps = []
        if D < 0:
            for f in reduced_definite_forms(D):
                self._index[f] = len(self.reps)
                self.reps.append(f)
        else:
            for f in reduced_indefinite_forms(D):
                if f in self._index:
                    continue
                cls = len(self.reps)
                self.reps.append(f)
                g = f
                while g not in self._index:
                    self._index[g] = cls
                    g = rho(g)
        self.identity = self.class_of(principal_form(D))

    def __len__(self):
        return len(self.reps)

    def class_of(self, f) -> int:
        return self._index[reduce_form(f)]

    def mul(self, i: int, j: int) -> int:
        return self.class_of(compose(self.reps[i], self.reps[j]))

    def inv(self, i: int) -> int:
        return self.class_of(inverse(self.reps[i]))

    def invariants(self) -> AbelianInvariants:
        return abelian_invariants(range(len(self)), self.mul, self.identity)

    def squares(self) -> set:
        return {self.mul(i, i) for i in range(len(self))}

    def negative_principal_class(self):
        """Class of -principal form (disc > 0): trivial iff a unit of norm -1 exists."""
        if self.disc < 0:
            return None
        f = principal_form(self.disc)
        return self.class_of(QuadraticForm(-f[0], f[1], -f[2]))


def class_group_narrow(D: int) -> ClassGroupData:
    G = ClassGroup(D)
    inv = G.invariants()
    sq_order = 1
    sq_two = 1
    for n in inv:
        sq_order *= n // gcd(n, 2)
        if n % 4 == 0:
            sq_two *= 2
    neg = G.negative_principal_class()
    h_wide = len(G) if neg is None or neg == G.identity else len(G) // 2
    return ClassGroupData(D, len(G), inv, sq_order, sq_two, h_wide, tuple(G.reps))

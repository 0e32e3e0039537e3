"""First 2-descent on C(Z) for real Pell conics.

Square classes in Q^x / Q^x^2 are represented by squarefree integers with
their sign.  The alpha map sends (x, y) to the class of x + 2; its image
on the x > 0 half of C(Z) is {1, alpha(eta)}.  Descendants a X^2 - b Y^2 = 4
(ab = disc) that are everywhere locally solvable form the Selmer group;
those outside the image make up Sha_2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import conic
from .forms import class_group_narrow
from .ntkernel import (
    factorize,
    is_squarefree,
    kronecker,
    pell4_fundamental,
    prime_factors,
    squarefree_part,
    squarefree_part_over,
)

INF = math.inf


def mul_classes(a: int, b: int) -> int:
    """Product of two squarefree representatives, reduced mod squares."""
    g = gcd(a, b)
    return a * b // (g * g)


def square_class(q) -> int:
    q = Fraction(q)
    if q == 0:
        raise ValueError("0 has no square class")
    return mul_classes(squarefree_part(q.numerator), squarefree_part(q.denominator))


@dataclass(frozen=True)
class Descendant:
    """The conic a X^2 - b Y^2 = 4 with a*b = disc."""

    a: int
    b: int

    def __post_init__(self):
        if self.a <= 0 or not is_squarefree(self.a):
            raise ValueError(f"a = {self.a} must be positive and squarefree")

    @property
    def disc(self):
        return self.a * self.b

    def has_point(self, X, Y) -> bool:
        return self.a * X * X - self.b * Y * Y == 4

    def __str__(self):
        return f"{self.a}X^2 - {self.b}Y^2 = 4" if self.b >= 0 else f"{self.a}X^2 + {-self.b}Y^2 = 4"


def alpha(disc: int, P) -> int:
    """Square class of x + 2 (of -disc when x = -2)."""
    x = Fraction(P[0])
    if x == -2:
        return squarefree_part(-disc)
    if x.denominator == 1:
        # odd-exponent primes of x + 2 divide 2*disc on the conic
        return squarefree_part_over(x.numerator + 2, prime_factors(2 * disc))
    r, n = x.numerator, x.denominator
    return mul_classes(
        squarefree_part_over(r + 2 * n, prime_factors(2 * disc)), squarefree_part(n)
    )


def _close(gens) -> frozenset:
    group = {1}
    for g in gens:
        group |= {mul_classes(h, g) for h in group}
    return frozenset(group)


def image_alpha(disc: int):
    """(image of alpha on all of C(Z), image on the x > 0 subgroup)."""
    if disc <= 0:
        raise ValueError("descent needs a positive discriminant")
    eta = pell4_fundamental(disc).point
    positive = _close([alpha(disc, eta)])
    full = _close([alpha(disc, eta), alpha(disc, (-2, 0))])
    return full, positive


def alpha_sample(disc: int, kmax: int = 6):
    """Points k*eta + T, |k| <= kmax, T torsion, with their alpha values."""
    eta = pell4_fundamental(disc).point
    torsion, _ = conic.torsion_points(disc)
    out = []
    for k in range(-kmax, kmax + 1):
        kP = conic.scalar_mul(disc, k, eta)
        for T in torsion:
            P = conic.add(disc, kP, T)
            out.append((P, alpha(disc, P)))
    return out


def _split(n: int, p: int):
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def hilbert_symbol(a, b, p) -> int:
    """(a, b)_p for nonzero rationals; p a prime or math.inf."""
    a, b = square_class(a), square_class(b)
    if p == INF or p == "inf":
        return -1 if a < 0 and b < 0 else 1
    if p == 2:
        al, u = _split(a, 2)
        be, v = _split(b, 2)

        def eps(t):
            return ((t - 1) // 2) % 2

        def omega(t):
            return ((t * t - 1) // 8) % 2

        return -1 if (eps(u) * eps(v) + al * omega(v) + be * omega(u)) % 2 else 1
    al, u = _split(a, p)
    be, v = _split(b, p)
    sign = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
    return sign * kronecker(u, p) ** be * kronecker(v, p) ** al


def descendants(disc: int) -> list:
    """a X^2 - b Y^2 = 4 for every positive squarefree a | disc."""
    primes = prime_factors(disc)
    out = []
    for mask in range(1 << len(primes)):
        a = 1
        for i, p in enumerate(primes):
            if mask >> i & 1:
                a *= p
        out.append(Descendant(a, disc // a))
    return sorted(out, key=lambda T: T.a)


def local_places(disc: int):
    return [INF, 2] + [p for p in prime_factors(disc) if p != 2]


def locally_solvable(T: Descendant) -> bool:
    """Everywhere local solvability: a must be a local norm from Q(sqrt disc)."""
    return all(hilbert_symbol(T.a, T.disc, v) == 1 for v in local_places(T.disc))


def selmer2(disc: int) -> frozenset:
    if disc <= 0:
        raise ValueError("descent needs a positive discriminant")
    return frozenset(T.a for T in descendants(disc) if locally_solvable(T))


def sha2(disc: int):
    """(order, coset representatives) of Sel_2 / im alpha."""
    sel = selmer2(disc)
    _, image = image_alpha(disc)
    if not image <= sel:
        raise AssertionError(f"image {set(image)} not inside Selmer {set(sel)}")
    reps, seen = [], set()
    for a in sorted(sel):
        if a in seen:
            continue
        reps.append(a)
        seen |= {mul_classes(a, g) for g in image}
    return len(sel) // len(image), reps


@dataclass(frozen=True)
class DescentReport:
    disc: int
    image_alpha_full: frozenset
    image_alpha_positive: frozenset
    selmer: frozenset
    sha2_order: int
    sha2_reps: tuple
    rank: int


def descent_report(disc: int) -> DescentReport:
    full, positive = image_alpha(disc)
    sel = selmer2(disc)
    order, reps = sha2(disc)
    rank = int(math.log2(len(positive)))
    return DescentReport(disc, full, positive, sel, order, tuple(reps), rank)


def integral_points_on(T: Descendant, bound: int):
    """Integral points on a descendant with 0 <= X, Y <= bound (brute force)."""
    out = []
    for X in range(bound + 1):
        rhs = T.a * X * X - 4
        if rhs % T.b:
            continue
        Y2 = rhs // T.b
        if Y2 < 0:
            continue
        Y = math.isqrt(Y2)
        if Y * Y == Y2 and Y <= bound:
            out.append((X, Y))
    return out


@dataclass(frozen=True)
class Links:
    sha_equals_cl2_2: bool
    tamagawa_equals_genus: bool
    image_has_rank_one: bool

    def __iter__(self):
        return iter((self.sha_equals_cl2_2, self.tamagawa_equals_genus, self.image_has_rank_one))

    def all(self):
        return all(self)


def verify_links(disc: int) -> Links:
    """The three descent/class-group identities for one real discriminant."""
    cg = class_group_narrow(disc)
    order, _ = sha2(disc)
    _, positive = image_alpha(disc)
    tamagawa = 2 ** len(factorize(disc))
    return Links(
        order == cg.two_torsion_of_squares,
        tamagawa * cg.squares_order == 2 * cg.h_plus,
        len(positive) == 2,
    )

"""Pell conics X^2 - disc*Y^2 = 4 and their group law.

The neutral element is N = (2, 0) and

    (r, s) + (t, u) = ((r*t + disc*s*u)/2, (r*u + s*t)/2).

Over Z the halves are always integral, so the law works on integral points
directly; over finite rings we need 2 invertible (odd moduli only).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .ntkernel import discriminant_from, is_square, squarefree_part
from .rings import QQ, ZZ


class ConicPoint(NamedTuple):
    x: object
    y: object

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class PellConic:
    disc: int

    def __post_init__(self):
        if self.disc % 4 not in (0, 1) or is_square(self.disc) or self.disc == 0:
            raise ValueError(f"{self.disc} is not a non-square discriminant")

    @classmethod
    def from_d(cls, d: int) -> "PellConic":
        return cls(discriminant_from(d))

    @property
    def d(self) -> int:
        return squarefree_part(self.disc)

    def __str__(self):
        return f"X^2 - {self.disc}*Y^2 = 4" if self.disc > 0 else f"X^2 + {-self.disc}*Y^2 = 4"


def disc_of(C) -> int:
    return C.disc if isinstance(C, PellConic) else int(C)


def _ring_for(R, *points):
    if R is not None:
        return R
    for P in points:
        if isinstance(P[0], Fraction) or isinstance(P[1], Fraction):
            return QQ
    return ZZ


def point(x, y, R=None) -> ConicPoint:
    R = _ring_for(R, (x, y))
    return ConicPoint(R.coerce(x), R.coerce(y))


def neutral(R=ZZ) -> ConicPoint:
    return ConicPoint(R.coerce(2), R.coerce(0))


def on_curve(C, P, R=None) -> bool:
    R = _ring_for(R, P)
    D = R.coerce(disc_of(C))
    x, y = R.coerce(P[0]), R.coerce(P[1])
    lhs = R.sub(R.mul(x, x), R.mul(D, R.mul(y, y)))
    return R.is_zero(R.sub(lhs, R.coerce(4)))


def add(C, P, Q, R=None) -> ConicPoint:
    R = _ring_for(R, P, Q)
    D = R.coerce(disc_of(C))
    r, s = R.coerce(P[0]), R.coerce(P[1])
    t, u = R.coerce(Q[0]), R.coerce(Q[1])
    x = R.half(R.add(R.mul(r, t), R.mul(D, R.mul(s, u))))
    y = R.half(R.add(R.mul(r, u), R.mul(s, t)))
    return ConicPoint(x, y)


def neg(C, P, R=None) -> ConicPoint:
    R = _ring_for(R, P)
    return ConicPoint(R.coerce(P[0]), R.neg(R.coerce(P[1])))


def sub(C, P, Q, R=None) -> ConicPoint:
    return add(C, P, neg(C, Q, R), R)


def scalar_mul(C, k: int, P, R=None) -> ConicPoint:
    """k*P by double-and-add; negative k goes through neg."""
    R = _ring_for(R, P)
    if k < 0:
        return scalar_mul(C, -k, neg(C, P, R), R)
    acc = neutral(R)
    base = ConicPoint(R.coerce(P[0]), R.coerce(P[1]))
    while k:
        if k & 1:
            acc = add(C, acc, base, R)
        k >>= 1
        if k:
            base = add(C, base, base, R)
    return acc


def double_x(x, R=ZZ):
    """x(2P) = x(P)^2 - 2, from the curve relation disc*y^2 = x^2 - 4."""
    return R.sub(R.mul(x, x), R.coerce(2))


def lucas_x(k: int, x, R=ZZ):
    """x(kP) from x(P) alone, via the ladder on x(j+1), x(j).

    Uses x(2jP) = x(jP)^2 - 2 and x((2j+1)P) = x(jP) x((j+1)P) - x(P).
    """
    k = abs(k)
    x = R.coerce(x)
    if k == 0:
        return R.coerce(2)
    lo, hi = x, double_x(x, R)
    for bit in bin(k)[3:]:
        if bit == "1":
            lo, hi = R.sub(R.mul(lo, hi), x), double_x(hi, R)
        else:
            lo, hi = double_x(lo, R), R.sub(R.mul(lo, hi), x)
    return lo


def torsion_points(C):
    """Torsion of C(Z) and its order w (the roots of unity of the field)."""
    disc = disc_of(C)
    if disc > 0:
        pts = [ConicPoint(2, 0), ConicPoint(-2, 0)]
    else:
        # x^2 <= 4 and |disc| y^2 <= 4 bound every integral point
        pts = [
            ConicPoint(x, y)
            for x in range(-2, 3)
            for y in range(-2, 3)
            if x * x - disc * y * y == 4
        ]
    return pts, len(pts)


def mu_action(C, c: int, q, P, R=None) -> ConicPoint:
    """Action of C on D_c: X^2 - disc*Y^2 = 4c, q in D_c, P in C."""
    R = _ring_for(R, q, P)
    D = R.coerce(disc_of(C))
    u, v = R.coerce(q[0]), R.coerce(q[1])
    x, y = R.coerce(P[0]), R.coerce(P[1])
    return ConicPoint(
        R.half(R.add(R.mul(u, x), R.mul(D, R.mul(v, y)))),
        R.half(R.add(R.mul(v, x), R.mul(u, y))),
    )


def on_twist(C, c: int, q, R=None) -> bool:
    R = _ring_for(R, q)
    D = R.coerce(disc_of(C))
    u, v = R.coerce(q[0]), R.coerce(q[1])
    lhs = R.sub(R.mul(u, u), R.mul(D, R.mul(v, v)))
    return R.is_zero(R.sub(lhs, R.coerce(4 * c)))


def mu_solve(C, c: int, p, q) -> ConicPoint:
    """The unique P in C(Q) with mu(p, P) = q, for p, q on D_c(Q)."""
    disc = disc_of(C)
    u, v = Fraction(p[0]), Fraction(p[1])
    u2, v2 = Fraction(q[0]), Fraction(q[1])
    return ConicPoint((u2 * u - disc * v2 * v) / (2 * c), (v2 * u - u2 * v) / (2 * c))

"""Naive and canonical heights on Pell conics, and the conic regulator."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from math import lcm

from . import conic
from .ntkernel import is_square, pell4_fundamental

MAX_DOUBLINGS = 12


def naive_height(q) -> float:
    """log max(|m|, |n|) for q = m/n in lowest terms; H(0) = 0."""
    q = Fraction(q)
    if q == 0:
        return 0.0
    return math.log(max(abs(q.numerator), q.denominator))


def point_height(P) -> float:
    return naive_height(P[0])


def common_denominator_form(disc: int, P):
    """(r, s, n) with P = (r/n, s/n)."""
    x, y = Fraction(P[0]), Fraction(P[1])
    if x * x - disc * y * y != 4:
        raise ValueError(f"{P} is not on the conic with disc {disc}")
    n = lcm(x.denominator, y.denominator)
    return int(x * n), int(y * n), n


def canonical_height(disc: int, P) -> float:
    """Closed form: log((|r| + |s| sqrt disc)/2) if disc > 0, log n if disc < 0."""
    r, s, n = common_denominator_form(disc, P)
    if disc < 0:
        return math.log(n)
    if s == 0:
        return 0.0
    return _log_half_sum(abs(r), abs(s), disc)


canonical_height_closed = canonical_height


def _log_half_sum(r: int, s: int, disc: int) -> float:
    """log((r + s sqrt disc)/2) for r, s >= 0, safe for huge integers."""
    m = disc * s * s
    root = math.isqrt(m)
    if m < 2**1000:
        frac = (m - root * root) / (math.sqrt(m) + root) if m else 0.0
        big = r + root
        return math.log(big) + math.log1p(frac / big) - math.log(2)
    # the fractional part of sqrt(m) is below float resolution relative to r + root
    return math.log(r + root) - math.log(2)


def canonical_height_limit(disc: int, P, k: int = 8) -> float:
    """H(2^k P) / 2^k with exact rational doubling."""
    if not 0 <= k <= MAX_DOUBLINGS:
        raise ValueError(f"k must lie in [0, {MAX_DOUBLINGS}]")
    Q = conic.point(Fraction(P[0]), Fraction(P[1]))
    for _ in range(k):
        Q = conic.add(disc, Q, Q)
    return point_height(Q) / 2**k


def regulator(disc: int) -> float:
    """Canonical height of the fundamental point eta: log((x1 + y1 sqrt disc)/2)."""
    if disc <= 0 or is_square(disc):
        raise ValueError("regulator needs a positive non-square discriminant")
    return canonical_height(disc, pell4_fundamental(disc).point)


def field_regulator(disc: int) -> float:
    """log eps for the fundamental unit eps = (x + y sqrt disc)/2 of norm +-1."""
    if disc <= 0 or is_square(disc):
        raise ValueError("regulator needs a positive non-square discriminant")
    x, y = pell4_fundamental(disc).unit_coords()
    return _log_half_sum(abs(x), abs(y), disc)


def _tangent_point(disc: int, t: Fraction):
    """Second intersection of the line through N = (2, 0) with slope t."""
    den = disc * t * t - 1
    return conic.ConicPoint(2 * (disc * t * t + 1) / den, 4 * t / den)


def rational_point(disc: int, t) -> conic.ConicPoint:
    t = Fraction(t)
    if disc * t * t == 1:
        raise ValueError("slope gives the point at infinity")
    return _tangent_point(disc, t)


def sample_points(disc: int, count: int, rng: random.Random | None = None, rational: bool | None = None):
    """Deterministic-by-seed sample of points on the conic.

    disc > 0: k*eta + T (integral) unless ``rational`` is requested;
    disc < 0 or rational: points from rational slopes through N.
    """
    rng = rng or random.Random(0)
    if rational is None:
        rational = disc < 0
    torsion, _ = conic.torsion_points(disc)
    out = []
    if not rational:
        eta = pell4_fundamental(disc).point
        for _ in range(count):
            k = rng.randint(-8, 8)
            T = rng.choice(torsion)
            out.append(conic.add(disc, conic.scalar_mul(disc, k, eta), T))
        return out
    while len(out) < count:
        t = Fraction(rng.randint(-40, 40), rng.randint(1, 40))
        if disc * t * t == 1:
            continue
        out.append(conic.point(*_tangent_point(disc, t)))
    return out

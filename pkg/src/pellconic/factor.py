"""Stage-1 p-1 (hyperbola XY = 1) and p+-1 (Pell conic) factoring.

Both walk the same stage-1 exponent M = prod of q^floor(log_q B) over
primes q <= B, taking a gcd after every prime factor so that a factor
is caught before the other prime's order completes too.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd

from .conic import lucas_x
from .ntkernel import primes_up_to
from .rings import IntegersMod


class Status(enum.Enum):
    FOUND = "Found"
    NO_FACTOR = "NoFactor"
    TRIVIAL_GCD = "TrivialGcd"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FactorResult:
    status: Status
    divisor: int | None
    iterations: int
    bound: int

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    def __str__(self):
        if self.found:
            return f"Found({self.divisor})"
        return str(self.status)


# (disc, x-coordinate of its fundamental point): ten distinct square classes
PELL_SEEDS = (
    (5, 3),
    (8, 6),
    (12, 4),
    (13, 11),
    (17, 66),
    (21, 5),
    (24, 10),
    (28, 16),
    (29, 27),
    (33, 46),
)
P1_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def stage1_exponents(B: int):
    """(q, e) with q^e the largest power of q not exceeding B."""
    out = []
    for q in primes_up_to(B):
        e, qe = 1, q
        while qe * q <= B:
            qe *= q
            e += 1
        out.append((q, e))
    return out


def _classify(g, N, steps, B):
    if g == N:
        return FactorResult(Status.TRIVIAL_GCD, N, steps, B)
    if g > 1:
        return FactorResult(Status.FOUND, g, steps, B)
    return None


def pollard_p1(N: int, B: int, a: int = 2) -> FactorResult:
    """Pollard p-1 stage 1 with base a."""
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and > 1")
    g = gcd(a, N)
    if g > 1:
        return _classify(g, N, 0, B)
    x = a % N
    steps = 0
    for q, e in stage1_exponents(B):
        for _ in range(e):
            x = pow(x, q, N)
            steps += 1
            res = _classify(gcd(x - 1, N), N, steps, B)
            if res:
                return res
    return FactorResult(Status.NO_FACTOR, None, steps, B)


def pell_pm1(N: int, disc: int, x0: int, B: int) -> FactorResult:
    """Conic p+-1 stage 1 on x-coordinates.

    x0 is read as x(P) for a point on a twist of the conic mod each prime
    p | N; the order of P divides p - 1 or p + 1 according to whether
    x0^2 - 4 is a square mod p.
    """
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and > 1")
    g = gcd(N, 2 * disc)
    if g > 1:
        return _classify(g, N, 0, B)
    R = IntegersMod(N)
    v = x0 % N
    steps = 0
    for q, e in stage1_exponents(B):
        for _ in range(e):
            v = lucas_x(q, v, R)
            steps += 1
            res = _classify(gcd(v - 2, N), N, steps, B)
            if res:
                return res
    return FactorResult(Status.NO_FACTOR, None, steps, B)


def factor_with_seeds(N: int, method: str, B: int, seeds=None, first: bool = False) -> FactorResult:
    """Run every seed, report the smallest divisor found (or the first one)."""
    if method == "p1":
        seeds = P1_BASES if seeds is None else seeds
        runs = lambda s: pollard_p1(N, B, s)  # noqa: E731
    elif method == "pell":
        seeds = PELL_SEEDS if seeds is None else seeds
        runs = lambda s: pell_pm1(N, s[0], s[1], B)  # noqa: E731
    else:
        raise ValueError(f"unknown method {method!r}")
    best = None
    last = None
    for s in seeds:
        res = runs(s)
        last = res
        if res.found:
            if first:
                return res
            if best is None or res.divisor < best.divisor:
                best = res
    return best or last

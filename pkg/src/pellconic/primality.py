"""Group-order primality tests.

``lucas_test`` works in (Z/n)^x, the points of the hyperbola XY = 1.
``pell_test`` is its analogue on a Pell conic with (disc/n) = -1, where a
prime n gives a cyclic C(Z/n) of order n + 1.  ``lucas_lehmer`` is the
special case disc = 12, P = (4, 1) run on x-coordinates only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd, isqrt

from . import conic
from .ntkernel import NotPrimeError, factorize, is_prime, jacobi, mod_sqrt
from .rings import IntegersMod

# candidate discriminants for the witness search, in order of preference
DEFAULT_DISCS = (5, 8, 12, 13, 17, 21, 24, 28)
MAX_ATTEMPTS = 50


class Verdict(enum.Enum):
    PRIME = "Prime"
    COMPOSITE = "Composite"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass
class PrimalityOutcome:
    n: int
    verdict: Verdict
    witness: dict = field(default_factory=dict)
    factor: int | None = None

    @property
    def is_prime(self):
        return self.verdict is Verdict.PRIME


def _check_factors(m: int, factors) -> list:
    factors = sorted(set(factors))
    for r in factors:
        if not is_prime(r):
            raise ValueError(f"{r} in the factor list is not prime")
    rest = m
    for r in factors:
        if rest % r:
            raise ValueError(f"{r} does not divide {m}")
        while rest % r == 0:
            rest //= r
    if rest != 1:
        raise ValueError(f"factorization of {m} is incomplete (cofactor {rest})")
    return factors


def lucas_test(n: int, a: int, factors=None) -> PrimalityOutcome:
    """Lucas: a^(n-1) = 1 and a^((n-1)/r) != 1 for every prime r | n-1."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    if factors is None:
        factors = factorize(n - 1)
    factors = _check_factors(n - 1, factors)
    full = pow(a, n - 1, n)
    if full != 1:
        return PrimalityOutcome(n, Verdict.COMPOSITE, {"base": a, "a^(n-1)": full})
    failed = [r for r in factors if pow(a, (n - 1) // r, n) == 1]
    witness = {"base": a, "factors": factors, "failed": failed}
    if failed:
        return PrimalityOutcome(n, Verdict.INCONCLUSIVE, witness)
    return PrimalityOutcome(n, Verdict.PRIME, witness)


def pell_test(n: int, disc: int, P, factors=None) -> PrimalityOutcome:
    """Pell-conic test: (n+1)P = N and ((n+1)/r)P != N for primes r | n+1."""
    if n < 5 or n % 2 == 0:
        raise ValueError("n must be odd and >= 5")
    if gcd(n, 2 * disc) != 1:
        raise ValueError(f"gcd({n}, 2*{disc}) != 1")
    if jacobi(disc, n) != -1:
        raise ValueError(f"({disc}/{n}) != -1")
    if factors is None:
        factors = factorize(n + 1)
    factors = _check_factors(n + 1, factors)
    R = IntegersMod(n)
    P = conic.ConicPoint(R.coerce(P[0]), R.coerce(P[1]))
    if not conic.on_curve(disc, P, R):
        raise ValueError(f"{P} is not on the conic mod {n}")
    N = conic.neutral(R)
    witness = {"disc": disc, "point": tuple(P), "factors": factors}
    top = conic.scalar_mul(disc, n + 1, P, R)
    if top != N:
        witness["(n+1)P"] = tuple(top)
        return PrimalityOutcome(n, Verdict.COMPOSITE, witness)
    failed = [r for r in factors if conic.scalar_mul(disc, (n + 1) // r, P, R) == N]
    witness["failed"] = failed
    if failed:
        return PrimalityOutcome(n, Verdict.INCONCLUSIVE, witness)
    return PrimalityOutcome(n, Verdict.PRIME, witness)


def choose_disc(n: int, discs=DEFAULT_DISCS, extend: int = 2000):
    """First disc with (disc/n) = -1: the listed ones, then further
    non-square discriminants up to ``extend``.  None if there is none
    (always the case for perfect squares n).
    """
    for D in discs:
        if jacobi(D, n) == -1:
            return D
    for D in range(max(discs) + 1, extend):
        if D % 4 in (0, 1) and isqrt(D) ** 2 != D and jacobi(D, n) == -1:
            return D
    return None


def find_points(n: int, disc: int, limit: int = MAX_ATTEMPTS, start: int = 3):
    """Candidate points mod n, assuming n prime: x = start, start + 1, ...
    (wrapping mod n) with y = sqrt((x^2 - 4)/disc).  Raises NotPrimeError
    on inconsistency.
    """
    inv = pow(disc, -1, n)
    found = 0
    for i in range(n):
        if found >= limit:
            return
        x = (start + i) % n
        y = mod_sqrt((x * x - 4) * inv % n, n)
        if y is not None:
            found += 1
            yield conic.ConicPoint(x, y)


def pell_prove(
    n: int, disc: int | None = None, attempts: int = MAX_ATTEMPTS, start: int = 3
) -> PrimalityOutcome:
    """Search for a Pell-conic witness; Inconclusive after ``attempts`` points."""
    if n < 5 or n % 2 == 0:
        raise ValueError("n must be odd and >= 5")
    if disc is None:
        r = isqrt(n)
        if r * r == n:
            return PrimalityOutcome(n, Verdict.COMPOSITE, {"square": r}, factor=r)
        disc = choose_disc(n)
        if disc is None:
            return PrimalityOutcome(n, Verdict.INCONCLUSIVE, {"reason": "no disc with (disc/n) = -1"})
    g = gcd(n, 2 * disc)
    if g != 1:
        return PrimalityOutcome(n, Verdict.COMPOSITE, {"disc": disc}, factor=g)
    factors = factorize(n + 1)
    last = PrimalityOutcome(n, Verdict.INCONCLUSIVE, {"disc": disc, "attempts": 0})
    tried = 0
    try:
        for P in find_points(n, disc, attempts, start):
            tried += 1
            out = pell_test(n, disc, P, factors)
            if out.verdict is not Verdict.INCONCLUSIVE:
                out.witness["attempts"] = tried
                return out
            last = out
    except NotPrimeError as exc:
        return PrimalityOutcome(
            n, Verdict.COMPOSITE, {"disc": disc, "reason": str(exc)}, factor=exc.factor
        )
    last.witness["attempts"] = tried
    return last


def lucas_lehmer(p: int) -> PrimalityOutcome:
    """Lucas-Lehmer for M_p = 2^p - 1: s_0 = 4 = x(P), s_(k+1) = s_k^2 - 2."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"exponent {p} must be an odd prime")
    M = (1 << p) - 1
    R = IntegersMod(M)
    s = 4
    for _ in range(p - 2):
        s = conic.double_x(s, R)
    verdict = Verdict.PRIME if s == 0 else Verdict.COMPOSITE
    return PrimalityOutcome(M, verdict, {"p": p, "s_(p-2)": s})


"""Exact integer substrate: symbols, square classes, modular roots, Pell solver.

Everything here works on plain Python ints.  Factorization is desk-scale:
trial division to 10**6 with the p+-1 methods of :mod:`pellconic.factor`
as a fallback for larger cofactors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

TRIAL_LIMIT = 10**6


class NotPrimeError(ArithmeticError):
    """A computation that assumed a prime modulus found evidence it is not.

    ``factor`` carries a nontrivial divisor when one was exposed.
    """

    def __init__(self, modulus, factor=None, msg=None):
        self.modulus = modulus
        self.factor = factor
        super().__init__(msg or f"modulus {modulus} not prime")


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi needs odd positive n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    if n < 1:
        raise ValueError("kronecker needs n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(D, n)


def discriminant_from(d: int) -> int:
    """Discriminant of Q(sqrt d): d if d = 1 mod 4, else 4d."""
    if d in (0, 1) or not is_squarefree(d):
        raise ValueError(f"d = {d} must be squarefree and not 0 or 1")
    return d if d % 4 == 1 else 4 * d


def is_fundamental(disc: int) -> bool:
    if disc in (0, 1):
        return False
    if disc % 4 == 1:
        return is_squarefree(disc)
    if disc % 4 == 0:
        d = disc // 4
        return d % 4 in (2, 3) and is_squarefree(d)
    return False


def squarefree_kernel_d(disc: int) -> int:
    """The squarefree d with discriminant_from(d) == disc (disc fundamental)."""
    if not is_fundamental(disc):
        raise ValueError(f"{disc} is not a fundamental discriminant")
    return disc if disc % 4 == 1 else disc // 4


@lru_cache(maxsize=None)
def primes_up_to(n: int) -> tuple:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3 * 10**24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
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


def is_prime(n: int) -> bool:
    return is_probable_prime(n)


def _fallback_split(n: int):
    # local import: factor depends on this module
    from . import factor

    for B in (1000, 10**4, 10**5):
        for a in (2, 3, 5, 7):
            res = factor.pollard_p1(n, B, a)
            if res.found:
                return res.divisor
        for disc, x0 in factor.PELL_SEEDS:
            res = factor.pell_pm1(n, disc, x0, B)
            if res.found:
                return res.divisor
    return None


def factorize(n: int) -> dict:
    """Prime factorization {p: e} of |n| for desk-scale n."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    for p in primes_up_to(1000):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 1001
    while n > 1 and p * p <= n and p <= TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m <= TRIAL_LIMIT**2 or is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        g = _fallback_split(m)
        if g is None:
            raise ValueError(f"cofactor {m} is beyond desk-scale factoring")
        stack.extend((g, m // g))
    return dict(sorted(out.items()))


def prime_factors(n: int) -> list:
    return list(factorize(n))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())


def squarefree_part(n: int) -> int:
    """Squarefree s with n/s a positive square (sign kept)."""
    if n == 0:
        raise ValueError("squarefree_part(0) is undefined")
    s = -1 if n < 0 else 1
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
    return s


def squarefree_part_over(n: int, primes) -> int:
    """squarefree_part(n) when only ``primes`` can occur to odd exponent.

    Avoids factoring huge n (coordinates of Pell points); the cofactor is
    checked to be a perfect square.
    """
    if n == 0:
        raise ValueError("squarefree_part(0) is undefined")
    s = -1 if n < 0 else 1
    m = abs(n)
    for p in primes:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e % 2:
            s *= p
    if not is_square(m):
        raise ValueError(f"{n} has odd-exponent primes outside {tuple(primes)}")
    return s


def mod_sqrt(a: int, p: int):
    """Square root of a modulo an odd (claimed) prime p, or None.

    Tonelli-Shanks.  Any inconsistency that a prime modulus cannot produce
    raises NotPrimeError.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError("mod_sqrt needs an odd modulus >= 3")
    a %= p
    if a == 0:
        return 0
    g = gcd(a, p)
    if g != 1:
        raise NotPrimeError(p, g)
    euler = pow(a, (p - 1) // 2, p)
    if euler == p - 1:
        return None
    if euler != 1:
        raise NotPrimeError(p, msg=f"Euler criterion gives {euler} mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        r = pow(a, (p + 1) // 4, p)
    else:
        z = 2
        while jacobi(z, p) != -1:
            z += 1
            if z > 10**6:
                raise NotPrimeError(p, msg="no quadratic non-residue found")
        c = pow(z, q, p)
        if pow(c, 1 << (s - 1), p) != p - 1:
            raise NotPrimeError(p, msg=f"{z} fails Euler criterion mod {p}")
        r = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        m = s
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
                if i >= m:
                    raise NotPrimeError(p, msg="Tonelli-Shanks did not converge")
            b = pow(c, 1 << (m - i - 1), p)
            r = r * b % p
            c = b * b % p
            t = t * c % p
            m = i
    if r * r % p != a:
        raise NotPrimeError(p, msg=f"square root check failed mod {p}")
    return r


@dataclass(frozen=True)
class Fundamental4:
    """Minimal positive solution of x^2 - disc*y^2 = 4, plus the -4 data.

    ``u`` is 1 when x^2 - disc*y^2 = -4 has no solution (fundamental unit of
    norm +1) and 0 otherwise.
    """

    disc: int
    x1: int
    y1: int
    minus4: tuple | None
    u: int

    @property
    def point(self):
        return (self.x1, self.y1)

    def unit_coords(self):
        """(x, y) of the smallest unit (x + y*sqrt(disc))/2 > 1 of any norm."""
        return self.minus4 if self.minus4 is not None else (self.x1, self.y1)


def _pqa(D: int, P0: int, Q0: int):
    """Continued fraction of (P0 + sqrt D)/Q0 yielding (G, B, Q_next) per step.

    G_i^2 - D B_i^2 = (-1)^(i+1) Q_{i+1} Q0.
    """
    s = isqrt(D)
    P, Q = P0, Q0
    A2, A1 = 0, 1
    B2, B1 = 1, 0
    G2, G1 = -P0, Q0
    while True:
        a = (P + s) // Q if Q > 0 else (P + s + 1) // Q
        A2, A1 = A1, a * A1 + A2
        B2, B1 = B1, a * B1 + B2
        G2, G1 = G1, a * G1 + G2
        P = a * Q - P
        Q = (D - P * P) // Q
        yield G1, B1, Q


def pell4_fundamental(disc: int) -> Fundamental4:
    """Fundamental solutions of x^2 - disc*y^2 = +-4 by continued fractions."""
    if disc <= 0 or is_square(disc) or disc % 4 not in (0, 1):
        raise ValueError(f"need a positive non-square discriminant, got {disc}")
    if disc % 4 == 0:
        # x even: (x/2)^2 - (disc/4) y^2 = +-1, expand sqrt(disc/4)
        m = disc // 4
        for G, B, Q in _pqa(m, 0, 1):
            if Q == 1:
                x, y, norm = 2 * G, B, 4 * (G * G - m * B * B)
                break
    else:
        for G, B, Q in _pqa(disc, 1, 2):
            if Q == 2:
                x, y, norm = G, B, G * G - disc * B * B
                break
    if norm == -4:
        minus4 = (x, y)
        x, y = (x * x + disc * y * y) // 2, x * y
        u = 0
    elif norm == 4:
        minus4, u = None, 1
    else:  # pragma: no cover - continued fraction invariant
        raise AssertionError(f"continued fraction produced norm {norm}")
    assert x * x - disc * y * y == 4
    return Fundamental4(disc, x, y, minus4, u)

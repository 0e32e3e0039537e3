"""Points of Pell conics over finite rings, their group structure, local zeta.

Enumeration is the ground truth here; the closed forms (point counts,
the p^k structure table, zeta numerators) are checked against it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import prod

import numpy as np

from . import conic
from .ntkernel import factorize, is_prime, kronecker
from .rings import ExtField, IntegersMod, PrimeField


def _as_ring(R):
    if isinstance(R, int):
        return IntegersMod(R)
    return R


def enumerate_points(disc: int, R) -> list:
    """All affine solutions of x^2 - disc*y^2 = 4 over a finite ring."""
    R = _as_ring(R)
    if not getattr(R, "finite", False):
        raise ValueError("enumeration needs a finite ring")
    D = R.coerce(disc)
    by_value = defaultdict(list)
    for y in R.elements():
        y = R.coerce(y)
        by_value[R.mul(D, R.mul(y, y))].append(y)
    four = R.coerce(4)
    pts = []
    for x in R.elements():
        x = R.coerce(x)
        for y in by_value.get(R.sub(R.mul(x, x), four), ()):
            pts.append(conic.ConicPoint(x, y))
    return pts


def count_points(disc: int, p: int, f: int = 1) -> int:
    """#C(F_q) = q - (disc/p)^f for q = p^f, p odd and prime to disc."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if disc % p == 0:
        raise ValueError(f"{p} divides {disc}; use enumerate_points")
    return p**f - kronecker(disc, p) ** f


@dataclass(frozen=True)
class AbelianInvariants:
    factors: tuple

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if a % b:
                raise ValueError(f"invariant factors {self.factors} not a divisor chain")

    @property
    def order(self) -> int:
        return prod(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __eq__(self, other):
        if isinstance(other, (list, tuple)):
            return list(self.factors) == list(other)
        return isinstance(other, AbelianInvariants) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"AbelianInvariants({list(self.factors)})"

    def __str__(self):
        return " + ".join(f"Z/{n}" for n in self.factors) or "0"


def normalize_invariants(cyclic_orders) -> AbelianInvariants:
    """Invariant factors (largest first) of a direct sum of cyclic groups."""
    primary = defaultdict(list)
    for n in cyclic_orders:
        if n < 1:
            raise ValueError("cyclic orders must be positive")
        for p, e in factorize(n).items() if n > 1 else ():
            primary[p].append(e)
    return _from_primary(primary)


def _from_primary(primary) -> AbelianInvariants:
    width = max((len(v) for v in primary.values()), default=0)
    factors = [1] * width
    for p, exps in primary.items():
        for i, e in enumerate(sorted(exps, reverse=True)):
            factors[i] *= p**e
    return AbelianInvariants(tuple(factors))


def _power(op, identity, g, k):
    acc, base = identity, g
    while k:
        if k & 1:
            acc = op(acc, base)
        k >>= 1
        if k:
            base = op(base, base)
    return acc


def abelian_invariants(elements, op, identity) -> AbelianInvariants:
    """Structure of a finite abelian group given by its elements and law.

    For every prime l | #G the counts #G[l^j] determine the l-primary part;
    the primary parts are then merged into invariant factors.
    """
    elements = list(elements)
    members = set(elements)
    n = len(members)
    if identity not in members:
        raise ValueError("identity not among the elements")
    if n <= 600:
        for a in elements:
            for b in elements:
                if op(a, b) not in members:
                    raise ValueError(f"not closed: {a} + {b} leaves the set")
    primes = factorize(n) if n > 1 else {}
    primary = {}
    for p, e in primes.items():
        cofactor = n // p**e
        # l-part of each element's order, as an exponent of p
        counts = [0] * (e + 1)
        for g in elements:
            h = _power(op, identity, g, cofactor)
            if h not in members:
                raise ValueError("not closed under the group law")
            j = 0
            while h != identity:
                h = _power(op, identity, h, p)
                j += 1
                if j > e:
                    raise ValueError("element order does not divide the group order")
            counts[j] += 1
        # ratio #G[p^j] / #G[p^(j-1)] = p^(number of cyclic factors of exponent >= j)
        exps = []
        prev = counts[0]
        for j in range(1, e + 1):
            cur = prev + counts[j]
            ratio, r = cur // prev, 0
            while ratio > 1:
                ratio //= p
                r += 1
            exps.append(r)
            prev = cur
        primary[p] = [sum(1 for r in exps if r > i) for i in range(exps[0])]
    return _from_primary(primary)


def group_structure(disc: int, R) -> AbelianInvariants:
    R = _as_ring(R)
    pts = enumerate_points(disc, R)
    return abelian_invariants(
        pts, lambda P, Q: conic.add(disc, P, Q, R), conic.neutral(R)
    )


def structure_mod_pk(disc: int, p: int, k: int) -> AbelianInvariants:
    """C(Z/p^k) from the table of cases in the quadratic character of disc."""
    if p == 2:
        raise ValueError("p = 2 is not covered")
    if p % 2 == 0 or not is_prime(p) or k < 1:
        raise ValueError("need an odd prime p and k >= 1")
    if p == 3 and disc % 9 == 6:
        # disc = -3 and every disc congruent to it mod 9 (checked by enumeration)
        return normalize_invariants([6, 3 ** (k - 1)])
    if disc % p == 0:
        return normalize_invariants([2, p**k])
    chi = kronecker(disc, p)
    return normalize_invariants([p - chi, p ** (k - 1)])


def order_mod(disc: int, n: int) -> int:
    """#C(Z/n) for odd n, multiplying the prime-power orders (CRT)."""
    return prod(structure_mod_pk(disc, p, e).order for p, e in factorize(n).items())


def closure_defects(disc: int, n: int, points=None) -> int:
    """Number of pairs (P, Q) whose sum mod n is not an enumerated point."""
    if points is None:
        points = enumerate_points(disc, n)
    xs = np.array([P.x for P in points], dtype=np.int64)
    ys = np.array([P.y for P in points], dtype=np.int64)
    table = np.zeros((n, n), dtype=bool)
    table[xs, ys] = True
    inv2 = (n + 1) // 2
    D = disc % n
    bad = 0
    for r, s in zip(xs, ys):
        x = (r * xs % n + D * (s * ys % n) % n) % n * inv2 % n
        y = (r * ys % n + s * xs % n) % n * inv2 % n
        bad += int((~table[x, y]).sum())
    return bad


@dataclass(frozen=True)
class LocalZeta:
    """Z(T) = numerator(T) / denominator(T), integer coefficients, constant 1."""

    numerator: tuple
    denominator: tuple

    def point_counts(self, r_max: int) -> list:
        """N_1..N_rmax with log Z(T) = sum N_r T^r / r."""
        num = _log_derivative(self.numerator, r_max)
        den = _log_derivative(self.denominator, r_max)
        return [a - b for a, b in zip(num, den)]

    def series(self, n_terms: int) -> list:
        """Power-series coefficients of Z(T) up to T^(n_terms - 1)."""
        inv = _series_inverse(self.denominator, n_terms)
        out = [0] * n_terms
        for i, a in enumerate(self.numerator):
            for j in range(n_terms - i):
                out[i + j] += a * inv[j]
        return out

    def __str__(self):
        return f"({_poly_str(self.numerator)})/({_poly_str(self.denominator)})"


def _poly_str(c):
    terms = []
    for i, a in enumerate(c):
        if a == 0:
            continue
        mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
        coef = str(a) if (i == 0 or abs(a) != 1) else ("-" if a < 0 else "")
        terms.append(f"{coef}{mono}")
    return " + ".join(terms).replace("+ -", "- ") or "0"


def _log_derivative(poly, r_max):
    """m_r with T A'(T)/A(T) = sum m_r T^r (Newton's identities)."""
    c = list(poly) + [0] * (r_max + 1)
    if c[0] != 1:
        raise ValueError("constant term must be 1")
    m = [0] * (r_max + 1)
    for r in range(1, r_max + 1):
        m[r] = r * c[r] - sum(c[i] * m[r - i] for i in range(1, r))
    return m[1:]


def _series_inverse(poly, n_terms):
    inv = [0] * n_terms
    inv[0] = 1
    for j in range(1, n_terms):
        inv[j] = -sum(poly[i] * inv[j - i] for i in range(1, min(j, len(poly) - 1) + 1))
    return inv


def local_zeta(disc, p: int) -> LocalZeta:
    """Local zeta of the Pell conic at a good odd prime.

    Counting gives N_r = p^r - chi(p)^r, i.e. Z(T) = (1 - chi(p) T)/(1 - p T).
    ``disc=None`` gives the parabola y = x^2, Z(T) = 1/(1 - p T).
    """
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if disc is None:
        return LocalZeta((1,), (1, -p))
    if disc % p == 0:
        raise ValueError(f"bad reduction at {p}")
    return LocalZeta((1, -kronecker(disc, p)), (1, -p))


def displayed_zeta(disc: int, p: int) -> LocalZeta:
    """1/((1 - pT)(1 - chi(p)T)): the other closed form one meets in print.

    Its counts are p^r + chi(p)^r, which disagree with enumeration; kept so
    the discrepancy can be exhibited.
    """
    chi = kronecker(disc, p)
    return LocalZeta((1,), (1, -(p + chi), p * chi))


def prime_field(p, f=1):
    return PrimeField(p) if f == 1 else ExtField(p, f)

import random

import pytest
from sympy import factorint, isprime, primerange

from pellconic import conic
from pellconic.ntkernel import jacobi
from pellconic.primality import (
    DEFAULT_DISCS,
    Verdict,
    choose_disc,
    find_points,
    lucas_lehmer,
    lucas_test,
    pell_prove,
    pell_test,
)
from pellconic.rings import IntegersMod

MERSENNE_EXPONENTS = {3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127}


def _trial_division_is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@pytest.mark.parametrize(
    "n,a,factors,want",
    [(7, 3, [2, 3], Verdict.PRIME), (341, 2, [2, 5, 17], Verdict.INCONCLUSIVE), (15, 2, [2, 7], Verdict.COMPOSITE)],
)
def test_lucas_examples(n, a, factors, want):
    assert lucas_test(n, a, factors).verdict is want


def test_lucas_rejects_incomplete_factorization():
    with pytest.raises(ValueError):
        lucas_test(341, 2, [2, 5])
    with pytest.raises(ValueError):
        lucas_test(341, 2, [2, 5, 17, 4])


def test_lucas_prime_verdicts_are_sound():
    for n in range(3, 3000, 2):
        for a in (2, 3, 5):
            if lucas_test(n, a).verdict is Verdict.PRIME:
                assert isprime(n)


def test_pell_test_example():
    out = pell_test(7, 12, (4, 1), [2])
    assert out.verdict is Verdict.PRIME
    R = IntegersMod(7)
    assert conic.scalar_mul(12, 8, (4, 1), R) == (2, 0)
    assert conic.scalar_mul(12, 4, (4, 1), R) != (2, 0)


def test_pell_test_11_13():
    assert jacobi(13, 11) == -1
    verdicts = [pell_test(11, 13, P, [2, 3]).verdict for P in find_points(11, 13, 20)]
    assert Verdict.PRIME in verdicts
    assert pell_prove(11, 13).is_prime


def test_pell_test_15_never_prime():
    D = next(D for D in range(5, 200) if D % 4 in (0, 1) and jacobi(D, 15) == -1 and D % 3 and D % 5)
    R = IntegersMod(15)
    pts = [(x, y) for x in range(15) for y in range(15) if conic.on_curve(D, (x, y), R)]
    assert pts
    for P in pts:
        assert pell_test(15, D, P, [2]).verdict is not Verdict.PRIME


@pytest.mark.parametrize(
    "n,D,P,factors",
    [
        (9, 5, (3, 1), None),  # (5/9) = +1
        (21, 12, (4, 1), None),  # gcd(21, 24) = 3
        (11, 5, (3, 1), None),  # (5/11) = +1
        (11, 13, (0, 0), [2, 3]),  # not on the conic
        (7, 5, (3, 1), [3]),  # 3 does not divide 8
        (13, 5, (3, 1), [2]),  # 14 = 2 * 7 needs 7
    ],
)
def test_pell_test_preconditions(n, D, P, factors):
    with pytest.raises(ValueError):
        pell_test(n, D, P, factors)


def test_pell_test_composite_on_order_failure():
    # 2047 is not prime; (4, 1) has (n+1)P != N there
    out = pell_test(2047, 12, (4, 1), [2])
    assert out.verdict is Verdict.COMPOSITE


def test_choose_disc():
    assert choose_disc(7) == 5
    assert choose_disc(25) is None
    # 1511 has (D/1511) = +1 or 0 for every default disc
    assert all(jacobi(D, 1511) != -1 for D in DEFAULT_DISCS)
    D = choose_disc(1511)
    assert D not in DEFAULT_DISCS and jacobi(D, 1511) == -1


def test_pell_prove_square_and_small_factor():
    assert pell_prove(49).verdict is Verdict.COMPOSITE
    out = pell_prove(25)
    assert out.verdict is Verdict.COMPOSITE and out.factor == 5


def test_soundness_sweep():
    for n in range(5, 10**4 + 1, 2):
        out = pell_prove(n)
        if out.is_prime:
            assert out.witness["failed"] == []
        assert out.is_prime == _trial_division_is_prime(n), n


def test_search_start_is_deterministic():
    a = pell_prove(10007, start=500)
    b = pell_prove(10007, start=500)
    assert a == b and a.is_prime


@pytest.mark.parametrize("p,want", [(3, Verdict.PRIME), (11, Verdict.COMPOSITE), (13, Verdict.PRIME)])
def test_lucas_lehmer_examples(p, want):
    assert lucas_lehmer(p).verdict is want


def test_lucas_lehmer_first_step():
    assert lucas_lehmer(3).witness["s_(p-2)"] == 0  # 14 = 0 mod 7
    assert factorint(2047) == {23: 1, 89: 1}


def test_lucas_lehmer_known_list():
    for p in primerange(3, 130):
        assert lucas_lehmer(p).is_prime == (p in MERSENNE_EXPONENTS)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19])
def test_lucas_lehmer_equals_pell_test(p):
    M = 2**p - 1
    assert lucas_lehmer(p).verdict is pell_test(M, 12, (4, 1), [2]).verdict


def test_lucas_lehmer_rejects():
    with pytest.raises(ValueError):
        lucas_lehmer(9)


def test_x_only_doubling_mod_n():
    rng = random.Random(5)
    done = 0
    while done < 1000:
        n = rng.randrange(5, 10**4) | 1
        D = rng.choice(DEFAULT_DISCS)
        R = IntegersMod(n)
        # a point from the slope-t line through N, reduced mod n
        t = rng.randrange(1, n)
        try:
            inv = pow((D * t * t - 1) % n, -1, n)
        except ValueError:
            continue
        P = conic.ConicPoint(2 * (D * t * t + 1) * inv % n, 4 * t * inv % n)
        assert conic.on_curve(D, P, R)
        assert conic.double_x(P.x, R) == conic.add(D, P, P, R).x
        done += 1

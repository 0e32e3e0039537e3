import math
import random
from fractions import Fraction

import pytest
from sympy import primerange

from pellconic import conic
from pellconic.modular import (
    AbelianInvariants,
    abelian_invariants,
    closure_defects,
    count_points,
    displayed_zeta,
    enumerate_points,
    group_structure,
    local_zeta,
    normalize_invariants,
    order_mod,
    prime_field,
    structure_mod_pk,
)
from pellconic.rings import ExtField, IntegersMod

DISCS = [5, 8, 12, 13, 40, -4, -3, -8]


def test_enumerate_examples():
    pts = enumerate_points(5, 3)
    assert sorted(pts) == [(0, 1), (0, 2), (1, 0), (2, 0)]
    assert len(enumerate_points(5, 11)) == 10
    assert len(enumerate_points(5, ExtField(3, 2))) == 8


def test_enumerate_matches_naive_scan():
    for D in DISCS:
        for n in (3, 9, 15, 21, 25, 27):
            naive = {(x, y) for x in range(n) for y in range(n) if (x * x - D * y * y - 4) % n == 0}
            pts = enumerate_points(D, n)
            assert len(pts) == len(set(pts)) == len(naive)
            assert set(pts) == naive


def test_enumerate_rejects_even():
    with pytest.raises(ValueError):
        enumerate_points(5, 10)


@pytest.mark.parametrize("D,p,f,want", [(5, 3, 1, 4), (5, 11, 1, 10), (5, 3, 2, 8)])
def test_count_examples(D, p, f, want):
    assert count_points(D, p, f) == want


@pytest.mark.parametrize("D", DISCS)
def test_count_matches_enumeration(D):
    for p in primerange(3, 50):
        if D % p == 0:
            with pytest.raises(ValueError):
                count_points(D, p)
            continue
        for f in (1, 2):
            assert count_points(D, p, f) == len(enumerate_points(D, prime_field(p, f)))


def _invariants_mod(D, n):
    R = IntegersMod(n)
    pts = enumerate_points(D, R)
    return abelian_invariants(pts, lambda P, Q: conic.add(D, P, Q, R), conic.neutral(R))


def test_abelian_invariant_examples():
    assert _invariants_mod(5, 3) == [4]
    assert _invariants_mod(5, 11) == [10]
    # Z/4 + Z/3 is cyclic: invariant factors give the single factor 12
    assert _invariants_mod(5, 9) == normalize_invariants([4, 3]) == [12]


def test_normalize_invariants():
    assert normalize_invariants([4, 3]) == [12]
    assert normalize_invariants([6, 3]) == [6, 3]
    assert normalize_invariants([2, 2, 4]) == [4, 2, 2]
    assert normalize_invariants([1]) == []
    assert str(normalize_invariants([2, 6])) == "Z/6 + Z/2"
    assert AbelianInvariants((6, 3)).order == 18
    with pytest.raises(ValueError):
        AbelianInvariants((4, 3))


def test_abelian_invariants_on_known_groups():
    # Z/8 + Z/4 + Z/3 as tuples
    els = [(a, b, c) for a in range(8) for b in range(4) for c in range(3)]
    op = lambda x, y: ((x[0] + y[0]) % 8, (x[1] + y[1]) % 4, (x[2] + y[2]) % 3)  # noqa: E731
    assert abelian_invariants(els, op, (0, 0, 0)) == [24, 4]
    # (Z/n)^x for n = 5 * 7 * 8
    n = 280
    units = [a for a in range(n) if all(a % p for p in (2, 5, 7))]
    # (Z/8)^x (Z/5)^x (Z/7)^x = Z/2 + Z/2 + Z/4 + Z/6
    assert abelian_invariants(units, lambda a, b: a * b % n, 1) == [12, 2, 2, 2]


def test_abelian_invariants_signals_non_closure():
    with pytest.raises(ValueError):
        abelian_invariants([0, 1, 2], lambda a, b: (a + b) % 4, 0)


@pytest.mark.parametrize(
    "D,p,k,want", [(5, 3, 2, [12]), (5, 5, 1, [10]), (-3, 3, 1, [6]), (-3, 3, 2, [6, 3])]
)
def test_structure_examples(D, p, k, want):
    assert structure_mod_pk(D, p, k) == want


@pytest.mark.parametrize("D", [5, 8, 12, 13, -3, -4, 40, -8, 6, 15, -21])
def test_structure_table_matches_enumeration(D):
    for p in (3, 5, 7):
        for k in (1, 2, 3):
            if p**k > 400:
                continue
            assert structure_mod_pk(D, p, k) == _invariants_mod(D, p**k), (D, p, k)


def test_structure_rejects_two():
    with pytest.raises(ValueError):
        structure_mod_pk(5, 2, 1)


@pytest.mark.parametrize("D", [5, 8, 12, 13, -3, -4])
def test_order_mod_crt(D):
    for n in range(3, 202, 2):
        assert order_mod(D, n) == len(enumerate_points(D, n))


def test_closure_defects_zero():
    rng = random.Random(0)
    for D in DISCS:
        for _ in range(3):
            n = rng.randrange(3, 400) | 1
            assert closure_defects(D, n) == 0


def test_local_zeta_example():
    Z = local_zeta(5, 3)
    assert Z.numerator == (1, 1) and Z.denominator == (1, -3)
    assert str(Z) == "(1 + T)/(1 - 3T)"
    assert Z.point_counts(2) == [4, 8]


@pytest.mark.parametrize("D", [5, 8, 12, 13, -4, -3])
def test_local_zeta_matches_enumeration(D):
    for p in (3, 7, 11):
        if D % p == 0:
            with pytest.raises(ValueError):
                local_zeta(D, p)
            continue
        enum = [len(enumerate_points(D, prime_field(p, r))) for r in (1, 2, 3)]
        assert local_zeta(D, p).point_counts(3) == enum


def test_parabola_zeta():
    Z = local_zeta(None, 7)
    assert Z.point_counts(3) == [7, 49, 343]


def test_displayed_zeta_disagrees():
    # the other closed form predicts p^r + chi^r, off by 2 chi^r from the count
    assert displayed_zeta(5, 3).point_counts(3) == [2, 10, 26]
    assert local_zeta(5, 3).point_counts(3) == [4, 8, 28]


def test_zeta_series_is_exp_of_counts():
    Z = local_zeta(5, 7)
    N = Z.point_counts(5)
    # exp(sum N_r T^r / r) as a power series with rational coefficients
    log = [Fraction(0)] + [Fraction(N[r - 1], r) for r in range(1, 6)]
    exp = [Fraction(1)] + [Fraction(0)] * 5
    for k in range(1, 6):
        exp[k] = sum(j * log[j] * exp[k - j] for j in range(1, k + 1)) / k
    assert Z.series(6) == exp
    assert math.isclose(float(exp[1]), N[0])

import itertools
import math

import pytest
from sympy import primefactors

from pellconic.forms import (
    ClassGroup,
    QuadraticForm,
    class_group_narrow,
    compose,
    principal_form,
    reduce_definite,
    reduce_form,
    reduced_definite_forms,
    reduced_indefinite_forms,
)
from pellconic.ntkernel import is_fundamental, pell4_fundamental

# class numbers of imaginary quadratic fields (standard tables)
IMAGINARY_H = {-3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -20: 2, -23: 3, -24: 2, -39: 4,
               -47: 5, -56: 4, -71: 7, -84: 4, -104: 6, -136: 4, -163: 1, -191: 13}


@pytest.mark.parametrize("D,h", sorted(IMAGINARY_H.items()))
def test_imaginary_class_numbers(D, h):
    assert class_group_narrow(D).h_plus == h


def _brute_definite_classes(D):
    """Count classes by reducing every primitive form with small coefficients."""
    seen = set()
    for a in range(1, 40):
        for b in range(-40, 41):
            if (b * b - D) % (4 * a) == 0:
                c = (b * b - D) // (4 * a)
                f = QuadraticForm(a, b, c)
                if f.is_primitive():
                    seen.add(reduce_definite(f))
    return seen


@pytest.mark.parametrize("D", [-23, -84, -71, -56, -104])
def test_definite_reduction_oracle(D):
    assert _brute_definite_classes(D) == set(reduced_definite_forms(D))


@pytest.mark.parametrize("D,h_plus", [(-4, 1), (40, 2), (5, 1), (12, 2), (8, 1), (13, 1), (60, 4), (136, 4)])
def test_narrow_examples(D, h_plus):
    assert class_group_narrow(D).h_plus == h_plus


def test_structures():
    assert class_group_narrow(-84).invariants == [2, 2]
    assert class_group_narrow(136).invariants == [4]
    assert class_group_narrow(145).invariants == [4]
    assert class_group_narrow(316).invariants == [6]
    cg = class_group_narrow(136)
    assert (cg.squares_order, cg.two_torsion_of_squares, cg.h_wide) == (2, 2, 2)


def test_reduced_indefinite_forms_are_reduced():
    for D in (5, 12, 40, 136, 229):
        forms = reduced_indefinite_forms(D)
        assert forms
        s = math.isqrt(D)
        for a, b, c in forms:
            assert b * b - 4 * a * c == D
            assert abs(s - 2 * abs(a)) < b <= s


def test_group_law_axioms():
    for D in (-84, -71, 136, 145, 229, 316):
        G = ClassGroup(D)
        n = len(G)
        for i, j, k in itertools.product(range(n), repeat=3):
            assert G.mul(G.mul(i, j), k) == G.mul(i, G.mul(j, k))
        for i in range(n):
            assert G.mul(i, G.identity) == i
            assert G.mul(i, G.inv(i)) == G.identity
            for j in range(n):
                assert G.mul(i, j) == G.mul(j, i)


def test_composition_preserves_disc_and_representation():
    f, g = QuadraticForm(2, 2, 11), QuadraticForm(3, 0, 7)
    h = compose(f, g)
    assert h.disc == -84
    # the product form represents f(1,0) * g(1,0) = 6
    assert any(h(x, y) == 6 for x in range(-5, 6) for y in range(-5, 6))


def test_reduce_form_dispatches():
    assert reduce_form((1, 0, 1)) == (1, 0, 1)
    assert principal_form(5) == (1, 1, -1)
    assert principal_form(12) == (1, 0, -3)


def test_rejects():
    for D in (0, 1, 9, 7, 10**5 + 1):
        with pytest.raises(ValueError):
            class_group_narrow(D)


def _fundamental(lo, hi):
    return [D for D in range(lo, hi + 1) if is_fundamental(D)]


def test_genus_theory():
    for D in _fundamental(-300, 300):
        cg = class_group_narrow(D)
        t = len(primefactors(abs(D)))
        assert cg.squares_order * 2 ** (t - 1) == cg.h_plus, D


def test_narrow_vs_wide():
    for D in _fundamental(5, 300):
        cg = class_group_narrow(D)
        u = pell4_fundamental(D).u
        assert cg.h_plus == 2**u * cg.h_wide, D

import random
from fractions import Fraction

import pytest

from starq import SymbolPoly, parse_symbol, star_explicit, star_quant
from starq.geometry import projective
from starq.hochschild import Cochain, hochschild_delta, is_linear, star_commutator, transform_star
from starq.operators import D, E, T, dxi
from starq.properties import check_homogeneity, check_invariance, random_symbol
from starq.symbols import poisson
from starq.verify import random_cochain


def P(text, n=1):
    return parse_symbol(text, n)


def test_delta_examples():
    dE = hochschild_delta(Cochain.from_op(E))
    assert not dE(P("x1"), P("xi1"))
    assert not hochschild_delta(Cochain.from_op(D))(P("x1"), P("x1"))
    # T is second order, hence not a derivation
    assert hochschild_delta(Cochain.from_op(T((1,))))(P("xi1"), P("xi1")) == SymbolPoly.const(1, -2)


def test_delta_squared_vanishes():
    rng = random.Random(11)
    for _ in range(50):
        C = random_cochain(rng, 2, (1, 1))
        F, G, H = (random_symbol(rng, 2, 2, terms=2) for _ in range(3))
        assert not hochschild_delta(hochschild_delta(C))(F, G, H)


def test_delta_of_a_bilinear_star_term():
    # the commutative product itself is a 2-cocycle
    prod = Cochain(2, lambda F, G: F * G, "m")
    rng = random.Random(2)
    F, G, H = (random_symbol(rng, 1, 2) for _ in range(3))
    assert not hochschild_delta(prod)(F, G, H)


def test_unsupported_arity():
    with pytest.raises(ValueError):
        hochschild_delta(Cochain(3, lambda a, b, c: a, "t"))
    with pytest.raises(TypeError):
        Cochain.from_op(E)(P("x1"), P("x1"))


def test_linearity_spot_check():
    rng = random.Random(5)
    samples = [random_symbol(rng, 1, 2) for _ in range(3)]
    assert is_linear(Cochain.from_op(E @ dxi(0)), samples)
    assert not is_linear(Cochain(1, lambda F: F * F, "sq"), samples)


def test_star_commutator():
    assert star_commutator(P("xi1"), P("x1")) == SymbolPoly.one(1)
    F = P("x1^2*xi1^3 + x1")
    assert not star_commutator(F, F)
    fam = projective(2)
    from starq.geometry import moment

    for X in fam:
        for Y in fam:
            JX, JY = moment(X), moment(Y)
            assert star_commutator(JX, JY, star_explicit) == poisson(JX, JY)


def test_star_commutator_rejects_asymmetric_products():
    with pytest.raises(ValueError):
        star_commutator(P("x1"), P("xi1"), lambda F, G: F * F)


def test_identity_transform():
    s = transform_star(star_explicit)
    F, G = P("x1^2*xi1"), P("x1*xi1^2")
    assert s(F, G) == star_explicit(F, G)


def test_transform_validation():
    with pytest.raises(ValueError):
        transform_star(star_explicit, mu=(2,))
    with pytest.raises(ValueError):
        transform_star(star_explicit, [(0, Cochain.from_op(E))], order=3)
    with pytest.raises(ValueError):
        transform_star(star_explicit, [(1, Cochain.from_op(E))])


def test_equivalent_star_stays_associative_and_invariant():
    order = 4
    s = transform_star(star_explicit, [(1, Cochain.from_op(E))], order=order)
    F, G, H = P("x1^2*xi1^2"), P("x1*xi1 + xi1^2"), P("x1^3*xi1")
    assert s(s(F, G), H) == s(F, s(G, H))
    for X in projective(1):
        assert check_invariance(s, X, F, G) is None
    assert check_homogeneity(s, F, G, order) is not None
    assert check_homogeneity(star_explicit, F, G) is None


def test_reparametrization_shifts_third_order():
    c = Fraction(7, 3)
    s = transform_star(star_explicit, mu=(1, 0, c))
    F, G = P("x1^3*xi1^2"), P("x1^2*xi1^3")
    d = (s(F, G) - s(G, F)) - (star_explicit(F, G) - star_explicit(G, F))
    assert d.nu_part(1) == SymbolPoly.zero(1)
    assert d.nu_part(3) == poisson(F, G).scale(c)

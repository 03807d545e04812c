import itertools

import pytest
from hypothesis import given, settings

from starq import SymbolPoly
from starq.geometry import (
    Multivector,
    VectorField,
    canonical_bivectors,
    conformal,
    density_lie,
    g_vector,
    generators,
    lie_derivative,
    lift_lie,
    moment,
    projective,
    schouten,
)

from conftest import symbols


def _zero(W):
    return all(not v for v in W.terms.values())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_family_sizes(n):
    assert len(projective(n)) == n * n + 2 * n


@pytest.mark.parametrize("p,q", [(1, 0), (2, 0), (1, 1), (2, 1)])
def test_conformal_sizes(p, q):
    n = p + q
    fam = conformal(p, q)
    assert len(fam) == (n + 1) * (n + 2) // 2
    assert fam.metric == (1,) * p + (-1,) * q


def test_generators_lookup():
    assert generators("projective", 2).kind == "projective"
    assert generators(("conformal", 1, 1)).signature == (1, 1)
    with pytest.raises(ValueError):
        generators("affine", 2)


def test_moment_and_lift():
    x, xi = SymbolPoly.x(0, 1), SymbolPoly.xi(0, 1)
    X = VectorField((x * x,))  # the inversion in dimension one
    assert moment(X) == x * x * xi
    # {x^2 xi, xi} = x^2 * 0 - 2 x xi * 1
    assert lift_lie(X, xi) == (x * xi).scale(-2)


def _in_span(target, basis):
    import sympy

    keys = sorted({k for J in basis + [target] for k, _ in J.items()})
    A = sympy.Matrix([[J.coefficient(*k) for J in basis] for k in keys])
    b = sympy.Matrix([target.coefficient(*k) for k in keys])
    return A.rank() == A.row_join(b).rank()


def _closed_under_bracket(fam):
    basis = [moment(X) for X in fam]
    for X, Y in itertools.combinations(fam.members, 2):
        assert _in_span(moment(X.bracket(Y)), basis)


@pytest.mark.parametrize("fam", [projective(2), conformal(2, 0), conformal(1, 1)])
def test_families_close(fam):
    _closed_under_bracket(fam)


@settings(max_examples=25, deadline=None)
@given(symbols(2))
def test_lift_is_a_representation(F):
    fam = projective(2)
    for X, Y in [(fam.members[0], fam.members[-1]), (fam.members[3], fam.members[-2])]:
        lhs = lift_lie(X, lift_lie(Y, F)) - lift_lie(Y, lift_lie(X, F))
        assert lhs == lift_lie(X.bracket(Y), F)


def test_density_lie_representation():
    fam = projective(2)
    f = SymbolPoly(2, {((2, 1), (0, 0), 0): 1, ((0, 1), (0, 0), 0): 3})
    for X, Y in itertools.combinations(fam.members, 2):
        lhs = density_lie(X, "1/3", density_lie(Y, "1/3", f)) - density_lie(Y, "1/3", density_lie(X, "1/3", f))
        assert lhs == density_lie(X.bracket(Y), "1/3", f)
    with pytest.raises(ValueError):
        density_lie(fam.members[0], 1, SymbolPoly.xi(0, 2))


def test_wedge_is_graded_antisymmetric():
    a = Multivector(2, 1, {(0,): SymbolPoly.one(2)})
    b = Multivector(2, 1, {(3,): SymbolPoly.x(0, 2)})
    assert _zero(a.wedge(b) + b.wedge(a))
    assert _zero(a.wedge(a))


def test_pi_is_poisson_and_invariant():
    for n in (1, 2, 3):
        Pi = canonical_bivectors(n)["Pi"]
        assert _zero(schouten(Pi, Pi))
        for X in projective(n):
            assert _zero(lie_derivative(X, Pi))


def test_pi_evaluates_to_the_poisson_bracket():
    # Pi(dF, dG) = {F, G}
    from starq import poisson

    Pi = canonical_bivectors(2)["Pi"]
    F = SymbolPoly(2, {((1, 0), (1, 1), 0): 1})
    G = SymbolPoly(2, {((0, 2), (1, 0), 0): 1})
    assert Pi(F, G) == poisson(F, G)


@pytest.mark.parametrize("sig", [(2, 0), (1, 1)])
def test_lambda(sig):
    fam = conformal(*sig)
    b = canonical_bivectors(2, fam)
    Pi, Lam = b["Pi"], b["Lambda"]
    assert _zero(schouten(Lam, Lam))
    for X in fam:
        assert _zero(lie_derivative(X, Lam))
    assert not all(_zero(lie_derivative(X, Lam)) for X in projective(2))
    dxi1 = Multivector(2, 1, {(2,): SymbolPoly.one(2)})
    dxi2 = Multivector(2, 1, {(3,): SymbolPoly.one(2)})
    expected = dxi1.wedge(dxi2).wedge(g_vector(2, fam.metric)).scale(2)
    assert _zero(schouten(Pi, Lam) - expected)
    assert not _zero(schouten(Pi, Lam))


def test_lambda_needs_conformal_plane():
    assert canonical_bivectors(2, "projective")["Lambda"] is None
    with pytest.raises(ValueError):
        canonical_bivectors(3, conformal(3, 0))


def test_schouten_on_vectors_is_minus_lie_bracket():
    from starq.geometry import lifted_vector

    fam = projective(1)
    X, Y = fam.members[0], fam.members[2]
    got = schouten(lifted_vector(X), lifted_vector(Y))
    assert _zero(got + lifted_vector(X.bracket(Y)))

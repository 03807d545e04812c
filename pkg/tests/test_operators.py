import pytest

from starq import SymbolPoly
from starq.geometry import conformal, projective
from starq.operators import (
    D,
    E,
    E_HAT,
    IDENTITY,
    Bounds,
    MetricRequired,
    R,
    R0,
    T,
    basis_monomials,
    commutant_check,
    commutator,
    commutator_table,
    dxi,
    lift,
    named,
    op_table,
    same_operator,
)

B = Bounds(3, 4, 0)


def test_basis_size():
    # monomials of total degree <= 3 in x and <= 4 in xi
    assert len(basis_monomials(1, B)) == 4 * 5
    assert len(basis_monomials(2, B)) == 10 * 15


@pytest.mark.parametrize("n", [1, 2, 3])
def test_E_D(n):
    assert same_operator(commutator(E, D), -D, n, Bounds(2, 3, 0)) is None


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lift_D(n):
    fam = projective(n)
    for label, X in fam.labelled():
        if label.startswith("inversion"):
            i = int(label.split()[-1]) - 1
            rhs = E.scale(2).shift(n + 1) @ dxi(i)
            assert same_operator(commutator(lift(X), D), rhs, n, Bounds(2, 3, 0)) is None
        else:
            assert commutator_table(lift(X), D, n, Bounds(2, 3, 0)).is_zero()


@pytest.mark.parametrize("metric", [(1, 1), (1, -1), (1, 1, 1)])
def test_sl2(metric):
    n = len(metric)
    bounds = Bounds(1, 4, 0)
    assert same_operator(commutator(R(metric), T(metric)), E.scale(-4).shift(-2 * n), n, bounds) is None
    assert same_operator(commutator(E, R(metric)), R(metric).scale(2), n, bounds) is None
    assert same_operator(commutator(E, T(metric)), T(metric).scale(-2), n, bounds) is None


def test_R0_in_dimension_one():
    assert same_operator(R0((1,)), E @ E - E, 1, B) is None


def test_metric_required():
    with pytest.raises(MetricRequired):
        R(None)
    with pytest.raises(MetricRequired):
        named("T")


def test_named():
    assert named("E") is E
    assert named("E_hat") is E_HAT
    assert named("dxi", index=0)(SymbolPoly.xi(0, 1)) == SymbolPoly.one(1)
    with pytest.raises(ValueError):
        named("nope")


def test_op_table_equality():
    assert op_table(E, 1, B) == op_table(E, 1, B)
    assert op_table(E, 1, B) != op_table(IDENTITY, 1, B)
    assert op_table(E, 1, B).first_difference(op_table(IDENTITY, 1, B)) is not None


def test_commutants():
    assert commutant_check(projective(2), E, B)
    for sig in [(2, 0), (1, 1)]:
        fam = conformal(*sig)
        assert commutant_check(fam, E, B)
        assert commutant_check(fam, R0(fam.metric), B)
    res = commutant_check(conformal(2, 0), D, B)
    assert not res
    assert res.generator.startswith("inversion")
    assert res.witness is not None
    # R and T separately are only covariant: the homothety rescales them
    assert not commutant_check(conformal(2, 0), R((1, 1)), B)
    assert not commutant_check(projective(2), T((1, 1)), B)

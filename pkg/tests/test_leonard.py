from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from leonard24.field import QQ
from leonard24.instances import GF101, array_from_eigenvalues, FAMILIES
from leonard24.leonard import (LeonardSystemError, ParameterArray, ParameterArrayError,
                               eigenvalues, from_split_form, parameter_array,
                               primitive_idempotents, split_form_matrices, split_sequences,
                               validate_system)
from leonard24.matrix import Matrix

from conftest import all_instances, instance


@pytest.mark.parametrize("d,field,k", all_instances(4))
def test_split_form_instances_are_leonard_systems(d, field, k):
    pa, sys_, _, _ = instance(d, field, k)
    rep = validate_system(sys_.A, sys_.Astar, sys_.theta, sys_.theta_star)
    assert rep.passed, rep.failures()
    n = d + 1
    I = Matrix.identity(n, field)
    total = Matrix.zeros(n, n, field)
    for i, Ei in enumerate(sys_.E):
        assert sys_.A @ Ei == Ei.scale(sys_.theta[i])
        for j, Ej in enumerate(sys_.E):
            assert Ei @ Ej == (Ei if i == j else Matrix.zeros(n, n, field))
        total = total + Ei
    assert total == I
    assert parameter_array(sys_) == pa


def test_split_form_shape():
    pa = ParameterArray(["1", "2", "3"], ["0", "5", "7"], ["4", "6"], None, QQ)
    A, As = split_form_matrices(pa)
    assert A.rows == ((1, 0, 0), (1, 2, 0), (0, 1, 3))
    assert As.rows == ((0, 4, 0), (0, 5, 6), (0, 0, 7))


def test_raw_validation_finds_all_orderings():
    pa, sys_, _, _ = instance(3)
    rep = validate_system(sys_.A, sys_.Astar)
    assert rep.passed
    # each idempotent sequence can be read forwards or backwards
    assert len(rep.systems) == 4
    assert any(s.same_as(sys_) for s in rep.systems)
    orders = {(s.theta, s.theta_star) for s in rep.systems}
    assert (sys_.theta[::-1], sys_.theta_star[::-1]) in orders


def test_dense_dual_is_rejected():
    # A diagonal, so E_i A* E_j != 0 exactly when A*_ij != 0; every pair is
    # nonzero on one side, so no ordering is tridiagonal
    A = Matrix.diagonal([0, 1, 2])
    As = Matrix([[1, 1, 1], [0, 2, 1], [0, 0, 3]])
    rep = validate_system(A, As)
    assert not rep.passed
    assert "E_i A* E_j band" in [c.name for c in rep.failures()]
    assert rep.systems == []


def test_repeated_eigenvalue_is_rejected():
    rep = validate_system(Matrix.identity(3), Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]]))
    assert not rep.passed
    assert rep.failures()[0].name == "A multiplicity-free"


def test_non_leonard_split_form():
    pa = ParameterArray([0, 1, 2], [0, 1, 2], [1, 2], None, QQ)
    with pytest.raises(LeonardSystemError) as info:
        from_split_form(pa)
    assert not info.value.report.passed


def test_phi_cross_check():
    pa = instance(2)[0]
    bad = pa.with_phi([pa.phi[0] + 1, pa.phi[1]])
    with pytest.raises(LeonardSystemError, match="second split sequence"):
        from_split_form(bad)


@pytest.mark.parametrize("kwargs,invariant", [
    (dict(theta=[1, 1], theta_star=[0, 1], varphi=[1]), "theta-distinct"),
    (dict(theta=[0, 1], theta_star=[2, 2], varphi=[1]), "theta_star-distinct"),
    (dict(theta=[0, 1], theta_star=[0, 1], varphi=[0]), "varphi-nonzero"),
    (dict(theta=[0, 1], theta_star=[0, 1], varphi=[1], phi=[0]), "phi-nonzero"),
    (dict(theta=[0, 1], theta_star=[0, 1, 2], varphi=[1]), "length"),
    (dict(theta=[0, 1], theta_star=[0, 1], varphi=[]), "length"),
])
def test_parameter_array_invariants(kwargs, invariant):
    kwargs.setdefault("phi", None)
    with pytest.raises(ParameterArrayError) as info:
        ParameterArray(field=QQ, **kwargs)
    assert info.value.invariant == invariant


def test_d0_system():
    pa = ParameterArray([5], [7], [], [], QQ)
    sys_ = from_split_form(pa)
    assert sys_.E[0] == Matrix.identity(1)
    assert split_sequences(sys_) == ([], [])


def test_eigenvalues():
    A = Matrix([[Fraction(1, 2), 1, 0], [0, -3, 2], [0, 0, Fraction(5, 3)]])
    assert eigenvalues(A) == [-3, Fraction(1, 2), Fraction(5, 3)]
    # x^2 + 1 has no rational root
    assert eigenvalues(Matrix([[0, -1], [1, 0]])) == []
    # ... but 10^2 = -1 in GF(101)
    roots = eigenvalues(Matrix([[0, -1], [1, 0]], GF101))
    assert sorted(r.value for r in roots) == [10, 91]


def test_primitive_idempotents_reject_non_eigenvalue():
    with pytest.raises(LeonardSystemError):
        primitive_idempotents(Matrix.diagonal([1, 2]), [1, 3])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(FAMILIES)), st.integers(1, 4),
       st.fractions(min_value=-30, max_value=30, max_denominator=5))
def test_split_round_trip_property(family, d, phi1):
    """Any admissible phi_1 gives a Leonard system whose split data come back exactly."""
    th, ths, _ = FAMILIES[family]
    try:
        pa = array_from_eigenvalues(th(d), ths(d), phi1)
    except ParameterArrayError:
        assume(False)
    sys_ = from_split_form(pa.with_phi(pa.phi))
    varphi, phi = split_sequences(sys_)
    assert tuple(varphi) == pa.varphi
    assert tuple(phi) == pa.phi and all(phi)

from math import prod

import pytest

from leonard24.field import QQ
from leonard24.identities import (IdentityReport, s_element, verify_all_identities,
                                  verify_mu_identity, verify_reduction_rules,
                                  verify_s_identities, verify_simplify_rules)
from leonard24.instances import GF101
from leonard24.leonard import ParameterArray, from_split_form
from leonard24.matrix import Matrix
from leonard24.relatives import ELEMENTS, apply

from conftest import all_instances, instance


@pytest.mark.parametrize("d,field,k", all_instances(4))
def test_all_identities(d, field, k):
    _, sys_, _, _ = instance(d, field, k)
    reports = verify_all_identities(sys_)
    assert [r.name for r in reports if not r.passed] == []


@pytest.mark.parametrize("d,field", [(1, QQ), (2, QQ), (3, QQ), (3, GF101)])
def test_identities_on_relatives(d, field):
    _, sys_, _, _ = instance(d, field)
    for g in ELEMENTS:
        bad = [r.name for r in verify_all_identities(apply(g, sys_)) if not r.passed]
        assert bad == [], g


def test_counts():
    _, sys_, _, _ = instance(3)
    assert len(verify_reduction_rules(sys_)) == 8 * 16
    assert len(verify_simplify_rules(sys_)) == 8 * 4
    assert len(verify_mu_identity(sys_)) == 4
    labels = {r.label for r in verify_reduction_rules(sys_)}
    assert labels == {"eq:basic", "eq:basicd", "eq:basicD", "eq:basicdD", "eq:basics",
                      "eq:basicsds", "eq:basicsDs", "eq:basicdDs"}


def test_delta_structure():
    _, sys_, _, _ = instance(4)
    for r in verify_reduction_rules(sys_):
        i, j = r.indices
        if i != j:
            assert r.lhs.is_zero()
        else:
            assert not r.rhs.is_zero()
    first = next(r for r in verify_reduction_rules(sys_) if r.label == "eq:basic")
    assert first.indices == (0, 0)
    assert first.rhs == sys_.E[0] @ sys_.Estar[0]


def test_s_element():
    sys0 = from_split_form(ParameterArray([1], [2], [], [], QQ))
    assert s_element(sys0) == Matrix.identity(1)
    _, sys_, _, _ = instance(3)
    S = s_element(sys_)
    assert S @ sys_.E[0] == sys_.E[0]
    assert all(r.passed for r in verify_s_identities(sys_))


def test_simplify_r0_coefficient():
    pa, sys_, _, _ = instance(3, QQ, 1)
    d = pa.d
    E, Es = sys_.E, sys_.Estar
    c = prod(pa.varphi) / (sys_.tau(d, pa.theta[d]) * sys_.tau_s(d, pa.theta_star[d]))
    assert Es[0] @ E[d] @ Es[d] @ E[0] == (Es[0] @ E[0]).scale(c)


def test_mu_identity_detects_swapped_split_sequence():
    pa, sys_, _, _ = instance(3)
    d = pa.d
    Esd, E0 = sys_.Estar[d], sys_.E[0]
    eta = sys_.eta(d, pa.theta[0])
    wrong = [Esd @ E0 @ sys_.tau_As(r) == (Esd @ sys_.eta_A(d - r)).scale(prod(pa.phi[:r]) / eta)
             for r in range(d + 1)]
    assert not all(wrong)
    assert wrong[0]  # empty products agree


def test_report_name():
    M = Matrix.identity(2)
    rep = IdentityReport("eq:mu", (2,), M, M)
    assert rep.passed and rep.name == "eq:mu[2]"

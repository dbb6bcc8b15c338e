import random
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from leonard24.field import QQ
from leonard24.instances import GF101
from leonard24.leonard import ParameterArray, from_split_form
from leonard24.dagger import anchor_vectors, inner
from leonard24.matrix import Matrix, determinant, trace
from leonard24.relatives import ELEMENTS
from leonard24.transition import (ALL_TAGS, MUTATIONS, TEMPLATES, BasisSet, BasisTag,
                                  TransitionContext, composition_coherence, enumerate_bases,
                                  formula, identity_coherence, mutation_failures,
                                  oracle_change_of_basis, relabel_tag, relative_coherence,
                                  rescaled_inputs, verify_all)

from conftest import all_instances, instance, matrices, rationals


def ctx_for(d, field=QQ, k=0):
    _, sys_, g, a = instance(d, field, k)
    return TransitionContext(sys_, g, a)


def test_tag_vocabulary():
    assert len(ALL_TAGS) == 24 == len(set(ALL_TAGS))
    assert BasisTag.parse("tauAs.rev.xi0").describe() == "{tau*_d-i(A*) xi_0}"
    assert BasisTag.parse("E.fwd.xis0").name == "E.fwd.xis0"
    for bad in ("bogus", "E.fwd.xi0", "tauA.up.xis0", "Es.fwd.xis0", "E.fwd"):
        with pytest.raises(ValueError):
            BasisTag.parse(bad)


def test_template_table_is_complete():
    assert len(TEMPLATES) == 48
    labels = {formula(u, v).label for u in ALL_TAGS for v in ALL_TAGS}
    assert len(labels) == 96  # 24 source sequences x 4 target anchors
    assert formula(BasisTag.parse("E.rev.xis0"), BasisTag.parse("Es.fwd.xid")).label \
        == "eq:Ed-ivs0toXivd"


def test_bases_d0():
    sys_ = from_split_form(ParameterArray([0], [1], [], [], QQ))
    bases = enumerate_bases(sys_, anchor_vectors(sys_))
    assert all(len(b.vectors) == 1 and not b.vectors[0].is_zero() for b in bases.values())


def test_tau_0_is_the_anchor():
    _, sys_, _, a = instance(3)
    bases = enumerate_bases(sys_, a)
    assert bases[BasisTag.parse("tauA.fwd.xis0")].vectors[0] == a.xis0
    assert bases[BasisTag.parse("etaAs.rev.xid")].vectors[-1] == a.xid
    assert bases[BasisTag.parse("E.rev.xisd")].vectors[0] == sys_.E[3] @ a.xisd


@pytest.mark.parametrize("d,field,k", all_instances(3))
def test_all_pairs_match_oracle(d, field, k):
    _, sys_, g, a = instance(d, field, k)
    rep = verify_all(sys_, g, a)
    assert rep.total == 576
    assert [r.label for r in rep.failures()] == []


def test_identity_pair_example():
    ctx = ctx_for(2)
    u = BasisTag.parse("E.fwd.xis0")
    f = formula(u, u)
    assert f.display == "eq:Eivs0toXivs0 (X = E)"
    assert ctx.evaluate(f) == Matrix.identity(3)
    assert all(identity_coherence(ctx).values())


def test_displayed_example_terms():
    """Direct sums for two displays, written out term by term."""
    ctx = ctx_for(2)
    sys_, g, a = ctx.sys, ctx.g, ctx.anchors
    d, pa = sys_.d, sys_.parameter_array
    phi = prod(pa.phi, start=QQ.one)
    n = d + 1

    # E_i xi*_0 -> tau_i(A) xi*_d
    c = (sys_.tau_s(d, sys_.theta_star[d]) / phi
         * inner(g, a.xid, a.xisd) / inner(g, a.xid, a.xis0))
    T = Matrix.zeros(n, n, QQ)
    for r in range(n):
        w = sys_.tau(r, sys_.theta[r]) * sys_.eta(d - r, sys_.theta[r])
        T = T + (sys_.tau_A(r) @ sys_.Estar[d] @ sys_.E[r]).scale(w)
    f = formula(BasisTag.parse("E.fwd.xis0"), BasisTag.parse("tauA.fwd.xisd"))
    assert f.label == "eq:Eivs0toXivsd"
    assert ctx.evaluate(f) == T.scale(c)

    # tau*_i(A*) xi_0 -> E*_i xi_0
    T = Matrix.zeros(n, n, QQ)
    for r in range(n):
        w = 1 / prod(pa.varphi[:r], start=QQ.one)
        T = T + (sys_.Estar[r] @ sys_.E[0] @ sys_.Estar[0] @ sys_.tau_A(r)).scale(w)
    T = T.scale(1 / trace(sys_.E[0] @ sys_.Estar[0]))
    f = formula(BasisTag.parse("tauAs.fwd.xi0"), BasisTag.parse("Es.fwd.xi0"))
    assert f.template.theorem == "thm:s"
    assert ctx.evaluate(f) == T


def test_oracle_examples():
    _, sys_, _, a = instance(2)
    bases = enumerate_bases(sys_, a)
    u = bases[BasisTag.parse("Es.fwd.xi0")]
    assert oracle_change_of_basis(u, u) == Matrix.identity(3)
    v = BasisSet(u.tag, tuple(x.scale(2) for x in u.vectors))
    assert oracle_change_of_basis(u, v) == Matrix.identity(3).scale(2)


@settings(max_examples=30, deadline=None)
@given(matrices(rationals, 3), matrices(rationals, 3))
def test_oracle_multiplies_back(U, V):
    if not determinant(U):
        return
    tag = ALL_TAGS[0]
    v = BasisSet(tag, tuple(V.column(j) for j in range(3)))
    u = BasisSet(tag, tuple(U.column(j) for j in range(3)))
    T = oracle_change_of_basis(u, v)
    assert T @ U == V


def test_evaluated_maps_are_invertible():
    ctx = ctx_for(2, GF101)
    rng = random.Random(4)
    for _ in range(30):
        u, v = rng.choice(ALL_TAGS), rng.choice(ALL_TAGS)
        assert determinant(ctx.evaluate(formula(u, v)))


@pytest.mark.parametrize("field", [QQ, GF101])
def test_composition(field):
    ctx = ctx_for(3, field)
    assert all(ok for *_, ok in composition_coherence(ctx, 100, seed=7))


@pytest.mark.parametrize("seed", [0, 1])
def test_rescaling_invariance(seed):
    _, sys_, g, a = instance(3, QQ, 2)
    base = verify_all(sys_, g, a)
    g2, a2 = rescaled_inputs(g, a, seed)
    assert g2.G != g.G and a2.xi0 != a.xi0
    assert verify_all(sys_, g2, a2).verdicts == base.verdicts


def test_relabeling_is_a_bijection():
    for gelem in ELEMENTS:
        image = {relabel_tag(gelem.word, t) for t in ALL_TAGS}
        assert image == set(ALL_TAGS)
    assert relabel_tag(("down",), BasisTag.parse("E.fwd.xis0")) == BasisTag.parse("E.fwd.xisd")
    assert relabel_tag(("star",), BasisTag.parse("tauA.rev.xis0")) == BasisTag.parse("tauAs.rev.xi0")


@pytest.mark.parametrize("g", ELEMENTS, ids=lambda g: g.name)
def test_relative_coherence(g):
    """Displays verified on a relative agree with the relabeled displays on the original."""
    ctx = ctx_for(2)
    assert all(relative_coherence(ctx, g.word))


@pytest.mark.parametrize("m", MUTATIONS, ids=lambda m: m.name)
def test_mutations_are_caught(m):
    ctx = ctx_for(3)
    assert mutation_failures(ctx, m) >= 1

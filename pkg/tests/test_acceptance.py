"""Acceptance criteria, one test each.

Every test records a ``[PASS]`` or ``[FAIL]`` line; the lines are printed as
they happen (visible with ``-s``) and again in the terminal summary.
Run directly with ``python tests/test_acceptance.py`` for the lines alone.
"""

import time

import pytest

from leonard24.cli import SUITES, run_suites
from leonard24.dagger import probe_trace_reading, verify_scalar_lemmas
from leonard24.field import QQ
from leonard24.identities import verify_all_identities
from leonard24.instances import GF101
from leonard24.leonard import from_split_form, split_sequences, validate_system
from leonard24.matrix import is_basis
from leonard24.relatives import DDOWN, DOWN, ELEMENTS, IDENTITY, STAR, apply, transform_parameter_array
from leonard24.transition import (ALL_TAGS, MUTATIONS, TransitionContext, composition_coherence,
                                  enumerate_bases, identity_coherence, mutation_failures,
                                  rescaled_inputs, verify_all)

from conftest import ACCEPTANCE, arrays, instance

DEGREES = range(1, 6)
FIELDS = (QQ, GF101)


def instances():
    """Every sample instance with d <= 5 over both fields."""
    return [(d, f, k) for d in range(6) for f in FIELDS for k in range(len(arrays(d, f)))]


def record(criterion, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def test_construction_soundness():
    start = time.perf_counter()
    bad = []
    counts = {}
    for d in DEGREES:
        for field in FIELDS:
            pas = arrays(d, field)
            counts[d, field.name] = len(pas)
            for pa in pas:
                sys_ = from_split_form(pa)
                report = validate_system(sys_.A, sys_.Astar, pa.theta, pa.theta_star)
                if not report.passed or not report.system.same_as(sys_):
                    bad.append((d, field.name, [c.name for c in report.failures()]))
    elapsed = time.perf_counter() - start
    enough = all(counts[d, QQ.name] >= 3 and counts[d, GF101.name] >= 1 for d in DEGREES)
    record("construction soundness", not bad and enough and elapsed < 5,
           f"{sum(counts.values())} arrays, d = 1..5, {elapsed:.2f} s" + (f", failures {bad}" if bad else ""))


def test_24_bases():
    total, bad = 0, []
    for d, f, k in instances():
        _, sys_, _, anchors = instance(d, f, k)
        bases = enumerate_bases(sys_, anchors)
        assert set(bases) == set(ALL_TAGS)
        for tag, b in bases.items():
            total += 1
            if not is_basis(list(b.vectors)):
                bad.append((d, f.name, k, tag.name))
    record("24 bases", not bad, f"{total} rank checks" + (f", failures {bad}" if bad else ""))


def test_split_round_trip():
    bad = []
    for d, f, k in instances():
        pa = arrays(d, f)[k]
        varphi, phi = split_sequences(from_split_form(pa))
        if list(varphi) != list(pa.varphi) or any(x == f.zero for x in phi):
            bad.append((d, f.name, k))
        if pa.phi is not None and list(phi) != list(pa.phi):
            bad.append((d, f.name, k, "phi"))
    record("split-sequence round trip", not bad, f"{len(instances())} instances")


def test_d4_coherence():
    bad = []
    for d, f, k in instances():
        _, sys_, _, _ = instance(d, f, k)
        pa = sys_.parameter_array
        for g in ELEMENTS:
            if apply(g, sys_).parameter_array != transform_parameter_array(g, pa):
                bad.append((d, f.name, k, g.name))
        relations = [
            apply(STAR, apply(STAR, sys_)).same_as(sys_),
            apply(DOWN, apply(DOWN, sys_)).same_as(sys_),
            apply(DDOWN, apply(DDOWN, sys_)).same_as(sys_),
            apply(STAR, apply(DDOWN, sys_)).same_as(apply(DOWN, apply(STAR, sys_))),
            apply(STAR, apply(DOWN, sys_)).same_as(apply(DDOWN, apply(STAR, sys_))),
            apply(DDOWN, apply(DOWN, sys_)).same_as(apply(DOWN, apply(DDOWN, sys_))),
        ]
        if not all(relations):
            bad.append((d, f.name, k, "relations"))
    group_ok = (len(set(ELEMENTS)) == 8 and all(g * g.inverse() == IDENTITY for g in ELEMENTS))
    record("D4 coherence", not bad and group_ok,
           f"8 elements x {len(instances())} instances" + (f", failures {bad}" if bad else ""))


def test_dagger_suite():
    bad, adopted = [], set()
    for d, f, k in instances():
        _, sys_, g, anchors = instance(d, f, k)
        failures = [c.name for c in verify_scalar_lemmas(sys_, g, anchors) if not c.passed]
        if failures:
            bad.append((d, f.name, k, failures))
        adopted.add(probe_trace_reading(sys_)["adopted"])
    record("dagger/bilinear suite", not bad and adopted == {"uniform"},
           f"trace probe adopts {sorted(map(str, adopted))}" + (f", failures {bad}" if bad else ""))


def test_reduction_suite():
    bad, total = [], 0
    for d, f, k in instances():
        _, sys_, _, _ = instance(d, f, k)
        for g in ELEMENTS:
            reports = verify_all_identities(apply(g, sys_))
            n_basic = sum(r.label.startswith("eq:basic") for r in reports)
            n_mu = sum(r.label == "eq:mu" for r in reports)
            assert n_basic == 8 * (d + 1) ** 2 and n_mu == d + 1
            total += len(reports)
            bad += [(d, f.name, k, g.name, r.name) for r in reports if not r.passed]
    record("reduction-rule suite", not bad, f"{total} identities on all relatives"
           + (f", failures {bad[:5]}" if bad else ""))


def test_headline():
    bad = []
    for d, f, k in instances():
        _, sys_, g, anchors = instance(d, f, k)
        ctx = TransitionContext(sys_, g, anchors)
        rep = verify_all(sys_, g, anchors, ctx=ctx)
        if rep.total != 576 or rep.matches != 576:
            bad.append((d, f.name, k, f"{rep.matches}/{rep.total}"))
        if not all(identity_coherence(ctx).values()):
            bad.append((d, f.name, k, "identity"))
        if not all(ok for *_, ok in composition_coherence(ctx, 100, seed=d)):
            bad.append((d, f.name, k, "composition"))
    start = time.perf_counter()
    results = run_suites(from_split_form(arrays(5, QQ)[0]), SUITES)
    elapsed = time.perf_counter() - start
    full_ok = all(r.passed for r in results)
    record("headline 576/576", not bad and full_ok and elapsed < 60,
           f"{len(instances())} instances, full d = 5 suite {elapsed:.1f} s"
           + (f", failures {bad}" if bad else ""))


def test_invariance():
    bad = []
    for d, f, k in instances():
        _, sys_, g, anchors = instance(d, f, k)
        base = verify_all(sys_, g, anchors).verdicts
        for seed in (1, 2):
            g2, a2 = rescaled_inputs(g, anchors, seed)
            if verify_all(sys_, g2, a2).verdicts != base:
                bad.append((d, f.name, k, seed))
    record("invariance under rescaling", not bad, "2 rescalings per instance")


def test_mutation_sensitivity():
    _, sys_, g, anchors = instance(3, QQ, 0)
    ctx = TransitionContext(sys_, g, anchors)
    caught = {m.name: mutation_failures(ctx, m) for m in MUTATIONS}
    record("mutation sensitivity", len(caught) == 10 and all(n >= 1 for n in caught.values()),
           ", ".join(f"{k}: {v}" for k, v in caught.items()))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))

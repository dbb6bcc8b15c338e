from functools import lru_cache
from fractions import Fraction

from hypothesis import strategies as st

from leonard24.dagger import anchor_vectors, compute_gram
from leonard24.field import QQ
from leonard24.instances import GF101, sample_arrays
from leonard24.leonard import from_split_form
from leonard24.matrix import Matrix


@lru_cache(maxsize=None)
def arrays(d, field=QQ):
    return tuple(sample_arrays(d, field))


@lru_cache(maxsize=None)
def instance(d, field=QQ, k=0):
    """(parameter array, system, Gram form, anchors) for a sample instance."""
    pa = arrays(d, field)[k]
    sys_ = from_split_form(pa)
    return pa, sys_, compute_gram(sys_), anchor_vectors(sys_)


def all_instances(max_d=5):
    out = []
    for d in range(max_d + 1):
        out += [(d, QQ, k) for k in range(len(arrays(d, QQ)))]
        out.append((d, GF101, 0))
    return out


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gf101 = st.integers(0, 100).map(GF101)


def matrices(elements, n, m=None):
    m = n if m is None else m
    field = GF101 if elements is gf101 else QQ
    return st.lists(st.lists(elements, min_size=m, max_size=m), min_size=n, max_size=n).map(
        lambda rows: Matrix(rows, field))


__all__ = ["ACCEPTANCE", "arrays", "instance", "all_instances", "rationals", "gf101", "matrices", "Fraction"]


ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

"""Concrete parameter arrays for testing and demonstration.

Arrays are produced from eigenvalue sequences obeying a common three-term
recurrence, a free choice of phi_1, and the standard closed forms for the
split sequences in terms of those data.  Nothing here is trusted: every
array is pushed through :func:`leonard24.leonard.from_split_form`, which
checks the Leonard system axioms directly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .field import Field, PrimeField, QQ
from .leonard import ParameterArray

__all__ = ["array_from_eigenvalues", "sample_arrays", "FAMILIES"]


def array_from_eigenvalues(theta: Sequence, theta_star: Sequence, phi1, field: Field = QQ,
                           ) -> ParameterArray:
    """Parameter array determined by (theta, theta_star, phi_1).

    varphi_i = phi_1 s_i + (th*_i - th*_0)(th_{i-1} - th_d)
    phi_i    = varphi_1 s_i + (th*_i - th*_0)(th_{d-i+1} - th_0)
    where s_i = sum_{h<i} (th_h - th_{d-h})/(th_0 - th_d).
    """
    th = [field(x) for x in theta]
    ths = [field(x) for x in theta_star]
    d = len(th) - 1
    phi1 = field(phi1)
    if d == 0:
        return ParameterArray(th, ths, (), (), field)

    def s(i):
        return sum(((th[h] - th[d - h]) / (th[0] - th[d]) for h in range(i)), field.zero)

    varphi1 = phi1 + (ths[1] - ths[0]) * (th[0] - th[d])
    varphi = [phi1 * s(i) + (ths[i] - ths[0]) * (th[i - 1] - th[d]) for i in range(1, d + 1)]
    phi = [varphi1 * s(i) + (ths[i] - ths[0]) * (th[d - i + 1] - th[0]) for i in range(1, d + 1)]
    return ParameterArray(th, ths, varphi, phi, field)


def _linear(d, a, b):
    return [a + b * i for i in range(d + 1)]


def _quadratic(d, a, b, c):
    return [a + b * i + c * i * i for i in range(d + 1)]


def _qtype(d, q, a, b, c):
    q = Fraction(q)
    return [a + b * q ** i + c * q ** (-i) for i in range(d + 1)]


# name -> (theta(d), theta_star(d), phi_1 candidates)
FAMILIES = {
    "affine": (lambda d: _linear(d, 0, 2), lambda d: _linear(d, 1, -3), (5, 7, 11, 13)),
    "quadratic": (lambda d: _quadratic(d, 1, 1, 1), lambda d: _linear(d, -2, 1), (3, -4, 9, 17)),
    "q-type": (lambda d: _qtype(d, 2, 0, 1, 0), lambda d: _qtype(d, 2, 1, 1, 3), (Fraction(1, 3), 6, -5, 19)),
}


def _valid(pa: ParameterArray) -> bool:
    return all(pa.varphi) and all(pa.phi)


def sample_arrays(d: int, field: Field = QQ, families: Sequence[str] = tuple(FAMILIES)
                  ) -> List[ParameterArray]:
    """One array per family for this ``d`` over ``field``.

    Families whose eigenvalues collide in ``field`` are skipped; the first
    phi_1 candidate giving nonzero split sequences is used.
    """
    out = []
    for name in families:
        theta_f, theta_star_f, candidates = FAMILIES[name]
        th, ths = theta_f(d), theta_star_f(d)
        try:
            th = [field(x) for x in th]
            ths = [field(x) for x in ths]
        except ZeroDivisionError:
            continue
        if len(set(th)) != d + 1 or len(set(ths)) != d + 1:
            continue
        for c in candidates:
            try:
                pa = array_from_eigenvalues(th, ths, field(c), field)
            except (ValueError, ZeroDivisionError):
                continue
            if _valid(pa):
                out.append(pa)
                break
    return out


GF101 = PrimeField(101)

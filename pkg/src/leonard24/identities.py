"""Reduction rules, simplification rules and the S element.

Each identity is checked as an exact matrix equation.  Left sides are
explicit products of the idempotents and polynomial matrices; right sides
are a scalar built from the parameter array times a short idempotent product.
The two sides share no helper beyond matrix multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import List, Tuple

from .leonard import LeonardSystem
from .matrix import Matrix

__all__ = ["IdentityReport", "s_element", "verify_reduction_rules", "verify_simplify_rules",
           "verify_s_identities", "verify_mu_identity", "verify_all_identities"]


@dataclass(frozen=True)
class IdentityReport:
    label: str
    indices: Tuple[int, ...]
    lhs: Matrix
    rhs: Matrix

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    @property
    def name(self) -> str:
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.label}[{idx}]" if idx else self.label


class _Products:
    """Partial products of the split sequences, indexed like the formulas."""

    def __init__(self, sys_: LeonardSystem):
        pa = sys_.parameter_array
        self.one = sys_.field.one
        self.vp, self.ph, self.d = pa.varphi, pa.phi, sys_.d

    def vp_head(self, i):   # varphi_1 ... varphi_i
        return prod(self.vp[:i], start=self.one)

    def ph_head(self, i):   # phi_1 ... phi_i
        return prod(self.ph[:i], start=self.one)

    def vp_tail(self, i):   # varphi_d ... varphi_{d-i+1}
        return prod(self.vp[self.d - i:], start=self.one)

    def ph_tail(self, i):   # phi_d ... phi_{d-i+1}
        return prod(self.ph[self.d - i:], start=self.one)


def s_element(sys_: LeonardSystem) -> Matrix:
    """S = sum_i (phi_d ... phi_{d-i+1})/(varphi_1 ... varphi_i) E_i."""
    p = _Products(sys_)
    S = Matrix.zeros(sys_.d + 1, sys_.d + 1, sys_.field)
    for i, Ei in enumerate(sys_.E):
        S = S + Ei.scale(p.ph_tail(i) / p.vp_head(i))
    return S


def verify_reduction_rules(sys_: LeonardSystem) -> List[IdentityReport]:
    """All eight families of E_0 tau*_i(A*) tau_j(A) E*_0 = delta_ij (...) E_0 E*_0."""
    d = sys_.d
    E0, Ed, Es0, Esd = sys_.E[0], sys_.E[d], sys_.Estar[0], sys_.Estar[d]
    p = _Products(sys_)
    zero = Matrix.zeros(d + 1, d + 1, sys_.field)
    rules = (
        # label, left idempotent, first poly, second poly, right idempotent, coefficient
        ("eq:basic", E0, sys_.tau_As, sys_.tau_A, Es0, p.vp_head),
        ("eq:basicd", E0, sys_.eta_As, sys_.tau_A, Esd, p.ph_tail),
        ("eq:basicD", Ed, sys_.tau_As, sys_.eta_A, Es0, p.ph_head),
        ("eq:basicdD", Ed, sys_.eta_As, sys_.eta_A, Esd, p.vp_tail),
        ("eq:basics", Es0, sys_.tau_A, sys_.tau_As, E0, p.vp_head),
        ("eq:basicsds", Es0, sys_.eta_A, sys_.tau_As, Ed, p.ph_head),
        ("eq:basicsDs", Esd, sys_.tau_A, sys_.eta_As, E0, p.ph_tail),
        ("eq:basicdDs", Esd, sys_.eta_A, sys_.eta_As, Ed, p.vp_tail),
    )
    out = []
    for label, L, f, g, R, coeff in rules:
        LR = L @ R
        for i in range(d + 1):
            Lf = L @ f(i)
            for j in range(d + 1):
                lhs = Lf @ g(j) @ R
                rhs = LR.scale(coeff(i)) if i == j else zero
                out.append(IdentityReport(label, (i, j), lhs, rhs))
    return out


def verify_simplify_rules(sys_: LeonardSystem) -> List[IdentityReport]:
    d = sys_.d
    E, Es = sys_.E, sys_.Estar
    E0, Ed, Es0, Esd = E[0], E[d], Es[0], Es[d]
    p = _Products(sys_)
    varphi, phi = p.vp_head(d), p.ph_head(d)
    tau_dd = sys_.tau(d, sys_.theta[d])
    eta_d0 = sys_.eta(d, sys_.theta[0])
    taus_dd = sys_.tau_s(d, sys_.theta_star[d])
    etas_d0 = sys_.eta_s(d, sys_.theta_star[0])
    out = []
    for r in range(d + 1):
        Er, Esr = E[r], Es[r]
        down = p.ph_tail(r) / p.vp_head(r)
        flat = p.ph_head(r) / p.vp_head(r)
        rules = (
            ("eq:Es0EdEsdEr", Es0 @ Ed @ Esd @ Er, varphi / (tau_dd * taus_dd) * down, Es0 @ Er),
            ("eq:Es0E0EsdEr", Es0 @ E0 @ Esd @ Er, varphi / (eta_d0 * taus_dd) * down, Es0 @ Er),
            ("eq:EsdEdEs0Er", Esd @ Ed @ Es0 @ Er, phi / (tau_dd * etas_d0) / down, Esd @ Er),
            ("eq:EsdE0Es0Er", Esd @ E0 @ Es0 @ Er, phi / (eta_d0 * etas_d0) / down, Esd @ Er),
            ("eq:E0EsdEdEsr", E0 @ Esd @ Ed @ Esr, varphi / (tau_dd * taus_dd) * flat, E0 @ Esr),
            ("eq:E0Es0EdEsr", E0 @ Es0 @ Ed @ Esr, varphi / (tau_dd * etas_d0) * flat, E0 @ Esr),
            ("eq:EdEsdE0Esr", Ed @ Esd @ E0 @ Esr, phi / (eta_d0 * taus_dd) / flat, Ed @ Esr),
            ("eq:EdEs0E0Esr", Ed @ Es0 @ E0 @ Esr, phi / (eta_d0 * etas_d0) / flat, Ed @ Esr),
        )
        for label, lhs, c, short in rules:
            out.append(IdentityReport(label, (r,), lhs, short.scale(c)))
    return out


def verify_s_identities(sys_: LeonardSystem) -> List[IdentityReport]:
    """The identities for S used in the simplification proof."""
    d = sys_.d
    E, Es = sys_.E, sys_.Estar
    Ed, Es0, Esd = E[d], Es[0], Es[d]
    p = _Products(sys_)
    S = s_element(sys_)
    c = sys_.tau(d, sys_.theta[d]) * sys_.tau_s(d, sys_.theta_star[d]) / p.vp_head(d)
    out = [IdentityReport("eq:simplifyaux1", (), S @ Es0, (Esd @ Ed @ Es0).scale(c))]
    for r in range(d + 1):
        out.append(IdentityReport("eq:simplifyaux3", (r,), Es0 @ S @ E[r],
                                  (Es0 @ Ed @ Esd @ E[r]).scale(c)))
    for r in range(d + 1):
        out.append(IdentityReport("eq:simplifyaux4", (r,), S @ E[r],
                                  E[r].scale(p.ph_tail(r) / p.vp_head(r))))
    return out


def verify_mu_identity(sys_: LeonardSystem) -> List[IdentityReport]:
    """E*_d E_0 tau*_r(A*) = (varphi_1 ... varphi_r)/eta_d(theta_0) E*_d eta_{d-r}(A)."""
    d = sys_.d
    Esd, E0 = sys_.Estar[d], sys_.E[0]
    p = _Products(sys_)
    eta_d0 = sys_.eta(d, sys_.theta[0])
    left = Esd @ E0
    return [IdentityReport("eq:mu", (r,), left @ sys_.tau_As(r),
                           (Esd @ sys_.eta_A(d - r)).scale(p.vp_head(r) / eta_d0))
            for r in range(d + 1)]


def verify_all_identities(sys_: LeonardSystem) -> List[IdentityReport]:
    return (verify_reduction_rules(sys_) + verify_simplify_rules(sys_)
            + verify_s_identities(sys_) + verify_mu_identity(sys_))

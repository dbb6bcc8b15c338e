"""The antiautomorphism fixing A and A*, its bilinear form, anchor vectors,
and the scalar identities for traces and inner products.

The antiautomorphism is realized as ``X -> G^{-1} X^T G`` where ``G`` is the
Gram matrix of the associated form: the unique (up to scale) solution of
``A^T G = G A`` and ``A*^T G = G A*``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import List, Optional

from .leonard import Check, LeonardSystem, LeonardSystemError
from .matrix import Matrix, Vector, inverse, nullspace

__all__ = ["GramForm", "AnchorVectors", "compute_gram", "gram_solution_space", "dagger",
           "inner", "anchor_vectors", "verify_scalar_lemmas", "probe_trace_reading"]


@dataclass(frozen=True)
class GramForm:
    G: Matrix
    Ginv: Matrix

    def rescaled(self, c) -> "GramForm":
        c = self.G.field(c)
        return GramForm(self.G.scale(c), self.Ginv.scale(1 / c))


@dataclass(frozen=True)
class AnchorVectors:
    xi0: Vector
    xid: Vector
    xis0: Vector
    xisd: Vector

    def rescaled(self, c0, cd, cs0, csd) -> "AnchorVectors":
        return AnchorVectors(self.xi0.scale(c0), self.xid.scale(cd),
                             self.xis0.scale(cs0), self.xisd.scale(csd))

    def as_dict(self):
        return {"xi0": self.xi0, "xid": self.xid, "xis0": self.xis0, "xisd": self.xisd}


def gram_solution_space(sys_: LeonardSystem) -> List[Matrix]:
    """Basis of {G : A^T G = G A, A*^T G = G A*} as matrices."""
    n = sys_.d + 1
    f = sys_.field
    rows = []
    for X in (sys_.A, sys_.Astar):
        # (X^T G - G X)_{ij} = sum_k X_{ki} G_{kj} - sum_k G_{ik} X_{kj}
        for i in range(n):
            for j in range(n):
                row = [f.zero] * (n * n)
                for k in range(n):
                    row[k * n + j] += X.rows[k][i]
                    row[i * n + k] -= X.rows[k][j]
                rows.append(row)
    basis = nullspace(Matrix(rows, f))
    return [Matrix([v.entries[i * n:(i + 1) * n] for i in range(n)], f) for v in basis]


def compute_gram(sys_: LeonardSystem) -> GramForm:
    """The Gram matrix, normalized so its first nonzero entry (row-major) is 1."""
    space = gram_solution_space(sys_)
    if len(space) != 1:
        raise LeonardSystemError(
            f"commutation systems have a {len(space)}-dimensional solution space, expected 1")
    G = space[0]
    lead = next(x for r in G.rows for x in r if x)
    G = G.scale(1 / lead)
    return GramForm(G, inverse(G))


def dagger(g: GramForm, X: Matrix) -> Matrix:
    return g.Ginv @ X.T @ g.G


def inner(g: GramForm, u: Vector, v: Vector):
    return u.dot(g.G @ v)


def _project(E: Matrix, seed: Optional[Vector]) -> Vector:
    if seed is not None:
        v = E @ seed
        if v.is_zero():
            raise LeonardSystemError("anchor seed is annihilated by an idempotent")
        return v
    n = E.nrows
    for k in range(n):
        v = E.column(k)  # E e_k
        if not v.is_zero():
            return v
    raise LeonardSystemError("zero idempotent")


def anchor_vectors(sys_: LeonardSystem, seed: Optional[Vector] = None) -> AnchorVectors:
    """xi_0 = E_0 s, xi_d = E_d s, xi*_0 = E*_0 s, xi*_d = E*_d s.

    Without a seed, each anchor uses the first standard basis vector not
    killed by the corresponding idempotent.
    """
    d = sys_.d
    return AnchorVectors(_project(sys_.E[0], seed), _project(sys_.E[d], seed),
                         _project(sys_.Estar[0], seed), _project(sys_.Estar[d], seed))


def _uniform_trace_numerator(vp, ph, r, d):
    return prod(vp[:r]) * prod(ph[h - 1] for h in range(r + 1, d + 1))


def _literal_trace_numerator(vp, ph, r, d):
    # phi_d varphi_{d-1} ... varphi_{r+2} phi_{r+1}: phi at both ends
    idx = list(range(d, r, -1))
    factors = []
    for pos, h in enumerate(idx):
        end = pos == 0 or pos == len(idx) - 1
        factors.append(ph[h - 1] if end else vp[h - 1])
    return prod(vp[:r]) * prod(factors)


def probe_trace_reading(sys_: LeonardSystem) -> dict:
    """Compare both readings of the tr(E*_r E_0) closed form with the trace.

    Returns ``{"uniform": [bool per r], "literal": [...], "adopted": name or None}``.
    The uniform reading has phi_d phi_{d-1} ... phi_{r+1} in the numerator;
    the literal one has varphi in the interior positions.
    """
    pa = sys_.parameter_array
    vp, ph, d = pa.varphi, pa.phi, sys_.d
    one = sys_.field.one
    out = {}
    for name, numer in (("uniform", _uniform_trace_numerator), ("literal", _literal_trace_numerator)):
        res = []
        for r in range(d + 1):
            direct = (sys_.Estar[r] @ sys_.E[0]).trace()
            den = (sys_.eta(d, sys_.theta[0]) * sys_.tau_s(r, sys_.theta_star[r])
                   * sys_.eta_s(d - r, sys_.theta_star[r]))
            res.append(direct == one * numer(vp, ph, r, d) / den)
        out[name] = res
    out["adopted"] = next((k for k in ("uniform", "literal") if all(out[k])), None)
    return out


def verify_scalar_lemmas(sys_: LeonardSystem, g: GramForm, anchors: AnchorVectors,
                         S: Optional[Matrix] = None) -> List[Check]:
    """Exact checks of the trace, inner-product and anchor identities."""
    from .identities import s_element

    checks: List[Check] = []

    def check(name, ok, detail=""):
        checks.append(Check(name, bool(ok), detail))

    d = sys_.d
    f = sys_.field
    E, Es = sys_.E, sys_.Estar
    E0, Ed, Es0, Esd = E[0], E[d], Es[0], Es[d]
    pa = sys_.parameter_array
    vp, ph = pa.varphi, pa.phi
    one = f.one
    varphi = prod(vp, start=one)
    phi = prod(ph, start=one)
    tau_dd = sys_.tau(d, sys_.theta[d])
    eta_d0 = sys_.eta(d, sys_.theta[0])
    taus_dd = sys_.tau_s(d, sys_.theta_star[d])
    etas_d0 = sys_.eta_s(d, sys_.theta_star[0])

    def tr(X, Y):
        return (X @ Y).trace()

    # antiautomorphism and form
    G = g.G
    check("gram:symmetric", G == G.T)
    check("gram:A-selfadjoint", sys_.A.T @ G == G @ sys_.A)
    check("gram:A*-selfadjoint", sys_.Astar.T @ G == G @ sys_.Astar)
    for i in range(d + 1):
        check(f"dagger:E[{i}]", dagger(g, E[i]) == E[i])
        check(f"dagger:E*[{i}]", dagger(g, Es[i]) == Es[i])

    # E_r E*_0 E_r = tr(E_r E*_0) E_r and relatives
    for r in range(d + 1):
        Er, Esr = E[r], Es[r]
        t_r0, t_rd = tr(Er, Es0), tr(Er, Esd)
        ts_r0, ts_rd = tr(Esr, E0), tr(Esr, Ed)
        check(f"eq:ErEs0Er:left[r={r}]", Er @ Es0 @ Er == Er.scale(t_r0))
        check(f"eq:ErEs0Er:right[r={r}]", Er @ Esd @ Er == Er.scale(t_rd))
        check(f"eq:EsrE0Esr:left[r={r}]", Esr @ E0 @ Esr == Esr.scale(ts_r0))
        check(f"eq:EsrE0Esr:right[r={r}]", Esr @ Ed @ Esr == Esr.scale(ts_rd))
        check(f"eq:EsdErEsd:left[r={r}]", Es0 @ Er @ Es0 == Es0.scale(t_r0))
        check(f"eq:EsdErEsd:right[r={r}]", Esd @ Er @ Esd == Esd.scale(t_rd))
        check(f"eq:E0EsrE0:left[r={r}]", E0 @ Esr @ E0 == E0.scale(ts_r0))
        check(f"eq:E0EsrE0:right[r={r}]", Ed @ Esr @ Ed == Ed.scale(ts_rd))

        # closed-form traces
        th_r, ths_r = sys_.theta[r], sys_.theta_star[r]
        den_a = sys_.tau(r, th_r) * sys_.eta(d - r, th_r)
        den_s = sys_.tau_s(r, ths_r) * sys_.eta_s(d - r, ths_r)
        vp_1r = prod(vp[:r], start=one)
        ph_1r = prod(ph[:r], start=one)
        ph_dr = prod(ph[d - r:], start=one)          # phi_d ... phi_{d-r+1}
        vp_dr1 = prod(vp[r:], start=one)             # varphi_d ... varphi_{r+1}
        ph_1dr = prod(ph[:d - r], start=one)         # phi_1 ... phi_{d-r}
        check(f"eq:trErEs0[r={r}]", t_r0 == vp_1r * ph_1dr / (etas_d0 * den_a))
        check(f"eq:trErEsd[r={r}]", t_rd == ph_dr * vp_dr1 / (taus_dd * den_a))
        check(f"eq:trEsrEd[r={r}]", ts_rd == ph_1r * vp_dr1 / (tau_dd * den_s))
        for name, val in (("trErEs0", t_r0), ("trErEsd", t_rd), ("trEsrE0", ts_r0), ("trEsrEd", ts_rd)):
            check(f"nonzero:{name}[r={r}]", val)

    probe = probe_trace_reading(sys_)
    detail = (f"uniform reading matches for r={[r for r, ok in enumerate(probe['uniform']) if ok]}; "
              f"literal reading matches for r={[r for r, ok in enumerate(probe['literal']) if ok]}; "
              f"adopted: {probe['adopted']}")
    check("eq:trEsrE0", probe["adopted"] is not None, detail)

    check("eq:trE0Es0:left", tr(E0, Es0) == phi / (eta_d0 * etas_d0))
    check("eq:trE0Es0:right", tr(E0, Esd) == varphi / (eta_d0 * taus_dd))
    check("eq:trEdEs0:left", tr(Ed, Es0) == varphi / (tau_dd * etas_d0))
    check("eq:trEdEs0:right", tr(Ed, Esd) == phi / (tau_dd * taus_dd))

    # inner products of the anchors
    x0, xd, xs0, xsd = anchors.xi0, anchors.xid, anchors.xis0, anchors.xisd
    check("anchor:xi0", E0 @ x0 == x0 and not x0.is_zero())
    check("anchor:xid", Ed @ xd == xd and not xd.is_zero())
    check("anchor:xis0", Es0 @ xs0 == xs0 and not xs0.is_zero())
    check("anchor:xisd", Esd @ xsd == xsd and not xsd.is_zero())
    ip = {}
    for a, u in (("x0", x0), ("xd", xd), ("xs0", xs0), ("xsd", xsd)):
        for b, v in (("x0", x0), ("xd", xd), ("xs0", xs0), ("xsd", xsd)):
            ip[a, b] = inner(g, u, v)
    for key in (("x0", "xs0"), ("x0", "xsd"), ("xd", "xs0"), ("xd", "xsd"),
                ("x0", "x0"), ("xd", "xd"), ("xs0", "xs0"), ("xsd", "xsd")):
        check(f"nonzero:<{key[0]},{key[1]}>", ip[key])
    if not all(ip[k] for k in ip if k[0] == k[1]) or not all(
            ip[a, b] for a in ("x0", "xd") for b in ("xs0", "xsd")):
        return checks

    check("eq:vs0:left", E0 @ xs0 == x0.scale(ip["x0", "xs0"] / ip["x0", "x0"]))
    check("eq:vs0:right", Ed @ xs0 == xd.scale(ip["xd", "xs0"] / ip["xd", "xd"]))
    check("eq:vsd:left", E0 @ xsd == x0.scale(ip["x0", "xsd"] / ip["x0", "x0"]))
    check("eq:vsd:right", Ed @ xsd == xd.scale(ip["xd", "xsd"] / ip["xd", "xd"]))
    check("eq:v0:left", Es0 @ x0 == xs0.scale(ip["x0", "xs0"] / ip["xs0", "xs0"]))
    check("eq:v0:right", Esd @ x0 == xsd.scale(ip["x0", "xsd"] / ip["xsd", "xsd"]))
    check("eq:vd:left", Es0 @ xd == xs0.scale(ip["xd", "xs0"] / ip["xs0", "xs0"]))
    check("eq:vd:right", Esd @ xd == xsd.scale(ip["xd", "xsd"] / ip["xsd", "xsd"]))

    check("eq:00s", ip["x0", "xs0"] ** 2 == tr(E0, Es0) * ip["x0", "x0"] * ip["xs0", "xs0"])
    check("eq:0ds", ip["x0", "xsd"] ** 2 == tr(E0, Esd) * ip["x0", "x0"] * ip["xsd", "xsd"])
    check("eq:d0s", ip["xd", "xs0"] ** 2 == tr(Ed, Es0) * ip["xd", "xd"] * ip["xs0", "xs0"])
    check("eq:dds", ip["xd", "xsd"] ** 2 == tr(Ed, Esd) * ip["xd", "xd"] * ip["xsd", "xsd"])

    check("eq:newrel", ip["x0", "xs0"] / ip["x0", "xsd"]
          == phi / varphi * ip["xd", "xs0"] / ip["xd", "xsd"])

    # facts about S used for the ratio relation
    if S is None:
        S = s_element(sys_)
    check("S:xi0", S @ x0 == x0)
    check("S:xid", S @ xd == xd.scale(phi / varphi))
    Sxs0 = S @ xs0
    check("S:xis0-in-E*_dV", Esd @ Sxs0 == Sxs0 and not Sxs0.is_zero())
    return checks

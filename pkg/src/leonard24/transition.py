"""The 24 bases and the transition maps between them.

Every displayed transition formula is stored as a one-line template in
:data:`TEMPLATE_TABLE`.  A template is selected by the source basis (its
family and anchor), the target anchor, and nothing else: the target family
and orientation only decide which sequence ``X`` is plugged in, and a
reversed source replaces ``X_r`` by ``X_{d-r}``.

Template syntax, one display per line::

    group target | global scalar | per-r coefficient | word

Scalars are written ``num ... / den ...`` (``1`` for the empty product).
The matrix for a pair is ``scalar * sum_r coeff(r) * X_r * word(r)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field, replace
from functools import cached_property
from math import prod
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .dagger import AnchorVectors, GramForm, inner
from .leonard import LeonardSystem
from .matrix import Matrix, Vector, inverse, is_basis

__all__ = ["BasisTag", "BasisSet", "ALL_TAGS", "Template", "TEMPLATES", "TEMPLATE_TABLE",
           "TransitionFormula", "TransitionContext", "PairResult", "TransitionReport",
           "ZeroDenominatorError", "enumerate_bases", "formula", "evaluate",
           "oracle_change_of_basis", "verify_all", "composition_coherence", "identity_coherence",
           "rescaled_inputs", "Mutation", "MUTATIONS", "mutation_failures", "relabel_tag",
           "relative_coherence"]

FAMILIES = ("E", "Es", "tauA", "etaA", "tauAs", "etaAs")
A_SIDE = ("E", "tauA", "etaA")
ORIENTATIONS = ("fwd", "rev")
ANCHORS = {"A": ("xis0", "xisd"), "Astar": ("xi0", "xid")}

# human-readable names of the basis vectors, fwd index i
_FAMILY_TEX = {"E": "E_{k}", "Es": "E*_{k}", "tauA": "tau_{k}(A)", "etaA": "eta_{k}(A)",
               "tauAs": "tau*_{k}(A*)", "etaAs": "eta*_{k}(A*)"}
_ANCHOR_TEX = {"xi0": "xi_0", "xid": "xi_d", "xis0": "xi*_0", "xisd": "xi*_d"}
_X_NAME = {"E": "E", "Es": "E*", "tauA": "tau(A)", "etaA": "eta(A)", "tauAs": "tau*(A*)",
           "etaAs": "eta*(A*)"}


class ZeroDenominatorError(ArithmeticError):
    """A trace or inner product in a denominator vanished: the input is not a Leonard system."""


@dataclass(frozen=True, order=True)
class BasisTag:
    family: str
    orientation: str
    anchor: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if self.anchor not in ANCHORS[self.side]:
            raise ValueError(f"anchor {self.anchor!r} is not legal for family {self.family!r}")

    @classmethod
    def parse(cls, text: str) -> "BasisTag":
        parts = text.strip().split(".")
        if len(parts) != 3:
            raise ValueError(f"malformed basis tag {text!r}; expected family.orientation.anchor")
        return cls(*parts)

    @property
    def side(self) -> str:
        return "A" if self.family in A_SIDE else "Astar"

    @property
    def reversed(self) -> bool:
        return self.orientation == "rev"

    @property
    def name(self) -> str:
        return f"{self.family}.{self.orientation}.{self.anchor}"

    def describe(self) -> str:
        k = "d-i" if self.reversed else "i"
        return "{" + _FAMILY_TEX[self.family].format(k=k) + " " + _ANCHOR_TEX[self.anchor] + "}"

    def __str__(self):
        return self.name


ALL_TAGS: Tuple[BasisTag, ...] = tuple(
    BasisTag(f, o, a) for f in FAMILIES for o in ORIENTATIONS
    for a in ANCHORS["A" if f in A_SIDE else "Astar"])


@dataclass(frozen=True)
class BasisSet:
    tag: BasisTag
    vectors: Tuple[Vector, ...]

    @cached_property
    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.vectors)


class _XFamilies:
    """The six matrix sequences X_0..X_d, computed once per system."""

    def __init__(self, sys_: LeonardSystem):
        d = sys_.d
        self.d = d
        self.mats = {
            "E": list(sys_.E),
            "Es": list(sys_.Estar),
            "tauA": [sys_.tau_A(i) for i in range(d + 1)],
            "etaA": [sys_.eta_A(i) for i in range(d + 1)],
            "tauAs": [sys_.tau_As(i) for i in range(d + 1)],
            "etaAs": [sys_.eta_As(i) for i in range(d + 1)],
        }

    def seq(self, family: str, reversed_: bool) -> List[Matrix]:
        m = self.mats[family]
        return m[::-1] if reversed_ else m


def _anchor(anchors: AnchorVectors, name: str) -> Vector:
    return getattr(anchors, name)


def enumerate_bases(sys_: LeonardSystem, anchors: AnchorVectors,
                    xf: Optional[_XFamilies] = None) -> Dict[BasisTag, BasisSet]:
    """All 24 bases.  Raises ``ArithmeticError`` if any fails to be a basis."""
    xf = xf or _XFamilies(sys_)
    out = {}
    for tag in ALL_TAGS:
        if tag.reversed:
            fwd = out[BasisTag(tag.family, "fwd", tag.anchor)]
            vecs = fwd.vectors[::-1]
        else:
            v = _anchor(anchors, tag.anchor)
            vecs = tuple(X @ v for X in xf.seq(tag.family, False))
            if not is_basis(list(vecs)):
                raise ArithmeticError(f"{tag.name} is not a basis")
        out[tag] = BasisSet(tag, tuple(vecs))
    return out


# ---------------------------------------------------------------------------
# template table

# group -> (source family, source anchor, theorem label, name of reversed group)
GROUPS = {
    "Eivs0": ("E", "xis0", "thm:Eivs0", "Ed-ivs0"),
    "Eivsd": ("E", "xisd", "thm:Eivsd", "Ed-ivsd"),
    "Esiv0": ("Es", "xi0", "thm:Esiv0", "Esd-iv0"),
    "Esivd": ("Es", "xid", "thm:Esivd", "Esd-ivd"),
    "tauiAvs0": ("tauA", "xis0", "thm:1", "taud-iAvs0"),
    "etaiAvs0": ("etaA", "xis0", "thm:D", "etad-iAvs0"),
    "tauiAvsd": ("tauA", "xisd", "thm:d", "taud-iAvsd"),
    "etaiAvsd": ("etaA", "xisd", "thm:dD", "etad-iAvsd"),
    "tausiAsv0": ("tauAs", "xi0", "thm:s", "tausd-iAsv0"),
    "etasiAsv0": ("etaAs", "xi0", "thm:Ds", "etasd-iAsv0"),
    "tausiAsvd": ("tauAs", "xid", "thm:ds", "tausd-iAsvd"),
    "etasiAsvd": ("etaAs", "xid", "thm:dDs", "etasd-iAsvd"),
}
_GROUP_OF = {(fam, anc): g for g, (fam, anc, _, _) in GROUPS.items()}
_TARGET_SUFFIX = {"xis0": "Xivs0", "xisd": "Xivsd", "xi0": "Xiv0", "xid": "Xivd"}

TEMPLATE_TABLE = """
Eivs0 xis0 | 1 | 1 / tr(ErE*0) | E*0 Er
Eivs0 xisd | tau*_d(th*_d) <xid,xisd> / phi <xid,xis0> | tau_r(th_r)eta_d-r(th_r) | E*d Er
Eivs0 xi0  | <xi0,xi0> / <xi0,xis0> | 1 / tr(ErE*0) | E0 E*0 Er
Eivs0 xid  | <xid,xid> / <xid,xis0> | 1 / tr(ErE*0) | Ed E*0 Er
Eivsd xis0 | eta*_d(th*_0) <xid,xis0> / varphi <xid,xisd> | tau_r(th_r)eta_d-r(th_r) | E*0 Er
Eivsd xisd | 1 | 1 / tr(ErE*d) | E*d Er
Eivsd xi0  | <xi0,xi0> / <xi0,xisd> | 1 / tr(ErE*d) | E0 E*d Er
Eivsd xid  | <xid,xid> / <xid,xisd> | 1 / tr(ErE*d) | Ed E*d Er
Esiv0 xis0 | <xis0,xis0> / <xi0,xis0> | 1 / tr(E*rE0) | E*0 E0 E*r
Esiv0 xisd | <xisd,xisd> / <xi0,xisd> | 1 / tr(E*rE0) | E*d E0 E*r
Esiv0 xi0  | 1 | 1 / tr(E*rE0) | E0 E*r
Esiv0 xid  | tau_d(th_d) <xid,xisd> / phi <xi0,xisd> | tau*_r(th*_r)eta*_d-r(th*_r) | Ed E*r
Esivd xis0 | <xis0,xis0> / <xid,xis0> | 1 / tr(E*rEd) | E*0 Ed E*r
Esivd xisd | <xisd,xisd> / <xid,xisd> | 1 / tr(E*rEd) | E*d Ed E*r
Esivd xi0  | eta_d(th_0) <xi0,xisd> / varphi <xid,xisd> | tau*_r(th*_r)eta*_d-r(th*_r) | E0 E*r
Esivd xid  | 1 | 1 / tr(E*rEd) | Ed E*r
tauiAvs0 xis0 | 1 / tr(E0E*0) | 1 / varphi_1..r | E*0 E0 tau*_r(A*)
tauiAvs0 xisd | tau*_d(th*_d) <xi0,xisd> / varphi <xi0,xis0> | 1 | E*d eta_d-r(A)
tauiAvs0 xi0  | <xi0,xi0> / <xi0,xis0> | 1 / varphi_1..r | E0 tau*_r(A*)
tauiAvs0 xid  | tau*_d(th*_d) <xid,xid> / phi <xid,xis0> | 1 | Ed E*d eta_d-r(A)
etaiAvs0 xis0 | 1 / tr(EdE*0) | 1 / phi_1..r | E*0 Ed tau*_r(A*)
etaiAvs0 xisd | tau*_d(th*_d) <xid,xisd> / phi <xid,xis0> | 1 | E*d tau_d-r(A)
etaiAvs0 xi0  | tau*_d(th*_d) <xi0,xi0> / varphi <xi0,xis0> | 1 | E0 E*d tau_d-r(A)
etaiAvs0 xid  | <xid,xid> / <xid,xis0> | 1 / phi_1..r | Ed tau*_r(A*)
tauiAvsd xis0 | eta*_d(th*_0) <xi0,xis0> / phi <xi0,xisd> | 1 | E*0 eta_d-r(A)
tauiAvsd xisd | 1 / tr(E0E*d) | 1 / phi_d..d-r+1 | E*d E0 eta*_r(A*)
tauiAvsd xi0  | <xi0,xi0> / <xi0,xisd> | 1 / phi_d..d-r+1 | E0 eta*_r(A*)
tauiAvsd xid  | eta*_d(th*_0) <xid,xid> / varphi <xid,xisd> | 1 | Ed E*0 eta_d-r(A)
etaiAvsd xis0 | eta*_d(th*_0) <xid,xis0> / varphi <xid,xisd> | 1 | E*0 tau_d-r(A)
etaiAvsd xisd | 1 / tr(EdE*d) | 1 / varphi_d..d-r+1 | E*d Ed eta*_r(A*)
etaiAvsd xi0  | eta*_d(th*_0) <xi0,xi0> / phi <xi0,xisd> | 1 | E0 E*0 tau_d-r(A)
etaiAvsd xid  | <xid,xid> / <xid,xisd> | 1 / varphi_d..d-r+1 | Ed eta*_r(A*)
tausiAsv0 xis0 | <xis0,xis0> / <xi0,xis0> | 1 / varphi_1..r | E*0 tau_r(A)
tausiAsv0 xisd | tau_d(th_d) <xisd,xisd> / phi <xi0,xisd> | 1 | E*d Ed eta*_d-r(A*)
tausiAsv0 xi0  | 1 / tr(E0E*0) | 1 / varphi_1..r | E0 E*0 tau_r(A)
tausiAsv0 xid  | tau_d(th_d) <xid,xis0> / varphi <xi0,xis0> | 1 | Ed eta*_d-r(A*)
etasiAsv0 xis0 | tau_d(th_d) <xis0,xis0> / varphi <xi0,xis0> | 1 | E*0 Ed tau*_d-r(A*)
etasiAsv0 xisd | <xisd,xisd> / <xi0,xisd> | 1 / phi_d..d-r+1 | E*d tau_r(A)
etasiAsv0 xi0  | 1 / tr(E0E*d) | 1 / phi_d..d-r+1 | E0 E*d tau_r(A)
etasiAsv0 xid  | tau_d(th_d) <xid,xisd> / phi <xi0,xisd> | 1 | Ed tau*_d-r(A*)
tausiAsvd xis0 | <xis0,xis0> / <xid,xis0> | 1 / phi_1..r | E*0 eta_r(A)
tausiAsvd xisd | eta_d(th_0) <xisd,xisd> / varphi <xid,xisd> | 1 | E*d E0 eta*_d-r(A*)
tausiAsvd xi0  | eta_d(th_0) <xi0,xis0> / phi <xid,xis0> | 1 | E0 eta*_d-r(A*)
tausiAsvd xid  | 1 / tr(EdE*0) | 1 / phi_1..r | Ed E*0 eta_r(A)
etasiAsvd xis0 | eta_d(th_0) <xis0,xis0> / phi <xid,xis0> | 1 | E*0 E0 tau*_d-r(A*)
etasiAsvd xisd | <xisd,xisd> / <xid,xisd> | 1 / varphi_d..d-r+1 | E*d eta_r(A)
etasiAsvd xi0  | eta_d(th_0) <xi0,xisd> / varphi <xid,xisd> | 1 | E0 tau*_d-r(A*)
etasiAsvd xid  | 1 / tr(EdE*d) | 1 / varphi_d..d-r+1 | Ed E*d eta_r(A)
"""


def _split_fraction(text: str) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    num, _, den = text.partition("/")
    clean = lambda s: tuple(t for t in s.split() if t != "1")  # noqa: E731
    return clean(num), clean(den)


@dataclass(frozen=True)
class Template:
    """One displayed equation, parameterized by the X sequence."""

    group: str
    target_anchor: str
    scalar_num: Tuple[str, ...]
    scalar_den: Tuple[str, ...]
    coeff_num: Tuple[str, ...]
    coeff_den: Tuple[str, ...]
    word: Tuple[str, ...]
    sign: int = 1

    @classmethod
    def parse(cls, line: str) -> "Template":
        head, scalar, coeff, word = (p.strip() for p in line.split("|"))
        group, target = head.split()
        sn, sd = _split_fraction(scalar)
        cn, cd = _split_fraction(coeff)
        return cls(group, target, sn, sd, cn, cd, tuple(word.split()))

    @property
    def key(self) -> Tuple[str, str]:
        return (self.group, self.target_anchor)

    def label(self, source_reversed: bool = False) -> str:
        src = GROUPS[self.group][3] if source_reversed else self.group
        return f"eq:{src}to{_TARGET_SUFFIX[self.target_anchor]}"

    @property
    def theorem(self) -> str:
        return GROUPS[self.group][2]

    def render(self) -> str:
        def frac(n, dn):
            n = " ".join(n) or "1"
            return n + (" / " + " ".join(dn) if dn else "")
        sign = "-" if self.sign < 0 else ""
        return (f"{self.group} {self.target_anchor} | {sign}{frac(self.scalar_num, self.scalar_den)}"
                f" | {frac(self.coeff_num, self.coeff_den)} | {' '.join(self.word)}")


TEMPLATES: Dict[Tuple[str, str], Template] = {
    t.key: t for t in (Template.parse(line) for line in TEMPLATE_TABLE.strip().splitlines())}


@dataclass(frozen=True)
class TransitionFormula:
    source: BasisTag
    target: BasisTag
    template: Template

    @property
    def label(self) -> str:
        return self.template.label(self.source.reversed)

    @property
    def x_name(self) -> str:
        name = _X_NAME[self.target.family]
        return name + ", reversed" if self.target.reversed else name

    @property
    def display(self) -> str:
        return f"{self.label} (X = {self.x_name})"

    def describe(self) -> str:
        t = self.template
        xr = "X_{d-r}" if self.source.reversed else "X_r"

        def frac(num, den):
            group = lambda toks: toks[0] if len(toks) == 1 else "(" + " ".join(toks) + ")"  # noqa: E731
            text = group(num) if num else "1"
            return text + " / " + group(den) if den else text

        scalar = frac(t.scalar_num, t.scalar_den)
        coeff = frac(t.coeff_num, t.coeff_den)
        sign = "-" if t.sign < 0 else ""
        return (f"{self.display} [{t.theorem}]\n"
                f"  T = {sign}{scalar} * sum_r {coeff} * {xr} {' '.join(t.word)}\n"
                f"  X_i = {_FAMILY_TEX[self.target.family].format(k='d-i' if self.target.reversed else 'i')}"
                f"; maps {self.source.describe()} to {self.target.describe()}")


def formula(source: BasisTag, target: BasisTag,
            templates: Optional[Dict[Tuple[str, str], Template]] = None) -> TransitionFormula:
    templates = TEMPLATES if templates is None else templates
    group = _GROUP_OF[(source.family, source.anchor)]
    return TransitionFormula(source, target, templates[(group, target.anchor)])


# ---------------------------------------------------------------------------
# evaluation

class TransitionContext:
    """Read-only data shared by every formula evaluation on one system."""

    def __init__(self, sys_: LeonardSystem, g: GramForm, anchors: AnchorVectors):
        self.sys = sys_
        self.g = g
        self.anchors = anchors
        self.d = d = sys_.d
        self.field = f = sys_.field
        self.xf = _XFamilies(sys_)
        self.bases = enumerate_bases(sys_, anchors, self.xf)
        self._word_cache: Dict[Tuple, List[Matrix]] = {}
        self._oracle_cache: Dict[Tuple[BasisTag, BasisTag], Matrix] = {}
        self._inv_cache: Dict[BasisTag, Matrix] = {}

        E, Es = sys_.E, sys_.Estar
        pa = sys_.parameter_array
        vp, ph = pa.varphi, pa.phi
        one = f.one
        th, ths = sys_.theta, sys_.theta_star

        def tr(X, Y):
            return (X @ Y).trace()

        self.scalars = {
            "tau_d(th_d)": sys_.tau(d, th[d]),
            "eta_d(th_0)": sys_.eta(d, th[0]),
            "tau*_d(th*_d)": sys_.tau_s(d, ths[d]),
            "eta*_d(th*_0)": sys_.eta_s(d, ths[0]),
            "varphi": prod(vp, start=one),
            "phi": prod(ph, start=one),
            "tr(E0E*0)": tr(E[0], Es[0]),
            "tr(E0E*d)": tr(E[0], Es[d]),
            "tr(EdE*0)": tr(E[d], Es[0]),
            "tr(EdE*d)": tr(E[d], Es[d]),
        }
        names = ("xi0", "xid", "xis0", "xisd")
        for a in names:
            for b in names:
                self.scalars[f"<{a},{b}>"] = inner(g, _anchor(anchors, a), _anchor(anchors, b))

        self.per_r = {
            "tr(ErE*0)": [tr(E[r], Es[0]) for r in range(d + 1)],
            "tr(ErE*d)": [tr(E[r], Es[d]) for r in range(d + 1)],
            "tr(E*rE0)": [tr(Es[r], E[0]) for r in range(d + 1)],
            "tr(E*rEd)": [tr(Es[r], E[d]) for r in range(d + 1)],
            "tau_r(th_r)eta_d-r(th_r)": [sys_.tau(r, th[r]) * sys_.eta(d - r, th[r])
                                         for r in range(d + 1)],
            "tau*_r(th*_r)eta*_d-r(th*_r)": [sys_.tau_s(r, ths[r]) * sys_.eta_s(d - r, ths[r])
                                             for r in range(d + 1)],
            "varphi_1..r": [prod(vp[:r], start=one) for r in range(d + 1)],
            "phi_1..r": [prod(ph[:r], start=one) for r in range(d + 1)],
            "varphi_d..d-r+1": [prod(vp[d - r:], start=one) for r in range(d + 1)],
            "phi_d..d-r+1": [prod(ph[d - r:], start=one) for r in range(d + 1)],
        }

        fixed = {"E0": E[0], "Ed": E[d], "E*0": Es[0], "E*d": Es[d]}
        m = self.xf.mats
        indexed = {"Er": m["E"], "E*r": m["Es"]}
        for fam, tok in (("tauA", "tau_{}(A)"), ("etaA", "eta_{}(A)"),
                         ("tauAs", "tau*_{}(A*)"), ("etaAs", "eta*_{}(A*)")):
            indexed[tok.format("r")] = m[fam]
            indexed[tok.format("d-r")] = m[fam][::-1]
        self._fixed, self._indexed = fixed, indexed

    def scalar(self, token: str, r: Optional[int] = None):
        if token in self.scalars:
            return self.scalars[token]
        if token in self.per_r:
            if r is None:
                raise KeyError(f"{token} needs an index")
            return self.per_r[token][r]
        raise KeyError(f"unknown scalar token {token!r}")

    def word_factor(self, token: str, r: int) -> Matrix:
        if token in self._fixed:
            return self._fixed[token]
        if token in self._indexed:
            return self._indexed[token][r]
        raise KeyError(f"unknown matrix token {token!r}")

    def _ratio(self, num, den, r=None, what=""):
        value = self.field.one
        for t in num:
            value = value * self.scalar(t, r)
        for t in den:
            x = self.scalar(t, r)
            if not x:
                raise ZeroDenominatorError(f"{t} vanishes{what}")
            value = value / x
        return value

    def terms(self, t: Template) -> List[Matrix]:
        """coeff(r) * word(r) for r = 0..d, cached per template."""
        key = (t.coeff_num, t.coeff_den, t.word)
        if key not in self._word_cache:
            out = []
            for r in range(self.d + 1):
                M = self.word_factor(t.word[0], r)
                for tok in t.word[1:]:
                    M = M @ self.word_factor(tok, r)
                out.append(M.scale(self._ratio(t.coeff_num, t.coeff_den, r, f" at r={r}")))
            self._word_cache[key] = out
        return self._word_cache[key]

    def evaluate(self, f: TransitionFormula) -> Matrix:
        t = f.template
        c = self._ratio(t.scalar_num, t.scalar_den, what=f" in {f.label}") * t.sign
        X = self.xf.seq(f.target.family, f.target.reversed)
        Ms = self.terms(t)
        d = self.d
        T = None
        for r, M in enumerate(Ms):
            term = X[d - r if f.source.reversed else r] @ M
            T = term if T is None else T + term
        return T.scale(c)

    def oracle(self, source: BasisTag, target: BasisTag) -> Matrix:
        key = (source, target)
        if key not in self._oracle_cache:
            if source not in self._inv_cache:
                self._inv_cache[source] = inverse(self.bases[source].matrix)
            self._oracle_cache[key] = self.bases[target].matrix @ self._inv_cache[source]
        return self._oracle_cache[key]


def evaluate(f: TransitionFormula, sys_: LeonardSystem, g: GramForm, anchors: AnchorVectors,
             ctx: Optional[TransitionContext] = None) -> Matrix:
    ctx = ctx or TransitionContext(sys_, g, anchors)
    return ctx.evaluate(f)


def oracle_change_of_basis(u: BasisSet, v: BasisSet) -> Matrix:
    """The unique T with T u_i = v_i, as V U^{-1}."""
    return v.matrix @ inverse(u.matrix)


@dataclass(frozen=True)
class PairResult:
    source: BasisTag
    target: BasisTag
    label: str
    passed: bool


@dataclass
class TransitionReport:
    results: List[PairResult] = dc_field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def matches(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def passed(self) -> bool:
        return self.matches == self.total

    @property
    def verdicts(self) -> Tuple[bool, ...]:
        return tuple(r.passed for r in self.results)

    def failures(self) -> List[PairResult]:
        return [r for r in self.results if not r.passed]


def _sorted_tags() -> List[BasisTag]:
    return sorted(ALL_TAGS, key=lambda t: t.name)


def verify_all(sys_: LeonardSystem, g: GramForm, anchors: AnchorVectors, *,
               templates: Optional[Dict[Tuple[str, str], Template]] = None,
               ctx: Optional[TransitionContext] = None,
               pairs: Optional[Iterable[Tuple[BasisTag, BasisTag]]] = None) -> TransitionReport:
    """Compare every formula with the change-of-basis oracle; pairs in tag-name order."""
    ctx = ctx or TransitionContext(sys_, g, anchors)
    if pairs is None:
        tags = _sorted_tags()
        pairs = [(u, v) for u in tags for v in tags]
    report = TransitionReport()
    for u, v in pairs:
        f = formula(u, v, templates)
        try:
            ok = ctx.evaluate(f) == ctx.oracle(u, v)
        except ZeroDenominatorError:
            ok = False
        report.results.append(PairResult(u, v, f.display, ok))
    return report


def identity_coherence(ctx: TransitionContext) -> Dict[BasisTag, bool]:
    I = Matrix.identity(ctx.d + 1, ctx.field)
    return {t: ctx.evaluate(formula(t, t)) == I for t in _sorted_tags()}


def composition_coherence(ctx: TransitionContext, n: int = 100, seed: int = 0
                          ) -> List[Tuple[BasisTag, BasisTag, BasisTag, bool]]:
    """T(u,w) = T(v,w) T(u,v) on ``n`` random triples of tags."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        u, v, w = (rng.choice(ALL_TAGS) for _ in range(3))
        lhs = ctx.evaluate(formula(u, w))
        rhs = ctx.evaluate(formula(v, w)) @ ctx.evaluate(formula(u, v))
        out.append((u, v, w, lhs == rhs))
    return out


def rescaled_inputs(g: GramForm, anchors: AnchorVectors, seed: int = 0,
                    ) -> Tuple[GramForm, AnchorVectors]:
    """Independent random nonzero rescalings of G and of each anchor."""
    rng = random.Random(seed)
    f = g.G.field

    def nonzero():
        while True:
            c = f(rng.randint(-50, 50))
            if c:
                if hasattr(f, "p"):
                    return c
                return c / rng.randint(1, 9)

    return g.rescaled(nonzero()), anchors.rescaled(nonzero(), nonzero(), nonzero(), nonzero())


# ---------------------------------------------------------------------------
# D4 relabeling

# generator -> (family map, orientation flip families, anchor map)
_RELABEL = {
    "star": ({"E": "Es", "Es": "E", "tauA": "tauAs", "tauAs": "tauA", "etaA": "etaAs",
              "etaAs": "etaA"}, (), {"xi0": "xis0", "xis0": "xi0", "xid": "xisd", "xisd": "xid"}),
    "down": ({"tauAs": "etaAs", "etaAs": "tauAs"}, ("Es",), {"xis0": "xisd", "xisd": "xis0"}),
    "ddown": ({"tauA": "etaA", "etaA": "tauA"}, ("E",), {"xi0": "xid", "xid": "xi0"}),
}


def _relabel_one(letter: str, tag: BasisTag) -> BasisTag:
    fam_map, flips, anc_map = _RELABEL[letter]
    orient = tag.orientation
    if tag.family in flips:
        orient = "rev" if orient == "fwd" else "fwd"
    return BasisTag(fam_map.get(tag.family, tag.family), orient, anc_map.get(tag.anchor, tag.anchor))


def relabel_tag(word: Sequence[str], tag: BasisTag) -> BasisTag:
    """The tag on Phi naming the same vectors as ``tag`` names on Phi^g."""
    for letter in reversed(tuple(word)):
        tag = _relabel_one(letter, tag)
    return tag


def relative_anchors(word: Sequence[str], anchors: AnchorVectors) -> AnchorVectors:
    """Anchors of Phi^g written in terms of the anchors of Phi."""
    a = anchors.as_dict()
    for letter in word:
        m = _RELABEL[letter][2]
        a = {k: a[m.get(k, k)] for k in a}
    return AnchorVectors(**a)


def relative_coherence(ctx: TransitionContext, g_word: Sequence[str],
                       pairs: Optional[Iterable[Tuple[BasisTag, BasisTag]]] = None) -> List[bool]:
    """Formulas evaluated on Phi^g agree with the relabeled formulas on Phi.

    This is the numerical form of deriving one theorem from another by the
    D4 action: e.g. the displays for sources {E_i xi*_0} on Phi^down are the
    displays for {E_i xi*_d} on Phi.
    """
    from .relatives import D4Element, apply

    rel = apply(D4Element.from_word(list(g_word)), ctx.sys)
    rctx = TransitionContext(rel, ctx.g, relative_anchors(g_word, ctx.anchors))
    if pairs is None:
        pairs = [(u, v) for u in ALL_TAGS for v in ALL_TAGS]
    out = []
    for u, v in pairs:
        lhs = rctx.evaluate(formula(u, v))
        rhs = ctx.evaluate(formula(relabel_tag(g_word, u), relabel_tag(g_word, v)))
        out.append(lhs == rhs)
    return out


# ---------------------------------------------------------------------------
# mutations

@dataclass(frozen=True)
class Mutation:
    name: str
    key: Tuple[str, str]
    apply: Callable[[Template], Template]


def _swap(field_name: str, old: str, new: str):
    def f(t: Template) -> Template:
        seq = getattr(t, field_name)
        if old not in seq:
            raise ValueError(f"{old} not in {field_name} of {t.key}")
        i = seq.index(old)
        return replace(t, **{field_name: seq[:i] + (new,) + seq[i + 1:]})
    return f


MUTATIONS: Tuple[Mutation, ...] = (
    Mutation("negate global scalar of eq:Eivs0toXivs0", ("Eivs0", "xis0"),
             lambda t: replace(t, sign=-t.sign)),
    Mutation("phi -> varphi in eq:Eivs0toXivsd", ("Eivs0", "xisd"),
             _swap("scalar_den", "phi", "varphi")),
    Mutation("tau*_d(th*_d) -> eta*_d(th*_0) in eq:tauiAvs0toXivsd", ("tauiAvs0", "xisd"),
             _swap("scalar_num", "tau*_d(th*_d)", "eta*_d(th*_0)")),
    Mutation("varphi_1..r -> phi_1..r in eq:tauiAvs0toXivs0", ("tauiAvs0", "xis0"),
             _swap("coeff_den", "varphi_1..r", "phi_1..r")),
    Mutation("phi_d..d-r+1 -> varphi_d..d-r+1 in eq:tauiAvsdtoXiv0", ("tauiAvsd", "xi0"),
             _swap("coeff_den", "phi_d..d-r+1", "varphi_d..d-r+1")),
    Mutation("tr(E*rE0) -> tr(E*rEd) in eq:Esiv0toXiv0", ("Esiv0", "xi0"),
             _swap("coeff_den", "tr(E*rE0)", "tr(E*rEd)")),
    Mutation("<xi0,xisd> -> <xi0,xis0> in eq:etasiAsvdtoXiv0", ("etasiAsvd", "xi0"),
             _swap("scalar_num", "<xi0,xisd>", "<xi0,xis0>")),
    Mutation("tr(EdE*0) -> tr(E0E*0) in eq:etaiAvs0toXivs0", ("etaiAvs0", "xis0"),
             _swap("scalar_den", "tr(EdE*0)", "tr(E0E*0)")),
    Mutation("E*0 -> E*d in the word of eq:Eivs0toXiv0", ("Eivs0", "xi0"),
             _swap("word", "E*0", "E*d")),
    Mutation("eta_d-r(A) -> tau_d-r(A) in eq:tauiAvs0toXivd", ("tauiAvs0", "xid"),
             _swap("word", "eta_d-r(A)", "tau_d-r(A)")),
)


def mutation_failures(ctx: TransitionContext, mutation: Mutation) -> int:
    """Number of pairs failing after applying ``mutation`` to the table."""
    templates = dict(TEMPLATES)
    templates[mutation.key] = mutation.apply(templates[mutation.key])
    group = mutation.key[0]
    fam, anc = GROUPS[group][:2]
    pairs = [(u, v) for u in ALL_TAGS if (u.family, u.anchor) == (fam, anc)
             for v in ALL_TAGS if v.anchor == mutation.key[1]]
    # the term cache is keyed by coefficient and word, so sharing ctx is safe
    return len(verify_all(ctx.sys, ctx.g, ctx.anchors, templates=templates, ctx=ctx,
                          pairs=pairs).failures())

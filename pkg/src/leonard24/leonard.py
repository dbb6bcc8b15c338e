"""Leonard systems: construction, validation, idempotents, split sequences."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm, prod
from typing import List, Optional, Sequence, Tuple

from .field import Field, PrimeField, RationalField
from .matrix import Matrix, charpoly, rank

__all__ = [
    "ParameterArrayError",
    "LeonardSystemError",
    "ParameterArray",
    "LeonardSystem",
    "Check",
    "ValidationReport",
    "primitive_idempotents",
    "eigenvalues",
    "validate_system",
    "split_form_matrices",
    "from_split_form",
    "split_sequences",
    "parameter_array",
    "MAX_SEARCH_D",
]

MAX_SEARCH_D = 6


class ParameterArrayError(ValueError):
    """A parameter array violates one of its invariants."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class LeonardSystemError(ValueError):
    def __init__(self, message: str, report: "ValidationReport | None" = None):
        super().__init__(message)
        self.report = report


def _distinct(seq) -> bool:
    return len(set(seq)) == len(seq)


@dataclass(frozen=True)
class ParameterArray:
    """(theta; theta_star; varphi; phi) of a Leonard system.

    ``varphi`` and ``phi`` are the first and second split sequences, stored
    0-based (``varphi[0]`` is varphi_1).  ``phi`` may be ``None`` when it is
    yet to be computed from a constructed system.
    """

    theta: Tuple
    theta_star: Tuple
    varphi: Tuple
    phi: Optional[Tuple]
    field: Field

    def __post_init__(self):
        f = self.field
        for name in ("theta", "theta_star", "varphi"):
            object.__setattr__(self, name, tuple(f(x) for x in getattr(self, name)))
        if self.phi is not None:
            object.__setattr__(self, "phi", tuple(f(x) for x in self.phi))
        d = len(self.theta) - 1
        if d < 0:
            raise ParameterArrayError("length", "theta must have at least one entry")
        if len(self.theta_star) != d + 1:
            raise ParameterArrayError("length", f"theta_star must have {d + 1} entries")
        if len(self.varphi) != d:
            raise ParameterArrayError("length", f"varphi must have {d} entries")
        if self.phi is not None and len(self.phi) != d:
            raise ParameterArrayError("length", f"phi must have {d} entries")
        if not _distinct(self.theta):
            raise ParameterArrayError("theta-distinct", "eigenvalues theta_i are not mutually distinct")
        if not _distinct(self.theta_star):
            raise ParameterArrayError("theta_star-distinct",
                                      "dual eigenvalues theta*_i are not mutually distinct")
        if any(not x for x in self.varphi):
            raise ParameterArrayError("varphi-nonzero", "some varphi_i is zero")
        if self.phi is not None and any(not x for x in self.phi):
            raise ParameterArrayError("phi-nonzero", "some phi_i is zero")

    @property
    def d(self) -> int:
        return len(self.theta) - 1

    @property
    def varphi_product(self):
        return prod(self.varphi, start=self.field.one)

    @property
    def phi_product(self):
        if self.phi is None:
            raise ValueError("second split sequence unknown")
        return prod(self.phi, start=self.field.one)

    def with_phi(self, phi) -> "ParameterArray":
        return ParameterArray(self.theta, self.theta_star, self.varphi, tuple(phi), self.field)

    def to_json(self) -> dict:
        fmt = self.field.format
        out = {
            "d": self.d,
            "field": self.field.to_json(),
            "theta": [fmt(x) for x in self.theta],
            "theta_star": [fmt(x) for x in self.theta_star],
            "varphi": [fmt(x) for x in self.varphi],
        }
        if self.phi is not None:
            out["phi"] = [fmt(x) for x in self.phi]
        return out


class LeonardSystem:
    """(A; E_0..E_d; A*; E*_0..E*_d) with its eigenvalue sequences.

    Polynomial matrices tau_i(A), eta_i(A), tau*_i(A*), eta*_i(A*) are built
    lazily and cached; the instance is otherwise immutable.
    """

    def __init__(self, A: Matrix, E: Sequence[Matrix], Astar: Matrix, Estar: Sequence[Matrix],
                 theta: Sequence, theta_star: Sequence):
        self.A = A
        self.Astar = Astar
        self.E = tuple(E)
        self.Estar = tuple(Estar)
        self.theta = tuple(theta)
        self.theta_star = tuple(theta_star)
        self.field = A.field
        self.d = A.nrows - 1
        self.I = Matrix.identity(self.d + 1, self.field)
        self._polys = {}
        self._pa = None

    # scalar polynomials tau_i, eta_i, tau*_i, eta*_i evaluated at x
    def tau(self, i: int, x):
        return prod((x - self.theta[h] for h in range(i)), start=self.field.one)

    def eta(self, i: int, x):
        return prod((x - self.theta[self.d - h] for h in range(i)), start=self.field.one)

    def tau_s(self, i: int, x):
        return prod((x - self.theta_star[h] for h in range(i)), start=self.field.one)

    def eta_s(self, i: int, x):
        return prod((x - self.theta_star[self.d - h] for h in range(i)), start=self.field.one)

    def _poly_family(self, key: str) -> List[Matrix]:
        fam = self._polys.get(key)
        if fam is None:
            X = self.A if key in ("tau", "eta") else self.Astar
            th = self.theta if key in ("tau", "eta") else self.theta_star
            roots = th if key in ("tau", "tau_s") else th[::-1]
            fam = [self.I]
            for h in range(self.d):
                fam.append(fam[-1] @ (X - self.I.scale(roots[h])))
            self._polys[key] = fam
        return fam

    def tau_A(self, i: int) -> Matrix:
        return self._poly_family("tau")[i]

    def eta_A(self, i: int) -> Matrix:
        return self._poly_family("eta")[i]

    def tau_As(self, i: int) -> Matrix:
        return self._poly_family("tau_s")[i]

    def eta_As(self, i: int) -> Matrix:
        return self._poly_family("eta_s")[i]

    @property
    def parameter_array(self) -> ParameterArray:
        if self._pa is None:
            self._pa = parameter_array(self)
        return self._pa

    def same_as(self, other: "LeonardSystem") -> bool:
        return (self.A == other.A and self.Astar == other.Astar and self.E == other.E
                and self.Estar == other.Estar and self.theta == other.theta
                and self.theta_star == other.theta_star)

    def __repr__(self):
        return f"LeonardSystem(d={self.d}, field={self.field!r})"


def primitive_idempotents(A: Matrix, theta: Sequence) -> List[Matrix]:
    """E_i = prod_{j != i} (A - theta_j I)/(theta_i - theta_j).

    Raises ``LeonardSystemError`` when some theta_i repeats or is not an
    eigenvalue of ``A``.
    """
    theta = [A.field(t) for t in theta]
    if not _distinct(theta):
        raise LeonardSystemError("eigenvalues are not mutually distinct")
    n = A.nrows
    if len(theta) != n:
        raise LeonardSystemError(f"expected {n} eigenvalues, got {len(theta)}")
    I = Matrix.identity(n, A.field)
    shifted = [A - I.scale(t) for t in theta]
    E = []
    for i, ti in enumerate(theta):
        M = I
        denom = A.field.one
        for j, tj in enumerate(theta):
            if j != i:
                M = M @ shifted[j]
                denom = denom * (ti - tj)
        E.append(M.scale(1 / denom))
    for i, ti in enumerate(theta):
        if A @ E[i] != E[i].scale(ti):
            raise LeonardSystemError(f"theta_{i} = {A.field.format(ti)} is not an eigenvalue of A")
    total = Matrix.zeros(n, n, A.field)
    for Ei in E:
        total = total + Ei
    if total != I:
        raise LeonardSystemError("idempotents do not sum to the identity")
    return E


def _rational_roots(coeffs: List[Fraction], bound: int) -> List[Fraction]:
    """Integer roots of the monic integer polynomial given (lowest first)."""
    c = [int(x) for x in coeffs]
    roots = []
    while c and c[0] == 0:
        roots.append(0)
        c = c[1:]
    if len(c) <= 1:
        return sorted(set(roots))
    c0 = abs(c[0])

    def value(x):
        v = 0
        for a in reversed(c):
            v = v * x + a
        return v

    for k in range(1, min(bound, c0) + 1):
        if c0 % k == 0:
            for x in (k, -k):
                if value(x) == 0:
                    roots.append(x)
    return sorted(set(roots))


def eigenvalues(A: Matrix) -> List:
    """All eigenvalues of ``A`` lying in its field, without multiplicity.

    Over the rationals: rational-root search on the characteristic polynomial
    of an integer rescaling of ``A``.  Over GF(p): exhaustive scan.
    """
    n = A.nrows
    if isinstance(A.field, PrimeField):
        cp = charpoly(A)
        found = []
        for x in A.field.elements():
            v = A.field.zero
            for a in reversed(cp):
                v = v * x + a
            if not v:
                found.append(x)
        return found
    L = lcm(*(x.denominator for r in A.rows for x in r)) if n else 1
    B = A.scale(L)
    cp = charpoly(B)
    bound = max((sum(abs(x) for x in r) for r in B.rows), default=0)
    return sorted(Fraction(r, L) for r in _rational_roots(cp, int(bound) + 1))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: List[Check] = dc_field(default_factory=list)
    systems: List[LeonardSystem] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def system(self) -> Optional[LeonardSystem]:
        return self.systems[0] if self.systems else None

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))
        return passed

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]


def _band_ok(M: List[List[bool]], order: Sequence[int]) -> bool:
    """Nonzero pattern of X_i Y X_j is exactly the tridiagonal band minus the
    diagonal requirement: zero for |i-j| > 1, nonzero for |i-j| = 1."""
    for a in range(len(order)):
        for b in range(len(order)):
            gap = abs(a - b)
            nz = M[order[a]][order[b]]
            if gap > 1 and nz:
                return False
            if gap == 1 and not nz:
                return False
    return True


def _band_orderings(M: List[List[bool]]) -> List[Tuple[int, ...]]:
    """All orderings satisfying the band condition, by pruned DFS in
    lexicographic order."""
    n = len(M)
    found = []

    def extend(order, used):
        k = len(order)
        if k == n:
            found.append(tuple(order))
            return
        for c in range(n):
            if used[c]:
                continue
            if k >= 1 and not (M[order[-1]][c] and M[c][order[-1]]):
                continue
            if any(M[order[a]][c] or M[c][order[a]] for a in range(k - 1)):
                continue
            used[c] = True
            order.append(c)
            extend(order, used)
            order.pop()
            used[c] = False

    extend([], [False] * n)
    return found


def _sort_key(x):
    return x.value if hasattr(x, "value") else x


def validate_system(A: Matrix, Astar: Matrix, theta: Optional[Sequence] = None,
                    theta_star: Optional[Sequence] = None) -> ValidationReport:
    """Check the Leonard system axioms for the pair (A, A*).

    With eigenvalue orderings supplied, only that ordering is tested and the
    resulting system is returned.  Without them the eigenvalues are found
    from the characteristic polynomials and every ordering of both
    idempotent families satisfying the band conditions is reported; the
    first (lexicographic in ascending-eigenvalue labels) is canonical.
    Failures are recorded as report entries, never raised.
    """
    rep = ValidationReport()
    if not (A.is_square() and Astar.is_square() and A.shape == Astar.shape
            and A.field == Astar.field):
        rep.add("shape", False, "A and A* must be square, of equal size, over one field")
        return rep
    rep.add("shape", True)
    n = A.nrows
    d = n - 1

    def spectrum(X, given, label):
        if given is not None:
            given = [X.field(t) for t in given]
            if len(given) != n or not _distinct(given):
                rep.add(f"{label} multiplicity-free", False, "eigenvalues not mutually distinct")
                return None
            I = Matrix.identity(n, X.field)
            for t in given:
                if rank(X - I.scale(t)) != d:
                    rep.add(f"{label} multiplicity-free", False,
                            f"{X.field.format(t)} is not a simple eigenvalue")
                    return None
            rep.add(f"{label} multiplicity-free", True)
            return given
        if d > MAX_SEARCH_D:
            rep.add(f"{label} multiplicity-free", False, f"raw search capped at d <= {MAX_SEARCH_D}")
            return None
        ev = eigenvalues(X)
        if len(ev) != n:
            rep.add(f"{label} multiplicity-free", False,
                    f"found {len(ev)} distinct eigenvalues in the field, need {n}")
            return None
        rep.add(f"{label} multiplicity-free", True)
        return sorted(ev, key=_sort_key)

    th = spectrum(A, theta, "A")
    ths = spectrum(Astar, theta_star, "A*")
    if th is None or ths is None:
        return rep
    E = primitive_idempotents(A, th)
    Es = primitive_idempotents(Astar, ths)
    ME = [[not (Ei @ Astar @ Ej).is_zero() for Ej in E] for Ei in E]
    MEs = [[not (Ei @ A @ Ej).is_zero() for Ej in Es] for Ei in Es]
    if theta is not None:
        ords = [tuple(range(n))] if _band_ok(ME, range(n)) else []
    else:
        ords = _band_orderings(ME)
    if theta_star is not None:
        ords_s = [tuple(range(n))] if _band_ok(MEs, range(n)) else []
    else:
        ords_s = _band_orderings(MEs)
    rep.add("E_i A* E_j band", bool(ords),
            "" if ords else "no ordering of E_i gives E_i A* E_j = 0 for |i-j|>1 and != 0 for |i-j|=1")
    rep.add("E*_i A E*_j band", bool(ords_s),
            "" if ords_s else "no ordering of E*_i gives E*_i A E*_j = 0 for |i-j|>1 and != 0 for |i-j|=1")
    for o in ords:
        for os_ in ords_s:
            rep.systems.append(LeonardSystem(
                A, [E[k] for k in o], Astar, [Es[k] for k in os_],
                [th[k] for k in o], [ths[k] for k in os_]))
    return rep


def split_form_matrices(pa: ParameterArray) -> Tuple[Matrix, Matrix]:
    """A lower bidiagonal (diagonal theta, subdiagonal 1) and A* upper
    bidiagonal (diagonal theta*, superdiagonal varphi)."""
    f = pa.field
    n = pa.d + 1
    A = [[f.zero] * n for _ in range(n)]
    As = [[f.zero] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = pa.theta[i]
        As[i][i] = pa.theta_star[i]
        if i >= 1:
            A[i][i - 1] = f.one
            As[i - 1][i] = pa.varphi[i - 1]
    return Matrix(A, f), Matrix(As, f)


def from_split_form(pa: ParameterArray) -> LeonardSystem:
    """Build and validate the Leonard system with parameter array ``pa``.

    Raises ``LeonardSystemError`` if the split-form pair is not a Leonard
    system in the array's eigenvalue order, or if the recomputed split
    sequences disagree with ``pa``.
    """
    A, As = split_form_matrices(pa)
    rep = validate_system(A, As, pa.theta, pa.theta_star)
    if not rep.passed:
        names = ", ".join(c.name for c in rep.failures())
        raise LeonardSystemError(f"not a Leonard system (failed: {names})", rep)
    sys_ = rep.system
    varphi, phi = split_sequences(sys_)
    if tuple(varphi) != pa.varphi:
        raise LeonardSystemError("recomputed first split sequence differs from input", rep)
    if pa.phi is not None and tuple(phi) != pa.phi:
        raise LeonardSystemError("computed second split sequence differs from the given phi", rep)
    sys_._pa = ParameterArray(pa.theta, pa.theta_star, varphi, phi, pa.field)
    return sys_


def split_sequences(sys_: LeonardSystem):
    """(varphi_1..varphi_d, phi_1..phi_d) from trace ratios against E*_0."""
    Es0 = sys_.Estar[0]
    ths = sys_.theta_star
    tr_tau = [(sys_.tau_A(i) @ Es0).trace() for i in range(sys_.d + 1)]
    tr_eta = [(sys_.eta_A(i) @ Es0).trace() for i in range(sys_.d + 1)]
    varphi, phi = [], []
    for i in range(1, sys_.d + 1):
        if not tr_tau[i - 1] or not tr_eta[i - 1]:
            raise LeonardSystemError(f"zero trace denominator at i={i}")
        varphi.append((ths[0] - ths[i]) * tr_tau[i] / tr_tau[i - 1])
        phi.append((ths[0] - ths[i]) * tr_eta[i] / tr_eta[i - 1])
    if any(not x for x in varphi) or any(not x for x in phi):
        raise LeonardSystemError("a split sequence entry vanished")
    return varphi, phi


def parameter_array(sys_: LeonardSystem) -> ParameterArray:
    varphi, phi = split_sequences(sys_)
    return ParameterArray(sys_.theta, sys_.theta_star, varphi, phi, sys_.field)

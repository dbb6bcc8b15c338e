"""The D4 action on Leonard systems generated by *, down and double-down.

``star`` swaps the roles of A and A*; ``down`` reverses the second
idempotent sequence; ``ddown`` reverses the first.  Words are read left to
right: ``Phi^{down star}`` means apply ``down`` first, then ``star``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

from .leonard import LeonardSystem, ParameterArray

__all__ = ["D4Element", "IDENTITY", "STAR", "DOWN", "DDOWN", "ELEMENTS", "apply",
           "transform_parameter_array", "orbit"]

_GENERATORS = ("star", "down", "ddown")
_SYMBOLS = {"down": "↓", "ddown": "⇓", "star": "*"}


@dataclass(frozen=True)
class D4Element:
    """Normal form down^a ddown^b star^c.

    Equivalently the element's effect on (A; E; A*; E*): ``swap`` says
    whether A and A* trade places, ``rev_e``/``rev_es`` whether the
    idempotents of A/A* end up reversed.
    """

    swap: bool = False
    rev_e: bool = False
    rev_es: bool = False

    @classmethod
    def from_word(cls, word: "str | Iterable[str]") -> "D4Element":
        if isinstance(word, str):
            word = word.replace("*", " star ").split()
            if word == ["1"]:
                word = []
        g = cls()
        for letter in word:
            g = g.then(_generator(letter))
        return g

    def then(self, other: "D4Element") -> "D4Element":
        """The element 'apply self, then other'."""
        swap, rev_e, rev_es = self.swap, self.rev_e, self.rev_es
        # other acts on the slots of the current system; translate to the
        # original A / A* labels through the current swap.
        first_rev, second_rev = other.rev_e, other.rev_es
        if not swap:
            rev_e ^= first_rev
            rev_es ^= second_rev
        else:
            rev_es ^= first_rev
            rev_e ^= second_rev
        return D4Element(swap ^ other.swap, rev_e, rev_es)

    def __mul__(self, other: "D4Element") -> "D4Element":
        return self.then(other)

    def inverse(self) -> "D4Element":
        for g in ELEMENTS:
            if self.then(g) == IDENTITY:
                return g
        raise AssertionError("unreachable")

    @property
    def word(self) -> Tuple[str, ...]:
        # down reverses the dual side and ddown the primary side before any swap
        out = []
        if self.rev_es:
            out.append("down")
        if self.rev_e:
            out.append("ddown")
        if self.swap:
            out.append("star")
        return tuple(out)

    @property
    def name(self) -> str:
        return " ".join(self.word) or "1"

    @property
    def symbol(self) -> str:
        return "Φ" + ("".join(_SYMBOLS[w] for w in self.word))

    def __repr__(self):
        return f"D4Element({self.name!r})"


def _generator(letter: str) -> D4Element:
    if letter == "star":
        return D4Element(swap=True)
    if letter == "down":
        return D4Element(rev_es=True)
    if letter == "ddown":
        return D4Element(rev_e=True)
    raise ValueError(f"unknown D4 generator {letter!r}; expected one of {_GENERATORS}")


IDENTITY = D4Element()
STAR = D4Element(swap=True)
DOWN = D4Element(rev_es=True)
DDOWN = D4Element(rev_e=True)

# order of the relatives table: 1, down, ddown, down ddown, then each followed by star
ELEMENTS = tuple(D4Element(s, e, es) for s in (False, True)
                 for (es, e) in ((False, False), (True, False), (False, True), (True, True)))


def _apply_generator(letter: str, sys_: LeonardSystem) -> LeonardSystem:
    if letter == "star":
        return LeonardSystem(sys_.Astar, sys_.Estar, sys_.A, sys_.E, sys_.theta_star, sys_.theta)
    if letter == "down":
        return LeonardSystem(sys_.A, sys_.E, sys_.Astar, sys_.Estar[::-1],
                             sys_.theta, sys_.theta_star[::-1])
    if letter == "ddown":
        return LeonardSystem(sys_.A, sys_.E[::-1], sys_.Astar, sys_.Estar,
                             sys_.theta[::-1], sys_.theta_star)
    raise ValueError(letter)


def apply(g: "D4Element | str", sys_: LeonardSystem) -> LeonardSystem:
    """The relative Phi^g.  Only relabels; nothing is recomputed."""
    if isinstance(g, str):
        g = D4Element.from_word(g)
    for letter in g.word:
        sys_ = _apply_generator(letter, sys_)
    return sys_


def _transform_generator(letter: str, pa: ParameterArray) -> ParameterArray:
    th, ths, vp, ph = pa.theta, pa.theta_star, pa.varphi, pa.phi
    if ph is None:
        raise ValueError("transforming a parameter array needs the second split sequence")
    if letter == "star":
        return ParameterArray(ths, th, vp, ph[::-1], pa.field)
    if letter == "down":
        return ParameterArray(th, ths[::-1], ph[::-1], vp[::-1], pa.field)
    if letter == "ddown":
        return ParameterArray(th[::-1], ths, ph, vp, pa.field)
    raise ValueError(letter)


def transform_parameter_array(g: "D4Element | str", pa: ParameterArray) -> ParameterArray:
    if isinstance(g, str):
        g = D4Element.from_word(g)
    for letter in g.word:
        pa = _transform_generator(letter, pa)
    return pa


def orbit(sys_: LeonardSystem) -> Dict[D4Element, LeonardSystem]:
    return {g: apply(g, sys_) for g in ELEMENTS}

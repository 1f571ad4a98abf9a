"""Beam splitters and mirrors acting on multi-photon Fock states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .fock import PureState, StructureError

SQRT_HALF = 1 / math.sqrt(2)


@dataclass(frozen=True)
class BeamSplitter:
    """Balanced splitter coupling rails ``in_a`` and ``in_b``.

    ``routing`` gives, for ``in_a`` then ``in_b``, the pair
    ``(transmit_target, reflect_target)``. A transmitted photon picks up
    ``transmit_phase / sqrt(2)``, a reflected one ``reflect_phase / sqrt(2)``.
    """

    name: str
    in_a: str
    in_b: str
    routing: tuple[tuple[str, str], tuple[str, str]]
    transmit_phase: complex = 1.0
    reflect_phase: complex = 1j

    def __post_init__(self):
        object.__setattr__(self, "routing", tuple(tuple(r) for r in self.routing))
        if self.in_a == self.in_b:
            raise StructureError(f"{self.name}: both inputs are rail {self.in_a!r}")
        pair = {self.in_a, self.in_b}
        for rail, (t, r) in zip((self.in_a, self.in_b), self.routing):
            if t not in pair or r not in pair:
                raise StructureError(f"{self.name}: routing of {rail} leaves the rail pair {sorted(pair)}")
            if t == r:
                raise StructureError(f"{self.name}: transmit and reflect targets of {rail} coincide")
        for ph in (self.transmit_phase, self.reflect_phase):
            if abs(abs(ph) - 1) > 1e-12:
                raise ValueError(f"{self.name}: phases must have unit modulus, got {ph}")
        u = self.matrix()
        if not np.allclose(u @ u.conj().T, np.eye(2), atol=1e-12):
            raise StructureError(f"{self.name}: routing {self.routing} does not give a unitary splitter")

    @classmethod
    def straight(cls, name: str, in_a: str, in_b: str) -> BeamSplitter:
        """Transmission keeps each photon on its own rail."""
        return cls(name, in_a, in_b, ((in_a, in_b), (in_b, in_a)))

    @classmethod
    def crossed(cls, name: str, in_a: str, in_b: str) -> BeamSplitter:
        """Reflection keeps each photon on its own rail."""
        return cls(name, in_a, in_b, ((in_b, in_a), (in_a, in_b)))

    @property
    def rails(self) -> tuple[str, str]:
        return (self.in_a, self.in_b)

    def matrix(self) -> np.ndarray:
        """Single-photon matrix ``U[out, in]`` with rails ordered ``(in_a, in_b)``."""
        pos = {self.in_a: 0, self.in_b: 1}
        u = np.zeros((2, 2), dtype=complex)
        for col, (t, r) in enumerate(self.routing):
            u[pos[t], col] += self.transmit_phase * SQRT_HALF
            u[pos[r], col] += self.reflect_phase * SQRT_HALF
        return u

    def inverse(self) -> BeamSplitter:
        """Splitter implementing ``U^dagger``: routing reversed, phases conjugated."""
        rails = (self.in_a, self.in_b)
        transmit_from = {t: src for src, (t, _) in zip(rails, self.routing)}
        reflect_from = {r: src for src, (_, r) in zip(rails, self.routing)}
        routing = tuple((transmit_from[x], reflect_from[x]) for x in rails)
        return BeamSplitter(f"{self.name}^-1", self.in_a, self.in_b, routing,
                            complex(self.transmit_phase).conjugate(),
                            complex(self.reflect_phase).conjugate())

    def apply(self, s: PureState) -> PureState:
        return apply_beam_splitter(self, s)


@dataclass(frozen=True)
class Mirror:
    """Multiplies the amplitude by ``phase`` once per photon on ``rail``."""

    name: str
    rail: str
    phase: complex = 1j

    @property
    def rails(self) -> tuple[str]:
        return (self.rail,)

    def apply(self, s: PureState) -> PureState:
        return apply_mirror(self, s)


Element = Union[BeamSplitter, Mirror]


@lru_cache(maxsize=None)
def _two_mode_expansion(u: tuple[complex, complex, complex, complex], m: int, n: int):
    """Output ``{(p, q): coeff}`` for ``|m, n>`` sent through ``u`` (row-major ``U[out, in]``).

    Substitutes ``a^dag -> U00 a^dag + U10 b^dag`` and
    ``b^dag -> U01 a^dag + U11 b^dag`` in ``(a^dag)^m (b^dag)^n / sqrt(m! n!)``.
    """
    u00, u01, u10, u11 = u
    out: dict[tuple[int, int], complex] = {}
    norm_in = math.sqrt(math.factorial(m) * math.factorial(n))
    for k in range(m + 1):
        ck = math.comb(m, k) * u00 ** k * u10 ** (m - k)
        for l in range(n + 1):
            cl = math.comb(n, l) * u01 ** l * u11 ** (n - l)
            p = k + l
            q = m + n - p
            out[(p, q)] = out.get((p, q), 0j) + ck * cl
    return tuple(((p, q), c * math.sqrt(math.factorial(p) * math.factorial(q)) / norm_in)
                 for (p, q), c in sorted(out.items()))


def apply_beam_splitter(bs: BeamSplitter, s: PureState) -> PureState:
    ia, ib = s.rail_index(bs.in_a), s.rail_index(bs.in_b)
    u = tuple(complex(x) for x in bs.matrix().ravel())
    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in s.items():
        for (p, q), c in _two_mode_expansion(u, occ[ia], occ[ib]):
            new = list(occ)
            new[ia], new[ib] = p, q
            key = tuple(new)
            out[key] = out.get(key, 0j) + amp * c
    return PureState(s.rails, out)


def apply_mirror(m: Mirror, s: PureState) -> PureState:
    i = s.rail_index(m.rail)
    return PureState(s.rails, {occ: amp * m.phase ** occ[i] for occ, amp in s.items()})


@dataclass(frozen=True)
class Stage:
    name: str
    elements: tuple[Element, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))


@dataclass(frozen=True)
class ElementSequence:
    """Ordered elements split into named stages."""

    stages: tuple[Stage, ...]

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        names = [st.name for st in self.stages]
        if len(set(names)) != len(names):
            raise StructureError(f"duplicate stage names in {names}")

    @classmethod
    def single(cls, elements: Iterable[Element], name: str = "main") -> ElementSequence:
        return cls((Stage(name, tuple(elements)),))

    @property
    def elements(self) -> tuple[Element, ...]:
        return tuple(e for st in self.stages for e in st.elements)

    @property
    def stage_names(self) -> tuple[str, ...]:
        return tuple(st.name for st in self.stages)

    def stage(self, name: str) -> Stage:
        for st in self.stages:
            if st.name == name:
                return st
        raise KeyError(f"no stage named {name!r}; have {list(self.stage_names)}")

    def check_rails(self, rails: Sequence[str]) -> None:
        known = set(rails)
        for st in self.stages:
            for e in st.elements:
                for r in e.rails:
                    if r not in known:
                        raise StructureError(f"stage {st.name!r}, element {e.name}: unknown rail {r!r}")

    def __add__(self, other: ElementSequence) -> ElementSequence:
        return ElementSequence(self.stages + other.stages)


def evolve(seq: ElementSequence | Iterable[Element], s: PureState) -> PureState:
    """Apply elements left to right."""
    elements = seq.elements if isinstance(seq, ElementSequence) else seq
    for e in elements:
        s = e.apply(s)
    return s

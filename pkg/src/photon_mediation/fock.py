"""Sparse pure states of bosons over a fixed set of labeled rails.

A :class:`PureState` maps occupation vectors (one non-negative integer per
rail) to complex amplitudes. States are immutable; every operation returns
a new state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

PRUNE_TOL = 1e-12
NORM_TOL = 1e-9

Occupation = tuple[int, ...]


class StructureError(ValueError):
    """Rails of two objects do not line up (unknown, duplicate or overlapping labels)."""


class DegenerateStateError(ValueError):
    """A state has zero norm where a physical state is required."""


def _check_rails(rails: Iterable[str]) -> tuple[str, ...]:
    rails = tuple(str(r) for r in rails)
    seen = set()
    for r in rails:
        if r in seen:
            raise StructureError(f"duplicate rail label {r!r}")
        seen.add(r)
    return rails


class PureState:
    """Superposition of Fock basis states over ``rails``.

    Amplitudes with magnitude below ``PRUNE_TOL`` are dropped on
    construction, so iterating a state never yields numerical residue.
    Terms are kept in lexicographic order of their occupation vectors.
    """

    __slots__ = ("_rails", "_terms", "_index")

    def __init__(self, rails: Iterable[str], terms: Mapping[Sequence[int], complex] | None = None):
        self._rails = _check_rails(rails)
        self._index = {r: i for i, r in enumerate(self._rails)}
        n = len(self._rails)
        clean: dict[Occupation, complex] = {}
        for occ, amp in (terms or {}).items():
            occ = tuple(int(k) for k in occ)
            if len(occ) != n:
                raise StructureError(f"occupation {occ} has {len(occ)} entries, expected {n}")
            if any(k < 0 for k in occ):
                raise ValueError(f"negative occupation in {occ}")
            amp = complex(amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ValueError(f"non-finite amplitude {amp} on {occ}")
            clean[occ] = clean.get(occ, 0j) + amp
        self._terms = {k: clean[k] for k in sorted(clean) if abs(clean[k]) >= PRUNE_TOL}

    # -- constructors -----------------------------------------------------

    @classmethod
    def vacuum(cls, rails: Iterable[str]) -> PureState:
        rails = tuple(rails)
        return cls(rails, {(0,) * len(rails): 1.0})

    @classmethod
    def basis(cls, rails: Iterable[str], occupations: Mapping[str, int] | Sequence[int],
              amplitude: complex = 1.0) -> PureState:
        """Single basis term. ``occupations`` is either a full vector or a
        ``{rail: count}`` mapping (unlisted rails are empty)."""
        rails = _check_rails(rails)
        if isinstance(occupations, Mapping):
            unknown = set(occupations) - set(rails)
            if unknown:
                raise StructureError(f"unknown rail(s) {sorted(unknown)}")
            occ = tuple(int(occupations.get(r, 0)) for r in rails)
        else:
            occ = tuple(int(k) for k in occupations)
        return cls(rails, {occ: amplitude})

    @classmethod
    def zero(cls, rails: Iterable[str]) -> PureState:
        return cls(rails, {})

    # -- accessors --------------------------------------------------------

    @property
    def rails(self) -> tuple[str, ...]:
        return self._rails

    @property
    def terms(self) -> Mapping[Occupation, complex]:
        return MappingProxyType(self._terms)

    def rail_index(self, rail: str) -> int:
        try:
            return self._index[rail]
        except KeyError:
            raise StructureError(f"unknown rail {rail!r}; state rails are {list(self._rails)}") from None

    def amplitude(self, occupations: Mapping[str, int] | Sequence[int]) -> complex:
        if isinstance(occupations, Mapping):
            for r in occupations:
                self.rail_index(r)
            occ = tuple(int(occupations.get(r, 0)) for r in self._rails)
        else:
            occ = tuple(occupations)
        return self._terms.get(occ, 0j)

    def items(self) -> Iterator[tuple[Occupation, complex]]:
        return iter(self._terms.items())

    def __iter__(self) -> Iterator[Occupation]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self._terms.values()))

    @property
    def normalized(self) -> bool:
        return abs(self.norm - 1.0) < NORM_TOL

    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self._terms}

    # -- algebra ----------------------------------------------------------

    def _require_same_rails(self, other: PureState) -> None:
        if self._rails != other._rails:
            raise StructureError(f"rail mismatch: {list(self._rails)} vs {list(other._rails)}")

    def __add__(self, other: PureState) -> PureState:
        self._require_same_rails(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0j) + v
        return PureState(self._rails, out)

    def __sub__(self, other: PureState) -> PureState:
        return self + (-1) * other

    def __mul__(self, scalar: complex) -> PureState:
        return PureState(self._rails, {k: scalar * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> PureState:
        return self * (1 / scalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PureState):
            return NotImplemented
        return self._rails == other._rails and self._terms == other._terms

    def __hash__(self):
        return hash((self._rails, tuple(self._terms.items())))

    def allclose(self, other: PureState, atol: float = NORM_TOL) -> bool:
        """Phase-sensitive, amplitude-by-amplitude comparison."""
        self._require_same_rails(other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) <= atol for k in keys)

    def reorder(self, rails: Sequence[str]) -> PureState:
        """Same state with rails listed in a different order."""
        rails = _check_rails(rails)
        if set(rails) != set(self._rails):
            raise StructureError(f"cannot reorder {list(self._rails)} into {list(rails)}")
        perm = [self._index[r] for r in rails]
        return PureState(rails, {tuple(occ[i] for i in perm): a for occ, a in self._terms.items()})

    def restrict(self, rails: Sequence[str]) -> PureState:
        """Drop rails that are empty in every term.

        Raises :class:`StructureError` if any dropped rail is occupied,
        since the result would then not be the same state.
        """
        rails = _check_rails(rails)
        keep = [self.rail_index(r) for r in rails]
        drop = [i for i in range(len(self._rails)) if i not in keep]
        out = {}
        for occ, a in self._terms.items():
            if any(occ[i] for i in drop):
                raise StructureError(
                    f"rail {self._rails[next(i for i in drop if occ[i])]} is occupied; cannot restrict")
            out[tuple(occ[i] for i in keep)] = a
        return PureState(rails, out)

    def embed(self, rails: Sequence[str]) -> PureState:
        """Extend onto a superset of rails, new rails empty."""
        rails = _check_rails(rails)
        missing = set(self._rails) - set(rails)
        if missing:
            raise StructureError(f"target rails lack {sorted(missing)}")
        src = [self._index.get(r) for r in rails]
        return PureState(rails, {tuple(occ[i] if i is not None else 0 for i in src): a
                                 for occ, a in self._terms.items()})

    def to_vector(self, basis: Sequence[Occupation]) -> np.ndarray:
        return np.array([self._terms.get(tuple(b), 0j) for b in basis], dtype=complex)

    # -- display ----------------------------------------------------------

    def term_label(self, occ: Occupation) -> str:
        """``"A1,B2,B3"`` style label; multiply occupied rails read ``"2A1"``."""
        parts = []
        for r, k in zip(self._rails, occ):
            if k == 1:
                parts.append(r)
            elif k > 1:
                parts.append(f"{k}{r}")
        return ",".join(parts) or "vac"

    def __repr__(self) -> str:
        if not self._terms:
            return f"PureState({list(self._rails)}, 0)"
        body = " + ".join(f"({a:.6g})|{self.term_label(o)}>" for o, a in self._terms.items())
        return f"PureState({body})"


def inner(bra: PureState, ket: PureState) -> complex:
    """<bra|ket>."""
    bra._require_same_rails(ket)
    small, large = (bra, ket) if len(bra) <= len(ket) else (ket, bra)
    total = 0j
    for occ in small:
        if occ in large.terms:
            total += bra.terms[occ].conjugate() * ket.terms[occ]
    return total


def tensor(a: PureState, b: PureState) -> PureState:
    overlap = set(a.rails) & set(b.rails)
    if overlap:
        raise StructureError(f"tensor factors share rail(s) {sorted(overlap)}")
    out = {}
    for oa, xa in a.items():
        for ob, xb in b.items():
            out[oa + ob] = xa * xb
    return PureState(a.rails + b.rails, out)


def normalize(s: PureState) -> tuple[PureState, float]:
    n = s.norm
    if n < PRUNE_TOL:
        raise DegenerateStateError("cannot normalize the zero state (conditioning event has probability 0)")
    return s / n, n


def same_ray(a: PureState, b: PureState, atol: float = NORM_TOL) -> bool:
    """True when ``a`` and ``b`` differ only by a global phase."""
    na, nb = a.norm, b.norm
    if na < PRUNE_TOL or nb < PRUNE_TOL:
        return na < PRUNE_TOL and nb < PRUNE_TOL
    return abs(abs(inner(a, b)) - na * nb) <= atol * na * nb and abs(na - nb) <= atol


def relative_phase(a: PureState, b: PureState) -> complex:
    """Unit phase ``z`` minimising ``|a - z b|``; ``1`` if the overlap vanishes."""
    ov = inner(b, a)
    if abs(ov) < PRUNE_TOL:
        return 1.0 + 0j
    return cmath.exp(1j * cmath.phase(ov))


# -- selection events ------------------------------------------------------


@dataclass(frozen=True)
class OccupancyPattern:
    """Exact occupations on a subset of rails, e.g. ``{"A2": 1}``."""

    occupations: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "occupations", MappingProxyType(dict(self.occupations)))

    def project(self, s: PureState) -> PureState:
        idx = {s.rail_index(r): int(k) for r, k in self.occupations.items()}
        return PureState(s.rails, {o: a for o, a in s.items() if all(o[i] == k for i, k in idx.items())})


@dataclass(frozen=True)
class ApparatusCount:
    """Exact photon count per rail group.

    ``groups`` maps a group name to its rails and ``counts`` maps group
    names to the required total occupation. Groups absent from ``counts``
    are unconstrained.
    """

    groups: Mapping[str, Sequence[str]]
    counts: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "groups", MappingProxyType({k: tuple(v) for k, v in self.groups.items()}))
        object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))
        unknown = set(self.counts) - set(self.groups)
        if unknown:
            raise StructureError(f"count for unknown group(s) {sorted(unknown)}")

    def project(self, s: PureState) -> PureState:
        idx = {g: [s.rail_index(r) for r in self.groups[g]] for g in self.counts}

        def ok(occ):
            return all(sum(occ[i] for i in idx[g]) == n for g, n in self.counts.items())

        return PureState(s.rails, {o: a for o, a in s.items() if ok(o)})


@dataclass(frozen=True)
class DetectorState:
    """Rank-one projector ``|d><d|`` on a rail subset, identity elsewhere."""

    name: str
    state: PureState

    def __post_init__(self):
        if not self.state.normalized:
            raise ValueError(f"detector state {self.name!r} must be normalized (norm {self.state.norm:.12g})")

    def project(self, s: PureState) -> PureState:
        sub = [s.rail_index(r) for r in self.state.rails]
        rest = [i for i in range(len(s.rails)) if i not in sub]
        # <d| applied to the subset, grouped by the occupation of the other rails
        reduced: dict[Occupation, complex] = {}
        for occ, a in s.items():
            d = self.state.terms.get(tuple(occ[i] for i in sub))
            if d is not None:
                key = tuple(occ[i] for i in rest)
                reduced[key] = reduced.get(key, 0j) + d.conjugate() * a
        out = {}
        for key, c in reduced.items():
            for docc, d in self.state.items():
                occ = [0] * len(s.rails)
                for i, k in zip(sub, docc):
                    occ[i] = k
                for i, k in zip(rest, key):
                    occ[i] = k
                out[tuple(occ)] = c * d
        return PureState(s.rails, out)


SelectionEvent = OccupancyPattern | ApparatusCount | DetectorState


def apply_projector(p: SelectionEvent, s: PureState) -> PureState:
    """Unnormalized ``P|s>``."""
    return p.project(s)


__all__ = [
    "PRUNE_TOL", "NORM_TOL", "StructureError", "DegenerateStateError", "PureState",
    "inner", "tensor", "normalize", "same_ray", "relative_phase", "OccupancyPattern",
    "ApparatusCount", "DetectorState", "SelectionEvent", "apply_projector",
]

"""Weak values of path projectors and two-photon entanglement measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from scipy.stats import entropy

from .fock import NORM_TOL, PRUNE_TOL
from .postselect import LETTERS, RegisterError, RegisterState


class UndefinedWeakValueError(ZeroDivisionError):
    """Pre- and post-selected states are orthogonal."""


@dataclass(frozen=True, order=True)
class PathProjector:
    """Product of per-photon path projectors, e.g. ``{1: "A", 2: "B", 3: "B"}``."""

    assignments: tuple[tuple[int, str], ...]

    def __post_init__(self):
        pairs = tuple(sorted((int(p), str(c)) for p, c in self.assignments))
        photons = [p for p, _ in pairs]
        if len(set(photons)) != len(photons):
            raise ValueError(f"more than one letter for a photon in {pairs}")
        if any(c not in LETTERS for _, c in pairs):
            raise ValueError(f"letters must be A or B: {pairs}")
        object.__setattr__(self, "assignments", pairs)

    @classmethod
    def single(cls, photon: int, letter: str) -> PathProjector:
        return cls(((photon, letter),))

    @classmethod
    def word(cls, word: str, photons: Sequence[int] = (1, 2, 3)) -> PathProjector:
        return cls(tuple(zip(photons, word)))

    @property
    def label(self) -> str:
        return ",".join(f"{c}{p}" for p, c in self.assignments)

    def matches(self, word: str, photons: Sequence[int]) -> bool:
        pos = {p: i for i, p in enumerate(photons)}
        try:
            return all(word[pos[p]] == c for p, c in self.assignments)
        except KeyError as exc:
            raise RegisterError(f"projector names photon {exc.args[0]}, register has {tuple(photons)}") from None

    def apply(self, r: RegisterState) -> dict[str, complex]:
        return {w: a for w, a in r.amplitudes.items() if self.matches(w, r.photons)}


def single_projectors(photons: Iterable[int] = (1, 2, 3)) -> list[PathProjector]:
    return [PathProjector.single(p, c) for p in photons for c in LETTERS]


def joint_projectors(photons: Sequence[int] = (1, 2, 3)) -> list[PathProjector]:
    return [PathProjector.word("".join(w), photons) for w in product(LETTERS, repeat=len(photons))]


@dataclass(frozen=True)
class PrePostEnsemble:
    pre: RegisterState
    post: RegisterState
    label: str = ""

    def __post_init__(self):
        if abs(self.post.inner(self.pre)) < PRUNE_TOL:
            raise UndefinedWeakValueError(f"ensemble {self.label!r}: <post|pre> = 0, weak values undefined")


def _sandwich(post: RegisterState, amps: Mapping[str, complex]) -> complex:
    return sum((post.amplitude(w).conjugate() * a for w, a in amps.items()), 0j)


def weak_value(e: PrePostEnsemble, p: PathProjector) -> complex:
    """``<post|P|pre> / <post|pre>``."""
    denom = e.post.inner(e.pre)
    if abs(denom) < PRUNE_TOL:
        raise UndefinedWeakValueError(f"ensemble {e.label!r}: <post|pre> = 0")
    return _sandwich(e.post, p.apply(e.pre)) / denom


@dataclass(frozen=True)
class WeakValueReport:
    label: str
    table: Mapping[PathProjector, complex]
    postselection_probability: float

    def by_label(self) -> dict[str, complex]:
        return {p.label: v for p, v in self.table.items()}


def _postselection_probability(e: PrePostEnsemble) -> float:
    return abs(e.post.inner(e.pre)) ** 2


def weak_value_table(e: PrePostEnsemble) -> WeakValueReport:
    table = {p: weak_value(e, p) for p in single_projectors(e.pre.photons)}
    return WeakValueReport(e.label, table, _postselection_probability(e))


def joint_weak_values(e: PrePostEnsemble) -> WeakValueReport:
    table = {p: weak_value(e, p) for p in joint_projectors(e.pre.photons)}
    return WeakValueReport(e.label, table, _postselection_probability(e))


def expectation(r: RegisterState, p: PathProjector) -> float:
    return sum(abs(a) ** 2 for a in p.apply(r).values())


def expectation_decomposition(pre: RegisterState, posts: Sequence[tuple[float, RegisterState]],
                              p: PathProjector) -> tuple[float, float]:
    """``(<P>, sum_n prob_n * weak_value_n)`` over a complete set of outcomes.

    Outcomes whose probability is zero are skipped (their weak value is
    undefined and their weight vanishes).
    """
    total = sum(prob for prob, _ in posts)
    if abs(total - 1) > NORM_TOL:
        raise ValueError(f"outcome probabilities sum to {total:.12g}, not 1")
    rhs = 0j
    for prob, post in posts:
        if prob < PRUNE_TOL:
            continue
        rhs += prob * weak_value(PrePostEnsemble(pre, post), p)
    if abs(rhs.imag) > NORM_TOL:
        raise ValueError(f"weighted weak values have imaginary residue {rhs.imag:.3g}")
    return expectation(pre, p), rhs.real


def concurrence(r: RegisterState) -> float:
    """Pure two-photon concurrence ``2 |a_AA a_BB - a_AB a_BA|``."""
    if len(r.photons) != 2:
        raise RegisterError(f"concurrence needs a two-photon register, got photons {r.photons}")
    a = r.amplitude
    c = 2 * abs(a("AA") * a("BB") - a("AB") * a("BA"))
    return min(1.0, c / r.norm ** 2)


def entanglement_of_formation(c: float) -> float:
    """Binary entropy of ``(1 + sqrt(1 - c^2)) / 2``, in bits."""
    if not -NORM_TOL <= c <= 1 + NORM_TOL:
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    x = (1 + math.sqrt(1 - c * c)) / 2
    return float(entropy([x, 1 - x], base=2))

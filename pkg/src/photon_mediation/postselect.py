"""Post-selection on the network output.

Inside the no-crossing subspace (one photon per apparatus, at most one
photon per rail) "photon k" means the photon found in apparatus k, and a
three-photon state is written as path words such as ``"ABB"``. The first
rail of each apparatus group carries letter ``A``, the second ``B``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from .fock import (ApparatusCount, DegenerateStateError, NORM_TOL, PRUNE_TOL, PureState, inner,
                   normalize, tensor)
from .network import ApparatusPartition, NetworkDescription, build_fig1, staged_evolution

LETTERS = ("A", "B")
_S2 = math.sqrt(2)

# photon-2 states that make D1 / D2 click with certainty
DETECTOR_STATES: Mapping[str, Mapping[str, complex]] = MappingProxyType({
    "D1": MappingProxyType({"A": 1j / _S2, "B": -1 / _S2}),
    "D2": MappingProxyType({"A": 1j / _S2, "B": 1 / _S2}),
})


class ImpossibleEventError(DegenerateStateError):
    """The conditioning event has probability zero."""


class RegisterError(ValueError):
    """A Fock state cannot be written as path words."""


class RegisterState:
    """Normalized map from path words to amplitudes.

    ``photons`` labels the word positions, e.g. ``(1, 3)`` for a register
    holding photons 1 and 3 only.
    """

    __slots__ = ("_amps", "photons")

    def __init__(self, amplitudes: Mapping[str, complex], photons: Sequence[int] | None = None,
                 check_norm: bool = True):
        amps = {}
        width = None
        for w, a in amplitudes.items():
            if width is None:
                width = len(w)
            if len(w) != width or any(c not in LETTERS for c in w):
                raise RegisterError(f"bad path word {w!r}")
            if abs(a) >= PRUNE_TOL:
                amps[w] = complex(a)
        if width is None:
            raise RegisterError("empty register")
        self.photons = tuple(photons) if photons is not None else tuple(range(1, width + 1))
        if len(self.photons) != width:
            raise RegisterError(f"{len(self.photons)} photon labels for words of length {width}")
        self._amps = {w: amps[w] for w in sorted(amps)}
        if check_norm and abs(self.norm - 1) > NORM_TOL:
            raise RegisterError(f"register norm is {self.norm:.12g}, expected 1")

    @property
    def amplitudes(self) -> Mapping[str, complex]:
        return MappingProxyType(self._amps)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self._amps.values()))

    def amplitude(self, word: str) -> complex:
        return self._amps.get(word, 0j)

    def position(self, photon: int) -> int:
        try:
            return self.photons.index(photon)
        except ValueError:
            raise RegisterError(f"photon {photon} not in register {self.photons}") from None

    def words(self) -> tuple[str, ...]:
        return tuple(self._amps)

    def all_words(self) -> list[str]:
        n = len(self.photons)
        return ["".join(w) for w in _product(LETTERS, n)]

    def inner(self, ket: RegisterState) -> complex:
        """<self|ket>."""
        if self.photons != ket.photons:
            raise RegisterError(f"photon labels differ: {self.photons} vs {ket.photons}")
        return sum((self._amps[w].conjugate() * ket._amps[w] for w in self._amps if w in ket._amps), 0j)

    def scaled(self, z: complex) -> RegisterState:
        return RegisterState({w: z * a for w, a in self._amps.items()}, self.photons,
                             check_norm=abs(abs(z) - 1) < NORM_TOL)

    def marginal(self, photon: int) -> dict[str, float]:
        pos = self.position(photon)
        out = {c: 0.0 for c in LETTERS}
        for w, a in self._amps.items():
            out[w[pos]] += abs(a) ** 2
        return out

    def __repr__(self) -> str:
        body = " + ".join(f"({a:.6g})|{w}>" for w, a in self._amps.items())
        return f"RegisterState[{','.join(map(str, self.photons))}]({body})"


def _product(letters, n):
    if n == 0:
        yield ()
        return
    for head in letters:
        for tail in _product(letters, n - 1):
            yield (head,) + tail


def one_per_group(part: ApparatusPartition) -> ApparatusCount:
    return ApparatusCount(part.as_dict(), {g: 1 for g in part.names})


def no_crossing_filter(s: PureState, part: ApparatusPartition) -> tuple[PureState, float]:
    """Condition on exactly one photon per apparatus.

    Returns the normalized conditional state and the event probability
    (squared norm of the projection; ``s`` is assumed normalized).
    """
    projected = one_per_group(part).project(s)
    try:
        state, norm = normalize(projected)
    except DegenerateStateError:
        raise ImpossibleEventError("no term has exactly one photon per apparatus") from None
    return state, norm ** 2


def to_register(s: PureState, part: ApparatusPartition, check_norm: bool = True) -> RegisterState:
    groups = [(name, [s.rail_index(r) for r in rails]) for name, rails in part.groups]
    for name, idx in groups:
        if len(idx) != 2:
            raise RegisterError(f"group {name!r} has {len(idx)} rails; path words need exactly 2")
    amps = {}
    for occ, a in s.items():
        if max(occ, default=0) > 1:
            raise RegisterError(f"bunched term {s.term_label(occ)} has no path-word form")
        word = []
        for name, idx in groups:
            counts = [occ[i] for i in idx]
            if sum(counts) != 1:
                raise RegisterError(f"term {s.term_label(occ)} has {sum(counts)} photons in {name}")
            word.append(LETTERS[counts.index(1)])
        amps["".join(word)] = a
    return RegisterState(amps, check_norm=check_norm)


def from_register(r: RegisterState, part: ApparatusPartition, rails: Sequence[str]) -> PureState:
    groups = [part.groups[p - 1][1] for p in r.photons]
    out = {}
    for w, a in r.amplitudes.items():
        occ = dict.fromkeys(rails, 0)
        for letter, grp in zip(w, groups):
            occ[grp[LETTERS.index(letter)]] = 1
        out[tuple(occ[x] for x in rails)] = a
    return PureState(rails, out)


def project_photon(r: RegisterState, photon: int, letter_state: Mapping[str, complex]) -> dict[str, complex]:
    """``<d|_photon`` applied to ``r``: unnormalized amplitudes on the remaining photons."""
    pos = r.position(photon)
    out: dict[str, complex] = {}
    for w, a in r.amplitudes.items():
        rest = w[:pos] + w[pos + 1:]
        out[rest] = out.get(rest, 0j) + complex(letter_state.get(w[pos], 0)).conjugate() * a
    return out


@dataclass(frozen=True)
class Outcome:
    label: str
    probability: float
    conditional: RegisterState | None  # the other photons, normalized
    postselected: RegisterState | None  # full register |d> (x) conditional


@dataclass(frozen=True)
class OutcomeTable:
    measured_photon: int
    rows: Mapping[str, Outcome] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rows", MappingProxyType(dict(self.rows)))

    def __getitem__(self, label: str) -> Outcome:
        return self.rows[label]

    @property
    def total_probability(self) -> float:
        return sum(o.probability for o in self.rows.values())


def measure_photon(r: RegisterState, photon: int = 2,
                   basis: Mapping[str, Mapping[str, complex]] = DETECTOR_STATES) -> OutcomeTable:
    pos = r.position(photon)
    rest_photons = r.photons[:pos] + r.photons[pos + 1:]
    rows = {}
    for label, d in basis.items():
        reduced = project_photon(r, photon, d)
        p = sum(abs(a) ** 2 for a in reduced.values())
        if p < PRUNE_TOL ** 2:
            rows[label] = Outcome(label, 0.0, None, None)
            continue
        cond = RegisterState({w: a / math.sqrt(p) for w, a in reduced.items()}, rest_photons)
        full = {}
        for w, a in cond.amplitudes.items():
            for letter, c in d.items():
                full[w[:pos] + letter + w[pos:]] = c * a
        rows[label] = Outcome(label, p, cond, RegisterState(full, r.photons))
    return OutcomeTable(photon, rows)


def measure_photon2(r: RegisterState) -> OutcomeTable:
    """Detect photon 2 behind BS6: D1 or D2."""
    return measure_photon(r, 2, DETECTOR_STATES)


def path_probabilities(source: RegisterState | OutcomeTable, photon: int) -> tuple[float, float]:
    """``(P(A), P(B))`` for ``photon``.

    From a register this is the direct marginal; from an outcome table it is
    the outcome-probability-weighted average over the conditional states.
    """
    if isinstance(source, RegisterState):
        m = source.marginal(photon)
        return m["A"], m["B"]
    pa = pb = 0.0
    for o in source.rows.values():
        if o.probability == 0.0:
            continue
        m = o.postselected.marginal(photon)
        pa += o.probability * m["A"]
        pb += o.probability * m["B"]
    return pa, pb


# -- protocol and baseline ---------------------------------------------------


@dataclass(frozen=True)
class ProtocolRun:
    """Everything the three-photon protocol produces on one network."""

    snapshots: Mapping[str, PureState]
    filtered: PureState
    event_probability: float
    register: RegisterState
    overlap_probability: float
    outcomes: OutcomeTable


def run_protocol(net: NetworkDescription | None = None) -> ProtocolRun:
    net = build_fig1() if net is None else net
    snaps = staged_evolution(net)
    filtered, prob = no_crossing_filter(snaps["secondary"], net.partition)
    register = to_register(filtered, net.partition)
    overlap = abs(inner(filtered, snaps["primary"])) ** 2
    return ProtocolRun(MappingProxyType(snaps), filtered, prob, register, overlap, measure_photon2(register))


def single_photon_baseline(net: NetworkDescription, group: str) -> PureState:
    """One photon injected at ``group``'s source rail, evolved through the
    network with all other sources empty, and conditioned on staying in its
    own apparatus. Returned on that group's rails only."""
    rails = net.partition.rails_of(group)
    src = {r: k for r, k in zip(net.rails, net.source) if r in rails}
    snaps = staged_evolution(net.with_source(src))
    final = list(snaps.values())[-1]
    stay = ApparatusCount(net.partition.as_dict(), {g: (sum(src.values()) if g == group else 0)
                                                     for g in net.partition.names})
    try:
        state, _ = normalize(stay.project(final))
    except DegenerateStateError:
        raise ImpossibleEventError(f"photon of {group} never stays in its apparatus") from None
    return state.restrict(rails)


def joint_baseline_state(net: NetworkDescription, absent: str) -> PureState:
    """Both outer photons evolved together with ``absent`` emptied, conditioned jointly."""
    src = {r: k for r, k in zip(net.rails, net.source) if net.partition.group_of(r) != absent}
    final = list(staged_evolution(net.with_source(src)).values())[-1]
    present = [g for g in net.partition.names if g != absent]
    counts = {g: sum(src.get(r, 0) for r in net.partition.rails_of(g)) for g in present}
    counts[absent] = 0
    state, _ = normalize(ApparatusCount(net.partition.as_dict(), counts).project(final))
    keep = [r for g in present for r in net.partition.rails_of(g)]
    return state.restrict(keep)


def two_photon_baseline(net: NetworkDescription | None = None) -> tuple[PureState, dict[str, float]]:
    """Outer photons without the mediator.

    Returns the product state of the two conditioned outer photons and the
    path probabilities ``{"A1": ..., "B1": ..., "A3": ..., "B3": ...}``
    keyed by rail label.
    """
    net = build_fig1() if net is None else net
    first, middle, last = net.partition.names
    s1 = single_photon_baseline(net, first)
    s3 = single_photon_baseline(net, last)
    joint = tensor(s1, s3)
    probs = {}
    for r in s1.rails + s3.rails:
        i = joint.rail_index(r)
        probs[r] = sum(abs(a) ** 2 for occ, a in joint.items() if occ[i] == 1)
    return joint, probs

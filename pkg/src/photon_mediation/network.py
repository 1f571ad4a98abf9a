"""Network descriptions: rails, staged elements, apparatus partition, source.

Descriptions serialize to a JSON document::

    {
      "rails": ["A1", "B1", ...],
      "source": {"A1": 1, "B1": 0, ...},
      "stages": [
        {"name": "primary", "elements": [
          {"kind": "beamsplitter", "name": "BS1", "in_a": "A1", "in_b": "B1",
           "routing": {"A1": {"transmit": "A1", "reflect": "B1"},
                       "B1": {"transmit": "B1", "reflect": "A1"}}},
          {"kind": "mirror", "name": "M1", "rail": "B1"}]}],
      "partition": {"MZ1": ["A1", "B1"], ...}
    }
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

from .elements import BeamSplitter, Element, ElementSequence, Mirror, Stage, evolve
from .fock import PureState, StructureError

STAGE_NAMES = ("primary", "secondary", "final")


class NetworkFormatError(ValueError):
    """A network document is malformed; the message names the offending field."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass(frozen=True)
class ApparatusPartition:
    """Named, disjoint rail groups. Group order fixes photon numbering (first group = photon 1)."""

    groups: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        groups = tuple((str(name), tuple(rails)) for name, rails in self.groups)
        object.__setattr__(self, "groups", groups)
        seen: dict[str, str] = {}
        names = set()
        for name, rails in groups:
            if name in names:
                raise StructureError(f"duplicate group {name!r}")
            names.add(name)
            for r in rails:
                if r in seen:
                    raise StructureError(f"rail {r!r} is in both {seen[r]!r} and {name!r}")
                seen[r] = name

    @classmethod
    def from_mapping(cls, groups: Mapping[str, Sequence[str]]) -> ApparatusPartition:
        return cls(tuple((k, tuple(v)) for k, v in groups.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.groups)

    def as_dict(self) -> dict[str, tuple[str, ...]]:
        return dict(self.groups)

    def rails_of(self, name: str) -> tuple[str, ...]:
        return self.as_dict()[name]

    def group_of(self, rail: str) -> str:
        for name, rails in self.groups:
            if rail in rails:
                return name
        raise StructureError(f"rail {rail!r} belongs to no group")

    def check_covers(self, rails: Sequence[str]) -> None:
        covered = [r for _, g in self.groups for r in g]
        if sorted(covered) != sorted(rails):
            raise StructureError(f"partition covers {sorted(covered)}, rails are {sorted(rails)}")


@dataclass(frozen=True)
class NetworkDescription:
    rails: tuple[str, ...]
    stages: ElementSequence
    partition: ApparatusPartition
    source: tuple[int, ...]
    name: str = "network"

    def __post_init__(self):
        object.__setattr__(self, "rails", tuple(self.rails))
        object.__setattr__(self, "source", tuple(self.source))
        if len(set(self.rails)) != len(self.rails):
            raise StructureError(f"duplicate rails in {list(self.rails)}")
        if len(self.source) != len(self.rails):
            raise StructureError("source length does not match rail count")
        if any((not isinstance(k, int)) or k < 0 for k in self.source):
            raise StructureError(f"source occupations must be non-negative integers, got {self.source}")
        self.stages.check_rails(self.rails)
        self.partition.check_covers(self.rails)

    def source_state(self) -> PureState:
        return PureState.basis(self.rails, self.source)

    def with_source(self, occupations: Mapping[str, int]) -> NetworkDescription:
        return replace(self, source=tuple(int(occupations.get(r, 0)) for r in self.rails))

    def with_stage(self, name: str, elements: Sequence[Element]) -> NetworkDescription:
        stages = tuple(Stage(st.name, tuple(elements)) if st.name == name else st
                       for st in self.stages.stages)
        return replace(self, stages=ElementSequence(stages))

    def element(self, name: str) -> Element:
        for e in self.stages.elements:
            if e.name == name:
                return e
        raise KeyError(name)

    def fingerprint(self) -> dict[str, Any]:
        doc = json.dumps(_stages_doc(self.stages), sort_keys=True, separators=(",", ":"))
        return {"rails": list(self.rails), "element_digest": hashlib.sha256(doc.encode()).hexdigest()[:16]}


def build_fig1() -> NetworkDescription:
    """Three Mach-Zehnder-like apparatuses sharing BS4 (MZ1/MZ2) and BS5 (MZ2/MZ3).

    Source splitters send the transmitted component to the A rail and the
    reflected one to B; the central splitters keep a reflected photon in
    its own apparatus and send a transmitted one to the neighbour.
    """
    rails = ("A1", "B1", "A2", "B2", "A3", "B3")
    primary = Stage("primary", (
        BeamSplitter.straight("BS1", "A1", "B1"),
        BeamSplitter.straight("BS2", "A2", "B2"),
        BeamSplitter.straight("BS3", "A3", "B3"),
    ))
    secondary = Stage("secondary", (
        BeamSplitter.crossed("BS4", "A1", "A2"),
        Mirror("M1", "B1"),
        BeamSplitter.crossed("BS5", "B2", "A3"),
        Mirror("M2", "B3"),
    ))
    partition = ApparatusPartition((("MZ1", ("A1", "B1")), ("MZ2", ("A2", "B2")), ("MZ3", ("A3", "B3"))))
    return NetworkDescription(rails, ElementSequence((primary, secondary)), partition,
                              (1, 0, 1, 0, 1, 0), name="fig1")


def staged_evolution(net: NetworkDescription, state: PureState | None = None) -> dict[str, PureState]:
    """State after each stage, in stage order, starting from the source."""
    s = net.source_state() if state is None else state
    out = {}
    for st in net.stages.stages:
        s = evolve(st.elements, s)
        out[st.name] = s
    return out


def mirrors_variant(net: NetworkDescription, splitters: Sequence[str] = ("BS4", "BS5")) -> NetworkDescription:
    """Replace each named splitter by one mirror on each of its rails."""
    stages = []
    for st in net.stages.stages:
        elements: list[Element] = []
        for e in st.elements:
            if isinstance(e, BeamSplitter) and e.name in splitters:
                elements += [Mirror(f"{e.name}:{r}", r) for r in e.rails]
            else:
                elements.append(e)
        stages.append(Stage(st.name, tuple(elements)))
    return replace(net, stages=ElementSequence(tuple(stages)), name=f"{net.name}-mirrors")


# -- document I/O ------------------------------------------------------------


def _element_doc(e: Element) -> dict[str, Any]:
    if isinstance(e, Mirror):
        return {"kind": "mirror", "name": e.name, "rail": e.rail}
    (ta, ra), (tb, rb) = e.routing
    return {"kind": "beamsplitter", "name": e.name, "in_a": e.in_a, "in_b": e.in_b,
            "routing": {e.in_a: {"transmit": ta, "reflect": ra},
                        e.in_b: {"transmit": tb, "reflect": rb}}}


def _stages_doc(stages: ElementSequence) -> list[dict[str, Any]]:
    return [{"name": st.name, "elements": [_element_doc(e) for e in st.elements]} for st in stages.stages]


def network_to_dict(net: NetworkDescription) -> dict[str, Any]:
    return {
        "name": net.name,
        "rails": list(net.rails),
        "source": dict(zip(net.rails, net.source)),
        "stages": _stages_doc(net.stages),
        "partition": {k: list(v) for k, v in net.partition.groups},
    }


def dump_network(net: NetworkDescription) -> str:
    return json.dumps(network_to_dict(net), indent=2) + "\n"


def _expect(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise NetworkFormatError(where, msg)


def _rail_ref(value: Any, rails: set[str], where: str) -> str:
    _expect(isinstance(value, str), where, f"expected a rail label, got {value!r}")
    _expect(value in rails, where, f"unknown rail {value!r}")
    return value


def _parse_element(doc: Any, rails: set[str], where: str) -> Element:
    _expect(isinstance(doc, dict), where, "element must be an object")
    kind = doc.get("kind")
    name = doc.get("name", where)
    _expect(isinstance(name, str), f"{where}.name", "must be a string")
    if kind == "mirror":
        return Mirror(name, _rail_ref(doc.get("rail"), rails, f"{where}.rail"))
    _expect(kind == "beamsplitter", f"{where}.kind", f"expected 'beamsplitter' or 'mirror', got {kind!r}")
    a = _rail_ref(doc.get("in_a"), rails, f"{where}.in_a")
    b = _rail_ref(doc.get("in_b"), rails, f"{where}.in_b")
    routing = doc.get("routing")
    _expect(isinstance(routing, dict), f"{where}.routing", "must be an object keyed by input rail")
    _expect(set(routing) == {a, b}, f"{where}.routing",
            f"keys must be the input rails {sorted({a, b})}, got {sorted(routing)}")
    pairs = []
    for rail in (a, b):
        entry = routing[rail]
        w = f"{where}.routing.{rail}"
        _expect(isinstance(entry, dict) and set(entry) == {"transmit", "reflect"}, w,
                "must be an object with exactly 'transmit' and 'reflect'")
        pairs.append((_rail_ref(entry["transmit"], rails, f"{w}.transmit"),
                      _rail_ref(entry["reflect"], rails, f"{w}.reflect")))
    try:
        return BeamSplitter(name, a, b, tuple(pairs))
    except (StructureError, ValueError) as exc:
        raise NetworkFormatError(f"{where}.routing", str(exc)) from None


def network_from_dict(doc: Any) -> NetworkDescription:
    _expect(isinstance(doc, dict), "<root>", "document must be an object")
    for key in ("rails", "source", "stages", "partition"):
        _expect(key in doc, key, "missing required field")
    rails = doc["rails"]
    _expect(isinstance(rails, list) and all(isinstance(r, str) for r in rails), "rails",
            "must be a list of strings")
    seen = set()
    for i, r in enumerate(rails):
        _expect(r not in seen, f"rails[{i}]", f"duplicate rail {r!r}")
        seen.add(r)

    src = doc["source"]
    if isinstance(src, list):
        _expect(len(src) == len(rails), "source", f"expected {len(rails)} occupations, got {len(src)}")
        src = dict(zip(rails, src))
    _expect(isinstance(src, dict), "source", "must be an object {rail: occupation} or a list")
    for r, k in src.items():
        _rail_ref(r, seen, f"source.{r}")
        _expect(isinstance(k, int) and not isinstance(k, bool) and k >= 0, f"source.{r}",
                f"occupation must be a non-negative integer, got {k!r}")
    source = tuple(src.get(r, 0) for r in rails)

    stages_doc = doc["stages"]
    _expect(isinstance(stages_doc, list), "stages", "must be a list of {name, elements}")
    stages = []
    for i, st in enumerate(stages_doc):
        w = f"stages[{i}]"
        _expect(isinstance(st, dict) and isinstance(st.get("name"), str), f"{w}.name", "missing stage name")
        els = st.get("elements")
        _expect(isinstance(els, list), f"{w}.elements", "must be a list")
        stages.append(Stage(st["name"], tuple(_parse_element(e, seen, f"{w}.elements[{j}]")
                                              for j, e in enumerate(els))))
    names = [s.name for s in stages]
    _expect(len(set(names)) == len(names), "stages", f"duplicate stage names {names}")

    part = doc["partition"]
    _expect(isinstance(part, dict), "partition", "must be an object {group: [rails]}")
    owner: dict[str, str] = {}
    for g, grp in part.items():
        _expect(isinstance(grp, list), f"partition.{g}", "must be a list of rails")
        for r in grp:
            _rail_ref(r, seen, f"partition.{g}")
            _expect(r not in owner, f"partition.{g}", f"rail {r!r} already in group {owner.get(r)!r}")
            owner[r] = g
    missing = [r for r in rails if r not in owner]
    _expect(not missing, "partition", f"rails {missing} are not assigned to any group")

    return NetworkDescription(tuple(rails), ElementSequence(tuple(stages)),
                              ApparatusPartition.from_mapping(part), source,
                              name=str(doc.get("name", "network")))


def load_network(text: str) -> NetworkDescription:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"line {exc.lineno}", exc.msg) from None
    return network_from_dict(doc)


def load_network_file(path: str | Path) -> NetworkDescription:
    return load_network(Path(path).read_text())


def fig1_document() -> str:
    """Text of the shipped ``fig1.json`` fixture."""
    return resources.files("photon_mediation").joinpath("data/fig1.json").read_text()

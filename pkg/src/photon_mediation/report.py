"""Scenario reports: nested quantity trees rendered as JSON or text.

Floats are rounded to 12 significant digits so structured reports are
byte-stable and diff cleanly.
"""

from __future__ import annotations

import json
from typing import Any, Callable

from . import analysis as an
from .fock import PureState, inner
from .network import NetworkDescription, build_fig1, mirrors_variant, staged_evolution
from .postselect import (RegisterState, joint_baseline_state, one_per_group, path_probabilities,
                         run_protocol, to_register, two_photon_baseline)

SCHEMA_VERSION = 1
SIG_DIGITS = 12
TOLERANCES = {"exact": 1e-9, "rounded_reference_values": 0.005, "pruning": 1e-12}


def num(x: float) -> float:
    x = float(f"{float(x):.{SIG_DIGITS}g}")
    return 0.0 if x == 0 else x


def cnum(z: complex) -> dict[str, float]:
    z = complex(z)
    return {"re": num(z.real), "im": num(z.imag)}


def state_listing(s: PureState | RegisterState) -> list[dict[str, Any]]:
    if isinstance(s, RegisterState):
        items = [(w, a) for w, a in s.amplitudes.items()]
    else:
        items = [(s.term_label(o), a) for o, a in s.items()]
    return [{"term": label, **cnum(a)} for label, a in items]


def _protocol(net: NetworkDescription) -> dict[str, Any]:
    run = run_protocol(net)
    primary, secondary = run.snapshots["primary"], run.snapshots["secondary"]
    projected = one_per_group(net.partition).project(secondary)
    factors = {}
    for o, a in projected.items():
        if abs(primary.amplitude(o)) == 0:
            continue  # term reached only by crossing; no per-term factor
        word = to_register(PureState(projected.rails, {o: 1}), net.partition).words()[0]
        factors[word] = cnum(a / primary.amplitude(o))
    factors = dict(sorted(factors.items()))
    outcomes = {}
    for label, o in run.outcomes.rows.items():
        entry: dict[str, Any] = {"probability": num(o.probability)}
        if o.conditional is not None:
            c = an.concurrence(o.conditional)
            entry["conditional_state"] = state_listing(o.conditional)
            entry["concurrence"] = num(c)
            entry["entanglement_of_formation"] = num(an.entanglement_of_formation(c))
        outcomes[label] = entry
    return {
        "primary_state": state_listing(primary),
        "secondary_terms": len(secondary),
        "secondary_bunched_terms": sum(1 for o in secondary if max(o) > 1),
        "event_probability": num(run.event_probability),
        "overlap_probability": num(run.overlap_probability),
        "overlap_probability_2dp": round(run.overlap_probability, 2),
        "filtered_state": state_listing(run.register),
        "filter_factors": factors,
        "outcomes": outcomes,
    }


def _baseline(net: NetworkDescription) -> dict[str, Any]:
    product, base = two_photon_baseline(net)
    reg = run_protocol(net).register
    first, middle, last = net.partition.names
    disturbed = {}
    for photon, group in ((1, first), (3, last)):
        a, b = net.partition.rails_of(group)
        disturbed[a], disturbed[b] = path_probabilities(reg, photon)
    joint = joint_baseline_state(net, middle).reorder(product.rails)
    return {
        "baseline_state": state_listing(product),
        "baseline_probability": {k: num(v) for k, v in base.items()},
        "disturbed_probability": {k: num(v) for k, v in disturbed.items()},
        "difference": {k: num(disturbed[k] - base[k]) for k in base},
        "joint_condition_overlap": num(abs(inner(joint, product))),
    }


def _ensembles(net: NetworkDescription):
    run = run_protocol(net)
    return run, {lab: an.PrePostEnsemble(run.register, o.postselected, lab)
                 for lab, o in run.outcomes.rows.items() if o.postselected is not None}


def _weak_values(net: NetworkDescription) -> dict[str, Any]:
    _, ens = _ensembles(net)
    out = {}
    for lab in sorted(ens):
        rep = an.weak_value_table(ens[lab])
        out[lab] = {"postselection_probability": num(rep.postselection_probability),
                    "weak_values": {k: cnum(v) for k, v in rep.by_label().items()}}
    return out


def _joint_weak_values(net: NetworkDescription) -> dict[str, Any]:
    _, ens = _ensembles(net)
    out = {}
    for lab in sorted(ens):
        rep = an.joint_weak_values(ens[lab])
        out[lab] = {"postselection_probability": num(rep.postselection_probability),
                    "weak_values": {k: cnum(v) for k, v in rep.by_label().items()},
                    "sum": cnum(sum(rep.table.values()))}
    return out


def _decomposition(net: NetworkDescription) -> dict[str, Any]:
    run, _ = _ensembles(net)
    posts = [(o.probability, o.postselected) for o in run.outcomes.rows.values()]
    out = {}
    for p in an.single_projectors() + an.joint_projectors():
        lhs, rhs = an.expectation_decomposition(run.register, posts, p)
        out[p.label] = {"expectation": num(lhs), "weighted_weak_values": num(rhs), "difference": num(lhs - rhs)}
    return out


def _mirrors(net: NetworkDescription) -> dict[str, Any]:
    snaps = staged_evolution(mirrors_variant(net))
    want = -1j * snaps["primary"]
    dev = max(abs(snaps["secondary"].amplitude(o) - want.amplitude(o))
              for o in set(want.terms) | set(snaps["secondary"].terms))
    return {"secondary_state": state_listing(snaps["secondary"]),
            "max_deviation_from_minus_i_input": num(dev),
            "equals_minus_i_input": bool(dev < TOLERANCES["exact"])}


SCENARIOS: dict[str, Callable[[NetworkDescription], dict[str, Any]]] = {
    "protocol": _protocol,
    "baseline": _baseline,
    "weak-values": _weak_values,
    "joint-weak-values": _joint_weak_values,
    "decomposition": _decomposition,
    "mirrors-variant": _mirrors,
}
SCENARIO_IDS = tuple(SCENARIOS) + ("full-report",)


def build_report(scenario: str, net: NetworkDescription | None = None) -> dict[str, Any]:
    if scenario not in SCENARIO_IDS:
        raise ValueError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIO_IDS)}")
    net = build_fig1() if net is None else net
    if scenario == "full-report":
        quantities = {name: fn(net) for name, fn in SCENARIOS.items()}
    else:
        quantities = SCENARIOS[scenario](net)
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario,
        "network": {"name": net.name, **net.fingerprint()},
        "quantities": quantities,
        "tolerances": dict(TOLERANCES),
    }


def dumps_structured(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def flatten(tree: Any, prefix: str = "") -> list[tuple[str, Any]]:
    """Leaf ``(path, value)`` pairs; list entries with a ``term`` key are addressed by it."""
    if isinstance(tree, dict):
        out = []
        for k, v in tree.items():
            out += flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(tree, list):
        out = []
        for i, v in enumerate(tree):
            key = f"[{v['term']}]" if isinstance(v, dict) and "term" in v else f"[{i}]"
            rest = {k: x for k, x in v.items() if k != "term"} if isinstance(v, dict) else v
            out += flatten(rest, prefix + key)
        return out
    return [(prefix, tree)]


def _fmt_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


def render_text(report: dict[str, Any]) -> str:
    net = report["network"]
    lines = [
        f"scenario: {report['scenario']}",
        f"network: {net['name']} rails={','.join(net['rails'])} digest={net['element_digest']}",
        "tolerances: " + ", ".join(f"{k}={v:g}" for k, v in report["tolerances"].items()),
        "",
    ]
    lines += [f"{path} = {_fmt_value(v)}" for path, v in flatten(report["quantities"])]
    return "\n".join(lines) + "\n"

import json
from itertools import product

import pytest
import sympy as sp

from photon_mediation.elements import BeamSplitter, Mirror
from photon_mediation.fock import inner, same_ray
from photon_mediation.network import (NetworkFormatError, build_fig1, dump_network, fig1_document,
                                      load_network, mirrors_variant, network_to_dict, staged_evolution)
from photon_mediation.postselect import no_crossing_filter, one_per_group

from conftest import eq7_state


def symbolic_no_crossing_amplitudes():
    """Independent oracle: expand the product input state word by word and
    multiply in the per-photon factor of each path through the secondary
    devices, dropping words that put two photons on one central splitter."""
    i = sp.I
    r = i / sp.sqrt(2)  # reflection at a central splitter: photon stays home
    through = {(1, "A"): r, (1, "B"): i, (2, "A"): r, (2, "B"): r, (3, "A"): r, (3, "B"): i}
    out = {}
    for word in product("AB", repeat=3):
        w = "".join(word)
        if w[:2] == "AA" or w[1:] == "BA":
            continue
        amp = sp.Integer(1) / (2 * sp.sqrt(2))
        for k, letter in enumerate(w, start=1):
            amp *= (1 if letter == "A" else i) * through[(k, letter)]
        out[w] = sp.nsimplify(sp.expand(amp))
    return out


def test_oracle_event_probability_is_three_sixteenths():
    amps = symbolic_no_crossing_amplitudes()
    assert sp.simplify(sum(sp.Abs(a) ** 2 for a in amps.values())) == sp.Rational(3, 16)


def test_fig1_rails_and_central_splitters(fig1):
    assert len(fig1.rails) == 6
    bs4, bs5 = fig1.element("BS4"), fig1.element("BS5")
    assert {fig1.partition.group_of(r) for r in bs4.rails} == {"MZ1", "MZ2"}
    assert {fig1.partition.group_of(r) for r in bs5.rails} == {"MZ2", "MZ3"}
    assert set(bs5.rails) == {"B2", "A3"}
    assert fig1.stages.stage_names == ("primary", "secondary")


def test_staged_primary_snapshot(fig1):
    snaps = staged_evolution(fig1)
    assert list(snaps) == ["primary", "secondary"]
    assert len(snaps["primary"]) == 8


def test_secondary_matches_oracle_and_eq7(fig1):
    snaps = staged_evolution(fig1)
    projected = one_per_group(fig1.partition).project(snaps["secondary"])
    oracle = symbolic_no_crossing_amplitudes()
    idx = {"A": 0, "B": 1}
    for w, amp in oracle.items():
        occ = [0] * 6
        for k, letter in enumerate(w):
            occ[2 * k + idx[letter]] = 1
        assert abs(projected.amplitude(occ) - complex(amp)) < 1e-12
    assert abs(projected.norm ** 2 - 3 / 16) < 1e-9
    filtered, p = no_crossing_filter(snaps["secondary"], fig1.partition)
    assert abs(p - 3 / 16) < 1e-9
    assert abs(abs(inner(filtered, eq7_state())) - 1) < 1e-9
    # this orientation reproduces the relative and global phases exactly
    assert filtered.allclose(eq7_state(), 1e-12)


def test_secondary_unfiltered_contains_bunched_terms(fig1):
    sec = staged_evolution(fig1)["secondary"]
    assert abs(sec.amplitude({"A1": 2, "B2": 1, "B3": 1})) > 0.1 or abs(sec.amplitude({"A1": 2, "A3": 1})) > 0.1
    assert any(max(o) == 2 for o in sec)
    assert abs(sec.norm - 1) < 1e-9


def test_mirrors_variant_is_minus_i_input(fig1):
    snaps = staged_evolution(mirrors_variant(fig1))
    assert snaps["secondary"].allclose(-1j * snaps["primary"], 1e-9)
    assert not same_ray(staged_evolution(fig1)["secondary"], snaps["secondary"])


def test_shipped_fixture_equals_builder(fig1):
    assert load_network(fig1_document()) == fig1


def test_round_trip(fig1):
    text = dump_network(fig1)
    assert dump_network(load_network(text)) == text
    assert json.loads(text) == network_to_dict(fig1)


def test_fingerprint_tracks_elements(fig1):
    flipped = fig1.with_stage("secondary", [BeamSplitter.straight("BS4", "A1", "A2"), Mirror("M1", "B1"),
                                            fig1.element("BS5"), fig1.element("M2")])
    assert flipped.fingerprint()["element_digest"] != fig1.fingerprint()["element_digest"]


def _doc(**overrides):
    d = json.loads(fig1_document())
    d.update(overrides)
    return d


def test_reject_undeclared_rail():
    d = _doc()
    d["stages"][1]["elements"][1]["rail"] = "X9"
    with pytest.raises(NetworkFormatError, match="X9"):
        load_network(json.dumps(d))


def test_reject_duplicate_rail():
    with pytest.raises(NetworkFormatError, match=r"rails\[6\].*duplicate"):
        load_network(json.dumps(_doc(rails=["A1", "B1", "A2", "B2", "A3", "B3", "A1"])))


def test_reject_malformed_routing():
    d = _doc()
    d["stages"][0]["elements"][0]["routing"]["B1"] = {"transmit": "A1", "reflect": "B1"}
    with pytest.raises(NetworkFormatError, match=r"stages\[0\]\.elements\[0\]\.routing"):
        load_network(json.dumps(d))


@pytest.mark.parametrize("bad", [1.5, -1, "1", True])
def test_reject_non_integer_occupation(bad):
    d = _doc()
    d["source"]["A1"] = bad
    with pytest.raises(NetworkFormatError, match=r"source\.A1"):
        load_network(json.dumps(d))


def test_reject_bad_json():
    with pytest.raises(NetworkFormatError, match="line"):
        load_network("{\n  'rails': }")


def test_single_splitter_document():
    doc = {
        "rails": ["a", "b"],
        "source": {"a": 1},
        "stages": [{"name": "primary", "elements": [
            {"kind": "beamsplitter", "name": "BS", "in_a": "a", "in_b": "b",
             "routing": {"a": {"transmit": "a", "reflect": "b"}, "b": {"transmit": "b", "reflect": "a"}}}]}],
        "partition": {"g": ["a", "b"]},
    }
    net = load_network(json.dumps(doc))
    out = staged_evolution(net)["primary"]
    assert out.amplitude((1, 0)) == pytest.approx(2 ** -0.5)
    assert out.amplitude((0, 1)) == pytest.approx(1j * 2 ** -0.5)

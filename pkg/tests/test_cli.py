import json

import pytest

from photon_mediation.cli import main
from photon_mediation.network import dump_network, fig1_document
from photon_mediation.report import SCENARIO_IDS, build_report, dumps_structured, flatten, render_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("scenario", SCENARIO_IDS)
def test_structured_report_deterministic_and_round_trips(capsys, scenario):
    code, first, _ = run(capsys, "run", "--scenario", scenario, "--format", "structured")
    assert code == 0
    _, second, _ = run(capsys, "run", "--scenario", scenario, "--format", "structured")
    assert first == second
    doc = json.loads(first)
    assert doc["schema_version"] == 1
    assert dumps_structured(doc) == first


@pytest.mark.parametrize("scenario", SCENARIO_IDS)
def test_text_and_structured_parity(scenario):
    report = build_report(scenario)
    text = render_text(report)
    body = text.split("\n\n", 1)[1]
    text_keys = [line.split(" = ", 1)[0] for line in body.strip().splitlines()]
    assert text_keys == [k for k, _ in flatten(report["quantities"])]


def _walk(tree, path=""):
    if isinstance(tree, dict):
        for k, v in tree.items():
            yield from _walk(v, f"{path}.{k}")
    elif isinstance(tree, list):
        yield path, tree
    else:
        yield path, tree


def test_report_invariants():
    report = build_report("full-report")
    for path, v in _walk(report["quantities"]):
        key = path.rsplit(".", 1)[-1]
        if "probability" in path and isinstance(v, float):
            assert 0 <= v <= 1, path
        if key.endswith("state") and isinstance(v, list):
            assert abs(sum(t["re"] ** 2 + t["im"] ** 2 for t in v) - 1) < 1e-9, path


def test_protocol_report_values():
    q = build_report("protocol")["quantities"]
    assert q["outcomes"]["D1"]["probability"] == pytest.approx(5 / 6)
    assert q["outcomes"]["D2"]["probability"] == pytest.approx(1 / 6)
    assert q["outcomes"]["D2"]["concurrence"] == pytest.approx(1)
    assert abs(q["outcomes"]["D1"]["entanglement_of_formation"] - 0.081) <= 0.005
    assert q["event_probability"] == pytest.approx(3 / 16)
    assert q["overlap_probability_2dp"] == 0.49


def test_baseline_report_side_by_side():
    q = build_report("baseline")["quantities"]
    assert q["baseline_probability"]["A1"] == pytest.approx(1 / 3)
    assert q["disturbed_probability"]["A1"] == pytest.approx(1 / 6)
    assert q["difference"]["A1"] == pytest.approx(-1 / 6)
    assert q["joint_condition_overlap"] == pytest.approx(1)


def test_mirrors_report():
    q = build_report("mirrors-variant")["quantities"]
    assert q["equals_minus_i_input"] is True


def test_text_output(capsys):
    code, out, _ = run(capsys, "run", "--scenario", "weak-values")
    assert code == 0
    assert "D1.weak_values.A1.re = 0.1" in out


def test_unknown_scenario_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--scenario", "nope"])
    assert exc.value.code == 2


def test_network_option(tmp_path, capsys):
    path = tmp_path / "fig1.json"
    path.write_text(fig1_document())
    code, out, _ = run(capsys, "run", "--scenario", "protocol", "--network", str(path), "--format", "structured")
    assert code == 0
    assert json.loads(out)["network"]["name"] == "fig1"


def test_load_failure_names_stage(tmp_path, capsys):
    doc = json.loads(fig1_document())
    doc["partition"]["MZ1"] = ["A1", "X9"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "run", "--scenario", "protocol", "--network", str(path))
    assert code != 0
    assert "[load]" in err and "X9" in err


def test_impossible_event_names_stage(tmp_path, capsys):
    doc = json.loads(fig1_document())
    doc["source"] = {"A1": 1, "A2": 1}
    path = tmp_path / "bunched.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "run", "--scenario", "protocol", "--network", str(path))
    assert code != 0
    assert "[postselect]" in err


def test_verify_fresh_build(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert out.count("PASS") == 10
    assert "FAIL" not in out


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0
    assert out.split() == ["C01-primary-state", "C02-mediated-state", "C03-overlap", "C04-detection",
                           "C05-entanglement", "C06-baseline-vs-disturbed", "C07-weak-values",
                           "C08-decomposition", "C09-properties", "C10-mirrors-variant"]
    assert "PASS" not in out


def test_verify_flipped_bs4_reports_first_mismatch(tmp_path, capsys):
    doc = json.loads(fig1_document())
    bs4 = doc["stages"][1]["elements"][0]
    assert bs4["name"] == "BS4"
    bs4["routing"] = {"A1": {"transmit": "A1", "reflect": "A2"}, "A2": {"transmit": "A2", "reflect": "A1"}}
    path = tmp_path / "flipped.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--network", str(path))
    assert code == 1
    line = next(ln for ln in out.splitlines() if "C02-mediated-state" in ln)
    assert line.startswith("FAIL") and "psi[ABB]" in line


def test_fixture_is_dump_of_builder():
    from photon_mediation.network import build_fig1
    assert fig1_document() == dump_network(build_fig1())

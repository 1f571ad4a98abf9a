import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from photon_mediation import analysis as an
from photon_mediation.postselect import RegisterState

S2, S10 = math.sqrt(2), math.sqrt(10)


@pytest.fixture(scope="module")
def ensembles(protocol):
    return {lab: an.PrePostEnsemble(protocol.register, protocol.outcomes[det].postselected, lab)
            for lab, det in (("n", "D2"), ("m", "D1"))}


def test_weak_value_examples(ensembles):
    A1, B1 = an.PathProjector.single(1, "A"), an.PathProjector.single(1, "B")
    assert an.weak_value(ensembles["n"], A1) == pytest.approx(0.5, abs=1e-9)
    assert an.weak_value(ensembles["m"], A1) == pytest.approx(0.1, abs=1e-9)
    assert an.weak_value(ensembles["m"], B1) == pytest.approx(0.9, abs=1e-9)


def test_orthogonal_ensemble_rejected():
    with pytest.raises(an.UndefinedWeakValueError):
        an.PrePostEnsemble(RegisterState({"AB": 1}), RegisterState({"BA": 1}))


def test_single_tables(ensembles):
    n = an.weak_value_table(ensembles["n"]).by_label()
    m = an.weak_value_table(ensembles["m"]).by_label()
    assert n == pytest.approx(dict.fromkeys(["A1", "B1", "A2", "B2", "A3", "B3"], 0.5), abs=1e-9)
    assert m == pytest.approx({"A1": 0.1, "B1": 0.9, "A2": 0.5, "B2": 0.5, "A3": 0.1, "B3": 0.9}, abs=1e-9)
    for table in (n, m):
        assert all(abs(v.imag) < 1e-9 for v in table.values())
        for k in (1, 2, 3):
            assert table[f"A{k}"] + table[f"B{k}"] == pytest.approx(1, abs=1e-9)


def test_postselection_probability_in_report(ensembles):
    assert an.weak_value_table(ensembles["n"]).postselection_probability == pytest.approx(1 / 6)
    assert an.joint_weak_values(ensembles["m"]).postselection_probability == pytest.approx(5 / 6)


def _joint(e):
    return {"".join(c for _, c in p.assignments): v for p, v in an.joint_weak_values(e).table.items()}


def test_joint_tables(ensembles):
    n, m = _joint(ensembles["n"]), _joint(ensembles["m"])
    want_n = dict.fromkeys(n, 0.0) | {"ABB": 0.5, "BAA": 0.5}
    want_m = dict.fromkeys(m, 0.0) | {"ABB": 0.1, "BAA": 0.1, "BAB": 0.4, "BBB": 0.4}
    assert n == pytest.approx(want_n, abs=1e-9)
    assert m == pytest.approx(want_m, abs=1e-9)
    for table in (n, m):
        assert len(table) == 8
        assert sum(table.values()) == pytest.approx(1, abs=1e-9)
        for w in ("AAA", "AAB", "ABA", "BBA"):
            assert abs(table[w]) < 1e-12


def test_product_of_weak_values_differs(ensembles):
    m = ensembles["m"]
    joint = an.weak_value(m, an.PathProjector.word("ABB"))
    prod = 1
    for p, c in ((1, "A"), (2, "B"), (3, "B")):
        prod *= an.weak_value(m, an.PathProjector.single(p, c))
    assert joint == pytest.approx(0.1)
    assert prod == pytest.approx(9 / 200)
    assert abs(joint - prod) > 1e-3


@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_gauge_invariance(protocol, a, b):
    for det in ("D1", "D2"):
        e = an.PrePostEnsemble(protocol.register, protocol.outcomes[det].postselected)
        rot = an.PrePostEnsemble(e.pre.scaled(cmath.exp(1j * a)), e.post.scaled(cmath.exp(1j * b)))
        for p in an.single_projectors() + an.joint_projectors():
            assert abs(an.weak_value(rot, p) - an.weak_value(e, p)) < 1e-12


def test_marginalization(ensembles):
    for e in ensembles.values():
        singles = an.weak_value_table(e).by_label()
        joints = _joint(e)
        for k in (1, 2, 3):
            for c in "AB":
                total = sum(v for w, v in joints.items() if w[k - 1] == c)
                assert total == pytest.approx(singles[f"{c}{k}"], abs=1e-9)


@pytest.mark.parametrize("photon, letter, want", [(1, "A", 1 / 6), (1, "B", 5 / 6), (3, "A", 1 / 6)])
def test_expectation_decomposition_examples(protocol, photon, letter, want):
    posts = [(protocol.outcomes["D1"].probability, protocol.outcomes["D1"].postselected),
             (protocol.outcomes["D2"].probability, protocol.outcomes["D2"].postselected)]
    lhs, rhs = an.expectation_decomposition(protocol.register, posts, an.PathProjector.single(photon, letter))
    assert lhs == pytest.approx(want, abs=1e-9)
    assert rhs == pytest.approx(want, abs=1e-9)


def test_expectation_decomposition_all_projectors(protocol):
    posts = [(o.probability, o.postselected) for o in protocol.outcomes.rows.values()]
    for p in an.single_projectors() + an.joint_projectors():
        lhs, rhs = an.expectation_decomposition(protocol.register, posts, p)
        assert abs(lhs - rhs) < 1e-9


def test_expectation_decomposition_incomplete(protocol):
    posts = [(protocol.outcomes["D1"].probability, protocol.outcomes["D1"].postselected)]
    with pytest.raises(ValueError, match="sum"):
        an.expectation_decomposition(protocol.register, posts, an.PathProjector.single(1, "A"))


def test_projector_validation():
    with pytest.raises(ValueError):
        an.PathProjector(((1, "A"), (1, "B")))
    with pytest.raises(ValueError):
        an.PathProjector(((1, "C"),))
    assert an.PathProjector.word("ABB").label == "A1,B2,B3"


def test_concurrence_examples():
    singlet = RegisterState({"AB": 1 / S2, "BA": -1 / S2}, (1, 3))
    # direct oracle: 2 |0 * (2 sqrt2 / sqrt10) - (-i/sqrt10)(-i/sqrt10)| = 2/10
    phi_amps = {"AB": -1j / S10, "BA": -1j / S10, "BB": 2 * S2 / S10}
    oracle = 2 * abs(0 * phi_amps["BB"] - phi_amps["AB"] * phi_amps["BA"])
    assert oracle == pytest.approx(0.2, abs=1e-15)
    assert an.concurrence(singlet) == pytest.approx(1, abs=1e-9)
    assert an.concurrence(RegisterState(phi_amps, (1, 3))) == pytest.approx(oracle, abs=1e-9)
    assert an.concurrence(RegisterState({"AB": 1}, (1, 3))) == 0


@given(st.floats(0, 2 * math.pi))
def test_concurrence_phase_invariant(theta):
    phi = RegisterState({"AB": -1j / S10, "BA": -1j / S10, "BB": 2 * S2 / S10}, (1, 3))
    assert an.concurrence(phi.scaled(cmath.exp(1j * theta))) == pytest.approx(0.2, abs=1e-12)


def test_entanglement_of_formation_values():
    assert an.entanglement_of_formation(1.0) == pytest.approx(1.0)
    assert an.entanglement_of_formation(0.0) == pytest.approx(0.0, abs=1e-15)
    assert abs(an.entanglement_of_formation(0.2) - 0.081) <= 0.005
    # oracle: binary entropy evaluated by hand
    x = (1 + math.sqrt(0.96)) / 2
    assert an.entanglement_of_formation(0.2) == pytest.approx(-x * math.log2(x) - (1 - x) * math.log2(1 - x))


@given(st.floats(0, 1), st.floats(0, 1))
def test_entanglement_of_formation_monotone(a, b):
    lo, hi = sorted((a, b))
    assert an.entanglement_of_formation(lo) <= an.entanglement_of_formation(hi) + 1e-12


def test_entanglement_of_formation_domain():
    with pytest.raises(ValueError):
        an.entanglement_of_formation(1.5)

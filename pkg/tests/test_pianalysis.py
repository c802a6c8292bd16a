import numpy as np
import pytest

from pinonlocal import (
    Classification,
    Confidence,
    PreconditionError,
    StateEnsemble,
    Tri,
    ValidationError,
    build_example1,
    build_example2,
    build_example3,
    build_example4,
    check_theorem1,
    check_theorem2,
    check_theorem3_premises,
    check_theorem4_premises,
    classify,
    make_pi_context,
    pi_values,
    pi_witness_lower_bound,
    solve_me,
)
from pinonlocal.pianalysis import Conclusion, Theorem

from conftest import random_density

FIXTURES = {
    "example1": build_example1,
    "example2": build_example2,
    "example3": build_example3,
    "example4": build_example4,
}
HALVES = ([1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4])


@pytest.fixture(scope="module")
def reports():
    out = {}
    for name, build in FIXTURES.items():
        e = build()
        for s in HALVES:
            out[name, tuple(s)] = classify(e, s)
    return out


# --- block-positivity premise and gap checks ------------------------------------------------

def test_theorem1_example3():
    e = build_example3()
    cert = check_theorem1(make_pi_context(e, [1, 2]), (1, 3))
    assert cert.holds and cert.theorem is Theorem.T1_SEP_VALUE
    nonzero = [c for c in cert.checks if c.label != (1, 3)]
    assert len(nonzero) == 3 and all(c.is_psd for c in nonzero)
    assert cert.confidence is Confidence.CERTIFIED

    cert = check_theorem1(make_pi_context(e, [1, 3]), (1, 2))
    assert cert.holds
    assert [c.label for c in cert.checks if c.is_ew] == [(3, 2)]
    assert cert.confidence is Confidence.HEURISTIC


def test_theorem1_zero_difference_at_mu():
    ctx = make_pi_context(build_example4(), [1, 2])
    for mu in ctx.omega:
        cert = check_theorem1(ctx, mu)
        (own,) = [c for c in cert.checks if c.label == mu]
        assert own.is_psd and own.is_sep_star
        assert np.all(own.operator.entries == 0)


def test_theorem1_fails_and_rejects_unknown_mu():
    ctx = make_pi_context(build_example4(), [1, 2])
    cert = check_theorem1(ctx, (2, 4))
    assert not cert.holds and cert.conclusion is Conclusion.FAILS
    with pytest.raises(ValidationError):
        check_theorem1(ctx, (3, 4))


def test_theorem2_examples():
    e3, e4 = build_example3(), build_example4()
    cert = check_theorem2(make_pi_context(e3, [1, 3]), (1, 2))
    assert cert.holds and cert.ew_labels == ((3, 2),)
    cert = check_theorem2(make_pi_context(e3, [1, 2]), (1, 3))
    assert not cert.holds and cert.ew_labels == ()
    cert = check_theorem2(make_pi_context(e4, [1, 2]), (1, 3))
    # (2,4) is PSD + witness and may be a witness as well
    assert cert.holds and (1, 4) in cert.ew_labels


def test_theorem2_requires_premise():
    ctx = make_pi_context(build_example4(), [1, 2])
    with pytest.raises(PreconditionError):
        check_theorem2(ctx, (2, 4))
    other = check_theorem1(ctx, (1, 3))
    with pytest.raises(PreconditionError):
        check_theorem2(ctx, (1, 4), premise=other)


# --- base-ensemble premise patterns --------------------------------------------------------------

@pytest.mark.parametrize(
    "name, t3, t4",
    [("example1", True, False), ("example2", False, True), ("example3", True, False), ("example4", False, True)],
)
def test_premise_patterns(name, t3, t4):
    e = FIXTURES[name]()
    c3, c4 = check_theorem3_premises(e), check_theorem4_premises(e)
    assert c3.holds is t3 and c4.holds is t4
    assert c3.theorem is Theorem.T3_PREMISE and c4.theorem is Theorem.T4_PREMISE
    if c3.holds:
        assert (1, 3) in c3.ew_labels
    if c4.holds:
        assert c4.ew_labels == ((3, 4),)


def test_premise_pattern_needs_four_states():
    e = build_example4().subensemble([1, 2, 3])
    with pytest.raises(ValidationError):
        check_theorem3_premises(e)


# --- numeric consistency of the theorem checks ------------------------------------------------------

def test_theorem_checks_agree_with_solver():
    for build in FIXTURES.values():
        e = build()
        for s in HALVES:
            ctx = make_pi_context(e, s)
            pg, result = pi_values(e, ctx)
            for mu in ctx.omega:
                t1 = check_theorem1(ctx, mu)
                if not t1.holds:
                    continue
                floor = 2 * ctx.tilde.prior(mu)
                assert pg >= floor - 1e-9
                t2 = check_theorem2(ctx, mu, premise=t1)
                if t2.holds:
                    for w in t2.ew_labels:
                        bound = pi_witness_lower_bound(ctx, mu, w)
                        assert bound >= floor + 1e-9
                        assert pg >= bound - 1e-9
                else:
                    assert result.value <= ctx.tilde.prior(mu) + 1e-6


# --- classifier ---------------------------------------------------------------------------------------

def test_headline_verdicts(reports):
    assert reports["example3", (1, 2)].classification is Classification.ANNIHILATES
    assert reports["example3", (1, 3)].classification is Classification.PRESERVES_NONLOCALITY
    assert reports["example4", (1, 2)].classification is Classification.CREATES
    assert reports["example4", (1, 3)].classification is Classification.PRESERVES_LOCALITY
    assert reports["example1", (1, 2)].classification is Classification.ANNIHILATES
    assert reports["example1", (1, 3)].classification is Classification.PRESERVES_NONLOCALITY
    assert reports["example2", (1, 2)].classification is Classification.CREATES
    assert reports["example2", (1, 3)].classification is Classification.PRESERVES_LOCALITY


def test_example4_report_values(reports):
    r = reports["example4", (1, 3)]
    assert r.confidence is Confidence.CERTIFIED
    assert r.values["p_SEP_PI"] == pytest.approx(7 / 12, abs=1e-12)
    assert r.values["p_G_PI"] == pytest.approx(7 / 12, abs=1e-7)
    assert r.values["p_G"] == pytest.approx(1 / 3, abs=1e-7)
    r = reports["example4", (1, 2)]
    assert r.confidence is Confidence.HEURISTIC
    assert r.values["pi_witness_bound"] == pytest.approx(7 / 12 + 1 / 24, abs=1e-12)
    assert r.values["p_G_PI"] >= 7 / 12 + 1 / 24 - 1e-6


def test_exchange_symmetry(reports):
    for name in FIXTURES:
        for s in HALVES:
            comp = tuple(x for x in (1, 2, 3, 4) if x not in s)
            assert reports[name, tuple(s)].classification is reports[name, comp].classification


def test_structural_soundness(reports):
    for r in reports.values():
        if r.classification is Classification.ANNIHILATES:
            assert r.base.nonlocal_ is Tri.CERTIFIED_YES and r.base.certificate.ew_labels
            assert r.pi.nonlocal_ is Tri.CERTIFIED_NO
            assert all(c.is_psd for c in r.pi.certificate.checks)
        if r.classification is Classification.CREATES:
            assert r.base.nonlocal_ is Tri.CERTIFIED_NO
            assert all(c.is_psd for c in r.base.certificate.checks)
            assert r.pi.nonlocal_ is Tri.CERTIFIED_YES and r.pi.certificate.ew_labels
        for leg in (r.base, r.pi):
            assert leg.derivation
        if Confidence.HEURISTIC in (r.base.confidence, r.pi.confidence):
            assert r.confidence is Confidence.HEURISTIC


def test_identical_states_preserve_locality(rng):
    rho = random_density(rng)
    e = StateEnsemble((0.25,) * 4, (rho,) * 4)
    for s in ([1, 2], [1, 3], [2]):
        r = classify(e, s)
        assert r.classification is Classification.PRESERVES_LOCALITY
        assert r.confidence is Confidence.CERTIFIED


def test_inconclusive_when_no_premise_applies(reports):
    assert reports["example4", (1, 4)].classification is Classification.INCONCLUSIVE


def test_report_to_dict(reports):
    d = reports["example3", (1, 2)].to_dict()
    assert d["classification"] == "ANNIHILATES"
    assert set(d) >= {"S", "base", "pi", "confidence", "values"}


def test_solver_matches_base_leg(reports):
    for (name, s), r in reports.items():
        if r.base.nonlocal_ is Tri.CERTIFIED_NO:
            assert r.values["p_G"] == pytest.approx(r.values["p_SEP"], abs=1e-7)
        if r.base.nonlocal_ is Tri.CERTIFIED_YES:
            assert r.values["p_G"] > r.values["p_SEP"]

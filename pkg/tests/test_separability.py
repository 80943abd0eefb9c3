import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entanglekit import families as fam
from entanglekit import separability as sep
from entanglekit.errors import NotApplicable
from entanglekit.sampling import make_rng, random_density_hs, random_separable
from entanglekit.states import maximally_mixed, product_density, product_state

TILES_RESHUFFLING_EVIDENCE = 0.0874124648375205


def test_ppt_examples():
    v = sep.ppt_criterion(fam.werner(2, 0.5))
    assert v.detected and v.evidence == pytest.approx(-1 / 8, abs=1e-12)
    v = sep.ppt_criterion(fam.werner(2, 1 / 3))
    assert not v.detected and v.evidence == pytest.approx(0, abs=1e-12)
    assert sep.ppt_criterion(fam.tiles_upb_state()).outcome is sep.Outcome.PASSED


def test_reduction_examples():
    v = sep.reduction_criterion(fam.bell("phi+"))
    assert v.detected and v.evidence == pytest.approx(-0.5, abs=1e-12)
    assert not sep.reduction_criterion(product_state([1, 1j], [1, 0, 2])).detected
    assert not sep.reduction_criterion(fam.tiles_upb_state()).detected


def test_majorisation_examples():
    assert sep.majorisation_criterion(fam.bell("phi+")).detected
    assert not sep.majorisation_criterion(maximally_mixed((2, 2))).detected
    v = sep.majorisation_criterion(fam.werner(2, 0.9))
    assert v.detected and v.evidence == pytest.approx(0.425, abs=1e-12)


def test_majorization_excess():
    assert sep.majorization_excess([0.5, 0.5], [1, 0]) == pytest.approx(0)
    assert sep.majorization_excess([1, 0], [0.5, 0.5]) == pytest.approx(0.5)


def test_entropy_examples(rng):
    from entanglekit.states import conditional_entropy

    psi = fam.bell("psi-")
    v = sep.entropy_criterion(psi, 1.0)
    assert v.detected and v.criterion == "entropy_q=1"
    assert v.evidence == pytest.approx(conditional_entropy(psi))
    for _ in range(10):
        rho = random_separable((2, 3), rng, n_terms=1)
        for q in (0.5, 1.0, 2.0, np.inf):
            assert not sep.entropy_criterion(rho, q).detected


def test_reshuffling_examples(rng):
    v = sep.reshuffling_criterion(fam.bell("phi+"))
    assert v.detected and v.evidence == pytest.approx(1, abs=1e-12)
    for _ in range(10):
        v = sep.reshuffling_criterion(random_separable((3, 3), rng, n_terms=1))
        assert not v.detected and v.evidence <= 1e-12


def test_tiles_reshuffling_regression():
    v = sep.reshuffling_criterion(fam.tiles_upb_state())
    assert v.detected
    assert v.evidence == pytest.approx(TILES_RESHUFFLING_EVIDENCE, abs=1e-10)


def test_mehta_ball():
    assert sep.mehta_ball_test(maximally_mixed((2, 2))) is sep.BallMembership.INSIDE
    assert sep.mehta_ball_test(fam.bell("phi+")) is sep.BallMembership.OUTSIDE
    w = fam.werner(2, 1 / 3)
    assert w.purity == pytest.approx(1 / 3, abs=1e-14)
    assert sep.mehta_ball_test(w) is sep.BallMembership.INSIDE
    assert sep.mehta_ball_test(fam.werner(2, 0.34)) is sep.BallMembership.OUTSIDE
    with pytest.raises(NotApplicable):
        sep.mehta_ball_test(maximally_mixed((2, 3)))


def test_absolute_separability():
    A = sep.AbsoluteSeparability
    assert sep.absolute_separability_2q([0.25] * 4) is A.ABSOLUTELY_SEPARABLE
    assert sep.max_concurrence_on_orbit([0.25] * 4) == pytest.approx(-0.5)
    assert sep.absolute_separability_2q([1, 0, 0, 0]) is A.NOT
    spec = [0.5, 1 / 6, 1 / 6, 1 / 6]
    assert sep.max_concurrence_on_orbit(spec) == pytest.approx(0, abs=1e-15)
    assert sep.absolute_separability_2q(spec) is A.ABSOLUTELY_SEPARABLE
    np.testing.assert_allclose(fam.werner(2, 1 / 3).spectrum, spec, atol=1e-14)


def test_boundary_membership():
    B = sep.Boundary
    assert sep.boundary_membership_2q(fam.werner(2, 1 / 3)) is B.BOUNDARY
    assert sep.boundary_membership_2q(maximally_mixed((2, 2))) is B.INTERIOR
    assert sep.boundary_membership_2q(product_state([1, 0], [1, 0])) is B.BOUNDARY
    with pytest.raises(NotApplicable):
        sep.boundary_membership_2q(fam.werner(2, 0.5))


def test_witness():
    phi = fam.bell("phi+").projector()
    w = sep.WitnessOperator.normalized(np.eye(4) / 2 - phi)
    value, detected = sep.witness_expectation(fam.bell("phi+"), w)
    assert value < 0 and detected
    value, detected = sep.witness_expectation(maximally_mixed((2, 2)), w)
    assert value >= 0 and not detected
    ident = sep.WitnessOperator(np.eye(4) / 4)
    rng = make_rng(5)
    for _ in range(5):
        value, detected = sep.witness_expectation(random_density_hs((2, 2), rng), ident)
        assert value == pytest.approx(0.25) and not detected
    with pytest.raises(ValueError):
        sep.WitnessOperator.normalized(np.eye(4) / 4 - phi)


def test_witness_nonnegative_on_products(rng):
    phi = fam.bell("phi+").projector()
    w = sep.WitnessOperator.normalized(np.eye(4) / 2 - phi)
    for _ in range(200):
        rho = random_separable((2, 2), rng)
        assert sep.witness_expectation(rho, w)[0] >= -1e-12


def test_aggregate_examples():
    A = sep.Aggregate
    r = sep.aggregate_report(fam.werner(2, 0.5))
    assert r.aggregate is A.ENTANGLED and r.decided_by == "ppt"
    assert sep.aggregate_report(fam.werner(2, 0.2)).aggregate is A.SEPARABLE
    assert sep.aggregate_report(fam.tiles_upb_state(), criteria=["ppt"]).aggregate is A.INCONCLUSIVE
    assert sep.aggregate_report(fam.tiles_upb_state()).aggregate is A.ENTANGLED


def test_report_order_and_json():
    r = sep.aggregate_report(fam.werner(2, 0.5), entropy_orders=(1.0, np.inf))
    names = [v.criterion for v in r.verdicts]
    assert names == ["ppt", "reduction", "majorisation", "entropy_q=1", "entropy_q=inf", "reshuffling"]
    doc = json.loads(r.to_json())
    assert doc["aggregate"] == "Entangled"
    assert doc["verdicts"][0]["outcome"] == "EntanglementDetected"
    with pytest.raises(ValueError):
        sep.aggregate_report(fam.werner(2, 0.5), criteria=["bogus"])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), na=st.integers(2, 3), nb=st.integers(2, 3))
def test_ppt_implies_reduction_and_majorisation(seed, na, nb):
    rho = random_density_hs((na, nb), make_rng(seed))
    if not sep.ppt_criterion(rho).detected:
        assert not sep.reduction_criterion(rho).detected


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_two_qubit_ppt_matches_concurrence(seed):
    from entanglekit.measures import concurrence_2q

    rho = random_density_hs((2, 2), make_rng(seed))
    c = concurrence_2q(rho)
    if c > 1e-6:
        assert sep.ppt_criterion(rho).detected
    elif c == 0:
        assert sep.ppt_criterion(rho).evidence > -1e-9

import json

import numpy as np
import pytest

from entanglekit import locc
from entanglekit.errors import MalformedSpectrum
from entanglekit.families import bell, maximally_entangled
from entanglekit.sampling import make_rng, random_pure

R = locc.Relation


def test_majorizes():
    assert locc.majorizes([1, 0], [0.5, 0.5])
    assert not locc.majorizes([0.5, 0.5], [0.7, 0.3])
    rng = make_rng(0)
    for _ in range(100):
        v = rng.dirichlet(np.ones(4))
        assert locc.majorizes(v, [0.25] * 4)


def test_nielsen():
    rng = make_rng(1)
    for _ in range(20):
        assert locc.nielsen_convertible(maximally_entangled(3), random_pure((3, 3), rng))
    assert not locc.nielsen_convertible([0.7, 0.3], [0.5, 0.5])
    assert locc.nielsen_convertible([0.5, 0.5], [0.7, 0.3])


def test_classify():
    assert locc.classify([0.7, 0.25, 0.05], [0.6, 0.27, 0.13]) is R.PAST
    assert locc.classify([0.6, 0.27, 0.13], [0.7, 0.25, 0.05]) is R.FUTURE
    assert locc.classify([0.6, 0.3, 0.1], [0.6, 0.3, 0.1]) is R.INTERCONVERTIBLE
    assert locc.classify([0.5, 0.5, 0], [0.6, 0.2, 0.2]) is R.INCOMPARABLE


def test_vidal():
    assert locc.vidal_probability([0.7, 0.25, 0.05], [1 / 3] * 3) == pytest.approx(0.15, abs=1e-12)
    assert locc.vidal_probability([0.6, 0.4, 0], [0.5, 0.3, 0.2]) == 0
    assert locc.vidal_probability([0.6, 0.3, 0.1], [0.6, 0.3, 0.1]) == 1


def test_vidal_properties():
    rng = make_rng(2)
    for _ in range(500):
        a, b = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        p = locc.vidal_probability(a, b)
        assert 0 <= p <= 1
        assert (p == 1) == locc.nielsen_convertible(a, b)


def test_states_and_vectors_agree():
    rng = make_rng(3)
    psi, phi = random_pure((3, 3), rng), random_pure((3, 3), rng)
    a = locc.conversion_report(psi, phi)
    b = locc.conversion_report(locc.schmidt_vector(psi), locc.schmidt_vector(phi))
    assert a == b
    assert locc.conversion_report(bell("phi+"), bell("psi-")).relation is R.INTERCONVERTIBLE


def test_report_json():
    doc = json.loads(locc.conversion_report([0.7, 0.25, 0.05], [1 / 3] * 3).to_json())
    assert doc["relation"] == "Past" and doc["p_c"] == pytest.approx(0.15)


def test_bad_vectors():
    with pytest.raises(MalformedSpectrum):
        locc.schmidt_vector([0.5, 0.6])
    with pytest.raises(MalformedSpectrum):
        locc.schmidt_vector([1.2, -0.2])

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entanglekit import families as fam
from entanglekit import measures as ms
from entanglekit.errors import DimensionMismatch, ParameterOutOfRange
from entanglekit.sampling import make_rng, random_density_hs, random_pure, random_separable
from entanglekit.states import maximally_mixed, product_state, pure_from_amplitudes, schmidt

# high-precision reference values (mpmath, 25 digits)
E1_THREE_QUARTERS = 0.5623351446188083502880303
EOF_C_HALF = 0.2457753666684710975378229
EOF_C_07 = 0.4102442930738744108951764


def schmidt_state(lam):
    lam = np.asarray(lam, dtype=float)
    n = lam.size
    return pure_from_amplitudes((n, n), np.diag(np.sqrt(lam)).reshape(-1))


def test_entanglement_entropy():
    assert ms.entanglement_entropy(fam.bell("phi+")) == pytest.approx(np.log(2), abs=1e-14)
    prod = product_state([1, 0], [0.6, 0.8])
    for q in (0.5, 1, 2, np.inf):
        assert abs(ms.renyi_entanglement(prod, q)) < 1e-12
    assert ms.entanglement_entropy(schmidt_state([0.75, 0.25])) == pytest.approx(E1_THREE_QUARTERS, abs=1e-14)


def test_tangle_and_concurrence():
    bell = fam.bell("psi-")
    assert ms.tangle(bell) == pytest.approx(1) and ms.concurrence_pure(bell) == pytest.approx(1)
    for n in (2, 3, 5):
        assert ms.tangle(fam.maximally_entangled(n)) == pytest.approx(2 * (n - 1) / n)
    assert ms.concurrence_pure(schmidt_state([0.9, 0.1])) == pytest.approx(0.6, abs=1e-14)


def test_closest_separable():
    d_fs, d_b, e_inf = ms.closest_separable_pure(fam.bell("phi+"))
    assert d_fs == pytest.approx(np.pi / 4) and e_inf == pytest.approx(np.log(2))
    assert ms.closest_separable_pure(product_state([1, 0], [1, 1])) == pytest.approx((0, 0, 0), abs=1e-7)
    d_fs, _, _ = ms.closest_separable_pure(schmidt_state([0.75, 0.25]))
    assert d_fs == pytest.approx(0.5235987755982988730771072, abs=1e-14)


def test_closest_separable_bures_matches_fs(rng):
    for _ in range(20):
        d_fs, d_b, _ = ms.closest_separable_pure(random_pure((3, 3), rng))
        # Bures distance between pure states is 2 sin(D_FS / 2)
        assert d_b == pytest.approx(2 * np.sin(d_fs / 2), abs=1e-12)


def test_negativity_on_pure_states(rng):
    for dims in ((2, 2), (2, 3), (3, 3)):
        for _ in range(10):
            psi = random_pure(dims, rng)
            lam = schmidt(psi).coefficients
            expect = np.sum(np.sqrt(lam)) ** 2 - 1
            assert ms.negativity(psi) == pytest.approx(expect, abs=1e-10)
            assert ms.reshuffling_negativity(psi) == pytest.approx(expect, abs=1e-10)
            assert ms.log_negativity(psi) == pytest.approx(np.log(expect + 1), abs=1e-10)
    for n in (2, 3, 4):
        assert ms.negativity(fam.maximally_entangled(n)) == pytest.approx(n - 1, abs=1e-12)


def test_werner_negativity_and_concurrence():
    for x in np.linspace(0, 1, 21):
        target = max(0.0, (3 * x - 1) / 2)
        rho = fam.werner(2, x)
        assert ms.negativity(rho) == pytest.approx(target, abs=1e-12)
        assert ms.concurrence_2q(rho) == pytest.approx(target, abs=1e-12)


def test_concurrence_examples():
    for a in np.linspace(0, 1, 11):
        assert ms.concurrence_2q(fam.sigma_h(a)) == pytest.approx(a, abs=1e-9)
    assert ms.concurrence_2q(product_state([1, 0], [1, 0])) == 0


def test_concurrence_routes_agree(rng):
    for _ in range(50):
        rho = random_density_hs((2, 2), rng)
        assert ms.concurrence_2q(rho) == pytest.approx(ms.concurrence_2q_root_fidelity(rho), abs=1e-7)
    for _ in range(20):
        psi = random_pure((2, 2), rng)
        a = psi.amplitude_matrix
        assert ms.concurrence_2q(psi) == pytest.approx(2 * abs(np.linalg.det(a)), abs=1e-7)
        assert ms.concurrence_pure(psi) == pytest.approx(2 * abs(np.linalg.det(a)), abs=1e-12)


def test_concurrence_requires_two_qubits():
    with pytest.raises(DimensionMismatch):
        ms.concurrence_2q(maximally_mixed((2, 3)))


def test_eof():
    assert ms.eof_2q(fam.bell("phi+")) == pytest.approx(np.log(2), abs=1e-12)
    assert ms.eof_2q(fam.werner(2, 0.2)) == 0
    assert ms.eof_from_concurrence(0.5) == pytest.approx(EOF_C_HALF, abs=1e-14)
    # the same value expressed in bits
    assert ms.eof_from_concurrence(0.5) / np.log(2) == pytest.approx(0.3546, abs=5e-5)
    assert ms.eof_2q(fam.werner(2, 0.8)) == pytest.approx(EOF_C_07, abs=1e-13)


def test_eof_pure_equals_entropy(rng):
    for _ in range(20):
        psi = random_pure((2, 2), rng)
        assert ms.eof_2q(psi) == pytest.approx(ms.entanglement_entropy(psi), abs=1e-7)


def test_max_fidelity_examples():
    assert ms.max_fidelity_2q(fam.bell("phi+")) == pytest.approx(1)
    assert ms.max_fidelity_2q(maximally_mixed((2, 2))) == pytest.approx(0.25)
    for b in np.linspace(0, 1, 11):
        assert ms.max_fidelity_2q(fam.sigma_b(b)) == pytest.approx(max(b, 1 - b), abs=1e-12)
    for x in np.linspace(0, 1, 11):
        assert ms.max_fidelity_2q(fam.werner(2, x)) == pytest.approx((1 + 3 * x) / 4, abs=1e-12)


def test_max_fidelity_pure(rng):
    for _ in range(10):
        psi = random_pure((2, 2), rng)
        assert ms.max_fidelity_pure(psi) == pytest.approx(ms.max_fidelity_2q(psi), abs=1e-10)


def test_max_fidelity_bruteforce():
    assert ms.max_fidelity_bruteforce(fam.bell("phi+")) == pytest.approx(1, abs=1e-3)
    assert ms.max_fidelity_bruteforce(maximally_mixed((2, 2)), samples=1000) == pytest.approx(0.25, abs=1e-14)
    for x in (0.1, 0.6):
        got = ms.max_fidelity_bruteforce(fam.werner(2, x))
        assert got == pytest.approx((1 + 3 * x) / 4, abs=1e-3)
        assert got <= (1 + 3 * x) / 4 + 1e-12
    a = ms.max_fidelity_bruteforce(fam.werner(2, 0.3), samples=500, seed=9)
    assert a == ms.max_fidelity_bruteforce(fam.werner(2, 0.3), samples=500, seed=9)


def test_eof_search_examples(rng):
    psi = random_pure((2, 2), rng)
    assert ms.eof_ensemble_search(psi) == pytest.approx(ms.entanglement_entropy(psi), abs=1e-12)
    a = product_state([1, 0], [1, 0]).to_density().matrix
    b = product_state([1, 1], [1, -1j]).to_density().matrix
    from entanglekit.states import density_from_matrix

    mix = density_from_matrix((2, 2), 0.4 * a + 0.6 * b)
    assert ms.eof_ensemble_search(mix, restarts=3, steps=300) <= 1e-6
    got = ms.eof_ensemble_search(fam.werner(2, 0.8), ensemble_size=4, restarts=3, steps=300)
    assert got == pytest.approx(EOF_C_07, abs=1e-3)


def test_eof_search_history_and_determinism():
    rho = random_density_hs((2, 2), make_rng(11))
    best, hist = ms.eof_ensemble_search(rho, restarts=3, steps=100, seed=4, full_output=True)
    assert len(hist) == 4 and best == hist[-1]
    assert all(b <= a for a, b in zip(hist, hist[1:]))
    assert best == ms.eof_ensemble_search(rho, restarts=3, steps=100, seed=4)
    assert best >= ms.eof_2q(rho) - 1e-9
    with pytest.raises(ParameterOutOfRange):
        ms.eof_ensemble_search(rho, ensemble_size=100)


def test_bound_functions():
    assert ms.neg_lower_bound(1) == pytest.approx(1)
    assert ms.neg_lower_bound(0) == 0
    lo, hi = ms.fid_bounds_from_C(1 / 3)
    assert lo == pytest.approx(1 / 3) and hi == pytest.approx(2 / 3)
    assert ms.er_sigma_h(1) == pytest.approx(np.log(2))
    assert ms.er_sigma_h(0) == 0
    assert ms.er_lower_bound(np.log(2)) == pytest.approx(np.log(2))
    with pytest.raises(ParameterOutOfRange):
        ms.neg_lower_bound(1.5)


def test_fid_bounds_from_N_continuous():
    s = (np.sqrt(5) - 2) / 3
    below = ms.fid_bounds_from_N(s - 1e-12)[0]
    above = ms.fid_bounds_from_N(s + 1e-12)[0]
    assert below == pytest.approx(above, abs=1e-9)
    assert ms.fid_bounds_from_N(0)[0] == pytest.approx(0.25)
    assert ms.fid_bounds_from_N(1)[0] == pytest.approx(1)


def test_er_lower_bound_tight_on_sigma_h():
    for a in np.linspace(0.05, 1, 20):
        rho = fam.sigma_h(a)
        assert ms.er_lower_bound(ms.eof_2q(rho)) == pytest.approx(ms.er_sigma_h(a), abs=1e-9)


def test_bound_curve():
    rows = ms.bound_curve("concurrence:negativity", 101)
    assert len(rows) == 101 and rows[-1] == (1.0, pytest.approx(1.0))
    rows = ms.bound_curve("eof:relative_entropy", 11)
    assert rows[-1][0] == pytest.approx(np.log(2))
    with pytest.raises(ParameterOutOfRange):
        ms.bound_curve("nope", 10)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_two_qubit_bounds_property(seed):
    rho = random_density_hs((2, 2), make_rng(seed))
    c, n, f = ms.concurrence_2q(rho), ms.negativity(rho), ms.max_fidelity_2q(rho)
    assert c >= n - 1e-9
    assert n >= ms.neg_lower_bound(c) - 1e-9
    lo, hi = ms.fid_bounds_from_C(c)
    assert lo - 1e-9 <= f <= hi + 1e-9


def test_measures_vanish_on_separable(rng):
    for _ in range(30):
        rho = random_separable((2, 2), rng)
        assert ms.negativity(rho) < 1e-12
        assert ms.concurrence_2q(rho) < 1e-7


def test_measure_report():
    r = ms.measure_report(fam.werner(2, 0.5))
    assert r["concurrence"] == pytest.approx(0.25) and r["negativity"] == pytest.approx(0.25)
    assert r["max_fidelity"] == pytest.approx(0.625)
    r = ms.measure_report(maximally_mixed((2, 2)))
    assert r["concurrence"] == 0 and r["eof"] == 0 and r["negativity"] == 0
    assert r["max_fidelity"] == pytest.approx(0.25)
    r = ms.measure_report(maximally_mixed((3, 3)))
    assert "eof" in r.flags and "eof" not in r.values
    r = ms.measure_report(fam.bell("phi+"))
    assert r["distance_bures_separable"] == pytest.approx(r["concurrence"])

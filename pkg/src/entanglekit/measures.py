"""Entanglement measures, two-qubit closed forms, bounds and search oracles.

Pure-state measures are functions of the Schmidt vector. For two qubits the
mixed-state concurrence, entanglement of formation and maximal fidelity have
closed forms; ``eof_ensemble_search`` and ``max_fidelity_bruteforce`` are
independent numerical routes to the same quantities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import matkernel as mk
from .errors import DimensionMismatch, ParameterOutOfRange
from .states import (
    DensityMatrix,
    PureState,
    State,
    as_density,
    fano_form,
    partial_transpose,
    renyi_entropy,
    reshuffle,
    schmidt,
    spin_flip_2q,
)

# ---------------------------------------------------------------------------
# pure states


def entanglement_entropy(psi: PureState) -> float:
    """Von Neumann entropy of the Schmidt vector."""
    return renyi_entropy(schmidt(psi).coefficients, 1.0)


def renyi_entanglement(psi: PureState, q: float) -> float:
    return renyi_entropy(schmidt(psi).coefficients, q)


def tangle(psi: PureState) -> float:
    """``2 (1 - sum lambda_i^2)``; ranges over ``[0, 2(N-1)/N]``."""
    lam = schmidt(psi).coefficients
    return float(max(0.0, 2.0 * (1.0 - np.sum(lam**2))))


def concurrence_pure(psi: PureState) -> float:
    """Square root of the tangle; ``2 sqrt(l1 l2) = 2 |det A|`` for two qubits."""
    return float(np.sqrt(tangle(psi)))


def closest_separable_pure(psi: PureState) -> tuple[float, float, float]:
    """Distances from ``psi`` to the nearest product state.

    Returns
    -------
    distance_fs : float
        Fubini-Study distance ``arccos(sqrt(lambda_max))``.
    distance_bures : float
        Bures distance ``sqrt(2 (1 - sqrt(lambda_max)))``.
    e_infinity : float
        ``-ln lambda_max``.
    """
    lmax = float(min(1.0, schmidt(psi).coefficients[0]))
    root = np.sqrt(lmax)
    return float(np.arccos(root)), float(np.sqrt(max(0.0, 2 * (1 - root)))), float(-np.log(lmax))


def bures_to_separable_pure(psi: PureState) -> float:
    """Bures distance of a pure state to the closest separable mixed state.

    Evaluates ``(2 - 2 sum lambda_i^2)^(1/2)``, which coincides with the
    concurrence ``sqrt(tangle)``.
    """
    lam = schmidt(psi).coefficients
    return float(np.sqrt(max(0.0, 2 - 2 * np.sum(lam**2))))


def max_fidelity_pure(psi: PureState) -> float:
    """``exp(E_1/2) / N`` for an ``N x N`` pure state."""
    if psi.dims.n_a != psi.dims.n_b:
        raise DimensionMismatch("maximal fidelity is defined for N x N systems")
    return float(np.sum(np.sqrt(schmidt(psi).coefficients)) ** 2 / psi.dims.n_a)


# ---------------------------------------------------------------------------
# negativities (any dimension)


def negativity(state: State) -> float:
    """``||rho^T_A||_Tr - 1``."""
    w = np.linalg.eigvalsh(partial_transpose(state, "A"))
    return float(max(0.0, np.sum(np.abs(w)) - 1.0))


def log_negativity(state: State) -> float:
    return float(np.log(negativity(state) + 1.0))


def reshuffling_negativity(state: State) -> float:
    """``||rho^R||_Tr - 1``, signed (negative for weakly correlated states)."""
    return mk.trace_norm(reshuffle(state)) - 1.0


# ---------------------------------------------------------------------------
# two qubits


def _require_2q(rho: DensityMatrix) -> None:
    if (rho.dims.n_a, rho.dims.n_b) != (2, 2):
        raise DimensionMismatch(f"two-qubit measure applied to dims {rho.dims}")


def wootters_lambdas(state: State) -> np.ndarray:
    """Descending square roots of the eigenvalues of ``rho rho~``."""
    rho = as_density(state)
    _require_2q(rho)
    ev = np.linalg.eigvals(rho.matrix @ spin_flip_2q(rho).matrix)
    return np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]


def concurrence_2q(state: State) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``."""
    lam = wootters_lambdas(state)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_2q_root_fidelity(state: State) -> float:
    """Same quantity via the eigenvalues of ``sqrt(sqrt(rho) rho~ sqrt(rho))``."""
    rho = as_density(state)
    _require_2q(rho)
    s = mk.psd_sqrt(rho.matrix)
    lam = np.sort(np.clip(np.linalg.eigvalsh(mk.psd_sqrt(s @ spin_flip_2q(rho).matrix @ s)), 0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def binary_entropy(p: float) -> float:
    """Shannon entropy of ``(p, 1 - p)`` in nats."""
    p = float(np.clip(p, 0.0, 1.0))
    return float(-sum(x * np.log(x) for x in (p, 1.0 - p) if x > 0))


def eof_from_concurrence(c: float) -> float:
    c = float(np.clip(c, 0.0, 1.0))
    return binary_entropy(0.5 * (1 + np.sqrt(1 - c * c)))


def eof_2q(state: State) -> float:
    """Entanglement of formation of a two-qubit state (nats)."""
    return eof_from_concurrence(concurrence_2q(state))


def max_fidelity_2q(state: State) -> float:
    """Maximal overlap with a maximally entangled state, from the Fano correlations."""
    rho = as_density(state)
    _require_2q(rho)
    beta = fano_form(rho).beta
    kappa = np.linalg.svd(beta, compute_uv=False)
    det = np.linalg.det(beta)
    sign = -1.0 if det < 0 else 1.0
    return float(0.25 * (1 + kappa[0] + kappa[1] - sign * kappa[2]))


def haar_unitaries(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random ``n x n`` unitaries, shape ``(count, n, n)``."""
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def max_fidelity_bruteforce(state: State, samples: int = 100_000, seed: int = 0, chunk: int = 50_000) -> float:
    """Best overlap over sampled ``(U (x) 1)|phi+>`` (Haar ``U``).

    Every maximally entangled two-qubit state has this form, so the result
    lower-bounds the exact maximal fidelity.
    """
    rho = as_density(state)
    _require_2q(rho)
    if samples < 1:
        raise ParameterOutOfRange("samples must be >= 1")
    rng = np.random.default_rng(seed)
    best = -np.inf
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        vec = haar_unitaries(2, k, rng).reshape(k, 4) / np.sqrt(2)
        vals = np.einsum("ki,ij,kj->k", vec.conj(), rho.matrix, vec).real
        best = max(best, float(vals.max()))
        done += k
    return best


# ---------------------------------------------------------------------------
# entanglement of formation by ensemble search


def _ensemble_entropy(v: np.ndarray, w: np.ndarray, na: int, nb: int) -> float:
    z = v @ w.T  # rows are subnormalised ensemble members
    p = np.sum(np.abs(z) ** 2, axis=1)
    keep = p > 1e-15
    z = z[keep].reshape(-1, na, nb)
    s = np.linalg.svd(z, compute_uv=False) ** 2
    lam = s / s.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = -np.where(lam > 0, lam * np.log(lam), 0.0).sum(axis=1)
    return float(np.dot(p[keep], ent))


def _isometry(x: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(x, full_matrices=False)
    return u @ vh


def eof_ensemble_search(
    state: State,
    ensemble_size: int | None = None,
    restarts: int = 20,
    steps: int = 2000,
    seed: int = 0,
    full_output: bool = False,
):
    """Upper estimate of the entanglement of formation by direct minimisation.

    Decompositions ``z_i = sum_j V_ij sqrt(d_j) |e_j>`` of ``rho`` are
    parametrised by ``M x r`` isometries ``V`` acting on the eigen-ensemble.
    The eigen-ensemble itself is the first candidate; every restart draws a
    random isometry, refines it with a quasi-Newton step and then with
    greedy random perturbations of shrinking size. The best value is kept,
    so the running minimum never increases.

    Parameters
    ----------
    ensemble_size : int, optional
        Ensemble size ``M`` with ``rank <= M <= rank**2``; defaults to the rank.
    restarts, steps : int
        Number of random restarts and greedy perturbation steps per restart.
    seed : int
        Seed for the numpy ``Generator``; the search is deterministic per seed.
    full_output : bool
        If true, also return the running minimum after each restart.
    """
    rho = as_density(state)
    na, nb = rho.dims
    w_, e = np.linalg.eigh(rho.matrix)
    keep = w_ > 1e-12
    w = e[:, keep] * np.sqrt(w_[keep])
    r = w.shape[1]
    m = r if ensemble_size is None else int(ensemble_size)
    if not r <= m <= max(r * r, r):
        raise ParameterOutOfRange(f"ensemble size {m} outside [{r}, {r * r}]")
    rng = np.random.default_rng(seed)

    v0 = np.zeros((m, r), dtype=complex)
    v0[:r, :r] = np.eye(r)
    best = _ensemble_entropy(v0, w, na, nb)
    history = [best]
    if r == 1:
        return (best, history) if full_output else best

    def objective(flat: np.ndarray) -> float:
        x = flat[: m * r].reshape(m, r) + 1j * flat[m * r :].reshape(m, r)
        return _ensemble_entropy(_isometry(x), w, na, nb)

    for _ in range(restarts):
        x0 = rng.standard_normal(2 * m * r)
        res = optimize.minimize(objective, x0, method="L-BFGS-B", options={"maxiter": 400})
        x, fx = res.x, float(res.fun)
        scale = 0.05
        for _ in range(steps):
            trial = x + scale * rng.standard_normal(x.size)
            ft = objective(trial)
            if ft < fx:
                x, fx = trial, ft
            else:
                scale = max(scale * 0.995, 1e-6)
        best = min(best, fx)
        history.append(best)
    return (best, history) if full_output else best


# ---------------------------------------------------------------------------
# bound curves between two-qubit measures


def _unit_arg(name: str, value: float, upper: float = 1.0) -> float:
    if not -1e-12 <= value <= upper + 1e-12:
        raise ParameterOutOfRange(f"{name} = {value} outside [0, {upper:g}]")
    return float(np.clip(value, 0.0, upper))


def neg_lower_bound(c: float) -> float:
    """Smallest negativity compatible with concurrence ``c``."""
    c = _unit_arg("C", c)
    return float(np.sqrt((1 - c) ** 2 + c * c) + c - 1)


def fid_bounds_from_C(c: float) -> tuple[float, float]:
    """``(lower, upper)`` bounds on the maximal fidelity given concurrence."""
    c = _unit_arg("C", c)
    lo = (1 + c) / 4 if c <= 1 / 3 else c
    return float(lo), float((1 + c) / 2)


_NEG_FID_SWITCH = (np.sqrt(5) - 2) / 3


def fid_bounds_from_N(n: float) -> tuple[float, float]:
    """``(lower, upper)`` bounds on the maximal fidelity given negativity."""
    n = _unit_arg("N_T", n)
    if n <= _NEG_FID_SWITCH:
        lo = 0.25 + (n + np.sqrt(5 * n * n + 4 * n)) / 8
    else:
        lo = np.sqrt(2 * n * (n + 1)) - n
    return float(lo), float((1 + n) / 2)


def er_sigma_h(a: float) -> float:
    """Relative entropy of entanglement of ``sigma_H(a)``."""
    a = _unit_arg("a", a)
    second = (1 - a) * np.log(1 - a) if a < 1 else 0.0
    return float((a - 2) * np.log(1 - a / 2) + second)


def er_lower_bound(e_f: float) -> float:
    """Lower bound on the relative entropy of entanglement given ``E_F``."""
    e_f = _unit_arg("E_F", e_f, np.log(2))
    if e_f <= 0:
        return 0.0
    if e_f >= np.log(2) - 1e-15:
        mu = 0.5
    else:
        mu = optimize.brentq(lambda p: binary_entropy(p) - e_f, 0.5, 1.0, xtol=1e-15)
    c = np.sqrt(max(0.0, 1 - (2 * mu - 1) ** 2))
    return er_sigma_h(min(1.0, c))


BOUND_CURVES = {
    "concurrence:negativity": lambda t: neg_lower_bound(t),
    "concurrence:fidelity_lower": lambda t: fid_bounds_from_C(t)[0],
    "concurrence:fidelity_upper": lambda t: fid_bounds_from_C(t)[1],
    "negativity:fidelity_lower": lambda t: fid_bounds_from_N(t)[0],
    "negativity:fidelity_upper": lambda t: fid_bounds_from_N(t)[1],
    "eof:relative_entropy": lambda t: er_lower_bound(t),
    "sigma_h:relative_entropy": lambda t: er_sigma_h(t),
}

_CURVE_DOMAIN = {"eof:relative_entropy": np.log(2)}


def bound_curve(pair: str, grid: int) -> list[tuple[float, float]]:
    """Rows ``(parameter, value)`` of a bound curve on an even grid."""
    try:
        fn = BOUND_CURVES[pair]
    except KeyError:
        raise ParameterOutOfRange(f"unknown bound pair {pair!r}; known: {sorted(BOUND_CURVES)}") from None
    if grid < 2:
        raise ParameterOutOfRange("grid needs at least 2 points")
    xs = np.linspace(0.0, _CURVE_DOMAIN.get(pair, 1.0), grid)
    return [(float(x), fn(x)) for x in xs]


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class MeasureReport:
    values: dict[str, float]
    flags: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, key: str) -> float:
        return self.values[key]

    def to_dict(self) -> dict:
        return {"values": dict(self.values), "flags": dict(self.flags)}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def measure_report(state: State) -> MeasureReport:
    """Evaluate every measure applicable to ``state``."""
    rho = as_density(state)
    values: dict[str, float] = {
        "purity": rho.purity,
        "negativity": negativity(rho),
        "log_negativity": log_negativity(rho),
        "reshuffling_negativity": reshuffling_negativity(rho),
    }
    flags: dict[str, str] = {}
    is_2q = (rho.dims.n_a, rho.dims.n_b) == (2, 2)
    if isinstance(state, PureState):
        d_fs, d_b, e_inf = closest_separable_pure(state)
        values.update(
            entanglement_entropy=entanglement_entropy(state),
            renyi_entanglement_2=renyi_entanglement(state, 2.0),
            renyi_entanglement_half=renyi_entanglement(state, 0.5),
            tangle=tangle(state),
            concurrence=concurrence_pure(state),
            distance_fs=d_fs,
            distance_bures_pure=d_b,
            distance_bures_separable=bures_to_separable_pure(state),
            e_infinity=e_inf,
        )
        if state.dims.n_a == state.dims.n_b:
            values["max_fidelity"] = max_fidelity_pure(state)
    if is_2q:
        values["concurrence"] = concurrence_2q(rho)
        values["eof"] = eof_2q(rho)
        values["max_fidelity"] = max_fidelity_2q(rho)
        flags["eof"] = "closed form (two qubits)"
    else:
        flags["eof"] = "not available: closed form needs two qubits"
        if not isinstance(state, PureState):
            flags["concurrence"] = "not available: closed form needs two qubits"
    return MeasureReport(values, flags)

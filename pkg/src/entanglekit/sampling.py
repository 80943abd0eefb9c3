"""Seeded random states and Monte Carlo estimates of measure averages.

Randomness comes from numpy's PCG64 bit generator seeded with a 64-bit
integer. Work split across ``workers`` uses the derived seeds
``seed ^ worker_index`` and merges results in worker order, so output
depends only on ``(seed, n, dims, ensemble, workers)``.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import measures as ms
from .errors import ParameterOutOfRange, UnknownMeasure
from .states import DensityMatrix, DimsLike, PureState, State, as_dims

GENERATOR_ID = "numpy.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(dims: DimsLike, rng: np.random.Generator) -> PureState:
    """Fubini-Study (unitarily invariant) random pure state."""
    dims = as_dims(dims)
    v = _ginibre(rng, dims.d)
    return PureState(dims, v / np.linalg.norm(v))


def random_density_hs(dims: DimsLike, rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random mixed state ``G G^dagger / Tr G G^dagger``."""
    dims = as_dims(dims)
    g = _ginibre(rng, (dims.d, dims.d))
    m = g @ g.conj().T
    return DensityMatrix(dims, m / np.trace(m).real)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``n x n`` unitary."""
    return ms.haar_unitaries(n, 1, rng)[0]


def random_separable(dims: DimsLike, rng: np.random.Generator, n_terms: int = 4) -> DensityMatrix:
    """Convex mixture of ``n_terms`` random product pure states with random weights."""
    dims = as_dims(dims)
    weights = rng.dirichlet(np.ones(n_terms))
    m = np.zeros((dims.d, dims.d), dtype=complex)
    for p in weights:
        a = _ginibre(rng, dims.n_a)
        b = _ginibre(rng, dims.n_b)
        v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        m += p * np.outer(v, v.conj())
    return DensityMatrix(dims, m)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    standard_error: float
    n: int

    @classmethod
    def from_samples(cls, values) -> "McEstimate":
        v = np.asarray(values, dtype=float)
        se = float(np.std(v, ddof=1) / np.sqrt(v.size)) if v.size > 1 else float("nan")
        return cls(float(v.mean()), se, int(v.size))

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.mean - target) <= k * self.standard_error


def _pure_concurrence(state: State) -> float:
    if isinstance(state, PureState):
        return ms.concurrence_pure(state)
    return ms.concurrence_2q(state)


def _pure_only(fn: Callable[[PureState], float]) -> Callable[[State], float]:
    def wrapped(state: State) -> float:
        if not isinstance(state, PureState):
            raise UnknownMeasure(f"{fn.__name__} is defined for pure states only")
        return fn(state)

    return wrapped


# name -> (function, needs two qubits for mixed input)
MEASURES: dict[str, tuple[Callable[[State], float], bool]] = {
    "concurrence": (_pure_concurrence, True),
    "negativity": (ms.negativity, False),
    "log_negativity": (ms.log_negativity, False),
    "reshuffling_negativity": (ms.reshuffling_negativity, False),
    "entropy": (_pure_only(ms.entanglement_entropy), False),
    "tangle": (_pure_only(ms.tangle), False),
    "eof": (ms.eof_2q, True),
    "max_fidelity": (ms.max_fidelity_2q, True),
    "purity": (lambda s: s.to_density().purity if isinstance(s, PureState) else s.purity, False),
}

ENSEMBLES = ("pure", "hs")


def _check(measure_names: Sequence[str], dims, ensemble: str) -> None:
    if ensemble not in ENSEMBLES:
        raise ParameterOutOfRange(f"unknown ensemble {ensemble!r}; use one of {ENSEMBLES}")
    for name in measure_names:
        if name not in MEASURES:
            raise UnknownMeasure(f"unknown measure {name!r}; known: {sorted(MEASURES)}")
        fn, needs_2q = MEASURES[name]
        if ensemble == "hs" and (needs_2q and (dims.n_a, dims.n_b) != (2, 2)):
            raise UnknownMeasure(f"{name} on mixed states needs two qubits")
        if ensemble == "hs" and name in ("entropy", "tangle"):
            raise UnknownMeasure(f"{name} is defined for pure states only")
        if ensemble == "pure" and name in ("eof", "max_fidelity") and (dims.n_a, dims.n_b) != (2, 2):
            raise UnknownMeasure(f"{name} needs two qubits")


def _worker(names: Sequence[str], dims, n: int, seed: int, ensemble: str) -> np.ndarray:
    rng = make_rng(seed)
    out = np.empty((n, len(names)))
    if ensemble == "pure":
        raw = _ginibre(rng, (n, dims.d))
        states = (PureState(dims, v / np.linalg.norm(v)) for v in raw)
    else:
        raw = _ginibre(rng, (n, dims.d, dims.d))
        states = (DensityMatrix(dims, (g @ g.conj().T) / np.vdot(g, g).real) for g in raw)
    fns = [MEASURES[name][0] for name in names]
    for i, s in enumerate(states):
        for j, fn in enumerate(fns):
            out[i, j] = fn(s)
    return out


def sample_measures(
    names: Sequence[str],
    dims: DimsLike,
    n: int,
    seed: int,
    ensemble: str = "pure",
    workers: int = 1,
) -> np.ndarray:
    """Array of shape ``(n, len(names))`` evaluated on one shared sample."""
    dims = as_dims(dims)
    names = list(names)
    _check(names, dims, ensemble)
    if n < 1 or workers < 1:
        raise ParameterOutOfRange("n and workers must be positive")
    counts = [n // workers + (1 if w < n % workers else 0) for w in range(workers)]
    if workers == 1:
        return _worker(names, dims, n, seed, ensemble)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda w: _worker(names, dims, counts[w], seed ^ w, ensemble), range(workers)))
    return np.concatenate(parts, axis=0)


def mc_average(
    measure: str, dims: DimsLike, n: int, seed: int, ensemble: str = "pure", workers: int = 1
) -> McEstimate:
    values = sample_measures([measure], dims, n, seed, ensemble, workers)[:, 0]
    return McEstimate.from_samples(values)


def mc_scatter(
    pair: Sequence[str], dims: DimsLike, n: int, seed: int, ensemble: str = "hs", workers: int = 1
) -> list[tuple[float, float]]:
    x_name, y_name = pair
    arr = sample_measures([x_name, y_name], dims, n, seed, ensemble, workers)
    return [(float(x), float(y)) for x, y in arr]


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """CSV with a header row; floats written with ``repr`` (round-trip exact)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])


def write_metadata(path, *, seed: int, n: int, dims, ensemble: str, measures: Sequence[str], **extra) -> Path:
    """Sidecar JSON describing how a dataset was produced."""
    dims = as_dims(dims)
    meta = {
        "seed": int(seed),
        "n": int(n),
        "generator": GENERATOR_ID,
        "dims": [dims.n_a, dims.n_b],
        "ensemble": ensemble,
        "measures": list(measures),
    }
    for key, value in extra.items():
        meta[key] = asdict(value) if isinstance(value, McEstimate) else value
    path = Path(path)
    path.write_text(json.dumps(meta, indent=2))
    return path

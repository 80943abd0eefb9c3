"""Pure-state LOCC convertibility from Schmidt vectors.

``psi -> phi`` is possible by deterministic LOCC iff the Schmidt vector of
``psi`` is majorised by that of ``phi``. When it is not, the optimal success
probability of a probabilistic conversion is given by ratios of tail sums.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import MalformedSpectrum
from .states import PureState, schmidt

TIE_TOL = 1e-9
RANK_TOL = 1e-10


class Relation(str, enum.Enum):
    """Where the target lies relative to the source."""

    FUTURE = "Future"
    PAST = "Past"
    INTERCONVERTIBLE = "Interconvertible"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class ConversionReport:
    relation: Relation
    p_c: float

    def to_dict(self) -> dict:
        return {"relation": self.relation.value, "p_c": self.p_c}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


SchmidtLike = Union[PureState, Sequence[float], np.ndarray]


def schmidt_vector(x: SchmidtLike) -> np.ndarray:
    """Descending Schmidt vector from a pure state or a probability vector."""
    if isinstance(x, PureState):
        return schmidt(x).coefficients
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size == 0 or np.any(v < -1e-12) or abs(v.sum() - 1) > 1e-9:
        raise MalformedSpectrum("a Schmidt vector must be nonnegative and sum to 1")
    return np.sort(np.clip(v, 0.0, None))[::-1]


def _padded(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = max(a.size, b.size)
    return np.pad(a, (0, n - a.size)), np.pad(b, (0, n - b.size))


def majorizes(a: SchmidtLike, b: SchmidtLike, tol: float = TIE_TOL) -> bool:
    """True iff ``b`` is majorised by ``a`` (every partial sum of ``a`` dominates)."""
    a, b = _padded(schmidt_vector(a), schmidt_vector(b))
    return bool(np.all(np.cumsum(a) >= np.cumsum(b) - tol))


def nielsen_convertible(psi: SchmidtLike, phi: SchmidtLike, tol: float = TIE_TOL) -> bool:
    """Whether ``psi -> phi`` is possible with certainty under LOCC."""
    return majorizes(phi, psi, tol)


def classify(psi: SchmidtLike, phi: SchmidtLike, tol: float = TIE_TOL) -> Relation:
    forward = nielsen_convertible(psi, phi, tol)
    backward = nielsen_convertible(phi, psi, tol)
    if forward and backward:
        return Relation.INTERCONVERTIBLE
    if forward:
        return Relation.FUTURE
    if backward:
        return Relation.PAST
    return Relation.INCOMPARABLE


def vidal_probability(psi: SchmidtLike, phi: SchmidtLike, tol: float = TIE_TOL) -> float:
    """Optimal probability of converting ``psi`` into ``phi`` by LOCC.

    ``p_c = min_k (sum_{i>=k} l_psi_i) / (sum_{i>=k} l_phi_i)``. It is 1
    exactly when the deterministic conversion exists and 0 when the target
    has the larger Schmidt rank.
    """
    a, b = _padded(schmidt_vector(psi), schmidt_vector(phi))
    if nielsen_convertible(a, b, tol):
        return 1.0
    if np.count_nonzero(b > RANK_TOL) > np.count_nonzero(a > RANK_TOL):
        return 0.0
    tail_a = np.cumsum(a[::-1])[::-1]
    tail_b = np.cumsum(b[::-1])[::-1]
    mask = tail_b > RANK_TOL
    return float(np.clip(np.min(tail_a[mask] / tail_b[mask]), 0.0, 1.0))


def conversion_report(psi: SchmidtLike, phi: SchmidtLike, tol: float = TIE_TOL) -> ConversionReport:
    return ConversionReport(classify(psi, phi, tol), vidal_probability(psi, phi, tol))

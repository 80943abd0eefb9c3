"""Separability criteria and their aggregation into a report.

Every criterion is necessary for separability: detection proves
entanglement, passing proves nothing on its own. Only two rules may certify
separability: PPT in total dimension at most 6, and membership of the
maximal separable ball for two qubits.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import matkernel as mk
from .errors import DimensionMismatch, MalformedSpectrum, NotApplicable
from .states import (
    State,
    as_density,
    entropy,
    partial_trace,
    partial_transpose,
    reshuffle,
)

VIOLATION_TOL = 1e-9
DEFAULT_ENTROPY_ORDERS = (0.5, 1.0, 2.0, np.inf)
DEFAULT_CRITERIA = ("ppt", "reduction", "majorisation", "entropy", "reshuffling")


class Outcome(str, enum.Enum):
    DETECTED = "EntanglementDetected"
    PASSED = "Passed"
    NOT_APPLICABLE = "NotApplicable"


class Aggregate(str, enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    INCONCLUSIVE = "Inconclusive"


class BallMembership(str, enum.Enum):
    INSIDE = "InsideSeparableBall"
    OUTSIDE = "Outside"


class AbsoluteSeparability(str, enum.Enum):
    ABSOLUTELY_SEPARABLE = "AbsolutelySeparable"
    NOT = "Not"


class Boundary(str, enum.Enum):
    INTERIOR = "InteriorSeparable"
    BOUNDARY = "BoundarySeparable"


@dataclass(frozen=True)
class CriterionVerdict:
    criterion: str
    outcome: Outcome
    evidence: float
    detail: str = ""

    @property
    def detected(self) -> bool:
        return self.outcome is Outcome.DETECTED

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "outcome": self.outcome.value,
            "evidence": self.evidence,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class SeparabilityReport:
    verdicts: tuple[CriterionVerdict, ...]
    aggregate: Aggregate
    decided_by: str | None = None

    def to_dict(self) -> dict:
        return {
            "verdicts": [v.to_dict() for v in self.verdicts],
            "aggregate": self.aggregate.value,
            "decided_by": self.decided_by,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def verdict(self, criterion: str) -> CriterionVerdict:
        for v in self.verdicts:
            if v.criterion == criterion:
                return v
        raise KeyError(criterion)


def _min_eig(m) -> float:
    return float(np.linalg.eigvalsh(mk.hermitize(m, 1e-8))[0])


def _from_min_eig(name: str, evidence: float, tol: float, what: str) -> CriterionVerdict:
    outcome = Outcome.DETECTED if evidence < -tol else Outcome.PASSED
    return CriterionVerdict(name, outcome, evidence, f"minimal eigenvalue of {what}")


def ppt_criterion(state: State, tol: float = VIOLATION_TOL) -> CriterionVerdict:
    """Evidence is the smallest eigenvalue of the partial transpose."""
    return _from_min_eig("ppt", _min_eig(partial_transpose(state, "A")), tol, "rho^T_A")


def reduction_criterion(state: State, tol: float = VIOLATION_TOL) -> CriterionVerdict:
    rho = as_density(state)
    na, nb = rho.dims
    left = np.kron(partial_trace(rho, "B"), np.eye(nb)) - rho.matrix
    right = np.kron(np.eye(na), partial_trace(rho, "A")) - rho.matrix
    return _from_min_eig(
        "reduction", min(_min_eig(left), _min_eig(right)), tol, "rho_A x 1 - rho and 1 x rho_B - rho"
    )


def majorization_excess(x, y) -> float:
    """Largest amount by which a partial sum of ``x`` exceeds that of ``y``.

    Both vectors are sorted descending and zero-padded to a common length.
    ``x`` is majorised by ``y`` iff the result is <= 0 (up to tolerance).
    """
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.sort(np.asarray(y, dtype=float))[::-1]
    n = max(x.size, y.size)
    x = np.pad(x, (0, n - x.size))
    y = np.pad(y, (0, n - y.size))
    return float(np.max(np.cumsum(x) - np.cumsum(y)))


def majorisation_criterion(state: State, tol: float = VIOLATION_TOL) -> CriterionVerdict:
    """Checks ``lambda(rho)`` is majorised by both reduced spectra."""
    rho = as_density(state)
    lam = rho.spectrum
    excess = max(
        majorization_excess(lam, np.linalg.eigvalsh(partial_trace(rho, "B"))),
        majorization_excess(lam, np.linalg.eigvalsh(partial_trace(rho, "A"))),
    )
    outcome = Outcome.DETECTED if excess > tol else Outcome.PASSED
    return CriterionVerdict("majorisation", outcome, excess, "largest partial-sum excess over reduced spectra")


def _q_label(q: float) -> str:
    return "inf" if np.isinf(q) else f"{q:g}"


def entropy_criterion(state: State, q: float = 1.0, tol: float = VIOLATION_TOL) -> CriterionVerdict:
    """Evidence is ``min(S_q(rho) - S_q(rho_A), S_q(rho) - S_q(rho_B))``."""
    rho = as_density(state)
    s = entropy(rho, q)
    evidence = min(s - entropy(partial_trace(rho, "B"), q), s - entropy(partial_trace(rho, "A"), q))
    outcome = Outcome.DETECTED if evidence < -tol else Outcome.PASSED
    return CriterionVerdict(
        f"entropy_q={_q_label(q)}", outcome, evidence, "global minus larger local Renyi entropy"
    )


def reshuffling_criterion(state: State, tol: float = VIOLATION_TOL) -> CriterionVerdict:
    evidence = mk.trace_norm(reshuffle(state)) - 1.0
    outcome = Outcome.DETECTED if evidence > tol else Outcome.PASSED
    return CriterionVerdict("reshuffling", outcome, evidence, "trace norm of rho^R minus 1")


def mehta_ball_test(state: State) -> BallMembership:
    """Purity test ``1/Tr rho^2 >= N^2 - 1`` for an ``N x N`` system.

    Inside the ball the state is PPT; for two qubits it is also separable.
    """
    rho = as_density(state)
    n_a, n_b = rho.dims
    if n_a != n_b:
        raise NotApplicable("the ball test is stated for N x N systems")
    inside = 1.0 / rho.purity >= n_a * n_a - 1 - 1e-12
    return BallMembership.INSIDE if inside else BallMembership.OUTSIDE


def absolute_separability_2q(spectrum: Sequence[float]) -> AbsoluteSeparability:
    """Absolute separability of a two-qubit spectrum via ``x1 - x3 - 2 sqrt(x2 x4) <= 0``."""
    x = np.asarray(spectrum, dtype=float)
    if x.shape != (4,):
        raise MalformedSpectrum("expected four eigenvalues")
    if np.any(x < -1e-12) or np.any(np.diff(x) > 1e-12) or abs(x.sum() - 1) > 1e-9:
        raise MalformedSpectrum("spectrum must be descending, nonnegative and sum to 1")
    x = np.clip(x, 0.0, None)
    c_star = x[0] - x[2] - 2 * np.sqrt(x[1] * x[3])
    return AbsoluteSeparability.ABSOLUTELY_SEPARABLE if c_star <= 1e-12 else AbsoluteSeparability.NOT


def max_concurrence_on_orbit(spectrum: Sequence[float]) -> float:
    """``C* = x1 - x3 - 2 sqrt(x2 x4)`` (signed) for a descending spectrum."""
    x = np.clip(np.sort(np.asarray(spectrum, dtype=float))[::-1], 0.0, None)
    return float(x[0] - x[2] - 2 * np.sqrt(x[1] * x[3]))


def boundary_membership_2q(state: State, tol: float = 1e-12) -> Boundary:
    """Locate a PPT two-qubit state relative to the separable boundary.

    Raises
    ------
    NotApplicable
        If the dimensions are not 2x2 or the state is not PPT.
    """
    rho = as_density(state)
    if (rho.dims.n_a, rho.dims.n_b) != (2, 2):
        raise NotApplicable("boundary characterisation is for two qubits")
    pt = partial_transpose(rho, "A")
    if _min_eig(pt) < -VIOLATION_TOL:
        raise NotApplicable("state is not PPT, hence entangled")
    det_rho = float(np.prod(rho.spectrum))
    det_pt = float(np.prod(np.linalg.eigvalsh(pt)))
    if det_rho <= tol or det_pt <= tol:
        return Boundary.BOUNDARY
    return Boundary.INTERIOR


@dataclass(frozen=True)
class WitnessOperator:
    """Hermitian operator with unit trace."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = mk.hermitize(self.matrix, mk.HERMITIAN_TOL)
        if abs(np.trace(m).real - 1) > 1e-10:
            raise ValueError("witness must have unit trace; use WitnessOperator.normalized")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def normalized(cls, m) -> "WitnessOperator":
        m = mk.hermitize(m, mk.HERMITIAN_TOL)
        tr = np.trace(m).real
        if abs(tr) < 1e-12:
            raise ValueError("a traceless operator cannot be normalised to unit trace")
        return cls(m / tr)


def witness_expectation(state: State, w: WitnessOperator, tol: float = 1e-12) -> tuple[float, bool]:
    rho = as_density(state)
    if w.matrix.shape != rho.matrix.shape:
        raise DimensionMismatch(f"witness of shape {w.matrix.shape} vs state of dimension {rho.dims.d}")
    value = float(np.real(np.trace(rho.matrix @ w.matrix)))
    return value, value < -tol


def aggregate_report(
    state: State,
    criteria: Iterable[str] = DEFAULT_CRITERIA,
    entropy_orders: Iterable[float] = DEFAULT_ENTROPY_ORDERS,
    tol: float = VIOLATION_TOL,
) -> SeparabilityReport:
    """Run the selected criteria in declared order and combine the verdicts."""
    rho = as_density(state)
    verdicts: list[CriterionVerdict] = []
    for name in criteria:
        if name == "ppt":
            verdicts.append(ppt_criterion(rho, tol))
        elif name == "reduction":
            verdicts.append(reduction_criterion(rho, tol))
        elif name == "majorisation":
            verdicts.append(majorisation_criterion(rho, tol))
        elif name == "entropy":
            verdicts.extend(entropy_criterion(rho, q, tol) for q in entropy_orders)
        elif name == "reshuffling":
            verdicts.append(reshuffling_criterion(rho, tol))
        else:
            raise ValueError(f"unknown criterion {name!r}")

    if any(v.detected for v in verdicts):
        detector = next(v.criterion for v in verdicts if v.detected)
        return SeparabilityReport(tuple(verdicts), Aggregate.ENTANGLED, detector)

    dims = rho.dims
    ppt_passed = any(v.criterion == "ppt" and v.outcome is Outcome.PASSED for v in verdicts)
    if ppt_passed and dims.d <= 6:
        return SeparabilityReport(tuple(verdicts), Aggregate.SEPARABLE, "ppt (d <= 6)")
    if (dims.n_a, dims.n_b) == (2, 2) and mehta_ball_test(rho) is BallMembership.INSIDE:
        return SeparabilityReport(tuple(verdicts), Aggregate.SEPARABLE, "separable ball (2x2)")
    return SeparabilityReport(tuple(verdicts), Aggregate.INCONCLUSIVE, None)

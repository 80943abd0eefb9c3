"""Geometric diagnostics and figure data.

The octant picture writes a two-qubit pure state as
``Z = (n0, n1 e^{i nu1}, n2 e^{i nu2}, n3 e^{i nu3})``; the moduli live on
the positive octant of the 3-sphere and are drawn through a gnomonic
projection centred at ``c = (1, 1, 1, 1)/2``, in which the octant becomes a
tetrahedron.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatch, MalformedProfile
from .states import DensityMatrix, PureState, State, as_density, pure_from_amplitudes
from .measures import entanglement_entropy

_C = np.full(4, 0.5)
# orthonormal basis of the tangent space at c
TANGENT_BASIS = np.array(
    [
        [1, -1, 0, 0] / np.sqrt(2),
        [0, 0, 1, -1] / np.sqrt(2),
        [0.5, 0.5, -0.5, -0.5],
    ]
)
MODULUS_TOL = 1e-12


@dataclass(frozen=True)
class OctantCoords:
    moduli: np.ndarray
    phases: np.ndarray
    gnomonic: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Amplitudes ``Z`` (flat, standard basis) with ``nu_0 = 0``."""
        return self.moduli * np.exp(1j * np.concatenate(([0.0], self.phases)))


def _require_2q(psi: PureState) -> None:
    if (psi.dims.n_a, psi.dims.n_b) != (2, 2):
        raise DimensionMismatch("octant coordinates are defined for two qubits")


def gnomonic(n: Sequence[float]) -> np.ndarray:
    """Tangent-space coordinates of ``n / (n.c) - c``."""
    n = np.asarray(n, dtype=float)
    return TANGENT_BASIS @ (n / np.dot(n, _C) - _C)


def octant_coords(psi: PureState) -> OctantCoords:
    """Octant moduli, relative phases and gnomonic coordinates.

    The global phase is fixed by the first component with nonzero modulus,
    which is ``Z^0`` whenever ``n0 > 0``. Phases of vanishing components are
    reported as 0.
    """
    _require_2q(psi)
    z = psi.amplitudes
    n = np.abs(z)
    ref = int(np.argmax(n > MODULUS_TOL))
    rel = np.mod(np.angle(z) - np.angle(z[ref]), 2 * np.pi)
    rel[n <= MODULUS_TOL] = 0.0
    rel[np.isclose(rel, 2 * np.pi)] = 0.0
    return OctantCoords(moduli=n, phases=rel[1:], gnomonic=gnomonic(n))


def _wrap(angle: float) -> float:
    return float(abs((angle + np.pi) % (2 * np.pi) - np.pi))


def segre_residuals(psi: PureState) -> tuple[float, float, float]:
    """``(|Z0 Z3 - Z1 Z2|, |n0 n3 - n1 n2|, wrapped |nu1 + nu2 - nu3|)``.

    The state is a product state iff the first entry vanishes. The phase
    residual is 0 when any modulus vanishes, where the phases are undefined.
    """
    _require_2q(psi)
    z = psi.amplitudes
    n = np.abs(z)
    quadric = float(abs(z[0] * z[3] - z[1] * z[2]))
    modulus_eq = float(abs(n[0] * n[3] - n[1] * n[2]))
    if np.any(n <= MODULUS_TOL):
        phase_eq = 0.0
    else:
        th = np.angle(z)
        phase_eq = _wrap(th[1] + th[2] - th[3] - th[0])
    return quadric, modulus_eq, phase_eq


def max_entangled_residual(psi: PureState) -> float:
    """``||N A A^dagger - 1||_F``; zero exactly for maximally entangled states."""
    n_a, n_b = psi.dims
    if n_a != n_b:
        raise DimensionMismatch("maximal entanglement test needs N x N")
    a = psi.amplitude_matrix
    return float(np.linalg.norm(n_a * a @ a.conj().T - np.eye(n_a)))


def orbit_dimension(n: int, multiplicities: Sequence[int]) -> int:
    """Real dimension of the local-unitary orbit of an ``N x N`` pure state.

    ``multiplicities = (m_0, m_1, ..., m_J)`` with ``m_0`` the number of
    vanishing Schmidt coefficients and ``m_k`` the sizes of the groups of
    equal nonzero coefficients.
    """
    m = [int(x) for x in multiplicities]
    if not m or m[0] < 0 or any(x < 1 for x in m[1:]) or sum(m) != n or len(m) < 2:
        raise MalformedProfile(f"profile {tuple(multiplicities)} is not a degeneracy profile of N = {n}")
    return 2 * n * n - 1 - 2 * m[0] ** 2 - sum(x * x for x in m[1:])


def insphere_radius(d: int) -> float:
    """Radius of the largest ball around ``1/d`` inside the state space (D2 metric)."""
    if d < 2:
        raise DimensionMismatch("d must be >= 2")
    return float(np.sqrt(1.0 / (2 * d * (d - 1))))


def _matrix(x) -> np.ndarray:
    if isinstance(x, (PureState, DensityMatrix)):
        return as_density(x).matrix
    return np.asarray(x, dtype=complex)


def d2_distance(rho, sigma) -> float:
    """``sqrt(Tr (rho - sigma)^2 / 2)``."""
    a, b = _matrix(rho), _matrix(sigma)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    diff = a - b
    return float(np.sqrt(max(0.0, 0.5 * np.real(np.vdot(diff, diff)))))


def in_separable_ball(state: State) -> bool:
    rho = as_density(state)
    d = rho.dims.d
    return d2_distance(rho, np.eye(d) / d) <= insphere_radius(d) + 1e-12


def log_volume_ratio(n: int) -> float:
    """Natural log of Vol(separable ball) / Vol(states) for ``N x N``."""
    if n < 2:
        raise DimensionMismatch("N must be >= 2")
    n2, n4 = n * n, n**4
    log_num = (n2 - 1) / 2 * np.log(np.pi) + (n2 - n4) / 2 * np.log(2) + gammaln(n4)
    log_den = (
        gammaln((n4 + 1) / 2)
        + n4 * np.log(n)
        + (n4 - 1) / 2 * np.log(n2 - 1)
        + sum(gammaln(k) for k in range(1, n2 + 1))
    )
    return float(log_num - log_den)


def volume_ratio(n: int) -> tuple[float, float | None]:
    """``(log_value, value)``; ``value`` is None when it underflows a float."""
    lv = log_volume_ratio(n)
    value = float(np.exp(lv))
    return lv, (value if value > 0 else None)


def pseudo_pure_threshold(n: int) -> float:
    """Largest ``eps`` keeping every pseudo-pure ``N x N`` state separable."""
    if n < 2:
        raise DimensionMismatch("N must be >= 2")
    return 1.0 / (n * n - 1)


# ---------------------------------------------------------------------------
# figure data


def cross_section_rows(
    n_points: int, rng: np.random.Generator, phases: Sequence[float] = (0.0, 0.0, 0.0)
) -> list[tuple[float, float, float, float]]:
    """Random octant points at fixed phases: rows ``(x, y, z, E_1)``."""
    ph = np.concatenate(([0.0], np.asarray(phases, dtype=float)))
    rows = []
    for _ in range(n_points):
        n = np.abs(rng.standard_normal(4))
        n /= np.linalg.norm(n)
        psi = PureState((2, 2), n * np.exp(1j * ph))
        x, y, z = gnomonic(n)
        rows.append((float(x), float(y), float(z), entanglement_entropy(psi)))
    return rows


def segre_sweep_rows(n_lines: int = 5, points_per_line: int = 21) -> list[tuple[int, int, float, float, float, float]]:
    """Rulings of the separable surface: rows ``(family, line, x, y, z, quadric)``.

    Family 0 fixes the second factor and sweeps the first; family 1 the
    other way round. Each ruling is a straight line in gnomonic coordinates.
    """
    rows = []
    fixed = np.linspace(0.0, np.pi / 2, n_lines + 2)[1:-1]
    sweep = np.linspace(0.0, np.pi / 2, points_per_line)
    for family in (0, 1):
        for line, t in enumerate(fixed):
            b = np.array([np.cos(t), np.sin(t)])
            for s in sweep:
                a = np.array([np.cos(s), np.sin(s)])
                vec = np.kron(a, b) if family == 0 else np.kron(b, a)
                psi = pure_from_amplitudes((2, 2), vec)
                x, y, z = gnomonic(np.abs(psi.amplitudes))
                rows.append((family, line, float(x), float(y), float(z), segre_residuals(psi)[0]))
    return rows

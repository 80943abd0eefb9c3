"""Named states and one-parameter families used throughout the package."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, ParameterOutOfRange
from .states import DensityMatrix, PureState, as_dims, pure_from_amplitudes

_S2 = 1 / np.sqrt(2)

BELL_AMPLITUDES = {
    "phi+": np.array([_S2, 0, 0, _S2]),
    "phi-": np.array([_S2, 0, 0, -_S2]),
    "psi+": np.array([0, _S2, _S2, 0]),
    "psi-": np.array([0, _S2, -_S2, 0]),
}


def _check_unit(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ParameterOutOfRange(f"{name} = {value} outside [0, 1]")
    return float(value)


def bell(kind: str = "phi+") -> PureState:
    """One of the four Bell states: ``phi+``, ``phi-``, ``psi+``, ``psi-``."""
    try:
        amps = BELL_AMPLITUDES[kind.lower()]
    except KeyError:
        raise ParameterOutOfRange(f"unknown Bell state {kind!r}; use one of {sorted(BELL_AMPLITUDES)}") from None
    return PureState((2, 2), amps)


def maximally_entangled(n: int) -> PureState:
    """``(1/sqrt(n)) sum_i |ii>`` on ``H_n (x) H_n``."""
    return PureState((n, n), np.eye(n).reshape(-1) / np.sqrt(n))


def max_entangled_from_unitary(u) -> PureState:
    """Pure state with amplitude matrix ``U / sqrt(N)`` for an ``N x N`` unitary."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if u.shape != (n, n):
        raise DimensionMismatch("expected a square unitary")
    if np.max(np.abs(u.conj().T @ u - np.eye(n))) > 1e-10:
        raise ParameterOutOfRange("matrix is not unitary within 1e-10")
    return PureState((n, n), u.reshape(-1) / np.sqrt(n))


def werner(n: int, x: float) -> DensityMatrix:
    """``x |phi+><phi+| + (1 - x) 1/n^2`` on ``H_n (x) H_n``."""
    x = _check_unit("x", x)
    if n < 2:
        raise ParameterOutOfRange("n must be >= 2")
    p = maximally_entangled(n).projector()
    return DensityMatrix((n, n), x * p + (1 - x) * np.eye(n * n) / (n * n))


def pseudo_pure(dims, phi: PureState, eps: float) -> DensityMatrix:
    """``(1 - eps) 1/d + eps |phi><phi|``."""
    dims = as_dims(dims)
    eps = _check_unit("eps", eps)
    if phi.dims != dims:
        raise DimensionMismatch(f"state dims {phi.dims} differ from {dims}")
    return DensityMatrix(dims, (1 - eps) * np.eye(dims.d) / dims.d + eps * phi.projector())


def sigma_h(a: float) -> DensityMatrix:
    """``a |psi-><psi-| + (1 - a) |00><00|``; its concurrence equals ``a``."""
    a = _check_unit("a", a)
    m = a * bell("psi-").projector()
    m[0, 0] += 1 - a
    return DensityMatrix((2, 2), m)


def sigma_b(b: float) -> DensityMatrix:
    """Mixture ``b |psi-><psi-| + (1 - b) |psi+><psi+|`` of two Bell states."""
    b = _check_unit("b", b)
    return DensityMatrix((2, 2), b * bell("psi-").projector() + (1 - b) * bell("psi+").projector())


def rho_m(y: float) -> DensityMatrix:
    """Two-qubit states of maximal concurrence ``y`` at given purity."""
    y = _check_unit("y", y)
    a = 1 / 3 if y <= 2 / 3 else y / 2
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = a
    m[1, 1] = 1 - 2 * a
    m[0, 3] = m[3, 0] = y / 2
    return DensityMatrix((2, 2), m)


def psi_theta(theta: float) -> PureState:
    """``sin(theta/2)|01> + cos(theta/2)|10>``."""
    return PureState((2, 2), np.array([0, np.sin(theta / 2), np.cos(theta / 2), 0]))


def rho_xtheta(x: float, theta: float) -> DensityMatrix:
    """``x |psi_theta><psi_theta| + (1 - x) 1/4``."""
    x = _check_unit("x", x)
    if not 0.0 <= theta < 2 * np.pi:
        raise ParameterOutOfRange(f"theta = {theta} outside [0, 2 pi)")
    return DensityMatrix((2, 2), x * psi_theta(theta).projector() + (1 - x) * np.eye(4) / 4)


def tiles_upb_vectors() -> list[PureState]:
    """The five product vectors of the 3x3 Tiles unextendible product basis."""
    e = np.eye(3)
    s = e[0] + e[1] + e[2]
    pairs = [
        (e[0], e[0] - e[1]),
        (e[2], e[1] - e[2]),
        (e[0] - e[1], e[2]),
        (e[1] - e[2], e[0]),
        (s, s),
    ]
    return [pure_from_amplitudes((3, 3), np.kron(a, b)) for a, b in pairs]


def tiles_upb_state() -> DensityMatrix:
    """``(1 - P)/4`` with ``P`` the projector onto the Tiles UPB: PPT and entangled."""
    p = sum(v.projector() for v in tiles_upb_vectors())
    return DensityMatrix((3, 3), (np.eye(9) - p) / 4)


FAMILIES = {
    "bell": bell,
    "werner": werner,
    "sigma_h": sigma_h,
    "sigma_b": sigma_b,
    "rho_m": rho_m,
    "rho_xtheta": rho_xtheta,
    "tiles": tiles_upb_state,
    "maximally_entangled": maximally_entangled,
}

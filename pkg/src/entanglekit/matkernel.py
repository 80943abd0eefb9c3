"""Dense complex linear algebra for small matrices.

Matrices are plain ``numpy.ndarray`` objects of complex dtype. The routines
here add the validation the rest of the package relies on (finiteness,
squareness, hermiticity) on top of LAPACK, which is deterministic for a
fixed input on a given build.
"""

from __future__ import annotations

import numpy as np

from .errors import EntangleKitError, NotHermitian, NotPSD, NotSquare

HERMITIAN_TOL = 1e-10
PSD_FLOOR = 1e-9


def as_complex_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array.

    Raises
    ------
    EntangleKitError
        If ``m`` is not two-dimensional, is empty, or has NaN/Inf entries.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise EntangleKitError(f"expected a 2-D matrix, got shape {a.shape}")
    if a.size == 0:
        raise EntangleKitError("matrix is empty")
    if not np.all(np.isfinite(a)):
        raise EntangleKitError("matrix has non-finite entries")
    return a


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix of shape {a.shape} is not square")


def hermiticity_defect(m) -> float:
    """Largest absolute entry of ``m - m^dagger``."""
    a = as_complex_matrix(m)
    _require_square(a)
    return float(np.max(np.abs(a - a.conj().T)))


def hermitize(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Check hermiticity within ``tol`` and return the exactly Hermitian part."""
    a = as_complex_matrix(m)
    _require_square(a)
    defect = float(np.max(np.abs(a - a.conj().T)))
    if defect > tol:
        raise NotHermitian(f"max |m - m^dagger| = {defect:.3e} exceeds {tol:.1e}")
    return 0.5 * (a + a.conj().T)


def hermitian_eigensystem(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors (columns).

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian within ``tol`` (max-entry deviation).
    tol : float
        Hermiticity tolerance.

    Returns
    -------
    eigenvalues : ndarray of float, shape (n,)
        Sorted in descending order.
    eigenvectors : ndarray of complex, shape (n, n)
        Column ``i`` belongs to ``eigenvalues[i]``.
    """
    h = hermitize(m, tol)
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix."""
    return np.linalg.eigvalsh(hermitize(m, tol))[::-1].copy()


def singular_values(m) -> np.ndarray:
    """Singular values in descending order."""
    return np.linalg.svd(as_complex_matrix(m), compute_uv=False)


def trace_norm(m) -> float:
    """Sum of singular values (Schatten 1-norm)."""
    return float(np.sum(singular_values(m)))


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(as_complex_matrix(m)))


def psd_sqrt(m, tol: float = PSD_FLOOR) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more negative
    raises :class:`NotPSD`. Hermiticity is checked at the same ``tol``.
    """
    w, v = hermitian_eigensystem(m, max(tol, HERMITIAN_TOL))
    if w[-1] < -tol:
        raise NotPSD(f"minimal eigenvalue {w[-1]:.3e} is below -{tol:.1e}")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ v.conj().T


def is_psd(m, tol: float = PSD_FLOOR) -> bool:
    return bool(hermitian_eigenvalues(m, max(tol, HERMITIAN_TOL))[-1] >= -tol)

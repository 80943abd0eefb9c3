"""Bipartite pure and mixed states and their structural transforms.

Conventions
-----------
A bipartite state lives on ``H_A (x) H_B`` with ``dims = (n_a, n_b)``. Basis
vectors are ordered ``|i>|mu>`` with the subsystem-A index ``i`` varying
slowest, so a density matrix reshaped to ``(n_a, n_b, n_a, n_b)`` carries
indices ``[i, mu, j, nu]``. All logarithms are natural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence, Union

import numpy as np

from . import matkernel as mk
from .errors import DimensionMismatch, InvalidState, ZeroVector

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
RANK_TOL = 1e-10
# eigenvalues below this are treated as exact zeros inside entropies
ENTROPY_CUTOFF = 1e-13
CLAMP_NOISE = 1e-12


@dataclass(frozen=True)
class BipartiteDims:
    n_a: int
    n_b: int

    def __post_init__(self):
        if int(self.n_a) != self.n_a or int(self.n_b) != self.n_b:
            raise DimensionMismatch(f"dimensions must be integers, got {self.n_a}, {self.n_b}")
        if self.n_a < 2 or self.n_b < 2:
            raise DimensionMismatch(f"each subsystem needs dimension >= 2, got ({self.n_a}, {self.n_b})")

    @property
    def d(self) -> int:
        return self.n_a * self.n_b

    def __iter__(self) -> Iterator[int]:
        return iter((self.n_a, self.n_b))

    def __str__(self) -> str:
        return f"{self.n_a}x{self.n_b}"


DimsLike = Union[BipartiteDims, Sequence[int]]


def as_dims(dims: DimsLike) -> BipartiteDims:
    if isinstance(dims, BipartiteDims):
        return dims
    n_a, n_b = dims
    return BipartiteDims(int(n_a), int(n_b))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    """Unit vector ``sum_ij A_ij |i>|j>`` stored as the flat amplitude list."""

    dims: BipartiteDims
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != dims.d:
            raise DimensionMismatch(f"{amps.size} amplitudes do not fit dims {dims}")
        if not np.all(np.isfinite(amps)):
            raise InvalidState("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm**2 - 1.0) > NORM_TOL:
            raise InvalidState(f"squared norm {norm**2:.12g} differs from 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def amplitude_matrix(self) -> np.ndarray:
        """The ``n_a x n_b`` coefficient matrix ``A``."""
        return self.amplitudes.reshape(self.dims.n_a, self.dims.n_b)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, self.projector())


@dataclass(frozen=True)
class DensityMatrix:
    """Validated bipartite density matrix.

    On construction the matrix is checked to be Hermitian (1e-10), to have
    unit trace (1e-10) and eigenvalues no lower than -1e-9. Eigenvalues in
    ``[-1e-9, -1e-12)`` are clamped to zero and the trace is renormalised;
    smaller negative values are eigensolver noise and left alone, which keeps
    construction idempotent.
    """

    dims: BipartiteDims
    matrix: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        m = mk.as_complex_matrix(self.matrix)
        if m.shape != (dims.d, dims.d):
            raise DimensionMismatch(f"matrix shape {m.shape} does not match dims {dims}")
        try:
            m = mk.hermitize(m, mk.HERMITIAN_TOL)
        except mk.NotHermitian as exc:
            raise InvalidState(f"hermiticity violated: {exc}") from None
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace {tr:.12g} differs from 1")
        w, v = np.linalg.eigh(m)
        if w[0] < -mk.PSD_FLOOR:
            raise InvalidState(f"not positive semidefinite: eigenvalue {w[0]:.3e}")
        if w[0] < -CLAMP_NOISE:
            w = np.clip(w, 0.0, None)
            w = w / w.sum()
            m = (v * w) @ v.conj().T
            m = 0.5 * (m + m.conj().T)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _frozen(m))

    @cached_property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues in descending order, clipped at zero."""
        return np.clip(np.linalg.eigvalsh(self.matrix)[::-1], 0.0, None)

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    @property
    def participation_ratio(self) -> float:
        return 1.0 / self.purity

    @property
    def tensor(self) -> np.ndarray:
        """The matrix reshaped to ``(n_a, n_b, n_a, n_b)``."""
        na, nb = self.dims
        return self.matrix.reshape(na, nb, na, nb)


State = Union[PureState, DensityMatrix]


def as_density(state: State) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.to_density()
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def density_from_matrix(dims: DimsLike, m) -> DensityMatrix:
    return DensityMatrix(as_dims(dims), m)


def pure_from_amplitudes(dims: DimsLike, amplitudes) -> PureState:
    """Normalise ``amplitudes`` and wrap them as a :class:`PureState`."""
    dims = as_dims(dims)
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if amps.size != dims.d:
        raise DimensionMismatch(f"{amps.size} amplitudes do not fit dims {dims}")
    norm = np.linalg.norm(amps)
    if not np.isfinite(norm) or norm == 0.0:
        raise ZeroVector("cannot normalise a zero (or non-finite) vector")
    return PureState(dims, amps / norm)


def product_state(a, b) -> PureState:
    """``|a> (x) |b>`` from two local vectors (normalised)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return pure_from_amplitudes((a.size, b.size), np.kron(a, b))


def product_density(rho_a, rho_b) -> DensityMatrix:
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    return DensityMatrix((rho_a.shape[0], rho_b.shape[0]), np.kron(rho_a, rho_b))


def maximally_mixed(dims: DimsLike) -> DensityMatrix:
    dims = as_dims(dims)
    return DensityMatrix(dims, np.eye(dims.d) / dims.d)


def local_unitary(state: State, u_a, u_b) -> State:
    """Apply ``U_A (x) U_B`` to a pure state or conjugate a density matrix."""
    u = np.kron(np.asarray(u_a, dtype=complex), np.asarray(u_b, dtype=complex))
    if isinstance(state, PureState):
        return PureState(state.dims, u @ state.amplitudes)
    return DensityMatrix(state.dims, u @ state.matrix @ u.conj().T)


# --------------------------------------------------------------------------
# Schmidt analysis


@dataclass(frozen=True)
class SchmidtData:
    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    rank: int
    angle_chi: float | None
    multiplicities: tuple[int, ...]


def degeneracy_profile(coefficients, rtol: float = 1e-8, zero_tol: float = RANK_TOL) -> tuple[int, ...]:
    """``(m_0, m_1, ..., m_J)``: zero count, then sizes of equal-value groups.

    Groups follow the descending order of ``coefficients``; two neighbours
    belong to one group when they agree within ``rtol`` relative tolerance.
    """
    lam = np.sort(np.asarray(coefficients, dtype=float))[::-1]
    nonzero = lam[lam > zero_tol]
    m0 = int(lam.size - nonzero.size)
    groups: list[int] = []
    for k, value in enumerate(nonzero):
        if k and abs(value - nonzero[k - 1]) <= rtol * max(abs(value), abs(nonzero[k - 1])):
            groups[-1] += 1
        else:
            groups.append(1)
    return (m0, *groups)


def schmidt(psi: PureState, tol: float = RANK_TOL) -> SchmidtData:
    """Schmidt decomposition ``psi = sum_i sqrt(lam_i) |u_i>|v_i>``.

    ``coefficients`` are the squared singular values of the amplitude
    matrix, descending, with length ``min(n_a, n_b)``.
    """
    u, s, vh = np.linalg.svd(psi.amplitude_matrix)
    lam = s**2
    lam = lam / lam.sum()
    k = lam.size
    rank = int(np.count_nonzero(lam > tol))
    chi = None
    if psi.dims.n_a == 2 and psi.dims.n_b == 2:
        chi = float(np.clip(np.arctan(np.sqrt(lam[1] / lam[0])), 0.0, np.pi / 4))
    return SchmidtData(
        coefficients=lam,
        left_vectors=u[:, :k],
        right_vectors=vh[:k, :].T,
        rank=rank,
        angle_chi=chi,
        multiplicities=degeneracy_profile(lam, zero_tol=tol),
    )


def schmidt_vector(psi: PureState) -> np.ndarray:
    return schmidt(psi).coefficients


# --------------------------------------------------------------------------
# Partial operations


def partial_trace(state: State, side: str = "B") -> np.ndarray:
    """Trace out subsystem ``side`` and return the reduced matrix of the other."""
    t = as_density(state).tensor
    side = side.upper()
    if side == "B":
        return np.einsum("imjm->ij", t)
    if side == "A":
        return np.einsum("imin->mn", t)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def partial_transpose(state: State, side: str = "A") -> np.ndarray:
    """Transpose the indices of subsystem ``side``.

    ``[i, mu, j, nu] -> [j, mu, i, nu]`` for ``side='A'``.
    """
    rho = as_density(state)
    na, nb = rho.dims
    t = rho.tensor
    side = side.upper()
    if side == "A":
        out = t.transpose(2, 1, 0, 3)
    elif side == "B":
        out = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return out.reshape(na * nb, na * nb)


def reshuffle(state: State) -> np.ndarray:
    """Realignment: ``R[(i,j), (mu,nu)] = rho[(i,mu), (j,nu)]``, shape ``n_a^2 x n_b^2``."""
    rho = as_density(state)
    na, nb = rho.dims
    return rho.tensor.transpose(0, 2, 1, 3).reshape(na * na, nb * nb)


def spin_flip_2q(state: State) -> DensityMatrix:
    """``(sy (x) sy) rho* (sy (x) sy)`` for two qubits."""
    rho = as_density(state)
    if (rho.dims.n_a, rho.dims.n_b) != (2, 2):
        raise DimensionMismatch("spin flip is defined for two qubits only")
    yy = np.kron(PAULI_Y, PAULI_Y)
    return DensityMatrix(rho.dims, yy @ rho.matrix.conj() @ yy)


# --------------------------------------------------------------------------
# Generator bases and the Fano form

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class GeneratorBasis:
    """Traceless Hermitian generators with ``Tr(s_i s_j) = 2 delta_ij``."""

    n: int
    matrices: np.ndarray = field(repr=False)
    name: str = "gell-mann"

    def __len__(self) -> int:
        return self.matrices.shape[0]


_BASIS_CACHE: dict[int, GeneratorBasis] = {}


def gell_mann_basis(n: int) -> GeneratorBasis:
    """Generalised Gell-Mann matrices for dimension ``n``.

    Order: symmetric ``E_jk + E_kj`` (j < k, lexicographic), antisymmetric
    ``-i E_jk + i E_kj`` (same order), then diagonal ``l = 1..n-1``. For
    ``n = 2`` this is exactly ``(X, Y, Z)``.
    """
    if n in _BASIS_CACHE:
        return _BASIS_CACHE[n]
    if n < 2:
        raise DimensionMismatch("generator basis needs n >= 2")
    mats = []
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    for j, k in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = m[k, j] = 1
        mats.append(m)
    for j, k in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        mats.append(m)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1
        diag[l] = -l
        mats.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    arr = np.array(mats)
    arr.setflags(write=False)
    basis = GeneratorBasis(n, arr, "pauli" if n == 2 else "gell-mann")
    _BASIS_CACHE[n] = basis
    return basis


@dataclass(frozen=True)
class FanoForm:
    dims: BipartiteDims
    tau_a: np.ndarray
    tau_b: np.ndarray
    beta: np.ndarray
    basis_a: str
    basis_b: str


def fano_form(state: State) -> FanoForm:
    """Bloch vectors and correlation matrix over local generator bases."""
    rho = as_density(state)
    na, nb = rho.dims
    ga = gell_mann_basis(na).matrices
    gb = gell_mann_basis(nb).matrices
    t = rho.tensor
    # Tr(rho (s_i x s_j)) = sum rho[i mu, j nu] s_i[j, i] s_j[nu, mu]
    corr = np.einsum("aji,bnm,imjn->ab", ga, gb, t).real
    loc_a = np.einsum("aji,imjm->a", ga, t).real
    loc_b = np.einsum("bnm,imin->b", gb, t).real
    return FanoForm(
        dims=rho.dims,
        tau_a=na / 2 * loc_a,
        tau_b=nb / 2 * loc_b,
        beta=na * nb / 4 * corr,
        basis_a=gell_mann_basis(na).name,
        basis_b=gell_mann_basis(nb).name,
    )


def _fano_matrix(dims: BipartiteDims, tau_a, tau_b, beta) -> np.ndarray:
    na, nb = dims
    ga = gell_mann_basis(na).matrices
    gb = gell_mann_basis(nb).matrices
    m = np.eye(na * nb, dtype=complex)
    m += np.kron(np.einsum("a,aij->ij", tau_a, ga), np.eye(nb))
    m += np.kron(np.eye(na), np.einsum("b,bij->ij", tau_b, gb))
    m += np.einsum("ab,aij,bmn->imjn", beta, ga, gb).reshape(na * nb, na * nb)
    return m / (na * nb)


def fano_reconstruct(f: FanoForm) -> DensityMatrix:
    return DensityMatrix(f.dims, _fano_matrix(f.dims, f.tau_a, f.tau_b, f.beta))


def fano_flip(state: State, side: str = "B") -> np.ndarray:
    """Flip signs in the Fano form.

    ``side='B'`` negates ``tau_b`` and ``beta``; ``side='both'`` negates both
    Bloch vectors and keeps ``beta``. Requires equal local dimensions. The
    result is Hermitian with unit trace but need not be positive.
    """
    rho = as_density(state)
    if rho.dims.n_a != rho.dims.n_b:
        raise DimensionMismatch("Fano flips are defined for equal local dimensions")
    f = fano_form(rho)
    side = side.lower()
    if side == "b":
        return _fano_matrix(rho.dims, f.tau_a, -f.tau_b, -f.beta)
    if side == "both":
        return _fano_matrix(rho.dims, -f.tau_a, -f.tau_b, f.beta)
    raise ValueError(f"side must be 'B' or 'both', got {side!r}")


# --------------------------------------------------------------------------
# Entropies


def renyi_entropy(probabilities, q: float) -> float:
    """Renyi entropy of a probability vector in nats.

    ``q = 1`` is Shannon, ``q = inf`` is ``-ln max p`` and ``q = 0`` is
    ``ln`` of the support size. Entries below ``ENTROPY_CUTOFF`` count as
    zero. Near ``q = 1`` a second-order expansion replaces the ratio form.
    """
    if q < 0:
        raise ValueError("Renyi order must be >= 0")
    p = np.asarray(probabilities, dtype=float)
    p = p[p > ENTROPY_CUTOFF]
    p = p / p.sum()
    if q == 0:
        return float(np.log(p.size))
    if np.isinf(q):
        return float(-np.log(p.max()))
    logp = np.log(p)
    shannon = float(-np.dot(p, logp))
    eps = q - 1.0
    if abs(eps) < 1e-5:
        var = float(np.dot(p, logp**2) - shannon**2)
        return shannon - 0.5 * eps * var
    return float(np.log(np.sum(p**q)) / (1.0 - q))


def entropy(state_or_matrix, q: float = 1.0) -> float:
    """Renyi entropy ``S_q`` of a density matrix (bipartite state or plain array)."""
    if isinstance(state_or_matrix, (PureState, DensityMatrix)):
        w = as_density(state_or_matrix).spectrum
    else:
        w = np.clip(mk.hermitian_eigenvalues(state_or_matrix), 0.0, None)
    return renyi_entropy(w, q)


def conditional_entropy(state: State) -> float:
    """``S(A|B) = S(rho_AB) - S(rho_A)`` (von Neumann)."""
    rho = as_density(state)
    return entropy(rho, 1.0) - entropy(partial_trace(rho, "B"), 1.0)

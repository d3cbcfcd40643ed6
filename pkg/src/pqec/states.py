"""Quantum state representations, Pauli algebra, and spectral utilities.

Everything operates on plain numpy arrays: pure states are normalized
complex vectors of length D = 2**M, density matrices are D x D complex
Hermitian, trace-one, positive-semidefinite matrices. Validation is
explicit (``check_pure_state`` / ``check_density_matrix``) rather than
implicit on every operation, so parameter sweeps stay cheap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

# ----------------------------------------------------------------------
# Pauli matrices and basic constants
# ----------------------------------------------------------------------

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI_LABELS = "IXYZ"
PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

# Guard on the 4**M cost of Pauli-basis operations.
MAX_PAULI_QUBITS = 6

NORM_TOL = 1e-12
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL = 1e-10


class ValidationError(ValueError):
    """An input fails a state invariant (norm, trace, Hermiticity, PSD, shape)."""


class ResourceLimitError(ValueError):
    """An operation was requested beyond its guarded cost limit."""


def num_qubits(dim: int) -> int:
    """Number of qubits for Hilbert-space dimension ``dim`` (must be 2**M)."""
    m = int(dim).bit_length() - 1
    if dim <= 0 or (1 << m) != dim:
        raise ValidationError(f"dimension {dim} is not a power of two")
    return m


def kron_all(mats) -> np.ndarray:
    """Kronecker product of a sequence of matrices, first factor leftmost.

    Qubit 0 is the leftmost factor, i.e. the most significant bit of the
    basis-state index.
    """
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def pauli_matrix(code: str) -> np.ndarray:
    """Dense matrix of a Pauli string such as ``"XZI"`` (qubit 0 leftmost)."""
    try:
        return kron_all([PAULIS[c] for c in code])
    except KeyError as exc:
        raise ValidationError(f"invalid Pauli label in {code!r}") from exc


def pauli_weight(code: str) -> int:
    """Number of non-identity factors in a Pauli string."""
    return sum(1 for c in code if c != "I")


# ----------------------------------------------------------------------
# Construction and validation
# ----------------------------------------------------------------------

def check_pure_state(psi: np.ndarray, tol: float = NORM_TOL) -> np.ndarray:
    """Validate and return a pure state as a complex 1-D array."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValidationError("pure state must be a 1-D amplitude vector")
    num_qubits(psi.size)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"state norm {norm} deviates from 1 by more than {tol}")
    return psi


def check_density_matrix(rho: np.ndarray,
                         herm_tol: float = HERM_TOL,
                         trace_tol: float = TRACE_TOL,
                         eig_tol: float = EIG_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace, and positivity of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError("density matrix must be square")
    num_qubits(rho.shape[0])
    herm_dev = np.max(np.abs(rho - rho.conj().T))
    if herm_dev > herm_tol:
        raise ValidationError(f"Hermiticity violation {herm_dev} > {herm_tol}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValidationError(f"trace {tr} deviates from 1 by more than {trace_tol}")
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
    if min_eig < -eig_tol:
        raise ValidationError(f"negative eigenvalue {min_eig} below -{eig_tol}")
    return rho


def density_from_pure(psi: np.ndarray) -> np.ndarray:
    """Rank-one projector |psi><psi| of a normalized pure state."""
    psi = check_pure_state(psi)
    return np.outer(psi, psi.conj())


def maximally_mixed(qubits: int) -> np.ndarray:
    d = 2 ** qubits
    return np.eye(d, dtype=complex) / d


def zero_state(qubits: int) -> np.ndarray:
    psi = np.zeros(2 ** qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def plus_state(qubits: int) -> np.ndarray:
    d = 2 ** qubits
    return np.full(d, 1.0 / math.sqrt(d), dtype=complex)


def bloch_state(theta: float, phi: float, qubits: int = 1) -> np.ndarray:
    """Product state (cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>)^{tensor qubits}."""
    single = np.array([math.cos(theta / 2),
                       complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2)],
                      dtype=complex)
    psi = np.array([1.0 + 0j])
    for _ in range(qubits):
        psi = np.kron(psi, single)
    return psi


def random_pure_state(qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state on ``qubits`` qubits."""
    d = 2 ** qubits
    vec = rng.normal(size=d) + 1j * rng.normal(size=d)
    return vec / np.linalg.norm(vec)


def random_density_matrix(qubits: int, rng: np.random.Generator,
                          rank: int | None = None) -> np.ndarray:
    """Random full-rank (or given-rank) density matrix, Wishart-normalized."""
    d = 2 ** qubits
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


# ----------------------------------------------------------------------
# Scalar functionals
# ----------------------------------------------------------------------

def fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """Overlap <psi|rho|psi> with a pure target state."""
    rho = np.asarray(rho)
    psi = np.asarray(psi)
    if rho.shape[0] != psi.shape[0]:
        raise ValidationError(
            f"dimension mismatch: state {rho.shape[0]}, target {psi.shape[0]}")
    return float(np.real(psi.conj() @ rho @ psi))


def purity(rho: np.ndarray) -> float:
    """Tr(rho^2)."""
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))


# ----------------------------------------------------------------------
# Spectral path
# ----------------------------------------------------------------------

def spectral_decomposition(rho: np.ndarray):
    """Eigenvalues (ascending) and eigenvectors of the symmetrized matrix.

    The matrix is symmetrized to (rho + rho^dagger)/2 before the Hermitian
    eigensolver; small negative eigenvalues from numerical noise are clamped
    to zero and the spectrum renormalized to unit sum, which keeps iterated
    maps on the PSD manifold.
    """
    rho = np.asarray(rho, dtype=complex)
    herm = (rho + rho.conj().T) / 2
    vals, vecs = np.linalg.eigh(herm)
    vals = np.clip(vals, 0.0, None)
    total = vals.sum()
    if total <= 0.0:
        raise ValidationError("all-zero spectrum: input has no positive weight")
    return vals / total, vecs


def project_to_density(mat: np.ndarray) -> np.ndarray:
    """Nearest well-formed density matrix: symmetrize, clamp, renormalize."""
    vals, vecs = spectral_decomposition(mat)
    return (vecs * vals) @ vecs.conj().T


@dataclass(frozen=True)
class SpectralPower:
    """rho**n in scaled form: ``matrix * exp(log_scale)`` equals rho**n.

    Eigenvalues are divided by the largest one before powering, so the
    object stays finite for n as large as 2**30 even when the true trace
    underflows; ``log_scale`` carries n*log(lambda_max).
    """

    eigenvalues: np.ndarray   # (lambda_i / lambda_max) ** n, ascending
    eigenvectors: np.ndarray
    log_scale: float
    power: int

    @property
    def matrix(self) -> np.ndarray:
        """Scaled matrix, equal to rho**n * exp(-log_scale)."""
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T

    @property
    def value(self) -> np.ndarray:
        """rho**n itself; underflows to zero for extreme n, by design."""
        return math.exp(self.log_scale) * self.matrix

    @property
    def trace(self) -> float:
        """Tr(rho**n); may underflow to 0.0 for extreme n."""
        return math.exp(self.log_scale) * float(self.eigenvalues.sum())

    def normalized(self) -> np.ndarray:
        """rho**n / Tr(rho**n), computed without leaving the scaled form."""
        weights = self.eigenvalues / self.eigenvalues.sum()
        return (self.eigenvectors * weights) @ self.eigenvectors.conj().T


def spectral_power(rho: np.ndarray, power: int) -> SpectralPower:
    """Matrix power rho**power through the eigendecomposition.

    The eigenbasis is the input's own; only the spectrum is powered.
    """
    if power < 1:
        raise ValidationError("power must be >= 1")
    vals, vecs = spectral_decomposition(rho)
    lam_max = vals[-1]
    scaled = (vals / lam_max) ** power
    return SpectralPower(eigenvalues=scaled, eigenvectors=vecs,
                         log_scale=power * math.log(lam_max), power=power)


# ----------------------------------------------------------------------
# Pauli expansion
# ----------------------------------------------------------------------

_PAULI_STACK = np.stack([PAULI_I, PAULI_X, PAULI_Y, PAULI_Z])


def _check_pauli_budget(qubits: int) -> None:
    if qubits > MAX_PAULI_QUBITS:
        raise ResourceLimitError(
            f"Pauli expansion limited to {MAX_PAULI_QUBITS} qubits "
            f"(4**{qubits} coefficients requested)")


def pauli_coefficients(rho: np.ndarray) -> np.ndarray:
    """Coefficient tensor r_P = Tr(rho P) of shape (4,)*M, axes in IXYZ order.

    Contracts one qubit at a time, so the cost is O(M 4**M) rather than
    building 4**M dense strings.
    """
    rho = np.asarray(rho, dtype=complex)
    m = num_qubits(rho.shape[0])
    _check_pauli_budget(m)
    # S[a, j, i] = Pauli_a[j, i]; Tr(rho P) = sum_ij rho[i, j] P[j, i]
    sandwich = _PAULI_STACK  # indexed [a, j, i] via axes (1, 2) below
    t = rho.reshape((2,) * (2 * m))
    for q in range(m):
        # axes: q Pauli indices, then m-q row indices, then m-q column indices;
        # the next row axis is q and the next column axis is always m.
        t = np.tensordot(sandwich, t, axes=[[1, 2], [m, q]])
    # Pauli axes accumulated in reverse qubit order.
    t = t.transpose(tuple(reversed(range(m))))
    return np.real(t)


def pauli_reconstruct(coeffs: np.ndarray, qubits: int) -> np.ndarray:
    """Inverse of ``pauli_coefficients``: rho = 2**-M sum_P r_P P."""
    _check_pauli_budget(qubits)
    t = np.asarray(coeffs, dtype=complex).reshape((4,) * qubits)
    for _ in range(qubits):
        t = np.tensordot(t, _PAULI_STACK, axes=[[0], [0]])
    # axes are now (i_0, j_0, i_1, j_1, ...); gather rows then columns
    perm = tuple(range(0, 2 * qubits, 2)) + tuple(range(1, 2 * qubits, 2))
    d = 2 ** qubits
    return t.transpose(perm).reshape(d, d) / d


def pauli_expand(rho: np.ndarray) -> dict[str, float]:
    """Map from Pauli string (e.g. ``"XZ"``) to its real coefficient Tr(rho P)."""
    coeffs = pauli_coefficients(rho)
    m = coeffs.ndim
    out = {}
    for idx in itertools.product(range(4), repeat=m):
        out["".join(PAULI_LABELS[i] for i in idx)] = float(coeffs[idx])
    return out


def _weight_tensor(qubits: int) -> np.ndarray:
    """Tensor of Pauli weights, shape (4,)*qubits: count of non-identity axes."""
    w = np.zeros((4,) * qubits, dtype=int)
    for q in range(qubits):
        shape = [1] * qubits
        shape[q] = 4
        w = w + (np.arange(4) != 0).astype(int).reshape(shape)
    return w


def pauli_weight_distribution(psi: np.ndarray):
    """Weight distribution a_k of a pure target and its mean weight.

    a_k = 2**-M sum_{w(P)=k} r_P^2 with sum_k a_k = 1; the second return
    value is sum_k k a_k, the average Pauli weight of the target.
    """
    psi = check_pure_state(psi)
    m = num_qubits(psi.size)
    _check_pauli_budget(m)
    coeffs = pauli_coefficients(density_from_pure(psi))
    weights = _weight_tensor(m)
    sq = coeffs ** 2 / 2 ** m
    a = np.array([sq[weights == k].sum() for k in range(m + 1)])
    mean_weight = float(np.sum(np.arange(m + 1) * a))
    return a, mean_weight


# ----------------------------------------------------------------------
# Bloch sphere (single qubit)
# ----------------------------------------------------------------------

def bloch_decompose(rho: np.ndarray) -> np.ndarray:
    """Bloch vector (r_x, r_y, r_z) of a single-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValidationError("Bloch decomposition requires a single qubit")
    r = np.array([np.trace(rho @ PAULI_X), np.trace(rho @ PAULI_Y),
                  np.trace(rho @ PAULI_Z)])
    return np.real(r)


def bloch_compose(r: np.ndarray) -> np.ndarray:
    """Density matrix (I + r . sigma)/2 of a Bloch vector with |r| <= 1."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValidationError("Bloch vector must have three components")
    norm = np.linalg.norm(r)
    if norm > 1.0 + NORM_TOL:
        raise ValidationError(f"Bloch vector length {norm} exceeds 1")
    return (PAULI_I + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z) / 2


# ----------------------------------------------------------------------
# Werner family
# ----------------------------------------------------------------------

def werner_state(mix: float, target: np.ndarray) -> np.ndarray:
    """(1 - mix)|psi><psi| + mix I/D for mixing parameter in [0, 1]."""
    if not 0.0 <= mix <= 1.0 + NORM_TOL:
        raise ValidationError(f"mixing parameter {mix} outside [0, 1]")
    psi = check_pure_state(target)
    d = psi.size
    return (1.0 - mix) * density_from_pure(psi) + mix * np.eye(d) / d


def werner_fidelity(mix: float, dim: int) -> float:
    """Fidelity 1 - mix (1 - 1/D) of a Werner state with its target."""
    return 1.0 - mix * (1.0 - 1.0 / dim)


def werner_mixing(fid: float, dim: int) -> float:
    """Inverse of ``werner_fidelity``."""
    return (1.0 - fid) * dim / (dim - 1.0)

"""Process-matrix diagnostics for the drive maps.

A qubit channel E is represented by a 4x4 matrix Y over the fixed operator
basis (i*I, sigma_x, sigma_y, sigma_z) through

    E(rho) = sum_{k,j} Y[k, j] B_k rho B_j^dagger

The basis is orthogonal with tr[B_k^dagger B_l] = 2 delta_kl, and the i on
the identity makes every unitary channel's matrix real, which is the property
the unitality diagnostics lean on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .propagator import UnitaryMap
from .spin import IDENTITY, PAULI_X, PAULI_Y, PAULI_Z

#: Operator basis (i*I, sigma_x, sigma_y, sigma_z), stacked.
BASIS = np.stack([1j * IDENTITY, PAULI_X, PAULI_Y, PAULI_Z])
BASIS.setflags(write=False)

_BASIS_DAG = np.conj(np.swapaxes(BASIS, 1, 2))
_BASIS_DAG.setflags(write=False)


@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    """Channel matrix in the fixed basis; validated on construction.

    Requirements: Hermitian (1e-10), positive semidefinite (eigenvalues above
    -1e-10, complete positivity), and trace preserving
    (sum_{k,j} Y[k,j] B_j^dagger B_k = I to 1e-10).
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"process matrix must be 4x4, got {m.shape}")
        object.__setattr__(self, "matrix", m)
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ValueError("process matrix must be Hermitian")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise ValueError("process matrix must be positive semidefinite")
        closure = np.einsum("kj,jab,kbc->ac", m, _BASIS_DAG, BASIS)
        if np.max(np.abs(closure - np.eye(2))) > 1e-10:
            raise ValueError("process matrix is not trace preserving")


def choi_from_unitary(unitary: UnitaryMap | np.ndarray) -> ProcessMatrix:
    """Rank-one process matrix of a unitary conjugation map.

    Expanding U = sum_k a_k B_k over the basis gives Y = outer(a, conj(a));
    for any unitary (global phase dropped by construction) the result is a
    real matrix.
    """
    u = unitary.matrix if isinstance(unitary, UnitaryMap) else np.asarray(unitary)
    u = u.astype(np.complex128)
    if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-10:
        raise ValueError("input must be a 2x2 unitary")
    coeffs = np.einsum("kab,ba->k", _BASIS_DAG, u) / 2.0
    return ProcessMatrix(np.outer(coeffs, coeffs.conj()))


def apply_process(process: ProcessMatrix, rho: np.ndarray) -> np.ndarray:
    """Act with the channel on a state."""
    rho = np.asarray(rho, dtype=np.complex128)
    return np.einsum("kj,kab,bc,jdc->ad", process.matrix, BASIS, rho, np.conj(BASIS))


def identity_process() -> ProcessMatrix:
    """The do-nothing channel (single nonzero entry at the identity slot)."""
    matrix = np.zeros((4, 4), dtype=np.complex128)
    matrix[0, 0] = 1.0
    return ProcessMatrix(matrix)


def depolarizing_process() -> ProcessMatrix:
    """The fully depolarizing channel: every input goes to the maximally
    mixed state (uniform mixture of the four basis conjugations)."""
    return ProcessMatrix(np.eye(4, dtype=np.complex128) / 4.0)


def process_from_kraus(kraus_ops: Sequence[np.ndarray]) -> ProcessMatrix:
    """Process matrix of a channel given by Kraus operators."""
    matrix = np.zeros((4, 4), dtype=np.complex128)
    for op in kraus_ops:
        op = np.asarray(op, dtype=np.complex128)
        if op.shape != (2, 2):
            raise ValueError(f"Kraus operators must be 2x2, got {op.shape}")
        coeffs = np.einsum("kab,ba->k", _BASIS_DAG, op) / 2.0
        matrix += np.outer(coeffs, coeffs.conj())
    return ProcessMatrix(matrix)


def mix_processes(a: ProcessMatrix, b: ProcessMatrix, weight: float) -> ProcessMatrix:
    """Convex mixture (1 - weight) * a + weight * b."""
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {weight}")
    return ProcessMatrix((1.0 - weight) * a.matrix + weight * b.matrix)


def unitality_defect(process: ProcessMatrix) -> float:
    """Max-norm of E(I) - I; zero exactly for unital channels (every unitary
    conjugation, and any mixture of them)."""
    image = apply_process(process, np.eye(2, dtype=np.complex128))
    return float(np.max(np.abs(image - np.eye(2))))


def process_trace_distance(a: ProcessMatrix, b: ProcessMatrix) -> float:
    """Half the trace norm of the difference of two process matrices."""
    return float(0.5 * np.abs(np.linalg.eigvalsh(a.matrix - b.matrix)).sum())

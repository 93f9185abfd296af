# backend/app/linalg.py

from __future__ import annotations

import logging
import math

import numpy as np
import numpy.typing as npt

from . import config
from .errors import ConvergenceError, DimensionMismatch, NotHermitian
from .models import EigenResult

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]

MAX_SWEEPS = 100


def kron(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    return np.kron(np.asarray(A, dtype=np.complex128), np.asarray(B, dtype=np.complex128))


def dagger(M: ComplexMatrix) -> ComplexMatrix:
    return np.asarray(M).conj().T


def asymmetry(M: ComplexMatrix) -> float:
    M = np.asarray(M)
    return float(np.abs(M - M.conj().T).max()) if M.size else 0.0


def is_hermitian(M: ComplexMatrix, tol: float = config.HERMITIAN_TOL) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return asymmetry(M) <= tol


def is_unitary(M: ComplexMatrix, tol: float = config.HERMITIAN_TOL) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return float(np.abs(M.conj().T @ M - np.eye(M.shape[0])).max()) <= tol


def symmetrize(H: ComplexMatrix) -> ComplexMatrix:
    """(H + H^dagger)/2, used by operator constructors to wash out roundoff."""
    H = np.asarray(H, dtype=np.complex128)
    return (H + H.conj().T) / 2


def expectation(state: ComplexVector, op: ComplexMatrix) -> float:
    """Real <psi|O|psi> for Hermitian O."""
    state = np.asarray(state, dtype=np.complex128)
    op = np.asarray(op, dtype=np.complex128)
    if op.ndim != 2 or op.shape[0] != op.shape[1] or op.shape[1] != state.shape[0]:
        raise DimensionMismatch(
            "state and operator dimensions differ",
            {"state": state.shape, "operator": op.shape},
        )
    return float(np.real(np.vdot(state, op @ state)))


# ---------------------------------------------------------
#  Cyclic Jacobi eigensolver (complex Hermitian)
# ---------------------------------------------------------

def _off_norm(A: ComplexMatrix) -> float:
    total = np.sum(np.abs(A) ** 2) - np.sum(np.abs(np.diag(A)) ** 2)
    return math.sqrt(max(float(total), 0.0))


def _rotate(A: ComplexMatrix, V: ComplexMatrix, p: int, q: int) -> None:
    """
    Zero A[p, q] in place. The 2x2 unitary is a phase on column q that makes
    A[p, q] real, followed by a real Jacobi rotation.
    """
    h = A[p, q]
    g = abs(h)
    phase = h / g
    a, b = A[p, p].real, A[q, q].real

    theta = 0.5 * math.atan2(2.0 * g, b - a)
    c, s = math.cos(theta), math.sin(theta)

    W = np.array(
        [[c, s], [-s * np.conj(phase), c * np.conj(phase)]],
        dtype=np.complex128,
    )
    idx = [p, q]
    A[:, idx] = A[:, idx] @ W
    A[idx, :] = W.conj().T @ A[idx, :]
    A[p, q] = 0.0
    A[q, p] = 0.0
    A[p, p] = A[p, p].real
    A[q, q] = A[q, q].real
    V[:, idx] = V[:, idx] @ W


def hermitian_eigen(H: ComplexMatrix, tol: float = config.HERMITIAN_TOL) -> EigenResult:
    """
    Full spectrum and orthonormal eigenbasis of a Hermitian matrix by cyclic
    Jacobi sweeps. Converged when the off-diagonal Frobenius mass drops
    below 1e-12 * ||H||_F.
    """
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatch("eigenproblem needs a square matrix", {"shape": H.shape})

    measured = asymmetry(H)
    if measured > tol:
        raise NotHermitian("matrix is not Hermitian within tolerance", {"asymmetry": measured, "tol": tol})

    n = H.shape[0]
    A = symmetrize(H).copy()
    V = np.eye(n, dtype=np.complex128)

    scale = float(np.linalg.norm(A))
    threshold = 1e-12 * scale if scale > 0 else 0.0
    skip = 1e-300

    sweeps = 0
    while _off_norm(A) > threshold:
        if sweeps >= MAX_SWEEPS:
            raise ConvergenceError(
                "Jacobi sweeps did not converge",
                {"n": n, "sweeps": sweeps, "off_norm": _off_norm(A)},
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) > skip:
                    _rotate(A, V, p, q)
        sweeps += 1

    eigenvalues = np.real(np.diag(A))
    order = np.argsort(eigenvalues, kind="stable")
    logger.debug("[JACOBI] n=%d | sweeps=%d", n, sweeps)

    return EigenResult(
        eigenvalues=eigenvalues[order],
        eigenvectors=V[:, order],
        sweeps=sweeps,
    )


def lambda_max(H: ComplexMatrix, tol: float = config.HERMITIAN_TOL) -> float:
    return float(hermitian_eigen(H, tol).eigenvalues[-1])

# backend/app/weyl.py

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import config
from .errors import DimensionMismatch, TheoremViolation, UnsupportedDimension
from .field import half, is_prime
from .linalg import ComplexMatrix, ComplexVector, kron, symmetrize
from .models import MubVectorRef, PauliIndex

logger = logging.getLogger(__name__)


def omega(exponent, p: int):
    """
    exp(2*pi*i*m/p), with m reduced mod p before the float conversion.
    Works on ints and integer arrays alike.
    """
    m = np.mod(np.asarray(exponent, dtype=np.int64), p)
    return np.exp(2j * np.pi * m / p)


def _require_odd_prime(p: int) -> None:
    if p == 2:
        raise UnsupportedDimension(
            "Weyl-Heisenberg phases need 2^{-1} mod p; qubits are handled in bell/magic",
            {"p": p},
        )
    if not is_prime(p):
        raise UnsupportedDimension("dimension must be an odd prime", {"p": p})


def shift(p: int) -> ComplexMatrix:
    """Cyclic shift X|j> = |j+1>, defined for every p including 2."""
    return np.roll(np.eye(p, dtype=np.complex128), 1, axis=0)


# ---------------------------------------------------------
#  Displacement operators
# ---------------------------------------------------------

def _single_displacement(x: int, z: int, p: int) -> ComplexMatrix:
    h = half(p)
    j = np.arange(p)
    D = np.zeros((p, p), dtype=np.complex128)
    D[(j + x) % p, j] = omega(h * x * z + j * z, p)
    return D


def displacement(idx: PauliIndex, p: Optional[int] = None) -> ComplexMatrix:
    """
    D_(x|z) = omega^{2^{-1} x z} X^x Z^z, and the tensor product of
    single-qudit displacements for multi-qudit indices.
    """
    p = idx.p if p is None else p
    if p != idx.p:
        raise DimensionMismatch("index modulus differs from requested p", {"index": idx.p, "p": p})
    _require_odd_prime(p)

    out = np.ones((1, 1), dtype=np.complex128)
    for x, z in zip(idx.xs, idx.zs):
        out = kron(out, _single_displacement(x, z, p))
    return out


def D(x: int, z: int, p: int) -> ComplexMatrix:
    """Shorthand for the single-qudit displacement D_(x|z)."""
    return displacement(PauliIndex.single(x, z, p))


# ---------------------------------------------------------
#  Mutually unbiased bases
# ---------------------------------------------------------

def mub_ket(ref: MubVectorRef, p: int) -> ComplexVector:
    """
    |psi_B^V> = p^{-1/2} sum_k omega^{B k^2 / 2 - V k} |k>; for the
    infinity basis, the computational vector e_V.
    """
    _require_odd_prime(p)
    V = ref.vector % p
    if ref.is_computational:
        ket = np.zeros(p, dtype=np.complex128)
        ket[V] = 1.0
        return ket

    k = np.arange(p)
    B = ref.basis % p
    return omega(half(p) * B * k * k - V * k, p) / np.sqrt(p)


@lru_cache(maxsize=None)
def phase_convention() -> int:
    """
    Sign s such that the ket formula is the outer-product root of
    (1/p) sum_j omega^{-j s V} D_(1|B)^j. Probed once at p = 5.
    """
    p = 5
    for sign in (1, -1):
        ok = True
        for B in range(p):
            for V in range(p):
                ref = MubVectorRef(basis=B, vector=V)
                ket = mub_ket(ref, p)
                if np.abs(_projector_from_sum(B, V, p, sign) - np.outer(ket, ket.conj())).max() > 1e-10:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            logger.info("[WEYL] phase convention resolved | sign=%+d", sign)
            return sign
    raise TheoremViolation(
        "neither V nor -V labelling matches the projector sum",
        {"p": p},
        code="weyl.phase_convention",
    )


def _projector_from_sum(B: int, V: int, p: int, sign: int) -> ComplexMatrix:
    P = np.zeros((p, p), dtype=np.complex128)
    for j in range(p):
        P += omega(-j * sign * V, p) * D(j, j * B, p)
    return P / p


def mub_projector(ref: MubVectorRef, p: int) -> ComplexMatrix:
    _require_odd_prime(p)
    if ref.is_computational:
        P = np.zeros((p, p), dtype=np.complex128)
        P[ref.vector % p, ref.vector % p] = 1.0
        return P
    return symmetrize(_projector_from_sum(ref.basis % p, ref.vector % p, p, phase_convention()))


def mub_basis(B: Optional[int], p: int) -> ComplexMatrix:
    """All p kets of basis B as columns (column V is |psi_B^V>)."""
    return np.column_stack([mub_ket(MubVectorRef(basis=B, vector=V), p) for V in range(p)])


@lru_cache(maxsize=None)
def mub_frame(p: int) -> np.ndarray:
    """
    kets[i, V, :] for i = 0 (infinity basis) and i = 1 + B. Cached and
    read-only; entropy and balance index into it heavily.
    """
    _require_odd_prime(p)
    bases = [None] + list(range(p))
    frame = np.stack([mub_basis(B, p).T for B in bases])
    frame.setflags(write=False)
    return frame


# ---------------------------------------------------------
#  Cliffords
# ---------------------------------------------------------

def csum(p: int) -> ComplexMatrix:
    """|j, k> -> |j, k + j>."""
    _require_odd_prime(p)
    C = np.zeros((p * p, p * p), dtype=np.complex128)
    for j in range(p):
        for k in range(p):
            C[j * p + (k + j) % p, j * p + k] = 1.0
    return C


def pauli_coefficients(U: ComplexMatrix, p: int) -> np.ndarray:
    """coeffs[x, z] = Tr(D_(x|z)^dagger U) / p."""
    _require_odd_prime(p)
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (p, p):
        raise DimensionMismatch("expected a single-qudit operator", {"shape": U.shape, "p": p})

    coeffs = np.zeros((p, p), dtype=np.complex128)
    for x in range(p):
        for z in range(p):
            coeffs[x, z] = np.trace(D(x, z, p).conj().T @ U) / p
    return coeffs


def is_clifford(U: ComplexMatrix, p: int, tol: float = config.HERMITIAN_TOL) -> bool:
    """True when U X U^dagger and U Z U^dagger are each a phase times one displacement."""
    U = np.asarray(U, dtype=np.complex128)
    for generator in (D(1, 0, p), D(0, 1, p)):
        coeffs = np.abs(pauli_coefficients(U @ generator @ U.conj().T, p))
        peak = coeffs.max()
        if abs(peak - 1.0) > tol or np.sort(coeffs.ravel())[-2] > tol:
            return False
    return True


def plus_state(p: int) -> ComplexVector:
    return np.full(p, 1 / np.sqrt(p), dtype=np.complex128)


def same_ray(u: Union[ComplexVector, np.ndarray], v: Union[ComplexVector, np.ndarray]) -> float:
    """|<u|v>|^2 for unit vectors; 1 means equal up to global phase."""
    return float(np.abs(np.vdot(u, v)) ** 2)

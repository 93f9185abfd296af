# backend/app/magic.py

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np
from pydantic import ValidationError

from . import config
from .errors import InvalidMagicParams, TheoremViolation, UnsupportedDimension
from .field import FpElement
from .linalg import ComplexMatrix, ComplexVector
from .models import MagicParams
from .weyl import D, omega, same_ray, shift

logger = logging.getLogger(__name__)

GAMMA_ORDER = 8  # qubit magic phases are eighth roots of unity
XI_ORDER = 9  # qutrit magic phases are ninth roots of unity


def magic_params(a: int, b: int = 0, c: int = 0, p: int = 5) -> MagicParams:
    """Build MagicParams, reporting a bad triple as InvalidMagicParams."""
    try:
        return MagicParams(a=a, b=b, c=c, p=p)
    except ValidationError as e:
        raise InvalidMagicParams(
            "invalid magic-state parameters",
            {"a": a, "b": b, "c": c, "p": p, "reason": e.errors()[0]["msg"]},
        ) from e


def magic_exponents(params: MagicParams) -> Tuple[np.ndarray, int]:
    """
    Integer phase exponents of |f_{a,b,c}> and the root-of-unity order
    they refer to: mod p for p > 3, mod 8 for p = 2, mod 9 for p = 3.
    """
    a, b, c, p = params.a, params.b, params.c, params.p
    if p == 2:
        return np.array([0, a + 2 * b + 4 * c]), GAMMA_ORDER
    if p == 3:
        return np.array([0, 2 * a + 6 * b + 3 * c, a + 6 * b + 6 * c]), XI_ORDER
    k = np.arange(p, dtype=np.int64)
    return (a * k ** 3 + b * k ** 2 + c * k) % p, p


def magic_state(params: MagicParams) -> ComplexVector:
    exponents, order = magic_exponents(params)
    return omega(exponents, order) / np.sqrt(params.p)


def magic_gate(params: MagicParams) -> ComplexMatrix:
    """Diagonal M_{a,b,c} with M|+> = |f_{a,b,c}>."""
    exponents, order = magic_exponents(params)
    return np.diag(omega(exponents, order))


def jamiolkowski(params: MagicParams) -> ComplexVector:
    """(I (x) M)|Phi>: amplitude <jj|J> = <j|f>, zero off the diagonal pairs."""
    p = params.p
    f = magic_state(params)
    J = np.zeros(p * p, dtype=np.complex128)
    for j in range(p):
        J[j * p + j] = f[j]
    return J


def magic_clifford(params: MagicParams) -> ComplexMatrix:
    """C = M X M^dagger, which fixes |f_{a,b,c}>."""
    if params.p == 2:
        raise UnsupportedDimension("the magic-fixing Clifford is built for odd p", {"p": params.p})
    M = magic_gate(params)
    return M @ shift(params.p) @ M.conj().T


def canonical_phase(vector: ComplexVector, tol: float = 1e-12) -> ComplexVector:
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    v = np.asarray(vector, dtype=np.complex128)
    nonzero = np.flatnonzero(np.abs(v) > tol)
    if nonzero.size == 0:
        return v.copy()
    lead = v[nonzero[0]]
    return v * (abs(lead) / lead)


# ---------------------------------------------------------
#  Pauli action on (b, c)
# ---------------------------------------------------------

def params_from_displacement(a: FpElement, x: FpElement, z: FpElement) -> Tuple[FpElement, FpElement]:
    """
    (b, c) with D_(x|z)|f_{a,0,0}> = phase * |f_{a,b,c}>, i.e.
    b = -3ax and c = z + 3ax^2. The answer is checked against the vectors.
    """
    p = a.modulus
    if p <= 3:
        raise UnsupportedDimension("3^{-1} is needed, so p must exceed 3", {"p": p})

    b = -3 * a * x
    c = z + 3 * a * x * x

    moved = D(x.value, z.value, p) @ magic_state(magic_params(a.value, 0, 0, p))
    target = magic_state(magic_params(a.value, b.value, c.value, p))
    overlap = same_ray(moved, target)
    if abs(overlap - 1.0) > config.THEOREM_TOL:
        raise TheoremViolation(
            "displaced magic state does not match the predicted parameters",
            {"a": a.value, "x": x.value, "z": z.value, "b": b.value, "c": c.value, "overlap": overlap},
            code="magic.displacement_mismatch",
        )
    return b, c


def displacement_for_params(a: FpElement, b: FpElement, c: FpElement) -> Tuple[FpElement, FpElement]:
    """(x, z) = (-b/3a, c - b^2/3a), the displacement that carries |f_{a,0,0}> to |f_{a,b,c}>."""
    p = a.modulus
    if p <= 3:
        raise UnsupportedDimension("3^{-1} is needed, so p must exceed 3", {"p": p})
    three_a = 3 * a
    return -b / three_a, c - b * b / three_a

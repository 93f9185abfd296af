# backend/app/wigner.py

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from .errors import NotNormalized
from .linalg import ComplexVector
from .models import WignerFunction
from .weyl import D, _require_odd_prime

logger = logging.getLogger(__name__)

REAL_TOL = 1e-10


@lru_cache(maxsize=None)
def phase_point_operators(p: int) -> np.ndarray:
    """
    ops[x, z] = D_(x|z) A_0 D_(x|z)^dagger with A_0 = (1/p) sum_u D_u, the
    parity |j> -> |-j>. Returned read-only; the cache shares it across calls.
    """
    _require_odd_prime(p)
    A0 = sum(D(x, z, p) for x in range(p) for z in range(p)) / p

    ops = np.empty((p, p, p, p), dtype=np.complex128)
    for x in range(p):
        for z in range(p):
            Du = D(x, z, p)
            ops[x, z] = Du @ A0 @ Du.conj().T
    ops.setflags(write=False)
    return ops


def wigner_function(state: ComplexVector) -> WignerFunction:
    """W(x, z) = <psi|A_(x|z)|psi> / p."""
    state = np.asarray(state, dtype=np.complex128)
    p = state.shape[0]
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > 1e-9:
        raise NotNormalized("Wigner function needs a unit state", {"p": p, "norm": norm}, code="wigner.not_normalized")

    ops = phase_point_operators(p)
    values = np.einsum("i,xzij,j->xz", state.conj(), ops, state) / p

    imag = float(np.abs(values.imag).max())
    if imag > REAL_TOL:
        logger.warning("[WIGNER] imaginary residue %.3e exceeds %.0e | p=%d", imag, REAL_TOL, p)
    return WignerFunction(p=p, values=values.real.copy())


def w_min(state: ComplexVector) -> float:
    return float(wigner_function(state).values.min())


def mana(state: ComplexVector) -> float:
    """Natural log of sum_u |W(u)|; zero exactly when W is nonnegative."""
    total = float(np.abs(wigner_function(state).values).sum())
    return max(math.log(total), 0.0)


def sum_negativity(state: ComplexVector) -> float:
    values = wigner_function(state).values
    return float(-values[values < 0].sum())


def wigner_csv_rows(w: WignerFunction) -> List[Tuple[int, int, float]]:
    return [(x, z, float(w.values[x, z])) for x in range(w.p) for z in range(w.p)]

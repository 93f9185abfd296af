# backend/app/bell.py

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import config
from .errors import BudgetExceeded, TheoremViolation, UnsupportedDimension
from .field import cube_class_of, cubic_residue_classes, frac, half, inverse_int
from .linalg import ComplexMatrix, expectation, hermitian_eigen, kron, symmetrize
from .magic import jamiolkowski, magic_params, magic_state
from .models import BellOperators, GameValueReport, LhvResult, MubVectorRef, QubitChshReport, ReductionCheck
from .weyl import D, _require_odd_prime, csum, mub_projector, omega

logger = logging.getLogger(__name__)

__all__ = [
    "measurement_ops",
    "bell_operator",
    "s_operator",
    "s_star",
    "verify_reduction",
    "quantum_value",
    "class_values",
    "expectation",
    "qubit_chsh",
    "ic_bound",
    "weil_bound",
    "breidbart_probability",
]

REDUCTION_TOL = 1e-8


# ---------------------------------------------------------
#  Measurement operators
# ---------------------------------------------------------

def _alice_phase(x: int, p: int) -> int:
    # x(2x+1)/2 evaluated in Z_p
    return (x * (2 * x + 1) * half(p)) % p


def _bob_phase(y: int, p: int) -> int:
    # y(y+1)/4 evaluated in Z_p
    return (y * (y + 1) * inverse_int(4, p)) % p


def _powered(phase: int, z: int, n: int, p: int) -> ComplexMatrix:
    """(omega^phase D_(1|z))^n = omega^{n*phase} D_(n|nz)."""
    return omega(n * phase, p) * D(n, n * z, p)


def measurement_ops(p: int) -> Tuple[List[ComplexMatrix], List[ComplexMatrix]]:
    """
    A_x = omega^{x(2x+1)/2} D_(1|x) and B_y = omega^{y(y+1)/4} D_(1|y/2).
    """
    _require_odd_prime(p)
    h = half(p)
    alice = [_powered(_alice_phase(x, p), x, 1, p) for x in range(p)]
    bob = [_powered(_bob_phase(y, p), y * h, 1, p) for y in range(p)]
    return alice, bob


# ---------------------------------------------------------
#  Bell operators
# ---------------------------------------------------------

def _correlator_block(n: int, p: int) -> ComplexMatrix:
    """sum_{x,y} omega^{nxy} A_x^n (x) B_y^n for a single power n."""
    h = half(p)
    A = np.stack([_powered(_alice_phase(x, p), x, n, p) for x in range(p)])
    B = np.stack([_powered(_bob_phase(y, p), y * h, n, p) for y in range(p)])
    x = np.arange(p)
    weights = omega(n * np.outer(x, x), p)
    block = np.einsum("xy,xij,ykl->ikjl", weights, A, B)
    return block.reshape(p * p, p * p)


def bell_operator(p: int) -> BellOperators:
    """
    B* = (1/p) sum_{n != 0} sum_{x,y} omega^{nxy} A_x^n (x) B_y^n and B = B* + p I.
    Materializes p^2 x p^2 matrices, so it is capped by FULL_BELL_MAX_P.
    """
    _require_odd_prime(p)
    if p > config.FULL_BELL_MAX_P:
        raise BudgetExceeded(
            "full Bell operator exceeds the configured dimension cap",
            {"p": p, "max_p": config.FULL_BELL_MAX_P},
            code="bell.budget_exceeded",
        )

    traceless = np.zeros((p * p, p * p), dtype=np.complex128)
    for n in range(1, p):
        traceless += _correlator_block(n, p)
    traceless = symmetrize(traceless / p)
    full = traceless + p * np.eye(p * p, dtype=np.complex128)

    logger.debug("[BELL] built operators | p=%d", p)
    return BellOperators(full=full, traceless=traceless, p=p)


def s_vector_index(B: int, p: int) -> int:
    """V_B = -B(B + 1/2), the vector S picks out of basis B."""
    return (-B * (B + half(p))) % p


def s_operator(p: int) -> ComplexMatrix:
    """S = sum_B |psi_B^{V_B}><psi_B^{V_B}|, one projector per finite basis."""
    _require_odd_prime(p)
    S = np.zeros((p, p), dtype=np.complex128)
    for B in range(p):
        S += mub_projector(MubVectorRef(basis=B, vector=s_vector_index(B, p)), p)
    return symmetrize(S)


def s_star(p: int) -> ComplexMatrix:
    # The n = 0 term of the single-qudit sum is the identity.
    return s_operator(p) - np.eye(p, dtype=np.complex128)


def verify_reduction(p: int, max_p: Optional[int] = None) -> ReductionCheck:
    """Compare CSUM^dagger B* CSUM against p S* (x) |0><0|."""
    cap = config.FULL_BELL_MAX_P if max_p is None else max_p
    if p > cap:
        raise BudgetExceeded("reduction check needs the full Bell operator", {"p": p, "max_p": cap})

    C = csum(p)
    lhs = C.conj().T @ bell_operator(p).traceless @ C
    e0 = np.zeros((p, p), dtype=np.complex128)
    e0[0, 0] = 1.0
    rhs = p * kron(s_star(p), e0)

    residual = float(np.abs(lhs - rhs).max())
    passed = residual <= REDUCTION_TOL
    logger.info("[BELL] reduction check | p=%d | residual=%.3e | passed=%s", p, residual, passed)
    return ReductionCheck(p=p, passed=passed, residual=residual)


# ---------------------------------------------------------
#  Bounds and game values
# ---------------------------------------------------------

def ic_bound(p: int) -> float:
    """Information Causality cap on <B>: p(1 + (p-1)/sqrt(p))."""
    return p * (1 + (p - 1) / math.sqrt(p))


def weil_bound(p: int) -> Optional[float]:
    """4p, only meaningful for p > 3."""
    return 4.0 * p if p > 3 else None


def breidbart_probability() -> float:
    return 0.5 * (1 + 1 / math.sqrt(2))


def class_values(p: int) -> Dict[int, float]:
    """
    max_c |sum_k omega^{a k^3 + c k}|^2 for one representative a of each
    cubic-residue class, keyed by the representative. Empty for p = 3.
    """
    _require_odd_prime(p)
    if p <= 3:
        return {}
    k = np.arange(p)
    c = np.arange(p)[:, None]
    values = {}
    for cls in cubic_residue_classes(p):
        a = cls[0]
        sums = omega((a * k ** 3 + c * k) % p, p).sum(axis=1)
        values[a] = float((np.abs(sums) ** 2).max())
    return values


def quantum_value(p: int, lhv: Optional[LhvResult] = None) -> GameValueReport:
    """
    lambda_max(B) = p * lambda_max(S), solved on the p x p problem.

    For p > 3 the eigenvalue is cross-checked against the cubic sum of the
    class holding -1/12; the other classes are reported alongside.
    """
    _require_odd_prime(p)
    lam = p * float(hermitian_eigen(s_operator(p)).eigenvalues[-1])

    per_class = class_values(p)
    measured = None
    if per_class:
        a12 = frac(-1, 12, p).value
        measured = next(a for a in per_class if cube_class_of(a, p) == cube_class_of(a12, p))
        gap = abs(per_class[measured] - lam)
        if gap > config.THEOREM_TOL * max(1.0, lam):
            raise TheoremViolation(
                "lambda_max(B) differs from the -1/12 cubic sum",
                {"p": p, "lambda_max": lam, "cubic_sum": per_class[measured]},
            )

    report = GameValueReport(
        p=p,
        lambda_max_B=lam,
        nu=lam / (p * p),
        ic_bound=ic_bound(p),
        weil_bound=weil_bound(p),
        class_values=per_class,
        measured_class=measured,
        best_class_value=max(per_class.values()) if per_class else None,
        lhv_value=None if lhv is None else lhv.value,
        lhv_exact=False if lhv is None else lhv.exact,
        pauli_restricted=True,
        note="" if p <= 3 else "non-Pauli measurements may exceed this value",
    )
    logger.info(
        "[BELL] quantum value | p=%d | lambda_max=%.6f | nu=%.6f | best_class=%s",
        p, lam, report.nu, report.best_class_value,
    )
    return report


def best_cycler_overlap(p: int) -> Tuple[int, float]:
    """
    (c*, p |<+|f_{-1/12,-1/8,c*}>|^2): the magic state in the maximizing
    family with the largest weight on |+>.
    """
    if p <= 3:
        raise UnsupportedDimension("-1/12 and -1/8 need p > 3", {"p": p})
    a = frac(-1, 12, p).value
    b = frac(-1, 8, p).value
    best_c, best = 0, -1.0
    for c in range(p):
        f = magic_state(magic_params(a, b, c, p))
        value = float(abs(f.sum()) ** 2)
        if value > best + 1e-12:
            best_c, best = c, value
    return best_c, best


# ---------------------------------------------------------
#  Qubit anchor
# ---------------------------------------------------------

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


def qubit_chsh() -> QubitChshReport:
    """XX + XY + YX - YY, maximized by the qubit Jamiolkowski state |J_{1,0,0}>."""
    X, Y = PAULI_X, PAULI_Y
    operator = kron(X, X) + kron(X, Y) + kron(Y, X) - kron(Y, Y)
    lam = float(hermitian_eigen(operator).eigenvalues[-1])
    state = jamiolkowski(magic_params(1, 0, 0, 2))

    return QubitChshReport(
        operator=operator,
        lambda_max=lam,
        optimal_state=state,
        nu=(lam / 2 + 2) / 4,
        breidbart_probability=breidbart_probability(),
    )

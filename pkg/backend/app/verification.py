# backend/app/verification.py

from __future__ import annotations

import logging
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from . import config
from .balance import balanced_permutation, cycler_orbit, diagonalize_S, sato_tate, spectrum_matches_eigensolver
from .bell import bell_operator, ic_bound, quantum_value, s_operator, verify_reduction, weil_bound
from .entropy import equatorial_collision_bound, collision_total, min_entropy_bound, min_total, purity_sum, random_pure_states
from .errors import QuditError
from .field import fp, inv
from .lhv import lhv_exact, lhv_value, shifted
from .linalg import hermitian_eigen, is_hermitian, is_unitary
from .magic import magic_params, magic_state
from .models import CheckResult, MubVectorRef
from .weyl import D, mub_frame, mub_ket, mub_projector
from .wigner import mana, wigner_function

logger = logging.getLogger(__name__)

Check = Callable[[int, float], Tuple[bool, str]]


# ---------------------------------------------------------
#  Individual invariants. Each returns (passed, detail).
# ---------------------------------------------------------

def check_field_inverses(p: int, tol: float) -> Tuple[bool, str]:
    for v in range(1, p):
        x = fp(v, p)
        if x * inv(x) != 1 or inv(inv(x)) != x:
            return False, f"inverse of {v}"
    return True, ""


def check_displacements(p: int, tol: float) -> Tuple[bool, str]:
    for x in range(p):
        for z in range(p):
            Du = D(x, z, p)
            if not is_unitary(Du, tol):
                return False, f"D_({x}|{z}) not unitary"
            if np.abs(np.linalg.matrix_power(Du, 2) - D(2 * x, 2 * z, p)).max() > tol:
                return False, f"D_({x}|{z})^2 != D_({2 * x}|{2 * z})"
    return True, ""


def check_unbiasedness(p: int, tol: float) -> Tuple[bool, str]:
    frame = mub_frame(p)
    for i in range(p + 1):
        for j in range(i + 1, p + 1):
            overlaps = np.abs(frame[i].conj() @ frame[j].T) ** 2
            if np.abs(overlaps - 1 / p).max() > tol:
                return False, f"bases {i - 1} and {j - 1} not unbiased"
    return True, ""


def check_projectors(p: int, tol: float) -> Tuple[bool, str]:
    for B in range(p):
        for V in range(p):
            ref = MubVectorRef(basis=B, vector=V)
            P = mub_projector(ref, p)
            ket = mub_ket(ref, p)
            if np.abs(P @ P - P).max() > tol or np.abs(P - np.outer(ket, ket.conj())).max() > tol:
                return False, f"projector (B={B}, V={V})"
    return True, ""


def check_bell_operators(p: int, tol: float) -> Tuple[bool, str]:
    ops = bell_operator(p)
    if not (is_hermitian(ops.full, tol) and is_hermitian(ops.traceless, tol)):
        return False, "Bell operators not Hermitian"
    if np.abs(ops.full - ops.traceless - p * np.eye(p * p)).max() > 1e-12:
        return False, "B - B* != p I"
    full_max = hermitian_eigen(ops.full).eigenvalues[-1]
    via_s = quantum_value(p).lambda_max_B
    if abs(full_max - via_s) > 1e-7:
        return False, f"lambda_max(B)={full_max:.9f} but p*lambda_max(S)={via_s:.9f}"
    return True, ""


def check_reduction(p: int, tol: float) -> Tuple[bool, str]:
    result = verify_reduction(p)
    return result.passed, f"residual={result.residual:.3e}"


def check_game_bounds(p: int, tol: float) -> Tuple[bool, str]:
    report = quantum_value(p)
    if report.lambda_max_B > ic_bound(p) + 1e-9:
        return False, "lambda_max exceeds the Information Causality bound"
    weil = weil_bound(p)
    if weil is not None and report.lambda_max_B > weil + 1e-9:
        return False, "lambda_max exceeds the Weil bound"
    return True, f"lambda_max={report.lambda_max_B:.6f}"


def check_lhv(p: int, tol: float) -> Tuple[bool, str]:
    result = lhv_exact(p)
    for t in range(p):
        if lhv_value(shifted(result.strategy, t), p) != result.value:
            return False, f"shift t={t} changes the value"
    return True, f"value={result.value}"


def check_purity(p: int, tol: float) -> Tuple[bool, str]:
    for state in random_pure_states(p, 20, seed=config.SEED):
        total = purity_sum(state)
        if abs(total - 2.0) > 1e-9:
            return False, f"sum c^2 = {total}"
    return True, ""


def check_entropy_bounds(p: int, tol: float) -> Tuple[bool, str]:
    bound = min_entropy_bound(p)
    for a in range(1, p):
        state = magic_state(magic_params(a, 0, 0, p))
        if min_total(state) < bound - 1e-9:
            return False, f"min-entropy below bound for a={a}"
        if abs(collision_total(state) - equatorial_collision_bound(p)) > 1e-9:
            return False, f"collision entropy of a={a} does not saturate"
    return True, ""


def check_balance(p: int, tol: float) -> Tuple[bool, str]:
    for a in range(1, p):
        for b in range(p):
            balanced_permutation(a, b, p, c=(a + b) % p)
    return True, ""


def check_magic_diagonalizes_s(p: int, tol: float) -> Tuple[bool, str]:
    diagonalize_S(p)
    return spectrum_matches_eigensolver(p), ""


def check_cycler(p: int, tol: float) -> Tuple[bool, str]:
    orbit = cycler_orbit(p)
    return True, f"bases={orbit.basis_sequence}"


def check_sato_tate(p: int, tol: float) -> Tuple[bool, str]:
    _, summary = sato_tate(p)
    in_range = -1 - 1e-12 <= summary.theta_min and summary.theta_max <= 1 + 1e-12
    return in_range, f"max_imag={summary.max_imag_residue:.1e}"


def check_wigner(p: int, tol: float) -> Tuple[bool, str]:
    for a in range(1, p):
        state = magic_state(magic_params(a, 1, 0, p))
        w = wigner_function(state)
        if abs(w.values.sum() - 1.0) > 1e-9:
            return False, f"Wigner sum for a={a}"
        if np.abs(w.values.sum(axis=1) - np.abs(state) ** 2).max() > 1e-9:
            return False, f"Wigner marginals for a={a}"
        if mana(state) < 0:
            return False, f"negative mana for a={a}"
    basis_state = np.zeros(p, dtype=np.complex128)
    basis_state[0] = 1.0
    if abs(mana(basis_state)) > 1e-10:
        return False, "stabilizer state has nonzero mana"
    return True, ""


# name, check, smallest p, largest p (None = unbounded)
SUITE: List[Tuple[str, Check, int, Optional[int]]] = [
    ("field.inverses", check_field_inverses, 3, None),
    ("weyl.displacements", check_displacements, 3, None),
    ("weyl.unbiasedness", check_unbiasedness, 3, None),
    ("weyl.projectors", check_projectors, 3, None),
    ("bell.operators", check_bell_operators, 3, 7),
    ("bell.reduction", check_reduction, 3, 7),
    ("bell.bounds", check_game_bounds, 3, None),
    ("lhv.shift_symmetry", check_lhv, 3, config.LHV_EXACT_MAX_P),
    ("entropy.purity", check_purity, 3, None),
    ("entropy.bounds", check_entropy_bounds, 5, None),
    ("balance.mub_balanced", check_balance, 3, None),
    ("balance.diagonalizes_s", check_magic_diagonalizes_s, 5, None),
    ("balance.cycler", check_cycler, 5, None),
    ("balance.sato_tate", check_sato_tate, 5, None),
    ("wigner.invariants", check_wigner, 3, None),
]


def run_suite(p_list: Iterable[int], tol: float = config.HERMITIAN_TOL) -> List[CheckResult]:
    """Every applicable invariant for every p. A QuditError counts as a failure."""
    results: List[CheckResult] = []
    for p in p_list:
        for name, check, lo, hi in SUITE:
            if p < lo or (hi is not None and p > hi):
                continue
            try:
                passed, detail = check(p, tol)
            except QuditError as e:
                passed, detail = False, str(e)
            results.append(CheckResult(name=name, p=p, passed=bool(passed), detail=detail))
            logger.info("[VERIFY] %s | p=%d | passed=%s", name, p, passed)
    return results

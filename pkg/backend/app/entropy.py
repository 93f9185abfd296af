# backend/app/entropy.py

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from . import config
from .errors import NotNormalized
from .field import cubic_residue_classes
from .linalg import ComplexMatrix, ComplexVector
from .magic import magic_exponents, magic_params, magic_state
from .models import EntropyReport, EquatorialPhases, MagicParams, MinEntropyResult, MubTable
from .weyl import mub_frame

logger = logging.getLogger(__name__)

NORM_TOL = 1e-9
SIMPLEX_SCALE = 0.3
SIMPLEX_XATOL = 1e-7
POLISH_ROUNDS = 5

BasisSet = Sequence[Optional[int]]


def finite_bases(p: int) -> Tuple[int, ...]:
    return tuple(range(p))


def all_bases(p: int) -> Tuple[Optional[int], ...]:
    return (None,) + tuple(range(p))


def _column_index(basis: Optional[int], p: int) -> int:
    return 0 if basis is None else 1 + basis % p


# ---------------------------------------------------------
#  MUB tables
# ---------------------------------------------------------

def mub_table(state: ComplexVector, p: int) -> MubTable:
    """c_{V,B} = |<psi_B^V|state>|^2 over the infinity basis and all finite B."""
    state = np.asarray(state, dtype=np.complex128)
    norm = float(np.linalg.norm(state))
    if state.shape != (p,) or abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized("state must be a unit vector of dimension p", {"p": p, "norm": norm, "shape": state.shape})

    amplitudes = mub_frame(p).conj() @ state  # [basis, V]
    return MubTable(p=p, probabilities=(np.abs(amplitudes) ** 2).T)


def reconstruct(table: MubTable, traceK: float) -> ComplexMatrix:
    """K = sum_{B,V} c_{V,B} |psi_B^V><psi_B^V| - Tr(K) I."""
    p = table.p
    frame = mub_frame(p)
    K = np.einsum("vb,bvi,bvj->ij", table.probabilities, frame, frame.conj())
    return K - traceK * np.eye(p, dtype=np.complex128)


def _basis_probabilities(state: ComplexVector, p: int, basis_set: BasisSet) -> np.ndarray:
    table = mub_table(state, p)
    cols = [_column_index(B, p) for B in basis_set]
    return table.probabilities[:, cols].T  # [basis, V]


def collision_entropies(state: ComplexVector, basis_set: BasisSet) -> np.ndarray:
    probs = _basis_probabilities(state, len(state), basis_set)
    return -np.log2(np.sum(probs ** 2, axis=1))


def min_entropies(state: ComplexVector, basis_set: BasisSet) -> np.ndarray:
    probs = _basis_probabilities(state, len(state), basis_set)
    return -np.log2(np.max(probs, axis=1))


def collision_total(state: ComplexVector, basis_set: Optional[BasisSet] = None) -> float:
    basis_set = finite_bases(len(state)) if basis_set is None else basis_set
    return float(collision_entropies(state, basis_set).sum())


def min_total(state: ComplexVector, basis_set: Optional[BasisSet] = None) -> float:
    basis_set = finite_bases(len(state)) if basis_set is None else basis_set
    return float(min_entropies(state, basis_set).sum())


# ---------------------------------------------------------
#  Bounds
# ---------------------------------------------------------

def equatorial_collision_bound(p: int) -> float:
    """-p log2((2 - 1/p)/p), the collision floor over Z_p for equatorial states."""
    return -p * math.log2((2 - 1 / p) / p)


def min_entropy_bound(p: int) -> float:
    """-p log2[(1 + (p-1)/sqrt(p))/p], the min-entropy floor over the p finite bases."""
    return -p * math.log2((1 + (p - 1) / math.sqrt(p)) / p)


def min_entropy_bound_all(p: int) -> float:
    return -(p + 1) * math.log2((1 + (p - 1) / math.sqrt(p + 1)) / p)


def collision_bound_all(p: int) -> float:
    return -(p + 1) * math.log2(2 / (p + 1))


def entropy_report(state: ComplexVector, basis_set: Optional[BasisSet] = None) -> EntropyReport:
    p = len(state)
    basis_set = tuple(finite_bases(p) if basis_set is None else basis_set)
    h2 = collision_entropies(state, basis_set)
    hmin = min_entropies(state, basis_set)

    bounds: Dict[str, float] = {}
    if basis_set == all_bases(p):
        bounds = {"collision": collision_bound_all(p), "min_entropy": min_entropy_bound_all(p)}
    elif basis_set == finite_bases(p):
        bounds = {"equatorial_collision": equatorial_collision_bound(p), "min_entropy": min_entropy_bound(p)}

    return EntropyReport(
        p=p,
        bases=basis_set,
        collision=tuple(float(v) for v in h2),
        min_entropy=tuple(float(v) for v in hmin),
        collision_total=float(h2.sum()),
        min_total=float(hmin.sum()),
        bounds=bounds,
    )


# ---------------------------------------------------------
#  Equatorial states
# ---------------------------------------------------------

def equatorial_state(phi: EquatorialPhases) -> ComplexVector:
    phases = np.concatenate([[0.0], np.asarray(phi.phases)])
    return np.exp(1j * phases) / np.sqrt(phi.p)


def magic_phases(params: MagicParams) -> EquatorialPhases:
    """The phase vector that reproduces |f_{a,b,c}> (8th and 9th roots for p = 2, 3)."""
    exponents, order = magic_exponents(params)
    return EquatorialPhases(phases=tuple(2 * math.pi * int(e % order) / order for e in exponents[1:]))


def _finite_min_total(phases: np.ndarray, kets: np.ndarray, p: int) -> float:
    """Total min-entropy over the finite bases for raw phi_1..phi_{p-1}."""
    state = np.exp(1j * np.concatenate([[0.0], phases])) / np.sqrt(p)
    probs = np.abs(kets @ state) ** 2  # [B, V]
    return float(-np.log2(probs.max(axis=1)).sum())


def magic_class_min_entropies(p: int) -> Dict[int, float]:
    """
    Total min-entropy of |f_{a,0,0}> over Z_p for one representative a per
    cubic-residue class (keyed by representative). For p = 3 both a are listed.
    """
    reps = [1, 2] if p == 3 else [cls[0] for cls in cubic_residue_classes(p)]
    return {a: min_total(magic_state(magic_params(a, 0, 0, p))) for a in reps}


def minimize_min_entropy(
    p: int,
    restarts: Optional[int] = None,
    seed: int = config.SEED,
) -> MinEntropyResult:
    """
    Multistart Nelder-Mead over phi_1..phi_{p-1}. Every a in Z_p^* contributes
    a magic-phase start; `restarts` uniformly random starts follow.
    """
    if restarts is None:
        restarts = config.ENTROPY_RESTARTS_LARGE if p >= 11 else config.ENTROPY_RESTARTS
    if restarts < 1:
        raise ValueError("restarts must be at least 1")

    kets = mub_frame(p)[1:].conj()
    objective = lambda phases: _finite_min_total(phases, kets, p)  # noqa: E731

    magic_starts = [np.asarray(magic_phases(magic_params(a, 0, 0, p)).phases) for a in range(1, p)]
    magic_value = min(objective(s) for s in magic_starts)

    rngs = [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(restarts)]
    random_starts = [rng.uniform(0, 2 * math.pi, size=p - 1) for rng in rngs]

    best_value, best_phases = math.inf, None
    for i, start in enumerate(magic_starts + random_starts):
        phases, value = _polish(objective, start, p)
        logger.debug("[ENTROPY] p=%d | start=%d | value=%.6f", p, i, value)
        if value < best_value - 1e-12:
            best_value, best_phases = value, phases

    result = MinEntropyResult(
        p=p,
        phases=EquatorialPhases(phases=tuple(float(v) for v in best_phases)),
        value=best_value,
        magic_value=magic_value,
        is_magic=best_value >= magic_value - 1e-6,
        restarts_used=restarts,
    )
    logger.info(
        "[ENTROPY] minimize | p=%d | restarts=%d | best=%.6f | magic=%.6f | is_magic=%s",
        p, restarts, result.value, result.magic_value, result.is_magic,
    )
    return result


def _polish(objective, start: np.ndarray, p: int) -> Tuple[np.ndarray, float]:
    """Nelder-Mead, restarted from its own answer until it stops improving."""
    x, fx = np.asarray(start, dtype=float), objective(start)
    n = p - 1
    for _ in range(POLISH_ROUNDS):
        simplex = np.vstack([x, x + SIMPLEX_SCALE * np.eye(n)])
        res = minimize(
            objective,
            x,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": SIMPLEX_XATOL,
                "fatol": 1e-10,
                "maxiter": 400 * n,
                "maxfev": 800 * n,
            },
        )
        if res.fun < fx - 1e-10:
            x, fx = res.x, float(res.fun)
        else:
            break
    return x, fx


# ---------------------------------------------------------
#  Qutrit landscape
# ---------------------------------------------------------

def fig2_grid(resolution: int) -> np.ndarray:
    """
    Rows (x, y, total min-entropy) for qutrit states (1, xi^x, xi^y)/sqrt(3),
    xi = exp(2 pi i / 9), sampled on x, y = 9 i / resolution.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16 per axis")

    p = 3
    kets = mub_frame(p)[1:].conj()
    ticks = 9.0 * np.arange(resolution) / resolution
    xs, ys = np.meshgrid(ticks, ticks, indexing="ij")
    xs, ys = xs.ravel(), ys.ravel()

    theta = 2 * np.pi / 9
    states = np.stack([np.ones_like(xs), np.exp(1j * theta * xs), np.exp(1j * theta * ys)], axis=1) / np.sqrt(3)
    probs = np.abs(np.einsum("bvk,nk->nbv", kets, states)) ** 2
    totals = -np.log2(probs.max(axis=2)).sum(axis=1)

    logger.info("[ENTROPY] fig2 grid | resolution=%d | min=%.6f", resolution, float(totals.min()))
    return np.column_stack([xs, ys, totals])


def purity_sum(state: ComplexVector) -> float:
    return mub_table(state, len(state)).purity_sum()


def random_pure_states(p: int, count: int, seed: int = config.SEED) -> List[ComplexVector]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        v = rng.normal(size=p) + 1j * rng.normal(size=p)
        out.append(v / np.linalg.norm(v))
    return out


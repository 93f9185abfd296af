# backend/app/balance.py

from __future__ import annotations

import logging
import warnings
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy import stats

from . import config
from .bell import s_operator
from .entropy import mub_table
from .errors import TheoremViolation, UnsupportedDimension
from .field import frac, half, inverse_int
from .linalg import hermitian_eigen
from .magic import magic_clifford, magic_params, magic_state
from .models import BalancePermutation, CyclerOrbit, EigenResult, OrbitStep, SatoTateSample, SatoTateSummary
from .weyl import mub_frame, omega, plus_state

logger = logging.getLogger(__name__)

BALANCE_TOL = 1e-10
HISTOGRAM_BINS = 20


def _require_large_prime(p: int, what: str) -> None:
    if p <= 3:
        raise UnsupportedDimension(f"{what} needs 12^{{-1}} in Z_p, so p must exceed 3", {"p": p})


# ---------------------------------------------------------
#  Cubic exponential sums
# ---------------------------------------------------------

def cubic_sum(a: int, b: int, c: int, p: int) -> complex:
    k = np.arange(p, dtype=np.int64)
    return complex(omega(a * k ** 3 + b * k ** 2 + c * k, p).sum())


def t_value(a: int, b: int, c: int, p: int) -> float:
    """T_{a,b,c} = |sum_k omega^{ak^3 + bk^2 + ck}| / p."""
    _require_large_prime(p, "t_value")
    return abs(cubic_sum(a, b, c, p)) / p


def overlap_from_t(a: int, b: int, c: int, B: int, V: int, p: int) -> float:
    """|<psi_B^V|f_{a,b,c}>|^2 = |sum_k omega^{ak^3 + (b - B/2)k^2 + (c + V)k}|^2 / p^2."""
    return abs(cubic_sum(a, b - B * half(p), c + V, p)) ** 2 / p ** 2


# ---------------------------------------------------------
#  MUB-balancedness
# ---------------------------------------------------------

def balance_offset(a: int, b: int, B: int, p: int) -> int:
    """Delta(B) = (B^2 - 4Bb) / 12a."""
    return (B * B - 4 * B * b) * inverse_int(12 * a, p) % p


def balanced_permutation(a: int, b: int, p: int, c: int = 0) -> BalancePermutation:
    """
    Checks that basis B of |f_{a,b,c}> holds the basis-0 distribution moved
    by V -> V + Delta(B). For p = 3 the offset formula is undefined and only
    multiset equality of the finite-basis columns is checked.
    """
    params = magic_params(a, b, c, p)
    table = mub_table(magic_state(params), p)
    base = table.column(0)

    if p == 3:
        reference = np.sort(base)
        worst = 0.0
        for B in range(1, p):
            residual = float(np.abs(np.sort(table.column(B)) - reference).max())
            worst = max(worst, residual)
            if residual > BALANCE_TOL:
                raise TheoremViolation(
                    "qutrit magic state is not MUB-balanced",
                    {"a": a, "b": b, "c": c, "B": B, "residual": residual},
                )
        return BalancePermutation(p=p, a=params.a, b=params.b, c=params.c, max_residual=worst)

    _require_large_prime(p, "balanced_permutation")
    offsets = tuple(balance_offset(params.a, params.b, B, p) for B in range(p))
    worst = 0.0
    for B, delta in enumerate(offsets):
        column = table.column(B)
        for V in range(p):
            residual = abs(base[V] - column[(V + delta) % p])
            worst = max(worst, residual)
            if residual > BALANCE_TOL:
                raise TheoremViolation(
                    "basis probabilities do not follow the balancing offset",
                    {"a": a, "b": b, "c": c, "B": B, "V": V, "residual": residual},
                )
    return BalancePermutation(p=p, a=params.a, b=params.b, c=params.c, offsets=offsets, max_residual=worst)


# ---------------------------------------------------------
#  Diagonalizing S
# ---------------------------------------------------------

def maximizing_family(p: int) -> Tuple[int, int]:
    """(a, b) = (-1/12, -1/8) as residues."""
    _require_large_prime(p, "the maximizing family")
    return frac(-1, 12, p).value, frac(-1, 8, p).value


def diagonalize_S(p: int) -> EigenResult:
    """
    U has columns |f_{-1/12,-1/8,c}>, c in Z_p. U^dagger S U must be
    diagonal; its diagonal is returned ascending with the matching columns.
    """
    a, b = maximizing_family(p)
    U = np.column_stack([magic_state(magic_params(a, b, c, p)) for c in range(p)])
    S = s_operator(p)
    Dm = U.conj().T @ S @ U

    off = Dm - np.diag(np.diag(Dm))
    off_mass = float(np.sqrt(np.sum(np.abs(off) ** 2)))
    if off_mass > config.THEOREM_TOL:
        raise TheoremViolation("magic basis does not diagonalize S", {"p": p, "off_diagonal": off_mass})

    spectrum = np.real(np.diag(Dm))
    c_star = int(spectrum.argmax())
    predicted = p * abs(np.vdot(plus_state(p), U[:, c_star])) ** 2
    if abs(spectrum[c_star] - predicted) > config.THEOREM_TOL:
        raise TheoremViolation(
            "largest eigenvalue differs from p|<+|f>|^2",
            {"p": p, "c": c_star, "eigenvalue": float(spectrum[c_star]), "predicted": float(predicted)},
        )

    order = np.argsort(spectrum, kind="stable")
    logger.info("[BALANCE] S diagonalized | p=%d | c*=%d | lambda_max=%.6f", p, c_star, spectrum[c_star])
    return EigenResult(eigenvalues=spectrum[order], eigenvectors=U[:, order], sweeps=0)


def spectrum_matches_eigensolver(p: int, tol: float = 1e-8) -> bool:
    ours = diagonalize_S(p).eigenvalues
    reference = hermitian_eigen(s_operator(p)).eigenvalues
    return bool(np.abs(np.sort(ours) - np.sort(reference)).max() <= tol)


# ---------------------------------------------------------
#  Cycler orbit
# ---------------------------------------------------------

def identify_mub_vector(state: np.ndarray, p: int) -> Tuple[Optional[int], int, float]:
    """(basis, V, overlap) of the MUB vector matching state; basis None is the computational basis."""
    overlaps = np.abs(mub_frame(p).conj() @ state) ** 2  # [basis, V]
    i, V = np.unravel_index(int(overlaps.argmax()), overlaps.shape)
    basis = None if i == 0 else int(i) - 1
    return basis, int(V), float(overlaps[i, V])


def orbit_closed_form(r: int, p: int) -> Tuple[int, int]:
    """(B_r, V_r) = (-r/2, (r/2)(-r/2 + 1/2))."""
    h = half(p)
    return (-r * h) % p, (r * h * (-r * h + h)) % p


def cycler_orbit(p: int, c: int = 0) -> CyclerOrbit:
    """Repeated application of C_{-1/12,-1/8,c} to |+>, each step identified as an MUB vector."""
    a, b = maximizing_family(p)
    params = magic_params(a, b, c, p)
    C = magic_clifford(params)

    state = plus_state(p)
    steps: List[OrbitStep] = []
    for r in range(p):
        basis, V, overlap = identify_mub_vector(state, p)
        if overlap < 1 - config.IDENTIFY_TOL or basis is None:
            raise TheoremViolation(
                "cycler image is not a finite-basis MUB vector",
                {"p": p, "r": r, "basis": basis, "overlap": overlap},
            )
        expected = orbit_closed_form(r, p)
        if (basis, V) != expected:
            raise TheoremViolation(
                "cycler orbit departs from the closed form",
                {"p": p, "r": r, "found": (basis, V), "expected": expected},
            )
        steps.append(OrbitStep(r=r, basis=basis, vector=V, overlap=overlap))
        state = C @ state

    orbit = CyclerOrbit(p=p, params=params, steps=steps)
    if len(set(orbit.basis_sequence)) != p:
        raise TheoremViolation("cycler revisits a basis early", {"p": p, "sequence": orbit.basis_sequence})

    logger.info("[BALANCE] cycler orbit | p=%d | bases=%s", p, orbit.basis_sequence)
    return orbit


# ---------------------------------------------------------
#  Sato-Tate statistics
# ---------------------------------------------------------

def sato_tate(
    p: int,
    a_filter: Optional[Iterable[int]] = None,
    bins: int = HISTOGRAM_BINS,
) -> Tuple[List[SatoTateSample], SatoTateSummary]:
    """
    theta_{a,c} = sum_k omega^{ak^3 + ck} / (2 sqrt p) over a in Z_p^* (or
    a_filter) and c in Z_p. The semicircle KS comparison runs only for
    p >= config.KS_MIN_P; below that both KS fields stay None.
    """
    _require_large_prime(p, "sato_tate")
    a_values = np.array(sorted({a % p for a in a_filter}) if a_filter is not None else range(1, p), dtype=np.int64)
    a_values = a_values[a_values != 0]

    k = np.arange(p, dtype=np.int64)
    c_values = np.arange(p, dtype=np.int64)
    exps = a_values[:, None, None] * k ** 3 + c_values[None, :, None] * k
    sums = omega(exps, p).sum(axis=2)  # [a, c]
    theta_complex = sums / (2 * np.sqrt(p))

    max_imag = float(np.abs(theta_complex.imag).max())
    if max_imag > 1e-10:
        raise TheoremViolation("cubic sum is not real", {"p": p, "max_imag": max_imag})

    theta = theta_complex.real
    samples = [
        SatoTateSample(p=p, a=int(a), c=int(c), theta=float(theta[i, j]))
        for i, a in enumerate(a_values)
        for j, c in enumerate(c_values)
    ]

    flat = theta.ravel()
    histogram, edges = np.histogram(flat, bins=bins, range=(-1.0, 1.0))
    ks_statistic = ks_passed = None
    if p >= config.KS_MIN_P:
        ks_statistic = float(stats.kstest(flat, stats.semicircular.cdf).statistic)
        ks_passed = ks_statistic < config.KS_THRESHOLD
        if not ks_passed:
            message = f"theta distribution at p={p} is far from the semicircle (KS={ks_statistic:.4f})"
            logger.warning("[SATO-TATE] %s", message)
            warnings.warn(message, RuntimeWarning, stacklevel=2)

    summary = SatoTateSummary(
        p=p,
        count=int(flat.size),
        theta_min=float(flat.min()),
        theta_max=float(flat.max()),
        histogram=[int(h) for h in histogram],
        bin_edges=[float(e) for e in edges],
        max_abs_sum=float(2 * np.sqrt(p) * np.abs(flat).max()),
        weil_limit=float(2 * np.sqrt(p)),
        max_imag_residue=max_imag,
        ks_statistic=ks_statistic,
        ks_passed=ks_passed,
    )
    logger.info("[SATO-TATE] p=%d | samples=%d | ks=%s", p, summary.count, summary.ks_statistic)
    return samples, summary

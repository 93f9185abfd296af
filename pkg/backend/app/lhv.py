# backend/app/lhv.py

from __future__ import annotations

import itertools
import logging
from typing import Tuple

import numpy as np

from . import config
from .errors import BudgetExceeded
from .models import LhvResult, LhvStrategy

logger = logging.getLogger(__name__)

ENUMERATION_CHUNK = 4096


def lhv_value(s: LhvStrategy, p: int) -> int:
    """Number of (x, y) with a_x + b_y + xy = 0 mod p."""
    a = np.asarray(s.alice, dtype=np.int64)
    b = np.asarray(s.bob, dtype=np.int64)
    x = np.arange(p)
    wins = (a[:, None] + b[None, :] + np.outer(x, x)) % p == 0
    return int(wins.sum())


def _bob_histograms(alice: np.ndarray, p: int) -> np.ndarray:
    """
    counts[n, y, b] = |{x : a_x + xy = -b}| for a batch of Alice vectors.
    """
    x = np.arange(p)
    targets = (-alice[:, None, :] - np.outer(x, x)[None, :, :]) % p  # [n, y, x]
    return (targets[..., None] == np.arange(p)).sum(axis=2)


def _greedy_bob(alice: np.ndarray, p: int) -> Tuple[np.ndarray, np.ndarray]:
    """Best Bob response per row (ties to the smallest b) and the resulting values."""
    counts = _bob_histograms(np.atleast_2d(alice), p)
    bob = counts.argmax(axis=2)
    values = counts.max(axis=2).sum(axis=1)
    return bob, values


def _result(alice: np.ndarray, bob: np.ndarray, p: int, exact: bool, restarts: int) -> LhvResult:
    strategy = LhvStrategy(alice=tuple(int(v) for v in alice), bob=tuple(int(v) for v in bob), p=p)
    return LhvResult(value=lhv_value(strategy, p), strategy=strategy, exact=exact, restarts_used=restarts)


# ---------------------------------------------------------
#  Exact enumeration
# ---------------------------------------------------------

def lhv_exact(p: int) -> LhvResult:
    """
    Global maximum by enumerating Alice vectors with a_0 = 0 (the t-shift
    symmetry fixes one coordinate); Bob's greedy response is exact per y.
    """
    if p > config.LHV_EXACT_MAX_P:
        raise BudgetExceeded(
            "exhaustive search is outside the enumeration budget; use lhv_search",
            {"p": p, "max_p": config.LHV_EXACT_MAX_P},
        )

    best_value = -1
    best_alice = best_bob = None
    candidates = itertools.product(range(p), repeat=p - 1)

    while True:
        chunk = list(itertools.islice(candidates, ENUMERATION_CHUNK))
        if not chunk:
            break
        alice = np.zeros((len(chunk), p), dtype=np.int64)
        alice[:, 1:] = np.asarray(chunk, dtype=np.int64)

        bob, values = _greedy_bob(alice, p)
        i = int(values.argmax())
        if values[i] > best_value:
            best_value = int(values[i])
            best_alice, best_bob = alice[i].copy(), bob[i].copy()

    logger.info("[LHV] exact | p=%d | value=%d", p, best_value)
    return _result(best_alice, best_bob, p, exact=True, restarts=0)


# ---------------------------------------------------------
#  Stochastic search
# ---------------------------------------------------------

def _neighbourhood_values(alice: np.ndarray, p: int, xy: np.ndarray) -> np.ndarray:
    """
    values[x, v]: game value after setting a_x = v, with Bob re-solved.
    Moving a_x takes one point out of bin (-a_x - xy) and drops it into
    (-v - xy) for every y, so each row max follows from the current
    histogram, its maxima and whether the top bin is unique.
    """
    y = np.arange(p)
    counts = _bob_histograms(alice[None, :], p)[0]  # [y, b]
    top = counts.max(axis=1)
    unique_top = (counts == top[:, None]).sum(axis=1) == 1

    old_bin = (-alice[:, None] - xy) % p  # [x, y]
    lost_top = (counts[y[None, :], old_bin] == top[None, :]) & unique_top[None, :]
    after_removal = top[None, :] - lost_top

    new_bin = (-y[None, :, None] - xy[:, None, :]) % p  # [x, v, y]
    gained = counts[y[None, None, :], new_bin] + 1
    values = np.maximum(after_removal[:, None, :], gained).sum(axis=2)
    values[y, alice] = top.sum()
    return values


def _climb(alice: np.ndarray, p: int, rng: np.random.Generator, xy: np.ndarray) -> Tuple[np.ndarray, int]:
    """
    Steepest ascent over single-coordinate moves. On a plateau it takes up
    to p random sideways moves; when those run out it tries one round of
    alternating best responses before giving up.
    """
    current = int(_greedy_bob(alice, p)[1][0])
    sideways = 0
    while True:
        table = _neighbourhood_values(alice, p, xy)
        table[np.arange(p), alice] = -1
        best = int(table.max())

        if best > current:
            x, v = divmod(int(table.argmax()), p)
            sideways = 0
        elif best == current and sideways < p:
            moves = np.flatnonzero(table == current)
            x, v = divmod(int(moves[rng.integers(len(moves))]), p)
            sideways += 1
        else:
            # xy is symmetric, so Alice's best response to Bob has Bob's form
            bob = _greedy_bob(alice, p)[0][0]
            answer = _greedy_bob(bob, p)[0][0]
            value = int(_greedy_bob(answer, p)[1][0])
            if value <= current:
                return alice, current
            alice, current, sideways = answer.astype(np.int64), value, 0
            continue

        alice = alice.copy()
        alice[x] = v
        current = best


def lhv_search(
    p: int,
    restarts: int = config.LHV_RESTARTS,
    seed: int = config.SEED,
    kicks: int = config.LHV_KICKS,
) -> LhvResult:
    """
    Iterated local search over Alice's vector with Bob always best-responding.

    Each restart climbs from a random vector, then `kicks` times re-randomizes
    a few coordinates of its incumbent, climbs again and keeps the result
    unless it scores lower. Each restart draws from its own spawned seed.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if kicks < 0:
        raise ValueError("kicks cannot be negative")

    x = np.arange(p)
    xy = np.outer(x, x)
    kick_size = min(p, max(2, p // 6))

    best_value = -1
    best_alice = None
    for r, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.default_rng(child)
        alice, value = _climb(rng.integers(0, p, size=p), p, rng, xy)
        for _ in range(kicks):
            trial = alice.copy()
            trial[rng.choice(p, size=kick_size, replace=False)] = rng.integers(0, p, size=kick_size)
            trial, trial_value = _climb(trial, p, rng, xy)
            if trial_value >= value:
                alice, value = trial, trial_value
        logger.debug("[LHV] p=%d | restart=%d | value=%d", p, r, value)
        if value > best_value:
            best_value, best_alice = value, alice

    bob, _ = _greedy_bob(best_alice, p)
    result = _result(best_alice, bob[0], p, exact=False, restarts=restarts)
    logger.info(
        "[LHV] search | p=%d | restarts=%d | kicks=%d | seed=%d | value=%d",
        p, restarts, kicks, seed, result.value,
    )
    return result


def lhv_best(p: int, restarts: int = config.LHV_RESTARTS, seed: int = config.SEED) -> LhvResult:
    """Exact maximum when p is within the enumeration budget, search otherwise."""
    if p <= config.LHV_EXACT_MAX_P:
        return lhv_exact(p)
    return lhv_search(p, restarts=restarts, seed=seed)


def shifted(s: LhvStrategy, t: int) -> LhvStrategy:
    """(a_x + t, b_y - t), which scores the same as s."""
    return LhvStrategy(
        alice=tuple(v + t for v in s.alice),
        bob=tuple(v - t for v in s.bob),
        p=s.p,
    )

import itertools

import numpy as np
import pytest

from app.bell import quantum_value
from app.errors import BudgetExceeded
from app.lhv import _greedy_bob, _neighbourhood_values, lhv_exact, lhv_search, lhv_value, shifted
from app.models import LhvStrategy


def test_all_zero_strategy():
    s = LhvStrategy(alice=(0, 0, 0), bob=(0, 0, 0), p=3)
    assert lhv_value(s, 3) == 5


def test_qubit_classical_chsh():
    best = max(
        lhv_value(LhvStrategy(alice=a, bob=b, p=2), 2)
        for a in itertools.product(range(2), repeat=2)
        for b in itertools.product(range(2), repeat=2)
    )
    assert best == 3
    assert lhv_exact(2).value == 3


@pytest.mark.parametrize("p, expected", [(3, 6), (5, 12), (7, 19)])
def test_exact_values(p, expected):
    result = lhv_exact(p)
    assert result.exact
    assert result.value == expected
    assert lhv_value(result.strategy, p) == expected
    assert result.strategy.alice[0] == 0


def test_exact_budget():
    with pytest.raises(BudgetExceeded):
        lhv_exact(11)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_shift_symmetry(p):
    s = lhv_exact(p).strategy
    for t in range(p):
        assert lhv_value(shifted(s, t), p) == lhv_value(s, p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_search_never_beats_exact(p):
    found = lhv_search(p, restarts=10, seed=0)
    assert not found.exact
    assert found.value <= lhv_exact(p).value
    assert lhv_value(found.strategy, p) == found.value


def test_search_is_deterministic():
    first = lhv_search(7, restarts=5, seed=3)
    second = lhv_search(7, restarts=5, seed=3)
    assert first == second


def test_strategy_entries_reduced():
    s = LhvStrategy(alice=(-1, 5, 3), bob=(0, 0, 0), p=3)
    assert s.alice == (2, 2, 0)


@pytest.mark.slow
@pytest.mark.parametrize("p, floor", [(11, 37), (13, 47)])
def test_search_reaches_known_strategies(p, floor):
    found = lhv_search(p, restarts=200, seed=0)
    assert found.value >= floor
    assert lhv_value(found.strategy, p) == found.value


@pytest.mark.slow
def test_classical_beats_pauli_quantum_at_eleven():
    assert lhv_search(11, restarts=200, seed=0).value > quantum_value(11).lambda_max_B


@pytest.mark.parametrize("p", [5, 7, 11])
def test_neighbourhood_matches_direct_evaluation(p):
    rng = np.random.default_rng(p)
    x = np.arange(p)
    for _ in range(3):
        alice = rng.integers(0, p, size=p)
        table = _neighbourhood_values(alice, p, np.outer(x, x))
        for i in range(p):
            for v in range(p):
                moved = alice.copy()
                moved[i] = v
                assert table[i, v] == _greedy_bob(moved, p)[1][0]


def test_search_finds_exact_optimum_at_five():
    assert lhv_search(5, restarts=3, seed=0).value == 12


def test_search_without_kicks():
    found = lhv_search(7, restarts=4, seed=1, kicks=0)
    assert found.value <= 19
    assert lhv_value(found.strategy, 7) == found.value


def test_search_rejects_bad_arguments():
    with pytest.raises(ValueError):
        lhv_search(7, restarts=0)
    with pytest.raises(ValueError):
        lhv_search(7, restarts=1, kicks=-1)


@pytest.mark.slow
def test_search_reaches_known_strategy_at_seventeen():
    found = lhv_search(17, restarts=500, seed=0)
    assert found.value >= 66


@pytest.mark.slow
@pytest.mark.parametrize("p, floor", [(19, 79), (23, 99), (29, 135)])
def test_search_reaches_known_strategies_large(p, floor):
    found = lhv_search(p, restarts=200, seed=0)
    assert found.value >= floor
    assert lhv_value(found.strategy, p) == found.value

import math

import numpy as np
import pytest

from app.bell import (
    best_cycler_overlap,
    bell_operator,
    breidbart_probability,
    class_values,
    expectation,
    ic_bound,
    measurement_ops,
    quantum_value,
    qubit_chsh,
    s_operator,
    s_star,
    verify_reduction,
    weil_bound,
)
from app.errors import BudgetExceeded
from app.field import half
from app.linalg import hermitian_eigen, is_hermitian, is_unitary, lambda_max
from app.magic import jamiolkowski, magic_params
from app.weyl import D

# p -> (IC bound, Weil bound, lambda_max(B) as computed, reference quantum value)
TABLE1 = {
    3: (6.4641, None, 6.4115, 6.4115),
    5: (13.9443, 20, 13.0902, 13.0902),
    7: (22.8745, 28, 19.4112, 19.4112),
    11: (44.1662, 44, 34.6464, 34.6464),
    13: (56.2666, 52, 32.2622, 48.3481),
    17: (82.9697, 68, 55.1022, 55.1022),
    19: (97.4602, 76, 57.6831, 72.6084),
    23: (128.508, 92, 74.8954, 74.8954),
    29: (179.785, 116, 104.819, 104.819),
}


def test_measurement_ops():
    for p in [3, 5, 7]:
        A, B = measurement_ops(p)
        assert np.abs(A[0] - D(1, 0, p)).max() < 1e-15
        for op in A + B:
            assert is_unitary(op)
            assert np.abs(np.linalg.matrix_power(op, p) - np.eye(p)).max() < 1e-10
    A, B = measurement_ops(7)
    for y in range(7):
        assert np.abs(A[(y * half(7)) % 7] - B[y]).max() < 1e-12


def test_measurement_spectrum():
    A, _ = measurement_ops(5)
    roots = np.sort(np.angle(np.exp(2j * np.pi * np.arange(5) / 5)))
    for op in A:
        assert np.abs(np.sort(np.angle(np.linalg.eigvals(op))) - roots).max() < 1e-8


@pytest.mark.parametrize("p", [3, 5])
def test_bell_operator_structure(p):
    ops = bell_operator(p)
    assert is_hermitian(ops.full) and is_hermitian(ops.traceless)
    assert np.abs(ops.full - ops.traceless - p * np.eye(p * p)).max() < 1e-12
    assert abs(np.trace(ops.full) - p ** 3) < 1e-9
    assert abs(np.trace(ops.traceless)) < 1e-9


@pytest.mark.parametrize("p", [3, 5, 7])
def test_full_spectrum_matches_reduced(p):
    ops = bell_operator(p)
    full_max = lambda_max(ops.full)
    assert abs(full_max - TABLE1[p][2]) < 1e-3
    assert abs(full_max - p * lambda_max(s_operator(p))) < 1e-7
    assert abs(full_max - (lambda_max(ops.traceless) + p)) < 1e-9


@pytest.mark.slow
@pytest.mark.parametrize("p", [11, 13])
def test_full_spectrum_matches_reduced_large(p):
    assert abs(lambda_max(bell_operator(p).full) - p * lambda_max(s_operator(p))) < 1e-7


def test_bell_operator_budget(monkeypatch):
    monkeypatch.setattr("app.config.FULL_BELL_MAX_P", 5)
    with pytest.raises(BudgetExceeded):
        bell_operator(7)


def test_qutrit_s_decomposition():
    S = s_operator(3)
    assert abs(np.trace(S) - 3) < 1e-12
    assert hermitian_eigen(S).eigenvalues[0] > -1e-12
    # matrix elements from the closed form sum over bases
    p = 5
    S5 = s_operator(p)
    h = half(p)
    w = np.exp(2j * np.pi / p)
    for u in range(p):
        for v in range(p):
            expected = sum(w ** ((B * h * (u * u - v * v) + B * (B + h) * (u - v)) % p) for B in range(p)) / p
            assert abs(S5[u, v] - expected) < 1e-12


@pytest.mark.parametrize("p", [3, 5, 7])
def test_reduction_identity(p):
    result = verify_reduction(p)
    assert result
    assert result.residual <= 1e-8


def test_s_star():
    assert np.abs(s_star(5) - (s_operator(5) - np.eye(5))).max() < 1e-15


@pytest.mark.parametrize("p", sorted(TABLE1))
def test_quantum_value_table(p):
    ic, weil, qm, _ = TABLE1[p]
    report = quantum_value(p)
    assert abs(report.ic_bound - ic) < 1e-3
    assert report.weil_bound == weil
    assert abs(report.lambda_max_B - qm) < 1e-3
    assert abs(report.nu - report.lambda_max_B / p ** 2) < 1e-15
    assert report.nu <= report.ic_bound / p ** 2 + 1e-9
    if weil is not None:
        assert report.lambda_max_B <= weil


REFERENCE_FROM_OTHER_CLASS = [13, 19]


@pytest.mark.parametrize("p", [p for p in sorted(TABLE1) if p > 3])
def test_reference_value_belongs_to_a_class(p):
    _, _, computed, reference = TABLE1[p]
    report = quantum_value(p)
    assert abs(report.class_values[report.measured_class] - report.lambda_max_B) < 1e-9 * computed
    assert min(abs(v - reference) for v in report.class_values.values()) < 1e-3
    assert report.best_class_value == max(report.class_values.values())
    if p in REFERENCE_FROM_OTHER_CLASS:
        assert abs(report.best_class_value - reference) < 1e-3
        assert report.lambda_max_B < reference - 1


def test_class_values_at_seven():
    # cubes mod 7 are 0 and +-1, so c = 0 gives 1 + 6 cos(2 pi a / 7)
    values = class_values(7)
    assert len(values) == 3
    assert abs(max(values.values()) - (1 + 6 * math.cos(2 * math.pi / 7)) ** 2) < 1e-6
    report = quantum_value(7)
    assert abs(report.lambda_max_B - (1 + 6 * math.cos(6 * math.pi / 7)) ** 2) < 1e-9
    assert report.best_class_value > report.lambda_max_B + 3


def test_class_values_single_class():
    for p in [5, 11, 17]:
        values = class_values(p)
        assert list(values) == [1]
        assert abs(values[1] - quantum_value(p).lambda_max_B) < 1e-8
    assert class_values(3) == {}
    report = quantum_value(3)
    assert report.measured_class is None and report.best_class_value is None


def test_bounds_direct():
    assert abs(ic_bound(11) - 44.1662) < 1e-3
    assert weil_bound(3) is None
    assert weil_bound(29) == 116


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_lambda_max_from_magic_overlap(p):
    _, overlap = best_cycler_overlap(p)
    assert abs(lambda_max(s_operator(p)) - overlap) < 1e-9


def test_qutrit_jamiolkowski_expectation():
    J = jamiolkowski(magic_params(1, 1, 0, 3))
    value = expectation(J, bell_operator(3).full)
    assert abs(value - 6.4115) < 1e-4
    assert abs(value - (3 + 2 * math.cos(4 * math.pi / 9) + 4 * math.cos(2 * math.pi / 9))) < 1e-9


def test_maximizing_jamiolkowski_state():
    p = 5
    c_star, _ = best_cycler_overlap(p)
    a, b = (-1 * pow(12, -1, p)) % p, (-1 * pow(8, -1, p)) % p
    J = jamiolkowski(magic_params(a, b, c_star, p))
    assert abs(expectation(J, bell_operator(p).full) - TABLE1[p][2]) < 1e-3


def test_qubit_anchor():
    report = qubit_chsh()
    assert abs(report.lambda_max - 2 * math.sqrt(2)) < 1e-10
    assert abs(report.nu - 0.85355) < 1e-5
    assert abs(report.nu - breidbart_probability()) < 1e-12
    assert report.lhv_value == 2 and report.lhv_wins == 3
    assert abs(expectation(report.optimal_state, report.operator) - 2 * math.sqrt(2)) < 1e-10

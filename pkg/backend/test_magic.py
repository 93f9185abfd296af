import numpy as np
import pytest

from app.errors import InvalidMagicParams, UnsupportedDimension
from app.field import fp
from app.magic import (
    canonical_phase,
    displacement_for_params,
    jamiolkowski,
    magic_clifford,
    magic_gate,
    magic_params,
    magic_state,
    params_from_displacement,
)
from app.weyl import D, plus_state

GAMMA = np.exp(2j * np.pi / 8)


def _f(a, b, c, p):
    return magic_state(magic_params(a, b, c, p))


def test_qubit_breidbart_state():
    assert np.abs(_f(1, 0, 0, 2) - np.array([1, GAMMA]) / np.sqrt(2)).max() < 1e-15
    assert np.abs(magic_gate(magic_params(1, 0, 0, 2)) - np.diag([1, GAMMA])).max() < 1e-15


def test_qutrit_uses_ninth_roots():
    xi = np.exp(2j * np.pi / 9)
    expected = np.array([1, xi ** (2 + 6 + 0), xi ** (1 + 6 + 0)]) / np.sqrt(3)
    assert np.abs(_f(1, 1, 0, 3) - expected).max() < 1e-12


def test_cubic_amplitudes():
    w = np.exp(2j * np.pi / 5)
    k = np.arange(5)
    assert np.abs(_f(1, 0, 0, 5) - w ** (k ** 3) / np.sqrt(5)).max() < 1e-12


def test_zero_a_rejected():
    with pytest.raises(InvalidMagicParams):
        magic_params(0, 1, 1, 7)
    with pytest.raises(InvalidMagicParams):
        magic_params(7, 0, 0, 7)


def test_overlap_pattern():
    p = 7
    assert abs(np.vdot(_f(1, 2, 3, p), _f(1, 2, 4, p))) < 1e-12
    assert abs(abs(np.vdot(_f(1, 2, 3, p), _f(1, 3, 3, p))) - 1 / np.sqrt(p)) < 1e-12


@pytest.mark.parametrize("p", [5, 7])
def test_fixed_a_family_forms_unbiased_bases(p):
    for a in range(1, p):
        bases = [np.column_stack([_f(a, b, c, p) for c in range(p)]) for b in range(p)]
        for i, U in enumerate(bases):
            assert np.abs(U.conj().T @ U - np.eye(p)).max() < 1e-10
            for U2 in bases[i + 1:]:
                assert np.abs(np.abs(U.conj().T @ U2) ** 2 - 1 / p).max() < 1e-10
            assert np.abs(np.abs(U) ** 2 - 1 / p).max() < 1e-10


def test_gate_maps_plus_to_state():
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b, c = int(rng.integers(1, 7)), int(rng.integers(7)), int(rng.integers(7))
        params = magic_params(a, b, c, 7)
        M = magic_gate(params)
        assert np.abs(M @ plus_state(7) - magic_state(params)).max() < 1e-12
        assert np.abs(np.abs(np.diag(M)) - 1).max() < 1e-12
        assert np.abs(M - np.diag(np.diag(M))).max() == 0


def test_jamiolkowski_structure():
    p = 5
    params = magic_params(2, 1, 3, p)
    J = jamiolkowski(params).reshape(p, p)
    assert np.abs(np.diag(J) - magic_state(params)).max() < 1e-15
    assert np.abs(J - np.diag(np.diag(J))).max() == 0
    reduced = J @ J.conj().T
    assert np.abs(reduced - np.eye(p) / p).max() < 1e-12
    assert np.linalg.matrix_rank(J) == p


def test_magic_clifford_fixes_state():
    params = magic_params(1, 0, 0, 5)
    C = magic_clifford(params)
    f = magic_state(params)
    assert np.abs(C @ f - f).max() < 1e-10
    assert np.abs(C.conj().T @ C - np.eye(5)).max() < 1e-10


def test_params_from_displacement_examples():
    p = 7
    zero = fp(0, p)
    assert params_from_displacement(fp(3, p), zero, zero) == (zero, zero)

    x, z = displacement_for_params(fp(1, 5), fp(3, 5), fp(0, 5))
    assert (x, z) == (4, 2)


def test_displacement_round_trip():
    p = 7
    rng = np.random.default_rng(1)
    for _ in range(10):
        a = fp(int(rng.integers(1, p)), p)
        b, c = fp(int(rng.integers(p)), p), fp(int(rng.integers(p)), p)
        x, z = displacement_for_params(a, b, c)
        assert params_from_displacement(a, x, z) == (b, c)
        moved = D(x.value, z.value, p) @ _f(a.value, 0, 0, p)
        assert abs(abs(np.vdot(moved, _f(a.value, b.value, c.value, p))) - 1) < 1e-10


def test_params_from_displacement_small_p():
    with pytest.raises(UnsupportedDimension):
        params_from_displacement(fp(1, 3), fp(1, 3), fp(0, 3))


def test_canonical_phase():
    v = np.exp(1.3j) * _f(2, 1, 1, 5)
    out = canonical_phase(v)
    assert abs(out[0].imag) < 1e-15 and out[0].real > 0
    assert abs(abs(np.vdot(out, v)) - 1) < 1e-12

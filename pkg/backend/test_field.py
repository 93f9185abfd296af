import pytest
from pydantic import ValidationError

from app.errors import InversionOfZero, ModulusMismatch, UnsupportedDimension
from app.field import cube_class_of, cubic_residue_classes, eval_cubic, fp, frac, inv, is_prime


def test_inverse_examples():
    assert inv(fp(2, 5)) == 3
    assert inv(fp(12, 7)) == 3
    for p in [3, 5, 7, 11]:
        assert inv(fp(1, p)) == 1


def test_inverse_of_zero():
    with pytest.raises(InversionOfZero):
        inv(fp(0, 7))
    with pytest.raises(ZeroDivisionError):
        fp(3, 7) / fp(0, 7)


def test_inverse_involution():
    for p in [3, 5, 7, 11, 13, 29, 31]:
        for v in range(1, p):
            x = fp(v, p)
            assert x * inv(x) == 1
            assert inv(inv(x)) == x


def test_negative_literals_are_reduced():
    assert fp(-1, 7).value == 6
    assert frac(-1, 12, 5) == fp(-1, 5) * inv(fp(12, 5))
    assert (frac(-1, 12, 7) * 12) == -1


def test_nonprime_modulus_rejected():
    with pytest.raises(ValidationError):
        fp(1, 9)
    assert not is_prime(1)
    assert is_prime(2) and is_prime(997)


def test_mixed_moduli():
    with pytest.raises(ModulusMismatch):
        fp(1, 5) + fp(1, 7)
    with pytest.raises(ModulusMismatch):
        eval_cubic(fp(1, 5), fp(0, 5), fp(0, 7), fp(1, 5))


def test_eval_cubic_examples():
    assert eval_cubic(fp(1, 5), fp(0, 5), fp(0, 5), fp(2, 5)) == 3
    assert eval_cubic(fp(0, 7), fp(0, 7), fp(0, 7), fp(4, 7)) == 0
    assert eval_cubic(fp(1, 7), fp(1, 7), fp(1, 7), fp(3, 7)) == 4


def test_eval_cubic_matches_repeated_addition():
    for p in [5, 7, 11, 31]:
        for k in range(p):
            a, b, c = 2, p - 1, 3
            expected = 0
            for _ in range(a * k ** 3 + b * k ** 2 + c * k):
                expected = (expected + 1) % p
            assert eval_cubic(fp(a, p), fp(b, p), fp(c, p), fp(k, p)) == expected


def test_cubic_residue_classes():
    assert cubic_residue_classes(7) == [(1, 6), (2, 5), (3, 4)]
    assert cubic_residue_classes(5) == [(1, 2, 3, 4)]
    assert cubic_residue_classes(13) == [(1, 5, 8, 12), (2, 3, 10, 11), (4, 6, 7, 9)]


@pytest.mark.parametrize("p", [7, 13, 19, 31])
def test_cubic_classes_partition_and_closure(p):
    classes = cubic_residue_classes(p)
    flat = sorted(v for cls in classes for v in cls)
    assert flat == list(range(1, p))
    residues = set(classes[0])
    for cls in classes:
        assert len(cls) == (p - 1) // 3
        for r in residues:
            assert {(r * v) % p for v in cls} == set(cls)


def test_cubic_classes_small_p():
    with pytest.raises(UnsupportedDimension):
        cubic_residue_classes(3)


def test_cube_class_of():
    assert cube_class_of(6, 7) == 0
    assert cube_class_of(5, 7) == 1
    assert cube_class_of(4, 13) == 2

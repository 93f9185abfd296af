# backend/app/field.py

from __future__ import annotations

from functools import lru_cache
from typing import List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import InversionOfZero, ModulusMismatch, UnsupportedDimension


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Trial division; the package only ever deals with small primes."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def xgcd(x: int, y: int) -> Tuple[int, int, int]:
    """Extended Euclid: returns (s, t, g) with s*x + t*y = g."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1

    while r != 0:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
        old_t, t = t, old_t - quotient * t

    return old_s, old_t, old_r


# ---------------------------------------------------------
#  FpElement
# ---------------------------------------------------------

class FpElement(BaseModel):
    """
    Residue modulo a prime. Negative or unreduced literals are accepted
    and normalized, so FpElement(value=-1, modulus=7) is 6.
    """
    model_config = ConfigDict(frozen=True)

    value: int = Field(..., description="Fully reduced residue, 0 <= value < modulus")
    modulus: int = Field(..., description="Prime modulus p")

    @model_validator(mode="before")
    @classmethod
    def reduce_value(cls, data):
        if isinstance(data, dict) and "value" in data and "modulus" in data:
            modulus = int(data["modulus"])
            if modulus > 0:
                data = {**data, "value": int(data["value"]) % modulus}
        return data

    @field_validator("modulus")
    @classmethod
    def modulus_must_be_prime(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"modulus {v} is not prime")
        return v

    # ---- coercion ----

    def _coerce(self, other: Union["FpElement", int]) -> "FpElement":
        if isinstance(other, FpElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    "operands live in different fields",
                    {"left": self.modulus, "right": other.modulus},
                )
            return other
        if isinstance(other, int):
            return FpElement(value=other, modulus=self.modulus)
        return NotImplemented

    def _new(self, value: int) -> "FpElement":
        return FpElement(value=value, modulus=self.modulus)

    # ---- arithmetic ----

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.value - other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(other.value - self.value)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.value * other.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * inv(other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * inv(self)

    def __neg__(self) -> "FpElement":
        return self._new(-self.value)

    def __pow__(self, exponent: int) -> "FpElement":
        if exponent < 0:
            return inv(self) ** (-exponent)
        return self._new(pow(self.value, exponent, self.modulus))

    def __eq__(self, other) -> bool:
        if isinstance(other, FpElement):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"

    def is_zero(self) -> bool:
        return self.value == 0


def fp(value: int, p: int) -> FpElement:
    return FpElement(value=value, modulus=p)


def frac(num: int, den: int, p: int) -> FpElement:
    """The field element num * den^{-1}, e.g. frac(-1, 12, p) for -1/12."""
    return fp(num, p) / fp(den, p)


# ---------------------------------------------------------
#  Operations
# ---------------------------------------------------------

def inv(x: FpElement) -> FpElement:
    if x.value == 0:
        raise InversionOfZero("zero has no multiplicative inverse", {"p": x.modulus})
    s, _, _ = xgcd(x.value, x.modulus)
    return FpElement(value=s, modulus=x.modulus)


def eval_cubic(a: FpElement, b: FpElement, c: FpElement, k: FpElement) -> FpElement:
    """a*k^3 + b*k^2 + c*k in Z_p (the magic-state exponent)."""
    moduli = {a.modulus, b.modulus, c.modulus, k.modulus}
    if len(moduli) != 1:
        raise ModulusMismatch("eval_cubic operands must share a modulus", {"moduli": sorted(moduli)})
    return a * k ** 3 + b * k ** 2 + c * k


def cubic_residue_classes(p: int) -> List[Tuple[int, ...]]:
    """
    Partition of Z_p^* into cubic residues and their cosets.
    One class when p = 2 mod 3 (cubing is a bijection), three otherwise.
    """
    if p <= 3 or not is_prime(p):
        raise UnsupportedDimension("cubic residue classes need a prime p > 3", {"p": p})

    if p % 3 == 2:
        return [tuple(range(1, p))]

    residues = sorted({pow(k, 3, p) for k in range(1, p)})
    non_residue = next(g for g in range(2, p) if g not in residues)
    return [
        tuple(sorted((pow(non_residue, e, p) * r) % p for r in residues))
        for e in range(3)
    ]


def cube_class_of(a: int, p: int) -> int:
    """Index of the cubic-residue class containing a."""
    a %= p
    for idx, cls in enumerate(cubic_residue_classes(p)):
        if a in cls:
            return idx
    raise InversionOfZero("0 belongs to no cubic-residue class", {"p": p})


def half(p: int) -> int:
    """2^{-1} mod p as a plain int (used all over the phase formulas)."""
    return inv(fp(2, p)).value


def inverse_int(x: int, p: int) -> int:
    return inv(fp(x, p)).value

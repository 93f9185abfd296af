# backend/app/models.py

from __future__ import annotations

import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .field import is_prime


class ArrayModel(BaseModel):
    """Immutable result holder that may carry numpy arrays."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def _reduce(data: Any, keys: Tuple[str, ...]) -> Any:
    if isinstance(data, dict) and "p" in data:
        p = int(data["p"])
        if p > 0:
            data = {**data}
            for key in keys:
                if key in data and data[key] is not None:
                    data[key] = int(data[key]) % p
    return data


# -------------------------------------------------
#  linalg
# -------------------------------------------------

class EigenResult(ArrayModel):
    """Ascending real spectrum with eigenvectors as columns."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0


# -------------------------------------------------
#  weyl
# -------------------------------------------------

class PauliIndex(BaseModel):
    """
    Symplectic index (x_1..x_n | z_1..z_n) of a Weyl-Heisenberg operator
    on n qudits of prime dimension p.
    """
    model_config = ConfigDict(frozen=True)

    xs: Tuple[int, ...]
    zs: Tuple[int, ...]
    p: int

    @model_validator(mode="before")
    @classmethod
    def reduce_components(cls, data):
        if isinstance(data, dict) and "p" in data:
            p = int(data["p"])
            data = {
                **data,
                "xs": tuple(int(x) % p for x in data.get("xs", ())),
                "zs": tuple(int(z) % p for z in data.get("zs", ())),
            }
        return data

    @model_validator(mode="after")
    def same_length(self):
        if len(self.xs) != len(self.zs) or not self.xs:
            raise ValueError("x and z parts must be non-empty and of equal length")
        return self

    @classmethod
    def single(cls, x: int, z: int, p: int) -> "PauliIndex":
        return cls(xs=(x,), zs=(z,), p=p)


class MubVectorRef(BaseModel):
    """
    The V-th vector of MUB `basis`. basis=None is the computational
    (infinity) basis; a finite basis B is the eigenbasis of D_(1|B).
    """
    model_config = ConfigDict(frozen=True)

    basis: Optional[int] = Field(None, description="B in Z_p, or None for the infinity basis")
    vector: int = Field(..., description="V in Z_p")

    @property
    def is_computational(self) -> bool:
        return self.basis is None


# -------------------------------------------------
#  magic
# -------------------------------------------------

class MagicParams(BaseModel):
    """(a, b, c) indexing |f_{a,b,c}> with a in Z_p^*, b, c in Z_p."""
    model_config = ConfigDict(frozen=True)

    a: int
    b: int = 0
    c: int = 0
    p: int

    @model_validator(mode="before")
    @classmethod
    def reduce_params(cls, data):
        return _reduce(data, ("a", "b", "c"))

    @field_validator("p")
    @classmethod
    def p_must_be_prime(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"dimension {v} is not prime")
        return v

    @model_validator(mode="after")
    def a_must_be_nonzero(self):
        if self.a == 0:
            raise ValueError("a must be a nonzero residue")
        return self


# -------------------------------------------------
#  bell
# -------------------------------------------------

class BellOperators(ArrayModel):
    full: np.ndarray = Field(..., description="B, p^2 x p^2")
    traceless: np.ndarray = Field(..., description="B* = B - p I")
    p: int


class ReductionCheck(BaseModel):
    """Outcome of comparing C^dagger B* C with p S* (x) |0><0|. Truthy on success."""
    model_config = ConfigDict(frozen=True)

    p: int
    passed: bool
    residual: float

    def __bool__(self) -> bool:
        return self.passed


class GameValueReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    lambda_max_B: float
    nu: float
    ic_bound: float
    weil_bound: Optional[float] = None
    class_values: Dict[int, float] = Field(default_factory=dict, description="cubic-residue class representative -> max_c cubic sum |.|^2")
    measured_class: Optional[int] = Field(None, description="representative of the class holding -1/12")
    best_class_value: Optional[float] = None
    lhv_value: Optional[int] = None
    lhv_exact: bool = False
    pauli_restricted: bool = True
    note: str = ""


class QubitChshReport(ArrayModel):
    operator: np.ndarray
    lambda_max: float
    optimal_state: np.ndarray
    nu: float
    lhv_value: int = 2
    lhv_wins: int = 3
    breidbart_probability: float


# -------------------------------------------------
#  lhv
# -------------------------------------------------

class LhvStrategy(BaseModel):
    """Deterministic assignments a_x (Alice) and b_y (Bob)."""
    model_config = ConfigDict(frozen=True)

    alice: Tuple[int, ...]
    bob: Tuple[int, ...]
    p: int

    @model_validator(mode="before")
    @classmethod
    def reduce_entries(cls, data):
        if isinstance(data, dict) and "p" in data:
            p = int(data["p"])
            data = {
                **data,
                "alice": tuple(int(v) % p for v in data.get("alice", ())),
                "bob": tuple(int(v) % p for v in data.get("bob", ())),
            }
        return data

    @model_validator(mode="after")
    def lengths_match_p(self):
        if len(self.alice) != self.p or len(self.bob) != self.p:
            raise ValueError("assignment vectors must have length p")
        return self


class LhvResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: int
    strategy: LhvStrategy
    exact: bool
    restarts_used: int = 0


# -------------------------------------------------
#  entropy
# -------------------------------------------------

class MubTable(ArrayModel):
    """
    probabilities[V, 0] is the computational (infinity) basis,
    probabilities[V, 1 + B] is finite basis B.
    """
    p: int
    probabilities: np.ndarray

    def column(self, basis: Optional[int]) -> np.ndarray:
        if basis is None:
            return self.probabilities[:, 0]
        return self.probabilities[:, 1 + basis % self.p]

    def purity_sum(self) -> float:
        return float(np.sum(self.probabilities ** 2))


class EquatorialPhases(BaseModel):
    """phi_1..phi_{p-1} in radians; phi_0 = 0 is implicit."""
    model_config = ConfigDict(frozen=True)

    phases: Tuple[float, ...]

    @field_validator("phases")
    @classmethod
    def canonical(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        out = []
        for phi in v:
            if not math.isfinite(phi):
                raise ValueError("phases must be finite")
            out.append(float(phi) % (2 * math.pi))
        return tuple(out)

    @property
    def p(self) -> int:
        return len(self.phases) + 1


class EntropyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    bases: Tuple[Optional[int], ...]
    collision: Tuple[float, ...]
    min_entropy: Tuple[float, ...]
    collision_total: float
    min_total: float
    bounds: Dict[str, float] = Field(default_factory=dict)
    log_base: int = 2


class MinEntropyResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    phases: EquatorialPhases
    value: float
    magic_value: float
    is_magic: bool
    restarts_used: int


# -------------------------------------------------
#  balance
# -------------------------------------------------

class BalancePermutation(BaseModel):
    """V_B = V_0 + offsets[B] carries the basis-0 probabilities to basis B."""
    model_config = ConfigDict(frozen=True)

    p: int
    a: int
    b: int
    c: int
    offsets: Tuple[int, ...] = Field(
        default=(),
        description="empty when p = 3, where only the multiset equality is checked",
    )
    max_residual: float = 0.0

    @property
    def formula_applies(self) -> bool:
        return bool(self.offsets)


class OrbitStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: int
    basis: int
    vector: int
    overlap: float


class CyclerOrbit(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    params: MagicParams
    steps: List[OrbitStep]

    @property
    def basis_sequence(self) -> Tuple[int, ...]:
        return tuple(s.basis for s in self.steps)


class SatoTateSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    a: int
    c: int
    theta: float

    @field_validator("theta")
    @classmethod
    def within_unit_interval(cls, v: float) -> float:
        if not -1.0 - 1e-12 <= v <= 1.0 + 1e-12:
            raise ValueError(f"theta {v} outside [-1, 1]")
        return v


class SatoTateSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    count: int
    theta_min: float
    theta_max: float
    histogram: List[int]
    bin_edges: List[float]
    max_abs_sum: float = Field(..., description="max over samples of 2*sqrt(p)*|theta|")
    weil_limit: float = Field(..., description="2*sqrt(p)")
    max_imag_residue: float
    ks_statistic: Optional[float] = Field(None, description="KS distance to the semicircle; None below the comparison threshold")
    ks_passed: Optional[bool] = None


# -------------------------------------------------
#  wigner
# -------------------------------------------------

class WignerFunction(ArrayModel):
    """values[x, z] is W at phase-space point (x|z)."""
    p: int
    values: np.ndarray


# -------------------------------------------------
#  verification
# -------------------------------------------------

class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    p: int
    passed: bool
    detail: str = ""

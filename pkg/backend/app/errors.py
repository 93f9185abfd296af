# backend/app/errors.py

from __future__ import annotations

from typing import Any, Dict, Optional


class QuditError(Exception):
    """
    Base error. `code` is module-qualified (e.g. "field.inversion_of_zero")
    so the CLI can report where a failure came from.
    """
    code = "qudit.error"

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        code: Optional[str] = None,
    ):
        super().__init__(message)
        self.details: Dict[str, Any] = details or {}
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        base = super().__str__()
        if not self.details:
            return f"[{self.code}] {base}"
        extra = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"[{self.code}] {base} ({extra})"


# ---------------------------------------------------------
#  field
# ---------------------------------------------------------

class InversionOfZero(QuditError, ZeroDivisionError):
    code = "field.inversion_of_zero"


class ModulusMismatch(QuditError, ValueError):
    code = "field.modulus_mismatch"


class UnsupportedDimension(QuditError, ValueError):
    code = "field.unsupported_dimension"


# ---------------------------------------------------------
#  linalg
# ---------------------------------------------------------

class NotHermitian(QuditError, ValueError):
    code = "linalg.not_hermitian"


class DimensionMismatch(QuditError, ValueError):
    code = "linalg.dimension_mismatch"


class ConvergenceError(QuditError, ArithmeticError):
    code = "linalg.no_convergence"


# ---------------------------------------------------------
#  magic / entropy / lhv / balance
# ---------------------------------------------------------

class InvalidMagicParams(QuditError, ValueError):
    code = "magic.invalid_params"


class NotNormalized(QuditError, ValueError):
    code = "entropy.not_normalized"


class BudgetExceeded(QuditError, ValueError):
    code = "lhv.budget_exceeded"


class TheoremViolation(QuditError, AssertionError):
    code = "balance.theorem_violation"

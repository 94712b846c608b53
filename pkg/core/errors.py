"""
Error hierarchy shared by the compute kernels and the CLI.
"""
from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple


class ErrorCode(Enum):
    OK = 0
    VIOLATION = 1
    SCHEMA = 2
    BUDGET = 3


class SecmacError(Exception):
    code: ErrorCode = ErrorCode.VIOLATION


class NumericalDomainError(SecmacError, ValueError):
    """An argument lies outside the domain of a bound or scalar function."""
    code = ErrorCode.SCHEMA


class DimensionMismatchError(SecmacError, ValueError):
    code = ErrorCode.SCHEMA


class OverlappingVariablesError(SecmacError, ValueError):
    code = ErrorCode.SCHEMA


class InfeasibleProblemError(SecmacError, ValueError):
    code = ErrorCode.VIOLATION


class ProbabilityTableError(SecmacError, ValueError):
    code = ErrorCode.SCHEMA

    def __init__(self, table: str, row: Optional[Tuple[int, ...]], message: str):
        self.table = table
        self.row = row
        where = f"{table} row {row}" if row is not None else table
        super().__init__(f"{where}: {message}")


class LatticeBudgetExceeded(SecmacError):
    code = ErrorCode.BUDGET

    def __init__(self, lattice_size: int, budget: int):
        self.lattice_size = lattice_size
        self.budget = budget
        super().__init__(
            f"lattice of {lattice_size} cells exceeds the evaluation budget of {budget}"
        )


@dataclass
class ErrorReport:
    code: ErrorCode
    message: str
    details: str = ""


def classify(exc: BaseException) -> ErrorReport:
    if isinstance(exc, SecmacError):
        return ErrorReport(code=exc.code, message=str(exc), details=type(exc).__name__)
    return ErrorReport(code=ErrorCode.VIOLATION, message=str(exc), details=type(exc).__name__)

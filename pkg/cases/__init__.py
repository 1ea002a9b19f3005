from cases.compatibility import CompatibilityReport, validate_compatibility
from cases.manufactured import ManufacturedCase, check_case, derive_case
from cases.benchmarks import case1, case2

__all__ = [
    "CompatibilityReport",
    "ManufacturedCase",
    "case1",
    "case2",
    "check_case",
    "derive_case",
    "validate_compatibility",
]

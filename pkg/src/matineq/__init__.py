"""Spectral tools for testing matrix inequalities of Ando type.

Spectral calculus on real symmetric matrices, (weak, strong and unsorted)
majorisation, the first-order perturbation vector ``delta(C; A)``, checkers
for the Ando / Ando-Zhan family of norm inequalities and a seeded fuzzer.
"""
__version__ = "0.1.0"

from .delta import DeltaVector, check_prop4b, corollary_checks, delta, delta_fd_oracle
from .fuzz import FuzzConfig, Violation, fuzz, shrink
from .inequalities import CheckResult, InequalityId, check
from .majorization import (
    MajReport,
    dominated_weak_majorize,
    ky_fan_norm,
    operator_norm,
    strong_majorize,
    weak_majorize,
)
from .scalar import AngleSum, Named, classify, evaluate, parse_fn
from .spectral import (
    EigenSystem,
    SymMatrix,
    abs_matrix,
    apply_fn,
    eigh,
    ge,
    is_psd,
    positive_part,
    random_psd,
    random_sym,
)

__all__ = [
    "AngleSum", "CheckResult", "DeltaVector", "EigenSystem", "FuzzConfig", "InequalityId",
    "MajReport", "Named", "SymMatrix", "Violation", "abs_matrix", "apply_fn", "check",
    "check_prop4b", "classify", "corollary_checks", "delta", "delta_fd_oracle",
    "dominated_weak_majorize", "eigh", "evaluate", "fuzz", "ge", "is_psd", "ky_fan_norm",
    "operator_norm", "parse_fn", "positive_part", "random_psd", "random_sym", "shrink",
    "strong_majorize", "weak_majorize",
]

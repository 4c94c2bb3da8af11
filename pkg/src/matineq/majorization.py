"""Majorisation relations between real vectors and Ky Fan norms.

Every relation is reported as a :class:`MajReport`: the running sums of
both sides, the worst (smallest) ``rhs - lhs`` gap and where it occurs.
A relation ``x < y`` holds when every gap is ``>= -tol``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import as_sym

DEFAULT_REL_TOL = 1e-9

RELATIONS = ("weak_majorize", "dominated_weak", "strong_majorize", "entrywise_ge")


@dataclass(frozen=True)
class MajReport:
    """Outcome of comparing ``lhs`` against ``rhs``.

    For ``entrywise_ge`` the "partial sums" are the sorted entries
    themselves; ``worst_k`` is 1-based.
    """

    relation: str
    lhs_partial_sums: np.ndarray
    rhs_partial_sums: np.ndarray
    holds: bool
    worst_margin: float
    worst_k: int
    tol: float

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "lhs_partial_sums": [float(v) for v in self.lhs_partial_sums],
            "rhs_partial_sums": [float(v) for v in self.rhs_partial_sums],
            "holds": self.holds,
            "worst_margin": self.worst_margin,
            "worst_k": self.worst_k,
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "MajReport":
        return cls(
            relation=obj["relation"],
            lhs_partial_sums=np.asarray(obj["lhs_partial_sums"], dtype=float),
            rhs_partial_sums=np.asarray(obj["rhs_partial_sums"], dtype=float),
            holds=bool(obj["holds"]),
            worst_margin=float(obj["worst_margin"]),
            worst_k=int(obj["worst_k"]),
            tol=float(obj.get("tol", 0.0)),
        )


def default_tol(lhs: np.ndarray, rhs: np.ndarray, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Scale-aware cushion ``rel_tol * (1 + max |partial sum|)``."""
    scale = max(float(np.max(np.abs(lhs), initial=0.0)), float(np.max(np.abs(rhs), initial=0.0)))
    return rel_tol * (1.0 + scale)


def _vectors(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size == 0:
        raise ValueError("cannot compare empty vectors")
    return x, y


def _report(relation, lhs, rhs, tol, rel_tol, extra_gap=None) -> MajReport:
    if tol is None:
        tol = default_tol(lhs, rhs, rel_tol)
    gaps = rhs - lhs
    if extra_gap is not None:
        gaps = np.append(gaps, extra_gap)
    k = int(np.argmin(gaps))
    margin = float(gaps[k])
    return MajReport(relation, lhs, rhs, margin >= -tol, margin, min(k, lhs.size - 1) + 1, float(tol))


def weak_majorize(x, y, tol: float | None = None, rel_tol: float = DEFAULT_REL_TOL) -> MajReport:
    """``x <_w y``: prefix sums of ``x`` sorted decreasingly never exceed those of ``y``."""
    x, y = _vectors(x, y)
    lhs = np.cumsum(np.sort(x)[::-1])
    rhs = np.cumsum(np.sort(y)[::-1])
    return _report("weak_majorize", lhs, rhs, tol, rel_tol)


def dominated_weak_majorize(x, y, tol: float | None = None,
                            rel_tol: float = DEFAULT_REL_TOL) -> MajReport:
    """``x <_dw y``: the same prefix-sum test but with the given order, no sorting."""
    x, y = _vectors(x, y)
    return _report("dominated_weak", np.cumsum(x), np.cumsum(y), tol, rel_tol)


def strong_majorize(x, y, tol: float | None = None, rel_tol: float = DEFAULT_REL_TOL) -> MajReport:
    """``x < y``: weak majorisation plus equal totals.

    A total mismatch enters as an extra gap ``-|sum x - sum y|`` reported at
    ``k = n``.
    """
    x, y = _vectors(x, y)
    lhs = np.cumsum(np.sort(x)[::-1])
    rhs = np.cumsum(np.sort(y)[::-1])
    return _report("strong_majorize", lhs, rhs, tol, rel_tol,
                   extra_gap=-abs(float(lhs[-1] - rhs[-1])))


def entrywise_ge(lower, upper, tol: float | None = None,
                 rel_tol: float = DEFAULT_REL_TOL) -> MajReport:
    """``upper >= lower`` entry by entry (both taken as given, usually already sorted)."""
    lhs, rhs = _vectors(lower, upper)
    return _report("entrywise_ge", lhs, rhs, tol, rel_tol)


def singular_values(A) -> np.ndarray:
    """Singular values, non-increasing; for symmetric ``A`` these are ``|eigenvalues|``."""
    return np.sort(np.abs(as_sym(A).eigenvalues))[::-1]


def ky_fan_norm(A, k: int) -> float:
    A = as_sym(A)
    if not 1 <= k <= A.dim:
        raise ValueError(f"k must lie in [1, {A.dim}], got {k}")
    return float(np.sum(singular_values(A)[:k]))


def operator_norm(A) -> float:
    return ky_fan_norm(A, 1)

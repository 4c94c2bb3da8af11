"""The first-order perturbation vector ``delta(C; A)``.

Its prefix sums are the one-sided derivatives at ``t = 0+`` of the prefix
sums of ``lambda_desc(A + tC)``. Concretely, ``delta(C; A)`` is the diagonal of
``C`` in an eigenbasis of ``A`` ordered by decreasing eigenvalue, where inside
every eigenspace of ``A`` the basis is chosen to diagonalise the compression
of ``C`` with its eigenvalues in decreasing order.

Because the entry order is tied to the spectrum of ``A``, the natural
comparison between two such vectors is the unsorted prefix-sum relation
(:func:`~matineq.majorization.dominated_weak_majorize`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .majorization import (
    DEFAULT_REL_TOL,
    MajReport,
    dominated_weak_majorize,
    strong_majorize,
    weak_majorize,
)
from .scalar import PiecewiseFn, classify, evaluate_spectrum, format_fn
from .spectral import SymMatrix, _check_same_dim, apply_fn, as_sym, jacobi_eigh


@dataclass(frozen=True)
class DeltaVector:
    values: np.ndarray
    clusters: tuple[tuple[float, int], ...]
    basis_used: np.ndarray
    trace_C: float = float("nan")

    @property
    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.values)

    def to_dict(self) -> dict:
        return {
            "values": [float(v) for v in self.values],
            "partial_sums": [float(v) for v in self.partial_sums],
            "clusters": [{"eigenvalue": ev, "multiplicity": m} for ev, m in self.clusters],
            "trace_check": {
                "sum_values": float(np.sum(self.values)),
                "trace_C": self.trace_C,
                "difference": float(np.sum(self.values) - self.trace_C),
            },
            "basis_used": {"dim": len(self.values), "rows": self.basis_used.tolist()},
        }


def default_cluster_tol(A: SymMatrix) -> float:
    return 1e-8 * (1.0 + A.norm())


def eigen_clusters(eigenvalues: np.ndarray, cluster_tol: float) -> list[tuple[int, int]]:
    """Split a non-increasing spectrum into ``[start, stop)`` runs whose
    consecutive gaps are all ``<= cluster_tol``."""
    bounds = [0]
    for j in range(1, len(eigenvalues)):
        if eigenvalues[j - 1] - eigenvalues[j] > cluster_tol:
            bounds.append(j)
    bounds.append(len(eigenvalues))
    return list(zip(bounds[:-1], bounds[1:]))


def delta(C, A, cluster_tol: float | None = None) -> DeltaVector:
    """Compute ``delta(C; A)``.

    Parameters
    ----------
    C, A : SymMatrix or array-like
        Same dimension. ``A`` fixes the basis, ``C`` is the direction.
    cluster_tol : float, optional
        Eigenvalues of ``A`` whose consecutive gap is at most this are treated
        as one eigenspace. Defaults to ``1e-8 * (1 + ||A||)``.

    Returns
    -------
    DeltaVector
        ``values`` are in the order of the decreasing spectrum of ``A``,
        sorted decreasingly within each eigenspace.
    """
    C, A = as_sym(C), as_sym(A)
    _check_same_dim(C, A)
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(A)
    if cluster_tol < 0:
        raise ValueError("cluster_tol must be non-negative")
    es = A.eig
    U = es.basis
    values = np.empty(A.dim)
    basis = np.empty_like(U)
    clusters = []
    for start, stop in eigen_clusters(es.eigenvalues, cluster_tol):
        Q = U[:, start:stop]
        block = Q.T @ C.entries @ Q
        if stop - start == 1:
            values[start] = block[0, 0]
            basis[:, start] = Q[:, 0]
        else:
            sub = jacobi_eigh((block + block.T) / 2.0)
            values[start:stop] = sub.eigenvalues
            basis[:, start:stop] = Q @ sub.basis
        clusters.append((float(np.mean(es.eigenvalues[start:stop])), stop - start))
    return DeltaVector(values, tuple(clusters), basis, C.trace())


def default_fd_step(C, A) -> float:
    C, A = as_sym(C), as_sym(A)
    return 1e-6 * (1.0 + A.norm()) / (1.0 + C.norm())


def delta_fd_oracle(C, A, t: float | None = None) -> np.ndarray:
    """Finite-difference estimate of ``delta(C; A)`` from eigenvalues alone.

    Uses the forward quotient ``(S_k(t) - S_k(0)) / t`` of the prefix sums
    ``S_k(t) = sum_{j<=k} lambda_desc_j(A + tC)`` and returns first
    differences of those quotients, so its prefix sums are comparable with
    ``delta(C, A).partial_sums``. No eigenvectors are involved.
    """
    C, A = as_sym(C), as_sym(A)
    _check_same_dim(C, A)
    if t is None:
        t = default_fd_step(C, A)
    if not t > 0:
        raise ValueError("finite-difference step t must be positive")
    s0 = np.cumsum(A.eigenvalues)
    st = np.cumsum(jacobi_eigh(A.entries + t * C.entries).eigenvalues)
    d = (st - s0) / t
    return np.diff(d, prepend=0.0)


def min_gap(A) -> float:
    w = as_sym(A).eigenvalues
    return float(np.min(-np.diff(w))) if len(w) > 1 else float("inf")


# ---------------------------------------------------------------------------
# consequences of the construction


@dataclass
class CorollaryReport:
    """Per-item verdicts with the largest observed discrepancy."""

    items: dict[str, bool] = field(default_factory=dict)
    errors: dict[str, float] = field(default_factory=dict)
    tol: float = 0.0

    @property
    def holds(self) -> bool:
        return all(self.items.values())

    def to_dict(self) -> dict:
        return {"items": dict(self.items), "errors": dict(self.errors), "tol": self.tol,
                "holds": self.holds}


def corollary_checks(G, C, f: PiecewiseFn, a: float = 1.0,
                     rel_tol: float = DEFAULT_REL_TOL) -> CorollaryReport:
    """Check the four immediate consequences of the construction.

    (i)   ``delta(f(G); G) == f(lambda_desc(G))``
    (ii)  ``delta(C; G)`` is majorised by ``lambda_desc(C)``, totals equal
    (iii) ``delta(C; G) + a f(lambda_desc(G)) == delta(C + a f(G); G)`` (prefix sums)
    (iv)  ``delta(C; f(G)) == delta(C; G)`` (prefix sums), needs ``f`` strictly increasing

    ``f`` must be non-decreasing on the spectrum of ``G`` and ``a >= 0``;
    otherwise ``ValueError``. Item (iv) is omitted when ``f`` is not
    strictly increasing.
    """
    G, C = as_sym(G), as_sym(C)
    _check_same_dim(G, C)
    if a < 0:
        raise ValueError("a must be non-negative")
    cls = classify(f)
    fG = apply_fn(G, f)
    f_spec = evaluate_spectrum(f, G.eigenvalues, scale=1.0 + G.norm())
    scale = 1.0 + G.norm() + C.norm() + fG.norm() * (1.0 + a)
    tol = rel_tol * scale * G.dim
    if not cls.monotone_increasing or np.any(np.diff(f_spec) > tol):
        raise ValueError(f"{format_fn(f)} is not non-decreasing on the spectrum of G")

    rep = CorollaryReport(tol=tol)
    d_fG = delta(fG, G).values
    rep.errors["i"] = float(np.max(np.abs(d_fG - f_spec)))
    rep.items["i"] = rep.errors["i"] <= tol

    dCG = delta(C, G)
    schur = strong_majorize(dCG.values, C.eigenvalues, tol=tol)
    rep.errors["ii"] = max(0.0, -schur.worst_margin)
    rep.items["ii"] = schur.holds

    lhs = dCG.partial_sums + a * np.cumsum(fG.eigenvalues)
    rhs = delta(C + a * fG, G).partial_sums
    rep.errors["iii"] = float(np.max(np.abs(lhs - rhs)))
    rep.items["iii"] = rep.errors["iii"] <= tol

    if cls.strictly_increasing:
        d_iv = delta(C, fG).partial_sums
        rep.errors["iv"] = float(np.max(np.abs(d_iv - dCG.partial_sums)))
        rep.items["iv"] = rep.errors["iv"] <= tol
    return rep


@dataclass
class Prop4bReport:
    """The three equivalent conditions, with per-grid-point detail.

    ``pp1``: ``lambda(aA+B) <_w lambda(aA+C)``; ``pp2``: ``delta(B;G) <_dw delta(C;G)``;
    ``pp3``: ``delta(aA+B;G) <_dw delta(aA+C;G)``. ``pp1``/``pp3`` are only
    evaluated on the supplied grid of ``a``.
    """

    a_grid: list[float]
    pp1: list[MajReport]
    pp2: MajReport
    pp3: list[MajReport]

    @property
    def pp1_holds(self) -> bool:
        return all(r.holds for r in self.pp1)

    @property
    def pp2_holds(self) -> bool:
        return self.pp2.holds

    @property
    def pp3_holds(self) -> bool:
        return all(r.holds for r in self.pp3)

    @property
    def consistent(self) -> bool:
        return self.pp1_holds == self.pp2_holds == self.pp3_holds

    def failing_a(self, which: str = "pp1") -> list[float]:
        reps = self.pp1 if which == "pp1" else self.pp3
        return [a for a, r in zip(self.a_grid, reps) if not r.holds]

    def to_dict(self) -> dict:
        return {
            "a_grid": list(self.a_grid),
            "pp1": [r.to_dict() for r in self.pp1],
            "pp2": self.pp2.to_dict(),
            "pp3": [r.to_dict() for r in self.pp3],
            "pp1_holds": self.pp1_holds,
            "pp2_holds": self.pp2_holds,
            "pp3_holds": self.pp3_holds,
            "consistent": self.consistent,
        }


def check_prop4b(G, C, f1: PiecewiseFn, f2: PiecewiseFn,
                 a_grid: Sequence[float] = (0.0, 0.1, 1.0, 10.0, 100.0),
                 tol: float | None = None, rel_tol: float = DEFAULT_REL_TOL) -> Prop4bReport:
    """Evaluate the three equivalent conditions with ``A = f1(G)``, ``B = f2(G)``."""
    G, C = as_sym(G), as_sym(C)
    _check_same_dim(G, C)
    grid = [float(a) for a in a_grid]
    if any(a < 0 for a in grid):
        raise ValueError("a_grid must be non-negative")
    for f in (f1, f2):
        if not classify(f).monotone_increasing:
            raise ValueError(f"{format_fn(f)} is not monotone increasing")
    A, B = apply_fn(G, f1), apply_fn(G, f2)
    pp1, pp3 = [], []
    for a in grid:
        lhs, rhs = a * A + B, a * A + C
        pp1.append(weak_majorize(lhs.eigenvalues, rhs.eigenvalues, tol, rel_tol))
        pp3.append(dominated_weak_majorize(delta(lhs, G).values, delta(rhs, G).values, tol, rel_tol))
    pp2 = dominated_weak_majorize(delta(B, G).values, delta(C, G).values, tol, rel_tol)
    return Prop4bReport(grid, pp1, pp2, pp3)

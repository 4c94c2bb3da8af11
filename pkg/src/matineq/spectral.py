"""Real symmetric matrices, a cyclic Jacobi eigensolver and spectral calculus.

Everything downstream works on :class:`SymMatrix`, an immutable symmetric
matrix that lazily caches its own eigendecomposition. Eigenvalues are always
reported in non-increasing order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Iterable

import numpy as np
from numba import njit

if TYPE_CHECKING:
    from .scalar import PiecewiseFn

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
# loader rejects |M - M^T| above this (relative to 1 + max|M|)
ASYMMETRY_TOL = 1e-8


class DomainError(ValueError):
    """A scalar function was applied outside of its domain."""


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues sorted non-increasing and the matching orthonormal basis.

    Column ``j`` of ``basis`` is the eigenvector of ``eigenvalues[j]``.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.T


class SymMatrix:
    """Dense real symmetric matrix.

    The input is symmetrised as ``(M + M.T) / 2`` on construction, so an
    exactly symmetric input is stored bit-for-bit. Instances are read-only;
    arithmetic returns new instances.
    """

    __slots__ = ("_a", "_eig")

    def __init__(self, entries: Any):
        if isinstance(entries, SymMatrix):
            a = entries._a
        else:
            a = np.array(entries, dtype=float)
            if a.ndim == 0:
                a = a.reshape(1, 1)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise ValueError(f"expected a square matrix, got shape {a.shape}")
            if a.shape[0] < 1:
                raise ValueError("matrix dimension must be at least 1")
            if not np.all(np.isfinite(a)):
                raise ValueError("matrix has non-finite entries")
            a = (a + a.T) / 2.0
            a.setflags(write=False)
        self._a = a
        self._eig: EigenSystem | None = None

    # construction helpers
    @classmethod
    def identity(cls, dim: int) -> "SymMatrix":
        return cls(np.eye(dim))

    @classmethod
    def zeros(cls, dim: int) -> "SymMatrix":
        return cls(np.zeros((dim, dim)))

    @classmethod
    def diag(cls, values: Iterable[float]) -> "SymMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=float)))

    @classmethod
    def _from_eig(cls, eig: EigenSystem) -> "SymMatrix":
        out = cls(eig.reconstruct())
        out._eig = eig
        return out

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def eig(self) -> EigenSystem:
        if self._eig is None:
            self._eig = jacobi_eigh(self._a)
        return self._eig

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eig.eigenvalues

    def norm(self) -> float:
        """Operator norm, taken from the cached decomposition."""
        w = self.eig.eigenvalues
        return float(max(abs(w[0]), abs(w[-1])))

    def trace(self) -> float:
        return float(np.trace(self._a))

    def __array__(self, dtype=None, copy=None):
        return np.array(self._a, dtype=dtype)

    def __add__(self, other):
        return SymMatrix(self._a + _entries(other))

    __radd__ = __add__

    def __sub__(self, other):
        return SymMatrix(self._a - _entries(other))

    def __rsub__(self, other):
        return SymMatrix(_entries(other) - self._a)

    def __neg__(self):
        return SymMatrix(-self._a)

    def __mul__(self, c):
        if isinstance(c, SymMatrix):
            return NotImplemented
        return SymMatrix(float(c) * self._a)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        rows = np.array2string(self._a, precision=6, separator=", ")
        return f"SymMatrix({rows})"

    def to_dict(self) -> dict:
        return {"dim": self.dim, "rows": self._a.tolist()}

    @classmethod
    def from_dict(cls, obj: Any) -> "SymMatrix":
        """Parse the ``{"dim": n, "rows": [...]}`` matrix format.

        Raises ``ValueError`` on a malformed object or on asymmetry above
        ``1e-8 * (1 + max|M|)``.
        """
        if not isinstance(obj, dict) or "rows" not in obj:
            raise ValueError("matrix JSON must be an object with a 'rows' field")
        try:
            m = np.array(obj["rows"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"matrix rows are not numeric: {exc}") from None
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix rows must form a square array, got shape {m.shape}")
        if "dim" in obj and obj["dim"] != m.shape[0]:
            raise ValueError(f"declared dim {obj['dim']} does not match {m.shape[0]} rows")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix has non-finite entries")
        asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
        if asym > ASYMMETRY_TOL * (1.0 + float(np.max(np.abs(m)))):
            raise ValueError(f"matrix is not symmetric (max |M - M^T| = {asym:.3g})")
        return cls(m)


def _entries(x) -> np.ndarray:
    if isinstance(x, SymMatrix):
        return x.entries
    if np.isscalar(x):
        raise TypeError("adding a scalar to a matrix is ambiguous; use c * SymMatrix.identity(n)")
    return np.asarray(x, dtype=float)


def as_sym(x: Any) -> SymMatrix:
    """Coerce an array-like into a :class:`SymMatrix` (no copy if already one)."""
    return x if isinstance(x, SymMatrix) else SymMatrix(x)


def _check_same_dim(*mats: SymMatrix) -> None:
    dims = {m.dim for m in mats}
    if len(dims) > 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")


@njit(cache=True)
def _jacobi_kernel(a, v, target, max_sweeps):
    n = a.shape[0]
    sweeps = 0
    while True:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        if np.sqrt(off) <= target:
            return sweeps
        if sweeps >= max_sweeps:
            return -1
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq


def jacobi_eigh(a: np.ndarray, tol: float = JACOBI_TOL,
                max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenSystem:
    """Cyclic Jacobi eigendecomposition of a symmetric array.

    Sweeps over the strict upper triangle row by row until the off-diagonal
    Frobenius norm drops to ``tol * ||a||_F``. Eigenvalues are then sorted
    non-increasing with a stable sort, so ties keep the Jacobi output order.
    """
    a = np.array(a, dtype=np.float64, order="C")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    v = np.eye(a.shape[0])
    sweeps = _jacobi_kernel(a, v, tol * np.linalg.norm(a), max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return EigenSystem(eigenvalues=w[order], basis=v[:, order], sweeps=sweeps)


def eigh(A: Any) -> EigenSystem:
    """Eigenvalues (non-increasing) and orthonormal eigenvectors of ``A``."""
    return as_sym(A).eig


def apply_fn(A: Any, f: "PiecewiseFn") -> SymMatrix:
    """Spectral calculus: ``f(A) = U f(diag(lambda)) U^T``.

    The result carries a ready-made eigendecomposition sharing ``A``'s basis.
    """
    from .scalar import evaluate_spectrum

    A = as_sym(A)
    es = A.eig
    fw = evaluate_spectrum(f, es.eigenvalues, scale=1.0 + A.norm())
    order = np.argsort(-fw, kind="stable")
    return SymMatrix._from_eig(EigenSystem(fw[order], es.basis[:, order]))


def _map_spectrum(A: SymMatrix, fn) -> SymMatrix:
    es = A.eig
    fw = fn(es.eigenvalues)
    order = np.argsort(-fw, kind="stable")
    return SymMatrix._from_eig(EigenSystem(fw[order], es.basis[:, order]))


def abs_matrix(A: Any) -> SymMatrix:
    """``|A| = (A^T A)^{1/2}``, i.e. the same eigenbasis with ``|lambda|``."""
    return _map_spectrum(as_sym(A), np.abs)


def positive_part(A: Any) -> SymMatrix:
    """``A^+ = (A + |A|) / 2``: negative eigenvalues clipped to zero."""
    return _map_spectrum(as_sym(A), lambda w: np.maximum(w, 0.0))


def min_eigenvalue(A: Any) -> float:
    return float(as_sym(A).eigenvalues[-1])


def is_psd(A: Any, tol: float = 1e-12) -> bool:
    return min_eigenvalue(A) >= -tol


def ge(A: Any, B: Any, tol: float = 1e-12) -> bool:
    """Loewner order ``A >= B`` up to ``tol`` on the smallest eigenvalue of ``A - B``."""
    A, B = as_sym(A), as_sym(B)
    _check_same_dim(A, B)
    return is_psd(A - B, tol)


def random_sym(dim: int, seed: Any = None, scale: float = 1.0) -> SymMatrix:
    """Symmetrised standard-normal matrix with operator norm rescaled to ``scale``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m = SymMatrix(rng.standard_normal((dim, dim)))
    nrm = m.norm()
    return m if nrm == 0 else (scale / nrm) * m


def random_psd(dim: int, seed: Any = None, scale: float = 1.0) -> SymMatrix:
    """``R R^T`` with standard-normal ``R``, rescaled to operator norm ``scale``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    r = rng.standard_normal((dim, dim))
    m = SymMatrix(r @ r.T)
    nrm = m.norm()
    if nrm == 0:
        return m
    out = positive_part((scale / nrm) * m)
    # positive_part rebuilds from the basis; rescale once more if rounding overshot
    if out.norm() > scale:
        out = (scale / out.norm()) * out
    return out


def load_matrix(path) -> SymMatrix:
    with open(path) as fh:
        return SymMatrix.from_dict(json.load(fh))


def dump_matrix(A: SymMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(as_sym(A).to_dict(), fh)

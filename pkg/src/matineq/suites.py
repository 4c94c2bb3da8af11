"""Seeded random property suites for the inequalities that are theorems.

Instance ``i`` of a suite uses ``default_rng([seed, i])`` and dimension
``2 + i % 5``, so suites are reproducible and cover dims 2 to 6. A suite
reports every instance where a theorem appears to fail; a correct
implementation reports none.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .delta import corollary_checks, delta
from .fuzz import sample_angle_fn
from .inequalities import InequalityId, check
from .majorization import dominated_weak_majorize
from .scalar import SQRT, SQUARE, AngleSum, classify, ga
from .spectral import SymMatrix, apply_fn, random_psd, random_sym

SUITE_REL_TOL = 1e-8
GA_PARAMS = (0.0, 0.5, 1.0, 10.0)


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.instances > 0

    def to_dict(self) -> dict:
        return {"name": self.name, "instances": self.instances, "checks": self.checks,
                "failures": list(self.failures), "passed": self.passed}


def _psd(rng, dim) -> SymMatrix:
    # norms spread over [0.1, 3] so the spectra straddle kinks placed in [0, 2]
    return random_psd(dim, rng, float(rng.uniform(0.1, 3.0)))


def planted_degenerate(rng, dim: int) -> SymMatrix:
    """Random orthogonal conjugate of a diagonal with exactly repeated entries."""
    n_distinct = int(rng.integers(1, dim))
    levels = np.sort(rng.uniform(-2.0, 2.0, size=n_distinct))[::-1]
    counts = rng.multinomial(dim - n_distinct, np.ones(n_distinct) / n_distinct) + 1
    diag = np.repeat(levels, counts)
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    return SymMatrix((q * diag) @ q.T)


def _expect(res: SuiteResult, label: str, result) -> None:
    res.checks += 1
    if result.verdict != "holds":
        res.failures.append(f"{label}: {result.verdict} margin={result.margin:.3g}")


def _bourin_uchiyama(rng, dim, res, idx):
    f = sample_angle_fn(rng, InequalityId.andozhan_sum_concave)
    A, B = _psd(rng, dim), _psd(rng, dim)
    _expect(res, f"#{idx}", check(InequalityId.andozhan_sum_concave, f, [A, B], rel_tol=SUITE_REL_TOL))


def _kosem(rng, dim, res, idx):
    f = sample_angle_fn(rng, InequalityId.andozhan_sum_convex)
    A, B = _psd(rng, dim), _psd(rng, dim)
    _expect(res, f"#{idx}", check(InequalityId.andozhan_sum_convex, f, [A, B], rel_tol=SUITE_REL_TOL))


def _ggc_entrywise(rng, dim, res, idx):
    B = _psd(rng, dim)
    A = B.norm() * SymMatrix.identity(dim) + _psd(rng, dim)
    g = sample_angle_fn(rng, InequalityId.prop_ggc_entrywise)
    f = sample_angle_fn(rng, InequalityId.cor_gg_entrywise)
    _expect(res, f"#{idx} ggc", check(InequalityId.prop_ggc_entrywise, g, [A, B], rel_tol=SUITE_REL_TOL))
    _expect(res, f"#{idx} gg", check(InequalityId.cor_gg_entrywise, f, [A, B], rel_tol=SUITE_REL_TOL))


def _prop_g_and_4(rng, dim, res, idx):
    X, Y = _psd(rng, dim), _psd(rng, dim)
    for a in GA_PARAMS:
        for tag in (InequalityId.prop_g, InequalityId.prop_4):
            _expect(res, f"#{idx} {tag} a={a}", check(tag, ga(a), [X, Y], rel_tol=SUITE_REL_TOL))


def _bourins_strengthened(rng, dim, res, idx):
    A, B = _psd(rng, dim), _psd(rng, dim)
    for family in ("concave", "convex"):
        f = sample_angle_fn(rng, InequalityId.bourins_strengthened, family=family)
        _expect(res, f"#{idx} {family}",
                check(InequalityId.bourins_strengthened, f, [A, B], rel_tol=SUITE_REL_TOL))


def _ando_operator_monotone(rng, dim, res, idx):
    A, B = _psd(rng, dim), _psd(rng, dim)
    _expect(res, f"#{idx} sqrt", check(InequalityId.ando_diff_monotone, SQRT, [A, B], rel_tol=SUITE_REL_TOL))
    _expect(res, f"#{idx} square",
            check(InequalityId.ando_diff_inverse, SQUARE, [A, B], rel_tol=SUITE_REL_TOL))


def _monotone_angle(rng) -> AngleSum:
    while True:
        n = int(rng.integers(0, 4))
        f = AngleSum(float(rng.uniform(0.05, 2.0)),
                     tuple(zip(rng.uniform(0.0, 2.0, n).tolist(), rng.uniform(-2.0, 2.0, n).tolist())))
        if classify(f).monotone_increasing:
            return f


def _delta_corollary(rng, dim, res, idx):
    G = planted_degenerate(rng, dim) if idx % 4 == 3 else random_sym(dim, rng, float(rng.uniform(0.5, 3.0)))
    C = random_sym(dim, rng, float(rng.uniform(0.1, 3.0)))
    f = _monotone_angle(rng)
    a = float(rng.uniform(0.0, 3.0))
    rep = corollary_checks(G, C, f, a)
    res.checks += len(rep.items)
    for item, ok in rep.items.items():
        if not ok:
            res.failures.append(f"#{idx} ({item}) error={rep.errors[item]:.3g} tol={rep.tol:.3g}")


def _closure_under_addition(rng, dim, res, idx):
    # both summands satisfy the delta relation => so does their sum
    X, Y = _psd(rng, dim), _psd(rng, dim)
    f1 = sample_angle_fn(rng, InequalityId.star3_delta)
    f2 = sample_angle_fn(rng, InequalityId.star3_delta)
    r1 = check(InequalityId.star3_delta, f1, [X, Y], rel_tol=SUITE_REL_TOL)
    r2 = check(InequalityId.star3_delta, f2, [X, Y], rel_tol=SUITE_REL_TOL)
    # linearity of delta in its first argument for a simple spectrum
    lhs = delta(apply_fn(Y, f1 + f2), Y).values
    split = delta(apply_fn(Y, f1), Y).values + delta(apply_fn(Y, f2), Y).values
    res.checks += 1
    if np.max(np.abs(lhs - split)) > SUITE_REL_TOL * (1.0 + np.max(np.abs(lhs))):
        res.failures.append(f"#{idx}: delta not additive")
    if r1.verdict == "holds" and r2.verdict == "holds":
        _expect(res, f"#{idx} sum", check(InequalityId.star3_delta, f1 + f2, [X, Y], rel_tol=SUITE_REL_TOL))


SUITES: dict[str, Callable] = {
    "bourin_uchiyama": _bourin_uchiyama,
    "kosem": _kosem,
    "ggc_entrywise": _ggc_entrywise,
    "prop_g_and_4": _prop_g_and_4,
    "bourins_strengthened": _bourins_strengthened,
    "ando_operator_monotone": _ando_operator_monotone,
    "delta_corollary": _delta_corollary,
    "closure_under_addition": _closure_under_addition,
}


def run_suite(name: str, n: int = 500, seed: int = 0) -> SuiteResult:
    body = SUITES[name]
    res = SuiteResult(name)
    for i in range(n):
        rng = np.random.default_rng([seed, i])
        body(rng, 2 + i % 5, res, i)
        res.instances += 1
    return res

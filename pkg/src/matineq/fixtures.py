"""The three published counterexamples, embedded at printed precision.

Printed values carry five significant figures, so reproduction is judged
at an absolute tolerance of ``5e-5``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .delta import delta
from .inequalities import CheckResult, InequalityId, check
from .majorization import operator_norm
from .scalar import MIN1, angle, pos_part_shift
from .spectral import SymMatrix, abs_matrix, apply_fn, positive_part

PRINT_TOL = 5e-5
EXACT_TOL = 1e-10

# 2x2 counterexample for the convex difference inequality, g(x) = x + (x-1)^+
Q1_G = angle(1.0, (1.0, 1.0))
Q1_A = SymMatrix([[0.9, 0.0], [0.0, 0.6]])
Q1_B = SymMatrix([[0.8, 0.5], [0.5, 0.4]])

# 3x3 counterexample for the concave ordered inequality, f(x) = min(x, 1)
Q3_F = MIN1
Q3_B = SymMatrix([
    [0.701816, 0.317887, 0.198910],
    [0.317887, 1.014950, -0.093826],
    [0.198910, -0.093826, 0.274236],
])
Q3_DELTA = SymMatrix.diag([0.192713, 0.446505, 0.455416])

# 3x3 counterexample for the convex ordered inequality, via delta with f(x) = (x-1)^+
Q2_F = pos_part_shift(1.0)
Q2_X = SymMatrix([
    [0.35614, -0.053243, 0.10116],
    [-0.053243, 0.87456, 0.40559],
    [0.10116, 0.40559, 0.82474],
])
Q2_Y = SymMatrix.diag([0.53642, 0.42018, 0.094866])
Q2_C_PRINTED = np.array([
    [-0.00018194, 0.00052449, -0.0016345],
    [0.00052449, 0.2573, 0.12368],
    [-0.0016345, 0.12368, 0.04],
])


class FixtureMismatch(AssertionError):
    pass


@dataclass
class FixtureResult:
    name: str
    check: CheckResult
    expected: dict[str, list[float]] = field(default_factory=dict)
    computed: dict[str, list[float]] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)

    def errors(self) -> dict[str, float]:
        return {k: float(np.max(np.abs(np.subtract(self.computed[k], v))))
                for k, v in self.expected.items()}

    @property
    def reproduced(self) -> bool:
        errs = self.errors()
        return self.check.violated and all(errs[k] <= self.tolerances[k] for k in errs)

    def diff(self) -> str:
        lines = [f"{self.name}: verdict {self.check.verdict} (expected violated)"]
        for key, err in self.errors().items():
            mark = "ok" if err <= self.tolerances[key] else "MISMATCH"
            lines.append(f"  {key}: expected {self.expected[key]} computed "
                         f"{[float(f'{v:.9g}') for v in self.computed[key]]} "
                         f"|err|={err:.3g} tol={self.tolerances[key]:g} {mark}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "reproduced": self.reproduced,
            "expected": self.expected,
            "computed": {k: [float(x) for x in v] for k, v in self.computed.items()},
            "errors": self.errors(),
            "tolerances": self.tolerances,
            "check": self.check.to_dict(),
        }


def fixture_q1() -> FixtureResult:
    g = Q1_G
    rhs = apply_fn(abs_matrix(Q1_A - Q1_B), g)
    lhs = apply_fn(Q1_A, g) - apply_fn(Q1_B, g)
    res = FixtureResult("Q1 (2x2, g(x)=x+(x-1)^+)", check(InequalityId.q1_diff_convex, g, [Q1_A, Q1_B]))
    res.expected = {"eig g(|A-B|)": [0.65249, 0.35249], "eig g(A)-g(B)": [0.65010, -0.48862]}
    res.computed = {"eig g(|A-B|)": list(rhs.eigenvalues), "eig g(A)-g(B)": list(lhs.eigenvalues)}
    res.tolerances = {k: PRINT_TOL for k in res.expected}
    return res


def fixture_q3() -> FixtureResult:
    f = Q3_F
    res = FixtureResult("Q3 (3x3, f(x)=min(x,1))",
                        check(InequalityId.q3_diff_concave_ordered, f, [Q3_B, Q3_DELTA]))
    res.expected = {"||f(D)||": [0.455416], "||f(B+D)-f(B)||": [0.455776]}
    res.computed = {
        "||f(D)||": [operator_norm(apply_fn(Q3_DELTA, f))],
        "||f(B+D)-f(B)||": [operator_norm(apply_fn(Q3_B + Q3_DELTA, f) - apply_fn(Q3_B, f))],
    }
    res.tolerances = {k: PRINT_TOL for k in res.expected}
    return res


def fixture_q2() -> FixtureResult:
    f = Q2_F
    ident = SymMatrix.identity(3)
    C = positive_part(Q2_X + Q2_Y - ident) - positive_part(Q2_X - ident)
    res = FixtureResult("Q2 via delta (3x3, f(x)=(x-1)^+)",
                        check(InequalityId.star3_delta, f, [Q2_X, Q2_Y]))
    res.expected = {
        "delta((Y-1)^+;Y)": [0.0, 0.0, 0.0],
        "delta(C;Y)": [-0.00018194, 0.2573, 0.04],
        "C entries": Q2_C_PRINTED.ravel().tolist(),
    }
    res.computed = {
        "delta((Y-1)^+;Y)": list(delta(positive_part(Q2_Y - ident), Q2_Y).values),
        "delta(C;Y)": list(delta(C, Q2_Y).values),
        "C entries": list(C.entries.ravel()),
    }
    res.tolerances = {"delta((Y-1)^+;Y)": EXACT_TOL, "delta(C;Y)": PRINT_TOL, "C entries": PRINT_TOL}
    return res


def published_counterexamples() -> dict[InequalityId, tuple]:
    """``tag -> (fn, inputs)`` for replaying each counterexample elsewhere."""
    return {
        InequalityId.q1_diff_convex: (Q1_G, (Q1_A, Q1_B)),
        InequalityId.q3_diff_concave_ordered: (Q3_F, (Q3_B, Q3_DELTA)),
        InequalityId.star3_delta: (Q2_F, (Q2_X, Q2_Y)),
    }


def verify_paper_fixtures(strict: bool = False) -> list[FixtureResult]:
    """Recompute all three counterexamples.

    With ``strict=True`` a mismatch raises :class:`FixtureMismatch` carrying
    the expected-vs-computed diff.
    """
    results = [fixture_q1(), fixture_q3(), fixture_q2()]
    bad = [r for r in results if not r.reproduced]
    if strict and bad:
        raise FixtureMismatch("\n".join(r.diff() for r in bad))
    return results

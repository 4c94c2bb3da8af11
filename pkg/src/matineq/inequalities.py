"""Checkers for the matrix inequalities around Ando's and Ando-Zhan's theorems.

Each :class:`InequalityId` maps to a :class:`Rule` describing its inputs,
the function-class and matrix preconditions, and how to build the two
vectors being compared. Norm inequalities are always tested through all Ky
Fan norms at once (weak majorisation of singular values), which by Ky Fan
dominance covers every unitarily invariant norm.

Preconditions are reported, never assumed: a failed precondition yields the
verdict ``precondition_failed`` rather than an exception.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .delta import delta
from .majorization import (
    DEFAULT_REL_TOL,
    MajReport,
    dominated_weak_majorize,
    entrywise_ge,
    singular_values,
    weak_majorize,
)
from .scalar import FnClass, Named, PiecewiseFn, classify, format_fn, parse_fn
from .spectral import SymMatrix, abs_matrix, apply_fn, as_sym, min_eigenvalue

# slack on PSD / Loewner-order preconditions, relative to 1 + ||M||
PRECONDITION_REL_TOL = 1e-10


class InequalityId(str, Enum):
    ando_diff_monotone = "ando_diff_monotone"
    ando_diff_inverse = "ando_diff_inverse"
    andozhan_sum_concave = "andozhan_sum_concave"
    andozhan_sum_convex = "andozhan_sum_convex"
    q1_diff_convex = "q1_diff_convex"
    q2_diff_convex_ordered = "q2_diff_convex_ordered"
    q3_diff_concave_ordered = "q3_diff_concave_ordered"
    prop_ggc_entrywise = "prop_ggc_entrywise"
    cor_gg_entrywise = "cor_gg_entrywise"
    prop_g = "prop_g"
    prop_4 = "prop_4"
    bourins_strengthened = "bourins_strengthened"
    star3_delta = "star3_delta"

    def __str__(self) -> str:
        return self.value


VERDICTS = ("holds", "violated", "precondition_failed")

Comparison = tuple[Callable[..., MajReport], np.ndarray, np.ndarray]


@dataclass(frozen=True)
class Rule:
    inputs: tuple[str, ...]
    fn_requires: tuple[str, ...]
    bounded: bool
    statement: str
    compare: Callable[[PiecewiseFn, Sequence[SymMatrix]], Comparison]


def _sv(M) -> np.ndarray:
    return singular_values(M)


def _ando_diff_upper(f, mats) -> Comparison:
    # |||f(A) - f(B)||| <= |||f(|A - B|)|||
    A, B = mats
    return weak_majorize, _sv(apply_fn(A, f) - apply_fn(B, f)), _sv(apply_fn(abs_matrix(A - B), f))


def _ando_diff_lower(f, mats) -> Comparison:
    # |||g(A) - g(B)||| >= |||g(|A - B|)|||
    A, B = mats
    return weak_majorize, _sv(apply_fn(abs_matrix(A - B), f)), _sv(apply_fn(A, f) - apply_fn(B, f))


def _sum_concave(f, mats) -> Comparison:
    A, B = mats
    return weak_majorize, _sv(apply_fn(A + B, f)), _sv(apply_fn(A, f) + apply_fn(B, f))


def _sum_convex(f, mats) -> Comparison:
    A, B = mats
    return weak_majorize, _sv(apply_fn(A, f) + apply_fn(B, f)), _sv(apply_fn(A + B, f))


def _ordered_diff_lower(f, mats) -> Comparison:
    # |||g(B + D) - g(B)||| >= |||g(D)|||
    B, D = mats
    return weak_majorize, _sv(apply_fn(D, f)), _sv(apply_fn(B + D, f) - apply_fn(B, f))


def _ordered_diff_upper(f, mats) -> Comparison:
    B, D = mats
    return weak_majorize, _sv(apply_fn(B + D, f) - apply_fn(B, f)), _sv(apply_fn(D, f))


def _ggc(f, mats) -> Comparison:
    # lambda(g(A) - g(B)) <= lambda(g(A - B)) entrywise
    A, B = mats
    return (entrywise_ge, (apply_fn(A, f) - apply_fn(B, f)).eigenvalues,
            apply_fn(A - B, f).eigenvalues)


def _gg(f, mats) -> Comparison:
    A, B = mats
    return (entrywise_ge, apply_fn(A - B, f).eigenvalues,
            (apply_fn(A, f) - apply_fn(B, f)).eigenvalues)


def _prop_g(f, mats) -> Comparison:
    X, Y = mats
    return weak_majorize, apply_fn(Y, f).eigenvalues, (apply_fn(X + Y, f) - apply_fn(X, f)).eigenvalues


def _star3(f, mats) -> Comparison:
    # delta(f(Y); Y) <_dw delta(f(X + Y) - f(X); Y)
    X, Y = mats
    return (dominated_weak_majorize, delta(apply_fn(Y, f), Y).values,
            delta(apply_fn(X + Y, f) - apply_fn(X, f), Y).values)


def _bourins(f, mats) -> Comparison:
    A, B = mats
    S = A + B
    whole = delta(apply_fn(S, f), S).values
    parts = delta(apply_fn(A, f) + apply_fn(B, f), S).values
    if classify(f).concave:
        return dominated_weak_majorize, whole, parts
    return dominated_weak_majorize, parts, whole


_CONVEX_G = ("convex", "nonneg", "zero_at_zero")
_CONCAVE_F = ("concave", "monotone", "nonneg")

RULES: dict[InequalityId, Rule] = {
    InequalityId.ando_diff_monotone: Rule(
        ("A", "B"), _CONCAVE_F, False, "|||f(A)-f(B)||| <= |||f(|A-B|)|||", _ando_diff_upper),
    InequalityId.ando_diff_inverse: Rule(
        ("A", "B"), ("monotone",) + _CONVEX_G, False, "|||g(A)-g(B)||| >= |||g(|A-B|)|||",
        _ando_diff_lower),
    InequalityId.andozhan_sum_concave: Rule(
        ("A", "B"), ("concave", "nonneg"), False, "|||f(A)+f(B)||| >= |||f(A+B)|||", _sum_concave),
    InequalityId.andozhan_sum_convex: Rule(
        ("A", "B"), _CONVEX_G, False, "|||g(A)+g(B)||| <= |||g(A+B)|||", _sum_convex),
    InequalityId.q1_diff_convex: Rule(
        ("A", "B"), _CONVEX_G, False, "|||g(A)-g(B)||| >= |||g(|A-B|)|||", _ando_diff_lower),
    InequalityId.q2_diff_convex_ordered: Rule(
        ("B", "Delta"), _CONVEX_G, False, "|||g(B+D)-g(B)||| >= |||g(D)|||", _ordered_diff_lower),
    InequalityId.q3_diff_concave_ordered: Rule(
        ("B", "Delta"), ("concave", "nonneg"), False, "|||f(B+D)-f(B)||| <= |||f(D)|||",
        _ordered_diff_upper),
    InequalityId.prop_ggc_entrywise: Rule(
        ("A", "B"), _CONCAVE_F, True, "lambda(g(A)-g(B)) <= lambda(g(A-B)) when A >= ||B||", _ggc),
    InequalityId.cor_gg_entrywise: Rule(
        ("A", "B"), _CONVEX_G, True, "lambda(f(A-B)) <= lambda(f(A)-f(B)) when A >= ||B||", _gg),
    InequalityId.prop_g: Rule(
        ("X", "Y"), ("is_ga",), False, "lambda(g_a(Y)) <_w lambda(g_a(X+Y)-g_a(X))", _prop_g),
    InequalityId.prop_4: Rule(
        ("X", "Y"), ("is_ga",), False, "delta(g_a(Y);Y) <_dw delta(g_a(X+Y)-g_a(X);Y)", _star3),
    InequalityId.bourins_strengthened: Rule(
        ("A", "B"), ("nonneg", "concave_or_convex0"), False,
        "delta(f(A+B);A+B) <_dw delta(f(A)+f(B);A+B), reversed for convex f",
        _bourins),
    InequalityId.star3_delta: Rule(
        ("X", "Y"), ("monotone",), False, "delta(f(Y);Y) <_dw delta(f(X+Y)-f(X);Y)", _star3),
}


def _fn_condition(name: str, f: PiecewiseFn, cls: FnClass) -> bool:
    if name == "monotone":
        return cls.monotone_increasing
    if name == "convex":
        return cls.convex
    if name == "concave":
        return cls.concave
    if name == "nonneg":
        return cls.nonnegative_on_R_plus
    if name == "zero_at_zero":
        return cls.zero_at_zero
    if name == "is_ga":
        return isinstance(f, Named) and f.tag == "ga"
    if name == "concave_or_convex0":
        return cls.concave or (cls.convex and cls.zero_at_zero)
    raise KeyError(name)


def preconditions(tag, f: PiecewiseFn, inputs: Sequence) -> list[tuple[str, bool]]:
    """Named precondition flags for ``tag`` on this function and these inputs."""
    rule = RULES[InequalityId(tag)]
    mats = [as_sym(m) for m in inputs]
    cls = classify(f)
    out = [(f"fn_{name}", _fn_condition(name, f, cls)) for name in rule.fn_requires]
    for label, M in zip(rule.inputs, mats):
        out.append((f"{label}_psd", min_eigenvalue(M) >= -PRECONDITION_REL_TOL * (1.0 + M.norm())))
    if rule.bounded:
        A, B = mats
        slack = PRECONDITION_REL_TOL * (1.0 + A.norm())
        out.append(("A_ge_normB", min_eigenvalue(A) - B.norm() >= -slack))
    return out


@dataclass(frozen=True)
class CheckResult:
    inequality: InequalityId
    fn: PiecewiseFn
    report: MajReport | None
    preconditions: tuple[tuple[str, bool], ...]
    verdict: str

    @property
    def margin(self) -> float:
        return self.report.worst_margin if self.report is not None else float("nan")

    @property
    def violated(self) -> bool:
        return self.verdict == "violated"

    def to_dict(self) -> dict:
        return {
            "inequality": self.inequality.value,
            "fn": format_fn(self.fn),
            "statement": RULES[self.inequality].statement,
            "preconditions": [{"name": n, "met": m} for n, m in self.preconditions],
            "verdict": self.verdict,
            "report": None if self.report is None else self.report.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CheckResult":
        return cls(
            inequality=InequalityId(obj["inequality"]),
            fn=parse_fn(obj["fn"]),
            report=None if obj.get("report") is None else MajReport.from_dict(obj["report"]),
            preconditions=tuple((p["name"], bool(p["met"])) for p in obj["preconditions"]),
            verdict=obj["verdict"],
        )


def check(tag, f: PiecewiseFn, inputs: Sequence, tol: float | None = None,
          rel_tol: float = DEFAULT_REL_TOL) -> CheckResult:
    """Evaluate inequality ``tag`` for function ``f`` on ``inputs``.

    ``tol`` is an absolute slack on every prefix-sum gap; when omitted it is
    ``rel_tol * (1 + largest partial sum)``.

    Raises ``ValueError`` on a wrong number of inputs or mismatched
    dimensions. Unmet preconditions give verdict ``precondition_failed``.
    """
    tag = InequalityId(tag)
    rule = RULES[tag]
    if len(inputs) != len(rule.inputs):
        raise ValueError(f"{tag} expects {len(rule.inputs)} matrices "
                         f"({', '.join(rule.inputs)}), got {len(inputs)}")
    mats = [as_sym(m) for m in inputs]
    if len({m.dim for m in mats}) != 1:
        raise ValueError("input matrices must share one dimension")
    pre = tuple(preconditions(tag, f, mats))
    if not all(ok for _, ok in pre):
        return CheckResult(tag, f, None, pre, "precondition_failed")
    relation, lhs, rhs = rule.compare(f, mats)
    report = relation(lhs, rhs, tol=tol, rel_tol=rel_tol)
    return CheckResult(tag, f, report, pre, "holds" if report.holds else "violated")

"""Randomised counterexample search with margin-descending shrinking.

Trial ``i`` of a run draws everything from ``default_rng([seed, i])``, so
trials are independent of execution order and any single trial can be
regenerated on its own with :func:`run_trial`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .inequalities import RULES, CheckResult, InequalityId, _fn_condition, check
from .majorization import DEFAULT_REL_TOL
from .scalar import AngleSum, PiecewiseFn, classify, format_fn, ga, parse_fn
from .spectral import SymMatrix, as_sym, min_eigenvalue, positive_part, random_psd

log = logging.getLogger(__name__)

CONSTRAINTS = ("none", "ordered", "bounded")

# function family sampled when no fixed function is given
_FAMILY = {
    InequalityId.ando_diff_monotone: "concave",
    InequalityId.andozhan_sum_concave: "concave",
    InequalityId.q3_diff_concave_ordered: "concave",
    InequalityId.prop_ggc_entrywise: "concave",
    InequalityId.ando_diff_inverse: "convex",
    InequalityId.andozhan_sum_convex: "convex",
    InequalityId.q1_diff_convex: "convex",
    InequalityId.q2_diff_convex_ordered: "convex",
    InequalityId.cor_gg_entrywise: "convex",
    InequalityId.star3_delta: "convex",
    InequalityId.prop_g: "ga",
    InequalityId.prop_4: "ga",
    InequalityId.bourins_strengthened: "either",
}


def default_constraint(tag) -> str:
    rule = RULES[InequalityId(tag)]
    if rule.bounded:
        return "bounded"
    if rule.inputs == ("B", "Delta"):
        return "ordered"
    return "none"


@dataclass(frozen=True)
class FuzzConfig:
    inequality: InequalityId
    fn: PiecewiseFn | None = None
    dim: int = 3
    trials: int = 100_000
    seed: int = 0
    scale: float = 1.0
    constraint: str | None = None
    inject: tuple[tuple, ...] = ()
    diag_prob: float = 0.5
    rel_tol: float = DEFAULT_REL_TOL
    max_resample: int = 100

    def __post_init__(self):
        object.__setattr__(self, "inequality", InequalityId(self.inequality))
        if self.constraint is None:
            object.__setattr__(self, "constraint", default_constraint(self.inequality))
        if self.constraint not in CONSTRAINTS:
            raise ValueError(f"constraint must be one of {CONSTRAINTS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if self.inject and self.fn is None:
            raise ValueError("injected inputs need a fixed function")
        n_in = len(RULES[self.inequality].inputs)
        for inputs in self.inject:
            if len(inputs) != n_in:
                raise ValueError(f"injected case needs {n_in} matrices")

    def to_dict(self) -> dict:
        return {
            "inequality": self.inequality.value,
            "fn": "random" if self.fn is None else format_fn(self.fn),
            "dim": self.dim,
            "trials": self.trials,
            "seed": self.seed,
            "scale": self.scale,
            "constraint": self.constraint,
            "injected": len(self.inject),
            "rel_tol": self.rel_tol,
        }


@dataclass(frozen=True)
class Violation:
    seed_index: int
    inputs: tuple[SymMatrix, ...]
    fn: PiecewiseFn
    margin: float
    report: CheckResult
    constraint: str = "none"
    rel_tol: float = DEFAULT_REL_TOL

    @property
    def inequality(self) -> InequalityId:
        return self.report.inequality

    def replay(self) -> CheckResult:
        fresh = [SymMatrix(m.entries) for m in self.inputs]
        return check(self.inequality, self.fn, fresh, rel_tol=self.rel_tol)

    def to_dict(self) -> dict:
        return {
            "seed_index": self.seed_index,
            "inequality": self.inequality.value,
            "fn": format_fn(self.fn),
            "margin": self.margin,
            "constraint": self.constraint,
            "rel_tol": self.rel_tol,
            "inputs": [m.to_dict() for m in self.inputs],
            "report": self.report.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Violation":
        return cls(
            seed_index=int(obj["seed_index"]),
            inputs=tuple(SymMatrix.from_dict(m) for m in obj["inputs"]),
            fn=parse_fn(obj["fn"]),
            margin=float(obj["margin"]),
            report=CheckResult.from_dict(obj["report"]),
            constraint=obj.get("constraint", "none"),
            rel_tol=float(obj.get("rel_tol", DEFAULT_REL_TOL)),
        )


@dataclass
class FuzzResult:
    config: FuzzConfig
    violations: list[Violation] = field(default_factory=list)
    trials_run: int = 0
    skipped: int = 0

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "summary": {
                "trials_run": self.trials_run,
                "violations": len(self.violations),
                "skipped": self.skipped,
                "worst_margin": min((v.margin for v in self.violations), default=None),
            },
            "violations": [v.to_dict() for v in self.violations],
        }


def sample_angle_fn(rng: np.random.Generator, tag, family: str | None = None,
                    max_tries: int = 1000) -> PiecewiseFn:
    """Random angle sum (``a in [0,2]``, ``b in [-2,2]``, ``x0 in [0,2]``) passing
    the function preconditions of ``tag``."""
    tag = InequalityId(tag)
    family = family or _FAMILY[tag]
    if family == "ga":
        return ga(float(rng.uniform(0.0, 2.0)))
    needs = RULES[tag].fn_requires
    for _ in range(max_tries):
        kind = family if family != "either" else ("convex" if rng.random() < 0.5 else "concave")
        n = int(rng.integers(1, 4))
        a = float(rng.uniform(0.0, 2.0))
        x0s = rng.uniform(0.0, 2.0, size=n)
        bs = rng.uniform(0.0, 2.0, size=n) if kind == "convex" else rng.uniform(-2.0, 0.0, size=n)
        try:
            f = AngleSum(a, tuple(zip(x0s.tolist(), bs.tolist())))
        except ValueError:
            continue
        cls = classify(f)
        if all(_fn_condition(name, f, cls) for name in needs):
            return f
    raise RuntimeError(f"could not sample a function satisfying {needs}")


def _psd(rng, dim, scale, diag_prob=0.0) -> SymMatrix:
    size = scale * float(rng.uniform(0.05, 1.0))
    if rng.random() < diag_prob:
        return SymMatrix.diag(size * rng.uniform(0.0, 1.0, size=dim))
    return random_psd(dim, rng, size)


def sample_inputs(rng: np.random.Generator, cfg: FuzzConfig) -> tuple[SymMatrix, ...]:
    rule = RULES[cfg.inequality]
    d, s = cfg.dim, cfg.scale
    if cfg.constraint == "bounded":
        B = _psd(rng, d, s)
        P = _psd(rng, d, s)
        mats = (B.norm() * SymMatrix.identity(d) + P, B)
    elif cfg.constraint == "ordered":
        B = _psd(rng, d, s)
        D = _psd(rng, d, s, cfg.diag_prob)
        mats = (B, D) if rule.inputs == ("B", "Delta") else (B + D, B)
    else:
        mats = tuple(_psd(rng, d, s) for _ in rule.inputs)
    # drop cached decompositions so a replay from stored entries is bit-identical
    return tuple(SymMatrix(m.entries) for m in mats)


def run_trial(cfg: FuzzConfig, index: int) -> tuple[CheckResult | None, tuple, PiecewiseFn]:
    """Generate and check trial ``index``; ``None`` result if no admissible draw."""
    if index < len(cfg.inject):
        inputs = tuple(SymMatrix(as_sym(m).entries) for m in cfg.inject[index])
        return check(cfg.inequality, cfg.fn, inputs, rel_tol=cfg.rel_tol), inputs, cfg.fn
    rng = np.random.default_rng([cfg.seed, index])
    for _ in range(cfg.max_resample):
        fn = cfg.fn if cfg.fn is not None else sample_angle_fn(rng, cfg.inequality)
        inputs = sample_inputs(rng, cfg)
        res = check(cfg.inequality, fn, inputs, rel_tol=cfg.rel_tol)
        if res.verdict != "precondition_failed":
            return res, inputs, fn
    return None, (), cfg.fn


def fuzz(cfg: FuzzConfig, max_violations: int | None = None) -> FuzzResult:
    """Run ``cfg.trials`` trials and collect every violation, in trial order."""
    out = FuzzResult(cfg)
    for i in range(cfg.trials):
        res, inputs, fn = run_trial(cfg, i)
        out.trials_run += 1
        if res is None:
            out.skipped += 1
            continue
        if res.violated:
            out.violations.append(Violation(i, inputs, fn, res.margin, res, cfg.constraint,
                                            cfg.rel_tol))
            if max_violations is not None and len(out.violations) >= max_violations:
                break
    log.info("fuzz %s: %d trials, %d violations, %d skipped", cfg.inequality,
             out.trials_run, len(out.violations), out.skipped)
    return out


# ---------------------------------------------------------------------------
# shrinking


def satisfies_constraint(tag, inputs: Sequence[SymMatrix], constraint: str,
                         rel_tol: float = 1e-10) -> bool:
    mats = [as_sym(m) for m in inputs]
    if any(min_eigenvalue(m) < -rel_tol * (1.0 + m.norm()) for m in mats):
        return False
    rule = RULES[InequalityId(tag)]
    if constraint == "bounded":
        A, B = mats
        return min_eigenvalue(A) - B.norm() >= -rel_tol * (1.0 + A.norm())
    if constraint == "ordered" and rule.inputs != ("B", "Delta"):
        A, B = mats
        D = A - B
        return min_eigenvalue(D) >= -rel_tol * (1.0 + D.norm())
    return True


def project(tag, inputs: Sequence[SymMatrix], constraint: str) -> tuple[SymMatrix, ...]:
    """Nearest-ish point satisfying the constraint: clip to PSD, then restore
    the ordering or the ``A >= ||B||`` bound by shifting ``A``."""
    mats = [positive_part(m) for m in inputs]
    rule = RULES[InequalityId(tag)]
    if constraint == "bounded":
        A, B = mats
        shift = B.norm() - min_eigenvalue(A)
        if shift > 0:
            A = A + shift * SymMatrix.identity(A.dim)
        mats = [A, B]
    elif constraint == "ordered" and rule.inputs != ("B", "Delta"):
        A, B = mats
        mats = [B + positive_part(A - B), B]
    return tuple(SymMatrix(m.entries) for m in mats)


def shrink(v: Violation, steps: int, eta: float | None = None) -> Violation:
    """Coordinate descent on the violation margin.

    Each step tries one symmetric entry perturbation ``+-eta``, projects back
    onto the constraint set and keeps the candidate only if it still
    violates with a strictly smaller margin. ``eta`` halves after a full pass
    without progress. The returned margin is never larger than ``v.margin``.
    """
    if steps <= 0:
        return v
    tag = v.inequality
    dim = v.inputs[0].dim
    if eta is None:
        eta = 0.05 * max(1.0, max(m.norm() for m in v.inputs))
    coords = [(m, i, j) for m in range(len(v.inputs)) for i in range(dim) for j in range(i, dim)]
    best = v
    used = 0
    while used < steps and eta > 1e-12:
        improved = False
        for m, i, j in coords:
            for sign in (1.0, -1.0):
                if used >= steps:
                    break
                used += 1
                bump = np.zeros((dim, dim))
                bump[i, j] = bump[j, i] = sign * eta
                cand = list(best.inputs)
                cand[m] = SymMatrix(cand[m].entries + bump)
                cand = project(tag, cand, best.constraint)
                if not satisfies_constraint(tag, cand, best.constraint):
                    continue
                res = check(tag, best.fn, cand, rel_tol=best.rel_tol)
                if res.violated and res.margin < best.margin:
                    best = replace(best, inputs=cand, margin=res.margin, report=res)
                    assert satisfies_constraint(tag, best.inputs, best.constraint)
                    improved = True
        if not improved:
            eta /= 2.0
    return best

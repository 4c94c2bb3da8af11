"""Scalar functions that get lifted to matrices.

Two representations:

* :class:`AngleSum` -- ``x -> a*x + sum_i b_i * (x - x0_i)^+`` with ``x0_i >= 0``,
  the piecewise-linear family dense in monotone convex/concave functions.
* :class:`Named` -- closed forms that must not be approximated
  (``identity``, ``sqrt``, ``square``, ``min1``, ``frac`` = x/(x+1),
  ``ga`` = a*x + x^2/(x+1)).

Text syntax used on the command line::

    angle:a=1,b=1,x0=1[,b=...,x0=...]   min1   sqrt   square   frac   identity   ga:a=0.5
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .spectral import DomainError

NAMED_TAGS = ("identity", "sqrt", "square", "min1", "frac", "ga")


@dataclass(frozen=True)
class AngleSum:
    slope: float
    kinks: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        kinks = tuple(sorted((float(x0), float(b)) for x0, b in self.kinks))
        xs = [x0 for x0, _ in kinks]
        if any(x0 < 0 for x0 in xs):
            raise ValueError("kink locations must be >= 0")
        if len(set(xs)) != len(xs):
            raise ValueError("kink locations must be distinct")
        if not all(np.isfinite(v) for k in kinks for v in k) or not np.isfinite(self.slope):
            raise ValueError("angle function parameters must be finite")
        object.__setattr__(self, "slope", float(self.slope))
        object.__setattr__(self, "kinks", kinks)

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other: "AngleSum") -> "AngleSum":
        if not isinstance(other, AngleSum):
            return NotImplemented
        merged: dict[float, float] = {}
        for x0, b in self.kinks + other.kinks:
            merged[x0] = merged.get(x0, 0.0) + b
        return AngleSum(self.slope + other.slope, tuple(merged.items()))

    def __str__(self) -> str:
        return format_fn(self)


@dataclass(frozen=True)
class Named:
    tag: str
    a: float | None = None

    def __post_init__(self):
        if self.tag not in NAMED_TAGS:
            raise ValueError(f"unknown function {self.tag!r}; expected one of {NAMED_TAGS}")
        if self.tag == "ga":
            if self.a is None or not np.isfinite(self.a) or self.a < 0:
                raise ValueError("ga needs a finite parameter a >= 0")
            object.__setattr__(self, "a", float(self.a))
        elif self.a is not None:
            raise ValueError(f"{self.tag} takes no parameter")

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self) -> str:
        return format_fn(self)


PiecewiseFn = Union[AngleSum, Named]

IDENTITY = Named("identity")
SQRT = Named("sqrt")
SQUARE = Named("square")
MIN1 = Named("min1")
FRAC = Named("frac")


def ga(a: float) -> Named:
    """``x -> a*x + x^2/(x+1)``."""
    return Named("ga", a)


def angle(a: float, *kinks: tuple[float, float]) -> AngleSum:
    """``angle(1, (1, 1))`` is ``x + (x-1)^+``; kinks are ``(x0, b)`` pairs."""
    return AngleSum(a, tuple(kinks))


def pos_part_shift(x0: float = 1.0) -> AngleSum:
    """``x -> (x - x0)^+``."""
    return AngleSum(0.0, ((x0, 1.0),))


def _domain_lower(f: PiecewiseFn) -> tuple[float, bool]:
    """Lower end of the domain and whether it is included."""
    if isinstance(f, Named):
        if f.tag == "sqrt":
            return 0.0, True
        if f.tag in ("frac", "ga"):
            return -1.0, False
    return -np.inf, False


def evaluate(f: PiecewiseFn, x):
    """Exact value of ``f`` at ``x`` (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    lo, closed = _domain_lower(f)
    bad = arr < lo if closed else arr <= lo
    if np.any(bad):
        raise DomainError(f"{format_fn(f)} is undefined at {arr[bad].ravel()[0]!r}")
    out = _eval(f, arr)
    return float(out) if np.ndim(out) == 0 else out


def _eval(f: PiecewiseFn, x: np.ndarray) -> np.ndarray:
    if isinstance(f, AngleSum):
        y = f.slope * x
        for x0, b in f.kinks:
            y = y + b * np.maximum(x - x0, 0.0)
        return y
    tag = f.tag
    if tag == "identity":
        return x.copy()
    if tag == "sqrt":
        return np.sqrt(x)
    if tag == "square":
        return x * x
    if tag == "min1":
        return np.minimum(x, 1.0)
    if tag == "frac":
        return x / (x + 1.0)
    return f.a * x + x * x / (x + 1.0)


def evaluate_spectrum(f: PiecewiseFn, w: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Evaluate ``f`` on eigenvalues, snapping roundoff-level excursions past a
    closed domain boundary (e.g. ``-1e-17`` for ``sqrt``) onto the boundary."""
    lo, closed = _domain_lower(f)
    w = np.array(w, dtype=float)
    if closed:
        snap = (w < lo) & (w >= lo - 1e-12 * scale)
        w[snap] = lo
    return np.asarray(evaluate(f, w), dtype=float)


@dataclass(frozen=True)
class FnClass:
    """Shape properties of a function on ``[0, inf)``.

    ``monotone_increasing`` for angle sums is also valid on all of R, since
    the slope left of every kink is included in the check.
    """

    monotone_increasing: bool
    convex: bool
    concave: bool
    nonnegative_on_R_plus: bool
    zero_at_zero: bool
    strictly_increasing: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


_NAMED_CLASS = {
    #            mono   convex concave nonneg zero  strict
    "identity": (True, True, True, True, True, True),
    "sqrt": (True, False, True, True, True, True),
    "square": (True, True, False, True, True, True),
    "min1": (True, False, True, True, True, False),
    "frac": (True, False, True, True, True, True),
    "ga": (True, True, False, True, True, True),
}


@lru_cache(maxsize=4096)
def classify(f: PiecewiseFn) -> FnClass:
    if isinstance(f, Named):
        return FnClass(*_NAMED_CLASS[f.tag])
    bs = [b for _, b in f.kinks]
    # slope left of the first kink, then after each kink in turn
    slopes = [f.slope]
    for b in bs:
        slopes.append(slopes[-1] + b)
    values_at_kinks = [_angle_value(f, x0) for x0, _ in f.kinks]
    f0 = _angle_value(f, 0.0)
    return FnClass(
        monotone_increasing=all(s >= 0 for s in slopes),
        convex=all(b >= 0 for b in bs),
        concave=all(b <= 0 for b in bs),
        nonnegative_on_R_plus=f0 >= 0 and all(v >= 0 for v in values_at_kinks) and slopes[-1] >= 0,
        zero_at_zero=f0 == 0.0,
        strictly_increasing=all(s > 0 for s in slopes),
    )


def _angle_value(f: AngleSum, x: float) -> float:
    return f.slope * x + sum(b * max(x - x0, 0.0) for x0, b in f.kinks)


def format_fn(f: PiecewiseFn) -> str:
    if isinstance(f, Named):
        return f"ga:a={f.a!r}" if f.tag == "ga" else f.tag
    parts = [f"a={f.slope!r}"] + [f"b={b!r},x0={x0!r}" for x0, b in f.kinks]
    return "angle:" + ",".join(parts)


def parse_fn(text: str) -> PiecewiseFn:
    """Parse the command-line function syntax; raises ``ValueError``."""
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    if head in ("identity", "sqrt", "square", "min1", "frac"):
        if rest.strip():
            raise ValueError(f"{head} takes no parameters")
        return Named(head)
    fields = []
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"expected key=value, got {item!r}")
        try:
            fields.append((key.strip(), float(val)))
        except ValueError:
            raise ValueError(f"bad number in {item!r}") from None
    if head == "ga":
        if [k for k, _ in fields] != ["a"]:
            raise ValueError("ga expects exactly 'ga:a=<value>'")
        return ga(fields[0][1])
    if head == "angle":
        if not fields or fields[0][0] != "a":
            raise ValueError("angle spec must start with a=<slope>")
        pairs = fields[1:]
        if len(pairs) % 2:
            raise ValueError("angle spec needs b,x0 pairs")
        kinks = []
        for first, second in zip(pairs[::2], pairs[1::2]):
            group = dict((first, second))
            if set(group) != {"b", "x0"}:
                raise ValueError("angle kinks must be given as b=...,x0=...")
            kinks.append((group["x0"], group["b"]))
        return AngleSum(fields[0][1], tuple(kinks))
    raise ValueError(f"unknown function spec {text!r}")

"""Unitarily invariant norms and the weak-majorization comparator.

Every unitarily invariant norm is a symmetric gauge function of the singular
values. By Fan's dominance theorem, ``|||A||| <= |||B|||`` holds for *all*
such norms exactly when every Ky Fan k-norm of ``A`` is bounded by that of
``B``, i.e. when the singular values of ``A`` are weakly majorized by those
of ``B``. :func:`dominates_all_ui_norms` decides that finite certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import singular_values

__all__ = [
    "NormFamily",
    "DominanceVerdict",
    "norm_eval",
    "norm_from_spectrum",
    "default_tol",
    "weakly_majorizes",
    "dominates_all_ui_norms",
]


@dataclass(frozen=True)
class NormFamily:
    """One of ``operator``, ``schatten`` (with ``p``) or ``kyfan`` (with ``k``).

    ``Schatten(inf)`` is normalized to ``operator``.
    """

    kind: str
    param: float | int | None = None

    def __post_init__(self):
        if self.kind == "schatten":
            p = float(self.param)
            if not p >= 1:
                raise ValueError(f"Schatten p must be >= 1, got {self.param}")
            if math.isinf(p):
                object.__setattr__(self, "kind", "operator")
                object.__setattr__(self, "param", None)
            else:
                object.__setattr__(self, "param", p)
        elif self.kind == "kyfan":
            k = int(self.param)
            if k != self.param or k < 1:
                raise ValueError(f"Ky Fan k must be a positive integer, got {self.param}")
            object.__setattr__(self, "param", k)
        elif self.kind == "operator":
            object.__setattr__(self, "param", None)
        else:
            raise ValueError(f"unknown norm family {self.kind!r}")

    @classmethod
    def operator(cls):
        return cls("operator")

    @classmethod
    def schatten(cls, p: float):
        return cls("schatten", p)

    @classmethod
    def kyfan(cls, k: int):
        return cls("kyfan", k)

    @classmethod
    def parse(cls, text: str) -> "NormFamily":
        """Parse ``op``, ``schatten:<p>`` or ``kyfan:<k>``."""
        name, _, arg = text.strip().lower().partition(":")
        if name in ("op", "operator") and not arg:
            return cls.operator()
        if name == "schatten" and arg:
            return cls.schatten(float(arg))
        if name == "kyfan" and arg:
            k = float(arg)
            return cls.kyfan(int(k) if k.is_integer() else k)
        raise ValueError(f"cannot parse norm family {text!r}")

    def __str__(self):
        if self.kind == "operator":
            return "op"
        return f"{self.kind}:{self.param:g}"


@dataclass(frozen=True)
class DominanceVerdict:
    holds: bool
    worst_k: int
    """1-based partial-sum index where ``margin`` is attained."""
    margin: float
    """Minimum over k of (rhs partial sum - lhs partial sum)."""
    tol: float

    def to_dict(self):
        return {"holds": self.holds, "worst_k": self.worst_k, "margin": self.margin, "tol": self.tol}


def norm_from_spectrum(s: np.ndarray, family: NormFamily) -> float:
    if s.size == 0:
        return 0.0
    if family.kind == "operator":
        return float(s[0])
    if family.kind == "kyfan":
        if family.param > s.size:
            raise ValueError(f"Ky Fan k={family.param} exceeds min dimension {s.size}")
        # sequential accumulation, the same order as the majorization partial sums
        return float(np.cumsum(s[: family.param])[-1])
    top = float(s[0])
    if top == 0.0:
        return 0.0
    p = family.param
    return top * float(np.sum((s / top) ** p)) ** (1.0 / p)


def norm_eval(a, family: NormFamily) -> float:
    """Evaluate a unitarily invariant norm from the singular values of ``a``."""
    return norm_from_spectrum(singular_values(a), family)


def default_tol(rhs_spectrum, tol_scale: float = 1e-8) -> float:
    """Comparison slack scaled to the trace norm of the right-hand side."""
    return tol_scale * max(1.0, float(np.sum(rhs_spectrum)))


def _padded(lhs, rhs):
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = max(lhs.size, rhs.size, 1)
    return np.pad(lhs, (0, n - lhs.size)), np.pad(rhs, (0, n - rhs.size))


def weakly_majorizes(lhs, rhs, tol: float | None = None) -> DominanceVerdict:
    """Check that the descending partial sums of ``lhs`` never exceed those of ``rhs``.

    The name reads as "``lhs`` is weakly majorized by ``rhs``". Inputs must be
    sorted descending; the shorter one is zero-padded.

    >>> weakly_majorizes([1, 1], [2, 0], tol=0.0).holds
    True
    """
    lhs, rhs = _padded(lhs, rhs)
    if tol is None:
        tol = default_tol(rhs)
    cum_l, cum_r = np.cumsum(lhs), np.cumsum(rhs)
    gaps = cum_r - cum_l
    k = int(np.argmin(gaps))
    holds = bool(np.all(cum_l <= cum_r + tol))
    return DominanceVerdict(holds, k + 1, float(gaps[k]), float(tol))


def dominates_all_ui_norms(lhs, rhs, tol: float | None = None) -> DominanceVerdict:
    """Decide ``|||lhs||| <= |||rhs|||`` for every unitarily invariant norm."""
    return weakly_majorizes(singular_values(lhs), singular_values(rhs), tol)

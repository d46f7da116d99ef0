"""Executable norm inequalities.

Each :class:`InequalityCase` knows how to draw admissible inputs, how to build
the left- and right-hand side matrices, and how the two are compared:

* ``all_ui_norms`` - weak majorization of singular values, which certifies
  the inequality for every unitarily invariant norm at once;
* ``operator_norm_only`` - the usual operator norm only;
* ``schatten_set`` - a fixed list of Schatten p-norms.

Scalar right-hand sides such as ``max_i ||A_i + c_i I||`` are represented by
a matrix with that operator norm (a direct sum, or a 1x1 matrix), so every
case has the same ``(lhs, rhs)`` shape.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .ensembles import random_of_class
from .matrix import assemble, direct_sum, identity, pad_top_left, zeros
from .norms import DominanceVerdict, NormFamily, default_tol, norm_from_spectrum, weakly_majorizes
from .spectral import is_psd, matrix_abs, psd_sqrt, singular_values

__all__ = [
    "Mode",
    "Slot",
    "SubCheck",
    "InequalityCase",
    "Evaluation",
    "TrialOutcome",
    "CASES",
    "CASE_IDS",
    "DEFAULT_SCHATTEN_PS",
    "get_case",
    "sample",
    "build",
    "identity_inputs",
    "evaluate",
]

DEFAULT_SCHATTEN_PS = (1.0, 1.5, 2.0, 3.0, math.inf)
PROOF_TOL = 1e-8
RADIUS_TOL = 1e-10


class Mode(str, Enum):
    ALL_UI_NORMS = "all_ui_norms"
    OPERATOR_NORM_ONLY = "operator_norm_only"
    SCHATTEN_SET = "schatten_set"


@dataclass(frozen=True)
class Slot:
    """One named input: its operator class and whether it repeats per block."""

    name: str
    kind: str = "general"
    per_block: bool = False


@dataclass(frozen=True)
class SubCheck:
    """A scalar claim ``lhs <= rhs + tol``."""

    lhs: float
    rhs: float
    tol: float

    @property
    def holds(self) -> bool:
        return bool(self.lhs <= self.rhs + self.tol)

    def to_dict(self):
        return {"holds": self.holds, "lhs": _jf(self.lhs), "rhs": _jf(self.rhs), "tol": self.tol}


@dataclass(frozen=True)
class InequalityCase:
    id: str
    slots: tuple[Slot, ...]
    mode: Mode
    builder: Callable = field(repr=False)
    checks: Callable | None = field(default=None, repr=False)
    n_ary: bool = False
    min_blocks: int = 1
    mutual: bool = False
    schatten_ps: tuple[float, ...] = ()
    summary: str = ""

    def block_counts(self, requested) -> list[int]:
        """Block counts this case runs at, given the campaign's list."""
        if not self.n_ary:
            return [1]
        return [n for n in requested if n >= self.min_blocks]

    def sample(self, d: int, n: int, rng: np.random.Generator) -> dict:
        return sample(self, d, n, rng)

    def build(self, inputs: dict):
        return self.builder(inputs)


@dataclass(frozen=True)
class Evaluation:
    verdict: DominanceVerdict
    lhs_norm: float
    rhs_norm: float
    checks: dict

    @property
    def ratio(self) -> float:
        return _ratio(self.lhs_norm, self.rhs_norm)

    @property
    def holds(self) -> bool:
        return self.verdict.holds and all(c.holds for c in self.checks.values())


@dataclass(frozen=True)
class TrialOutcome:
    """Result of one trial, or of one point visited by a tightness search."""

    case: str
    d: int
    n: int
    digest: str | None
    verdict: DominanceVerdict | None = None
    ratio: float = math.nan
    lhs_norm: float = math.nan
    rhs_norm: float = math.nan
    checks: dict = field(default_factory=dict)
    error: str | None = None
    rerun: bool = False
    """Set when the trial was re-evaluated at a tighter Jacobi tolerance."""

    @property
    def holds(self) -> bool:
        return (
            self.error is None
            and self.verdict is not None
            and self.verdict.holds
            and all(c.holds for c in self.checks.values())
        )

    @classmethod
    def from_evaluation(cls, case, d, n, digest, ev: Evaluation, rerun=False):
        return cls(case, d, n, digest, ev.verdict, ev.ratio, ev.lhs_norm, ev.rhs_norm,
                   ev.checks, rerun=rerun)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "d": self.d,
            "n": self.n,
            "digest": self.digest,
            "holds": self.holds,
            "verdict": None if self.verdict is None else {
                **self.verdict.to_dict(), "margin": _jf(self.verdict.margin)},
            "ratio": _jf(self.ratio),
            "lhs_norm": _jf(self.lhs_norm),
            "rhs_norm": _jf(self.rhs_norm),
            "checks": {k: v.to_dict() for k, v in self.checks.items()},
            "error": self.error,
            "rerun": self.rerun,
        }


def _jf(x: float):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


def _adj(a):
    return a.conj().T


def _opnorm(a) -> float:
    return float(singular_values(a)[0])


# -- builders
#
# Inputs are dicts keyed by slot name; per-block slots hold lists.


def _prop_1_3(x):
    a = x["a"]
    return direct_sum([a, _adj(a)]), direct_sum([a, a])


def _prop_1_4(x):
    a, b = x["a"], x["b"]
    d = a.shape[0]
    return direct_sum([a, b]), assemble([[zeros(d), a], [b, zeros(d)]])


def _prop_1_5(x):
    a = x["a"]
    return a @ _adj(a), _adj(a) @ a


def _lemma_2_1(x):
    a, b, xx = x["a"], x["b"], x["x"]
    lhs = 2 * (a @ xx @ _adj(b))
    rhs = _adj(a) @ a @ xx + xx @ _adj(b) @ b
    return lhs, rhs


def _thm_2_2(x):
    a, b, xs = x["a"], x["b"], x["x"]
    n = len(a)
    d = a[0].shape[0]
    total = sum(a[i] @ xs[i] @ _adj(b[i]) for i in range(n))
    lhs = 2 * pad_top_left(total, n * d, n * d)
    grid = [
        [_adj(a[i]) @ a[j] @ xs[j] + xs[i] @ _adj(b[i]) @ b[j] for j in range(n)]
        for i in range(n)
    ]
    return lhs, assemble(grid)


def _ineq_1_9(x):
    # (A1 X A2* + B1 Y B2*) is the n=2 sum with first factors (A1, B1),
    # middle factors (X, Y) and last factors (A2, B2).
    return _thm_2_2({"a": [x["a1"], x["b1"]], "b": [x["a2"], x["b2"]], "x": [x["x"], x["y"]]})


def _cor_2_3(x):
    a = x["a"]
    n = len(a)
    lhs = sum(a[i] @ _adj(a[(i + 1) % n]) for i in range(n))
    rhs = sum(ai @ _adj(ai) for ai in a)
    return lhs, rhs


def _ineq_1_10(x):
    a, b = x["a"], x["b"]
    return _adj(a) @ b + _adj(b) @ a, _adj(a) @ a + _adj(b) @ b


def _lemma_2_4(x):
    a, b = x["a"], x["b"]
    return a + b, matrix_abs(a) + matrix_abs(b)


def _cor_2_5_blocks(x):
    p = [x["p1"], x["p2"], x["p3"], x["p4"]]
    # block i carries |A_{i+2} A_i| with indices taken mod 4
    return [p[i] + matrix_abs(p[(i + 2) % 4] @ p[i]) for i in range(4)]


def _cor_2_5(x):
    d = x["p1"].shape[0]
    alt = x["p1"] - x["p2"] + x["p3"] - x["p4"]
    return pad_top_left(alt, 4 * d, 4 * d), direct_sum(_cor_2_5_blocks(x))


def _cor_2_6(x):
    a = x["a"]
    n = len(a)
    d = a[0].shape[0]
    shifted = [ai + (n - 1) * _opnorm(ai) * identity(d) for ai in a]
    return sum(a), direct_sum(shifted)


def _ineq_1_12(x):
    a, b = x["a"], x["b"]
    ra, rb = psd_sqrt(a), psd_sqrt(b)
    d = a.shape[0]
    lhs = pad_top_left(a + b, 2 * d, 2 * d)
    rhs = direct_sum([a + matrix_abs(rb @ ra), b + matrix_abs(ra @ rb)])
    return lhs, rhs


def _cor_2_7(x):
    a, b = x["a"], x["b"]
    d = a.shape[0]
    rhs = direct_sum([matrix_abs(m) + _opnorm(m) * identity(d) for m in (a, b)])
    return a + b, rhs


def _lemma_2_6(x):
    a, b, c, d = x["a"], x["b"], x["c"], x["d"]
    lhs = assemble([[a, b], [c, d]])
    rhs = np.array([[_opnorm(a), _opnorm(b)], [_opnorm(c), _opnorm(d)]], dtype=np.complex128)
    return lhs, rhs


def _cor_2_8a(x):
    a = x["a"]
    bound = _opnorm(a @ a) + _opnorm(a) ** 2
    return a @ _adj(a) + _adj(a) @ a, np.array([[bound]], dtype=np.complex128)


def _cor_2_8b(x):
    a = x["a"]
    return a @ _adj(a) - _adj(a) @ a, np.array([[_opnorm(a) ** 2]], dtype=np.complex128)


# -- auxiliary checks: the "in particular" forms and intermediate proof steps


def _schatten_checks(lhs_s, rhs_s, ps, tol, prefix="schatten"):
    out = {}
    for p in ps:
        f = NormFamily.schatten(p)
        out[f"{prefix}:{p:g}"] = SubCheck(
            norm_from_spectrum(lhs_s, f), norm_from_spectrum(rhs_s, f), tol)
    return out


def _cor_2_3_checks(x, ctx):
    lhs, rhs = _cor_2_3(x)
    s_l, s_r = singular_values(lhs), singular_values(rhs)
    return _schatten_checks(s_l, s_r, ctx["schatten_ps"], default_tol(s_r, ctx["tol_scale"]))


def _cor_2_5_checks(x, ctx):
    alt = x["p1"] - x["p2"] + x["p3"] - x["p4"]
    s_alt = singular_values(alt)
    spectra = [singular_values(b) for b in _cor_2_5_blocks(x)]
    tol = ctx["tol_scale"] * max(1.0, sum(float(np.sum(s)) for s in spectra))
    out = {"operator_max_form": SubCheck(float(s_alt[0]), max(float(s[0]) for s in spectra), tol)}
    for p in ctx["schatten_ps"]:
        if math.isinf(p):
            continue
        f = NormFamily.schatten(p)
        total = sum(norm_from_spectrum(s, f) ** p for s in spectra) ** (1.0 / p)
        out[f"schatten_sum_form:{p:g}"] = SubCheck(norm_from_spectrum(s_alt, f), total, tol)
    return out


def cor_2_6_blocks(a):
    """Matrices from the positive-sum proof: ``(T, D, C, M)``.

    ``T`` has blocks ``A_i^{1/2} A_j^{1/2}``, ``D`` is the direct sum of
    ``A_i + (n-1)||A_i|| I``, ``C`` has ``(n-1) A_i`` on the diagonal and
    ``-A_i^{1/2} A_j^{1/2}`` off it, and ``M`` has ``(n-1) A_i^{1/2}`` on the
    diagonal and ``-A_i^{1/2}`` elsewhere in block row ``i``, so that
    ``n C = M M*``.
    """
    n = len(a)
    d = a[0].shape[0]
    roots = [psd_sqrt(ai) for ai in a]
    t = assemble([[roots[i] @ roots[j] for j in range(n)] for i in range(n)])
    dmat = direct_sum([ai + (n - 1) * _opnorm(ai) * identity(d) for ai in a])
    c = assemble([
        [(n - 1) * a[i] if i == j else -(roots[i] @ roots[j]) for j in range(n)]
        for i in range(n)
    ])
    m = assemble([[(n - 1) * roots[i] if i == j else -roots[i] for j in range(n)] for i in range(n)])
    return t, dmat, c, m


def _cor_2_6_checks(x, ctx):
    a = x["a"]
    n = len(a)
    t, dmat, c, m = cor_2_6_blocks(a)
    c_norm = _opnorm(c)
    c_fro = float(np.linalg.norm(c))
    c_psd = is_psd(0.5 * (c + _adj(c)))
    gap_psd = is_psd(0.5 * ((dmat - t) + _adj(dmat - t)))
    factor_err = float(np.max(np.abs(n * c - m @ _adj(m))))
    sum_norm = _opnorm(sum(a))
    return {
        "c_psd": SubCheck(-c_psd.min_eigenvalue, 0.0, PROOF_TOL * max(c_norm, 1e-300)),
        "factorization": SubCheck(factor_err, 0.0, PROOF_TOL * max(c_fro, 1e-300)),
        "block_bound": SubCheck(-gap_psd.min_eigenvalue, 0.0, PROOF_TOL * max(1.0, _opnorm(dmat))),
        "gram_step": SubCheck(sum_norm, _opnorm(t), ctx["tol_scale"] * max(1.0, _opnorm(t))),
    }


def _cor_2_7_checks(x, ctx):
    a, b = x["a"], x["b"]
    na, nb = _opnorm(a), _opnorm(b)
    stated = max(_opnorm(matrix_abs(a) + na * identity(a.shape[0])),
                 _opnorm(matrix_abs(b) + nb * identity(b.shape[0])))
    simplified = 2 * max(na, nb)
    abs_sum = _opnorm(matrix_abs(a) + matrix_abs(b))
    scale = max(1.0, stated)
    return {
        "abs_step": SubCheck(_opnorm(a + b), abs_sum, ctx["tol_scale"] * scale),
        "simplified_form": SubCheck(abs(stated - simplified), 0.0, 1e-9 * scale),
    }


def _cor_2_8_radius(x, ctx):
    a = x["a"]
    n1, n2 = _opnorm(a) ** 2, _opnorm(a @ a)
    r = _opnorm(np.array([[n1, n2], [n2, n1]], dtype=np.complex128))
    return SubCheck(abs(r - (n1 + n2)), 0.0, RADIUS_TOL * max(1.0, n1 + n2))


def _cor_2_8a_checks(x, ctx):
    a = x["a"]
    lhs = _opnorm(a @ _adj(a) + _adj(a) @ a)
    block = _opnorm(assemble([[_adj(a) @ a, _adj(a @ a)], [a @ a, a @ _adj(a)]]))
    return {
        "block_step": SubCheck(lhs, block, ctx["tol_scale"] * max(1.0, block)),
        "spectral_radius": _cor_2_8_radius(x, ctx),
    }


def _cor_2_8b_checks(x, ctx):
    a = x["a"]
    lhs = _opnorm(a @ _adj(a) - _adj(a) @ a)
    block = _opnorm(direct_sum([_adj(a) @ a, a @ _adj(a)]))
    return {"block_step": SubCheck(lhs, block, ctx["tol_scale"] * max(1.0, block))}


def _slots(*names, kind="general", per_block=False):
    return tuple(Slot(n, kind, per_block) for n in names)


_ALL = Mode.ALL_UI_NORMS
_OP = Mode.OPERATOR_NORM_ONLY

CASES: dict[str, InequalityCase] = {
    c.id: c
    for c in [
        InequalityCase("prop_1_3", _slots("a"), _ALL, _prop_1_3, mutual=True,
                       summary="A (+) A* and A (+) A have equal norms"),
        InequalityCase("prop_1_4", _slots("a", "b"), _ALL, _prop_1_4, mutual=True,
                       summary="A (+) B and [[0, A], [B, 0]] have equal norms"),
        InequalityCase("prop_1_5", _slots("a"), _ALL, _prop_1_5, mutual=True,
                       summary="AA* and A*A have equal norms"),
        InequalityCase("lemma_2_1", _slots("a", "b", "x"), _ALL, _lemma_2_1,
                       summary="2|||AXB*||| <= |||A*AX + XB*B|||"),
        InequalityCase("thm_2_2", _slots("a", "b", "x", per_block=True), _ALL, _thm_2_2,
                       n_ary=True, summary="block-matrix bound on 2|||sum A_i X_i B_i*|||"),
        InequalityCase("ineq_1_9", _slots("a1", "a2", "b1", "b2", "x", "y"), _ALL, _ineq_1_9,
                       summary="two-term block bound, n=2 instance of thm_2_2"),
        InequalityCase("cor_2_3", _slots("a", per_block=True), _ALL, _cor_2_3,
                       checks=_cor_2_3_checks, n_ary=True, min_blocks=2,
                       summary="|||A1A2* + ... + AnA1*||| <= |||sum A_i A_i*|||"),
        InequalityCase("ineq_1_10", _slots("a", "b"), _ALL, _ineq_1_10,
                       summary="|||A*B + B*A||| <= |||A*A + B*B|||"),
        InequalityCase("lemma_2_4", _slots("a", "b", kind="normal"), _ALL, _lemma_2_4,
                       summary="|||A + B||| <= ||| |A| + |B| ||| for normal A, B"),
        InequalityCase("cor_2_5", _slots("p1", "p2", "p3", "p4", kind="projection"), _ALL,
                       _cor_2_5, checks=_cor_2_5_checks,
                       summary="alternating sum of four projections"),
        InequalityCase("cor_2_6", _slots("a", kind="positive", per_block=True), _OP, _cor_2_6,
                       checks=_cor_2_6_checks, n_ary=True, min_blocks=2,
                       summary="||sum A_i|| <= max ||A_i + (n-1)||A_i|| I|| for positive A_i"),
        InequalityCase("ineq_1_12", _slots("a", "b", kind="positive"), _ALL, _ineq_1_12,
                       summary="|||(A+B) (+) 0||| bound for positive A, B"),
        InequalityCase("cor_2_7", _slots("a", "b", kind="normal"), _OP, _cor_2_7,
                       checks=_cor_2_7_checks,
                       summary="||A + B|| <= max(|| |A| + ||A|| ||, || |B| + ||B|| ||)"),
        InequalityCase("lemma_2_6", _slots("a", "b", "c", "d"), _OP, _lemma_2_6,
                       summary="2x2 block norm bounded by the matrix of block norms"),
        InequalityCase("cor_2_8a", _slots("a"), _OP, _cor_2_8a, checks=_cor_2_8a_checks,
                       summary="||AA* + A*A|| <= ||A^2|| + ||A||^2"),
        InequalityCase("cor_2_8b", _slots("a"), _OP, _cor_2_8b, checks=_cor_2_8b_checks,
                       summary="||AA* - A*A|| <= ||A||^2"),
    ]
}
CASE_IDS = tuple(CASES)


def get_case(case_id: str) -> InequalityCase:
    try:
        return CASES[case_id]
    except KeyError:
        raise KeyError(f"unknown case id {case_id!r}") from None


def _resolve(case) -> InequalityCase:
    return case if isinstance(case, InequalityCase) else get_case(case)


def sample(case, d: int, n: int, rng: np.random.Generator) -> dict:
    """Draw inputs for ``case`` at dimension ``d`` with ``n`` blocks."""
    case = _resolve(case)
    if n < case.min_blocks or (not case.n_ary and n != 1):
        raise ValueError(f"{case.id} does not accept block count {n}")
    inputs = {}
    for slot in case.slots:
        if slot.per_block:
            inputs[slot.name] = [random_of_class(slot.kind, d, rng) for _ in range(n)]
        else:
            inputs[slot.name] = random_of_class(slot.kind, d, rng)
    return inputs


def identity_inputs(case, d: int, n: int = 1) -> dict:
    """Every input set to the identity, which belongs to every input class."""
    case = _resolve(case)
    return {
        s.name: [identity(d) for _ in range(n)] if s.per_block else identity(d)
        for s in case.slots
    }


def build(case, inputs: dict):
    return _resolve(case).build(inputs)


def _combine(v1: DominanceVerdict, v2: DominanceVerdict) -> DominanceVerdict:
    return v1 if v1.margin + v1.tol <= v2.margin + v2.tol else v2


def _fan_cross_check(s_l, s_r, ps, tol) -> SubCheck:
    """Largest excess of an individual Schatten or Ky Fan comparison."""
    worst = -math.inf
    families = [NormFamily.schatten(p) for p in ps]
    families += [NormFamily.kyfan(k) for k in range(1, max(s_l.size, s_r.size) + 1)]
    for f in families:
        k = f.param if f.kind == "kyfan" else None
        lhs_s = s_l if k is None or k <= s_l.size else np.pad(s_l, (0, k - s_l.size))
        rhs_s = s_r if k is None or k <= s_r.size else np.pad(s_r, (0, k - s_r.size))
        worst = max(worst, norm_from_spectrum(lhs_s, f) - norm_from_spectrum(rhs_s, f))
    return SubCheck(worst, 0.0, tol)


def evaluate(case, inputs: dict, tol_scale: float = 1e-8,
             schatten_ps=DEFAULT_SCHATTEN_PS) -> Evaluation:
    """Build both sides and compare them under the case's mode."""
    case = _resolve(case)
    lhs, rhs = case.build(inputs)
    s_l, s_r = singular_values(lhs), singular_values(rhs)
    lhs_norm, rhs_norm = float(s_l[0]), float(s_r[0])
    checks = {}
    ps = tuple(sorted(set(DEFAULT_SCHATTEN_PS) | set(schatten_ps)))
    if case.mode is Mode.ALL_UI_NORMS:
        tol = default_tol(s_r, tol_scale)
        verdict = weakly_majorizes(s_l, s_r, tol)
        if verdict.holds:
            checks["fan_cross_check"] = _fan_cross_check(s_l, s_r, ps, tol)
        if case.mutual:
            back_tol = default_tol(s_l, tol_scale)
            back = weakly_majorizes(s_r, s_l, back_tol)
            if back.holds:
                checks["fan_cross_check_reverse"] = _fan_cross_check(s_r, s_l, ps, back_tol)
            verdict = _combine(verdict, back)
    elif case.mode is Mode.OPERATOR_NORM_ONLY:
        tol = tol_scale * max(1.0, rhs_norm)
        margin = rhs_norm - lhs_norm
        verdict = DominanceVerdict(margin >= -tol, 1, margin, tol)
    else:
        tol = default_tol(s_r, tol_scale)
        parts = _schatten_checks(s_l, s_r, case.schatten_ps or tuple(schatten_ps), tol)
        worst = min(c.rhs - c.lhs for c in parts.values())
        verdict = DominanceVerdict(worst >= -tol, 1, worst, tol)
        checks.update(parts)
    if case.checks is not None:
        ctx = {"tol_scale": tol_scale, "schatten_ps": tuple(schatten_ps)}
        checks.update(case.checks(inputs, ctx))
    return Evaluation(verdict, lhs_norm, rhs_norm, checks)

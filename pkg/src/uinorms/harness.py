"""Campaign execution, replay and tightness search."""

from __future__ import annotations

import hashlib
import json
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .catalog import CASE_IDS, DEFAULT_SCHATTEN_PS, TrialOutcome, evaluate, get_case, identity_inputs, sample
from .ensembles import PRNG_NAME, ginibre, make_rng, parse_seed, project_to_class
from .exceptions import ConfigError, DigestError, UINormsError
from .spectral import DEFAULT_TOL, jacobi_tolerance

__all__ = [
    "CampaignConfig",
    "make_digest",
    "parse_digest",
    "run_trial",
    "run_campaign",
    "replay",
    "tightness_search",
    "TIMESTAMP_FIELDS",
]

TIMESTAMP_FIELDS = ("started_at", "wall_time_s")
RERUN_TOL = DEFAULT_TOL / 10


def _parse_p(value) -> float:
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
        return math.inf
    p = float(value)
    if not p >= 1:
        raise ConfigError(f"Schatten p must be >= 1, got {value!r}")
    return p


@dataclass
class CampaignConfig:
    seed: int = 0
    trials_per_case: int = 500
    dims: list[int] = field(default_factory=lambda: [2, 3, 4, 6, 8])
    block_counts: list[int] = field(default_factory=lambda: [1, 2, 3, 5])
    schatten_ps: list[float] = field(default_factory=lambda: list(DEFAULT_SCHATTEN_PS))
    tol_scale: float = 1e-8
    cases: list[str] | str = "all"

    def __post_init__(self):
        self.validate()

    def validate(self):
        self.seed = parse_seed(self.seed)
        if isinstance(self.trials_per_case, bool) or int(self.trials_per_case) != self.trials_per_case \
                or self.trials_per_case < 1:
            raise ConfigError(f"trials_per_case must be a positive integer, got {self.trials_per_case!r}")
        self.trials_per_case = int(self.trials_per_case)
        for name in ("dims", "block_counts"):
            values = getattr(self, name)
            if not values or any(int(v) != v or v < 1 for v in values):
                raise ConfigError(f"{name} must be a non-empty list of positive integers, got {values!r}")
            setattr(self, name, [int(v) for v in values])
        self.schatten_ps = [_parse_p(p) for p in self.schatten_ps]
        if not (self.tol_scale > 0 and math.isfinite(self.tol_scale)):
            raise ConfigError(f"tol_scale must be positive, got {self.tol_scale!r}")
        if self.cases == "all" or self.cases == ["all"]:
            self.cases = "all"
        else:
            unknown = [c for c in self.cases if c not in CASE_IDS]
            if unknown:
                raise ConfigError(f"unknown case ids: {', '.join(unknown)}")
            if not self.cases:
                raise ConfigError("no cases selected")
            self.cases = list(self.cases)

    @property
    def case_ids(self) -> list[str]:
        return list(CASE_IDS) if self.cases == "all" else list(self.cases)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials_per_case": self.trials_per_case,
            "dims": self.dims,
            "block_counts": self.block_counts,
            "schatten_ps": [p if math.isfinite(p) else "inf" for p in self.schatten_ps],
            "tol_scale": self.tol_scale,
            "cases": self.cases,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CampaignConfig":
        if "config" in obj and isinstance(obj["config"], dict):
            obj = obj["config"]  # a report echoes its config
        known = set(cls.__dataclass_fields__)
        extra = set(obj) - known
        if extra:
            raise ConfigError(f"unknown config fields: {', '.join(sorted(extra))}")
        try:
            return cls(**obj)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path) -> "CampaignConfig":
        try:
            with open(path) as fh:
                return cls.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None


# -- digests: "<case>:d<d>:n<n>:t<trial>:<check>", check tied to the seed


def _check(seed: int, case: str, d: int, n: int, trial: int) -> str:
    return hashlib.sha256(f"{seed}|{case}|{d}|{n}|{trial}".encode()).hexdigest()[:12]


def make_digest(seed: int, case: str, d: int, n: int, trial: int) -> str:
    return f"{case}:d{d}:n{n}:t{trial}:{_check(seed, case, d, n, trial)}"


_DIGEST = re.compile(r"^([a-z0-9_]+):d(\d+):n(\d+):t(\d+):([0-9a-f]{12})$")


def parse_digest(digest: str, seed: int) -> tuple[str, int, int, int]:
    m = _DIGEST.match(digest.strip())
    if m is None:
        raise DigestError(f"malformed digest {digest!r}")
    case, d, n, trial, check = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4)), m.group(5)
    if case not in CASE_IDS:
        raise DigestError(f"digest names unknown case {case!r}")
    if check != _check(seed, case, d, n, trial):
        raise DigestError(f"digest {digest!r} does not match seed {seed}")
    return case, d, n, trial


def run_trial(case_id: str, d: int, n: int, trial: int, config: CampaignConfig) -> TrialOutcome:
    """Sample and evaluate one trial; failures are re-checked at a tighter Jacobi tolerance."""
    digest = make_digest(config.seed, case_id, d, n, trial)
    case = get_case(case_id)

    def attempt():
        rng = make_rng(config.seed, case_id, d, n, trial)
        inputs = sample(case, d, n, rng)
        return evaluate(case, inputs, config.tol_scale, config.schatten_ps)

    try:
        ev = attempt()
        if ev.holds:
            return TrialOutcome.from_evaluation(case_id, d, n, digest, ev)
        with jacobi_tolerance(RERUN_TOL):
            ev = attempt()
        return TrialOutcome.from_evaluation(case_id, d, n, digest, ev, rerun=True)
    except UINormsError as exc:
        return TrialOutcome(case_id, d, n, digest, error=f"{type(exc).__name__}: {exc}")


def _units(config: CampaignConfig):
    for case_id in config.case_ids:
        case = get_case(case_id)
        for d in config.dims:
            for n in case.block_counts(config.block_counts):
                yield case_id, d, n


def _run_unit(args):
    case_id, d, n, config = args
    return [run_trial(case_id, d, n, t, config) for t in range(config.trials_per_case)]


def _summarize(outcomes: list[TrialOutcome]) -> dict:
    violations = [o for o in outcomes if o.error is None and not o.holds]
    errors = [o for o in outcomes if o.error is not None]
    resolved = [o for o in outcomes if o.rerun and o.holds]
    ok = [o for o in outcomes if o.error is None]
    summary = {
        "trials": len(outcomes),
        "grid": sorted({(o.d, o.n) for o in outcomes}),
        "violations": len(violations),
        "violation_digests": [o.digest for o in violations],
        "errors": len(errors),
        "error_digests": [o.digest for o in errors],
        "resolved_on_rerun": [o.digest for o in resolved],
        "max_ratio": None,
        "max_ratio_digest": None,
        "min_margin": None,
        "min_margin_digest": None,
    }
    if ok:
        # ties resolve to the earliest trial in campaign order
        best = max(enumerate(ok), key=lambda io: (io[1].ratio, -io[0]))[1]
        tight = min(enumerate(ok), key=lambda io: (io[1].verdict.margin, io[0]))[1]
        summary.update(
            max_ratio=best.to_dict()["ratio"],
            max_ratio_digest=best.digest,
            min_margin=tight.to_dict()["verdict"]["margin"],
            min_margin_digest=tight.digest,
        )
    summary["grid"] = [list(g) for g in summary["grid"]]
    return summary


def run_campaign(config: CampaignConfig, jobs: int = 1) -> dict:
    """Run every selected case over the configured grid and aggregate a report.

    The report is a JSON-ready dict. Apart from ``started_at`` and
    ``wall_time_s`` it is a pure function of ``config``.
    """
    config.validate()
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    units = list(_units(config))
    work = [(case_id, d, n, config) for case_id, d, n in units]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_unit, work))
    else:
        results = [_run_unit(w) for w in work]
    per_case: dict[str, list[TrialOutcome]] = {c: [] for c in config.case_ids}
    for (case_id, _, _), outcomes in zip(units, results):
        per_case[case_id].extend(outcomes)
    cases = {c: _summarize(o) for c, o in per_case.items()}
    return {
        "config": config.to_dict(),
        "environment": {
            "tool": "uinorms",
            "tool_version": __version__,
            "prng": PRNG_NAME,
            "numpy_version": np.__version__,
            "jacobi_tol": DEFAULT_TOL,
            "rerun_jacobi_tol": RERUN_TOL,
        },
        "cases": cases,
        "total_trials": sum(s["trials"] for s in cases.values()),
        "total_violations": sum(s["violations"] for s in cases.values()),
        "total_errors": sum(s["errors"] for s in cases.values()),
        "started_at": started.isoformat(),
        "wall_time_s": round(time.perf_counter() - t0, 3),
    }


def replay(digest: str, config: CampaignConfig) -> TrialOutcome:
    """Regenerate and re-evaluate the trial named by ``digest``."""
    case_id, d, n, trial = parse_digest(digest, config.seed)
    return run_trial(case_id, d, n, trial, config)


# -- tightness search


def _perturb(inputs: dict, case, step: float, rng) -> dict:
    kinds = {s.name: s.kind for s in case.slots}
    out = {}
    for name, value in inputs.items():
        kind = kinds[name]
        if isinstance(value, list):
            out[name] = [project_to_class(kind, m + step * ginibre(m.shape[0], rng)) for m in value]
        else:
            out[name] = project_to_class(kind, value + step * ginibre(value.shape[0], rng))
    return out


def tightness_search(case_id: str, budget: int, d: int, seed: int = 0, n: int | None = None,
                     tol_scale: float = 1e-8, restarts: int = 5,
                     identity_start: bool = True):
    """Random-restart hill climbing on the tightness ratio LHS/RHS.

    With ``identity_start`` the first start sets every input to the
    identity; all other starts are fresh random draws. From each start, inputs are perturbed by complex Gaussian
    steps of decaying size and projected back onto their class, and a move
    is kept when the ratio increases. ``budget`` counts evaluations.

    Returns ``(outcome, inputs)`` for the best point found. A best point
    that fails its verdict is reported as-is, so callers see the violation.
    """
    if budget < 1:
        raise ConfigError("budget must be at least 1")
    case = get_case(case_id)
    if n is None:
        n = max(case.min_blocks, 2) if case.n_ary else 1
    if n < case.min_blocks or (not case.n_ary and n != 1):
        raise ConfigError(f"{case_id} does not accept block count {n}")
    seed = parse_seed(seed)
    rng = make_rng(seed, "tightness:" + case_id, d, n, budget)

    def score(inputs):
        ev = evaluate(case, inputs, tol_scale)
        return ev.ratio if math.isfinite(ev.ratio) else math.inf, ev

    best = None  # (ratio, evaluation, inputs, index)
    used = 0
    per_start = max(1, budget // restarts)
    start = 0
    while used < budget:
        if identity_start and start == 0 and budget > 1:
            current = identity_inputs(case, d, n)
        else:
            current = sample(case, d, n, rng)
        cur_ratio, cur_ev = score(current)
        used += 1
        if best is None or cur_ratio > best[0]:
            best = (cur_ratio, cur_ev, current, used)
        steps = min(per_start, budget - used) if used < budget else 0
        for i in range(steps):
            size = 0.3 * (1.0 - i / steps) + 1e-3
            cand = _perturb(current, case, size, rng)
            try:
                r, ev = score(cand)
            except UINormsError:
                used += 1
                continue
            used += 1
            if r > cur_ratio:
                current, cur_ratio, cur_ev = cand, r, ev
                if r > best[0]:
                    best = (r, ev, cand, used)
            if not ev.holds:
                best = (r, ev, cand, used)
                break
        if not best[1].holds:
            break
        start += 1
    ratio, ev, inputs, index = best
    digest = f"tightness:{case_id}:d{d}:n{n}:s{seed}:b{budget}:e{index}"
    return TrialOutcome.from_evaluation(case_id, d, n, digest, ev), inputs

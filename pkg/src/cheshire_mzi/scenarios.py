"""Preset experiments and the (theta, phi) sweep engine."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import optics
from .errors import NoPostselectedEvents, VanishingOverlap, ZeroProbability
from .operators import observable
from .weak import (
    DEFAULT_G,
    EPS_OVERLAP,
    MAX_G,
    Method,
    WeakValue,
    delayed_overlap,
    weak_value,
)

ARM_TAGS = ("xL", "xR", "zL", "zR")
POLE_THRESHOLD = 10 * EPS_OVERLAP

CSV_COLUMNS = (
    "theta",
    "phi",
    "xL_re",
    "xL_im",
    "xR_re",
    "xR_im",
    "zL_re",
    "zL_im",
    "zR_re",
    "zR_im",
    "prob",
    "flag",
)


class Scenario(str, enum.Enum):
    ORIGINAL_CHESHIRE = "original"
    GRIN_SNARL = "grin-snarl"
    DELAYED_CHOICE = "delayed"


@dataclass(frozen=True)
class ExperimentConfig:
    theta: float = 0.0
    phi: float = 0.0
    g: float = DEFAULT_G
    shots: int = 0
    seed: int = 0
    scenario: Scenario = Scenario.DELAYED_CHOICE
    method: Method = Method.ANALYTIC

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("tuner angles must be finite")
        if not 0 < self.g <= MAX_G:
            raise ValueError(f"g must lie in (0, {MAX_G}], got {self.g!r}")
        if self.shots < 0:
            raise ValueError("shots must be nonnegative")
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        object.__setattr__(self, "method", Method(self.method))


@dataclass(frozen=True)
class SweepRow:
    """Four arm-resolved weak values at one tuner setting.

    Diverged rows (pre/post overlap at a pole) carry ``None`` weak values.
    """

    theta: float
    phi: float
    xL: complex | None
    xR: complex | None
    zL: complex | None
    zR: complex | None
    prob: float
    method: Method
    diverged: bool = False
    stderr: dict[str, float] | None = field(default=None, compare=False)

    @property
    def flag(self) -> str:
        return "diverged" if self.diverged else "ok"

    def values(self) -> tuple:
        return (self.xL, self.xR, self.zL, self.zR)

    def as_record(self) -> dict:
        rec = {"theta": self.theta, "phi": self.phi}
        for tag, v in zip(ARM_TAGS, self.values()):
            rec[f"{tag}_re"] = None if v is None else float(v.real)
            rec[f"{tag}_im"] = None if v is None else float(v.imag)
        rec["prob"] = self.prob
        rec["flag"] = self.flag
        return rec


class SweepTable(list):
    """Ordered list of :class:`SweepRow` with CSV/JSON serialization."""

    @property
    def flagged(self) -> int:
        return sum(r.diverged for r in self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self:
            rec = row.as_record()
            w.writerow(["" if rec[c] is None else _fmt(rec[c]) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps([r.as_record() for r in self], indent=1) + "\n"


def _fmt(x) -> str:
    return x if isinstance(x, str) else repr(float(x))


@dataclass(frozen=True)
class ScenarioReport:
    scenario: Scenario
    method: Method
    values: dict[str, WeakValue]

    def __getitem__(self, tag: str) -> complex:
        return self.values[tag].value

    def as_record(self) -> dict:
        rec = {"scenario": self.scenario.value, "method": self.method.value}
        for tag, wv in self.values.items():
            rec[f"{tag}_re"] = float(wv.value.real)
            rec[f"{tag}_im"] = float(wv.value.imag)
            if wv.stderr is not None:
                rec[f"{tag}_stderr"] = wv.stderr
        return rec


def _report(scenario, tags, method, g, shots, seed) -> ScenarioReport:
    pre, post = optics.prepare_original(), optics.postselector("original")
    method = Method(method)
    seeds = np.random.SeedSequence(seed).spawn(len(tags))
    values = {
        tag: weak_value(observable(tag), pre, post, method, g, shots, s)
        for tag, s in zip(tags, seeds)
    }
    return ScenarioReport(scenario, method, values)


def run_original_cheshire(method=Method.ANALYTIC, g=DEFAULT_G, shots=0, seed=0) -> ScenarioReport:
    """Photon in the left arm, its sigma_x polarization in the right."""
    return _report(Scenario.ORIGINAL_CHESHIRE, ("piL", "piR", "xL", "xR"), method, g, shots, seed)


def run_grin_snarl(method=Method.ANALYTIC, g=DEFAULT_G, shots=0, seed=0) -> ScenarioReport:
    """sigma_x and sigma_z components resolved by arm for the original pair."""
    return _report(Scenario.GRIN_SNARL, ARM_TAGS, method, g, shots, seed)


def run_delayed_choice(cfg: ExperimentConfig) -> SweepRow:
    """Arm-resolved weak values for the tuner setting in ``cfg``.

    A pole (vanishing pre/post overlap) produces a row flagged ``diverged``.
    """
    D = delayed_overlap(cfg.theta, cfg.phi)
    prob = float(abs(D) ** 2 / 4)
    diverged = SweepRow(cfg.theta, cfg.phi, None, None, None, None, prob, cfg.method, True)
    if abs(D) < POLE_THRESHOLD:
        return diverged
    pre = optics.prepare_delayed(cfg.theta, cfg.phi)
    post = optics.postselector("delayed")
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(ARM_TAGS))
    try:
        wvs = [
            weak_value(observable(tag), pre, post, cfg.method, cfg.g, cfg.shots, s)
            for tag, s in zip(ARM_TAGS, seeds)
        ]
    except (VanishingOverlap, ZeroProbability, NoPostselectedEvents):
        return diverged
    stderr = None
    if cfg.method == Method.METER_SAMPLED:
        stderr = {tag: wv.stderr for tag, wv in zip(ARM_TAGS, wvs)}
    return SweepRow(cfg.theta, cfg.phi, *(wv.value for wv in wvs), prob, cfg.method, False, stderr)


@dataclass(frozen=True)
class FlipReport:
    flipped: bool
    arms_a: dict[str, str | None]
    arms_b: dict[str, str | None]
    sigma_z_right_b: complex | None
    rows: tuple[SweepRow, SweepRow]
    estimates_consistent: bool = True

    def __bool__(self):
        return self.flipped


def _arms(row: SweepRow, tol: float) -> dict[str, str | None]:
    """Which arm carries a unit-magnitude x / z weak value, the other vanishing."""
    out = {}
    for comp in ("x", "z"):
        left, right = getattr(row, comp + "L"), getattr(row, comp + "R")
        if left is None:
            out[comp] = None
        elif abs(abs(left) - 1) <= tol and abs(right) <= tol:
            out[comp] = "L"
        elif abs(abs(right) - 1) <= tol and abs(left) <= tol:
            out[comp] = "R"
        else:
            out[comp] = None
    return out


def flip_check(
    a: tuple[float, float] = (0.0, 0.0),
    b: tuple[float, float] = (math.pi, 0.0),
    method=Method.ANALYTIC,
    g: float = DEFAULT_G,
    shots: int = 0,
    seed: int = 0,
    tol: float = 1e-12,
) -> FlipReport:
    """Do the x and z components swap arms between tuner settings ``a`` and ``b``?

    Arm assignments come from the analytic rows.  For the meter routes the
    estimates must also sit near those targets: within ``5 g`` for the exact
    meter, within ``4 stderr`` for sampling.
    """
    method = Method(method)
    exact = [run_delayed_choice(ExperimentConfig(t, p)) for t, p in (a, b)]
    arms_a, arms_b = _arms(exact[0], tol), _arms(exact[1], tol)
    flipped = (
        None not in arms_a.values()
        and arms_a["x"] != arms_a["z"]
        and arms_a["x"] == arms_b["z"]
        and arms_a["z"] == arms_b["x"]
    )
    rows = tuple(exact)
    consistent = True
    if method != Method.ANALYTIC:
        seeds = np.random.SeedSequence(seed).generate_state(2)
        rows = tuple(
            run_delayed_choice(ExperimentConfig(t, p, g, shots, int(s), method=method))
            for (t, p), s in zip((a, b), seeds)
        )
        for est, ref in zip(rows, exact):
            if est.diverged:
                consistent = False
                continue
            for tag in ARM_TAGS:
                bound = 4 * est.stderr[tag] if method == Method.METER_SAMPLED else 5 * g
                consistent &= abs(getattr(est, tag) - getattr(ref, tag)) < bound
    return FlipReport(
        flipped=bool(flipped and consistent),
        arms_a=arms_a,
        arms_b=arms_b,
        sigma_z_right_b=exact[1].zR,
        rows=rows,
        estimates_consistent=bool(consistent),
    )


def sweep(
    theta_grid,
    phi_grid,
    method=Method.ANALYTIC,
    g: float = DEFAULT_G,
    shots: int = 0,
    seed: int = 0,
    max_workers: int | None = None,
) -> SweepTable:
    """One row per (theta, phi) grid point, theta-major, poles flagged.

    Sampled rows draw from seeds derived from ``seed`` and the grid index, so
    results do not depend on ``max_workers``.
    """
    theta_grid = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    phi_grid = np.atleast_1d(np.asarray(phi_grid, dtype=float))
    if theta_grid.size == 0 or phi_grid.size == 0:
        raise ValueError("sweep grids must be nonempty")
    points = [(float(t), float(p)) for t in theta_grid for p in phi_grid]
    seeds = np.random.SeedSequence(seed).generate_state(len(points))
    configs = [
        ExperimentConfig(t, p, g, shots, int(s), method=method)
        for (t, p), s in zip(points, seeds)
    ]
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            return SweepTable(pool.map(run_delayed_choice, configs))
    return SweepTable(map(run_delayed_choice, configs))


@dataclass(frozen=True)
class MeasureResult:
    """Weak value of one observable for a chosen pre/post pair."""

    observable: str
    method: Method
    theta: float
    phi: float
    value: complex | None
    prob: float
    stderr: float | None = None
    diverged: bool = False
    line: int | None = field(default=None, compare=False)

    @property
    def flag(self) -> str:
        return "diverged" if self.diverged else "ok"

    def as_record(self) -> dict:
        v = self.value
        return {
            "line": self.line,
            "observable": self.observable,
            "method": self.method.value,
            "theta": self.theta,
            "phi": self.phi,
            "re": None if v is None else float(v.real),
            "im": None if v is None else float(v.imag),
            "stderr": self.stderr,
            "prob": self.prob,
            "flag": self.flag,
        }


MEASURE_COLUMNS = ("line", "observable", "method", "theta", "phi", "re", "im", "stderr", "prob", "flag")


def measure_one(
    tag: str,
    cfg: ExperimentConfig,
    pre_variant: str = "delayed",
    post_variant: str = "delayed",
) -> MeasureResult:
    """Weak value of ``tag`` with pole handling as in :func:`run_delayed_choice`."""
    pre = optics.preselector(pre_variant, cfg.theta, cfg.phi)
    post = optics.postselector(post_variant)
    overlap = complex(np.vdot(post.amplitudes, pre.permute(post.labels).amplitudes))
    prob = abs(overlap) ** 2
    diverged = MeasureResult(tag, cfg.method, cfg.theta, cfg.phi, None, prob, diverged=True)
    # same threshold as the sweep: |D| = 2 |<post|pre>|
    if 2 * abs(overlap) < POLE_THRESHOLD:
        return diverged
    try:
        wv = weak_value(observable(tag), pre, post, cfg.method, cfg.g, cfg.shots, cfg.seed)
    except (VanishingOverlap, ZeroProbability, NoPostselectedEvents):
        return diverged
    return MeasureResult(tag, cfg.method, cfg.theta, cfg.phi, wv.value, prob, wv.stderr)


def records_to_csv(records: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for rec in records:
        w.writerow([_cell(rec[c]) for c in columns])
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)

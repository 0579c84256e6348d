"""Seeded experiment pipelines comparing renders against collision checking.

Two sweeps are provided:

* :func:`run_accuracy_experiment` replaces a growing fraction of free
  states by colliding ones and correlates the checker accuracy with the
  render-based accuracy (one minus the set-subtraction mismatch ratio).
* :func:`run_subset_experiment` drops a growing fraction of the data and
  reports the per-pixel MSE of each subset render against the full render.

Every random draw is derived from ``(config.seed, workspace index, step)``
so a report is a pure function of its config.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import statistics
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from ._validation import check_fraction
from .core import subsample
from .exceptions import ConfigurationError, ExperimentError, InputError
from .metrics import mse, pixel_setminus
from .planar import (
    COLLISION, FREE, FREE_ONLY, Dataset, PlanarRobot, Workspace, base_blocked, collision_mask, random_workspace,
    sample_colliding, sample_cspace,
)
from .render import RenderConfig, crop_legend, render_dataset
from .stats import fisher_z_mean, pearson

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

ACCURACY_FRACTIONS = tuple(round(0.1 * k, 1) for k in range(1, 11))
SUBSET_FRACTIONS = tuple(round(0.1 * k, 1) for k in range(9, 0, -1))

# stream tags for seed derivation
_WS, _DATA, _INJECT, _SUBSET, _PROBE = 1, 2, 3, 4, 5
_PROBE_SIZE = 2000
_MAX_WS_REDRAWS = 100


def derive_seed(seed: int, *path: int) -> int:
    return int(np.random.SeedSequence([int(seed), *map(int, path)]).generate_state(1, np.uint64)[0] >> 1)


@dataclass(frozen=True)
class ExperimentConfig:
    n_joints: int = 7
    m: int = 10_000
    n_workspaces: int = 10
    n_d: int = 500
    seed: int = 0
    fractions: tuple[float, ...] | None = None
    link_length: float | None = None
    half_width: float = 0.03
    k_obstacles: int = 4
    bounds: tuple[float, float, float, float] = (-1.6, 1.6, -1.6, 1.6)
    radius_range: tuple[float, float] = (0.15, 0.4)
    admit_collision_range: tuple[float, float] = (0.05, 0.95)
    crop_legend: bool = False
    plot_injected: bool = True
    render: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_joints < 2:
            raise ConfigurationError("experiments need at least two joints")
        if self.m <= 0 or self.n_workspaces < 1:
            raise ConfigurationError("m must be > 0 and n_workspaces >= 1")
        if self.fractions is not None:
            object.__setattr__(self, "fractions", tuple(check_fraction(f) for f in self.fractions))
        object.__setattr__(self, "bounds", tuple(self.bounds))
        object.__setattr__(self, "radius_range", tuple(self.radius_range))
        object.__setattr__(self, "admit_collision_range", tuple(self.admit_collision_range))
        if "n_d" in self.render:
            raise ConfigurationError("set n_d on the experiment config, not in render overrides")
        self.render_config()

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown experiment config fields: {sorted(unknown)}")
        d = dict(d)
        if d.get("fractions") is not None:
            d["fractions"] = tuple(d["fractions"])
        return cls(**d)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["fractions"] = list(self.fractions) if self.fractions is not None else None
        out["bounds"] = list(self.bounds)
        out["radius_range"] = list(self.radius_range)
        out["admit_collision_range"] = list(self.admit_collision_range)
        return out

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def robot(self) -> PlanarRobot:
        length = self.link_length if self.link_length is not None else 2.0 / self.n_joints
        return PlanarRobot.uniform(self.n_joints, length, self.half_width)

    def workspace(self, w: int) -> Workspace:
        """Workspace ``w``.

        Scenes are redrawn until an obstacle-free base and a probed collision
        fraction within ``admit_collision_range``; both the free sampling and
        the collision injection need room. After ``_MAX_WS_REDRAWS`` tries
        the last scene is returned and fails downstream.
        """
        robot = self.robot()
        lo, hi = self.admit_collision_range
        for attempt in range(_MAX_WS_REDRAWS):
            ws = random_workspace(derive_seed(self.seed, w, _WS, attempt), self.k_obstacles,
                                  self.bounds, self.radius_range, id=f"ws-{w:03d}")
            if base_blocked(robot, ws):
                continue
            probe = np.random.default_rng(derive_seed(self.seed, w, _PROBE, attempt)).uniform(
                -math.pi, math.pi, size=(_PROBE_SIZE, robot.n_joints))
            if lo <= collision_mask(robot, ws, probe).mean() <= hi:
                break
        return ws

    def render_config(self) -> RenderConfig:
        return RenderConfig.from_dict({**self.render, "n_d": self.n_d})


def inject_collision_states(ds: Dataset, fraction: float, robot: PlanarRobot, ws: Workspace,
                            seed: int) -> Dataset:
    """Replace ``ceil(fraction * m)`` random samples by colliding configurations."""
    if fraction != 0:
        fraction = check_fraction(fraction)
    m = len(ds)
    k = math.ceil(round(fraction * m, 9))
    rng = np.random.default_rng(seed)
    where = np.sort(rng.choice(m, size=k, replace=False)) if k else np.empty(0, dtype=np.int64)
    replacement = sample_colliding(robot, ws, k, rng)
    samples = ds.samples.copy()
    labels = ds.labels.copy()
    samples[where] = replacement
    labels[where] = COLLISION
    return ds.replace(samples, labels)


def checker_accuracy(ds: Dataset) -> float:
    """Fraction of samples the collision checker labels free."""
    if len(ds) == 0:
        raise InputError("empty dataset")
    return float(np.count_nonzero(ds.labels == FREE)) / len(ds)


def visualization_accuracy(perturbed_render, reference_render) -> float:
    """``1 - mismatch_ratio`` of the perturbed render minus the reference."""
    _, stats = pixel_setminus(perturbed_render, reference_render)
    return 1.0 - stats.mismatch_ratio


def _prepare(img: np.ndarray, cfg: ExperimentConfig) -> np.ndarray:
    return crop_legend(img) if cfg.crop_legend else img


def _free_dataset(cfg: ExperimentConfig, w: int, robot: PlanarRobot, ws: Workspace) -> Dataset:
    return sample_cspace(robot, ws, cfg.m, derive_seed(cfg.seed, w, _DATA), FREE_ONLY)


def _provenance(cfg: ExperimentConfig, kind: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "experiment": kind,
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
    }


def run_accuracy_experiment(cfg: ExperimentConfig, image_sink=None) -> dict:
    """Collision-injection sweep; see the module docstring.

    ``image_sink(workspace_index, fraction, image)`` receives every render
    (fraction 0 is the reference) when given.
    """
    fractions = cfg.fractions if cfg.fractions is not None else ACCURACY_FRACTIONS
    robot = cfg.robot()
    rcfg = cfg.render_config()
    # the perturbed render shows everything the (simulated) sampler emitted
    plot_cfg = replace(rcfg, plot_collisions=True) if cfg.plot_injected else rcfg
    records, per_workspace, skipped = [], [], []
    for w in range(cfg.n_workspaces):
        ws = cfg.workspace(w)
        try:
            ds = _free_dataset(cfg, w, robot, ws)
            reference = _prepare(render_dataset(ds, rcfg), cfg)
            if image_sink:
                image_sink(w, 0.0, reference)
            xs, ys = [], []
            ws_records = []
            for k, f in enumerate(fractions):
                injected = inject_collision_states(ds, f, robot, ws, derive_seed(cfg.seed, w, _INJECT, k))
                img = _prepare(render_dataset(injected, plot_cfg), cfg)
                if image_sink:
                    image_sink(w, f, img)
                _, st = pixel_setminus(img, reference)
                ca = checker_accuracy(injected)
                va = 1.0 - st.mismatch_ratio
                xs.append(ca)
                ys.append(va)
                ws_records.append({
                    "workspace": w, "workspace_id": ws.id, "fraction": f,
                    "checker_accuracy": ca, "visualization_accuracy": va,
                    **st.to_dict(),
                })
                del img
        except ExperimentError as exc:
            log.warning("skipping workspace %s: %s", ws.id, exc)
            skipped.append({"workspace": w, "workspace_id": ws.id, "reason": str(exc), "code": exc.code})
            continue
        records.extend(ws_records)
        entry = {"workspace": w, "workspace_id": ws.id, "pearson_r": None}
        try:
            entry["pearson_r"] = pearson(xs, ys)
        except InputError as exc:
            entry["error"] = exc.code
        per_workspace.append(entry)
        log.info("workspace %s: r=%s", ws.id, entry["pearson_r"])

    rs = [e["pearson_r"] for e in per_workspace if e["pearson_r"] is not None]
    report = _provenance(cfg, "accuracy")
    report.update({
        "sign_convention": "pearson(checker_accuracy, 1 - mismatch_ratio)",
        "fractions": list(fractions),
        "records": records,
        "per_workspace": per_workspace,
        "skipped": skipped,
        "summary": None,
        "degenerate": False,
    })
    try:
        report["summary"] = fisher_z_mean(rs).to_dict()
    except InputError as exc:
        report["degenerate"] = True
        report["degenerate_reason"] = exc.code if rs else "no valid per-workspace correlation"
    return report


def run_subset_experiment(cfg: ExperimentConfig, image_sink=None) -> dict:
    fractions = cfg.fractions if cfg.fractions is not None else SUBSET_FRACTIONS
    robot = cfg.robot()
    rcfg = cfg.render_config()
    records, skipped = [], []
    for w in range(cfg.n_workspaces):
        ws = cfg.workspace(w)
        try:
            ds = _free_dataset(cfg, w, robot, ws)
        except ExperimentError as exc:
            log.warning("skipping workspace %s: %s", ws.id, exc)
            skipped.append({"workspace": w, "workspace_id": ws.id, "reason": str(exc), "code": exc.code})
            continue
        full = _prepare(render_dataset(ds, rcfg), cfg)
        if image_sink:
            image_sink(w, 1.0, full)
        for k, f in enumerate(fractions):
            sub = subsample(ds, f, derive_seed(cfg.seed, w, _SUBSET, k))
            img = _prepare(render_dataset(sub, rcfg), cfg)
            if image_sink:
                image_sink(w, f, img)
            records.append({"workspace": w, "workspace_id": ws.id, "fraction": f,
                            "n_samples": len(sub), "mse": mse(img, full)})
            del img

    table = []
    for f in fractions:
        vals = [r["mse"] for r in records if r["fraction"] == f]
        if not vals:
            continue
        table.append({
            "fraction": f,
            "mse_mean": statistics.fmean(vals),
            "mse_std": statistics.stdev(vals) if len(vals) > 1 else 0.0,
            "n_workspaces": len(vals),
        })
    report = _provenance(cfg, "subset")
    report.update({"fractions": list(fractions), "records": records, "table": table,
                   "skipped": skipped})
    return report

"""Planar n-link manipulators among circular obstacles.

This is the ground-truth side of the toolkit: forward kinematics, a
capsule-vs-circle collision checker, seeded uniform sampling of the
configuration space, random workspaces, and the dataset file formats.

Angles are radians in ``[-pi, pi]``. Joint angles are relative: link ``i``
points along the sum of the first ``i + 1`` angles.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._validation import check_configurations, check_labels
from .exceptions import InputError, SamplingBudgetExceeded

FREE = 0
COLLISION = 1

FREE_ONLY = "free_only"
ALL = "all"

# FreeOnly gives up after this many draws per requested sample.
REJECTION_BUDGET_FACTOR = 1000


@dataclass(frozen=True)
class LinkSpec:
    length: float
    half_width: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise InputError(f"link length must be > 0, got {self.length}")
        if not (math.isfinite(self.half_width) and self.half_width >= 0):
            raise InputError(f"link half_width must be >= 0, got {self.half_width}")


@dataclass(frozen=True)
class PlanarRobot:
    links: tuple[LinkSpec, ...]
    base: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "base", (float(self.base[0]), float(self.base[1])))
        if len(self.links) < 1:
            raise InputError("a robot needs at least one link")
        if not all(math.isfinite(c) for c in self.base):
            raise InputError("robot base must be finite")

    @classmethod
    def uniform(cls, n_links: int, length: float = 1.0, half_width: float = 0.0,
                base=(0.0, 0.0)) -> "PlanarRobot":
        return cls(tuple(LinkSpec(length, half_width) for _ in range(n_links)), base)

    @property
    def n_joints(self) -> int:
        return len(self.links)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([link.length for link in self.links])

    @property
    def half_widths(self) -> np.ndarray:
        return np.array([link.half_width for link in self.links])

    def to_dict(self) -> dict:
        return {
            "base": list(self.base),
            "links": [{"length": l.length, "half_width": l.half_width} for l in self.links],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlanarRobot":
        try:
            links = tuple(LinkSpec(float(l["length"]), float(l.get("half_width", 0.0)))
                          for l in d["links"])
            return cls(links, tuple(d.get("base", (0.0, 0.0))))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed robot description: {exc}") from exc


@dataclass(frozen=True)
class CircleObstacle:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not all(math.isfinite(c) for c in self.center):
            raise InputError("obstacle center must be finite")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise InputError(f"obstacle radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class Workspace:
    obstacles: tuple[CircleObstacle, ...] = ()
    id: str = "ws"

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "obstacles": [{"center": list(o.center), "radius": o.radius} for o in self.obstacles],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Workspace":
        try:
            obstacles = tuple(CircleObstacle(tuple(o["center"]), float(o["radius"]))
                              for o in d.get("obstacles", ()))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed workspace description: {exc}") from exc
        return cls(obstacles, str(d.get("id", "ws")))


@dataclass(eq=False)
class Dataset:
    """``m`` labelled configurations of an ``n_joints`` robot.

    ``samples`` is an ``(m, n_joints)`` float64 array, ``labels`` an ``(m,)``
    int8 array with 0 = free and 1 = collision.
    """

    samples: np.ndarray
    labels: np.ndarray = None
    workspace_id: str = "ws"
    seed: int = 0
    n_joints: int = field(init=False)

    def __post_init__(self):
        self.samples = check_configurations(self.samples, allow_empty=True)
        self.labels = check_labels(self.labels, self.samples.shape[0])
        self.n_joints = int(self.samples.shape[1])
        self.seed = int(self.seed)
        self.workspace_id = str(self.workspace_id)

    def __len__(self) -> int:
        return self.samples.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.n_joints == other.n_joints and self.workspace_id == other.workspace_id
                and self.seed == other.seed and np.array_equal(self.samples, other.samples)
                and np.array_equal(self.labels, other.labels))

    @property
    def free_mask(self) -> np.ndarray:
        return self.labels == FREE

    def replace(self, samples=None, labels=None) -> "Dataset":
        return Dataset(
            self.samples.copy() if samples is None else samples,
            self.labels.copy() if labels is None else labels,
            self.workspace_id,
            self.seed,
        )

    def select(self, index) -> "Dataset":
        return self.replace(self.samples[index], self.labels[index])

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n_joints": self.n_joints,
            "workspace_id": self.workspace_id,
            "seed": self.seed,
            "samples": self.samples.tolist(),
            "labels": [int(v) for v in self.labels],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Dataset":
        try:
            n = int(d["n_joints"])
            samples = np.asarray(d["samples"], dtype=np.float64)
            if samples.size == 0:
                samples = samples.reshape(0, n)
            ds = cls(samples, np.asarray(d["labels"]), str(d.get("workspace_id", "ws")),
                     int(d.get("seed", 0)))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed dataset: {exc}") from exc
        if ds.n_joints != n:
            raise InputError(f"n_joints={n} but samples have {ds.n_joints} columns")
        return ds

    @classmethod
    def from_json(cls, text: str) -> "Dataset":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"dataset is not valid JSON: {exc}") from exc

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"theta_{i}" for i in range(self.n_joints)] + ["label"])
        for row, label in zip(self.samples, self.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, workspace_id: str = "external", seed: int = 0) -> "Dataset":
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise InputError("empty CSV") from None
        header = [h.strip() for h in header]
        n = len(header) - 1
        if n < 1 or header != [f"theta_{i}" for i in range(n)] + ["label"]:
            raise InputError(f"CSV header must be theta_0,...,theta_{{n-1}},label; got {header}")
        rows, labels = [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != n + 1:
                raise InputError(f"CSV line {lineno}: expected {n + 1} fields, got {len(rec)}")
            try:
                rows.append([float(v) for v in rec[:n]])
                labels.append(int(rec[n]))
            except ValueError as exc:
                raise InputError(f"CSV line {lineno}: {exc}") from exc
        samples = np.array(rows, dtype=np.float64).reshape(len(rows), n)
        return cls(samples, np.array(labels), workspace_id, seed)


# -- kinematics and collision ---------------------------------------------


def forward_kinematics(robot: PlanarRobot, q) -> np.ndarray:
    """Joint positions of one configuration as an ``(n + 1, 2)`` array.

    Row 0 is the base; row ``i + 1`` is the far end of link ``i``.
    """
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (robot.n_joints,):
        raise InputError(f"expected {robot.n_joints} joint angles, got shape {q.shape}")
    return forward_kinematics_batch(robot, q[None, :])[0]


def forward_kinematics_batch(robot: PlanarRobot, Q) -> np.ndarray:
    Q = np.asarray(Q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[1] != robot.n_joints:
        raise InputError(f"expected (m, {robot.n_joints}) configurations, got shape {Q.shape}")
    heading = np.cumsum(Q, axis=1)
    steps = np.stack([np.cos(heading), np.sin(heading)], axis=-1) * robot.lengths[None, :, None]
    out = np.empty((Q.shape[0], robot.n_joints + 1, 2))
    out[:, 0] = robot.base
    np.cumsum(steps, axis=1, out=out[:, 1:])
    out[:, 1:] += np.asarray(robot.base)
    return out


def point_segment_distance(p, a, b) -> float:
    p, a, b = (np.asarray(v, dtype=np.float64) for v in (p, a, b))
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else min(1.0, max(0.0, float((p - a) @ ab) / denom))
    return float(np.hypot(*(p - (a + t * ab))))


def _segment_distances(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # p: (2,), a/b: (..., 2); links always have positive length
    ax, ay = a[..., 0], a[..., 1]
    abx, aby = b[..., 0] - ax, b[..., 1] - ay
    apx, apy = p[0] - ax, p[1] - ay
    t = (apx * abx + apy * aby) / (abx * abx + aby * aby)
    np.clip(t, 0.0, 1.0, out=t)
    return np.hypot(apx - t * abx, apy - t * aby)


def collision_mask(robot: PlanarRobot, ws: Workspace, Q) -> np.ndarray:
    """Vectorised :func:`in_collision` over an ``(m, n)`` batch."""
    joints = forward_kinematics_batch(robot, Q)
    hit = np.zeros(joints.shape[0], dtype=bool)
    a, b = joints[:, :-1], joints[:, 1:]
    hw = robot.half_widths
    for obs in ws.obstacles:
        d = _segment_distances(np.asarray(obs.center), a, b)
        hit |= np.any(d < obs.radius + hw, axis=1)
    return hit


def base_blocked(robot: PlanarRobot, ws: Workspace) -> bool:
    """True when an obstacle overlaps the base, i.e. every configuration collides."""
    bx, by = robot.base
    hw0 = robot.links[0].half_width
    return any(math.hypot(o.center[0] - bx, o.center[1] - by) < o.radius + hw0
               for o in ws.obstacles)


def in_collision(robot: PlanarRobot, ws: Workspace, q) -> bool:
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (robot.n_joints,):
        raise InputError(f"expected {robot.n_joints} joint angles, got shape {q.shape}")
    return bool(collision_mask(robot, ws, q[None, :])[0])


# -- sampling -------------------------------------------------------------


def _draw(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    return rng.uniform(-math.pi, math.pi, size=(m, n))


def sample_cspace(robot: PlanarRobot, ws: Workspace, m: int, seed: int,
                  mode: str = FREE_ONLY) -> Dataset:
    """Draw ``m`` i.i.d. uniform configurations and label them.

    In ``FREE_ONLY`` mode colliding draws are rejected until ``m`` free ones
    are collected; after ``REJECTION_BUDGET_FACTOR * m`` draws
    :class:`SamplingBudgetExceeded` is raised.
    """
    if int(m) != m or m <= 0:
        raise InputError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    n = robot.n_joints
    rng = np.random.default_rng(seed)
    if mode == ALL:
        Q = _draw(rng, m, n)
        labels = collision_mask(robot, ws, Q).astype(np.int8)
        return Dataset(Q, labels, ws.id, seed)
    if mode != FREE_ONLY:
        raise InputError(f"unknown sampling mode {mode!r}")

    if base_blocked(robot, ws):
        raise SamplingBudgetExceeded(f"an obstacle covers the robot base in workspace {ws.id!r}")
    kept, n_kept, attempts = [], 0, 0
    budget = REJECTION_BUDGET_FACTOR * m
    while n_kept < m:
        if attempts >= budget:
            raise SamplingBudgetExceeded(
                f"only {n_kept}/{m} free configurations after {attempts} draws in workspace {ws.id!r}")
        Q = _draw(rng, m, n)
        attempts += m
        Q = Q[~collision_mask(robot, ws, Q)]
        kept.append(Q)
        n_kept += Q.shape[0]
    samples = np.concatenate(kept)[:m]
    return Dataset(samples, np.zeros(m, dtype=np.int8), ws.id, seed)


def sample_colliding(robot: PlanarRobot, ws: Workspace, k: int,
                     rng: np.random.Generator) -> np.ndarray:
    """Rejection-sample ``k`` colliding configurations (same budget rule)."""
    n = robot.n_joints
    if k == 0:
        return np.empty((0, n))
    kept, n_kept, attempts = [], 0, 0
    budget = REJECTION_BUDGET_FACTOR * k
    batch = max(4 * k, 4096)
    while n_kept < k:
        if attempts >= budget:
            raise SamplingBudgetExceeded(
                f"only {n_kept}/{k} colliding configurations after {attempts} draws in workspace {ws.id!r}")
        Q = _draw(rng, batch, n)
        attempts += batch
        Q = Q[collision_mask(robot, ws, Q)]
        kept.append(Q)
        n_kept += Q.shape[0]
    return np.concatenate(kept)[:k]


def random_workspace(seed: int, k_obstacles: int, bounds: Sequence[float] = (-2.0, 2.0, -2.0, 2.0),
                     radius_range: Sequence[float] = (0.1, 0.4), id: str | None = None) -> Workspace:
    """``k_obstacles`` circles, centers uniform in ``bounds = (xmin, xmax, ymin, ymax)``."""
    if int(k_obstacles) != k_obstacles or k_obstacles < 0:
        raise InputError(f"k_obstacles must be a non-negative integer, got {k_obstacles!r}")
    xmin, xmax, ymin, ymax = map(float, bounds)
    if not (xmin < xmax and ymin < ymax):
        raise InputError(f"empty bounds {bounds}")
    rmin, rmax = map(float, radius_range)
    if not (0 < rmin <= rmax):
        raise InputError(f"invalid radius range {radius_range}")
    rng = np.random.default_rng(seed)
    cx = rng.uniform(xmin, xmax, size=int(k_obstacles))
    cy = rng.uniform(ymin, ymax, size=int(k_obstacles))
    r = rng.uniform(rmin, rmax, size=int(k_obstacles))
    obstacles = tuple(CircleObstacle((float(x), float(y)), float(rr)) for x, y, rr in zip(cx, cy, r))
    return Workspace(obstacles, id if id is not None else f"ws-{seed}")

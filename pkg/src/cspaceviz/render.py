"""Radial rasterization of conditional trees.

Every adjacent joint pair ``(i, i + 1)`` owns a band of concentric rings,
one ring per parent bin of joint ``i``. A sample is drawn on the ring of
its parent bin at the angle of its child joint, colored by the parent bin.
Below the disc, one legend bar per joint pair maps ``[-pi, pi]`` left to
right through the colormap.

Images are ``(H, W, 3)`` uint8 numpy arrays, row-major, origin top-left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from ._validation import check_n_d
from .core import DiscretizationSpec, PerturbationSpec, apply_epsilon, discretize
from .exceptions import ConfigurationError, InputError
from .planar import Dataset

RGB8 = tuple[int, int, int]

WHITE: RGB8 = (255, 255, 255)
COLLISION_GRAY: RGB8 = (160, 160, 160)


def _check_rgb(c) -> RGB8:
    c = tuple(int(v) for v in c)
    if len(c) != 3 or any(v < 0 or v > 255 for v in c):
        raise InputError(f"RGB8 color needs three channels in [0, 255], got {c}")
    return c


@dataclass(frozen=True)
class ColorMap:
    control_points: tuple[tuple[float, RGB8], ...]

    def __post_init__(self):
        pts = tuple((float(t), _check_rgb(c)) for t, c in self.control_points)
        if len(pts) < 2:
            raise InputError("a colormap needs at least two control points")
        ts = [t for t, _ in pts]
        if ts[0] != 0.0 or ts[-1] != 1.0:
            raise InputError("colormap control points must start at t=0 and end at t=1")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InputError("colormap control points must be strictly increasing in t")
        object.__setattr__(self, "control_points", pts)

    def lookup_many(self, t) -> np.ndarray:
        """Colors for an array of parameters, shape ``t.shape + (3,)``."""
        t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0)
        ts = np.array([p[0] for p in self.control_points])
        cs = np.array([p[1] for p in self.control_points], dtype=np.float64)
        out = np.stack([np.interp(t, ts, cs[:, ch]) for ch in range(3)], axis=-1)
        # round half up
        return np.floor(out + 0.5).astype(np.uint8)

    def __call__(self, t: float) -> RGB8:
        return tuple(int(v) for v in self.lookup_many(float(t)))

    def to_list(self) -> list:
        return [[t, list(c)] for t, c in self.control_points]


# Dark to light with rising luminance so the map stays readable in grayscale.
EARTH = ColorMap((
    (0.0, (0, 0, 70)),
    (0.25, (0, 90, 120)),
    (0.5, (60, 140, 70)),
    (0.75, (180, 160, 100)),
    (1.0, (250, 250, 240)),
))


def colormap_lookup(cmap: ColorMap, t: float) -> RGB8:
    return cmap(t)


def parent_color(i: int, parent_bin: int, n_d: int, cmap: ColorMap = EARTH) -> RGB8:
    """Color of the ring for ``parent_bin``; every joint pair shares ``cmap``."""
    n_d = check_n_d(n_d)
    if not (0 <= parent_bin < n_d):
        raise InputError(f"parent bin {parent_bin} out of range [0, {n_d})")
    return cmap((parent_bin + 0.5) / n_d)


@dataclass(frozen=True)
class LayoutSpec:
    canvas_px: int = 2000
    r0: float = 60.0
    ring_step: float = 1.0
    band_gap: float = 12.0
    point_px: int = 2
    background: RGB8 = WHITE
    legend_strip_px: int = 80
    margin: float = 8.0

    def __post_init__(self):
        object.__setattr__(self, "background", _check_rgb(self.background))
        if self.canvas_px < 1 or int(self.canvas_px) != self.canvas_px:
            raise ConfigurationError(f"canvas_px must be a positive integer, got {self.canvas_px}")
        if not self.r0 > 0:
            raise ConfigurationError(f"r0 must be > 0, got {self.r0}")
        if not self.ring_step > 0:
            raise ConfigurationError(f"ring_step must be > 0, got {self.ring_step}")
        if self.band_gap < 0 or self.margin < 0:
            raise ConfigurationError("band_gap and margin must be >= 0")
        if self.point_px < 1 or int(self.point_px) != self.point_px:
            raise ConfigurationError(f"point_px must be an integer >= 1, got {self.point_px}")
        if self.legend_strip_px < 0 or int(self.legend_strip_px) != self.legend_strip_px:
            raise ConfigurationError("legend_strip_px must be a non-negative integer")

    @classmethod
    def default_for(cls, n_joints: int, n_d: int, **overrides) -> "LayoutSpec":
        """Default layout that fits ``n_joints - 1`` bands of ``n_d`` rings.

        The ring step is the largest integer that fits the default canvas
        (at least 1 px). If even a 1 px step overflows and no canvas size was
        given, the canvas grows to fit.
        """
        n_pairs = max(1, n_joints - 1)
        base = cls(**{k: v for k, v in overrides.items() if k != "ring_step"})
        if "ring_step" in overrides and overrides["ring_step"] is not None:
            step = overrides["ring_step"]
        else:
            room = base.canvas_px / 2 - base.r0 - base.margin - n_pairs * base.band_gap
            step = max(1, math.floor(room / (n_pairs * n_d)))
        layout = replace(base, ring_step=step)
        if "canvas_px" not in overrides:
            need = layout.outer_radius(n_joints, n_d) + layout.point_px / 2 + layout.margin
            if need > layout.canvas_px / 2:
                layout = replace(layout, canvas_px=2 * math.ceil(need))
        return layout

    def outer_radius(self, n_joints: int, n_d: int) -> float:
        return ring_radius(max(0, n_joints - 2), n_d - 1, n_d, self)

    def check_fits(self, n_joints: int, n_d: int) -> None:
        need = self.outer_radius(n_joints, n_d) + self.point_px / 2 + self.margin
        if need > self.canvas_px / 2:
            raise ConfigurationError(
                f"layout overflow: outermost ring needs radius {need:.1f} px "
                f"but the canvas half-width is {self.canvas_px / 2:.1f} px")

    def image_shape(self) -> tuple[int, int, int]:
        return (self.canvas_px + self.legend_strip_px, self.canvas_px, 3)


def ring_radius(i: int, parent_bin, n_d: int, layout: LayoutSpec):
    """Ring radius in pixels; affine and strictly increasing in ``(i, parent_bin)``."""
    return layout.r0 + i * (n_d * layout.ring_step + layout.band_gap) + parent_bin * layout.ring_step


@dataclass(frozen=True)
class RenderConfig:
    """All render settings; ``None`` fields fall back to the defaults."""

    n_d: int = 500
    epsilon_max: float = 0.0
    canvas_px: int | None = None
    r0: float | None = None
    ring_step: float | None = None
    band_gap: float | None = None
    point_px: int | None = None
    legend_strip_px: int | None = None
    background: RGB8 | None = None
    colormap: ColorMap = field(default=EARTH)
    plot_collisions: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "RenderConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown render config fields: {sorted(unknown)}")
        d = dict(d)
        if d.get("colormap") is not None:
            d["colormap"] = ColorMap(tuple((t, tuple(c)) for t, c in d["colormap"]))
        else:
            d.pop("colormap", None)
        if d.get("background") is not None:
            d["background"] = tuple(d["background"])
        return cls(**d)

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["colormap"] = self.colormap.to_list()
        if self.background is not None:
            out["background"] = list(self.background)
        return out

    def layout_overrides(self) -> dict:
        names = ("canvas_px", "r0", "ring_step", "band_gap", "point_px", "legend_strip_px", "background")
        return {k: getattr(self, k) for k in names if getattr(self, k) is not None}

    def resolve(self, n_joints: int):
        spec = DiscretizationSpec(self.n_d)
        pert = PerturbationSpec(self.epsilon_max)
        layout = LayoutSpec.default_for(n_joints, spec.n_d, **self.layout_overrides())
        return spec, pert, self.colormap, layout


def legend_colors(width: int, cmap: ColorMap) -> np.ndarray:
    u = (np.arange(width) + 0.5) / width
    return cmap.lookup_many(u)


def render(ds: Dataset, spec: DiscretizationSpec, pert: PerturbationSpec, cmap: ColorMap,
           layout: LayoutSpec, *, plot_collisions: bool = False,
           collision_color: RGB8 | None = None) -> np.ndarray:
    """Rasterize ``ds`` into an ``(H, W, 3)`` uint8 image.

    Only free samples are drawn unless ``plot_collisions`` is set. Colliding
    samples then use their ring color, or ``collision_color`` when given.
    Points are drawn sample by sample, joint pair by joint pair; the last
    write to a pixel wins.
    """
    n = ds.n_joints
    if n < 2:
        raise InputError("rendering needs at least two joints (one joint pair)")
    if len(ds) == 0:
        raise InputError("cannot render an empty dataset")
    n_d = spec.n_d
    layout.check_fits(n, n_d)

    H, W, _ = layout.image_shape()
    img = np.empty((H, W, 3), dtype=np.uint8)
    img[:] = layout.background
    n_pairs = n - 1
    if layout.legend_strip_px:
        bar_h = layout.legend_strip_px // n_pairs
        bar = legend_colors(W, cmap)
        for i in range(n_pairs):
            top = layout.canvas_px + i * bar_h
            img[top:top + bar_h] = bar[None, :, :]

    plotted = ds if plot_collisions else ds.select(ds.free_mask)
    if len(plotted) == 0:
        return img
    plotted = apply_epsilon(plotted, spec, pert)
    Q = plotted.samples
    m = Q.shape[0]
    parents = discretize(Q[:, :-1], n_d)                      # (m, n_pairs)
    pair = np.broadcast_to(np.arange(n_pairs), (m, n_pairs))
    radius = ring_radius(pair, parents, n_d, layout)
    theta = Q[:, 1:]
    c = layout.canvas_px / 2
    x = c + radius * np.cos(theta)
    y = c - radius * np.sin(theta)
    p = layout.point_px
    col0 = np.floor(x - p / 2 + 0.5).astype(np.int64).ravel()
    row0 = np.floor(y - p / 2 + 0.5).astype(np.int64).ravel()
    colors = cmap.lookup_many((parents.ravel() + 0.5) / n_d)
    if plot_collisions and collision_color is not None:
        hit = np.repeat(plotted.labels != 0, n_pairs)
        colors[hit] = _check_rgb(collision_color)

    # draw order: sample-major, joint-pair-minor, matching ravel() of (m, n_pairs)
    order = np.arange(m * n_pairs)
    dr, dc = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    rows = (row0[:, None] + dr.ravel()[None, :]).ravel()
    cols = (col0[:, None] + dc.ravel()[None, :]).ravel()
    writer_of = np.repeat(order, p * p)
    inside = (rows >= 0) & (rows < layout.canvas_px) & (cols >= 0) & (cols < W)
    flat = rows[inside] * W + cols[inside]
    last = np.full(layout.canvas_px * W, -1, dtype=np.int64)
    np.maximum.at(last, flat, writer_of[inside])
    painted = np.flatnonzero(last >= 0)
    img.reshape(-1, 3)[painted] = colors[last[painted]]
    return img


def render_dataset(ds: Dataset, config: RenderConfig | None = None, **kw) -> np.ndarray:
    """Render with a :class:`RenderConfig` (defaults when omitted)."""
    config = config or RenderConfig()
    spec, pert, cmap, layout = config.resolve(ds.n_joints)
    return render(ds, spec, pert, cmap, layout, plot_collisions=config.plot_collisions, **kw)


def crop_legend(img: np.ndarray) -> np.ndarray:
    """Drop the legend strip of a rendered image (keeps the square disc area)."""
    h, w = img.shape[:2]
    return img[:min(h, w)]

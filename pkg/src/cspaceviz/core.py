"""Discretization, conditional trees and the duplicate-disambiguating shift.

A dataset of ``m`` configurations is binned per joint onto ``n_d`` uniform
bins over ``[-pi, pi]``. For every adjacent joint pair ``(i, i + 1)`` the
conditional tree maps a parent bin of joint ``i`` to the child angles of
joint ``i + 1`` observed with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import TWO_PI, check_fraction, check_n_d
from .exceptions import InputError
from .planar import Dataset


@dataclass(frozen=True)
class DiscretizationSpec:
    n_d: int = 500

    def __post_init__(self):
        object.__setattr__(self, "n_d", check_n_d(self.n_d))

    @property
    def bin_width(self) -> float:
        return TWO_PI / self.n_d


@dataclass(frozen=True)
class PerturbationSpec:
    epsilon_max: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.epsilon_max) and self.epsilon_max >= 0):
            raise InputError(f"epsilon_max must be >= 0, got {self.epsilon_max}")


@dataclass
class ConditionalTree:
    joint_index: int
    n_d: int
    children: dict[int, list[tuple[float, int]]] = field(default_factory=dict)

    def __len__(self) -> int:
        return sum(len(c) for c in self.children.values())


def discretize(theta, n_d: int):
    """Bin index of ``theta`` (scalar or array); ``pi`` falls in the last bin."""
    n_d = check_n_d(n_d)
    arr = np.asarray(theta, dtype=np.float64)
    if np.any(~np.isfinite(arr)) or np.any(arr < -math.pi) or np.any(arr > math.pi):
        raise InputError("theta must lie in [-pi, pi]")
    width = TWO_PI / n_d
    bins = np.clip(np.floor((arr + math.pi) * n_d / TWO_PI).astype(np.int64), 0, n_d - 1)
    # keep bins consistent with the edges used by bin_center
    half = n_d / 2
    lower = (bins - half) * width
    bins = np.where((arr < lower) & (bins > 0), bins - 1, bins)
    upper = (bins + 1 - half) * width
    bins = np.where((arr >= upper) & (bins < n_d - 1), bins + 1, bins)
    if bins.ndim == 0:
        return int(bins)
    return bins


def _centers(b, n_d: int):
    # -pi + (b + 0.5) * 2pi / n_d, measured from the nearer end to limit rounding
    width = TWO_PI / n_d
    lo = (b + 0.5 - n_d / 2) * width
    hi = math.pi - (n_d - b - 0.5) * width
    lo_side = (b + 0.5) <= n_d / 4
    hi_side = (n_d - b - 0.5) <= n_d / 4
    return np.where(lo_side, -math.pi + (b + 0.5) * width, np.where(hi_side, hi, lo))


def bin_center(bin, n_d: int):
    n_d = check_n_d(n_d)
    b = np.asarray(bin)
    if np.any(b != np.floor(b)) or np.any(b < 0) or np.any(b >= n_d):
        raise InputError(f"bin must be an integer in [0, {n_d})")
    centers = _centers(b, n_d)
    if centers.ndim == 0:
        return float(centers)
    return centers


def build_tree(ds: Dataset, i: int, spec: DiscretizationSpec) -> ConditionalTree:
    """Children of every parent bin of joint ``i``, in sample-index order."""
    if not (0 <= i < ds.n_joints - 1):
        raise InputError(f"joint pair index {i} out of range for {ds.n_joints} joints")
    parents = discretize(ds.samples[:, i], spec.n_d)
    child_angles = ds.samples[:, i + 1]
    tree = ConditionalTree(i, spec.n_d)
    for k, (b, theta) in enumerate(zip(parents.tolist(), child_angles.tolist())):
        tree.children.setdefault(b, []).append((theta, k))
    return tree


def duplicate_ranks(samples: np.ndarray, n_d: int) -> np.ndarray:
    """Per-sample duplicate rank used by :func:`apply_epsilon`.

    For each joint pair, samples sharing a child bin under at least two
    distinct parent bins form a group; members are ranked 0, 1, 2... in
    sample-index order. A sample's rank is its maximum over joint pairs.
    """
    m, n = samples.shape
    bins = discretize(samples, n_d)
    rank = np.zeros(m, dtype=np.int64)
    idx = np.arange(m)
    for i in range(n - 1):
        parent, child = bins[:, i], bins[:, i + 1]
        order = np.lexsort((idx, child))
        c_sorted = child[order]
        starts = np.flatnonzero(np.r_[True, c_sorted[1:] != c_sorted[:-1]])
        sizes = np.diff(np.r_[starts, m])
        group = np.repeat(np.arange(starts.size), sizes)
        pos = np.arange(m) - starts[group]
        p_sorted = parent[order]
        pmin = np.minimum.reduceat(p_sorted, starts)
        pmax = np.maximum.reduceat(p_sorted, starts)
        shared = (pmin != pmax)[group]
        r = np.where(shared, pos, 0)
        np.maximum.at(rank, order, r)
    return rank


def apply_epsilon(ds: Dataset, spec: DiscretizationSpec, pert: PerturbationSpec) -> Dataset:
    """Shift duplicated states by ``rank * epsilon_max / max_rank`` on every joint.

    A coordinate whose shifted value would leave its bin (or ``[-pi, pi]``)
    is shifted the other way instead, so no sample changes bin on any joint.
    """
    eps = float(pert.epsilon_max)
    if eps >= math.pi / spec.n_d:
        raise InputError(f"epsilon_max={eps} must be < pi/n_d={math.pi / spec.n_d}")
    if eps == 0.0 or len(ds) == 0:
        return ds.replace()
    rank = duplicate_ranks(ds.samples, spec.n_d)
    max_rank = int(rank.max())
    if max_rank == 0:
        return ds.replace()
    shift = rank * (eps / max_rank)

    Q = ds.samples
    bins = discretize(Q, spec.n_d)
    up = Q + shift[:, None]
    ok_up = up <= math.pi
    up_c = np.where(ok_up, up, 0.0)
    ok_up &= discretize(up_c, spec.n_d) == bins
    down = Q - shift[:, None]
    ok_down = down >= -math.pi
    down_c = np.where(ok_down, down, 0.0)
    ok_down &= discretize(down_c, spec.n_d) == bins
    out = np.where(ok_up, up, np.where(ok_down, down, Q))
    # rounding in Q +- shift can overshoot eps by an ulp; step back toward Q,
    # which cannot leave the bin because bins are intervals
    for _ in range(8):
        over = np.abs(out - Q) > eps
        if not over.any():
            break
        out[over] = np.nextafter(out[over], Q[over])
    return ds.replace(samples=out)


def subsample(ds: Dataset, fraction: float, seed: int) -> Dataset:
    """``floor(fraction * m)`` samples without replacement, original order kept."""
    fraction = check_fraction(fraction)
    m = len(ds)
    k = math.floor(round(fraction * m, 9))
    if k == 0:
        raise InputError(f"fraction {fraction} of {m} samples selects nothing")
    rng = np.random.default_rng(seed)
    index = np.sort(rng.choice(m, size=k, replace=False))
    return ds.select(index)

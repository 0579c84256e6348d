"""Pearson correlation and Fisher-z averaging of correlations."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .exceptions import InputError, LengthMismatchError, TooFewSamplesError, ZeroVarianceError


@dataclass(frozen=True)
class CorrelationSummary:
    r_mean: float
    se: float
    n_groups: int

    def to_dict(self) -> dict:
        return asdict(self)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
        raise LengthMismatchError(f"series lengths differ: {x.shape} vs {y.shape}")
    if x.size < 3:
        raise TooFewSamplesError(f"need at least 3 points, got {x.size}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVarianceError("a constant series has no correlation")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def fisher_z_mean(rs: Sequence[float]) -> CorrelationSummary:
    """Average correlations in z-space.

    ``se`` maps one standard error of the mean z back through ``tanh``:
    ``tanh(z_mean + s_z / sqrt(N)) - r_mean``, with ``s_z`` the sample
    standard deviation of the z values (0 for a single correlation).
    """
    r = np.asarray(rs, dtype=np.float64)
    if r.ndim != 1 or r.size < 1:
        raise TooFewSamplesError("need at least one correlation")
    if np.any(~np.isfinite(r)) or np.any(np.abs(r) >= 1.0):
        raise InputError("every correlation must satisfy |r| < 1")
    if r.size == 1:
        return CorrelationSummary(float(r[0]), 0.0, 1)
    z = np.arctanh(r)
    z_mean = float(z.mean())
    r_mean = math.tanh(z_mean)
    s_z = float(z.std(ddof=1))
    se = math.tanh(z_mean + s_z / math.sqrt(r.size)) - r_mean
    return CorrelationSummary(r_mean, se, int(r.size))

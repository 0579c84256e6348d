"""Input validation helpers built on :func:`sklearn.utils.check_array`."""

from __future__ import annotations

import math

import numpy as np
from sklearn.utils import check_array

from .exceptions import InputError

TWO_PI = 2.0 * math.pi


def check_configurations(X, n_joints: int | None = None, *, min_joints: int = 1,
                         allow_empty: bool = False) -> np.ndarray:
    """Return ``X`` as a C-contiguous float64 ``(m, n)`` array of joint angles.

    Every angle must lie in ``[-pi, pi]``.
    """
    try:
        X = check_array(X, dtype=np.float64, ensure_2d=True, order="C", copy=False,
                        ensure_min_samples=0 if allow_empty else 1)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if X.shape[1] < min_joints:
        raise InputError(f"need at least {min_joints} joint(s), got {X.shape[1]}")
    if n_joints is not None and X.shape[1] != n_joints:
        raise InputError(f"expected {n_joints} joint angles per configuration, got {X.shape[1]}")
    if np.any(X < -math.pi) or np.any(X > math.pi):
        raise InputError("joint angles must lie in [-pi, pi]")
    return X


def check_labels(y, m: int) -> np.ndarray:
    if y is None:
        return np.zeros(m, dtype=np.int8)
    y = np.asarray(y)
    if y.shape != (m,):
        raise InputError(f"labels must have shape ({m},), got {y.shape}")
    if not np.all((y == 0) | (y == 1)):
        raise InputError("labels must be 0 (free) or 1 (collision)")
    return y.astype(np.int8)


def check_n_d(n_d) -> int:
    if isinstance(n_d, bool) or int(n_d) != n_d or n_d < 1:
        raise InputError(f"n_d must be a positive integer, got {n_d!r}")
    return int(n_d)


def check_fraction(fraction) -> float:
    fraction = float(fraction)
    if not (0.0 < fraction <= 1.0):
        raise InputError(f"fraction must lie in (0, 1], got {fraction}")
    return fraction


def check_image(img, name: str = "image") -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise InputError(f"{name} must be an (H, W, 3) uint8 array, got {img.shape} {img.dtype}")
    return img


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise InputError(f"image dimensions differ: {a.shape} vs {b.shape}")

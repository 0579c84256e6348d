"""Pixel-level comparison of two renders."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ._validation import check_image, check_same_shape
from .render import RGB8, WHITE


@dataclass(frozen=True)
class DiffStats:
    nonwhite_before: int
    nonwhite_after: int
    mismatch_ratio: float

    def to_dict(self) -> dict:
        return asdict(self)


def _differs(img: np.ndarray, color: RGB8) -> np.ndarray:
    # channel-wise comparison is much faster than .any(axis=-1) on big canvases
    return (img[..., 0] != color[0]) | (img[..., 1] != color[1]) | (img[..., 2] != color[2])


def pixel_setminus(A, B, white: RGB8 = WHITE) -> tuple[np.ndarray, DiffStats]:
    """Whiten every pixel of ``A`` that equals ``B`` exactly.

    The stats count non-white pixels of ``A`` and of the result; the ratio
    of the two is 0 when ``A`` has no non-white pixel.
    """
    A = check_image(A, "A")
    B = check_image(B, "B")
    check_same_shape(A, B)
    white = tuple(int(v) for v in white)
    # a white pixel of A stays white whatever B holds, so only A's
    # non-white pixels need comparing
    idx = np.flatnonzero(_differs(A, white))
    a = A.reshape(-1, 3)[idx]
    b = B.reshape(-1, 3)[idx]
    keep = idx[np.any(a != b, axis=1)]
    out = np.empty(A.shape, dtype=np.uint8)
    out[...] = white
    out.reshape(-1, 3)[keep] = A.reshape(-1, 3)[keep]
    before = int(idx.size)
    after = int(keep.size)
    ratio = after / before if before else 0.0
    return out, DiffStats(before, after, ratio)


def negative_subtraction(A, B) -> np.ndarray:
    """``255 - |A - B|`` per channel: equal regions white, divergence dark."""
    A = check_image(A, "A")
    B = check_image(B, "B")
    check_same_shape(A, B)
    diff = np.abs(A.astype(np.int16) - B.astype(np.int16))
    return (255 - diff).astype(np.uint8)


def mse(A, B) -> float:
    """Mean squared channel difference on the 0-255 scale."""
    A = check_image(A, "A")
    B = check_image(B, "B")
    check_same_shape(A, B)
    ne = np.flatnonzero((A[..., 0] != B[..., 0]) | (A[..., 1] != B[..., 1]) | (A[..., 2] != B[..., 2]))
    d = A.reshape(-1, 3)[ne].astype(np.int64) - B.reshape(-1, 3)[ne].astype(np.int64)
    return int(np.einsum("ij,ij->", d, d)) / A.size

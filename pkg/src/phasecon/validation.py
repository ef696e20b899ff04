"""Input validation helpers for arrays entering the pipeline."""

from __future__ import annotations

import numpy as np

MIN_SIDE = 8


def check_image(x, min_side: int = MIN_SIDE) -> np.ndarray:
    """Validate and convert an input image to a 2D float64 array.

    Accepts anything array-like that is two-dimensional, at least
    ``min_side`` pixels on each side, and free of NaN/Inf. Returns a
    C-contiguous float64 copy-on-demand view.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D grayscale array, got shape {arr.shape}")
    if arr.shape[0] < min_side or arr.shape[1] < min_side:
        raise ValueError(
            f"image must be at least {min_side}x{min_side}, got {arr.shape[0]}x{arr.shape[1]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains NaN or Inf values")
    return np.ascontiguousarray(arr)


def check_same_shape(*arrays: np.ndarray) -> None:
    """Raise if the given arrays do not all share one shape."""
    shapes = {a.shape for a in arrays}
    if len(shapes) > 1:
        raise ValueError(f"maps must share dimensions, got {sorted(shapes)}")

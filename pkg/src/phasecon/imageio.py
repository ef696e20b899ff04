"""Grayscale image loading, normalization, and map export.

Inputs are binary PGM (P5) or grayscale PNG, 8 or 16 bit. Intensities
are normalized to [0, 1] on load by dividing by the full-scale value of
the source bit depth. Derived floating-point maps are written back as
8-bit PGM or PNG.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ImageIOError
from .validation import MIN_SIDE

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class ImageGrid:
    """A normalized grayscale raster.

    ``pixels`` is a (height, width) float64 array in row-major order with
    the origin at the top-left; values lie in [0, 1]. ``source_depth``
    records the original bit depth (8 or 16).
    """

    width: int
    height: int
    pixels: np.ndarray
    source_depth: int

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width):
            raise ValueError("pixel buffer shape does not match declared dimensions")
        if self.width < MIN_SIDE or self.height < MIN_SIDE:
            raise ValueError(f"image must be at least {MIN_SIDE}x{MIN_SIDE}")
        if not np.all(np.isfinite(self.pixels)):
            raise ValueError("image contains non-finite pixels")
        if self.pixels.min() < 0.0 or self.pixels.max() > 1.0:
            raise ValueError("normalized pixels must lie in [0, 1]")


def load_grayscale(path) -> ImageGrid:
    """Load an 8/16-bit grayscale PGM or PNG and normalize it to [0, 1].

    Color inputs are rejected rather than converted; luminance conversion
    is left to the caller.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ImageIOError(f"cannot read image file {path}: {exc}") from exc
    if data[:2] == b"P5":
        raw, depth = _parse_pgm(data, path)
    elif data[:8] == _PNG_MAGIC:
        raw, depth = _parse_png(data, path)
    else:
        raise ImageIOError(f"{path}: unsupported format (expected binary PGM P5 or PNG)")

    height, width = raw.shape
    if width == 0 or height == 0:
        raise ImageIOError(f"{path}: zero-size image")
    if width < MIN_SIDE or height < MIN_SIDE:
        raise ImageIOError(
            f"{path}: image is {width}x{height}; at least {MIN_SIDE}x{MIN_SIDE} required"
        )
    full_scale = float(2**depth - 1)
    pixels = raw.astype(np.float64) / full_scale
    return ImageGrid(width=width, height=height, pixels=pixels, source_depth=depth)


def write_map(map_, path, mode: str = "rescale") -> None:
    """Write a 2D real map as an 8-bit PGM (.pgm) or PNG (.png).

    ``rescale`` maps [min, max] linearly onto [0, 255]; a constant map
    writes mid-gray 128. ``clamp01`` maps [0, 1] onto [0, 255], clamping
    values outside that range. Quantization rounds half up.
    """
    arr = np.asarray(map_, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ImageIOError("map must be a non-empty 2D array")
    if np.isnan(arr).any():
        raise ImageIOError("map contains NaN; refusing to write")
    if mode == "rescale":
        lo = float(arr.min())
        hi = float(arr.max())
        if hi == lo:
            scaled = np.full(arr.shape, 128.0)
        else:
            scaled = (arr - lo) / (hi - lo) * 255.0
    elif mode == "clamp01":
        scaled = np.clip(arr, 0.0, 1.0) * 255.0
    else:
        raise ValueError(f"unknown write mode {mode!r} (use 'rescale' or 'clamp01')")
    # round half up; np.round would round halves to even
    quantized = np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)

    path = Path(path)
    suffix = path.suffix.lower()
    try:
        if suffix == ".pgm":
            header = f"P5\n{quantized.shape[1]} {quantized.shape[0]}\n255\n".encode()
            path.write_bytes(header + quantized.tobytes())
        elif suffix == ".png":
            from PIL import Image

            Image.fromarray(quantized, mode="L").save(path)
        else:
            raise ImageIOError(f"unsupported output format {suffix!r} (use .pgm or .png)")
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc


def _parse_pgm(data: bytes, path) -> tuple[np.ndarray, int]:
    pos = 2  # past "P5"

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            ch = data[pos : pos + 1]
            if ch == b"#":
                nl = data.find(b"\n", pos)
                if nl < 0:
                    raise ImageIOError(f"{path}: truncated PGM header")
                pos = nl + 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageIOError(f"{path}: truncated PGM header")
        return data[start:pos]

    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError as exc:
        raise ImageIOError(f"{path}: malformed PGM header") from exc
    pos += 1  # single whitespace byte separating header from raster
    if width <= 0 or height <= 0:
        raise ImageIOError(f"{path}: zero-size image")
    if maxval == 255:
        depth, dtype = 8, np.dtype("u1")
    elif maxval == 65535:
        depth, dtype = 16, np.dtype(">u2")  # 16-bit PGM is big-endian
    else:
        raise ImageIOError(f"{path}: unsupported PGM maxval {maxval} (expected 255 or 65535)")
    expected = width * height * dtype.itemsize
    raster = data[pos : pos + expected]
    if len(raster) < expected:
        raise ImageIOError(f"{path}: truncated PGM raster")
    arr = np.frombuffer(raster, dtype=dtype).reshape(height, width)
    return arr, depth


def _parse_png(data: bytes, path) -> tuple[np.ndarray, int]:
    from PIL import Image, UnidentifiedImageError

    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except UnidentifiedImageError as exc:
        raise ImageIOError(f"{path}: not a decodable PNG") from exc
    mode = img.mode
    if mode == "L":
        return np.asarray(img, dtype=np.uint8), 8
    if mode in ("I;16", "I;16B", "I;16L", "I;16N"):
        return np.asarray(img, dtype=np.uint16), 16
    if mode == "I":
        arr = np.asarray(img, dtype=np.int64)
        if arr.min() < 0 or arr.max() > 65535:
            raise ImageIOError(f"{path}: integer PNG exceeds 16-bit range")
        return arr.astype(np.uint16), 16
    raise ImageIOError(
        f"{path}: PNG mode {mode!r} is not 8/16-bit grayscale; convert explicitly first"
    )

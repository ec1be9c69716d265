"""Reading and writing 8-bit greyscale images (binary PGM and PNG).

Loading returns float64 arrays with the original 0..255 values. Saving
clamps to [0, 255] and rounds halves up, so 127.5 becomes 128. Only 8-bit
single-channel data is accepted; anything else is rejected with a message
naming the offending property.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .grid import as_image


class ImageIOError(Exception):
    """File level problem: missing, unreadable or unsupported image data."""


def _read_bytes(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _parse_pgm(data: bytes, path) -> np.ndarray:
    # Header: magic, width, height, maxval, separated by whitespace and
    # optional '#' comment lines, then a single whitespace byte before the
    # raster.
    pos = 2  # past the magic
    fields = []
    while len(fields) < 3:
        match = re.match(rb"(?:\s+|\s*#[^\n]*\n)*(\d+)", data[pos:])
        if match is None:
            raise ImageIOError(f"{path}: malformed PGM header")
        fields.append(int(match.group(1)))
        pos += match.end()
    width, height, maxval = fields
    if maxval != 255:
        raise ImageIOError(f"{path}: unsupported PGM maxval {maxval}, expected 255")
    if width < 1 or height < 1:
        raise ImageIOError(f"{path}: invalid PGM dimensions {width}x{height}")
    pos += 1  # single whitespace byte after maxval
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise ImageIOError(
            f"{path}: PGM raster truncated, expected {width * height} bytes"
        )
    return (
        np.frombuffer(raster, dtype=np.uint8)
        .reshape(height, width)
        .astype(np.float64)
    )


def _parse_png(path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            if im.mode != "L":
                raise ImageIOError(
                    f"{path}: unsupported PNG mode {im.mode!r}, "
                    "expected 8-bit greyscale (L)"
                )
            return np.asarray(im, dtype=np.float64)
    except UnidentifiedImageError as exc:
        raise ImageIOError(f"{path}: not a valid PNG file") from exc
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc


def load_image(path) -> np.ndarray:
    """Load a binary PGM (P5) or greyscale PNG as a float64 image."""
    data = _read_bytes(path)
    if data[:2] == b"P5":
        return _parse_pgm(data, path)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return _parse_png(path)
    raise ImageIOError(f"{path}: unrecognised format, expected binary PGM or PNG")


def load_mask(path, image: np.ndarray | None = None) -> np.ndarray:
    """Load a mask image; values >= 128 mark known pixels.

    If an image is given, the mask dimensions must match it.
    """
    mask = load_image(path) >= 128.0
    if image is not None and mask.shape != image.shape:
        raise ImageIOError(
            f"{path}: mask is {mask.shape[1]}x{mask.shape[0]} but the image "
            f"is {image.shape[1]}x{image.shape[0]}"
        )
    return mask


def quantise(img) -> np.ndarray:
    """Clamp to [0, 255] and round to uint8 with halves rounding up."""
    img = as_image(img)
    return np.floor(np.clip(img, 0.0, 255.0) + 0.5).astype(np.uint8)


def save_image(img, path) -> None:
    """Write an image as binary PGM or PNG depending on the file suffix."""
    path = Path(path)
    data = quantise(img)
    suffix = path.suffix.lower()
    try:
        if suffix == ".pgm":
            height, width = data.shape
            header = f"P5\n{width} {height}\n255\n".encode("ascii")
            path.write_bytes(header + data.tobytes())
        elif suffix == ".png":
            Image.fromarray(data, mode="L").save(path, format="PNG")
        else:
            raise ImageIOError(
                f"{path}: unsupported output suffix {suffix!r}, use .pgm or .png"
            )
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc.strerror or exc}") from exc

"""Image and mask containers shared by the numerical modules.

Images are 2-D float64 arrays in row-major order (axis 0 = y, axis 1 = x)
with grey values in the working range [0, 255]. Masks are boolean arrays of
the same shape, True marking pixels whose values are known and held fixed.
The grid spacing ``h`` is passed to the stencil operators; it defaults to 1.
"""

from __future__ import annotations

import numpy as np


def as_image(values) -> np.ndarray:
    """Coerce input to a 2-D float64 image array and validate its shape."""
    img = np.asarray(values, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image dimensions must be >= 1, got {img.shape}")
    return img


def as_mask(values, image: np.ndarray | None = None) -> np.ndarray:
    """Coerce input to a boolean mask, optionally checking it matches an image."""
    mask = np.asarray(values)
    if mask.dtype != np.bool_:
        mask = mask.astype(bool)
    if mask.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {mask.shape}")
    if image is not None and mask.shape != image.shape:
        raise ValueError(
            f"mask shape {mask.shape} does not match image shape {image.shape}"
        )
    return mask


def mirror_extend(img, layers: int) -> np.ndarray:
    """Extend an image by ``layers`` mirrored dummy pixels on every side.

    Uses whole-sample reflection (the dummy pixel at offset -1 copies the
    pixel at offset 0, offset -2 copies offset 1, and so on), repeated as
    often as needed when ``layers`` exceeds the image extent.
    """
    img = as_image(img)
    layers = int(layers)
    if layers < 1:
        raise ValueError(f"layers must be >= 1, got {layers}")
    return np.pad(img, layers, mode="symmetric")


def assert_finite(img) -> None:
    """Raise ValueError naming the first non-finite pixel, if any.

    Scans in row-major order; the error message reports (x, y) = (col, row).
    """
    img = np.asarray(img, dtype=np.float64)
    finite = np.isfinite(img)
    if finite.all():
        return
    flat_idx = int(np.argmax(~finite))
    row, col = np.unravel_index(flat_idx, img.shape)
    raise ValueError(
        f"non-finite value {img[row, col]!r} at pixel (x={col}, y={row})"
    )

"""Finite-difference operators on mirrored grids.

Conventions: x runs along axis 1 (columns), y along axis 0 (rows), with y
increasing downwards. All stencils read neighbours from a one-layer mirror
extension, so every operator returns an array of the input shape. Sums over
neighbours are accumulated as differences against the centre pixel, which
keeps rounding error proportional to local contrast.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .grid import as_image, mirror_extend

SQRT2 = np.sqrt(2.0)


class Gradient(NamedTuple):
    gx: np.ndarray
    gy: np.ndarray


def _neighbours(img: np.ndarray):
    """Return the 8 mirrored neighbour views (N, S, W, E, NW, NE, SW, SE)."""
    p = mirror_extend(img, 1)
    n = p[:-2, 1:-1]
    s = p[2:, 1:-1]
    w = p[1:-1, :-2]
    e = p[1:-1, 2:]
    nw = p[:-2, :-2]
    ne = p[:-2, 2:]
    sw = p[2:, :-2]
    se = p[2:, 2:]
    return n, s, w, e, nw, ne, sw, se


def sobel_gradient(img, h: float = 1.0) -> Gradient:
    """Sobel gradient with 1/(8h) normalisation, zeroed on the border ring.

    The smoothing leg [1, 2, 1] and derivative leg [-1, 0, 1] combine to an
    operator that is exact for linear ramps. Border pixels would differentiate
    mirrored data, which always yields spurious values there, so the outermost
    pixel layer is set to zero instead.
    """
    img = as_image(img)
    h = float(h)
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    if img.shape[0] < 2 or img.shape[1] < 2:
        raise ValueError(
            f"gradient needs at least 2 pixels per dimension, got {img.shape}"
        )
    n, s, w, e, nw, ne, sw, se = _neighbours(img)
    scale = 1.0 / (8.0 * h)
    gx = (ne - nw + 2.0 * (e - w) + se - sw) * scale
    gy = (sw - nw + 2.0 * (s - n) + se - ne) * scale
    for g in (gx, gy):
        g[0, :] = 0.0
        g[-1, :] = 0.0
        g[:, 0] = 0.0
        g[:, -1] = 0.0
    return Gradient(gx, gy)


def laplacian(img, delta: float, h: float = 1.0) -> np.ndarray:
    """Laplacian blending the axial 5-point and diagonal stencils.

    delta = 0 is the classical 5-point stencil, delta = 1 the purely diagonal
    one; both and every convex blend are consistent with the Laplacian. The
    default blend used elsewhere, delta = sqrt(2) - 1, reduces directional
    bias of the combined evolution.
    """
    img = as_image(img)
    delta = float(delta)
    h = float(h)
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must be in [0, 1], got {delta}")
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    n, s, w, e, nw, ne, sw, se = _neighbours(img)
    axial = (e - img) + (w - img) + (s - img) + (n - img)
    diag = (ne - img) + (nw - img) + (se - img) + (sw - img)
    return (1.0 - delta) / (h * h) * axial + delta / (2.0 * h * h) * diag


def directional_second_derivative(img, c, s, h: float = 1.0) -> np.ndarray:
    """Second derivative along the unit direction (c, s) per pixel.

    Combines the central second differences as c^2 u_xx + 2 c s u_xy +
    s^2 u_yy. Direction fields must be normalised; |c^2 + s^2 - 1| <= 1e-8
    is enforced everywhere.
    """
    img = as_image(img)
    h = float(h)
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    c = np.asarray(c, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    norm_err = np.abs(c * c + s * s - 1.0)
    if norm_err.max() > 1e-8:
        raise ValueError(
            f"direction must be unit length, worst |c^2+s^2-1| = {norm_err.max():.3e}"
        )
    n, sx, w, e, nw, ne, sw, se = _neighbours(img)
    inv_h2 = 1.0 / (h * h)
    dxx = ((e - img) + (w - img)) * inv_h2
    dyy = ((sx - img) + (n - img)) * inv_h2
    dxy = (se - sw - ne + nw) * (0.25 * inv_h2)
    return c * c * dxx + 2.0 * c * s * dxy + s * s * dyy

"""Structure tensor and its dominant orientation.

The tensor averages outer products of presmoothed gradients over a
neighbourhood, trading the sign of single gradients for a robust local
orientation estimate: its dominant eigenvector points across coherent
structures even where individual gradients cancel.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .derivatives import sobel_gradient
from .grid import as_image
from .smoothing import convolve_gaussian

# Relative threshold below which a tensor counts as isotropic.
DEGENERATE_RTOL = 1e-12


class StructureTensor(NamedTuple):
    j11: np.ndarray
    j12: np.ndarray
    j22: np.ndarray


class Direction(NamedTuple):
    c: np.ndarray
    s: np.ndarray


def structure_tensor(img, sigma: float, rho: float, h: float = 1.0) -> StructureTensor:
    """Per-pixel structure tensor of an image.

    Parameters
    ----------
    img : array_like
        2-D grey value image.
    sigma : float
        Presmoothing scale applied to the image before differentiation.
    rho : float
        Integration scale averaging the gradient outer products.
    h : float
        Grid spacing.

    Returns
    -------
    StructureTensor
        Componentwise arrays (j11, j12, j22) of the symmetric 2x2 tensor;
        positive semidefinite at every pixel.
    """
    img = as_image(img)
    smoothed = convolve_gaussian(img, sigma, h)
    gx, gy = sobel_gradient(smoothed, h)
    j11 = convolve_gaussian(gx * gx, rho, h)
    j12 = convolve_gaussian(gx * gy, rho, h)
    j22 = convolve_gaussian(gy * gy, rho, h)
    return StructureTensor(j11, j12, j22)


def dominant_direction(tensor: StructureTensor) -> Direction:
    """Unit eigenvector fields for the larger eigenvalue of a 2x2 tensor.

    The eigenvalue follows from the characteristic polynomial,
    mu1 = ((j11 + j22) + sqrt((j11 - j22)^2 + 4 j12^2)) / 2, and of the two
    algebraically equivalent eigenvector candidates (j12, mu1 - j11) and
    (mu1 - j22, j12) the one with the larger norm is kept for stability.
    Isotropic tensors (off-diagonal and diagonal gap both below
    DEGENERATE_RTOL times the trace) have no preferred orientation and map
    to (1, 0). Signs are canonicalised to c > 0, or s >= 0 where c == 0.
    """
    j11 = np.asarray(tensor[0], dtype=np.float64)
    j12 = np.asarray(tensor[1], dtype=np.float64)
    j22 = np.asarray(tensor[2], dtype=np.float64)
    trace = j11 + j22
    gap = j11 - j22
    root = np.sqrt(gap * gap + 4.0 * j12 * j12)
    mu1 = 0.5 * (trace + root)

    vx1, vy1 = j12, mu1 - j11
    vx2, vy2 = mu1 - j22, j12
    norm1 = np.hypot(vx1, vy1)
    norm2 = np.hypot(vx2, vy2)
    take2 = norm2 > norm1
    vx = np.where(take2, vx2, vx1)
    vy = np.where(take2, vy2, vy1)
    norm = np.where(take2, norm2, norm1)

    limit = DEGENERATE_RTOL * trace
    degenerate = (np.abs(gap) <= limit) & (np.abs(j12) <= limit) | (norm == 0.0)
    safe_norm = np.where(degenerate, 1.0, norm)
    c = np.where(degenerate, 1.0, vx / safe_norm)
    s = np.where(degenerate, 0.0, vy / safe_norm)

    flip = (c < 0.0) | ((c == 0.0) & (s < 0.0))
    sign = np.where(flip, -1.0, 1.0)
    return Direction(c * sign, s * sign)

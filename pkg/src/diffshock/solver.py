"""Inpainting by a pixelwise blend of diffusion and shock filtering.

Unknown pixels evolve under g * (Laplacian) + (1 - g) * (shock term), where
the weight g in (0, 1] is a decreasing function of the presmoothed gradient
magnitude: smooth regions favour diffusion, edges favour sharpening. Known
pixels act as Dirichlet data and are never altered. With the step size at or
below the stability bound every iterate stays inside the initial grey value
range, so the evolution cannot over- or undershoot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .derivatives import laplacian, sobel_gradient
from .grid import as_image, as_mask
from .morphology import (
    ROTATION_DELTA,
    dilation_gradient_norm,
    erosion_gradient_norm,
    stability_bounds,
)
from .shock import SolveStats, shock_sign_field
from .smoothing import convolve_gaussian


@dataclass
class SolverParams:
    """Settings for the inpainting evolution.

    sigma and rho steer the shock term's orientation estimate, nu is the
    presmoothing scale of the gradient entering the weight g, and lam is the
    contrast scale at which diffusion and sharpening balance. tau = None
    selects the largest step size covered by both stability bounds.
    """

    sigma: float = 2.0
    rho: float = 5.0
    nu: float = 3.0
    lam: float = 3.0
    delta: float = ROTATION_DELTA
    h: float = 1.0
    tau: float | None = None
    tol: float = 1e-3
    max_iter: int = 50_000

    def validate(self) -> None:
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.rho < 0:
            raise ValueError(f"rho must be >= 0, got {self.rho}")
        if self.nu < 0:
            raise ValueError(f"nu must be >= 0, got {self.nu}")
        if self.lam <= 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")
        if self.h <= 0:
            raise ValueError(f"h must be > 0, got {self.h}")
        if self.tol <= 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tau is not None and self.tau <= 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")

    def resolved_tau(self) -> float:
        bounds = stability_bounds(self.delta, self.h)
        bound = min(bounds.tau_d, bounds.tau_m)
        if self.tau is None:
            return bound
        if self.tau > bound:
            raise ValueError(
                f"tau = {self.tau} exceeds the stable step bound {bound}"
            )
        return float(self.tau)


def charbonnier_weight(s2, lam: float) -> np.ndarray | float:
    """Diffusion weight g(s2) = 1 / sqrt(1 + s2 / lam^2) for s2 >= 0.

    Equals 1 at zero contrast, 1/sqrt(2) at s2 = lam^2 and decays to 0; the
    returned values always lie in (0, 1].
    """
    lam = float(lam)
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    s2 = np.asarray(s2, dtype=np.float64)
    if (s2 < 0).any():
        raise ValueError("squared gradient magnitude must be >= 0")
    out = 1.0 / np.sqrt(1.0 + s2 / (lam * lam))
    return out if out.ndim else float(out)


def weight_field(u, nu: float, lam: float, h: float = 1.0) -> np.ndarray:
    """Pixelwise diffusion weight from the nu-presmoothed gradient magnitude."""
    u = as_image(u)
    smoothed = convolve_gaussian(u, nu, h)
    gx, gy = sobel_gradient(smoothed, h)
    return charbonnier_weight(gx * gx + gy * gy, lam)


def _blended_update(u, params: SolverParams) -> np.ndarray:
    """Update increment of the combined evolution, without the step size."""
    sign = shock_sign_field(u, params.sigma, params.rho, params.h)
    speed = np.zeros_like(u)
    dilate = sign < 0
    erode = sign > 0
    if dilate.any():
        speed[dilate] = dilation_gradient_norm(u, params.delta, params.h)[dilate]
    if erode.any():
        speed[erode] = erosion_gradient_norm(u, params.delta, params.h)[erode]
    g = weight_field(u, params.nu, params.lam, params.h)
    return g * laplacian(u, params.delta, params.h) + (1.0 - g) * speed


def ds_step(u, f, mask, params: SolverParams) -> np.ndarray:
    """One explicit inpainting step; known pixels are copied from f."""
    u = as_image(u)
    f = as_image(f)
    mask = as_mask(mask, u)
    if f.shape != u.shape:
        raise ValueError(f"data shape {f.shape} does not match image {u.shape}")
    params.validate()
    tau = params.resolved_tau()
    out = u + tau * _blended_update(u, params)
    out[mask] = f[mask]
    return out


def _inpaint_loop(f, mask, params: SolverParams, step, init=None):
    f = as_image(f)
    mask = as_mask(mask, f)
    params.validate()
    params.resolved_tau()
    if not mask.any():
        raise ValueError("mask marks no known pixels, nothing to inpaint from")
    u = f.copy() if init is None else as_image(init).copy()
    if u.shape != f.shape:
        raise ValueError(f"init shape {u.shape} does not match data {f.shape}")
    u[mask] = f[mask]
    unknown = ~mask
    has_unknown = bool(unknown.any())
    residual = 0.0
    iterations = 0
    for iterations in range(1, params.max_iter + 1):
        unew = step(u)
        unew[mask] = f[mask]
        residual = float(np.abs(unew - u)[unknown].max()) if has_unknown else 0.0
        u = unew
        if residual < params.tol:
            return u, SolveStats(iterations, residual, True)
    return u, SolveStats(iterations, residual, False)


def ds_inpaint(f, mask, params: SolverParams, init=None) -> tuple[np.ndarray, SolveStats]:
    """Evolve the blended equation to its steady state on the unknown pixels.

    f supplies the Dirichlet data on the mask; init optionally replaces the
    start values on unknown pixels (defaults to f itself). Iteration stops
    when the max-norm update over the unknown pixels drops below tol, or
    after max_iter steps with converged = False.
    """
    tau = params.resolved_tau()

    def step(u):
        return u + tau * _blended_update(u, params)

    return _inpaint_loop(f, mask, params, step, init)


def homogeneous_diffusion_inpaint(
    f, mask, params: SolverParams, init=None
) -> tuple[np.ndarray, SolveStats]:
    """Baseline: steady state of the plain Laplacian evolution.

    Uses the same stencil blend, step size rule and stopping criterion as
    ds_inpaint, with the shock term and the weight g switched off.
    """
    tau = params.resolved_tau()

    def step(u):
        return u + tau * laplacian(u, params.delta, params.h)

    return _inpaint_loop(f, mask, params, step, init)

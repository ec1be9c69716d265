"""Synthetic test images, masks and quality metrics.

Each generator builds a scene with a known ground truth so reconstructions
can be scored. Generators are deterministic; the ones using randomness take
an explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import as_image, as_mask
from .shock import ShockParams
from .solver import SolverParams

BLACK = 0.0
WHITE = 255.0
MID = 127.5


def _canvas(width: int, height: int, value: float = WHITE) -> np.ndarray:
    if width < 1 or height < 1:
        raise ValueError(f"canvas must be at least 1x1, got {width}x{height}")
    return np.full((height, width), value, dtype=np.float64)


def gen_line(
    width: int = 512,
    height: int = 384,
    angle_deg: float = 30.0,
    thickness: float = 5.0,
    fraction_drawn: float = 0.4,
) -> np.ndarray:
    """Black line segment on white, drawn from one end of its full extent.

    The full extent is the chord through the centre pixel at the given angle
    (measured from the x axis towards positive y, i.e. clockwise on screen),
    clipped to the canvas. Only the leading fraction_drawn of that chord is
    drawn. Pixels are shaded by their perpendicular coverage, so axis-aligned
    lines of odd integer thickness come out exactly binary.
    """
    if thickness <= 0:
        raise ValueError(f"thickness must be > 0, got {thickness}")
    if not 0.0 < fraction_drawn <= 1.0:
        raise ValueError(f"fraction_drawn must be in (0, 1], got {fraction_drawn}")
    img = _canvas(width, height)
    cx = float((width - 1) // 2)
    cy = float((height - 1) // 2)
    theta = np.deg2rad(float(angle_deg))
    wx, wy = float(np.cos(theta)), float(np.sin(theta))

    # Clip the chord centre + t * (wx, wy) against the canvas rectangle.
    t_lo, t_hi = -np.inf, np.inf
    for centre, direction, limit in ((cx, wx, width - 1), (cy, wy, height - 1)):
        if abs(direction) < 1e-12:
            continue
        a = (0.0 - centre) / direction
        b = (limit - centre) / direction
        t_lo = max(t_lo, min(a, b))
        t_hi = min(t_hi, max(a, b))
    t_end = t_lo + fraction_drawn * (t_hi - t_lo)

    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    along = (xx - cx) * wx + (yy - cy) * wy
    across = np.abs(-(xx - cx) * wy + (yy - cy) * wx)
    cov_across = np.clip(0.5 * thickness + 0.5 - across, 0.0, 1.0)
    cov_along = np.clip(np.minimum(along - t_lo, t_end - along) + 1.0, 0.0, 1.0)
    img -= (WHITE - BLACK) * cov_across * cov_along
    return img


def _stripe_pattern(size: int, layout: str) -> tuple[np.ndarray, np.ndarray]:
    """Uninterrupted bar/cross pattern plus the mask hiding part of it."""
    img = _canvas(size, size)
    mask = np.ones((size, size), dtype=bool)
    if layout == "bars":
        th = max(2, round(size * 11 / 128))
        for k in range(6):
            centre = round(size * (2 * k + 1) / 12)
            img[centre - th // 2 : centre - th // 2 + th, :] = BLACK
        gap = max(2, round(size * 7 / 64))
        lo = (size - gap) // 2
        mask[:, lo : lo + gap] = False
    elif layout == "cross":
        th = max(2, round(size * 7 / 64))
        lo = (size - th) // 2
        img[lo : lo + th, :] = BLACK
        img[:, lo : lo + th] = BLACK
        hole = max(2, round(size * 7 / 32))
        hlo = (size - hole) // 2
        mask[hlo : hlo + hole, hlo : hlo + hole] = False
    else:
        raise ValueError(f"layout must be 'bars' or 'cross', got {layout!r}")
    return img, mask


def gen_bars_cross(size: int = 256, layout: str = "bars") -> tuple[np.ndarray, np.ndarray]:
    """Stripe scene with a rectangular unknown region interrupting it.

    layout "bars" draws six horizontal bars crossed by an unknown vertical
    stripe; layout "cross" draws two orthogonal arms with an unknown square
    over their intersection. The unknown region is pre-filled with mid grey,
    so the returned image shows the interruption itself; the uninterrupted
    pattern serves as ground truth for scoring (see make_experiment).
    """
    img, mask = _stripe_pattern(size, layout)
    img[~mask] = MID
    return img, mask


def gen_dipoles(size: int = 128, n_dipoles: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Scene whose only known pixels are black/white dipoles.

    n_dipoles = 1 places one horizontally adjacent pair at the centre, black
    left of white. n_dipoles = 4 places radially oriented pairs north, east,
    south and west of the centre, black towards the centre. All other pixels
    are unknown and filled with the mid grey value.
    """
    img = _canvas(size, size, MID)
    mask = np.zeros((size, size), dtype=bool)
    c = size // 2
    if n_dipoles == 1:
        img[c, c - 1] = BLACK
        img[c, c] = WHITE
        mask[c, c - 1] = True
        mask[c, c] = True
    elif n_dipoles == 4:
        r = max(2, round(size * 0.25))
        for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            inner = (c + dy * (r - 1), c + dx * (r - 1))
            outer = (c + dy * r, c + dx * r)
            img[inner] = BLACK
            img[outer] = WHITE
            mask[inner] = True
            mask[outer] = True
    else:
        raise ValueError(f"n_dipoles must be 1 or 4, got {n_dipoles}")
    return img, mask


def gen_kanizsa(size: int = 256, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Three pac-man discs suggesting a triangle; everything else unknown.

    Each disc is black with a white wedge opening towards the other two
    vertices. Unknown pixels carry seeded uniform noise so the solver start
    is reproducible.
    """
    rng = np.random.default_rng(seed)
    img = rng.uniform(BLACK, WHITE, size=(size, size))
    mask = np.zeros((size, size), dtype=bool)
    centre = (size - 1) / 2.0
    big_r = 0.30 * size
    pac_r = 0.15 * size
    angles = np.deg2rad([-90.0, 30.0, 150.0])
    verts = [
        (centre + big_r * np.cos(a), centre + big_r * np.sin(a)) for a in angles
    ]
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    for i, (vx, vy) in enumerate(verts):
        inside = (xx - vx) ** 2 + (yy - vy) ** 2 <= pac_r * pac_r
        others = [verts[j] for j in range(3) if j != i]
        phi = np.arctan2(yy - vy, xx - vx)
        a0 = np.arctan2(others[0][1] - vy, others[0][0] - vx)
        a1 = np.arctan2(others[1][1] - vy, others[1][0] - vx)
        # Wedge spans the smaller arc between the directions to the other
        # vertices (60 degrees for an equilateral triangle).
        rel = np.mod(phi - a0, 2.0 * np.pi)
        span = np.mod(a1 - a0, 2.0 * np.pi)
        if span > np.pi:
            rel = np.mod(phi - a1, 2.0 * np.pi)
            span = 2.0 * np.pi - span
        wedge = rel <= span
        img[inside] = np.where(wedge[inside], WHITE, BLACK)
        mask |= inside
    return img, mask


def gen_smooth(size: int = 256) -> np.ndarray:
    """Deterministic smooth image used by the sparse inpainting scenes."""
    y, x = np.mgrid[0:size, 0:size].astype(np.float64) / max(size - 1, 1)
    img = (
        MID
        + 80.0 * np.sin(2.3 * np.pi * x + 0.7) * np.cos(1.7 * np.pi * y - 0.3)
        + 30.0 * (x - y)
    )
    return np.clip(img, BLACK, WHITE)


def gen_sparse_mask(img, density: float, seed: int = 0) -> np.ndarray:
    """Mark round(density * pixels) uniformly chosen pixels as known."""
    img = as_image(img)
    if not 0.0 < density <= 1.0:
        raise ValueError(f"density must be in (0, 1], got {density}")
    count = int(round(density * img.size))
    count = max(1, count)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(img.size, size=count, replace=False)
    mask = np.zeros(img.size, dtype=bool)
    mask[chosen] = True
    return mask.reshape(img.shape)


def apply_init(img, mask, mode: str = "input", seed: int = 0) -> np.ndarray:
    """Replace unknown pixel values according to the init mode.

    "input" keeps them, "zero" blanks them, "mean" uses the mean of the known
    pixels and "random" draws seeded uniform noise in [0, 255].
    """
    img = as_image(img).copy()
    mask = as_mask(mask, img)
    unknown = ~mask
    if mode == "input":
        pass
    elif mode == "zero":
        img[unknown] = 0.0
    elif mode == "mean":
        if not mask.any():
            raise ValueError("mean init requires at least one known pixel")
        img[unknown] = img[mask].mean()
    elif mode == "random":
        rng = np.random.default_rng(seed)
        noise = rng.uniform(BLACK, WHITE, size=img.shape)
        img[unknown] = noise[unknown]
    else:
        raise ValueError(f"unknown init mode {mode!r}")
    return img


def metric_mse(a, b) -> float:
    """Mean squared grey value difference."""
    a = as_image(a)
    b = as_image(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def metric_binary_agreement(a, b, threshold: float = MID) -> float:
    """Fraction of pixels on the same side of the threshold in both images."""
    a = as_image(a)
    b = as_image(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.mean((a >= threshold) == (b >= threshold)))


def metric_sharpness(img, eps: float = 1.0) -> float:
    """Fraction of pixels within eps of pure black or pure white."""
    img = as_image(img)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    return float(np.mean((img <= BLACK + eps) | (img >= WHITE - eps)))


@dataclass
class ExperimentSpec:
    """A ready-to-run scene: inputs, solver settings and optional truth."""

    name: str
    kind: str  # "inpaint" or "shock"
    image: np.ndarray
    mask: np.ndarray | None
    params: SolverParams | ShockParams
    init: str = "input"
    seed: int = 0
    expected: np.ndarray | None = field(default=None, repr=False)


def experiment_names() -> list[str]:
    return ["line", "bars", "cross", "dipole1", "dipole4", "kanizsa", "sparse"]


def make_experiment(name: str, seed: int = 0) -> ExperimentSpec:
    """Build one of the named scenes with its reference solver settings."""
    if name == "line":
        img = gen_line()
        return ExperimentSpec(
            name, "shock", img, None, ShockParams(sigma=2.0, rho=5.0), seed=seed
        )
    if name == "bars":
        img, mask = gen_bars_cross(256, "bars")
        expected, _ = _stripe_pattern(256, "bars")
        params = SolverParams(sigma=2.0, rho=5.0, nu=3.0, lam=3.0)
        return ExperimentSpec(
            name, "inpaint", img, mask, params, seed=seed, expected=expected
        )
    if name == "cross":
        img, mask = gen_bars_cross(256, "cross")
        expected, _ = _stripe_pattern(256, "cross")
        params = SolverParams(sigma=2.0, rho=5.0, nu=2.0, lam=2.0)
        return ExperimentSpec(
            name, "inpaint", img, mask, params, seed=seed, expected=expected
        )
    if name == "dipole1":
        img, mask = gen_dipoles(128, 1)
        params = SolverParams(sigma=1.0, rho=2.0, nu=2.0, lam=1.0)
        c = 128 // 2
        expected = np.full(img.shape, WHITE)
        expected[:, :c] = BLACK
        return ExperimentSpec(
            name, "inpaint", img, mask, params, init="mean", seed=seed, expected=expected
        )
    if name == "dipole4":
        img, mask = gen_dipoles(127, 4)
        params = SolverParams(sigma=2.65, rho=4.0, nu=2.0, lam=3.0)
        c = 127 // 2
        r = max(2, round(127 * 0.25))
        yy, xx = np.mgrid[0:127, 0:127].astype(np.float64)
        expected = np.where(
            np.hypot(xx - c, yy - c) <= r - 0.5, BLACK, WHITE
        )
        return ExperimentSpec(
            name, "inpaint", img, mask, params, init="mean", seed=seed, expected=expected
        )
    if name == "kanizsa":
        img, mask = gen_kanizsa(256, seed)
        params = SolverParams(sigma=4.7, rho=6.0, nu=5.2, lam=3.4)
        return ExperimentSpec(name, "inpaint", img, mask, params, seed=seed)
    if name == "sparse":
        img = gen_smooth(256)
        mask = gen_sparse_mask(img, 0.1, seed)
        params = SolverParams(sigma=2.0, rho=1.5, nu=5.0, lam=3.0)
        return ExperimentSpec(
            name, "inpaint", img, mask, params, init="mean", seed=seed, expected=img
        )
    raise ValueError(
        f"unknown experiment {name!r}, choose from {', '.join(experiment_names())}"
    )

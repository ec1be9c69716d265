import numpy as np
import pytest

from diffshock.morphology import (
    ROTATION_DELTA,
    StabilityBounds,
    dilation_gradient_norm,
    erosion_gradient_norm,
    stability_bounds,
)

# Frozen stability bounds (independent evaluation of the closed formulas).
TAU_D_ROT = 0.31530096874093538
TAU_M_ROT = 0.80473785412436494
TAU_M_AXIAL = 0.70710678118654746

# Frozen one-step values for a 3x3 image with a bright centre (255, rest 0),
# dilated with tau = TAU_M_ROT, delta = ROTATION_DELTA:
# edge neighbours gain tau*(1-delta)*255, corners tau*delta*255/sqrt(2).
DILATED_EDGE = 120.20815280171306
DILATED_CORNER = 60.104076400856549


def test_stability_bounds_frozen_values():
    bounds = stability_bounds(ROTATION_DELTA, 1.0)
    assert isinstance(bounds, StabilityBounds)
    assert bounds.tau_d == pytest.approx(TAU_D_ROT, rel=1e-14)
    assert bounds.tau_m == pytest.approx(TAU_M_ROT, rel=1e-14)
    axial = stability_bounds(0.0, 1.0)
    assert axial.tau_d == pytest.approx(0.25, rel=1e-15)
    assert axial.tau_m == pytest.approx(TAU_M_AXIAL, rel=1e-14)
    diagonal = stability_bounds(1.0, 1.0)
    assert diagonal.tau_d == pytest.approx(0.5, rel=1e-15)
    assert diagonal.tau_m == pytest.approx(1.0, rel=1e-15)


def test_stability_bounds_scale_with_h():
    b1 = stability_bounds(ROTATION_DELTA, 1.0)
    b2 = stability_bounds(ROTATION_DELTA, 2.0)
    assert b2.tau_d == pytest.approx(4.0 * b1.tau_d, rel=1e-14)
    assert b2.tau_m == pytest.approx(2.0 * b1.tau_m, rel=1e-14)


def test_stability_bounds_monotone_in_delta():
    deltas = np.linspace(0.0, 1.0, 11)
    taus_d = [stability_bounds(d).tau_d for d in deltas]
    taus_m = [stability_bounds(d).tau_m for d in deltas]
    assert all(a < b for a, b in zip(taus_d, taus_d[1:]))
    assert all(a < b for a, b in zip(taus_m, taus_m[1:]))


def test_stability_bounds_rejects_bad_arguments():
    with pytest.raises(ValueError):
        stability_bounds(-0.1)
    with pytest.raises(ValueError):
        stability_bounds(1.1)
    with pytest.raises(ValueError):
        stability_bounds(0.5, h=0.0)


def test_norms_vanish_on_constants():
    img = np.full((9, 9), 123.0)
    assert np.array_equal(dilation_gradient_norm(img, ROTATION_DELTA), np.zeros((9, 9)))
    assert np.array_equal(erosion_gradient_norm(img, ROTATION_DELTA), np.zeros((9, 9)))


def test_norm_signs_on_random_images():
    rng = np.random.default_rng(4)
    img = rng.uniform(0, 255, size=(16, 16))
    assert dilation_gradient_norm(img, 0.3).min() >= 0.0
    assert erosion_gradient_norm(img, 0.3).max() <= 0.0


def test_unit_ramp_norms_are_exact():
    y, x = np.mgrid[0:16, 0:16].astype(np.float64)
    dil = dilation_gradient_norm(x, ROTATION_DELTA, 1.0)
    ero = erosion_gradient_norm(x, ROTATION_DELTA, 1.0)
    # the upwind slopes flatten against the mirrored border on exactly one
    # side each: the last column for dilation, the first for erosion
    assert np.abs(dil[:, :-1] - 1.0).max() < 1e-12
    assert np.abs(ero[:, 1:] + 1.0).max() < 1e-12


def test_extrema_are_stationary():
    img = np.zeros((7, 7))
    img[3, 3] = 255.0
    dil = dilation_gradient_norm(img, ROTATION_DELTA)
    ero = erosion_gradient_norm(img, ROTATION_DELTA)
    assert dil[3, 3] == 0.0  # local maximum cannot grow
    assert ero[0, 0] == 0.0  # on the minimum plateau, far from the peak
    assert ero[3, 3] < 0.0


def test_duality_with_grey_inversion_is_bit_exact():
    rng = np.random.default_rng(8)
    img = rng.integers(0, 256, size=(24, 24)).astype(np.float64)
    for delta in (0.0, ROTATION_DELTA, 1.0):
        ero = erosion_gradient_norm(img, delta)
        dil = dilation_gradient_norm(255.0 - img, delta)
        assert np.array_equal(ero, -dil)


def test_dilation_step_frozen_three_by_three():
    img = np.zeros((3, 3))
    img[1, 1] = 255.0
    stepped = img + TAU_M_ROT * dilation_gradient_norm(img, ROTATION_DELTA)
    expected = np.array(
        [
            [DILATED_CORNER, DILATED_EDGE, DILATED_CORNER],
            [DILATED_EDGE, 255.0, DILATED_EDGE],
            [DILATED_CORNER, DILATED_EDGE, DILATED_CORNER],
        ]
    )
    assert np.abs(stepped - expected).max() < 1e-12


def test_explicit_steps_respect_range_on_many_random_images():
    rng = np.random.default_rng(12)
    for _ in range(1000):
        img = rng.uniform(0, 255, size=(16, 16))
        delta = rng.uniform(0.0, 1.0)
        tau = stability_bounds(delta).tau_m
        lo, hi = img.min(), img.max()
        dilated = img + tau * dilation_gradient_norm(img, delta)
        eroded = img + tau * erosion_gradient_norm(img, delta)
        assert dilated.min() >= lo and dilated.max() <= hi
        assert eroded.min() >= lo and eroded.max() <= hi


def test_dilation_step_is_monotone():
    rng = np.random.default_rng(14)
    tau = stability_bounds(ROTATION_DELTA).tau_m
    for _ in range(50):
        a = rng.uniform(0, 255, size=(12, 12))
        b = np.maximum(a, rng.uniform(0, 255, size=(12, 12)))
        a1 = a + tau * dilation_gradient_norm(a, ROTATION_DELTA)
        b1 = b + tau * dilation_gradient_norm(b, ROTATION_DELTA)
        assert (a1 <= b1 + 1e-11).all()


def test_norms_reject_bad_arguments():
    with pytest.raises(ValueError):
        dilation_gradient_norm(np.zeros((4, 4)), -0.2)
    with pytest.raises(ValueError):
        erosion_gradient_norm(np.zeros((4, 4)), 0.5, h=-1.0)


def test_dilated_disc_stays_round():
    n = 64
    yy, xx = np.mgrid[0:n, 0:n].astype(np.float64)
    cx = cy = (n - 1) / 2.0
    r0 = 10.0
    dist = np.hypot(xx - cx, yy - cy)
    img = 255.0 * np.clip(r0 + 0.5 - dist, 0.0, 1.0)

    tau = stability_bounds(ROTATION_DELTA).tau_m
    u = img.copy()
    steps = 10
    for _ in range(steps):
        u = u + tau * dilation_gradient_norm(u, ROTATION_DELTA)

    radii = []
    for angle in np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False):
        ex, ey = np.cos(angle), np.sin(angle)
        prev = 255.0
        for step in np.arange(1.0, n / 2.0, 0.25):
            x, y = cx + step * ex, cy + step * ey
            ix, iy = int(np.floor(x)), int(np.floor(y))
            fx, fy = x - ix, y - iy
            val = (
                u[iy, ix] * (1 - fx) * (1 - fy)
                + u[iy, ix + 1] * fx * (1 - fy)
                + u[iy + 1, ix] * (1 - fx) * fy
                + u[iy + 1, ix + 1] * fx * fy
            )
            if val < 127.5:
                frac = (prev - 127.5) / (prev - val)
                radii.append(step - 0.25 + 0.25 * frac)
                break
            prev = val
        else:
            pytest.fail("no boundary crossing found along a ray")
    radii = np.array(radii)
    assert radii.mean() > r0  # the disc did grow
    assert (radii.max() - radii.min()) / radii.mean() < 0.05

import json

import numpy as np
import pytest

from diffshock.cli import main
from diffshock.image_io import load_image, save_image


@pytest.fixture
def scene(tmp_path):
    """A small smooth scene with a square hole, saved as PGM files."""
    yy, xx = np.mgrid[0:16, 0:16]
    img = 60.0 + 8.0 * xx + 4.0 * yy
    mask = np.ones((16, 16), dtype=bool)
    mask[5:11, 5:11] = False
    in_path = tmp_path / "in.pgm"
    mask_path = tmp_path / "mask.pgm"
    save_image(img, in_path)
    save_image(np.where(mask, 255.0, 0.0), mask_path)
    return in_path, mask_path


def _inpaint_args(scene, out, extra=()):
    in_path, mask_path = scene
    return [
        "inpaint", "--in", str(in_path), "--mask", str(mask_path),
        "--out", str(out), *extra,
    ]


def test_inpaint_writes_output_and_report(scene, tmp_path):
    out = tmp_path / "out.png"
    report_path = tmp_path / "report.json"
    rc = main(_inpaint_args(scene, out, ["--report", str(report_path)]))
    assert rc == 0
    assert out.exists()
    report = json.loads(report_path.read_text())
    assert report["width"] == 16 and report["height"] == 16
    assert report["converged"] is True
    assert report["iterations"] > 0
    assert report["residual"] <= report["config"]["tol"]
    assert report["wall_time_s"] > 0.0
    assert report["outputs"]["image"] == str(out)
    # the echoed config resolves the default step size to a number
    assert 0.31 < report["config"]["tau"] < 0.32
    assert report["config"]["lambda"] == 3.0
    assert report["config"]["max-iter"] == 50000


def test_identical_runs_are_bit_identical(scene, tmp_path):
    out1, out2 = tmp_path / "a.png", tmp_path / "b.png"
    assert main(_inpaint_args(scene, out1)) == 0
    assert main(_inpaint_args(scene, out2)) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_baseline_fills_constant_region(tmp_path):
    img = np.full((12, 12), 90.0)
    mask = np.ones((12, 12), dtype=bool)
    mask[4:8, 4:8] = False
    in_path, mask_path, out = tmp_path / "i.pgm", tmp_path / "m.pgm", tmp_path / "o.pgm"
    save_image(img, in_path)
    save_image(np.where(mask, 255.0, 0.0), mask_path)
    rc = main([
        "baseline", "--in", str(in_path), "--mask", str(mask_path),
        "--out", str(out), "--init", "zero",
    ])
    assert rc == 0
    assert np.array_equal(load_image(out), img)


def test_config_file_supplies_defaults_and_flags_win(scene, tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text(
        "# solver settings\nsigma = 4\nlambda = 7\nmax_iter = 123\n"
    )
    out = tmp_path / "out.png"
    report_path = tmp_path / "report.json"
    rc = main(_inpaint_args(scene, out, [
        "--config", str(config), "--sigma", "1.5", "--report", str(report_path),
    ]))
    assert rc == 0
    cfg = json.loads(report_path.read_text())["config"]
    assert cfg["sigma"] == 1.5  # flag beats file
    assert cfg["lambda"] == 7.0
    assert cfg["max-iter"] == 123


def test_unknown_config_key_is_usage_error(scene, tmp_path, capsys):
    config = tmp_path / "bad.cfg"
    config.write_text("sigmaa=2\n")
    rc = main(_inpaint_args(scene, tmp_path / "o.png", ["--config", str(config)]))
    assert rc == 1
    assert "unknown config key" in capsys.readouterr().err


def test_malformed_config_line_is_usage_error(scene, tmp_path, capsys):
    config = tmp_path / "bad.cfg"
    config.write_text("sigma 2\n")
    rc = main(_inpaint_args(scene, tmp_path / "o.png", ["--config", str(config)]))
    assert rc == 1
    assert "expected key=value" in capsys.readouterr().err


def test_missing_required_flag_is_usage_error(scene, capsys):
    in_path, _ = scene
    rc = main(["inpaint", "--in", str(in_path)])
    assert rc == 1
    assert "requires" in capsys.readouterr().err


def test_no_command_is_usage_error(capsys):
    assert main([]) == 1
    assert "usage error" in capsys.readouterr().err


def test_bad_flag_value_is_usage_error(scene, tmp_path, capsys):
    rc = main(_inpaint_args(scene, tmp_path / "o.png", ["--sigma", "lots"]))
    assert rc == 1


def test_missing_input_file_is_io_error(tmp_path, capsys):
    rc = main([
        "inpaint", "--in", str(tmp_path / "absent.pgm"),
        "--mask", str(tmp_path / "absent.pgm"), "--out", str(tmp_path / "o.png"),
    ])
    assert rc == 2
    assert "cannot read" in capsys.readouterr().err


def test_mask_size_mismatch_is_io_error(scene, tmp_path, capsys):
    in_path, _ = scene
    small = tmp_path / "small.pgm"
    save_image(np.full((4, 4), 255.0), small)
    rc = main([
        "inpaint", "--in", str(in_path), "--mask", str(small),
        "--out", str(tmp_path / "o.png"),
    ])
    assert rc == 2
    assert "mask is" in capsys.readouterr().err


def test_unstable_step_size_is_numerical_error(scene, tmp_path, capsys):
    rc = main(_inpaint_args(scene, tmp_path / "o.png", ["--tau", "10"]))
    assert rc == 3
    assert "stable" in capsys.readouterr().err


def test_shock_subcommand_sharpens_a_blurred_edge(tmp_path):
    xx = np.arange(32, dtype=float)
    img = np.tile(255.0 / (1.0 + np.exp(-(xx - 15.5) / 3.0)), (32, 1))
    in_path, out = tmp_path / "edge.pgm", tmp_path / "sharp.pgm"
    save_image(img, in_path)
    rc = main([
        "shock", "--in", str(in_path), "--out", str(out),
        "--sigma", "1", "--rho", "2", "--max-iter", "400",
    ])
    assert rc == 0
    result = load_image(out)
    near_extreme = (result <= 2.0) | (result >= 253.0)
    assert near_extreme.mean() > 0.95


def test_experiment_writes_scene_files_and_report(tmp_path, capsys):
    out_dir = tmp_path / "runs" / "dipole1"
    rc = main([
        "experiment", "--name", "dipole1", "--out", str(out_dir),
        "--max-iter", "5",
    ])
    assert rc == 0
    for stem in ("input", "output", "mask", "expected"):
        assert (out_dir / f"{stem}.png").exists()
    report = json.loads((out_dir / "report.json").read_text())
    assert report["config"]["name"] == "dipole1"
    assert report["iterations"] == 5
    assert report["converged"] is False
    assert set(report["metrics"]) == {"sharpness", "mse", "binary_agreement"}
    assert "not converged" in capsys.readouterr().err


def test_experiment_unknown_name_is_usage_error(tmp_path, capsys):
    rc = main(["experiment", "--name", "mystery", "--out", str(tmp_path)])
    assert rc == 1
    assert "unknown experiment" in capsys.readouterr().err


def test_invalid_init_choice_is_usage_error(scene, tmp_path):
    rc = main(_inpaint_args(scene, tmp_path / "o.png", ["--init", "smear"]))
    assert rc == 1

"""Batch command line interface.

Subcommands: inpaint (blended solver), baseline (homogeneous diffusion),
shock (pure shock filtering) and experiment (named synthetic scenes with
metrics). A key=value config file may supply any flag; explicit flags win.
Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical precondition
violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .experiments import (
    apply_init,
    experiment_names,
    make_experiment,
    metric_binary_agreement,
    metric_mse,
    metric_sharpness,
)
from .image_io import ImageIOError, load_image, load_mask, save_image
from .shock import ShockParams, shock_filter_evolve
from .solver import SolverParams, ds_inpaint, homogeneous_diffusion_inpaint

_FLOAT_KEYS = ("sigma", "rho", "nu", "lambda", "tau", "delta", "tol")
_INT_KEYS = ("max-iter", "seed")
_PATH_KEYS = ("in", "mask", "out")
_STR_KEYS = ("init", "name")
_ALL_KEYS = _FLOAT_KEYS + _INT_KEYS + _PATH_KEYS + _STR_KEYS
_INIT_MODES = ("input", "zero", "mean", "random")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; we map usage to 1
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="diffshock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add_common(p: _Parser) -> None:
        p.add_argument("--config", help="key=value file supplying defaults")
        p.add_argument("--report", help="write a JSON run report here")
        p.add_argument("--sigma", type=float, help="presmoothing scale")
        p.add_argument("--rho", type=float, help="orientation integration scale")
        p.add_argument("--tau", type=float, help="step size (default: stability bound)")
        p.add_argument("--delta", type=float, help="stencil blend weight in [0, 1]")
        p.add_argument("--tol", type=float, help="stopping threshold on the update")
        p.add_argument("--max-iter", type=int, help="iteration cap")
        p.add_argument("--seed", type=int, help="seed for random init / scenes")

    def add_weight(p: _Parser) -> None:
        p.add_argument("--nu", type=float, help="weight presmoothing scale")
        p.add_argument("--lambda", dest="lam", type=float, help="contrast scale")
        p.add_argument("--init", choices=_INIT_MODES, help="fill mode for unknown pixels")

    for name, help_text in (
        ("inpaint", "fill unknown pixels with the blended evolution"),
        ("baseline", "fill unknown pixels with homogeneous diffusion"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="in_path", help="input image (PGM or PNG)")
        p.add_argument("--mask", help="mask image, >= 128 marks known pixels")
        p.add_argument("--out", help="output image path")
        add_common(p)
        add_weight(p)

    p = sub.add_parser("shock", help="run the pure shock filter to steady state")
    p.add_argument("--in", dest="in_path", help="input image (PGM or PNG)")
    p.add_argument("--out", help="output image path")
    add_common(p)

    p = sub.add_parser("experiment", help="run a named synthetic scene")
    p.add_argument("--name", help=f"one of: {', '.join(experiment_names())}")
    p.add_argument("--out", help="output directory for images and report")
    add_common(p)
    add_weight(p)
    return parser


def _parse_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ImageIOError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("_", "-")
        if key not in _ALL_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _convert(key: str, value: str):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
    except ValueError:
        raise UsageError(f"config value for {key!r} is not a number: {value!r}") from None
    if key == "init" and value not in _INIT_MODES:
        raise UsageError(f"init must be one of {', '.join(_INIT_MODES)}, got {value!r}")
    return value


def _merge(args: argparse.Namespace) -> dict:
    """Combine CLI flags over config file values into one dict."""
    file_values = _parse_config_file(args.config) if args.config else {}
    attr_for = {
        "lambda": "lam",
        "max-iter": "max_iter",
        "in": "in_path",
    }
    merged: dict = {"command": args.command, "report": args.report}
    for key in _ALL_KEYS:
        attr = attr_for.get(key, key)
        cli_value = getattr(args, attr, None)
        if cli_value is None and key in file_values:
            cli_value = _convert(key, file_values[key])
        merged[key] = cli_value
    return merged


def _require(cfg: dict, keys: tuple[str, ...]) -> None:
    missing = [f"--{k}" for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError(f"{cfg['command']} requires {', '.join(missing)}")


def _solver_params(cfg: dict) -> SolverParams:
    params = SolverParams()
    for key, attr in (
        ("sigma", "sigma"), ("rho", "rho"), ("nu", "nu"), ("lambda", "lam"),
        ("tau", "tau"), ("delta", "delta"), ("tol", "tol"), ("max-iter", "max_iter"),
    ):
        if cfg[key] is not None:
            setattr(params, attr, cfg[key])
    params.validate()
    return params


def _shock_params(cfg: dict) -> ShockParams:
    params = ShockParams()
    for key, attr in (
        ("sigma", "sigma"), ("rho", "rho"), ("tau", "tau"),
        ("delta", "delta"), ("tol", "tol"), ("max-iter", "max_iter"),
    ):
        if cfg[key] is not None:
            setattr(params, attr, cfg[key])
    params.validate()
    return params


def _config_report(cfg: dict, params) -> dict:
    out = {"command": cfg["command"]}
    for key in _PATH_KEYS + ("name",):
        if cfg.get(key) is not None:
            out[key] = str(cfg[key])
    out["sigma"] = params.sigma
    out["rho"] = params.rho
    if isinstance(params, SolverParams):
        out["nu"] = params.nu
        out["lambda"] = params.lam
    out["tau"] = params.resolved_tau()
    out["delta"] = params.delta
    out["tol"] = params.tol
    out["max-iter"] = params.max_iter
    out["init"] = cfg["init"] if cfg.get("init") is not None else "input"
    out["seed"] = cfg["seed"] if cfg.get("seed") is not None else 0
    return out


def _write_report(report: dict, path) -> None:
    try:
        Path(path).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ImageIOError(f"cannot write report {path}: {exc.strerror or exc}") from exc


def _warn_not_converged(stats) -> None:
    if not stats.converged:
        print(
            f"warning: not converged after {stats.iterations} iterations, "
            f"last update {stats.residual:.3e}",
            file=sys.stderr,
        )


def _run_single(cfg: dict) -> int:
    command = cfg["command"]
    if command == "shock":
        _require(cfg, ("in", "out"))
        params = _shock_params(cfg)
        image = load_image(cfg["in"])
        start = time.perf_counter()
        result, stats = shock_filter_evolve(image, params)
        elapsed = time.perf_counter() - start
    else:
        _require(cfg, ("in", "mask", "out"))
        params = _solver_params(cfg)
        image = load_image(cfg["in"])
        mask = load_mask(cfg["mask"], image)
        init_mode = cfg["init"] if cfg.get("init") is not None else "input"
        seed = cfg["seed"] if cfg.get("seed") is not None else 0
        u0 = apply_init(image, mask, init_mode, seed)
        solve = ds_inpaint if command == "inpaint" else homogeneous_diffusion_inpaint
        start = time.perf_counter()
        result, stats = solve(image, mask, params, init=u0)
        elapsed = time.perf_counter() - start
    save_image(result, cfg["out"])
    _warn_not_converged(stats)
    if cfg["report"]:
        report = {
            "config": _config_report(cfg, params),
            "width": result.shape[1],
            "height": result.shape[0],
            "iterations": stats.iterations,
            "residual": stats.residual,
            "converged": stats.converged,
            "wall_time_s": elapsed,
            "outputs": {"image": str(cfg["out"])},
        }
        _write_report(report, cfg["report"])
    return 0


def _run_experiment(cfg: dict) -> int:
    _require(cfg, ("name", "out"))
    name = cfg["name"]
    if name not in experiment_names():
        raise UsageError(
            f"unknown experiment {name!r}, choose from {', '.join(experiment_names())}"
        )
    seed = cfg["seed"] if cfg.get("seed") is not None else 0
    spec = make_experiment(name, seed=seed)
    out_dir = Path(cfg["out"])
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ImageIOError(f"cannot create {out_dir}: {exc.strerror or exc}") from exc

    if spec.kind == "shock":
        params = _shock_params(cfg)
        params.sigma = cfg["sigma"] if cfg["sigma"] is not None else spec.params.sigma
        params.rho = cfg["rho"] if cfg["rho"] is not None else spec.params.rho
        start_image = spec.image
        start = time.perf_counter()
        result, stats = shock_filter_evolve(start_image, params)
        elapsed = time.perf_counter() - start
    else:
        params = spec.params
        for key, attr in (
            ("sigma", "sigma"), ("rho", "rho"), ("nu", "nu"), ("lambda", "lam"),
            ("tau", "tau"), ("delta", "delta"), ("tol", "tol"), ("max-iter", "max_iter"),
        ):
            if cfg[key] is not None:
                setattr(params, attr, cfg[key])
        params.validate()
        init_mode = cfg["init"] if cfg.get("init") is not None else spec.init
        start_image = apply_init(spec.image, spec.mask, init_mode, seed)
        cfg = dict(cfg, init=init_mode)
        start = time.perf_counter()
        result, stats = ds_inpaint(spec.image, spec.mask, params, init=start_image)
        elapsed = time.perf_counter() - start

    outputs = {"input": str(out_dir / "input.png"), "output": str(out_dir / "output.png")}
    save_image(start_image, outputs["input"])
    save_image(result, outputs["output"])
    if spec.mask is not None:
        outputs["mask"] = str(out_dir / "mask.png")
        save_image(np.where(spec.mask, 255.0, 0.0), outputs["mask"])
    metrics = {"sharpness": metric_sharpness(result)}
    if spec.expected is not None:
        outputs["expected"] = str(out_dir / "expected.png")
        save_image(spec.expected, outputs["expected"])
        metrics["mse"] = metric_mse(result, spec.expected)
        metrics["binary_agreement"] = metric_binary_agreement(result, spec.expected)
    _warn_not_converged(stats)
    report = {
        "config": _config_report(cfg, params),
        "width": result.shape[1],
        "height": result.shape[0],
        "iterations": stats.iterations,
        "residual": stats.residual,
        "converged": stats.converged,
        "wall_time_s": elapsed,
        "metrics": metrics,
        "outputs": outputs,
    }
    _write_report(report, cfg["report"] or out_dir / "report.json")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required (inpaint, shock, baseline, experiment)")
        cfg = _merge(args)
        if cfg["command"] == "experiment":
            return _run_experiment(cfg)
        return _run_single(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ImageIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface: ``cspaceviz <command> ...``.

Exit codes: 0 success, 1 input error, 2 experiment error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .codecs import read_image, write_image
from .exceptions import ExperimentError, InputError
from .experiments import (
    SCHEMA_VERSION, ExperimentConfig, run_accuracy_experiment, run_subset_experiment,
)
from .metrics import mse, negative_subtraction, pixel_setminus
from .planar import ALL, FREE_ONLY, Dataset, PlanarRobot, Workspace, random_workspace, sample_cspace
from .render import COLLISION_GRAY, RenderConfig, crop_legend, render_dataset

log = logging.getLogger("cspaceviz")

EXIT_OK, EXIT_INPUT, EXIT_EXPERIMENT = 0, 1, 2


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def load_dataset(path) -> Dataset:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return Dataset.from_csv(text, workspace_id=path.stem)
    return Dataset.from_json(text)


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args) -> int:
    if args.robot:
        robot = PlanarRobot.from_dict(_load_json(args.robot))
    else:
        robot = PlanarRobot.uniform(args.n_joints, args.link_length, args.half_width)
    if args.workspace:
        ws = Workspace.from_dict(_load_json(args.workspace))
    else:
        ws = random_workspace(args.seed, args.k_obstacles, args.bounds, args.radius_range)
    ds = sample_cspace(robot, ws, args.m, args.seed, FREE_ONLY if args.mode == "free" else ALL)
    out = _out_dir(args)
    _write_json(out / "robot.json", robot.to_dict())
    _write_json(out / "workspace.json", ws.to_dict())
    (out / "dataset.json").write_text(ds.to_json())
    if args.csv:
        (out / "dataset.csv").write_text(ds.to_csv())
    print(json.dumps({"dataset": str(out / "dataset.json"), "m": len(ds),
                      "collision_fraction": float(ds.labels.mean())}))
    return EXIT_OK


def _render_config(args) -> RenderConfig:
    cfg = RenderConfig.from_dict(_load_json(args.config)) if args.config else RenderConfig()
    overrides = {}
    if args.nd is not None:
        overrides["n_d"] = args.nd
    if args.canvas is not None:
        overrides["canvas_px"] = args.canvas
    if getattr(args, "epsilon", None) is not None:
        overrides["epsilon_max"] = args.epsilon
    if getattr(args, "plot_collisions", False):
        overrides["plot_collisions"] = True
    return replace(cfg, **overrides)


def cmd_render(args) -> int:
    ds = load_dataset(args.dataset)
    cfg = _render_config(args)
    img = render_dataset(ds, cfg, collision_color=COLLISION_GRAY if cfg.plot_collisions else None)
    if args.out:
        path = Path(args.out)
    else:
        path = _out_dir(args) / f"render.{args.format}"
    write_image(path, img)
    print(str(path))
    return EXIT_OK


def _image_pair(args):
    a, b = read_image(args.image_a), read_image(args.image_b)
    if args.crop_legend:
        a, b = crop_legend(a), crop_legend(b)
    return a, b


def _stats(a, b) -> tuple:
    diff, st = pixel_setminus(a, b)
    return diff, {"schema_version": SCHEMA_VERSION, **st.to_dict(), "mse": mse(a, b)}


def cmd_diff(args) -> int:
    a, b = _image_pair(args)
    setminus, stats = _stats(a, b)
    out = _out_dir(args)
    write_image(out / f"negative_diff.{args.format}", negative_subtraction(a, b))
    write_image(out / f"setminus.{args.format}", setminus)
    _write_json(out / "stats.json", stats)
    print(json.dumps(stats))
    return EXIT_OK


def cmd_metrics(args) -> int:
    a, b = _image_pair(args)
    _, stats = _stats(a, b)
    print(json.dumps(stats))
    return EXIT_OK


def _experiment_config(args) -> ExperimentConfig:
    d = _load_json(args.config) if args.config else {}
    if args.seed is not None:
        d["seed"] = args.seed
    if args.nd is not None:
        d["n_d"] = args.nd
    if args.workspaces is not None:
        d["n_workspaces"] = args.workspaces
    if args.m is not None:
        d["m"] = args.m
    if args.canvas is not None:
        d["render"] = {**d.get("render", {}), "canvas_px": args.canvas}
    if args.crop_legend:
        d["crop_legend"] = True
    return ExperimentConfig.from_dict(d)


ND_SWEEP = (100, 250, 500, 1000)


def _run_experiment(args, runner, name: str) -> int:
    base = _experiment_config(args)
    out = _out_dir(args)
    configs = [(replace(base, n_d=n_d), f"_nd{n_d}") for n_d in ND_SWEEP] if args.nd_sweep else [(base, "")]
    status = EXIT_OK
    for cfg, suffix in configs:
        sink = None
        if args.save_images:
            img_dir = out / f"images{suffix}"
            img_dir.mkdir(exist_ok=True)

            def sink(w, f, img, img_dir=img_dir):
                write_image(img_dir / f"ws{w:03d}_f{round(f * 100):03d}.{args.format}", img)

        report = runner(cfg, image_sink=sink)
        path = out / f"{name}_report{suffix}.json"
        _write_json(path, report)
        summary = report.get("summary") if name == "accuracy" else report.get("table")
        print(json.dumps({"report": str(path), "n_d": cfg.n_d, "summary": summary}))
        if name == "accuracy" and report["degenerate"]:
            status = EXIT_EXPERIMENT
    return status


def cmd_exp_accuracy(args) -> int:
    return _run_experiment(args, run_accuracy_experiment, "accuracy")


def cmd_exp_subset(args) -> int:
    return _run_experiment(args, run_subset_experiment, "subset")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cspaceviz", description="Sample, render and compare radial C-space visualizations.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a planar robot's C-space into a dataset")
    g.add_argument("--robot", help="robot JSON (default: uniform chain)")
    g.add_argument("--workspace", help="workspace JSON (default: random obstacles)")
    g.add_argument("--n-joints", type=int, default=2)
    g.add_argument("--link-length", type=float, default=1.0)
    g.add_argument("--half-width", type=float, default=0.05)
    g.add_argument("--k-obstacles", type=int, default=3)
    g.add_argument("--bounds", type=float, nargs=4, default=(-2.0, 2.0, -2.0, 2.0),
                   metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    g.add_argument("--radius-range", type=float, nargs=2, default=(0.1, 0.4), metavar=("RMIN", "RMAX"))
    g.add_argument("--m", type=int, default=10_000)
    g.add_argument("--mode", choices=("free", "all"), default="free")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--csv", action="store_true", help="also write dataset.csv")
    g.add_argument("--out-dir", default=".")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("render", help="render a dataset (.json or .csv) to an image")
    r.add_argument("dataset")
    r.add_argument("--config", help="render config JSON")
    r.add_argument("--nd", type=int)
    r.add_argument("--canvas", type=int)
    r.add_argument("--epsilon", type=float)
    r.add_argument("--plot-collisions", action="store_true", help="draw collision states in gray")
    r.add_argument("--format", choices=("ppm", "png"), default="png")
    r.add_argument("--out", help="output file (extension picks the format)")
    r.add_argument("--out-dir", default=".")
    r.set_defaults(func=cmd_render)

    for name, func, text in (("diff", cmd_diff, "write difference images and stats for A vs B"),
                             ("metrics", cmd_metrics, "print mismatch ratio and MSE for A vs B")):
        d = sub.add_parser(name, help=text)
        d.add_argument("image_a")
        d.add_argument("image_b")
        d.add_argument("--crop-legend", action="store_true")
        if name == "diff":
            d.add_argument("--format", choices=("ppm", "png"), default="png")
            d.add_argument("--out-dir", default=".")
        d.set_defaults(func=func)

    for name, func in (("exp-accuracy", cmd_exp_accuracy), ("exp-subset", cmd_exp_subset)):
        e = sub.add_parser(name, help=f"run the {name[4:]} experiment")
        e.add_argument("--config", help="experiment config JSON")
        e.add_argument("--seed", type=int)
        e.add_argument("--nd", type=int)
        e.add_argument("--m", type=int)
        e.add_argument("--workspaces", type=int)
        e.add_argument("--canvas", type=int)
        e.add_argument("--crop-legend", action="store_true")
        e.add_argument("--save-images", action="store_true")
        e.add_argument("--nd-sweep", action="store_true",
                       help=f"repeat the run for n_d in {', '.join(map(str, ND_SWEEP))}")
        e.add_argument("--format", choices=("ppm", "png"), default="png")
        e.add_argument("--out-dir", default=".")
        e.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ExperimentError as exc:
        print(f"experiment error: {exc}", file=sys.stderr)
        return EXIT_EXPERIMENT


if __name__ == "__main__":
    sys.exit(main())

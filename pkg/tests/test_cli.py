import json

import numpy as np
import pytest

from cspaceviz.cli import main
from cspaceviz.codecs import read_image, write_image
from cspaceviz.planar import Dataset


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_generate_render_diff_metrics(tmp_path, capsys):
    code, out = run(capsys, "generate", "--m", 300, "--seed", 1, "--csv", "--out-dir", tmp_path)
    assert code == 0
    assert json.loads(out.out)["m"] == 300
    for name in ("robot.json", "workspace.json", "dataset.json", "dataset.csv"):
        assert (tmp_path / name).exists()
    ds = Dataset.from_json((tmp_path / "dataset.json").read_text())
    assert Dataset.from_csv((tmp_path / "dataset.csv").read_text()).samples.tolist() == ds.samples.tolist()

    a, b = tmp_path / "a.ppm", tmp_path / "b.png"
    assert run(capsys, "render", tmp_path / "dataset.json", "--nd", 30, "--canvas", 500, "--out", a)[0] == 0
    assert run(capsys, "render", tmp_path / "dataset.csv", "--nd", 30, "--canvas", 500, "--out", b)[0] == 0
    np.testing.assert_array_equal(read_image(a), read_image(b))

    code, out = run(capsys, "metrics", a, b)
    stats = json.loads(out.out)
    assert code == 0 and stats["mismatch_ratio"] == 0 and stats["mse"] == 0 and stats["schema_version"] == 1

    c = tmp_path / "c.png"
    assert run(capsys, "render", tmp_path / "dataset.json", "--nd", 60, "--canvas", 500, "--out", c)[0] == 0
    diff_dir = tmp_path / "diff"
    code, out = run(capsys, "diff", a, c, "--out-dir", diff_dir, "--format", "ppm", "--crop-legend")
    assert code == 0
    assert json.loads((diff_dir / "stats.json").read_text())["mismatch_ratio"] > 0
    assert read_image(diff_dir / "negative_diff.ppm").shape == (500, 500, 3)
    assert (diff_dir / "setminus.ppm").exists()


def test_render_with_collisions_and_config(tmp_path, capsys):
    run(capsys, "generate", "--m", 200, "--mode", "all", "--out-dir", tmp_path)
    cfg = tmp_path / "render.json"
    cfg.write_text(json.dumps({"n_d": 20, "canvas_px": 400, "point_px": 1}))
    out = tmp_path / "r.png"
    code, _ = run(capsys, "render", tmp_path / "dataset.json", "--config", cfg, "--plot-collisions", "--out", out)
    assert code == 0
    img = read_image(out)
    assert img.shape == (480, 400, 3)
    assert np.any(np.all(img == (160, 160, 160), axis=-1))


@pytest.mark.parametrize("argv", [
    ["render", "missing.json"],
    ["metrics", "x.ppm", "y.ppm"],
])
def test_input_errors_exit_1(tmp_path, capsys, argv, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out = run(capsys, *argv)
    assert code == 1 and "error" in out.err


def test_bad_config_and_shape_mismatch_exit_1(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"n_d": 10, "zoom": 3}')
    run(capsys, "generate", "--m", 20, "--out-dir", tmp_path)
    assert run(capsys, "render", tmp_path / "dataset.json", "--config", cfg)[0] == 1
    cfg.write_text("{not json")
    assert run(capsys, "exp-subset", "--config", cfg)[0] == 1
    write_image(tmp_path / "s.ppm", np.zeros((2, 2, 3), dtype=np.uint8))
    write_image(tmp_path / "t.ppm", np.zeros((3, 2, 3), dtype=np.uint8))
    assert run(capsys, "metrics", tmp_path / "s.ppm", tmp_path / "t.ppm")[0] == 1


def test_blocked_scene_exit_2(tmp_path, capsys):
    ws = tmp_path / "ws.json"
    ws.write_text(json.dumps({"id": "blocked", "obstacles": [{"center": [0, 0], "radius": 9}]}))
    code, out = run(capsys, "generate", "--workspace", ws, "--m", 10, "--out-dir", tmp_path)
    assert code == 2 and "experiment error" in out.err


def _small_config(tmp_path, **kw):
    cfg = {"n_joints": 3, "m": 300, "n_workspaces": 1, "n_d": 30, "render": {"canvas_px": 500}, **kw}
    path = tmp_path / "exp.json"
    path.write_text(json.dumps(cfg))
    return path


def test_experiments_write_reports(tmp_path, capsys):
    cfg = _small_config(tmp_path, fractions=[0.3, 0.6, 1.0])
    code, out = run(capsys, "exp-accuracy", "--config", cfg, "--seed", 2, "--out-dir", tmp_path,
                    "--save-images", "--format", "ppm")
    assert code == 0
    report = json.loads((tmp_path / "accuracy_report.json").read_text())
    assert report["schema_version"] == 1 and report["seed"] == 2
    assert sorted(p.name for p in (tmp_path / "images").iterdir()) == [
        "ws000_f000.ppm", "ws000_f030.ppm", "ws000_f060.ppm", "ws000_f100.ppm"]
    code, out = run(capsys, "exp-subset", "--config", cfg, "--out-dir", tmp_path)
    assert code == 0 and json.loads((tmp_path / "subset_report.json").read_text())["table"]


def test_degenerate_accuracy_exit_2(tmp_path, capsys):
    cfg = _small_config(tmp_path, fractions=[1.0])
    code, _ = run(capsys, "exp-accuracy", "--config", cfg, "--out-dir", tmp_path)
    assert code == 2


def test_nd_sweep_writes_one_report_per_resolution(tmp_path, capsys):
    cfg = _small_config(tmp_path, fractions=[0.5], m=100, n_d=10, n_joints=2, render={})
    code, out = run(capsys, "exp-subset", "--config", cfg, "--nd-sweep", "--out-dir", tmp_path)
    assert code == 0
    names = sorted(p.name for p in tmp_path.glob("subset_report_nd*.json"))
    assert names == ["subset_report_nd100.json", "subset_report_nd1000.json",
                     "subset_report_nd250.json", "subset_report_nd500.json"]

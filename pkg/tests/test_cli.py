import json

import numpy as np
import pytest
from click.testing import CliRunner

from handteleop.cli import main
from handteleop.mlp import load_checkpoint, load_dataset, save_checkpoint


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def workspace(tmp_path_factory, runner, trained_params):
    """dataset + checkpoint + session log produced through the CLI."""
    root = tmp_path_factory.mktemp("cli")
    dataset = root / "dataset.npz"
    templates = root / "templates.json"
    model = root / "model.npz"
    log = root / "session.jsonl"

    res = runner.invoke(main, [
        "gen-dataset", "--seed", "1", "--per-class", "30",
        "--out", str(dataset), "--templates-out", str(templates),
    ])
    assert res.exit_code == 0, res.output

    # The trained fixture params stand in for a slow CLI training run.
    save_checkpoint(trained_params, model)

    res = runner.invoke(main, ["gen-session", "--kind", "linear", "--out", str(log)])
    assert res.exit_code == 0, res.output
    return {"root": root, "dataset": dataset, "templates": templates,
            "model": model, "log": log}


def test_gen_dataset_outputs(workspace):
    ds = load_dataset(workspace["dataset"])
    assert len(ds) == 150
    data = json.loads(workspace["templates"].read_text())
    assert data["format"] == "handteleop-templates"


def test_train_command(runner, workspace):
    out = workspace["root"] / "trained.npz"
    res = runner.invoke(main, [
        "train", "--dataset", str(workspace["dataset"]), "--out", str(out),
        "--epochs", "3", "--seed", "0",
    ])
    assert res.exit_code == 0, res.output
    assert "test accuracy" in res.output
    load_checkpoint(out)  # readable, shapes verified


def test_replay_and_eval_round_trip(runner, workspace):
    out_dir = workspace["root"] / "replay"
    res = runner.invoke(main, [
        "replay", "--log", str(workspace["log"]), "--model", str(workspace["model"]),
        "--out-dir", str(out_dir), "--cloud-target", "300",
    ])
    assert res.exit_code == 0, res.output
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["final_body"]["x"] == pytest.approx(0.05, abs=1e-6)

    res = runner.invoke(main, [
        "eval", "--est", str(out_dir / "trajectory.csv"),
        "--truth", str(out_dir / "trajectory.csv"), "--json",
    ])
    assert res.exit_code == 0, res.output
    report = json.loads(res.output)
    assert report["linear_rmsd_mm"] == 0.0


def test_eval_reports_alignment_failure(runner, workspace, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("t,x,y,z,rx,ry,rz\n0.0,0,0,0,0,0,0\n1.0,0,0,0,0,0,0\n")
    b.write_text("t,x,y,z,rx,ry,rz\n5.0,0,0,0,0,0,0\n6.0,0,0,0,0,0,0\n")
    res = runner.invoke(main, ["eval", "--est", str(a), "--truth", str(b)])
    assert res.exit_code != 0
    assert "overlap" in res.output


def test_replay_rejects_malformed_log(runner, workspace, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"t": 0.0, "lm": [], "intr": "x"}\n')
    res = runner.invoke(main, [
        "replay", "--log", str(bad), "--model", str(workspace["model"]),
        "--out-dir", str(tmp_path / "out"),
    ])
    assert res.exit_code != 0


def test_noisy_session_generation(runner, workspace):
    noisy = workspace["root"] / "noisy.jsonl"
    res = runner.invoke(main, [
        "gen-session", "--kind", "angular", "--out", str(noisy),
        "--noise-px", "1.0", "--noise-depth", "0.002", "--seed", "3",
    ])
    assert res.exit_code == 0, res.output
    clean = workspace["root"] / "clean_angular.jsonl"
    res = runner.invoke(main, ["gen-session", "--kind", "angular", "--out", str(clean)])
    assert res.exit_code == 0
    assert noisy.read_bytes() != clean.read_bytes()

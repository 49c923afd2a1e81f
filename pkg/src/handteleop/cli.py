"""Command-line interface.

Subcommands: gen-dataset, train, gen-session, replay, eval, serve.
Session options can come from a JSON --config file; explicit flags
override file values. Exit code is 0 on success and nonzero with a
diagnostic on any error.
"""

from __future__ import annotations

import json
import time

import click

from .errors import TeleopError
from .geometry import Point3, Pose6D
from .landmarks import write_log_file
from .mlp import Gesture, TrainConfig, load_dataset, load_checkpoint, save_checkpoint, save_dataset, train as train_mlp
from .session import SessionConfig, load_config, run_eval, run_replay_file, write_replay_outputs
from .server import TeleopServer, run_server
from .synth import (
    DEFAULT_INTRINSICS,
    DEFAULT_INTRINSICS_ID,
    export_templates,
    facing_pose,
    frames_from_script,
    generate_synthetic_dataset,
    jitter_log,
    script_mode_move,
)


class _TeleopGroup(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except TeleopError as exc:
            raise click.ClickException(str(exc)) from exc


@click.group(cls=_TeleopGroup)
def main():
    """Gesture-driven teleoperation toolkit."""


def _session_config(config_path, **overrides) -> SessionConfig:
    if config_path:
        return load_config(config_path, **overrides)
    return SessionConfig().merged({k: v for k, v in overrides.items() if v is not None})


_CONFIG_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                 help="JSON session config; flags below override its fields."),
    click.option("--threshold", type=float, default=None, help="Rejection threshold."),
    click.option("--debounce", type=int, default=None, help="Consecutive frames per gesture."),
    click.option("--linear-gain", type=float, default=None),
    click.option("--angular-gain", type=float, default=None),
    click.option("--cloud-target", type=int, default=None, help="Point-cloud size for pose fits."),
    click.option("--knn-k", type=int, default=None, help="Neighbors per densification round."),
]


def _with_config_options(fn):
    for opt in reversed(_CONFIG_OPTIONS):
        fn = opt(fn)
    return fn


@main.command("gen-dataset")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--per-class", type=int, default=2500, show_default=True)
@click.option("--noise", type=float, default=1.0, show_default=True,
              help="Jitter scale; 0 reproduces the templates exactly.")
@click.option("--out", type=click.Path(), required=True, help="Dataset .npz path.")
@click.option("--templates-out", type=click.Path(), default=None,
              help="Also export the gesture templates as JSON (for the console).")
def gen_dataset(seed, per_class, noise, out, templates_out):
    """Generate the seeded synthetic gesture dataset."""
    dataset = generate_synthetic_dataset(seed, per_class, noise)
    save_dataset(dataset, out, meta={"seed": seed, "per_class": per_class, "noise": noise})
    click.echo(f"wrote {len(dataset)} samples ({per_class} per class) to {out}")
    if templates_out:
        with open(templates_out, "w", encoding="utf-8") as fh:
            json.dump(export_templates(), fh)
            fh.write("\n")
        click.echo(f"wrote gesture templates to {templates_out}")


@main.command()
@click.option("--dataset", "dataset_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True, help="Checkpoint .npz path.")
@click.option("--split", type=float, default=0.75, show_default=True)
@click.option("--epochs", type=int, default=TrainConfig.epochs, show_default=True)
@click.option("--batch-size", type=int, default=TrainConfig.batch_size, show_default=True)
@click.option("--learning-rate", type=float, default=TrainConfig.learning_rate, show_default=True)
@click.option("--optimizer", type=click.Choice(["adam", "sgd"]), default="adam", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def train(dataset_path, out, split, epochs, batch_size, learning_rate, optimizer, seed):
    """Train the gesture classifier and write a checkpoint."""
    dataset = load_dataset(dataset_path)
    config = TrainConfig(
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        optimizer=optimizer,
        seed=seed,
    )
    started = time.perf_counter()
    result = train_mlp(dataset, split=split, config=config)
    elapsed = time.perf_counter() - started
    save_checkpoint(result.params, out)
    click.echo(
        f"trained on {result.train_count} samples, held out {result.test_count} "
        f"({elapsed:.1f} s)"
    )
    click.echo(
        f"train accuracy {result.train_accuracy:.4f}, "
        f"test accuracy {result.test_accuracy:.4f}"
    )
    click.echo(f"checkpoint written to {out}")


_SESSION_KINDS = {
    "linear": (Gesture.ONE, Pose6D(Point3(0.05, 0.0, 0.0), 0.0, 0.0, 0.0)),
    "angular": (Gesture.TWO, Pose6D(Point3(0.0, 0.0, 0.0), 0.0, 20.0, 0.0)),
    "combined": (Gesture.THREE, Pose6D(Point3(0.05, 0.0, 0.0), 0.0, 20.0, 0.0)),
}


@main.command("gen-session")
@click.option("--kind", type=click.Choice(sorted(_SESSION_KINDS)), default="linear",
              show_default=True)
@click.option("--out", type=click.Path(), required=True, help="Landmark log path.")
@click.option("--hold", type=int, default=5, show_default=True,
              help="Frames per static gesture phase.")
@click.option("--move-frames", type=int, default=30, show_default=True)
@click.option("--fps", type=float, default=30.0, show_default=True)
@click.option("--noise-px", type=float, default=0.0, show_default=True,
              help="Gaussian pixel noise added to every landmark.")
@click.option("--noise-depth", type=float, default=0.0, show_default=True,
              help="Gaussian depth noise in meters.")
@click.option("--seed", type=int, default=0, show_default=True, help="Noise seed.")
def gen_session(kind, out, hold, move_frames, fps, noise_px, noise_depth, seed):
    """Write a scripted synthetic operator session as a landmark log."""
    mode_gesture, offset = _SESSION_KINDS[kind]
    start = facing_pose()
    end = Pose6D(start.translation + offset.translation, offset.rx, offset.ry, offset.rz)
    script = script_mode_move(mode_gesture, end, start=start, hold=hold, move=move_frames)
    log = frames_from_script(script, DEFAULT_INTRINSICS, fps=fps)
    if noise_px > 0 or noise_depth > 0:
        log = jitter_log(log, seed=seed, px_sigma=noise_px, depth_sigma=noise_depth)
    write_log_file(log, out)
    click.echo(f"wrote {len(log.frames)} frames ({kind} session) to {out}")


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True), required=True)
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--out-dir", type=click.Path(), required=True)
@_with_config_options
def replay(log_path, model_path, out_dir, config_path, **overrides):
    """Run a landmark log through the full pipeline and write outputs."""
    params = load_checkpoint(model_path)
    config = _session_config(config_path, **overrides)
    result = run_replay_file(log_path, params, config)
    paths = write_replay_outputs(result, out_dir)
    click.echo(f"processed {result.summary['frames']} frames, "
               f"emitted {result.summary['commands']} commands")
    click.echo(f"final body pose: {result.summary['final_body']}")
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


@main.command("eval")
@click.option("--est", "est_path", type=click.Path(exists=True), required=True,
              help="Estimated (replayed) trajectory CSV.")
@click.option("--truth", "truth_path", type=click.Path(exists=True), required=True,
              help="Ground-truth trajectory CSV.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def eval_cmd(est_path, truth_path, as_json):
    """Report pooled linear/angular RMSD between two trajectories."""
    report = run_eval(est_path, truth_path)
    click.echo(report.to_json() if as_json else report.text())


@main.command()
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--host", default="127.0.0.1", show_default=True, envvar="HANDTELEOP_HOST")
@click.option("--port", type=int, default=8765, show_default=True, envvar="HANDTELEOP_PORT")
@_with_config_options
def serve(model_path, host, port, config_path, **overrides):
    """Serve operator sessions over WebSocket (one session per connection)."""
    params = load_checkpoint(model_path)
    config = _session_config(config_path, **overrides)
    server = TeleopServer(
        params, config, intrinsics={DEFAULT_INTRINSICS_ID: DEFAULT_INTRINSICS}
    )
    click.echo(f"listening on ws://{host}:{port}")
    run_server(server, host, port)


if __name__ == "__main__":
    main()

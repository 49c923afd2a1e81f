"""Gesture-driven teleoperation without hardware.

Pipeline: landmark frames -> 62-value features -> MLP gesture classifier
with rejection -> plane-fit 6-DoF hand pose -> control-mode FSM ->
simulated robot body pose, plus an RMSD evaluation harness, a WebSocket
operator service, and a CLI (``handteleop --help``).
"""

from .errors import TeleopError
from .geometry import CameraIntrinsics, Point3, Pose6D, pixel_to_meters, meters_to_pixels
from .kernels import BACKEND as KERNEL_BACKEND
from .landmarks import (
    FEATURE_SIZE,
    LANDMARK_COUNT,
    SKELETON_EDGES,
    Landmark,
    LandmarkFrame,
    LandmarkLog,
    extract_features,
    parse_frame,
    read_log,
    read_log_file,
    write_log,
    write_log_file,
)
from .mlp import (
    Dataset,
    Gesture,
    MlpParams,
    TrainConfig,
    TrainResult,
    classify,
    forward,
    init_params,
    load_checkpoint,
    load_dataset,
    save_checkpoint,
    save_dataset,
    train,
)
from .pose import (
    Plane,
    center_of_mass,
    estimate_pose,
    expand_cloud_knn,
    fit_plane,
    plane_angle,
    plane_euler_angles,
    relative_pose,
)
from .fsm import (
    Command,
    ControlMode,
    FsmState,
    MoveDelta,
    SetMode,
    StartTracking,
    StopTracking,
    mask_delta,
    step,
)
from .sim import RobotState, WorkspaceLimits, apply_command, initial_state, snapshot
from .trajectory import Trajectory, read_trajectory_file, write_trajectory_file
from .metrics import RmsdReport, align, compare, rmsd
from .session import (
    ReplayResult,
    Session,
    SessionConfig,
    StepResult,
    run_eval,
    run_replay,
    run_replay_file,
)
from .synth import generate_synthetic_dataset

__version__ = "0.1.0"

__all__ = [
    "CameraIntrinsics",
    "Command",
    "ControlMode",
    "Dataset",
    "FEATURE_SIZE",
    "FsmState",
    "Gesture",
    "KERNEL_BACKEND",
    "LANDMARK_COUNT",
    "Landmark",
    "LandmarkFrame",
    "LandmarkLog",
    "MlpParams",
    "MoveDelta",
    "Plane",
    "Point3",
    "Pose6D",
    "ReplayResult",
    "RmsdReport",
    "RobotState",
    "SKELETON_EDGES",
    "Session",
    "SessionConfig",
    "SetMode",
    "StartTracking",
    "StepResult",
    "StopTracking",
    "TeleopError",
    "TrainConfig",
    "TrainResult",
    "Trajectory",
    "WorkspaceLimits",
    "align",
    "apply_command",
    "center_of_mass",
    "classify",
    "compare",
    "estimate_pose",
    "expand_cloud_knn",
    "extract_features",
    "fit_plane",
    "forward",
    "generate_synthetic_dataset",
    "init_params",
    "initial_state",
    "load_checkpoint",
    "load_dataset",
    "mask_delta",
    "meters_to_pixels",
    "parse_frame",
    "pixel_to_meters",
    "plane_angle",
    "plane_euler_angles",
    "read_log",
    "read_log_file",
    "read_trajectory_file",
    "relative_pose",
    "rmsd",
    "run_eval",
    "run_replay",
    "run_replay_file",
    "save_checkpoint",
    "save_dataset",
    "snapshot",
    "step",
    "train",
    "write_log",
    "write_log_file",
    "write_trajectory_file",
]

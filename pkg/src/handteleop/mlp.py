"""Fully connected gesture classifier: 62 -> 256 -> 128 -> 5.

Each hidden block is linear -> batch norm -> ReLU; the head is linear ->
softmax over the five gesture classes. Training mode normalizes with
batch statistics and tracks running statistics (momentum 0.9) that
evaluation mode uses. An argmax below the rejection threshold (default
0.85) classifies as NONE.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import CheckpointError, StructuralError, TrainingError, ValidationError

INPUT_SIZE = 62
HIDDEN1 = 256
HIDDEN2 = 128
NUM_CLASSES = 5

BN_EPS = 1e-5
BN_MOMENTUM = 0.9
REJECT_THRESHOLD = 0.85

CHECKPOINT_FORMAT = "handteleop-mlp"
CHECKPOINT_VERSION = 1


class Gesture(Enum):
    """The five trainable gestures plus the rejection outcome NONE."""

    ONE = "One"
    TWO = "Two"
    THREE = "Three"
    OPEN = "Open"
    CLOSE = "Close"
    NONE = "None"

    @classmethod
    def from_name(cls, name: str) -> "Gesture":
        for g in cls:
            if g.value == name:
                return g
        raise ValidationError(f"unknown gesture name {name!r}")


# Class-index order of the classifier output; NONE is never a class.
CLASS_ORDER = (Gesture.ONE, Gesture.TWO, Gesture.THREE, Gesture.OPEN, Gesture.CLOSE)
CLASS_INDEX = {g: i for i, g in enumerate(CLASS_ORDER)}

_SHAPES = {
    "w1": (HIDDEN1, INPUT_SIZE),
    "b1": (HIDDEN1,),
    "gamma1": (HIDDEN1,),
    "beta1": (HIDDEN1,),
    "run_mean1": (HIDDEN1,),
    "run_var1": (HIDDEN1,),
    "w2": (HIDDEN2, HIDDEN1),
    "b2": (HIDDEN2,),
    "gamma2": (HIDDEN2,),
    "beta2": (HIDDEN2,),
    "run_mean2": (HIDDEN2,),
    "run_var2": (HIDDEN2,),
    "w3": (NUM_CLASSES, HIDDEN2),
    "b3": (NUM_CLASSES,),
}

# Parameters updated by gradient descent (running stats are not).
TRAINABLE = ("w1", "b1", "gamma1", "beta1", "w2", "b2", "gamma2", "beta2", "w3", "b3")


@dataclass
class MlpParams:
    """All weights, biases, and batch-norm statistics of the network."""

    w1: np.ndarray
    b1: np.ndarray
    gamma1: np.ndarray
    beta1: np.ndarray
    run_mean1: np.ndarray
    run_var1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    gamma2: np.ndarray
    beta2: np.ndarray
    run_mean2: np.ndarray
    run_var2: np.ndarray
    w3: np.ndarray
    b3: np.ndarray

    def __post_init__(self):
        for name, shape in _SHAPES.items():
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != shape:
                raise StructuralError(f"{name} has shape {arr.shape}, expected {shape}")
            setattr(self, name, arr)
        if not (self.run_var1 > 0).all() or not (self.run_var2 > 0).all():
            raise ValidationError("running variances must be positive")

    def copy(self) -> "MlpParams":
        return MlpParams(**{name: getattr(self, name).copy() for name in _SHAPES})


def init_params(seed: int = 0) -> MlpParams:
    """He-initialized weights, zero biases, identity batch-norm."""
    rng = np.random.default_rng(seed)

    def he(rows, cols):
        return rng.normal(0.0, np.sqrt(2.0 / cols), size=(rows, cols))

    return MlpParams(
        w1=he(HIDDEN1, INPUT_SIZE),
        b1=np.zeros(HIDDEN1),
        gamma1=np.ones(HIDDEN1),
        beta1=np.zeros(HIDDEN1),
        run_mean1=np.zeros(HIDDEN1),
        run_var1=np.ones(HIDDEN1),
        w2=he(HIDDEN2, HIDDEN1),
        b2=np.zeros(HIDDEN2),
        gamma2=np.ones(HIDDEN2),
        beta2=np.zeros(HIDDEN2),
        run_mean2=np.zeros(HIDDEN2),
        run_var2=np.ones(HIDDEN2),
        w3=he(NUM_CLASSES, HIDDEN2),
        b3=np.zeros(NUM_CLASSES),
    )


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _bn_forward(x, gamma, beta, run_mean, run_var, training, update_running):
    if training:
        mean = x.mean(axis=0)
        var = x.var(axis=0)
        if update_running:
            run_mean *= BN_MOMENTUM
            run_mean += (1.0 - BN_MOMENTUM) * mean
            run_var *= BN_MOMENTUM
            run_var += (1.0 - BN_MOMENTUM) * var
    else:
        mean, var = run_mean, run_var
    inv_std = 1.0 / np.sqrt(var + BN_EPS)
    x_hat = (x - mean) * inv_std
    out = gamma * x_hat + beta
    cache = (x_hat, inv_std, gamma, x - mean)
    return out, cache


def _bn_backward(dout, cache):
    x_hat, inv_std, gamma, centered = cache
    n = dout.shape[0]
    dgamma = (dout * x_hat).sum(axis=0)
    dbeta = dout.sum(axis=0)
    dx_hat = dout * gamma
    dvar = (dx_hat * centered).sum(axis=0) * (-0.5) * inv_std**3
    dmean = -(dx_hat.sum(axis=0)) * inv_std + dvar * (-2.0 / n) * centered.sum(axis=0)
    dx = dx_hat * inv_std + dvar * (2.0 / n) * centered + dmean / n
    return dx, dgamma, dbeta


def forward_batch(
    params: MlpParams,
    x: np.ndarray,
    training: bool = False,
    update_running: bool = False,
    return_cache: bool = False,
):
    """Class probabilities for a batch, shape (n, 5).

    ``training`` selects batch statistics for the normalization layers;
    running statistics are only touched when ``update_running`` is set.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != INPUT_SIZE:
        raise StructuralError(f"expected (n, {INPUT_SIZE}) features, got {x.shape}")
    z1 = x @ params.w1.T + params.b1
    h1, bn1_cache = _bn_forward(
        z1, params.gamma1, params.beta1, params.run_mean1, params.run_var1,
        training, update_running,
    )
    a1 = np.maximum(h1, 0.0)
    z2 = a1 @ params.w2.T + params.b2
    h2, bn2_cache = _bn_forward(
        z2, params.gamma2, params.beta2, params.run_mean2, params.run_var2,
        training, update_running,
    )
    a2 = np.maximum(h2, 0.0)
    logits = a2 @ params.w3.T + params.b3
    probs = _softmax(logits)
    if return_cache:
        return probs, (x, h1, a1, bn1_cache, h2, a2, bn2_cache, logits)
    return probs


def forward(params: MlpParams, features: np.ndarray, mode: str = "eval") -> np.ndarray:
    """Probabilities for a single 62-value feature vector, shape (5,)."""
    if mode not in ("train", "eval"):
        raise ValidationError(f"mode must be 'train' or 'eval', got {mode!r}")
    feats = np.asarray(features, dtype=np.float64)
    if feats.shape != (INPUT_SIZE,):
        raise StructuralError(f"expected ({INPUT_SIZE},) features, got {feats.shape}")
    return forward_batch(params, feats[None, :], training=(mode == "train"))[0]


def validate_probs(probs: np.ndarray) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.shape != (NUM_CLASSES,):
        raise StructuralError(f"expected {NUM_CLASSES} probabilities, got {probs.shape}")
    if (probs < 0).any():
        raise ValidationError("negative probability")
    if abs(float(probs.sum()) - 1.0) > 1e-9:
        raise ValidationError(f"probabilities sum to {probs.sum()}, not 1")
    return probs


def classify(probs: np.ndarray, threshold: float = REJECT_THRESHOLD) -> Gesture:
    """Argmax gesture, or NONE when the peak probability is below the
    threshold. Ties break toward the lowest class index; the comparison
    is >= so a peak exactly at the threshold is accepted.
    """
    probs = validate_probs(probs)
    best = int(np.argmax(probs))
    if probs[best] >= threshold:
        return CLASS_ORDER[best]
    return Gesture.NONE


# --------------------------------------------------------------------------
# Training

@dataclass(frozen=True)
class Dataset:
    """Feature matrix (n, 62) with class-index labels (n,) in [0, 5)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.intp)
        if feats.ndim != 2 or feats.shape[1] != INPUT_SIZE:
            raise StructuralError(f"features must be (n, {INPUT_SIZE}), got {feats.shape}")
        if labels.shape != (feats.shape[0],):
            raise StructuralError("labels must match features in length")
        if not np.isfinite(feats).all():
            raise ValidationError("non-finite feature values")
        if labels.size and (labels.min() < 0 or labels.max() >= NUM_CLASSES):
            raise ValidationError("labels must be class indices in [0, 5)")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.features.shape[0]


def save_dataset(dataset: Dataset, path, meta: dict | None = None) -> None:
    info = {"format": "handteleop-dataset", "version": 1}
    info.update(meta or {})
    np.savez_compressed(
        path,
        features=dataset.features,
        labels=dataset.labels,
        meta=np.str_(json.dumps(info)),
    )


def load_dataset(path) -> Dataset:
    with np.load(path, allow_pickle=False) as data:
        if "features" not in data or "labels" not in data:
            raise CheckpointError("not a dataset file: missing features/labels")
        return Dataset(features=data["features"], labels=data["labels"])


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 64
    learning_rate: float = 1e-3
    optimizer: str = "adam"  # or "sgd"
    sgd_momentum: float = 0.9
    seed: int = 0


@dataclass(frozen=True)
class TrainResult:
    params: MlpParams
    train_accuracy: float
    test_accuracy: float
    train_count: int
    test_count: int
    losses: tuple[float, ...] = field(repr=False, default=())


def loss_and_grads(
    params: MlpParams, x: np.ndarray, labels: np.ndarray, update_running: bool = False
):
    """Mean cross-entropy over a batch and gradients for every trainable
    tensor. Uses batch statistics (training mode); running statistics are
    left untouched unless ``update_running`` is set, so the default call
    is pure.
    """
    labels = np.asarray(labels, dtype=np.intp)
    probs, cache = forward_batch(
        params, x, training=True, update_running=update_running, return_cache=True
    )
    xin, h1, a1, bn1_cache, h2, a2, bn2_cache, logits = cache
    n = xin.shape[0]

    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = -float(log_probs[np.arange(n), labels].mean())

    dlogits = probs.copy()
    dlogits[np.arange(n), labels] -= 1.0
    dlogits /= n

    grads = {}
    grads["w3"] = dlogits.T @ a2
    grads["b3"] = dlogits.sum(axis=0)
    da2 = dlogits @ params.w3
    dh2 = da2 * (h2 > 0)
    dz2, grads["gamma2"], grads["beta2"] = _bn_backward(dh2, bn2_cache)
    grads["w2"] = dz2.T @ a1
    grads["b2"] = dz2.sum(axis=0)
    da1 = dz2 @ params.w2
    dh1 = da1 * (h1 > 0)
    dz1, grads["gamma1"], grads["beta1"] = _bn_backward(dh1, bn1_cache)
    grads["w1"] = dz1.T @ xin
    grads["b1"] = dz1.sum(axis=0)
    return loss, grads


def accuracy(params: MlpParams, x: np.ndarray, labels: np.ndarray) -> float:
    probs = forward_batch(params, x)
    return float((probs.argmax(axis=1) == labels).mean())


def split_dataset(dataset: Dataset, split: float, seed: int):
    """Deterministic shuffled split; train gets round(split * n) samples."""
    if not 0.0 < split < 1.0:
        raise ValidationError(f"split ratio must be in (0, 1), got {split}")
    n = len(dataset)
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(round(split * n))
    train_idx, test_idx = order[:n_train], order[n_train:]
    return (
        Dataset(dataset.features[train_idx], dataset.labels[train_idx]),
        Dataset(dataset.features[test_idx], dataset.labels[test_idx]),
    )


def train(
    dataset: Dataset,
    split: float = 0.75,
    config: TrainConfig = TrainConfig(),
) -> TrainResult:
    """Mini-batch gradient descent on cross-entropy; deterministic per seed.

    The dataset is shuffled once into disjoint train/test parts, then
    trained with the configured optimizer. Accuracies are evaluated in
    eval mode (running statistics).
    """
    if len(dataset) == 0:
        raise TrainingError("dataset is empty")
    counts = np.bincount(dataset.labels, minlength=NUM_CLASSES)
    if (counts < 2).any():
        missing = CLASS_ORDER[int(np.argmin(counts))].value
        raise TrainingError(f"class {missing!r} has fewer than 2 samples")

    train_set, test_set = split_dataset(dataset, split, config.seed)
    params = init_params(config.seed)
    rng = np.random.default_rng(config.seed + 1)

    if config.optimizer == "adam":
        state = {
            name: (np.zeros_like(getattr(params, name)), np.zeros_like(getattr(params, name)))
            for name in TRAINABLE
        }
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        step = 0
    elif config.optimizer == "sgd":
        velocity = {name: np.zeros_like(getattr(params, name)) for name in TRAINABLE}
    else:
        raise ValidationError(f"unknown optimizer {config.optimizer!r}")

    x_train, y_train = train_set.features, train_set.labels
    losses = []
    for _ in range(config.epochs):
        order = rng.permutation(len(train_set))
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            idx = order[start : start + config.batch_size]
            xb, yb = x_train[idx], y_train[idx]
            loss, grads = loss_and_grads(params, xb, yb, update_running=True)
            epoch_loss += loss * len(idx)
            if config.optimizer == "adam":
                step += 1
                for name in TRAINABLE:
                    m, v = state[name]
                    g = grads[name]
                    m += (1 - beta1) * (g - m)
                    v += (1 - beta2) * (g * g - v)
                    m_hat = m / (1 - beta1**step)
                    v_hat = v / (1 - beta2**step)
                    getattr(params, name)[...] -= (
                        config.learning_rate * m_hat / (np.sqrt(v_hat) + eps)
                    )
            else:
                for name in TRAINABLE:
                    vel = velocity[name]
                    vel *= config.sgd_momentum
                    vel -= config.learning_rate * grads[name]
                    getattr(params, name)[...] += vel
        losses.append(epoch_loss / len(order))

    return TrainResult(
        params=params,
        train_accuracy=accuracy(params, x_train, y_train),
        test_accuracy=accuracy(params, test_set.features, test_set.labels),
        train_count=len(train_set),
        test_count=len(test_set),
        losses=tuple(losses),
    )


# --------------------------------------------------------------------------
# Checkpoints

def save_checkpoint(params: MlpParams, path) -> None:
    """Write all tensors plus a versioned meta record to an .npz file."""
    meta = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "layers": [INPUT_SIZE, HIDDEN1, HIDDEN2, NUM_CLASSES],
        "classes": [g.value for g in CLASS_ORDER],
    }
    arrays = {name: getattr(params, name) for name in _SHAPES}
    np.savez(path, meta=np.str_(json.dumps(meta)), **arrays)


def load_checkpoint(path) -> MlpParams:
    """Load a checkpoint, rejecting unknown formats and shape mismatches."""
    try:
        data = np.load(path, allow_pickle=False)
    except (OSError, ValueError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    with data:
        if "meta" not in data:
            raise CheckpointError("missing meta record")
        try:
            meta = json.loads(str(data["meta"]))
        except json.JSONDecodeError as exc:
            raise CheckpointError("unreadable meta record") from exc
        if meta.get("format") != CHECKPOINT_FORMAT:
            raise CheckpointError(f"not a {CHECKPOINT_FORMAT} checkpoint")
        if meta.get("version") != CHECKPOINT_VERSION:
            raise CheckpointError(f"unsupported checkpoint version {meta.get('version')}")
        tensors = {}
        for name, shape in _SHAPES.items():
            if name not in data:
                raise CheckpointError(f"missing tensor {name}")
            arr = data[name]
            if arr.shape != shape:
                raise CheckpointError(
                    f"tensor {name} has shape {arr.shape}, expected {shape}"
                )
            tensors[name] = arr
    return MlpParams(**tensors)

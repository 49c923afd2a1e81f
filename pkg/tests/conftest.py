import numpy as np
import pytest

from handteleop import extract_features, forward, train
from handteleop.mlp import CLASS_ORDER, TrainConfig
from handteleop.synth import facing_pose, generate_synthetic_dataset, make_frame


@pytest.fixture(scope="session")
def trained():
    """A quickly trained classifier, good enough to drive the FSM.

    Asserts what the pipeline tests rely on: every clean template
    classifies as itself with confidence above the rejection threshold.
    """
    dataset = generate_synthetic_dataset(seed=7, per_class=200)
    result = train(dataset, config=TrainConfig(epochs=12, seed=7))
    assert result.test_accuracy >= 0.9
    for gesture in CLASS_ORDER:
        probs = forward(result.params, extract_features(make_frame(gesture, facing_pose())))
        assert probs.max() >= 0.85
        assert CLASS_ORDER[int(np.argmax(probs))] is gesture
    return result


@pytest.fixture(scope="session")
def trained_params(trained):
    return trained.params

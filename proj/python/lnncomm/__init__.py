"""Community detection and role analysis for layered neural networks."""

import json as _json

from ._core import (
    Error,
    Network,
    __version__,
    detect,
    detect_all_layers,
    diagram_dataset,
    extract_adjacency,
    fit_linear,
    ground_truth,
    init_params,
    input_effect,
    learning_rate,
    normalize,
    output_effect,
    sigmoid,
    synthetic_dataset,
    train,
)
from ._core import run_experiment as _run_experiment


def run_experiment(config, out_dir):
    """Runs the full pipeline and returns the parsed summary."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _json.loads(_run_experiment(config, str(out_dir)))


__all__ = [
    "Error",
    "Network",
    "__version__",
    "detect",
    "detect_all_layers",
    "diagram_dataset",
    "extract_adjacency",
    "fit_linear",
    "ground_truth",
    "init_params",
    "input_effect",
    "learning_rate",
    "normalize",
    "output_effect",
    "run_experiment",
    "sigmoid",
    "synthetic_dataset",
    "train",
]

"""SiNG: a hyperbox-vote classifier trained with the MOST bisection optimizer.

Public API re-exports; see the module docstrings for details.
"""

__version__ = "0.1.0"

from .data import (
    DataFormatError,
    Dataset,
    EncodingError,
    Schema,
    SplitSpec,
    halve,
    load_abalone,
    load_car,
    load_iris,
    split,
)
from .groups import (
    UNKNOWN,
    EvalResult,
    Group,
    GroupStore,
    Prediction,
    build_groups,
    evaluate,
    load_model,
    phi,
    predict,
    pulse_psi,
    relearn,
    save_model,
    unit_step,
)
from .kernels import backend
from .mlp import MlpSpec, forward, forward_batch, load_weights, nn_loss, predict_labels, save_weights, train_nn, weight_count
from .most import (
    MostConfig,
    ObjectiveError,
    OptimizeReport,
    SearchDomain,
    grid_oracle,
    initial_scan,
    mc_score,
    optimize,
    write_trace_csv,
)
from .train import SingTrainConfig, SingTrainReport, train_sing

__all__ = [
    "__version__",
    "backend",
    "build_groups",
    "DataFormatError",
    "Dataset",
    "EncodingError",
    "EvalResult",
    "evaluate",
    "forward",
    "forward_batch",
    "grid_oracle",
    "Group",
    "GroupStore",
    "halve",
    "initial_scan",
    "load_abalone",
    "load_car",
    "load_iris",
    "load_model",
    "load_weights",
    "mc_score",
    "MlpSpec",
    "MostConfig",
    "nn_loss",
    "ObjectiveError",
    "optimize",
    "OptimizeReport",
    "phi",
    "predict",
    "predict_labels",
    "Prediction",
    "pulse_psi",
    "relearn",
    "save_model",
    "save_weights",
    "Schema",
    "SearchDomain",
    "SingTrainConfig",
    "SingTrainReport",
    "split",
    "SplitSpec",
    "train_nn",
    "train_sing",
    "UNKNOWN",
    "unit_step",
    "write_trace_csv",
]

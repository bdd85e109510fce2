"""Password guessability estimation from a five-way structural decomposition.

A password splits into prefix, base word, suffix, shift pattern, and l33t
pattern; a trained model assigns each token a probability, and the product
ranks the password against every combination the model can generate. The rank
is bounded from both sides without materializing the population.
"""

from .decompose import (
    DIMENSIONS,
    Decomposition,
    decompose,
    recompose,
    recompose_decomposition,
)
from .evaluate import EvalError, NOT_IN_MODEL_RANK, bucket_rates, cdf, compare, delta
from .explain import (
    NOT_IN_MODEL,
    PGS_NOT_IN_MODEL,
    STRONG,
    SUB_OPTIMAL,
    VERDICT_COLORS,
    WEAK,
    Explanation,
    classify,
    explain,
    render_message,
)
from .model import (
    IngestError,
    Model,
    ModelError,
    TrainConfig,
    model_from_distributions,
    train,
)
from .rank import (
    DivisionCounter,
    MergedLists,
    ParameterError,
    PasswordEstimate,
    RankBounds,
    Sketch,
    brute_force_rank,
    downsample,
    enumerate_passwords,
    estimate_password,
    estimate_rank,
    estimate_rank_batch,
    load_merged,
    merge,
    password_probability,
    population_products,
    preprocess,
    resample,
    save_merged,
)
from .tweaks import TweakSet, request_tweaks, reuse_context, username_context

__version__ = "0.1.0"

__all__ = [
    "DIMENSIONS",
    "Decomposition",
    "decompose",
    "recompose",
    "recompose_decomposition",
    "EvalError",
    "NOT_IN_MODEL_RANK",
    "bucket_rates",
    "cdf",
    "compare",
    "delta",
    "NOT_IN_MODEL",
    "PGS_NOT_IN_MODEL",
    "STRONG",
    "SUB_OPTIMAL",
    "VERDICT_COLORS",
    "WEAK",
    "Explanation",
    "classify",
    "explain",
    "render_message",
    "IngestError",
    "Model",
    "ModelError",
    "TrainConfig",
    "model_from_distributions",
    "train",
    "DivisionCounter",
    "MergedLists",
    "ParameterError",
    "PasswordEstimate",
    "RankBounds",
    "Sketch",
    "brute_force_rank",
    "downsample",
    "enumerate_passwords",
    "estimate_password",
    "estimate_rank",
    "estimate_rank_batch",
    "load_merged",
    "merge",
    "password_probability",
    "population_products",
    "preprocess",
    "resample",
    "save_merged",
    "TweakSet",
    "request_tweaks",
    "reuse_context",
    "username_context",
    "__version__",
]

"""Federated learning simulator with the GShield label-flipping defense.

The heavy lifting lives in the compiled ``_core`` module; this package only
re-exports it.
"""

from ._core import (  # noqa: F401
    ConfigError,
    FedshieldError,
    __version__,
    client_similarity_scores,
    cmd_bench,
    cmd_run,
    coord_median,
    cosine_similarity,
    default_config,
    detect,
    fedavg,
    flame_lite,
    gaussian_fit,
    kmeans2,
    krum,
    pairwise_cosine,
    parse_config,
    run_experiment,
    trimmed_mean,
)

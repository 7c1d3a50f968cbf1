"""Estimate and validate social proximity networks from Bluetooth scan logs.

Thin re-export of the compiled core. See the functions' docstrings for
the underlying conventions; file-based operations use the same CSV/JSON
formats as the ``proxnet`` command-line tool.
"""

from ._core import (
    ConfigError,
    DataError,
    ParseError,
    StatsError,
    backbone_edges,
    connection_strength,
    edge_alphas,
    estimate_matrix,
    hash_id,
    mantel,
    mantel_bootstrap_ci,
    mantel_exhaustive,
    read_matrix,
    sha256_hex,
    simulate,
    spearman,
    table_stats,
    upper_triangle,
    weighted_density,
)

__all__ = [
    "ConfigError",
    "DataError",
    "ParseError",
    "StatsError",
    "backbone_edges",
    "connection_strength",
    "edge_alphas",
    "estimate_matrix",
    "hash_id",
    "mantel",
    "mantel_bootstrap_ci",
    "mantel_exhaustive",
    "read_matrix",
    "sha256_hex",
    "simulate",
    "spearman",
    "table_stats",
    "upper_triangle",
    "weighted_density",
]

__version__ = "0.1.0"

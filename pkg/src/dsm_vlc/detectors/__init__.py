"""Block detectors: exhaustive ML, vector-corrected OMP and OMP-seeded GA."""

from dsm_vlc.detectors.common import (
    DetectionResult,
    frobenius_metric,
    measurement_matrix,
    normalize_columns,
)
from dsm_vlc.detectors.genetic import (
    GaParams,
    crossover,
    estimate_symbols,
    fitness,
    ga_detect,
    init_population,
    inner_product_matrix,
    mutate,
    tournament_select,
)
from dsm_vlc.detectors.ml import ml_detect
from dsm_vlc.detectors.omp import (
    RankDeficiencyError,
    correct_index_vector,
    omp_column_detect,
    vc_omp_detect,
)

DETECTORS = ("ml", "vc_omp", "omp_ga")

__all__ = [
    "DETECTORS",
    "DetectionResult",
    "GaParams",
    "RankDeficiencyError",
    "correct_index_vector",
    "crossover",
    "estimate_symbols",
    "fitness",
    "frobenius_metric",
    "ga_detect",
    "init_population",
    "inner_product_matrix",
    "measurement_matrix",
    "ml_detect",
    "mutate",
    "normalize_columns",
    "omp_column_detect",
    "tournament_select",
    "vc_omp_detect",
]

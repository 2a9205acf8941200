"""Place-level remoteness index toolkit.

Computes a [0, 1] remoteness score for point-located populated places from
the place's own population and the distances to the nearest places of five
size categories, with per-year or global min-max scaling and within-county
heterogeneity diagnostics.
"""

from remoteness._core import (
    ComputeOutput,
    ComputeStats,
    CoordinateMode,
    CountyStats,
    DistanceMetric,
    DistanceVector,
    FallbackPolicy,
    HeterogeneityReport,
    PlaceRecord,
    PlaceSet,
    PopulationCategory,
    Provenance,
    RemotenessError,
    RiResult,
    RowRejection,
    RunConfig,
    ScalingMode,
    SpearmanResult,
    VarianceDecomposition,
    WeightScheme,
    YearResults,
    __version__,
    code_agreement,
    compute_multi_year,
    compute_year,
    config_to_json,
    default_categories,
    generate_places,
    heterogeneity,
    parse_places,
    parse_run_config,
    places_to_csv,
    raw_ri,
    scale,
    spearman,
    validate_places,
)

__all__ = [
    "ComputeOutput",
    "ComputeStats",
    "CoordinateMode",
    "CountyStats",
    "DistanceMetric",
    "DistanceVector",
    "FallbackPolicy",
    "HeterogeneityReport",
    "PlaceRecord",
    "PlaceSet",
    "PopulationCategory",
    "Provenance",
    "RemotenessError",
    "RiResult",
    "RowRejection",
    "RunConfig",
    "ScalingMode",
    "SpearmanResult",
    "VarianceDecomposition",
    "WeightScheme",
    "YearResults",
    "__version__",
    "code_agreement",
    "compute_multi_year",
    "compute_year",
    "config_to_json",
    "default_categories",
    "generate_places",
    "heterogeneity",
    "parse_places",
    "parse_run_config",
    "places_to_csv",
    "raw_ri",
    "scale",
    "spearman",
    "validate_places",
]

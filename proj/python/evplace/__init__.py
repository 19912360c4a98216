"""EV charging-station placement: station counts and demand assignment."""

from ._core import (
    ConfigError,
    Decision,
    EmptyInstanceError,
    GeoPoint,
    Instance,
    Model,
    NumericError,
    SchemaError,
    Share,
    Solution,
    SolveOutcome,
    SolverStats,
    TooLargeError,
    UnreachableDemandError,
    brute_force,
    build_model,
    check_feasibility,
    evaluate,
    export_geojson,
    export_lp,
    generate_synthetic,
    haversine_km,
    load_instance,
    load_solution_json,
    solve,
    write_solution_json,
)

__all__ = [
    "ConfigError",
    "Decision",
    "EmptyInstanceError",
    "GeoPoint",
    "Instance",
    "Model",
    "NumericError",
    "SchemaError",
    "Share",
    "Solution",
    "SolveOutcome",
    "SolverStats",
    "TooLargeError",
    "UnreachableDemandError",
    "brute_force",
    "build_model",
    "check_feasibility",
    "evaluate",
    "export_geojson",
    "export_lp",
    "generate_synthetic",
    "haversine_km",
    "load_instance",
    "load_solution_json",
    "solve",
    "write_solution_json",
]

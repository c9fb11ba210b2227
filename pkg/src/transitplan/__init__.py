"""transitplan: bus-stop placement and closed-route planning.

Estimates stop locations as mean-shift modes over house coordinates,
scores service-radius coverage across a bandwidth sweep, and routes the
chosen stops with ant-colony optimization. Estimators follow the
scikit-learn fit/predict convention; a functional API and a CLI sit
alongside them.
"""

from . import exceptions
from .clustering import (
    GeoMeanShift,
    MeanShiftResult,
    gaussian_weight,
    kernel_density,
    mean_shift,
    merge_modes,
    shift_once,
)
from .coverage import (
    CoverageReport,
    assign_nearest,
    coverage_report,
    read_report_csv,
    report_csv_text,
    write_report_csv,
)
from .datasets import make_house_blobs, make_two_blobs
from .geo import (
    EARTH_RADIUS_M,
    haversine_m,
    pairwise_distance_m,
    project_local,
    unproject_local,
)
from .io import HouseDataset, export_geojson, load_houses, load_points
from .pipeline import (
    DEFAULT_BANDWIDTHS_M,
    PlanResult,
    SweepReport,
    bandwidth_sweep,
    plan,
    select_bandwidth,
)
from .routing import (
    AntColonyTSP,
    Tour,
    aco_solve,
    brute_force_tsp,
    construct_tour,
    tour_length,
    transition_probabilities,
    update_pheromone,
)

__version__ = "0.1.0"

__all__ = [
    "AntColonyTSP",
    "CoverageReport",
    "DEFAULT_BANDWIDTHS_M",
    "EARTH_RADIUS_M",
    "GeoMeanShift",
    "HouseDataset",
    "MeanShiftResult",
    "PlanResult",
    "SweepReport",
    "Tour",
    "aco_solve",
    "assign_nearest",
    "bandwidth_sweep",
    "brute_force_tsp",
    "construct_tour",
    "coverage_report",
    "exceptions",
    "export_geojson",
    "gaussian_weight",
    "haversine_m",
    "kernel_density",
    "load_houses",
    "load_points",
    "make_house_blobs",
    "make_two_blobs",
    "mean_shift",
    "merge_modes",
    "pairwise_distance_m",
    "plan",
    "project_local",
    "read_report_csv",
    "report_csv_text",
    "select_bandwidth",
    "shift_once",
    "tour_length",
    "transition_probabilities",
    "unproject_local",
    "update_pheromone",
    "write_report_csv",
]

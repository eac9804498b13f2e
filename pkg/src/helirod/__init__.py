"""Statics and follow-the-leader planning for helically notched tendon robots."""

from .errors import (
    GeometryError,
    HelirodError,
    ModelError,
    PlanningError,
    SceneError,
    SolverError,
    TrajectoryError,
)
from .ftl import (
    FtlPlan,
    FtlPlanConfig,
    ProgressionState,
    body_deviation,
    fit_tension_polynomial,
    ftl_reference,
    optimize_tension,
    plan_ftl,
    progression_kinematics,
    simulate_schedule,
)
from .geometry import (
    PRESETS,
    ReferenceConfig,
    RobotGeometry,
    SectionProperties,
    effective_area,
    linear_mass_density,
    load_geometry,
    neutral_axis_length,
    neutral_axis_offset,
    preset,
    reference_config,
    second_moments,
    section_properties,
)
from .metrics import (
    Trajectory,
    max_euclidean_distance,
    nearest_point_distances,
    nearest_point_rmse,
    resample_by_arclength,
    rmse_paired,
)
from .statics import (
    LoadCase,
    OdeTerms,
    RodState,
    Solution,
    boundary_residual,
    integrate,
    ode_rhs,
    ode_terms,
    solve_progressive,
    solve_statics,
)

__version__ = "0.1.0"

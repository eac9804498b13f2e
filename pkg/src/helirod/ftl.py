"""Follow-the-leader planning: reference path, per-step tension search, fit.

The fully deployed rod solved at a design tension defines the reference
path. During deployment the exposed segment must stay on that path; for
every progression step the planner searches the tendon tension that
minimizes the RMS nearest-point deviation of the exposed body from the
(arc-length truncated) reference. Without external loads the optimum is
the design tension itself and deviations are numerically zero; with
gravity the optimum dips below the design tension mid-deployment and
returns to it at full exposure. A quadratic fit of the optimized tensions
gives a smooth schedule suitable for replay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PlanningError, SolverError, TrajectoryError
from .geometry import RobotGeometry, section_properties
from .metrics import (
    Trajectory,
    nearest_point_distances,
    nearest_point_rmse,
    truncate_by_arclength,
)
from .statics import LoadCase, Solution, solve_progressive, solve_statics

__all__ = [
    "FtlPlanConfig",
    "FtlPlan",
    "ProgressionState",
    "ScheduleReplay",
    "progression_kinematics",
    "ftl_reference",
    "body_deviation",
    "optimize_tension",
    "plan_ftl",
    "fit_tension_polynomial",
    "evaluate_polynomial",
    "simulate_schedule",
]

TWO_PI = 2.0 * math.pi
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

DEFAULT_GRID_POINTS = 21
DEFAULT_TAU_TOL = 1e-3


@dataclass(frozen=True)
class ProgressionState:
    """Kinematics of one deployment step."""

    eta: float
    L_p: float
    phi_p: float
    s_span: tuple[float, float]


@dataclass(frozen=True)
class FtlPlanConfig:
    """Parameters of a follow-the-leader planning run.

    ``deviation_tolerance`` is the acceptable body proximity: when a swept
    tension already keeps the exposed body this close to the reference the
    search stops at it (this is how early steps keep tau at 0 when the
    short stub is on the path anyway).
    """

    tau_des: float
    delta_eta: float = 0.05
    tau_max: float | None = None
    deviation_tolerance: float = 0.05
    gravity_enabled: bool = False
    grid_points: int = DEFAULT_GRID_POINTS
    tau_tol: float = DEFAULT_TAU_TOL
    bracket_halfwidth: float | None = None

    def __post_init__(self):
        if self.tau_des <= 0.0:
            raise PlanningError(f"tau_des must be > 0, got {self.tau_des!r}")
        if not 0.0 < self.delta_eta <= 0.25:
            raise PlanningError(f"delta_eta must be in (0, 0.25], got {self.delta_eta!r}")
        if self.tau_max is None:
            object.__setattr__(self, "tau_max", 2.0 * self.tau_des)
        if self.tau_max <= self.tau_des:
            raise PlanningError("tau_max must exceed tau_des")
        if self.bracket_halfwidth is None:
            object.__setattr__(self, "bracket_halfwidth", 0.2 * self.tau_max)


@dataclass
class FtlPlan:
    """Per-step optimized tensions, deviations, and the fitted schedule."""

    eta_grid: np.ndarray
    tau_opt: np.ndarray
    deviation: np.ndarray
    tip_error: np.ndarray
    tip_positions: np.ndarray
    reference: Trajectory
    poly_coeffs: tuple[float, float, float] | None
    fit_residual: float | None
    config: FtlPlanConfig
    search_history: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class ScheduleReplay:
    """Deployment driven by a fixed tension schedule, scored against a reference."""

    eta_grid: np.ndarray
    tau: np.ndarray
    tip_positions: np.ndarray
    tip_rmse: float
    tip_max_error: float
    body_rmse: float


def progression_kinematics(geom: RobotGeometry, eta: float) -> ProgressionState:
    """Exposed length, coupled base rotation, and arc-length span at eta."""
    if not 0.0 <= eta <= 1.0:
        raise PlanningError(f"progression factor must be in [0, 1], got {eta!r}")
    props = section_properties(geom)
    return ProgressionState(
        eta=float(eta),
        L_p=eta * geom.L,
        phi_p=TWO_PI * (eta - 1.0),
        s_span=(0.0, eta * props.L_na),
    )


def ftl_reference(geom: RobotGeometry, tau_des: float, load: LoadCase) -> Trajectory:
    """Body path of the fully deployed rod at the design tension."""
    if tau_des <= 0.0:
        raise PlanningError("the reference tension must be positive")
    sol = solve_statics(geom, load.with_tau(tau_des))
    return Trajectory(sol.p.copy())


def body_deviation(solution: Solution, reference: Trajectory) -> float:
    """RMS distance of the solved body samples to the reference polyline."""
    if len(solution.p) == 0:
        raise TrajectoryError("empty solution")
    return nearest_point_rmse(solution.p, reference)


class _TensionObjective:
    """Deviation-vs-tension objective with solver warm starts and a cache."""

    def __init__(self, geom, eta, reference_trunc, load, steps=None):
        self.geom = geom
        self.eta = eta
        self.reference = reference_trunc
        self.load = load
        self.steps = steps
        self.cache: dict[float, float] = {}
        self.history: list[tuple[float, float]] = []
        self.solutions: dict[float, Solution] = {}
        self._guess = None

    def __call__(self, tau: float) -> float:
        tau = float(tau)
        if tau in self.cache:
            return self.cache[tau]
        try:
            sol = solve_progressive(
                self.geom,
                self.load.with_tau(tau),
                self.eta,
                steps=self.steps,
                initial_guess=self._guess,
            )
        except SolverError:
            self.cache[tau] = math.inf
            self.history.append((tau, math.inf))
            self.solutions[tau] = None
            return math.inf
        self._guess = np.concatenate([sol.v[0], sol.u[0]])
        dev = body_deviation(sol, self.reference)
        self.cache[tau] = dev
        self.history.append((tau, dev))
        self.solutions[tau] = sol
        return dev


def _golden_section(f, lo: float, hi: float, tol: float) -> None:
    """Golden-section sweep; results land in f's cache."""
    a, b = lo, hi
    h = b - a
    if h <= tol:
        f(0.5 * (a + b))
        return
    n = max(1, int(math.ceil(math.log(tol / h) / math.log(_INV_PHI))))
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        h *= _INV_PHI
        if yc < yd:
            b, d, yd = d, c, yc
            c = a + _INV_PHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            d = a + _INV_PHI * h
            yd = f(d)
    f(0.5 * (a + b))


def optimize_tension(
    geom: RobotGeometry,
    eta: float,
    reference: Trajectory,
    load: LoadCase,
    bounds: tuple[float, float],
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    tau_tol: float = DEFAULT_TAU_TOL,
    early_stop: float | None = None,
    steps: int | None = None,
) -> tuple[float, float]:
    """Tension minimizing body deviation from the truncated reference at eta.

    Ascending grid seeding followed by golden-section refinement around the
    best cell. When ``early_stop`` is given, the sweep returns the first
    tension whose deviation is already below it.
    """
    tau_opt, dev, _ = _optimize_tension_rich(
        geom, eta, reference, load, bounds,
        grid_points=grid_points, tau_tol=tau_tol, early_stop=early_stop, steps=steps,
    )
    return tau_opt, dev


def _optimize_tension_rich(
    geom, eta, reference, load, bounds, *,
    grid_points=DEFAULT_GRID_POINTS, tau_tol=DEFAULT_TAU_TOL, early_stop=None, steps=None,
):
    if not 0.0 < eta <= 1.0:
        raise PlanningError(f"progression factor must be in (0, 1], got {eta!r}")
    lo, hi = float(bounds[0]), float(bounds[1])
    if not hi > lo >= 0.0:
        raise PlanningError(f"invalid tension bounds {bounds!r}")
    props = section_properties(geom)
    ref_trunc = truncate_by_arclength(reference, eta * props.L_na)
    objective = _TensionObjective(geom, eta, ref_trunc, load, steps=steps)

    taus = np.linspace(lo, hi, grid_points)
    for tau in taus:
        dev = objective(float(tau))
        if early_stop is not None and dev < early_stop:
            return float(tau), dev, objective

    finite = [(t, d) for t, d in objective.cache.items() if math.isfinite(d)]
    if not finite:
        raise PlanningError(
            f"all tension evaluations failed at eta={eta}",
            diagnostics={"history": objective.history},
        )
    grid_best = min(range(grid_points), key=lambda i: objective.cache[float(taus[i])])
    b_lo = float(taus[max(grid_best - 1, 0)])
    b_hi = float(taus[min(grid_best + 1, grid_points - 1)])
    _golden_section(objective, b_lo, b_hi, tau_tol)

    tau_opt, dev = min(
        ((t, d) for t, d in objective.cache.items() if math.isfinite(d)),
        key=lambda td: td[1],
    )
    return float(tau_opt), float(dev), objective


def plan_ftl(
    geom: RobotGeometry,
    config: FtlPlanConfig,
    *,
    load: LoadCase | None = None,
    steps: int | None = None,
) -> FtlPlan:
    """Run the progressive-deployment loop and fit the tension schedule.

    Builds the reference at the design tension, sweeps eta from delta_eta
    to 1, optimizes the tension at every step (bracketing the search
    around the previous optimum), and least-squares fits a quadratic
    through the optimized tensions.
    """
    if load is None:
        load = LoadCase(gravity_enabled=config.gravity_enabled)
    reference = ftl_reference(geom, config.tau_des, load)

    etas = _eta_grid(config.delta_eta)
    tau_opt = np.full(len(etas), np.nan)
    deviation = np.full(len(etas), np.nan)
    tip_error = np.full(len(etas), np.nan)
    tips = np.full((len(etas), 3), np.nan)
    history = []
    failures = []
    prev = None
    w = config.bracket_halfwidth
    for i, eta in enumerate(etas):
        if prev is None:
            bounds = (0.0, config.tau_max)
        else:
            bounds = (max(0.0, prev - w), min(config.tau_max, max(prev + w, 2.0 * w)))
        try:
            tau_i, dev_i, obj = _optimize_tension_rich(
                geom, eta, reference, load, bounds,
                grid_points=config.grid_points,
                tau_tol=config.tau_tol,
                early_stop=config.deviation_tolerance,
                steps=None if steps is None else max(2, round(steps * eta)),
            )
        except (PlanningError, SolverError) as exc:
            failures.append({"eta": float(eta), "error": str(exc)})
            history.append([])
            continue
        tau_opt[i] = tau_i
        deviation[i] = dev_i
        sol = obj.solutions.get(tau_i)
        if sol is not None:
            tips[i] = sol.tip
            tip_error[i] = float(
                nearest_point_distances(sol.tip[None, :], reference)[0]
            )
        history.append([(float(t), float(d)) for t, d in obj.history])
        prev = tau_i

    coeffs = None
    fit_residual = None
    good = np.isfinite(tau_opt)
    if good.sum() >= 3:
        coeffs = fit_tension_polynomial(list(zip(etas[good], tau_opt[good])))
        pred = np.polyval(coeffs, etas[good])
        fit_residual = float(np.sqrt(np.mean((pred - tau_opt[good]) ** 2)))

    return FtlPlan(
        eta_grid=etas,
        tau_opt=tau_opt,
        deviation=deviation,
        tip_error=tip_error,
        tip_positions=tips,
        reference=reference,
        poly_coeffs=coeffs,
        fit_residual=fit_residual,
        config=config,
        search_history=history,
        failures=failures,
    )


def _eta_grid(delta_eta: float) -> np.ndarray:
    n = int(math.floor(1.0 / delta_eta + 1e-9))
    etas = np.arange(1, n + 1) * delta_eta
    if etas[-1] < 1.0 - 1e-9:
        etas = np.append(etas, 1.0)
    etas[-1] = 1.0
    return etas


def fit_tension_polynomial(pairs, degree: int = 2) -> tuple[float, ...]:
    """Ordinary least squares polynomial through (eta, tau) pairs.

    Returns coefficients highest power first, e.g. (c2, c1, c0) for a
    quadratic tau(eta) = c2 eta^2 + c1 eta + c0.
    """
    pairs = list(pairs)
    if len(pairs) < degree + 1:
        raise PlanningError(
            f"need at least {degree + 1} points for a degree-{degree} fit, got {len(pairs)}"
        )
    x = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    if len(np.unique(x)) < degree + 1:
        raise PlanningError("design matrix is rank deficient (too few distinct eta values)")
    V = np.vander(x, degree + 1)
    coeffs, _, rank, _ = np.linalg.lstsq(V, y, rcond=None)
    if rank < degree + 1:
        raise PlanningError("design matrix is rank deficient")
    return tuple(float(c) for c in coeffs)


def evaluate_polynomial(coeffs, eta: float) -> float:
    """Evaluate a tension schedule, restricted to eta in [0, 1]."""
    if not 0.0 <= eta <= 1.0:
        raise PlanningError(f"schedule evaluated outside [0, 1]: eta={eta!r}")
    return float(np.polyval(np.asarray(coeffs, dtype=float), eta))


def _point_at_fraction(traj: Trajectory, frac: float) -> np.ndarray:
    s = frac * traj.total_arclength
    return np.array(
        [np.interp(s, traj.cum_arclength, traj.points[:, k]) for k in range(3)]
    )


def simulate_schedule(
    geom: RobotGeometry,
    coeffs,
    load: LoadCase,
    reference: Trajectory,
    *,
    delta_eta: float = 0.05,
    steps: int | None = None,
) -> ScheduleReplay:
    """Deploy with tensions from a fixed schedule and score tip tracking.

    The tip at progression eta is paired with the reference point at the
    same arc-length fraction; body deviation is also aggregated across
    steps for context.
    """
    etas = _eta_grid(delta_eta)
    taus = np.array([evaluate_polynomial(coeffs, e) for e in etas])
    taus = np.clip(taus, 0.0, None)
    tips = np.empty((len(etas), 3))
    body_sq = []
    guess = None
    for i, eta in enumerate(etas):
        sol = solve_progressive(
            geom, load.with_tau(float(taus[i])), float(eta),
            steps=None if steps is None else max(2, round(steps * eta)),
            initial_guess=guess,
        )
        guess = np.concatenate([sol.v[0], sol.u[0]])
        tips[i] = sol.tip
        d = nearest_point_distances(sol.p, reference)
        body_sq.extend((d**2).tolist())
    ref_points = np.array([_point_at_fraction(reference, e) for e in etas])
    errs = np.linalg.norm(tips - ref_points, axis=1)
    return ScheduleReplay(
        eta_grid=etas,
        tau=taus,
        tip_positions=tips,
        tip_rmse=float(np.sqrt(np.mean(errs**2))),
        tip_max_error=float(np.max(errs)),
        body_rmse=float(np.sqrt(np.mean(body_sq))),
    )

"""Rod statics: ODE terms, RK4 integration, and the shooting solver.

The rod state is (p, R, v, u): neutral-axis position and material frame in
the global frame, plus local linear/angular rates. The static balance

    [v', u'] = M^-1 [a, b],   M = [[K_se + K11, K12], [K21, K_bt + K22]]

couples the section stiffness with the tendon load. The tendon runs along
the local offset r = [r_x, 0, 0] and is anchored at the distal end, which
yields implicit terminal conditions on (v, u); a damped-Newton shooting
solver finds the base rates that satisfy them.

Sign conventions and the constitutive diagonals K_se = diag(GA, GA, EA),
K_bt = diag(E I_x, E I_y, E I_z) follow the model this package implements;
all quantities are in the mm-N unit system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels as K
from .errors import ModelError, SolverError
from .geometry import (
    ReferenceConfig,
    RobotGeometry,
    SectionProperties,
    section_properties,
)

__all__ = [
    "GRAVITY_MM",
    "DEFAULT_STEPS",
    "SHOOTING_TOL",
    "RodState",
    "LoadCase",
    "OdeTerms",
    "Solution",
    "hat",
    "ode_terms",
    "ode_rhs",
    "integrate",
    "boundary_residual",
    "solve_statics",
    "solve_progressive",
]

# 9.81 m/s^2 acting on a linear density in kg/m gives N/m; 1e-3 turns it
# into the package's N/mm distributed-force unit.
GRAVITY_MM = 9.81e-3

DEFAULT_STEPS = 200
SHOOTING_TOL = 1e-9
MAX_NEWTON_ITERS = 50
CONTINUATION_STAGES = 5
FD_STEP = 1e-7
COND_LIMIT = 1e12

TWO_PI = 2.0 * math.pi


def hat(v) -> np.ndarray:
    """Skew-symmetric matrix such that hat(a) @ b == cross(a, b)."""
    v = np.asarray(v, dtype=float)
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def _rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass
class RodState:
    """Rod state at one arc-length station."""

    s: float
    p: np.ndarray
    R: np.ndarray
    v: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float).reshape(3)
        self.R = np.asarray(self.R, dtype=float).reshape(3, 3)
        self.v = np.asarray(self.v, dtype=float).reshape(3)
        self.u = np.asarray(self.u, dtype=float).reshape(3)

    @property
    def orthogonality_error(self) -> float:
        return float(np.linalg.norm(self.R.T @ self.R - np.eye(3)))


@dataclass(frozen=True)
class LoadCase:
    """Tendon tension plus distributed external load.

    ``f_e`` is a constant distributed force in N/mm, global frame. With
    ``gravity_enabled`` the weight term ``linear_density * g`` along
    ``gravity_direction`` is added on top. Distributed moments are part of
    the model equations but fixed to zero here and rejected if nonzero.
    """

    tau: float = 0.0
    f_e: tuple = (0.0, 0.0, 0.0)
    l_e: tuple = (0.0, 0.0, 0.0)
    gravity_enabled: bool = False
    gravity_direction: tuple = (-1.0, 0.0, 0.0)

    def __post_init__(self):
        if self.tau < 0.0:
            raise ModelError(f"tendon tension must be >= 0, got {self.tau!r}")
        if any(c != 0.0 for c in self.l_e):
            raise ModelError("nonzero distributed moments are not supported")
        g = np.asarray(self.gravity_direction, dtype=float).reshape(3)
        n = float(np.linalg.norm(g))
        if n == 0.0:
            raise ModelError("gravity_direction must be a nonzero vector")
        object.__setattr__(self, "f_e", tuple(float(c) for c in self.f_e))
        object.__setattr__(self, "l_e", tuple(float(c) for c in self.l_e))
        object.__setattr__(self, "gravity_direction", tuple(g / n))

    def with_tau(self, tau: float) -> "LoadCase":
        return replace(self, tau=float(tau))

    def distributed_force(self, props: SectionProperties) -> np.ndarray:
        """Total distributed force in N/mm (global frame)."""
        f = np.asarray(self.f_e, dtype=float).copy()
        if self.gravity_enabled:
            f += props.linear_density * GRAVITY_MM * np.asarray(self.gravity_direction)
        return f


@dataclass
class OdeTerms:
    """Assembled matrices and vectors of the static balance at one state."""

    K_se: np.ndarray
    K_bt: np.ndarray
    K11: np.ndarray
    K12: np.ndarray
    K21: np.ndarray
    K22: np.ndarray
    a: np.ndarray
    b: np.ndarray
    p_t_dot: np.ndarray

    @property
    def system_matrix(self) -> np.ndarray:
        top = np.hstack([self.K_se + self.K11, self.K12])
        bot = np.hstack([self.K21, self.K_bt + self.K22])
        return np.vstack([top, bot])


@dataclass
class Solution:
    """A solved rod shape: sampled states plus solver diagnostics."""

    s: np.ndarray
    p: np.ndarray
    R: np.ndarray
    v: np.ndarray
    u: np.ndarray
    tau: float
    eta: float
    residual_norm: float
    iterations: int
    converged: bool
    diagnostics: dict = field(default_factory=dict)

    @property
    def samples(self) -> list[RodState]:
        return [
            RodState(s=float(self.s[i]), p=self.p[i], R=self.R[i], v=self.v[i], u=self.u[i])
            for i in range(len(self.s))
        ]

    @property
    def tip(self) -> np.ndarray:
        return self.p[-1]

    @property
    def base_state(self) -> RodState:
        return RodState(s=float(self.s[0]), p=self.p[0], R=self.R[0], v=self.v[0], u=self.u[0])


def _param_pack(props: SectionProperties) -> np.ndarray:
    ref = ReferenceConfig(r_na=props.r_na, L=props.L, L_na=props.L_na)
    return np.array(
        [
            props.G * props.A,
            props.G * props.A,
            props.E * props.A,
            props.E * props.I_x,
            props.E * props.I_y,
            props.E * props.I_z,
            props.r_tendon_x,
            ref.v_star[0],
            ref.v_star[1],
            ref.v_star[2],
            ref.u_star[0],
            ref.u_star[1],
            ref.u_star[2],
        ]
    )


def _pack_state(p, R, v, u) -> np.ndarray:
    y = np.empty(18)
    y[0:3] = p
    y[3:12] = np.asarray(R, dtype=float).reshape(9)
    y[12:15] = v
    y[15:18] = u
    return y


def _unpack(y):
    return y[0:3].copy(), y[3:12].reshape(3, 3).copy(), y[12:15].copy(), y[15:18].copy()


def _raise_status(status: int, s=None):
    where = "" if s is None else f" at s={s:.6g} mm"
    if status == K.STATUS_SINGULAR_TANGENT:
        raise ModelError("tendon path tangent is numerically singular" + where)
    if status == K.STATUS_ILL_CONDITIONED:
        raise ModelError("static balance system is ill-conditioned" + where)
    if status == K.STATUS_NOT_FINITE:
        raise SolverError("integration diverged (non-finite state)" + where)
    raise SolverError(f"solver kernel failed with status {status}" + where)


def ode_terms(
    state: RodState, load: LoadCase, props: SectionProperties, ref: ReferenceConfig
) -> OdeTerms:
    """Assemble the balance terms at one state (reference implementation).

    This numpy path mirrors the compiled kernel and backs the public
    ``ode_rhs``; the two are cross-checked in the test suite.
    """
    tau = load.tau
    r = props.r_tendon
    v, u = state.v, state.u
    K_se = np.diag([props.G * props.A, props.G * props.A, props.E * props.A])
    K_bt = np.diag([props.E * props.I_x, props.E * props.I_y, props.E * props.I_z])

    p_t_dot = np.cross(u, r) + v  # r' = r'' = 0: constant local tendon offset
    nt = float(np.linalg.norm(p_t_dot))
    if nt < 1e-9:
        raise ModelError("tendon path tangent is numerically singular")
    hat_pt = hat(p_t_dot)
    K11 = -tau * (hat_pt @ hat_pt) / nt**3
    hr = hat(r)
    K12 = -K11 @ hr
    K21 = hr @ K11
    K22 = -hr @ K11 @ hr

    f_e = load.distributed_force(props)
    w = np.cross(u, p_t_dot)
    a = -np.cross(u, K_se @ (v - ref.v_star)) - state.R.T @ f_e - K11 @ w
    b = (
        -np.cross(u, K_bt @ (u - ref.u_star))
        - np.cross(v, K_se @ (v - ref.v_star))
        - hr @ (K11 @ w)
    )
    return OdeTerms(K_se=K_se, K_bt=K_bt, K11=K11, K12=K12, K21=K21, K22=K22, a=a, b=b, p_t_dot=p_t_dot)


def ode_rhs(
    state: RodState, load: LoadCase, props: SectionProperties, ref: ReferenceConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Arc-length derivatives (p', R', v', u') at a state."""
    terms = ode_terms(state, load, props, ref)
    M = terms.system_matrix
    if np.linalg.cond(M) > COND_LIMIT:
        raise ModelError("static balance system is ill-conditioned")
    vu_dot = np.linalg.solve(M, np.concatenate([terms.a, terms.b]))
    dp = state.R @ state.v
    dR = state.R @ hat(state.u)
    return dp, dR, vu_dot[:3], vu_dot[3:]


def integrate(
    base: RodState,
    load: LoadCase,
    props: SectionProperties,
    ref: ReferenceConfig,
    span: tuple[float, float],
    steps: int,
) -> list[RodState]:
    """Fixed-step RK4 of the rod ODE over span=(s0, s1).

    R is projected back onto the rotation group after every step; all
    intermediate states are returned.
    """
    s0, s1 = float(span[0]), float(span[1])
    if not s1 > s0:
        raise ModelError(f"span must satisfy s1 > s0, got {span!r}")
    if steps < 1:
        raise ModelError("steps must be >= 1")
    params = _param_pack(props)
    fe = load.distributed_force(props)
    y0 = _pack_state(base.p, base.R, base.v, base.u)
    traj, status, s_off = K._integrate_traj(y0, s1 - s0, int(steps), load.tau, fe, params)
    if status != K.STATUS_OK:
        _raise_status(status, s0 + s_off)
    s_vals = np.linspace(s0, s1, steps + 1)
    return [
        RodState(s=float(s_vals[i]), p=traj[i, 0:3], R=traj[i, 3:12].reshape(3, 3),
                 v=traj[i, 12:15], u=traj[i, 15:18])
        for i in range(steps + 1)
    ]


def boundary_residual(
    terminal: RodState, load: LoadCase, props: SectionProperties, ref: ReferenceConfig
) -> np.ndarray:
    """Terminal tendon-anchor condition residual, angular block scaled by L_na."""
    params = _param_pack(props)
    yT = _pack_state(terminal.p, terminal.R, terminal.v, terminal.u)
    out = np.empty(6)
    status = K._boundary_residual(yT, load.tau, params, props.L_na, out)
    if status != K.STATUS_OK:
        _raise_status(status, terminal.s)
    return out


def _progressive_base(props: SectionProperties, eta: float, base_rotation: float | None):
    """Base pose of the exposed segment, z-shifted to the outer-tube exit.

    The material point at arc length (1-eta)*L_na sits at the tube exit;
    the commanded base rotation (default: the follow-the-leader rotation
    2*pi*(eta-1), which exactly cancels the helix phase) is applied as a
    rigid rotation about global Z.
    """
    theta = TWO_PI * (1.0 - eta)
    chi = TWO_PI * (eta - 1.0) if base_rotation is None else float(base_rotation)
    p_local = np.array(
        [-props.r_na * math.cos(theta), -props.r_na * math.sin(theta), 0.0]
    )
    Rz = _rot_z(chi)
    p0 = Rz @ p_local
    R0 = Rz @ _rot_z(theta)
    return p0, R0, chi


def _solve_bvp(
    geom: RobotGeometry,
    load: LoadCase,
    eta: float,
    base_rotation: float | None,
    steps: int | None,
    initial_guess: np.ndarray | None,
) -> Solution:
    props = section_properties(geom)
    ref = ReferenceConfig(r_na=props.r_na, L=props.L, L_na=props.L_na)
    span = eta * props.L_na
    if steps is None:
        steps = max(2, round(DEFAULT_STEPS * eta))
    steps = int(steps)
    params = _param_pack(props)
    fe = load.distributed_force(props)
    p0, R0, chi = _progressive_base(props, eta, base_rotation)
    R0_flat = np.ascontiguousarray(R0.reshape(9))
    scale = props.L_na

    # The tip-condition fixed point is an exact interior equilibrium when
    # the distributed load vanishes and a near-solution otherwise; plain
    # (v*, u*) initialization is useless here because the anisotropic
    # helical rod makes the shooting residual oscillate rapidly in the
    # base rates.
    x_init = np.empty(6)
    st0 = K._tip_condition_fixed_point(load.tau, params, x_init)
    if st0 != K.STATUS_OK:
        _raise_status(st0)
    x0 = x_init.copy() if initial_guess is None else np.asarray(initial_guess, dtype=float).copy()

    x, F, norm, iters, status = K._newton_shoot(
        x0, p0, R0_flat, span, steps, load.tau, fe, params,
        scale, SHOOTING_TOL, MAX_NEWTON_ITERS, FD_STEP,
    )
    stage_iters = [int(iters)]
    path = "direct"
    if status != K.STATUS_OK and initial_guess is not None:
        # A caller-provided warm start went stale; retry cold.
        x, F, norm, iters, status = K._newton_shoot(
            x_init.copy(), p0, R0_flat, span, steps, load.tau, fe, params,
            scale, SHOOTING_TOL, MAX_NEWTON_ITERS, FD_STEP,
        )
        stage_iters = [int(iters)]
        path = "direct-cold"
    if status != K.STATUS_OK:
        # Ramp the tension up from zero, reusing each stage's solution.
        path = "continuation"
        stage_iters = []
        best_norm = norm
        x = np.concatenate([ref.v_star, ref.u_star])
        for k in range(1, CONTINUATION_STAGES + 1):
            tau_k = load.tau * k / CONTINUATION_STAGES
            xk = np.empty(6)
            if k == 1:
                K._tip_condition_fixed_point(tau_k, params, xk)
                x = xk
            x, F, norm, iters, status = K._newton_shoot(
                x, p0, R0_flat, span, steps, tau_k, fe, params,
                scale, SHOOTING_TOL, MAX_NEWTON_ITERS, FD_STEP,
            )
            stage_iters.append(int(iters))
            best_norm = min(best_norm, norm)
            if status != K.STATUS_OK:
                raise SolverError(
                    f"shooting failed at continuation stage {k}/{CONTINUATION_STAGES} "
                    f"(tau={tau_k:.4g} N, status={status}, best residual {best_norm:.3e})",
                    residual_norm=float(best_norm),
                    iterations=sum(stage_iters),
                    diagnostics={
                        "stage_iterations": stage_iters,
                        "stage": k,
                        "tau": load.tau,
                        "eta": eta,
                        "status": int(status),
                    },
                )

    y0 = _pack_state(p0, R0, x[:3], x[3:])
    traj, st2, s_off = K._integrate_traj(y0, span, steps, load.tau, fe, params)
    if st2 != K.STATUS_OK:
        _raise_status(st2, s_off)

    return Solution(
        s=np.linspace(0.0, span, steps + 1),
        p=traj[:, 0:3].copy(),
        R=traj[:, 3:12].reshape(-1, 3, 3).copy(),
        v=traj[:, 12:15].copy(),
        u=traj[:, 15:18].copy(),
        tau=float(load.tau),
        eta=float(eta),
        residual_norm=float(norm),
        iterations=int(sum(stage_iters)),
        converged=bool(status == K.STATUS_OK),
        diagnostics={
            "path": path,
            "stage_iterations": stage_iters,
            "steps": steps,
            "span": float(span),
            "base_rotation": float(chi),
            "tolerance": SHOOTING_TOL,
        },
    )


def solve_statics(
    geom: RobotGeometry,
    load: LoadCase,
    *,
    steps: int | None = None,
    initial_guess: np.ndarray | None = None,
) -> Solution:
    """Solve the fully deployed rod over [0, L_na] for the given load."""
    return _solve_bvp(geom, load, 1.0, None, steps, initial_guess)


def solve_progressive(
    geom: RobotGeometry,
    load: LoadCase,
    eta: float,
    *,
    base_rotation: float | None = None,
    steps: int | None = None,
    initial_guess: np.ndarray | None = None,
) -> Solution:
    """Solve the exposed segment at progression factor eta in (0, 1].

    The solved span is the distal fraction eta of the neutral axis,
    re-based to the outer-tube exit. With the default follow-the-leader
    base rotation the base pose reduces to p=[-r_na, 0, 0], R=I for every
    eta. Gravity keeps acting along its fixed global direction.
    """
    if not 0.0 < eta <= 1.0:
        raise ModelError(f"progression factor must be in (0, 1], got {eta!r}")
    return _solve_bvp(geom, load, float(eta), base_rotation, steps, initial_guess)

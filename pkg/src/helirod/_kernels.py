"""Compiled inner loops for the rod statics solver.

Everything here works on flat float64 arrays so numba can compile it once
and the shooting solver stays fast enough for planning sweeps. The state
vector is ``y[18] = [p(3), R(9, row-major), v(3), u(3)]``; the section
parameter pack is

    params[13] = [GA, GA, EA, E*I_x, E*I_y, E*I_z, r_x,
                  v*_0, v*_1, v*_2, u*_0, u*_1, u*_2]

with the tendon offset fixed at ``r = [r_x, 0, 0]`` in the local frame.
Status codes: 0 ok, 1 singular tendon tangent, 2 ill-conditioned system,
3 non-finite state, 4 line search stalled, 5 iteration limit.
"""

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_SINGULAR_TANGENT = 1
STATUS_ILL_CONDITIONED = 2
STATUS_NOT_FINITE = 3
STATUS_STALLED = 4
STATUS_MAX_ITER = 5

# min |pivot| / max |entry| before the 6x6 solve is declared ill-conditioned
_PIVOT_FLOOR = 1e-12
_TANGENT_FLOOR = 1e-9


@njit(cache=True, nogil=True)
def _solve6(M, b, x):
    """Gaussian elimination with partial pivoting on a 6x6 system (in place)."""
    maxel = 0.0
    for i in range(6):
        for j in range(6):
            a = abs(M[i, j])
            if a > maxel:
                maxel = a
    if maxel == 0.0:
        return STATUS_ILL_CONDITIONED
    for col in range(6):
        piv = col
        pmax = abs(M[col, col])
        for r in range(col + 1, 6):
            a = abs(M[r, col])
            if a > pmax:
                pmax = a
                piv = r
        if pmax < maxel * _PIVOT_FLOOR:
            return STATUS_ILL_CONDITIONED
        if piv != col:
            for j in range(6):
                tmp = M[col, j]
                M[col, j] = M[piv, j]
                M[piv, j] = tmp
            tmp = b[col]
            b[col] = b[piv]
            b[piv] = tmp
        inv = 1.0 / M[col, col]
        for r in range(col + 1, 6):
            f = M[r, col] * inv
            if f != 0.0:
                M[r, col] = 0.0
                for j in range(col + 1, 6):
                    M[r, j] -= f * M[col, j]
                b[r] -= f * b[col]
    for i in range(5, -1, -1):
        acc = b[i]
        for j in range(i + 1, 6):
            acc -= M[i, j] * x[j]
        x[i] = acc / M[i, i]
    return STATUS_OK


@njit(cache=True, nogil=True)
def _rhs(y, tau, fe, params, out):
    """Arc-length derivative of the rod state.

    p' = R v, R' = R hat(u), and (v', u') solve the 6x6 static balance
    with shear/extension stiffness K_se, bending/twist stiffness K_bt and
    the tension-dependent tendon coupling blocks.
    """
    GA0 = params[0]
    GA1 = params[1]
    EA = params[2]
    EIx = params[3]
    EIy = params[4]
    EIz = params[5]
    rx = params[6]

    v0 = y[12]
    v1 = y[13]
    v2 = y[14]
    u0 = y[15]
    u1 = y[16]
    u2 = y[17]

    # p' = R v
    out[0] = y[3] * v0 + y[4] * v1 + y[5] * v2
    out[1] = y[6] * v0 + y[7] * v1 + y[8] * v2
    out[2] = y[9] * v0 + y[10] * v1 + y[11] * v2

    # R' = R hat(u), column form of the cross product
    out[3] = y[4] * u2 - y[5] * u1
    out[4] = y[5] * u0 - y[3] * u2
    out[5] = y[3] * u1 - y[4] * u0
    out[6] = y[7] * u2 - y[8] * u1
    out[7] = y[8] * u0 - y[6] * u2
    out[8] = y[6] * u1 - y[7] * u0
    out[9] = y[10] * u2 - y[11] * u1
    out[10] = y[11] * u0 - y[9] * u2
    out[11] = y[9] * u1 - y[10] * u0

    # tendon path tangent in the local frame: p_t' = u x r + v, r = [rx,0,0]
    pt0 = v0
    pt1 = v1 + u2 * rx
    pt2 = v2 - u1 * rx
    nt2 = pt0 * pt0 + pt1 * pt1 + pt2 * pt2
    nt = np.sqrt(nt2)
    if nt < _TANGENT_FLOOR:
        return STATUS_SINGULAR_TANGENT

    # K11 = -tau * hat(p_t')^2 / |p_t'|^3 = tau * (|p_t'|^2 I - p_t' p_t'^T) / |p_t'|^3
    c = tau / (nt2 * nt)
    k00 = c * (nt2 - pt0 * pt0)
    k01 = c * (-pt0 * pt1)
    k02 = c * (-pt0 * pt2)
    k11 = c * (nt2 - pt1 * pt1)
    k12 = c * (-pt1 * pt2)
    k22 = c * (nt2 - pt2 * pt2)

    M = np.empty((6, 6))
    # upper-left: K_se + K11
    M[0, 0] = GA0 + k00
    M[0, 1] = k01
    M[0, 2] = k02
    M[1, 0] = k01
    M[1, 1] = GA1 + k11
    M[1, 2] = k12
    M[2, 0] = k02
    M[2, 1] = k12
    M[2, 2] = EA + k22
    # upper-right: K12 = -K11 hat(r) = [0 | -rx K11[:,2] | rx K11[:,1]]
    M[0, 3] = 0.0
    M[0, 4] = -rx * k02
    M[0, 5] = rx * k01
    M[1, 3] = 0.0
    M[1, 4] = -rx * k12
    M[1, 5] = rx * k11
    M[2, 3] = 0.0
    M[2, 4] = -rx * k22
    M[2, 5] = rx * k12
    # lower-left: K21 = hat(r) K11 = [0; -rx K11[2,:]; rx K11[1,:]]
    M[3, 0] = 0.0
    M[3, 1] = 0.0
    M[3, 2] = 0.0
    M[4, 0] = -rx * k02
    M[4, 1] = -rx * k12
    M[4, 2] = -rx * k22
    M[5, 0] = rx * k01
    M[5, 1] = rx * k11
    M[5, 2] = rx * k12
    # lower-right: K_bt + K22, K22 = hat(r) K12
    M[3, 3] = EIx
    M[3, 4] = 0.0
    M[3, 5] = 0.0
    M[4, 3] = 0.0
    M[4, 4] = EIy - rx * M[2, 4]
    M[4, 5] = -rx * M[2, 5]
    M[5, 3] = 0.0
    M[5, 4] = rx * M[1, 4]
    M[5, 5] = EIz + rx * M[1, 5]

    dv0 = v0 - params[7]
    dv1 = v1 - params[8]
    dv2 = v2 - params[9]
    du0 = u0 - params[10]
    du1 = u1 - params[11]
    du2 = u2 - params[12]

    ksedv0 = GA0 * dv0
    ksedv1 = GA1 * dv1
    ksedv2 = EA * dv2
    kbtdu0 = EIx * du0
    kbtdu1 = EIy * du1
    kbtdu2 = EIz * du2

    # R^T f_e (f_e lives in the global frame)
    rtf0 = y[3] * fe[0] + y[6] * fe[1] + y[9] * fe[2]
    rtf1 = y[4] * fe[0] + y[7] * fe[1] + y[10] * fe[2]
    rtf2 = y[5] * fe[0] + y[8] * fe[1] + y[11] * fe[2]

    # w = u x p_t'
    w0 = u1 * pt2 - u2 * pt1
    w1 = u2 * pt0 - u0 * pt2
    w2 = u0 * pt1 - u1 * pt0
    k11w0 = k00 * w0 + k01 * w1 + k02 * w2
    k11w1 = k01 * w0 + k11 * w1 + k12 * w2
    k11w2 = k02 * w0 + k12 * w1 + k22 * w2

    rhs6 = np.empty(6)
    # a = -u x K_se(v - v*) - R^T f_e - K11 (u x p_t')
    rhs6[0] = -(u1 * ksedv2 - u2 * ksedv1) - rtf0 - k11w0
    rhs6[1] = -(u2 * ksedv0 - u0 * ksedv2) - rtf1 - k11w1
    rhs6[2] = -(u0 * ksedv1 - u1 * ksedv0) - rtf2 - k11w2
    # b = -u x K_bt(u - u*) - v x K_se(v - v*) - hat(r) K11 (u x p_t')
    rhs6[3] = -(u1 * kbtdu2 - u2 * kbtdu1) - (v1 * ksedv2 - v2 * ksedv1)
    rhs6[4] = -(u2 * kbtdu0 - u0 * kbtdu2) - (v2 * ksedv0 - v0 * ksedv2) + rx * k11w2
    rhs6[5] = -(u0 * kbtdu1 - u1 * kbtdu0) - (v0 * ksedv1 - v1 * ksedv0) - rx * k11w1

    x6 = np.empty(6)
    st = _solve6(M, rhs6, x6)
    if st != STATUS_OK:
        return st
    for i in range(6):
        out[12 + i] = x6[i]
    return STATUS_OK


@njit(cache=True, nogil=True)
def _orthonormalize(y):
    """Project the R block of the state to the nearest rotation.

    Two Newton-Schulz sweeps R <- R (3I - R^T R)/2; the per-step RK4 drift
    is tiny, so this reaches machine-level orthogonality.
    """
    for _ in range(2):
        g00 = y[3] * y[3] + y[6] * y[6] + y[9] * y[9]
        g01 = y[3] * y[4] + y[6] * y[7] + y[9] * y[10]
        g02 = y[3] * y[5] + y[6] * y[8] + y[9] * y[11]
        g11 = y[4] * y[4] + y[7] * y[7] + y[10] * y[10]
        g12 = y[4] * y[5] + y[7] * y[8] + y[10] * y[11]
        g22 = y[5] * y[5] + y[8] * y[8] + y[11] * y[11]
        h00 = 1.5 - 0.5 * g00
        h01 = -0.5 * g01
        h02 = -0.5 * g02
        h11 = 1.5 - 0.5 * g11
        h12 = -0.5 * g12
        h22 = 1.5 - 0.5 * g22
        for row in range(3):
            a = y[3 + 3 * row]
            b = y[4 + 3 * row]
            c = y[5 + 3 * row]
            y[3 + 3 * row] = a * h00 + b * h01 + c * h02
            y[4 + 3 * row] = a * h01 + b * h11 + c * h12
            y[5 + 3 * row] = a * h02 + b * h12 + c * h22


@njit(cache=True, nogil=True)
def _rk4_step(y, h, tau, fe, params, k1, k2, k3, k4, yt):
    st = _rhs(y, tau, fe, params, k1)
    if st != STATUS_OK:
        return st
    for i in range(18):
        yt[i] = y[i] + 0.5 * h * k1[i]
    st = _rhs(yt, tau, fe, params, k2)
    if st != STATUS_OK:
        return st
    for i in range(18):
        yt[i] = y[i] + 0.5 * h * k2[i]
    st = _rhs(yt, tau, fe, params, k3)
    if st != STATUS_OK:
        return st
    for i in range(18):
        yt[i] = y[i] + h * k3[i]
    st = _rhs(yt, tau, fe, params, k4)
    if st != STATUS_OK:
        return st
    for i in range(18):
        y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    _orthonormalize(y)
    for i in range(18):
        if not np.isfinite(y[i]):
            return STATUS_NOT_FINITE
    return STATUS_OK


@njit(cache=True, nogil=True)
def _integrate_traj(y0, span, n, tau, fe, params):
    """Fixed-step RK4 over [0, span]; returns all n+1 states."""
    traj = np.empty((n + 1, 18))
    for i in range(18):
        traj[0, i] = y0[i]
    y = y0.copy()
    h = span / n
    k1 = np.empty(18)
    k2 = np.empty(18)
    k3 = np.empty(18)
    k4 = np.empty(18)
    yt = np.empty(18)
    for step in range(n):
        st = _rk4_step(y, h, tau, fe, params, k1, k2, k3, k4, yt)
        if st != STATUS_OK:
            return traj, st, step * h
        for i in range(18):
            traj[step + 1, i] = y[i]
    return traj, STATUS_OK, span


@njit(cache=True, nogil=True)
def _integrate_final(y0, span, n, tau, fe, params, yout):
    """Like _integrate_traj but keeps only the terminal state."""
    for i in range(18):
        yout[i] = y0[i]
    h = span / n
    k1 = np.empty(18)
    k2 = np.empty(18)
    k3 = np.empty(18)
    k4 = np.empty(18)
    yt = np.empty(18)
    for step in range(n):
        st = _rk4_step(yout, h, tau, fe, params, k1, k2, k3, k4, yt)
        if st != STATUS_OK:
            return st, step * h
    return STATUS_OK, span


@njit(cache=True, nogil=True)
def _boundary_residual(yT, tau, params, scale, out):
    """Tendon-termination condition residual at the distal end.

    The tendon anchor applies a point load -tau * t along its own tangent
    t, which fixes v and u there; the tangent is evaluated at the terminal
    state itself, so the condition is implicit. The angular block is scaled
    to be commensurate with the linear one.
    """
    v0 = yT[12]
    v1 = yT[13]
    v2 = yT[14]
    u0 = yT[15]
    u1 = yT[16]
    u2 = yT[17]
    rx = params[6]
    pt0 = v0
    pt1 = v1 + u2 * rx
    pt2 = v2 - u1 * rx
    nt = np.sqrt(pt0 * pt0 + pt1 * pt1 + pt2 * pt2)
    if nt < _TANGENT_FLOOR:
        return STATUS_SINGULAR_TANGENT
    t0 = pt0 / nt
    t1 = pt1 / nt
    t2 = pt2 / nt
    out[0] = v0 - (params[7] - tau * t0 / params[0])
    out[1] = v1 - (params[8] - tau * t1 / params[1])
    out[2] = v2 - (params[9] - tau * t2 / params[2])
    # u_bc = u* - K_bt^-1 hat(r) (tau t), hat(r) t = (0, -rx t2, rx t1)
    out[3] = (u0 - params[10]) * scale
    out[4] = (u1 - (params[11] + tau * rx * t2 / params[4])) * scale
    out[5] = (u2 - (params[12] - tau * rx * t1 / params[5])) * scale
    return STATUS_OK


@njit(cache=True, nogil=True)
def _shooting_residual(x, p0, R0, span, n, tau, fe, params, scale, out):
    y0 = np.empty(18)
    for i in range(3):
        y0[i] = p0[i]
    for i in range(9):
        y0[3 + i] = R0[i]
    for i in range(3):
        y0[12 + i] = x[i]
        y0[15 + i] = x[3 + i]
    yT = np.empty(18)
    st, _ = _integrate_final(y0, span, n, tau, fe, params, yT)
    if st != STATUS_OK:
        return st
    return _boundary_residual(yT, tau, params, scale, out)


@njit(cache=True, nogil=True)
def _tip_condition_fixed_point(tau, params, x):
    """Constant-rate state satisfying the implicit tendon-anchor conditions.

    Solved by fixed-point iteration on the tendon tangent (the coupling is
    strongly contracting). For zero distributed load this state is an exact
    equilibrium of the interior ODE, so it makes an excellent shooting
    initializer; with gravity it is still close.
    """
    rx = params[6]
    v0 = params[7]
    v1 = params[8]
    v2 = params[9]
    u0 = params[10]
    u1 = params[11]
    u2 = params[12]
    for _ in range(60):
        pt0 = v0
        pt1 = v1 + u2 * rx
        pt2 = v2 - u1 * rx
        nt = np.sqrt(pt0 * pt0 + pt1 * pt1 + pt2 * pt2)
        if nt < _TANGENT_FLOOR:
            return STATUS_SINGULAR_TANGENT
        t0 = pt0 / nt
        t1 = pt1 / nt
        t2 = pt2 / nt
        nv0 = params[7] - tau * t0 / params[0]
        nv1 = params[8] - tau * t1 / params[1]
        nv2 = params[9] - tau * t2 / params[2]
        nu0 = params[10]
        nu1 = params[11] + tau * rx * t2 / params[4]
        nu2 = params[12] - tau * rx * t1 / params[5]
        delta = (
            abs(nv0 - v0) + abs(nv1 - v1) + abs(nv2 - v2)
            + abs(nu0 - u0) + abs(nu1 - u1) + abs(nu2 - u2)
        )
        v0, v1, v2, u0, u1, u2 = nv0, nv1, nv2, nu0, nu1, nu2
        if delta < 1e-16:
            break
    x[0] = v0
    x[1] = v1
    x[2] = v2
    x[3] = u0
    x[4] = u1
    x[5] = u2
    return STATUS_OK


@njit(cache=True, nogil=True)
def _norm6(v):
    acc = 0.0
    for i in range(6):
        acc += v[i] * v[i]
    return np.sqrt(acc)


@njit(cache=True, nogil=True)
def _newton_shoot(x0, p0, R0, span, n, tau, fe, params, scale, tol, maxit, fd_h):
    """Damped Newton on the base rates (v(0), u(0)).

    Forward-difference Jacobian, backtracking line search on the residual
    norm. Returns (x, residual, norm, iterations, status).
    """
    x = x0.copy()
    F = np.empty(6)
    st = _shooting_residual(x, p0, R0, span, n, tau, fe, params, scale, F)
    if st != STATUS_OK:
        return x, F, np.inf, 0, st
    normF = _norm6(F)
    iters = 0
    Fp = np.empty(6)
    Ft = np.empty(6)
    J = np.empty((6, 6))
    while normF >= tol and iters < maxit:
        for j in range(6):
            xp = x.copy()
            xp[j] += fd_h
            st = _shooting_residual(xp, p0, R0, span, n, tau, fe, params, scale, Fp)
            if st != STATUS_OK:
                return x, F, normF, iters, st
            for i in range(6):
                J[i, j] = (Fp[i] - F[i]) / fd_h
        negF = np.empty(6)
        for i in range(6):
            negF[i] = -F[i]
        dx = np.empty(6)
        st = _solve6(J, negF, dx)
        if st != STATUS_OK:
            return x, F, normF, iters, st
        alpha = 1.0
        accepted = False
        xt = np.empty(6)
        normT = normF
        for _ in range(12):
            for i in range(6):
                xt[i] = x[i] + alpha * dx[i]
            st = _shooting_residual(xt, p0, R0, span, n, tau, fe, params, scale, Ft)
            if st == STATUS_OK:
                normT = _norm6(Ft)
                if normT < normF * (1.0 - 1e-4 * alpha) or normT < tol:
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            return x, F, normF, iters, STATUS_STALLED
        for i in range(6):
            x[i] = xt[i]
            F[i] = Ft[i]
        normF = normT
        iters += 1
    status = STATUS_OK if normF < tol else STATUS_MAX_ITER
    return x, F, normF, iters, status

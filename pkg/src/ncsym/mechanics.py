"""Presymplectic particle models: geodesics, charges, Poisson brackets.

Numeric layer (float64).  Trajectories use fixed-step RK4 with
compensated state accumulation so that conserved-quantity drift over
10^4 steps stays at round-off level.  Differential forms are evaluated
as bilinear pairings at points, never stored symbolically; the spin
sphere is handled as an embedded unit vector with per-step
renormalization.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .lie import Connection
from .poly import Poly

EPS_UNIT = 1e-12


# ---------------------------------------------------------------------------
# integrators
# ---------------------------------------------------------------------------


def rk4(rhs, y0, h, steps, observer=None):
    """Fixed-step RK4 with Kahan-compensated accumulation of the state.

    ``observer(i, t, y)`` is called after every step when given.
    Returns the (steps+1, len(y0)) trajectory array.
    """
    y = np.array(y0, dtype=float)
    carry = np.zeros_like(y)
    out = np.empty((steps + 1, y.size))
    out[0] = y
    t = 0.0
    for i in range(1, steps + 1):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        incr = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        add = incr + carry
        new = y + add
        carry = add - (new - y)
        y = new
        t = i * h
        out[i] = y
        if observer is not None:
            observer(i, t, y)
    return out


def _connection_entries(conn: Connection):
    d = conn.dim
    entries = []
    for c in range(d + 1):
        for a in range(d + 1):
            for b in range(d + 1):
                p = conn[c, a, b]
                if not p.is_zero():
                    entries.append((c, a, b, p))
    return entries


def integrate_geodesic(conn: Connection, x0, xdot0, h, steps):
    """Affinely parametrized geodesics of a polynomial connection.

    State is (x^0..x^d, xdot^0..xdot^d); returns the trajectory and the
    time-velocity class ('timelike' for xdot^0 != 0, else 'lightlike',
    preserved exactly when the connection has no time components).
    """
    if h <= 0:
        raise ValueError("step size must be positive")
    d = conn.dim
    n = d + 1
    entries = _connection_entries(conn)

    def rhs(_t, y):
        x = y[:n]
        v = y[n:]
        acc = np.zeros(n)
        for c, a, b, p in entries:
            acc[c] -= p.evaluate(list(x)) * v[a] * v[b]
        return np.concatenate([v, acc])

    y0 = np.concatenate([np.array(x0, float), np.array(xdot0, float)])
    traj = rk4(rhs, y0, h, steps)
    tclass = "timelike" if abs(y0[n]) > 0 else "lightlike"
    return {"trajectory": traj, "tdot_class": tclass, "dim": d, "h": h}


# ---------------------------------------------------------------------------
# massive spinning particle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MassiveState:
    t: float
    x: np.ndarray
    v: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, float))
        object.__setattr__(self, "v", np.asarray(self.v, float))
        u = np.asarray(self.u, float)
        norm = float(np.linalg.norm(u))
        if norm == 0:
            raise ValueError("spin direction must be nonzero")
        if abs(norm - 1.0) > EPS_UNIT:
            u = u / norm
        object.__setattr__(self, "u", u)


def free_flow(state: MassiveState, dt: float) -> MassiveState:
    return replace(state, t=state.t + dt, x=state.x + dt * state.v)


def massive_charges(state: MassiveState, m: float, s: float) -> dict:
    """Conserved set of the free spinning particle."""
    if m <= 0:
        raise ValueError("mass must be positive")
    p = m * state.v
    q = state.x - state.v * state.t
    return {
        "P": p,
        "G": m * q,
        "J": np.cross(state.x, p) + s * state.u,
        "H": float(p @ p) / (2.0 * m),
        "K": m * float(q @ q) / 2.0,
        "D": float(p @ q),
    }


@dataclass(frozen=True)
class SchParams:
    """Generator parameters (omega antisymmetric 3x3, beta, gamma in R^3,
    kappa, lam, eps scalars) of the z = 2 projective family."""

    omega: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    kappa: float
    lam: float
    eps: float

    def __post_init__(self):
        om = np.asarray(self.omega, float)
        if om.shape != (3, 3) or not np.allclose(om, -om.T, atol=1e-14):
            raise ValueError("omega must be an antisymmetric 3x3 matrix")
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "beta", np.asarray(self.beta, float))
        object.__setattr__(self, "gamma", np.asarray(self.gamma, float))


def omega_vector(omega: np.ndarray) -> np.ndarray:
    """Dual vector of an antisymmetric matrix: w_A = -1/2 eps_ABC omega^BC."""
    return np.array([-omega[1, 2], omega[0, 2], -omega[0, 1]])


def massive_lift(params: SchParams, state: MassiveState) -> tuple:
    """Tangent vector (dt, dx, dv, du) of the lifted generator on the
    evolution space of the massive particle."""
    t, x, v, u = state.t, state.x, state.v, state.u
    dt = params.kappa * t * t + 2.0 * params.lam * t + params.eps
    dx = params.omega @ x + params.kappa * t * x + params.lam * x + params.beta * t + params.gamma
    dv = params.omega @ v + params.beta - params.lam * v + params.kappa * (x - v * t)
    du = params.omega @ u
    return dt, dx, dv, du


def massive_noether_charge(params: SchParams, state: MassiveState, m: float, s: float) -> float:
    """J.omega - G.beta + P.gamma - H eps - K kappa + D lam."""
    c = massive_charges(state, m, s)
    w = omega_vector(params.omega)
    return float(
        c["J"] @ w
        - c["G"] @ params.beta
        + c["P"] @ params.gamma
        - c["H"] * params.eps
        - c["K"] * params.kappa
        + c["D"] * params.lam
    )


def sigma_massive(state: MassiveState, W1, W2, m: float, s: float) -> float:
    """Evaluate m dv_A ^ (dx^A - v^A dt) - (s/2) eps_ABC u^A du^B ^ du^C
    on two ambient tangents (dt, dx, dv, du)."""
    dt1, dx1, dv1, du1 = W1
    dt2, dx2, dv2, du2 = W2
    a1 = dx1 - state.v * dt1
    a2 = dx2 - state.v * dt2
    val = m * (float(dv1 @ a2) - float(dv2 @ a1))
    val -= s * float(state.u @ np.cross(du1, du2))
    return val


def _sphere_frame(u: np.ndarray) -> tuple:
    """Right-handed orthonormal tangent pair (e1, e2) with e1 x e2 = u."""
    pick = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(u, pick)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    return e1, e2


def massive_noether_residual(
    params: SchParams, m: float, s: float, points, fd_step: float = 1e-6
) -> float:
    """max over points and chart directions of |sigma(lift, W) + dJ(W)|,
    with dJ by central finite differences."""
    worst = 0.0
    for state in points:
        e1, e2 = _sphere_frame(state.u)
        lift = massive_lift(params, state)

        def charge_at(dt, dx, dv, th1, th2):
            w = state.u + th1 * e1 + th2 * e2
            st = MassiveState(state.t + dt, state.x + dx, state.v + dv, w)
            return massive_noether_charge(params, st, m, s)

        directions = []
        directions.append(((1.0, np.zeros(3), np.zeros(3), np.zeros(3)), (1.0, 0.0, 0.0, 0.0, 0.0)))
        for A in range(3):
            dx = np.zeros(3)
            dx[A] = 1.0
            directions.append(((0.0, dx, np.zeros(3), np.zeros(3)), ("x", A)))
            dv = np.zeros(3)
            dv[A] = 1.0
            directions.append(((0.0, np.zeros(3), dv, np.zeros(3)), ("v", A)))
        directions.append(((0.0, np.zeros(3), np.zeros(3), e1), ("th", 0)))
        directions.append(((0.0, np.zeros(3), np.zeros(3), e2), ("th", 1)))

        h = fd_step
        for W, tag in directions:
            if tag == (1.0, 0.0, 0.0, 0.0, 0.0):
                plus = charge_at(h, np.zeros(3), np.zeros(3), 0.0, 0.0)
                minus = charge_at(-h, np.zeros(3), np.zeros(3), 0.0, 0.0)
            elif tag[0] == "x":
                dx = np.zeros(3)
                dx[tag[1]] = h
                plus = charge_at(0.0, dx, np.zeros(3), 0.0, 0.0)
                minus = charge_at(0.0, -dx, np.zeros(3), 0.0, 0.0)
            elif tag[0] == "v":
                dv = np.zeros(3)
                dv[tag[1]] = h
                plus = charge_at(0.0, np.zeros(3), dv, 0.0, 0.0)
                minus = charge_at(0.0, np.zeros(3), -dv, 0.0, 0.0)
            else:
                args = [0.0, 0.0]
                args[tag[1]] = h
                plus = charge_at(0.0, np.zeros(3), np.zeros(3), args[0], args[1])
                args[tag[1]] = -h
                minus = charge_at(0.0, np.zeros(3), np.zeros(3), args[0], args[1])
            dj = (plus - minus) / (2.0 * h)
            resid = abs(sigma_massive(state, lift, W, m, s) + dj)
            worst = max(worst, resid)
    return worst


# ---------------------------------------------------------------------------
# Poisson brackets on the space of motions
# ---------------------------------------------------------------------------


def _eps_matrix_q(p):
    """d(q x p)_A / dq_B."""
    return np.array([[0.0, p[2], -p[1]], [-p[2], 0.0, p[0]], [p[1], -p[0], 0.0]])


def poisson_brackets(m: float, s: float, n_points: int = 20, seed: int = 0) -> dict:
    """Bracket table of the charge functions on the space of motions.

    Coordinates (q, p, sphere tangent); the symplectic matrix is
    inverted numerically at each sample point and Hamiltonian vector
    fields are defined by Omega(X_F, .) = -dF, so {F, G} = Omega(X_F, X_G).
    """
    if m <= 0:
        raise ValueError("mass must be positive")
    rng = np.random.default_rng(seed)

    def gradients(q, p, u, e1, e2):
        """charge -> gradient in chart basis (dq, dp, dth1, dth2)."""
        out = {}
        for A in range(3):
            g = np.zeros(8)
            g[3 + A] = 1.0
            out[f"P{A}"] = g
            g = np.zeros(8)
            g[A] = m
            out[f"G{A}"] = g
        Mq = _eps_matrix_q(p)
        Mp = -_eps_matrix_q(q)
        for A in range(3):
            g = np.zeros(8)
            g[0:3] = Mq[A]
            g[3:6] = Mp[A]
            g[6] = s * e1[A]
            g[7] = s * e2[A]
            out[f"J{A}"] = g
        g = np.zeros(8)
        g[3:6] = p / m
        out["H"] = g
        g = np.zeros(8)
        g[0:3] = m * q
        out["K"] = g
        g = np.zeros(8)
        g[0:3] = p
        g[3:6] = q
        out["D"] = g
        return out

    tables = {}
    sign_jj = None
    for _ in range(n_points):
        q = rng.normal(size=3)
        p = rng.normal(size=3)
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        e1, e2 = _sphere_frame(u)
        omega = np.zeros((8, 8))
        for A in range(3):
            omega[A, 3 + A] = -1.0
            omega[3 + A, A] = 1.0
        omega[6, 7] = -s
        omega[7, 6] = s
        if s == 0:
            raise ValueError("spin sector needs s != 0 for a symplectic sphere")
        omega_inv = np.linalg.inv(omega)
        grads = gradients(q, p, u, e1, e2)

        def bracket(F, G):
            xf = omega_inv @ (-grads[F])
            xg = omega_inv @ (-grads[G])
            return float(xf @ omega @ xg)

        for A in range(3):
            for B in range(3):
                key = f"{{P{A},G{B}}}"
                tables.setdefault(key, []).append(bracket(f"P{A}", f"G{B}"))
        val = bracket("J0", "J1")
        j2 = float(np.cross(q, p)[2] + s * u[2])
        if abs(j2) > 1e-6:
            this_sign = 1.0 if val / j2 > 0 else -1.0
            if sign_jj is None:
                sign_jj = this_sign
            elif sign_jj != this_sign:
                sign_jj = 0.0  # inconsistent; callers treat as failure
        tables.setdefault("{J0,J1}/J2", []).append(val / j2 if abs(j2) > 1e-6 else np.nan)

    summary = {k: (float(np.min(v)), float(np.max(v))) for k, v in tables.items()}
    return {"m": m, "s": s, "tables": summary, "jj_sign": sign_jj}


# ---------------------------------------------------------------------------
# massless particle ("Galilean photon")
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhotonState:
    t: float
    x: np.ndarray
    E: float
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, float))
        u = np.asarray(self.u, float)
        norm = float(np.linalg.norm(u))
        if abs(norm - 1.0) > EPS_UNIT:
            raise ValueError("direction must be a unit vector")
        object.__setattr__(self, "u", u)


def photon_flow(state: PhotonState, arclength: float) -> PhotonState:
    """Instantaneous motion: x advances along u, everything else frozen."""
    return replace(state, x=state.x + arclength * state.u)


def _poly_eval_t(p: Poly, t: float) -> float:
    return p.evaluate([t] + [0] * p.dim)


def _omega_matrix_at(omega, t: float) -> np.ndarray:
    """Constant antisymmetric array, or a 3x3 of time polynomials."""
    if isinstance(omega, (list, tuple)) and isinstance(omega[0][0], Poly):
        return np.array([[_poly_eval_t(omega[a][b], t) for b in range(3)] for a in range(3)])
    return np.asarray(omega, float)


def _omega_is_time_dependent(omega) -> bool:
    if isinstance(omega, (list, tuple)) and isinstance(omega[0][0], Poly):
        return any(p.depends_on(0) for row in omega for p in row)
    return False


def photon_charge(state: PhotonState, k: float, s: float, omega, eta, xi) -> float:
    """(x cross ku + su).omega(t) + ku.eta(t) - xi(t) E.

    ``omega`` is an antisymmetric 3x3 rotation block, constant or a
    matrix of time polynomials; time dependence with s != 0 is rejected
    because the spin term forces omega' = 0.  ``eta`` is a triple of
    time polynomials, ``xi`` a time polynomial.
    """
    if k <= 0:
        raise ValueError("color k must be positive")
    if s != 0 and _omega_is_time_dependent(omega):
        raise ValueError(
            "spin obstructs time-dependent rotations: omega' = 0 is required when s != 0"
        )
    om = _omega_matrix_at(omega, state.t)
    if om.shape != (3, 3) or not np.allclose(om, -om.T, atol=1e-14):
        raise ValueError("omega must be an antisymmetric 3x3 matrix")
    eta_t = np.array([_poly_eval_t(p, state.t) for p in eta])
    xi_t = _poly_eval_t(xi, state.t)
    w = omega_vector(om)
    return float(
        (np.cross(state.x, k * state.u) + s * state.u) @ w
        + k * state.u @ eta_t
        - xi_t * state.E
    )


def photon_lift(k: float, omega_polys, eta, xi):
    """Canonical-lift tangent of a conformal generator with time-dependent
    rotation omega(t), translation eta(t) and reparametrization xi(t):
    returns state -> (dt, dx, dE, du)."""

    def lift(state: PhotonState):
        t = state.t
        om = np.array([[_poly_eval_t(omega_polys[a][b], t) for b in range(3)] for a in range(3)])
        om_p = np.array(
            [[_poly_eval_t(omega_polys[a][b].differentiate(0), t) for b in range(3)] for a in range(3)]
        )
        eta_t = np.array([_poly_eval_t(p, t) for p in eta])
        eta_p = np.array([_poly_eval_t(p.differentiate(0), t) for p in eta])
        xi_t = _poly_eval_t(xi, t)
        xi_p = _poly_eval_t(xi.differentiate(0), t)
        dt = xi_t
        dx = om @ state.x + eta_t
        dE = k * (float(state.u @ (om_p @ state.x)) + float(eta_p @ state.u)) - xi_p * state.E
        du = om @ state.u
        return dt, dx, dE, du

    return lift


def sigma_photon(state: PhotonState, W1, W2, k: float, s: float) -> float:
    """Evaluate k du_A ^ dx^A - dE ^ dt - (s/2) eps u du du on tangents
    (dt, dx, dE, du)."""
    dt1, dx1, dE1, du1 = W1
    dt2, dx2, dE2, du2 = W2
    val = k * (float(du1 @ dx2) - float(du2 @ dx1))
    val -= dE1 * dt2 - dE2 * dt1
    val -= s * float(state.u @ np.cross(du1, du2))
    return val


# -- chart-based residual of the symmetry condition ------------------------


def presymplectic_residual_photon(lift, states, k: float, s: float, h: float = 1e-5) -> float:
    """max |d(i_Z sigma)| entries over chart pairs at the given states;
    zero for symmetries since the model form is closed."""
    worst = 0.0
    for base in states:
        e1, e2 = _sphere_frame(base.u)

        def unpack(c):
            # chart coords: t, x(3), E, th(2)
            w = base.u + c[5] * e1 + c[6] * e2
            w = w / np.linalg.norm(w)
            return PhotonState(base.t + c[0], base.x + c[1:4], base.E + c[4], w)

        def frame(c, mu):
            if mu == 0:
                return (1.0, np.zeros(3), 0.0, np.zeros(3))
            if 1 <= mu <= 3:
                dx = np.zeros(3)
                dx[mu - 1] = 1.0
                return (0.0, dx, 0.0, np.zeros(3))
            if mu == 4:
                return (0.0, np.zeros(3), 1.0, np.zeros(3))
            w = base.u + c[5] * e1 + c[6] * e2
            nw = np.linalg.norm(w)
            e = e1 if mu == 5 else e2
            du = e / nw - w * float(w @ e) / nw**3
            return (0.0, np.zeros(3), 0.0, du)

        def alpha(c, mu):
            st = unpack(c)
            return sigma_photon(st, lift(st), frame(c, mu), k, s)

        ncoords = 7
        for mu in range(ncoords):
            for nu in range(mu + 1, ncoords):
                cp = np.zeros(ncoords)
                cp[mu] = h
                cm = np.zeros(ncoords)
                cm[mu] = -h
                d_mu_alpha_nu = (alpha(cp, nu) - alpha(cm, nu)) / (2 * h)
                cp = np.zeros(ncoords)
                cp[nu] = h
                cm = np.zeros(ncoords)
                cm[nu] = -h
                d_nu_alpha_mu = (alpha(cp, mu) - alpha(cm, mu)) / (2 * h)
                worst = max(worst, abs(d_mu_alpha_nu - d_nu_alpha_mu))
    return worst


def presymplectic_residual_massive(params: SchParams, states, m: float, s: float, h: float = 1e-5) -> float:
    """Same check for the massive model and its lifted generators."""
    worst = 0.0
    for base in states:
        e1, e2 = _sphere_frame(base.u)

        def unpack(c):
            # chart coords: t, x(3), v(3), th(2)
            w = base.u + c[7] * e1 + c[8] * e2
            w = w / np.linalg.norm(w)
            return MassiveState(base.t + c[0], base.x + c[1:4], base.v + c[4:7], w)

        def frame(c, mu):
            if mu == 0:
                return (1.0, np.zeros(3), np.zeros(3), np.zeros(3))
            if 1 <= mu <= 3:
                dx = np.zeros(3)
                dx[mu - 1] = 1.0
                return (0.0, dx, np.zeros(3), np.zeros(3))
            if 4 <= mu <= 6:
                dv = np.zeros(3)
                dv[mu - 4] = 1.0
                return (0.0, np.zeros(3), dv, np.zeros(3))
            w = base.u + c[7] * e1 + c[8] * e2
            nw = np.linalg.norm(w)
            e = e1 if mu == 7 else e2
            du = e / nw - w * float(w @ e) / nw**3
            return (0.0, np.zeros(3), np.zeros(3), du)

        def alpha(c, mu):
            st = unpack(c)
            return sigma_massive(st, massive_lift(params, st), frame(c, mu), m, s)

        ncoords = 9
        for mu in range(ncoords):
            for nu in range(mu + 1, ncoords):
                cp = np.zeros(ncoords)
                cp[mu] = h
                cm = np.zeros(ncoords)
                cm[mu] = -h
                d_mu_alpha_nu = (alpha(cp, nu) - alpha(cm, nu)) / (2 * h)
                cp = np.zeros(ncoords)
                cp[nu] = h
                cm = np.zeros(ncoords)
                cm[nu] = -h
                d_nu_alpha_mu = (alpha(cp, mu) - alpha(cm, mu)) / (2 * h)
                worst = max(worst, abs(d_mu_alpha_nu - d_nu_alpha_mu))
    return worst


# ---------------------------------------------------------------------------
# central-potential runs
# ---------------------------------------------------------------------------

R_MIN = 1e-3


def jacobi_charges(times, xs, vs, m: float, c: float) -> dict:
    """(E, D, K) series of a trajectory in the potential U = c/|x|^2:
    the energy, the dilation charge p.x - 2Et, and the expansion charge
    m x^2/2 - t D - E t^2."""
    times = np.asarray(times, float)
    xs = np.asarray(xs, float)
    vs = np.asarray(vs, float)
    r2 = np.sum(xs * xs, axis=1)
    if np.min(r2) < R_MIN**2:
        raise ValueError("trajectory entered the r_min ball")
    E = 0.5 * m * np.sum(vs * vs, axis=1) + c / r2
    D = m * np.sum(vs * xs, axis=1) - 2.0 * E * times
    K = 0.5 * m * r2 - times * D - E * times * times
    return {"E": E, "D": D, "K": K}


def inverse_square_trajectory(m: float, c: float, x0, v0, h: float, steps: int):
    """RK4 run in U = c/|x|^2; guards the r_min ball; returns the state
    trajectory and the (E, D, K) series."""

    def rhs(_t, y):
        x = y[:3]
        v = y[3:]
        r2 = float(x @ x)
        if r2 < R_MIN**2:
            raise ValueError("trajectory entered the r_min ball")
        acc = (2.0 * c / (m * r2 * r2)) * x
        return np.concatenate([v, acc])

    y0 = np.concatenate([np.array(x0, float), np.array(v0, float)])
    traj = rk4(rhs, y0, h, steps)
    times = h * np.arange(steps + 1)
    xs = traj[:, :3]
    vs = traj[:, 3:]
    out = {"t": times, "x": xs, "v": vs}
    out.update(jacobi_charges(times, xs, vs, m, c))
    return out


def harmonic_trajectory(m: float, k: float, x0, v0, h: float, steps: int):
    """Same series for U = 1/2 k |x|^2 (degree +2 control: D must drift)."""

    def rhs(_t, y):
        x = y[:3]
        v = y[3:]
        return np.concatenate([v, -(k / m) * x])

    y0 = np.concatenate([np.array(x0, float), np.array(v0, float)])
    traj = rk4(rhs, y0, h, steps)
    times = h * np.arange(steps + 1)
    xs = traj[:, :3]
    vs = traj[:, 3:]
    E = 0.5 * m * np.sum(vs * vs, axis=1) + 0.5 * k * np.sum(xs * xs, axis=1)
    D = m * np.sum(vs * xs, axis=1) - 2.0 * E * times
    return {"t": times, "x": xs, "v": vs, "E": E, "D": D}

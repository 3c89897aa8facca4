"""Galilean fluid symmetry laboratory.

Fields theta(t, x) and rho(t, x) are Python callables over second-order
forward-mode jets, so the continuity and Bernoulli residuals come from
automatic differentiation of analytic solutions rather than from a
discretized solver: the claims being tested are transformation
identities, and a PDE solver would only add unrelated discretization
error.  Charges use tensor-product Gauss-Legendre quadrature of fixed
order per axis on a caller-supplied box.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np


def worker_cap() -> int:
    """Worker cap from NCSYM_THREADS (>=1); sampling loops may fan out."""
    try:
        return max(1, int(os.environ.get("NCSYM_THREADS", "1")))
    except ValueError:
        return 1


class Jet2:
    """Second-order jet: value, gradient and Hessian over n variables.

    Values are numpy arrays (batched over evaluation points); gradient
    has shape (n,) + batch and the Hessian (n, n) + batch.  Arithmetic
    follows the usual truncated-Taylor rules, i.e. nested dual numbers
    collapsed to second order.
    """

    __slots__ = ("val", "grad", "hess", "n")

    def __init__(self, val, grad, hess, n):
        self.val = np.asarray(val, float)
        self.grad = np.asarray(grad, float)
        self.hess = np.asarray(hess, float)
        self.n = n

    @classmethod
    def variable(cls, index: int, value, n: int) -> "Jet2":
        value = np.asarray(value, float)
        grad = np.zeros((n,) + value.shape)
        grad[index] = 1.0
        hess = np.zeros((n, n) + value.shape)
        return cls(value, grad, hess, n)

    @classmethod
    def constant(cls, value, n: int, batch_shape=()) -> "Jet2":
        value = np.broadcast_to(np.asarray(value, float), batch_shape).copy()
        return cls(value, np.zeros((n,) + batch_shape), np.zeros((n, n) + batch_shape), n)

    def _lift(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return other
        return Jet2.constant(other, self.n, self.val.shape)

    def __add__(self, other):
        o = self._lift(other)
        return Jet2(self.val + o.val, self.grad + o.grad, self.hess + o.hess, self.n)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.grad, -self.hess, self.n)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        val = self.val * o.val
        grad = self.grad * o.val + self.val * o.grad
        hess = (
            self.hess * o.val
            + self.val * o.hess
            + self.grad[:, None] * o.grad[None, :]
            + o.grad[:, None] * self.grad[None, :]
        )
        return Jet2(val, grad, hess, self.n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return self * o._reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self._reciprocal()

    def _reciprocal(self):
        inv = 1.0 / self.val
        grad = -self.grad * inv**2
        hess = -self.hess * inv**2 + 2.0 * self.grad[:, None] * self.grad[None, :] * inv**3
        return Jet2(inv, grad, hess, self.n)

    def __pow__(self, e):
        if isinstance(e, int) and e >= 0:
            out = Jet2.constant(1.0, self.n, self.val.shape)
            for _ in range(e):
                out = out * self
            return out
        v = self.val**e
        dv = e * self.val ** (e - 1)
        ddv = e * (e - 1) * self.val ** (e - 2)
        return self._chain(v, dv, ddv)

    def exp(self):
        v = np.exp(self.val)
        return self._chain(v, v, v)

    def _chain(self, v, dv, ddv):
        grad = dv * self.grad
        hess = dv * self.hess + ddv * self.grad[:, None] * self.grad[None, :]
        return Jet2(v, grad, hess, self.n)


Field = Callable[..., Jet2]  # field(t, x1..xd) over jets


def seed_points(points: np.ndarray) -> list[Jet2]:
    """Identity jets of the coordinates for a (npts, d+1) array of points."""
    points = np.atleast_2d(np.asarray(points, float))
    n = points.shape[1]
    return [Jet2.variable(i, points[:, i], n) for i in range(n)]


def eval_field(field: Field, points: np.ndarray) -> Jet2:
    return field(*seed_points(points))


# ---------------------------------------------------------------------------
# potentials and residuals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Potential:
    """Pressure potential V(rho): 'zero', polytropic c rho^g, or c/rho."""

    kind: str
    c: float = 0.0
    gamma: float = 0.0

    def value(self, rho: Jet2) -> Jet2:
        if self.kind == "zero":
            return Jet2.constant(0.0, rho.n, rho.val.shape)
        if self.kind == "polytropic":
            return rho**self.gamma * self.c
        if self.kind == "chaplygin":
            return rho._reciprocal() * self.c
        raise ValueError(f"unknown potential {self.kind}")

    def enthalpy(self, rho: Jet2) -> Jet2:
        if self.kind == "zero":
            return Jet2.constant(0.0, rho.n, rho.val.shape)
        if self.kind == "polytropic":
            return rho ** (self.gamma - 1.0) * (self.c * self.gamma)
        if self.kind == "chaplygin":
            return (rho * rho)._reciprocal() * (-self.c)
        raise ValueError(f"unknown potential {self.kind}")


ZERO_POTENTIAL = Potential("zero")


def _residual_chunk(theta: Field, rho: Field, V: Potential, points: np.ndarray) -> dict:
    points = np.atleast_2d(np.asarray(points, float))
    d = points.shape[1] - 1
    jt = eval_field(theta, points)
    jr = eval_field(rho, points)
    # continuity: d_t rho + grad rho . grad theta + rho * laplacian theta
    cont = jr.grad[0] + sum(jr.grad[A] * jt.grad[A] for A in range(1, d + 1))
    cont = cont + jr.val * sum(jt.hess[A][A] for A in range(1, d + 1))
    # Bernoulli: d_t theta + 1/2 |grad theta|^2 + V'(rho)
    bern = jt.grad[0] + 0.5 * sum(jt.grad[A] ** 2 for A in range(1, d + 1))
    bern = bern + V.enthalpy(jr).val
    if not (np.all(np.isfinite(cont)) and np.all(np.isfinite(bern))):
        raise ValueError("field evaluated outside its domain")
    return {
        "continuity": float(np.max(np.abs(cont))),
        "bernoulli": float(np.max(np.abs(bern))),
    }


def fluid_residual(theta: Field, rho: Field, V: Potential, points: np.ndarray) -> dict:
    """Max abs residuals of the continuity and Bernoulli equations.

    Sampling is embarrassingly parallel over points; chunks fan out to a
    thread pool when NCSYM_THREADS allows more than one worker.
    """
    points = np.atleast_2d(np.asarray(points, float))
    cap = worker_cap()
    if cap <= 1 or points.shape[0] < 2 * cap:
        return _residual_chunk(theta, rho, V, points)
    from concurrent.futures import ThreadPoolExecutor

    chunks = np.array_split(points, cap)
    with ThreadPoolExecutor(max_workers=cap) as pool:
        parts = list(pool.map(lambda c: _residual_chunk(theta, rho, V, c), chunks))
    return {
        "continuity": max(p["continuity"] for p in parts),
        "bernoulli": max(p["bernoulli"] for p in parts),
    }


# ---------------------------------------------------------------------------
# catalog of analytic solutions
# ---------------------------------------------------------------------------


def uniform_flow(b: Sequence[float], rho0: float = 1.0):
    """theta = b.x - |b|^2 t / 2, rho = rho0: residual-free for V = 0."""
    b = np.asarray(b, float)

    def theta(t, *xs):
        acc = t * (-0.5 * float(b @ b))
        for bi, xi in zip(b, xs):
            acc = acc + xi * bi
        return acc

    def rho(t, *xs):
        return Jet2.constant(rho0, t.n, t.val.shape)

    return theta, rho


def self_similar_free(a: float, rho0: float, d: int):
    """theta = |x|^2 / (2(t+a)), rho = rho0 (a/(t+a))^d."""

    def theta(t, *xs):
        r2 = xs[0] * xs[0]
        for xi in xs[1:]:
            r2 = r2 + xi * xi
        return r2 / ((t + a) * 2.0)

    def rho(t, *xs):
        return ((t + a) ** (-1.0)) ** d * (rho0 * a**d)

    return theta, rho


def gaussian_packet(b: Sequence[float], sigma: float, rho0: float = 1.0):
    """Uniformly translating Gaussian density on the uniform flow."""
    b = np.asarray(b, float)

    def theta(t, *xs):
        acc = t * (-0.5 * float(b @ b))
        for bi, xi in zip(b, xs):
            acc = acc + xi * bi
        return acc

    def rho(t, *xs):
        q2 = None
        for bi, xi in zip(b, xs):
            qi = xi - t * bi
            q2 = qi * qi if q2 is None else q2 + qi * qi
        return (q2 * (-0.5 / sigma**2)).exp() * rho0

    return theta, rho


def chaplygin_rest(c: float, rho0: float, t0: float = 0.0):
    """Uniform fluid at rest with the inverse-density potential:
    theta = (c/rho0^2)(t - t0), rho = rho0."""

    def theta(t, *xs):
        return (t - t0) * (c / rho0**2)

    def rho(t, *xs):
        return Jet2.constant(rho0, t.n, t.val.shape)

    return theta, rho


# ---------------------------------------------------------------------------
# symmetry transformations (field-level implementations)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FluidTransform:
    kind: str  # BOOST, Z_DILATION, EXPANSION, ACCELERATION, TIME_DILATION
    b: tuple = ()
    lam: float = 1.0
    z: float = 2.0
    kappa: float = 0.0
    a: tuple = ()


def apply_transform(T: FluidTransform, theta: Field, rho: Field, d: int):
    """Transformed field closures (exact composition, no approximation)."""
    if T.kind == "BOOST":
        b = np.asarray(T.b, float)

        def theta2(t, *xs):
            shifted = [xi + t * bi for xi, bi in zip(xs, b)]
            acc = theta(t, *shifted)
            for bi, xi in zip(b, xs):
                acc = acc - xi * bi
            return acc - t * (0.5 * float(b @ b))

        def rho2(t, *xs):
            return rho(t, *[xi + t * bi for xi, bi in zip(xs, b)])

        return theta2, rho2

    if T.kind == "Z_DILATION":
        lam, z = float(T.lam), float(T.z)

        def theta2(t, *xs):
            return theta(t * lam**z, *[xi * lam for xi in xs]) * lam ** (z - 2.0)

        def rho2(t, *xs):
            return rho(t * lam**z, *[xi * lam for xi in xs]) * lam ** (d - z + 2.0)

        return theta2, rho2

    if T.kind == "EXPANSION":
        kappa = float(T.kappa)

        def theta2(t, *xs):
            om = (1.0 - t * kappa) ** (-1.0)
            star = [xi * om for xi in xs]
            r2 = star[0] * star[0]
            for xi in star[1:]:
                r2 = r2 + xi * xi
            # quadratic counterterm -kappa |x|^2 / (2 (1 - kappa t))
            x2 = xs[0] * xs[0]
            for xi in xs[1:]:
                x2 = x2 + xi * xi
            return theta(t * om, *star) - x2 * om * (0.5 * kappa)

        def rho2(t, *xs):
            om = (1.0 - t * kappa) ** (-1.0)
            return rho(t * om, *[xi * om for xi in xs]) * om**d

        return theta2, rho2

    if T.kind == "ACCELERATION":
        a = np.asarray(T.a, float)

        def theta2(t, *xs):
            star = [xi - t * t * (0.5 * ai) for xi, ai in zip(xs, a)]
            acc = theta(t, *star)
            for ai, xi in zip(a, star):
                acc = acc + xi * ai * t
            return acc

        def rho2(t, *xs):
            return rho(t, *[xi - t * t * (0.5 * ai) for xi, ai in zip(xs, a)])

        return theta2, rho2

    if T.kind == "TIME_DILATION":
        lam = float(T.lam)

        def theta2(t, *xs):
            return theta(t * lam, *xs) * lam

        def rho2(t, *xs):
            return rho(t * lam, *xs) * (1.0 / lam)

        return theta2, rho2

    raise ValueError(f"unknown transform {T.kind}")


def generalized_expansion(theta: Field, rho: Field, d: int, kappa: float,
                          alpha: float, beta: float, gamma: float, delta: float):
    """Family t* = Om t, x* = Om^alpha x, rho* = Om^delta rho(t*,x*),
    theta* = theta(t*,x*) - beta kappa Om^gamma |x*|^2, Om = 1/(1-kappa t).

    Only (alpha, beta, gamma, delta) = (1, 1/2, -1, d) maps solutions to
    solutions; the grid scan over the exponents refutes every other point.
    """

    def theta2(t, *xs):
        om = (1.0 - t * kappa) ** (-1.0)
        star = [xi * om**alpha for xi in xs]
        r2 = star[0] * star[0]
        for xi in star[1:]:
            r2 = r2 + xi * xi
        return theta(t * om, *star) - r2 * om**gamma * (beta * kappa)

    def rho2(t, *xs):
        om = (1.0 - t * kappa) ** (-1.0)
        return rho(t * om, *[xi * om**alpha for xi in xs]) * om**delta

    return theta2, rho2


# ---------------------------------------------------------------------------
# dynamical exponent vs polytropic exponent (exact)
# ---------------------------------------------------------------------------


def polytropic_exponent(z: Fraction, d: int) -> Fraction:
    """gamma = (d+z)/(d+2-z); pole at z = d+2."""
    z = Fraction(z)
    if z == d + 2:
        raise ValueError("pole: z = d + 2")
    return Fraction(d + z, d + 2 - z)


def z_of_gamma(gamma: Fraction, d: int):
    """z = (gamma(d+2)-d)/(gamma+1); gamma = -1 is the inverse-density
    (time-dilation) case and has no finite exponent."""
    gamma = Fraction(gamma)
    if gamma == -1:
        return "chaplygin"
    return Fraction(gamma * (d + 2) - d, gamma + 1)


# ---------------------------------------------------------------------------
# integrated charges
# ---------------------------------------------------------------------------


def gauss_legendre_mesh(box: Sequence[tuple], order: int = 16):
    """Tensor-product nodes and weights over a box [(lo, hi)] * d."""
    nodes_1d, weights_1d = np.polynomial.legendre.leggauss(order)
    axes, weights = [], []
    for lo, hi in box:
        mid, half = (hi + lo) / 2.0, (hi - lo) / 2.0
        axes.append(mid + half * nodes_1d)
        weights.append(half * weights_1d)
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*weights, indexing="ij")
    w = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return pts, w


def fluid_charges(theta: Field, rho: Field, d: int, box, t: float,
                  V: Potential = ZERO_POTENTIAL, order: int = 16) -> dict:
    """Integrated charge set at time t over the given spatial box."""
    pts, w = gauss_legendre_mesh(box, order)
    points = np.concatenate([np.full((pts.shape[0], 1), float(t)), pts], axis=1)
    jt = eval_field(theta, points)
    jr = eval_field(rho, points)
    if not np.all(np.isfinite(jr.val)) or not np.all(np.isfinite(jt.val)):
        raise ValueError("non-finite integrand samples")
    rho_v = jr.val
    grad_theta = np.stack([jt.grad[A] for A in range(1, d + 1)], axis=0)
    x = pts.T
    M = float(np.sum(w * rho_v))
    P = np.array([float(np.sum(w * rho_v * grad_theta[A])) for A in range(d)])
    G = np.array(
        [float(np.sum(w * rho_v * (x[A] - t * grad_theta[A]))) for A in range(d)]
    )
    J = np.zeros((d, d))
    for A in range(d):
        for B in range(d):
            J[A, B] = float(np.sum(w * rho_v * (x[A] * grad_theta[B] - x[B] * grad_theta[A]))) / 2.0
    H = float(np.sum(w * (0.5 * rho_v * np.sum(grad_theta**2, axis=0) + V.value(jr).val)))
    D = t * H - 0.5 * float(np.sum(w * rho_v * np.sum(x * grad_theta, axis=0)))
    K = -t * t * H + 2.0 * t * D + 0.5 * float(np.sum(w * rho_v * np.sum(x * x, axis=0)))
    out = {"M": M, "P": P, "G": G, "J": J, "H": H, "D": D, "K": K}
    if d == 3:
        out["J_vec"] = np.array([2 * J[1, 2], 2 * J[2, 0], 2 * J[0, 1]])
    if V.kind == "chaplygin":
        out["Delta"] = t * H - float(np.sum(w * rho_v * jt.val))
    return out


def random_points(d: int, n: int, seed: int, t_range=(0.1, 0.9), x_range=(-1.0, 1.0),
                  predicate=None) -> np.ndarray:
    """Deterministic sample points (t, x) for residual evaluation."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        t = rng.uniform(*t_range)
        x = rng.uniform(*x_range, size=d)
        cand = np.concatenate([[t], x])
        if predicate is None or predicate(cand):
            pts.append(cand)
    return np.array(pts)

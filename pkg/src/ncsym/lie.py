"""Vector fields, Lie brackets and Lie derivatives on a fixed global chart.

All index conventions: 0 = time, 1..d = space.  Symmetrization over a
pair of indices carries the 1/2 normalization, e.g.
T_(ab) = (T_ab + T_ba)/2.  Everything is exact polynomial arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly


def _check_same_dim(*dims: int) -> int:
    d = dims[0]
    if any(x != d for x in dims):
        raise ValueError("dimension mismatch")
    return d


@dataclass(frozen=True)
class VectorField:
    """X = X^0 d_t + X^A d_A with polynomial components."""

    dim: int
    components: tuple

    def __init__(self, dim: int, components):
        comps = tuple(components)
        if len(comps) != dim + 1:
            raise ValueError(f"need {dim + 1} components, got {len(comps)}")
        if any(c.dim != dim for c in comps):
            raise ValueError("component dimension mismatch")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, dim: int) -> "VectorField":
        return cls(dim, [Poly.zero(dim)] * (dim + 1))

    def __getitem__(self, a: int) -> Poly:
        return self.components[a]

    def __add__(self, other: "VectorField") -> "VectorField":
        _check_same_dim(self.dim, other.dim)
        return VectorField(self.dim, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        _check_same_dim(self.dim, other.dim)
        return VectorField(self.dim, [a - b for a, b in zip(self.components, other.components)])

    def scale(self, c) -> "VectorField":
        return VectorField(self.dim, [comp * c for comp in self.components])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def apply(self, func: Poly) -> Poly:
        """Directional derivative X(func) = X^a d_a func."""
        out = Poly.zero(self.dim)
        for a in range(self.dim + 1):
            out = out + self.components[a] * func.differentiate(a)
        return out

    def to_obj(self) -> dict:
        return {"dim": self.dim, "components": [c.to_obj() for c in self.components]}

    @classmethod
    def from_obj(cls, obj) -> "VectorField":
        d = obj["dim"]
        return cls(d, [Poly.from_obj(d, c) for c in obj["components"]])


@dataclass(frozen=True)
class OneForm:
    dim: int
    components: tuple

    def __init__(self, dim: int, components):
        comps = tuple(components)
        if len(comps) != dim + 1:
            raise ValueError(f"need {dim + 1} components")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, dim: int) -> "OneForm":
        return cls(dim, [Poly.zero(dim)] * (dim + 1))

    def __getitem__(self, a: int) -> Poly:
        return self.components[a]

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.dim, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.dim, [a - b for a, b in zip(self.components, other.components)])

    def scale(self, c) -> "OneForm":
        return OneForm(self.dim, [comp * c for comp in self.components])

    def pair(self, X: VectorField) -> Poly:
        out = Poly.zero(self.dim)
        for a in range(self.dim + 1):
            out = out + self.components[a] * X[a]
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def to_obj(self) -> dict:
        return {"dim": self.dim, "components": [c.to_obj() for c in self.components]}

    @classmethod
    def from_obj(cls, obj) -> "OneForm":
        d = obj["dim"]
        return cls(d, [Poly.from_obj(d, c) for c in obj["components"]])


class SymTensor2Up:
    """Twice-contravariant symmetric tensor (gamma and its Lie derivatives)."""

    __slots__ = ("dim", "comp")

    def __init__(self, dim: int, comp):
        comp = [list(row) for row in comp]
        n = dim + 1
        if len(comp) != n or any(len(r) != n for r in comp):
            raise ValueError("component matrix must be (d+1)x(d+1)")
        for a in range(n):
            for b in range(a + 1, n):
                if comp[a][b] != comp[b][a]:
                    raise ValueError("tensor is not symmetric")
        self.dim = dim
        self.comp = comp

    def __getitem__(self, ab):
        a, b = ab
        return self.comp[a][b]

    def scale(self, c) -> "SymTensor2Up":
        return SymTensor2Up(self.dim, [[v * c for v in row] for row in self.comp])

    def __sub__(self, other: "SymTensor2Up") -> "SymTensor2Up":
        return SymTensor2Up(
            self.dim,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.comp, other.comp)],
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.comp for v in row)

    def to_obj(self) -> dict:
        return {"dim": self.dim, "components": [[p.to_obj() for p in row] for row in self.comp]}

    @classmethod
    def from_obj(cls, obj) -> "SymTensor2Up":
        d = obj["dim"]
        return cls(d, [[Poly.from_obj(d, p) for p in row] for row in obj["components"]])


class TwoForm:
    """Antisymmetric twice-covariant tensor."""

    __slots__ = ("dim", "comp")

    def __init__(self, dim: int, comp):
        comp = [list(row) for row in comp]
        n = dim + 1
        if len(comp) != n or any(len(r) != n for r in comp):
            raise ValueError("component matrix must be (d+1)x(d+1)")
        for a in range(n):
            if not comp[a][a].is_zero():
                raise ValueError("two-form has nonzero diagonal")
            for b in range(a + 1, n):
                if comp[a][b] != -comp[b][a]:
                    raise ValueError("two-form is not antisymmetric")
        self.dim = dim
        self.comp = comp

    @classmethod
    def zero(cls, dim: int) -> "TwoForm":
        z = Poly.zero(dim)
        return cls(dim, [[z] * (dim + 1) for _ in range(dim + 1)])

    @classmethod
    def from_upper(cls, dim: int, entries: dict) -> "TwoForm":
        """Build from {(a,b): Poly} with a < b; the lower triangle is implied."""
        z = Poly.zero(dim)
        comp = [[z] * (dim + 1) for _ in range(dim + 1)]
        for (a, b), val in entries.items():
            if a >= b:
                raise ValueError("use a < b keys")
            comp[a][b] = val
            comp[b][a] = -val
        return cls(dim, comp)

    def __getitem__(self, ab):
        a, b = ab
        return self.comp[a][b]

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(
            self.dim,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.comp, other.comp)],
        )

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(
            self.dim,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.comp, other.comp)],
        )

    def scale(self, c) -> "TwoForm":
        return TwoForm(self.dim, [[v * c for v in row] for row in self.comp])

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.comp for v in row)

    def to_obj(self) -> dict:
        return {
            "dim": self.dim,
            "upper": [
                {"index": [a, b], "value": self.comp[a][b].to_obj()}
                for a in range(self.dim + 1)
                for b in range(a + 1, self.dim + 1)
                if not self.comp[a][b].is_zero()
            ],
        }

    @classmethod
    def from_obj(cls, obj) -> "TwoForm":
        d = obj["dim"]
        return cls.from_upper(
            d, {tuple(e["index"]): Poly.from_obj(d, e["value"]) for e in obj["upper"]}
        )


class ThreeForm:
    """Rank-3 fully antisymmetric tensor, stored on sorted index triples."""

    __slots__ = ("dim", "comp")

    def __init__(self, dim: int, comp: dict):
        self.dim = dim
        self.comp = dict(comp)

    def __getitem__(self, abc):
        a, b, c = abc
        if len({a, b, c}) < 3:
            return Poly.zero(self.dim)
        order = sorted([a, b, c])
        val = self.comp.get(tuple(order), Poly.zero(self.dim))
        perm = (a, b, c)
        # parity of the permutation taking sorted order to (a, b, c)
        sign = 1
        seq = list(perm)
        for i in range(3):
            for j in range(2 - i):
                if seq[j] > seq[j + 1]:
                    seq[j], seq[j + 1] = seq[j + 1], seq[j]
                    sign = -sign
        return val if sign == 1 else -val

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.comp.values())


class Connection:
    """Symmetric-in-lower-indices coefficients, comp[c][a][b]; also used
    for the (1,2)-tensors produced by Lie-deriving a connection."""

    __slots__ = ("dim", "comp")

    def __init__(self, dim: int, comp):
        comp = [[list(row) for row in mat] for mat in comp]
        n = dim + 1
        if len(comp) != n or any(len(m) != n or any(len(r) != n for r in m) for m in comp):
            raise ValueError("components must be (d+1)^3")
        for c in range(n):
            for a in range(n):
                for b in range(a + 1, n):
                    if comp[c][a][b] != comp[c][b][a]:
                        raise ValueError("connection not symmetric in lower indices")
        self.dim = dim
        self.comp = comp

    @classmethod
    def zero(cls, dim: int) -> "Connection":
        z = Poly.zero(dim)
        n = dim + 1
        return cls(dim, [[[z] * n for _ in range(n)] for _ in range(n)])

    def __getitem__(self, cab):
        c, a, b = cab
        return self.comp[c][a][b]

    def __sub__(self, other: "Connection") -> "Connection":
        n = self.dim + 1
        return Connection(
            self.dim,
            [[[self.comp[c][a][b] - other.comp[c][a][b] for b in range(n)] for a in range(n)]
             for c in range(n)],
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for m in self.comp for r in m for v in r)

    def to_obj(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [
                {"index": [c, a, b], "value": self.comp[c][a][b].to_obj()}
                for c in range(self.dim + 1)
                for a in range(self.dim + 1)
                for b in range(a, self.dim + 1)
                if not self.comp[c][a][b].is_zero()
            ],
        }

    @classmethod
    def from_obj(cls, obj) -> "Connection":
        d = obj["dim"]
        out = cls.zero(d)
        comp = [[[Poly.zero(d) for _ in range(d + 1)] for _ in range(d + 1)] for _ in range(d + 1)]
        for e in obj["entries"]:
            c, a, b = e["index"]
            val = Poly.from_obj(d, e["value"])
            comp[c][a][b] = val
            comp[c][b][a] = val
        return cls(d, comp)


# ---------------------------------------------------------------------------
# Lie calculus
# ---------------------------------------------------------------------------


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X,Y]^a = X^b d_b Y^a - Y^b d_b X^a."""
    d = _check_same_dim(X.dim, Y.dim)
    return VectorField(d, [X.apply(Y[a]) - Y.apply(X[a]) for a in range(d + 1)])


def lie_derive_sym2up(X: VectorField, G: SymTensor2Up) -> SymTensor2Up:
    """L_X gamma^{ab} = X^c d_c gamma^{ab} - 2 d_c X^(a gamma^b)c."""
    d = _check_same_dim(X.dim, G.dim)
    n = d + 1
    out = [[Poly.zero(d) for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            val = X.apply(G[a, b])
            for c in range(n):
                val = val - X[a].differentiate(c) * G[b, c] - X[b].differentiate(c) * G[a, c]
            out[a][b] = val
            out[b][a] = val
    return SymTensor2Up(d, out)


def lie_derive_one_form(X: VectorField, w: OneForm) -> OneForm:
    """L_X w_a = X^b d_b w_a + w_b d_a X^b."""
    d = _check_same_dim(X.dim, w.dim)
    comps = []
    for a in range(d + 1):
        val = X.apply(w[a])
        for b in range(d + 1):
            val = val + w[b] * X[b].differentiate(a)
        comps.append(val)
    return OneForm(d, comps)


def lie_derive_structure(X: VectorField, gamma: SymTensor2Up, theta: OneForm):
    """Lie derivatives of a Galilei pair; theta must be closed, for which
    L_X theta_a = d_a(theta_b X^b)."""
    d = _check_same_dim(X.dim, gamma.dim, theta.dim)
    pairing = theta.pair(X)
    dtheta = OneForm(d, [pairing.differentiate(a) for a in range(d + 1)])
    return lie_derive_sym2up(X, gamma), dtheta


def lie_derive_two_form(X: VectorField, F: TwoForm) -> TwoForm:
    """L_X F_ab = X^c d_c F_ab + F_cb d_a X^c + F_ac d_b X^c."""
    d = _check_same_dim(X.dim, F.dim)
    entries = {}
    for a in range(d + 1):
        for b in range(a + 1, d + 1):
            val = X.apply(F[a, b])
            for c in range(d + 1):
                val = val + F[c, b] * X[c].differentiate(a) + F[a, c] * X[c].differentiate(b)
            entries[(a, b)] = val
    return TwoForm.from_upper(d, entries)


def lie_derive_connection(X: VectorField, G: Connection) -> Connection:
    """L_X Gamma^c_ab; reduces to d_a d_b X^c on a flat chart."""
    d = _check_same_dim(X.dim, G.dim)
    n = d + 1
    out = [[[Poly.zero(d) for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for c in range(n):
        for a in range(n):
            for b in range(a, n):
                val = X.apply(G[c, a, b]) + X[c].differentiate(a).differentiate(b)
                for k in range(n):
                    val = val - G[k, a, b] * X[c].differentiate(k)
                    val = val + G[c, k, b] * X[k].differentiate(a)
                    val = val + G[c, a, k] * X[k].differentiate(b)
                out[c][a][b] = val
                out[c][b][a] = val
    return Connection(d, out)


def exterior_derivative_one_form(w: OneForm) -> TwoForm:
    d = w.dim
    entries = {}
    for a in range(d + 1):
        for b in range(a + 1, d + 1):
            entries[(a, b)] = w[b].differentiate(a) - w[a].differentiate(b)
    return TwoForm.from_upper(d, entries)


def exterior_derivative(F: TwoForm) -> ThreeForm:
    """(dF)_abc = d_a F_bc + d_b F_ca + d_c F_ab."""
    d = F.dim
    comp = {}
    for a in range(d + 1):
        for b in range(a + 1, d + 1):
            for c in range(b + 1, d + 1):
                val = (
                    F[b, c].differentiate(a)
                    + F[c, a].differentiate(b)
                    + F[a, b].differentiate(c)
                )
                if not val.is_zero():
                    comp[(a, b, c)] = val
    return ThreeForm(d, comp)


def conformal_factors(X: VectorField, gamma: SymTensor2Up, theta: OneForm):
    """(f, g) with L_X gamma = f gamma and L_X theta = g theta, or None.

    Requires gamma to have at least one nonzero constant component (true
    for the flat-chart structures in scope).  When present, g is checked
    to depend on t alone.
    """
    d = _check_same_dim(X.dim, gamma.dim, theta.dim)
    n = d + 1
    lg, lt = lie_derive_structure(X, gamma, theta)

    ref = None
    for a in range(n):
        for b in range(n):
            if not gamma[a, b].is_zero() and gamma[a, b].is_constant():
                ref = (a, b)
                break
        if ref:
            break
    if ref is None:
        raise ValueError("gamma has no constant reference component")
    f = lg[ref] * (Fraction(1) / gamma[ref].constant_value())
    for a in range(n):
        for b in range(n):
            if lg[a, b] != f * gamma[a, b]:
                return None

    ref = None
    for a in range(n):
        if not theta[a].is_zero() and theta[a].is_constant():
            ref = a
            break
    if ref is None:
        raise ValueError("theta has no constant reference component")
    g = lt[ref] * (Fraction(1) / theta[ref].constant_value())
    for a in range(n):
        if lt[a] != g * theta[a]:
            return None
    if any(g.depends_on(a) for a in range(1, n)):
        return None
    return f, g


def lie_derive_gamma_theta_power(X: VectorField, gamma: SymTensor2Up, theta: OneForm, ncov: int):
    """Full Lie derivative of gamma (x) theta^(x ncov), computed from the
    mixed-tensor formula rather than the product rule.  Returns the map
    of nonzero components keyed by (a, b, c_1..c_ncov); vanishing of the
    whole map characterizes dynamical exponent z = 2 / ncov."""
    from itertools import product as iproduct

    d = _check_same_dim(X.dim, gamma.dim, theta.dim)
    n = d + 1

    def T(a, b, cs):
        val = gamma[a, b]
        for c in cs:
            val = val * theta[c]
        return val

    out = {}
    for a in range(n):
        for b in range(n):
            for cs in iproduct(range(n), repeat=ncov):
                val = Poly.zero(d)
                for k in range(n):
                    transport = gamma[a, b].differentiate(k)
                    for c in cs:
                        transport = transport * theta[c]
                    for i in range(ncov):
                        term = gamma[a, b] * theta[cs[i]].differentiate(k)
                        for j, c in enumerate(cs):
                            if j != i:
                                term = term * theta[c]
                        transport = transport + term
                    val = val + X[k] * transport
                    val = val - X[a].differentiate(k) * T(k, b, cs)
                    val = val - X[b].differentiate(k) * T(a, k, cs)
                    for i in range(ncov):
                        swapped = list(cs)
                        swapped[i] = k
                        val = val + X[k].differentiate(cs[i]) * T(a, b, tuple(swapped))
                if not val.is_zero():
                    out[(a, b) + cs] = val
    return out


# ---------------------------------------------------------------------------
# Canonical cotangent lift
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CotangentLift:
    """Lift X~ = X^a d_a - p_b (dX^b/dx^a) d/dp_a.

    ``momentum[a][b]`` is the coefficient of p_b in the d/dp_a component,
    i.e. -d_a X^b; momentum components are linear in p by construction.
    """

    base: VectorField
    momentum: tuple


def canonical_lift(X: VectorField) -> CotangentLift:
    d = X.dim
    mom = tuple(
        tuple(-X[b].differentiate(a) for b in range(d + 1)) for a in range(d + 1)
    )
    return CotangentLift(base=X, momentum=mom)


def lift_derivative_of_null_shell(X: VectorField, gamma: SymTensor2Up) -> SymTensor2Up:
    """Coefficient matrix R^{ab} of p_a p_b in X~(gamma^{ab} p_a p_b).

    The lift is tangent to the shell {gamma^{ab} p_a p_b = const} iff the
    result vanishes; independently, R equals L_X gamma.
    """
    d = _check_same_dim(X.dim, gamma.dim)
    lift = canonical_lift(X)
    n = d + 1
    out = [[Poly.zero(d) for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            val = X.apply(gamma[a, b])
            # p-part: dQ/dp_a = 2 gamma^{ab} p_b, contracted with dp_a/ds
            for k in range(n):
                val = val + lift.momentum[k][a] * gamma[k, b]
                val = val + lift.momentum[k][b] * gamma[a, k]
            out[a][b] = val
            out[b][a] = val
    return SymTensor2Up(d, out)

"""Linear solvers for the conformal symmetry algebras of the flat chart.

Each family is a homogeneous linear PDE system on polynomial vector
fields X = X^0 d_t + X^A d_A.  The multipliers are never solved for:
f is read off the trace of the spatial conformal Killing equation,
f = -(2/d) d_A X^A, and g = d_0 X^0, which keeps every system linear.
Solving means building the exact coefficient matrix of the residuals
over a degree-bounded ansatz (X^0 polynomial in t, X^A of spatial
degree <= 2) and computing its rational nullspace.

Solved spans are re-presented in a fixed, human-readable generator
order (rotations, accelerations, boosts, translations, expansions,
dilations, time translations, each graded by powers of t); the
presentation is accepted only after an exact span-equality check
against the raw nullspace, so dimensions always come from the solver.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import linalg
from .geometry import Observer, constant_observer, flat_galilei, rest_observer
from .lie import (
    TwoForm,
    VectorField,
    conformal_factors,
    exterior_derivative,
    lie_bracket,
)
from .poly import Poly, poly_divmod_t

INF = "inf"

_HALF = Fraction(1, 2)


def parse_z(text: str):
    """Dynamical exponent from 'p/q' or 'inf'; never a float."""
    if text == INF:
        return INF
    if not re.fullmatch(r"-?\d+(/\d+)?", text):
        raise ValueError(f"dynamical exponent must be 'p/q' or 'inf', got {text!r}")
    z = Fraction(text)
    if z <= 0:
        raise ValueError("dynamical exponent must be positive or 'inf'")
    return z


# ---------------------------------------------------------------------------
# multipliers and residual systems
# ---------------------------------------------------------------------------


def trace_factor(X: VectorField) -> Poly:
    """f with L_X gamma = f gamma on the flat chart: f = -(2/d) d_A X^A."""
    d = X.dim
    div = Poly.zero(d)
    for A in range(1, d + 1):
        div = div + X[A].differentiate(A)
    return div * Fraction(-2, d)


def time_factor(X: VectorField) -> Poly:
    """g with L_X theta = g theta on the flat chart: g = d_0 X^0."""
    return X[0].differentiate(0)


def res_conformal(X: VectorField) -> list[Poly]:
    """Spatial conformal Killing system plus x-independence of X^0."""
    d = X.dim
    f = trace_factor(X)
    out = []
    for A in range(1, d + 1):
        for B in range(A, d + 1):
            val = X[A].differentiate(B) + X[B].differentiate(A)
            if A == B:
                val = val + f
            out.append(val)
    for A in range(1, d + 1):
        out.append(X[0].differentiate(A))
    return out


def res_exponent(X: VectorField, z) -> list[Poly]:
    """f + (2/z) g = 0; the z = inf family imposes f = 0 instead."""
    f = trace_factor(X)
    if z == INF:
        return [f]
    return [f + time_factor(X) * (Fraction(2) / z)]


def res_spatial_linear(X: VectorField) -> list[Poly]:
    """d_A d_B X^c = 0: no spatial quadratics survive."""
    d = X.dim
    out = []
    for c in range(d + 1):
        for A in range(1, d + 1):
            for B in range(A, d + 1):
                out.append(X[c].differentiate(A).differentiate(B))
    return out


def res_timelike_projective(X: VectorField) -> list[Poly]:
    """Flat system for conformal fields permuting timelike geodesics."""
    d = X.dim
    f = trace_factor(X)
    g = time_factor(X)
    gp = g.differentiate(0)
    out = res_conformal(X)
    for A in range(1, d + 1):
        out.append(X[A].differentiate(0).differentiate(0))
        for B in range(1, d + 1):
            val = X[A].differentiate(0).differentiate(B)
            if A == B:
                val = val - gp * _HALF
            out.append(val)
    out.extend(res_spatial_linear(X))
    out.append(f.differentiate(0) + gp)
    for A in range(1, d + 1):
        out.append(f.differentiate(A))
    return out


def res_isometry(X: VectorField) -> list[Poly]:
    """Full automorphisms: f = 0, g = 0 and flat L_X Gamma = 0."""
    d = X.dim
    out = res_conformal(X)
    out.append(trace_factor(X))
    out.append(time_factor(X))
    for c in range(d + 1):
        for a in range(d + 1):
            for b in range(a, d + 1):
                out.append(X[c].differentiate(a).differentiate(b))
    return out


def res_lightlike_projective(X: VectorField) -> list[Poly]:
    """Flat system for conformal fields permuting lightlike geodesics:
    conformal pair + spatial linearity + f a function of t alone."""
    d = X.dim
    f = trace_factor(X)
    out = res_conformal(X)
    out.extend(res_spatial_linear(X))
    for A in range(1, d + 1):
        out.append(f.differentiate(A))
    return out


# ---------------------------------------------------------------------------
# ansatz and nullspace machinery
# ---------------------------------------------------------------------------


def _spatial_monomials(d: int, max_degree: int) -> list[tuple]:
    monos = [tuple([0] * d)]
    if max_degree >= 1:
        for A in range(d):
            e = [0] * d
            e[A] = 1
            monos.append(tuple(e))
    if max_degree >= 2:
        for A in range(d):
            for B in range(A, d):
                e = [0] * d
                e[A] += 1
                e[B] += 1
                monos.append(tuple(e))
    return monos


def ansatz_fields(d: int, nt_time: int, nt_space: int, spatial_degree: int = 2) -> list[VectorField]:
    """Unit coefficient fields spanning the search space."""
    fields = []
    for j in range(nt_time + 1):
        exp = tuple([j] + [0] * d)
        comps = [Poly.zero(d)] * (d + 1)
        comps[0] = Poly.monomial(d, exp)
        fields.append(VectorField(d, comps))
    monos = _spatial_monomials(d, spatial_degree)
    for A in range(1, d + 1):
        for j in range(nt_space + 1):
            for mono in monos:
                exp = tuple([j] + list(mono))
                comps = [Poly.zero(d)] * (d + 1)
                comps[A] = Poly.monomial(d, exp)
                fields.append(VectorField(d, comps))
    return fields


def _combine(fields: Sequence[VectorField], coeffs: Sequence[Fraction]) -> VectorField:
    d = fields[0].dim
    out = VectorField.zero(d)
    for X, c in zip(fields, coeffs):
        if c:
            out = out + X.scale(c)
    return out


def solve_system(
    d: int,
    residual_op: Callable[[VectorField], list[Poly]],
    nt_time: int,
    nt_space: int,
    spatial_degree: int = 2,
) -> list[VectorField]:
    """Nullspace of a linear residual operator over the ansatz."""
    ansatz = ansatz_fields(d, nt_time, nt_space, spatial_degree)
    columns = [residual_op(X) for X in ansatz]
    row_keys = sorted(
        {(i, exp) for col in columns for i, p in enumerate(col) for exp in p.terms}
    )
    zero = Fraction(0)
    matrix = [
        [col[i].terms.get(exp, zero) for col in columns] for (i, exp) in row_keys
    ]
    return [_combine(ansatz, vec) for vec in linalg.nullspace(matrix, len(ansatz))]


def restrict_span(
    fields: Sequence[VectorField], residual_op: Callable[[VectorField], list[Poly]]
) -> list[VectorField]:
    """Sub-span of given fields killed by an extra linear residual."""
    columns = [residual_op(X) for X in fields]
    row_keys = sorted(
        {(i, exp) for col in columns for i, p in enumerate(col) for exp in p.terms}
    )
    zero = Fraction(0)
    matrix = [
        [col[i].terms.get(exp, zero) for col in columns] for (i, exp) in row_keys
    ]
    return [_combine(fields, vec) for vec in linalg.nullspace(matrix, len(fields))]


# -- span algebra on vector fields -----------------------------------------


def _field_keys(fields: Iterable[VectorField]) -> list[tuple]:
    keys = set()
    for X in fields:
        for a, comp in enumerate(X.components):
            for exp in comp.terms:
                keys.add((a, exp))
    return sorted(keys)


def _vectorize(X: VectorField, keys: Sequence[tuple]) -> list[Fraction]:
    zero = Fraction(0)
    return [X.components[a].terms.get(exp, zero) for (a, exp) in keys]


def span_dim(fields: Sequence[VectorField]) -> int:
    if not fields:
        return 0
    keys = _field_keys(fields)
    return linalg.span_dim([_vectorize(X, keys) for X in fields])


def span_equal(a: Sequence[VectorField], b: Sequence[VectorField]) -> bool:
    keys = _field_keys(list(a) + list(b))
    va = [_vectorize(X, keys) for X in a]
    vb = [_vectorize(X, keys) for X in b]
    return linalg.span_equal(va, vb)


def span_contains(basis: Sequence[VectorField], fields: Sequence[VectorField]) -> bool:
    keys = _field_keys(list(basis) + list(fields))
    vb = [_vectorize(X, keys) for X in basis]
    vf = [_vectorize(X, keys) for X in fields]
    return linalg.span_contains(vb, vf)


def expand_in_basis(basis: Sequence[VectorField], X: VectorField):
    """Rational coefficients of X in the basis, or None if outside the span."""
    keys = _field_keys(list(basis) + [X])
    cols = [_vectorize(b, keys) for b in basis]
    return linalg.in_span(cols, _vectorize(X, keys))


# ---------------------------------------------------------------------------
# algebra containers
# ---------------------------------------------------------------------------


@dataclass
class AlgebraBasis:
    family: str
    d: int
    generators: list[VectorField]
    labels: list[str]
    factors: list[tuple[Poly, Poly]]
    z: object = None  # Fraction, "inf" or None

    @property
    def dim(self) -> int:
        return len(self.generators)

    def to_report(self, structure: "StructureConstants | None" = None) -> dict:
        z = self.z
        if isinstance(z, Fraction):
            z = str(z)
        report = {
            "family": self.family,
            "d": self.d,
            "z": z,
            "dim": self.dim,
            "labels": list(self.labels),
            "generators": [X.to_obj() for X in self.generators],
        }
        if structure is not None:
            report["structure_constants"] = structure.to_entries()
        return report


class NotClosedError(Exception):
    def __init__(self, i: int, j: int, residual: VectorField):
        super().__init__(f"bracket of generators {i}, {j} leaves the span")
        self.pair = (i, j)
        self.residual = residual


@dataclass
class StructureConstants:
    n: int
    c: list  # dense [i][j][k] Fractions

    def antisymmetry_ok(self) -> bool:
        return all(
            self.c[i][j][k] == -self.c[j][i][k]
            for i in range(self.n)
            for j in range(self.n)
            for k in range(self.n)
        )

    def jacobi_ok(self) -> bool:
        n = self.n
        rows = {}
        for i in range(n):
            for j in range(n):
                nz = [(m, v) for m, v in enumerate(self.c[i][j]) if v]
                if nz:
                    rows[(i, j)] = nz
        zero = Fraction(0)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    acc = [zero] * n
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, v in rows.get((a, b), ()):
                            for l, w in rows.get((m, c), ()):
                                acc[l] += v * w
                    if any(acc):
                        return False
        return True

    def to_entries(self) -> list:
        out = []
        for i in range(self.n):
            for j in range(self.n):
                for k in range(self.n):
                    if self.c[i][j][k]:
                        out.append([i, j, k, str(self.c[i][j][k])])
        return out


@dataclass
class ClosureReport:
    closed: bool
    witness: tuple | None = None  # (i, j, residual field)


def _span_residual(cols, target):
    """target minus its orthogonal projection onto the column span
    (rational Gram solve); zero exactly iff target is in the span."""
    if not cols:
        return list(target)
    n = len(cols)
    gram = [[sum(a * b for a, b in zip(cols[i], cols[j])) for j in range(n)] for i in range(n)]
    rhs = [sum(a * b for a, b in zip(cols[i], target)) for i in range(n)]
    sol = linalg.solve_exact(gram, rhs)
    if sol is None:  # rank-deficient Gram cannot happen for a basis
        raise AssertionError("span residual: singular Gram matrix")
    proj = [sum(cols[i][r] * sol[i] for i in range(n)) for r in range(len(target))]
    return [t - p for t, p in zip(target, proj)]


def closure_check(fields: Sequence[VectorField]) -> ClosureReport:
    """Exact verification that all pairwise brackets stay in the span."""
    fields = list(fields)
    if not fields:
        return ClosureReport(closed=True)
    brackets = {}
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            brackets[(i, j)] = lie_bracket(fields[i], fields[j])
    keys = _field_keys(fields + list(brackets.values()))
    cols = [_vectorize(X, keys) for X in fields]
    d = fields[0].dim
    for (i, j), br in brackets.items():
        target = _vectorize(br, keys)
        if linalg.in_span(cols, target) is None:
            resid = _span_residual(cols, target)
            comps = [dict() for _ in range(d + 1)]
            for (a, exp), v in zip(keys, resid):
                if v:
                    comps[a][exp] = v
            residual = VectorField(d, [Poly(d, c) for c in comps])
            return ClosureReport(closed=False, witness=(i, j, residual))
    return ClosureReport(closed=True)


def structure_constants(basis) -> StructureConstants:
    """Exact rational bracket tensor of a closed basis."""
    fields = basis.generators if isinstance(basis, AlgebraBasis) else list(basis)
    n = len(fields)
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            brackets[(i, j)] = lie_bracket(fields[i], fields[j])
    keys = _field_keys(fields + list(brackets.values()))
    cols = [_vectorize(X, keys) for X in fields]
    zero = Fraction(0)
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    d = fields[0].dim
    for (i, j), br in brackets.items():
        coeffs = linalg.in_span(cols, _vectorize(br, keys))
        if coeffs is None:
            resid = _span_residual(cols, _vectorize(br, keys))
            comps = [dict() for _ in range(d + 1)]
            for (a, exp), v in zip(keys, resid):
                if v:
                    comps[a][exp] = v
            raise NotClosedError(i, j, VectorField(d, [Poly(d, t) for t in comps]))
        for k, v in enumerate(coeffs):
            c[i][j][k] = v
            c[j][i][k] = -v
    return StructureConstants(n=n, c=c)


# ---------------------------------------------------------------------------
# generator builders (presentation layer)
# ---------------------------------------------------------------------------


def _unit_field(d: int, component: int, exp: Sequence[int], coef=1) -> VectorField:
    comps = [Poly.zero(d)] * (d + 1)
    comps[component] = Poly.monomial(d, tuple(exp), coef)
    return VectorField(d, comps)


def time_translation(d: int, k: int = 0) -> VectorField:
    return _unit_field(d, 0, [k] + [0] * d)


def translation(d: int, A: int, k: int = 0) -> VectorField:
    return _unit_field(d, A, [k] + [0] * d)


def rotation(d: int, A: int, B: int, k: int = 0) -> VectorField:
    """t^k (x^A d_B - x^B d_A)."""
    ea = [k] + [0] * d
    ea[A] = 1
    eb = [k] + [0] * d
    eb[B] = 1
    comps = [Poly.zero(d)] * (d + 1)
    comps[B] = Poly.monomial(d, tuple(ea))
    comps[A] = Poly.monomial(d, tuple(eb), -1)
    return VectorField(d, comps)


def space_dilation(d: int, k: int = 0) -> VectorField:
    comps = [Poly.zero(d)]
    for A in range(1, d + 1):
        e = [k] + [0] * d
        e[A] = 1
        comps.append(Poly.monomial(d, tuple(e)))
    return VectorField(d, comps)


def quadratic_expansion(d: int, A: int, k: int = 0) -> VectorField:
    """t^k (|x|^2 d_A - 2 x^A x.d): the spatial-degree-two conformal fields."""
    comps = [Poly.zero(d)]
    for C in range(1, d + 1):
        p = Poly.zero(d)
        if C == A:
            for B in range(1, d + 1):
                e = [k] + [0] * d
                e[B] += 2
                p = p + Poly.monomial(d, tuple(e))
        e = [k] + [0] * d
        e[C] += 1
        e[A] += 1
        p = p - 2 * Poly.monomial(d, tuple(e))
        comps.append(p)
    return VectorField(d, comps)


def time_dilation(d: int) -> VectorField:
    return time_translation(d, 1)


def sch_dilation(d: int) -> VectorField:
    """2t d_t + x.d: dilates time twice as much as space."""
    return time_translation(d, 1).scale(2) + space_dilation(d)


def sch_expansion(d: int) -> VectorField:
    """t^2 d_t + t x.d."""
    return time_translation(d, 2) + space_dilation(d, 1)


def cga_dilation(d: int) -> VectorField:
    """t d_t + x.d: space and time at the same rate."""
    return time_translation(d, 1) + space_dilation(d)


def cga_expansion(d: int, ether_velocity=None) -> VectorField:
    """1/2 t^2 d_t + t x.d, with the acceleration tail -1/2 t^2 u.d of a
    constant ether when one is supplied."""
    X = time_translation(d, 2).scale(_HALF) + space_dilation(d, 1)
    if ether_velocity is not None:
        for A in range(1, d + 1):
            u = Fraction(ether_velocity[A - 1])
            if u:
                X = X + translation(d, A, 2).scale(-_HALF * u)
    return X


def acceleration(d: int, A: int) -> VectorField:
    """-1/2 t^2 d_A."""
    return translation(d, A, 2).scale(-_HALF)


def _pairs(d: int) -> list[tuple[int, int]]:
    return [(A, B) for A in range(1, d + 1) for B in range(A + 1, d + 1)]


def _factors_for(fields: Sequence[VectorField], d: int) -> list[tuple[Poly, Poly]]:
    base = flat_galilei(d)
    out = []
    for X in fields:
        fg = conformal_factors(X, base.gamma, base.theta)
        if fg is None:
            raise AssertionError("emitted generator is not a conformal field")
        out.append(fg)
    return out


def _presented(
    family: str,
    d: int,
    raw: list[VectorField],
    named: list[tuple[str, VectorField]],
    z=None,
) -> AlgebraBasis:
    fields = [X for _, X in named]
    if len(fields) != len(raw) or not span_equal(raw, fields):
        raise AssertionError(f"{family}: presentation does not match the solved span")
    return AlgebraBasis(
        family=family,
        d=d,
        generators=fields,
        labels=[name for name, _ in named],
        factors=_factors_for(fields, d),
        z=z,
    )


# ---------------------------------------------------------------------------
# family solvers
# ---------------------------------------------------------------------------


def solve_cgal(d: int, nt: int) -> AlgebraBasis:
    """Conformal fields of the flat Galilei pair, time-degree bound nt."""
    if d < 2:
        raise ValueError("need d >= 2")
    if nt < 0:
        raise ValueError("need nt >= 0")
    raw = solve_system(d, res_conformal, nt_time=nt, nt_space=nt)
    named: list[tuple[str, VectorField]] = []
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        for A, B in _pairs(d):
            named.append((f"omega[{A},{B}]{suffix}", rotation(d, A, B, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        for A in range(1, d + 1):
            named.append((f"eta[{A}]{suffix}", translation(d, A, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        for A in range(1, d + 1):
            named.append((f"kappa[{A}]{suffix}", quadratic_expansion(d, A, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        named.append((f"chi{suffix}", space_dilation(d, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        named.append((f"xi{suffix}", time_translation(d, k)))
    return _presented("cgal", d, raw, named)


def solve_cgal_z(d: int, z, nt: int) -> AlgebraBasis:
    """Conformal fields with fixed dynamical exponent z (rational or 'inf')."""
    if d < 2:
        raise ValueError("need d >= 2")
    if z != INF and (not isinstance(z, Fraction) or z <= 0):
        z = Fraction(z)
        if z <= 0:
            raise ValueError("z must be positive or 'inf'")

    def op(X):
        return res_conformal(X) + res_exponent(X, z)

    raw = solve_system(d, op, nt_time=nt, nt_space=nt)
    named: list[tuple[str, VectorField]] = []
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        for A, B in _pairs(d):
            named.append((f"omega[{A},{B}]{suffix}", rotation(d, A, B, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        for A in range(1, d + 1):
            named.append((f"eta[{A}]{suffix}", translation(d, A, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        X = time_translation(d, k)
        if z != INF and k >= 1:
            X = X + space_dilation(d, k - 1).scale(Fraction(k) / z)
        named.append((f"xi{suffix}", X))
    return _presented("cgal_z", d, raw, named, z=z)


def solve_gal(d: int) -> AlgebraBasis:
    """Galilei automorphisms of the flat structure."""
    raw = solve_system(d, res_isometry, nt_time=2, nt_space=2)
    named = [(f"omega[{A},{B}]", rotation(d, A, B)) for A, B in _pairs(d)]
    named += [(f"beta[{A}]", translation(d, A, 1)) for A in range(1, d + 1)]
    named += [(f"gamma[{A}]", translation(d, A, 0)) for A in range(1, d + 1)]
    named.append(("epsilon", time_translation(d)))
    return _presented("gal", d, raw, named)


def solve_sch_expanded(d: int, nt: int = 3) -> AlgebraBasis:
    """Conformal fields permuting timelike geodesics (independent time and
    space dilations).  The degree bound only needs to be >= 2; the system
    itself cuts everything above quadratic."""
    if d < 2:
        raise ValueError("need d >= 2")
    raw = solve_system(d, res_timelike_projective, nt_time=max(nt, 2), nt_space=max(nt, 2))
    named = [(f"omega[{A},{B}]", rotation(d, A, B)) for A, B in _pairs(d)]
    named += [(f"beta[{A}]", translation(d, A, 1)) for A in range(1, d + 1)]
    named += [(f"gamma[{A}]", translation(d, A, 0)) for A in range(1, d + 1)]
    named.append(("kappa", sch_expansion(d)))
    named.append(("mu", time_dilation(d)))
    named.append(("lambda", space_dilation(d)))
    named.append(("epsilon", time_translation(d)))
    return _presented("sch_expanded", d, raw, named)


def restrict_sch_z(basis: AlgebraBasis, z) -> AlgebraBasis:
    """Slice of the expanded algebra with fixed dynamical exponent."""
    if basis.family != "sch_expanded":
        raise ValueError("restriction expects the expanded timelike algebra")
    d = basis.d
    restricted = restrict_span(basis.generators, lambda X: res_exponent(X, z))
    named = [(f"omega[{A},{B}]", rotation(d, A, B)) for A, B in _pairs(d)]
    named += [(f"beta[{A}]", translation(d, A, 1)) for A in range(1, d + 1)]
    named += [(f"gamma[{A}]", translation(d, A, 0)) for A in range(1, d + 1)]
    if z == Fraction(2):
        named.append(("kappa", sch_expansion(d)))
        named.append(("lambda", sch_dilation(d)))
        family = "sch"
    elif z == INF:
        named.append(("mu", time_dilation(d)))
        family = "sch_inf"
    else:
        z = Fraction(z)
        named.append(("lambda", time_dilation(d).scale(z) + space_dilation(d)))
        family = "sch_z"
    named.append(("epsilon", time_translation(d)))
    return _presented(family, d, restricted, named, z=z)


def solve_sch(d: int) -> AlgebraBasis:
    return restrict_sch_z(solve_sch_expanded(d), Fraction(2))


# -- lightlike families -----------------------------------------------------


def cnc_system_residuals(
    X: VectorField,
    f: Poly,
    g: Poly,
    obs: Observer,
    F: TwoForm,
) -> list[Poly]:
    """Residuals of the full lightlike-projective system for a given
    gauge pair (observer, Coriolis form)."""
    d = X.dim
    fp = f.differentiate(0)
    fgp = fp + g.differentiate(0)
    fg = f + g
    out = []
    for A in range(1, d + 1):
        for B in range(A, d + 1):
            val = X[A].differentiate(B) + X[B].differentiate(A)
            if A == B:
                val = val + f
            out.append(val)
    for A in range(1, d + 1):
        out.append(X[0].differentiate(A))
    out.append(X[0].differentiate(0) - g)
    for A in range(1, d + 1):
        out.append(
            X[A].differentiate(0).differentiate(0) - fgp * obs.U[A] - fg * F[0, A]
        )
        for B in range(1, d + 1):
            val = X[A].differentiate(0).differentiate(B) + fg * F[A, B] * _HALF
            if A == B:
                val = val + fp * _HALF
            out.append(val)
    out.extend(res_spatial_linear(X))
    return out


@dataclass
class GaugeWitness:
    observer: Observer
    coriolis: TwoForm


def lightlike_gauge_witness(X: VectorField) -> GaugeWitness | None:
    """Exact gauge pair (U, F) solving the full lightlike system for X,
    searched over observers U = d_t + u(t).d with F the flat Coriolis
    form of U (so F is closed by construction).  Returns None when no
    such polynomial pair exists; time-dependent rotation parts never
    admit one, since the mixed equation forces (f+g) F_AB = -2 omega'_AB
    while f + g = 0 kills the right-hand side."""
    d = X.dim
    base = flat_galilei(d)
    fg_pair = conformal_factors(X, base.gamma, base.theta)
    if fg_pair is None:
        return None
    f, g = fg_pair
    # time-dependent rotation part is an exact obstruction
    for A in range(1, d + 1):
        for B in range(A + 1, d + 1):
            omega_p = (
                X[A].differentiate(B) - X[B].differentiate(A)
            ).differentiate(0) * _HALF
            if not omega_p.is_zero():
                return None
    if f.differentiate(0).differentiate(0) != Poly.zero(d):
        # would need a spatially varying observer: outside the class
        return None
    fg = f + g
    u_comps = []
    for A in range(1, d + 1):
        eta_p = Poly(
            d,
            {
                exp: c
                for exp, c in X[A].terms.items()
                if not any(exp[1:])
            },
        ).differentiate(0)
        if fg.is_zero():
            if not eta_p.differentiate(0).is_zero():
                return None
            u_comps.append(Poly.zero(d))
            continue
        # eta' = fg * u + const must hold exactly
        quotient, rem = poly_divmod_t(eta_p, fg)
        if not rem.is_constant():
            return None
        u_comps.append(quotient)
    U = Observer(VectorField(d, [Poly.const(d, 1)] + u_comps))
    F = TwoForm.from_upper(
        d, {(0, A): u_comps[A - 1].differentiate(0) for A in range(1, d + 1)}
    )
    if not exterior_derivative(F).is_zero():
        return None
    if any(not r.is_zero() for r in cnc_system_residuals(X, f, g, U, F)):
        return None
    return GaugeWitness(observer=U, coriolis=F)


def solve_cnc_flat(d: int, nt: int):
    """Conformal fields permuting lightlike geodesics, plus a per-generator
    gauge witness where one exists in the polynomial class."""
    if d < 2:
        raise ValueError("need d >= 2")
    raw = solve_system(d, res_lightlike_projective, nt_time=nt, nt_space=nt)
    named: list[tuple[str, VectorField]] = []
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        for A, B in _pairs(d):
            named.append((f"omega[{A},{B}]{suffix}", rotation(d, A, B, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        named.append((f"dil{suffix}", space_dilation(d, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        for A in range(1, d + 1):
            named.append((f"eta[{A}]{suffix}", translation(d, A, k)))
    for k in range(nt + 1):
        suffix = f"*t^{k}" if k else ""
        named.append((f"xi{suffix}", time_translation(d, k)))
    basis = _presented("cnc", d, raw, named)
    witnesses = [lightlike_gauge_witness(X) for X in basis.generators]
    return basis, witnesses


def restrict_cnc_z(basis: AlgebraBasis, z, nt: int) -> list[VectorField]:
    """z-slice of the lightlike family (span only; compared against the
    conformal solver with the same degree bound)."""
    if basis.family != "cnc":
        raise ValueError("restriction expects the lightlike family")
    return restrict_span(basis.generators, lambda X: res_exponent(X, z))


# -- NC-Milne ---------------------------------------------------------------


def cmil_system_residuals(X: VectorField, f: Poly, g: Poly, ether: Observer) -> list[Poly]:
    """Residuals of the full NC-Milne system for a constant ether."""
    d = X.dim
    fp = f.differentiate(0)
    fgp = fp + g.differentiate(0)
    out = []
    for A in range(1, d + 1):
        for B in range(A, d + 1):
            val = X[A].differentiate(B) + X[B].differentiate(A)
            if A == B:
                val = val + f
            out.append(val)
    for A in range(1, d + 1):
        out.append(X[0].differentiate(A))
    out.append(X[0].differentiate(0) - g)
    for A in range(1, d + 1):
        out.append(X[A].differentiate(0).differentiate(0) - fgp * ether.U[A])
        for B in range(1, d + 1):
            val = X[A].differentiate(0).differentiate(B)
            if A == B:
                val = val + fp * _HALF
            out.append(val)
    out.extend(res_spatial_linear(X))
    return out


def res_milne_relaxed(X: VectorField) -> list[Poly]:
    """Ether-independent subsystem: the lightlike system plus constant
    rotations, linear f, and no spatial part in d_0 d_0 X^A."""
    d = X.dim
    f = trace_factor(X)
    fp = f.differentiate(0)
    out = res_lightlike_projective(X)
    for A in range(1, d + 1):
        for B in range(1, d + 1):
            val = X[A].differentiate(0).differentiate(B)
            if A == B:
                val = val + fp * _HALF
            out.append(val)
    out.append(fp.differentiate(0))
    return out


def cmil_raw_space(d: int, nt: int = 2) -> list[VectorField]:
    """Solutions of the ether-independent subsystem (the second time
    derivative of the translation part is left free)."""
    return solve_system(d, res_milne_relaxed, nt_time=nt, nt_space=nt)


def _res_c1_slice(X: VectorField) -> list[Poly]:
    # f' + 2 g' = 0 carves the acceleration branch out of the raw space
    f = trace_factor(X)
    g = time_factor(X)
    return [f.differentiate(0) + 2 * g.differentiate(0)]


def _res_c2_slice(X: VectorField) -> list[Poly]:
    # f' + g' = 0 together with no forced accelerations
    d = X.dim
    f = trace_factor(X)
    g = time_factor(X)
    out = [f.differentiate(0) + g.differentiate(0)]
    for A in range(1, d + 1):
        out.append(X[A].differentiate(0).differentiate(0))
    return out


def solve_cmil_flat(d: int, ether: Observer | None = None):
    """The two closed branches of the flat NC-Milne system.

    The raw linear space solves the ether-independent subsystem and is
    strictly larger than the union of the branches; the closed-branch
    condition ties the quadratic time reparametrization to the space
    dilation rate.  Acceleration generators solve the pointwise system
    only jointly with the expansion generator (their second time
    derivative selects the ether), which is checked exactly elsewhere.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    if ether is None:
        ether = rest_observer(d)
    if not ether.is_constant():
        raise ValueError("ether must have constant components")
    raw = cmil_raw_space(d)
    u = [ether.U[A].constant_value() for A in range(1, d + 1)]

    c1_fields = restrict_span(raw, _res_c1_slice)
    named1 = [(f"omega[{A},{B}]", rotation(d, A, B)) for A, B in _pairs(d)]
    named1 += [(f"alpha[{A}]", acceleration(d, A)) for A in range(1, d + 1)]
    named1 += [(f"beta[{A}]", translation(d, A, 1)) for A in range(1, d + 1)]
    named1 += [(f"gamma[{A}]", translation(d, A, 0)) for A in range(1, d + 1)]
    named1.append(("kappa", cga_expansion(d, u)))
    named1.append(("lambda", space_dilation(d)))
    named1.append(("mu", time_dilation(d)))
    named1.append(("epsilon", time_translation(d)))
    c1 = _presented("cmil_c1", d, c1_fields, named1)

    c2_fields = restrict_span(raw, _res_c2_slice)
    sch = solve_sch_expanded(d)
    if not span_equal(c2_fields, sch.generators):
        raise AssertionError("second branch must coincide with the timelike algebra")
    c2 = AlgebraBasis(
        family="cmil_c2",
        d=d,
        generators=sch.generators,
        labels=sch.labels,
        factors=sch.factors,
    )
    return c1, c2


def cmil_generator_ether(X: VectorField) -> Observer | None:
    """Constant ether making the full NC-Milne system hold for X alone,
    or None (accelerations need the expansion generator alongside)."""
    d = X.dim
    base = flat_galilei(d)
    pair = conformal_factors(X, base.gamma, base.theta)
    if pair is None:
        return None
    f, g = pair
    fgp = (f + g).differentiate(0)
    second = [X[A].differentiate(0).differentiate(0) for A in range(1, d + 1)]
    if fgp.is_zero():
        if any(not s.is_zero() for s in second):
            return None
        return rest_observer(d)
    if not fgp.is_constant():
        return None
    c = fgp.constant_value()
    vel = []
    for s in second:
        if not s.is_constant():
            return None
        vel.append(s.constant_value() / c)
    obs = constant_observer(d, vel)
    if any(not r.is_zero() for r in cmil_system_residuals(X, f, g, obs)):
        return None
    return obs


def restrict_cmil_z(basis: AlgebraBasis, z) -> AlgebraBasis:
    """z-slice of the acceleration branch; z = 1 is the conformal
    Galilean algebra with its accelerations."""
    if basis.family != "cmil_c1":
        raise ValueError("restriction expects the acceleration branch")
    d = basis.d
    restricted = restrict_span(basis.generators, lambda X: res_exponent(X, z))
    named = [(f"omega[{A},{B}]", rotation(d, A, B)) for A, B in _pairs(d)]
    named += [(f"alpha[{A}]", acceleration(d, A)) for A in range(1, d + 1)]
    named += [(f"beta[{A}]", translation(d, A, 1)) for A in range(1, d + 1)]
    named += [(f"gamma[{A}]", translation(d, A, 0)) for A in range(1, d + 1)]
    if z == Fraction(1):
        named.append(("kappa", cga_expansion(d)))
        named.append(("lambda", cga_dilation(d)))
        family = "cga"
    elif z == INF:
        named.append(("mu", time_dilation(d)))
        family = "cmil_inf"
    else:
        z = Fraction(z)
        named.append(("lambda", time_dilation(d).scale(z) + space_dilation(d)))
        family = "cmil_z"
    named.append(("epsilon", time_translation(d)))
    return _presented(family, d, restricted, named, z=z)


def solve_cga(d: int) -> AlgebraBasis:
    c1, _ = solve_cmil_flat(d)
    return restrict_cmil_z(c1, Fraction(1))


def bracket_closure_grow(seed: Sequence[VectorField], ambient: Sequence[VectorField]):
    """Grow a closed span inside an ambient span by single directions;
    the fixpoint of a maximal branch is the branch itself."""
    current = list(seed)
    changed = True
    while changed:
        changed = False
        for v in ambient:
            if span_contains(current, [v]):
                continue
            candidate = current + [v]
            if closure_check(candidate).closed:
                current = candidate
                changed = True
    return current


# -- polynomial families with fixed exponent (finite-dimensional) ----------


def _res_const_rotation(X: VectorField) -> list[Poly]:
    d = X.dim
    out = []
    for A in range(1, d + 1):
        for B in range(A + 1, d + 1):
            out.append((X[A].differentiate(B) - X[B].differentiate(A)).differentiate(0))
    return out


def _res_quadratic_time(X: VectorField) -> list[Poly]:
    return [X[0].differentiate(0).differentiate(0).differentiate(0)]


def alt_candidate(d: int, N: int, z) -> list[tuple[str, VectorField]]:
    """Candidate generator list: quadratic time reparametrizations acting
    with dilation weight 1/z, constant rotations, translations of time
    degree <= N.  Closed under brackets iff z = 2/N."""
    zinv = Fraction(1) / Fraction(z)
    named = [(f"omega[{A},{B}]", rotation(d, A, B)) for A, B in _pairs(d)]
    for k in range(N + 1):
        suffix = f"*t^{k}" if k else ""
        for A in range(1, d + 1):
            named.append((f"eta[{A}]{suffix}", translation(d, A, k)))
    named.append(("kappa", time_translation(d, 2).scale(_HALF) + space_dilation(d, 1).scale(zinv)))
    named.append(("mu", time_dilation(d) + space_dilation(d).scale(zinv)))
    named.append(("epsilon", time_translation(d)))
    return named


def alt_subalgebra(d: int, N: int) -> AlgebraBasis:
    """Finite-dimensional polynomial family at dynamical exponent 2/N."""
    if N < 1:
        raise ValueError("need N >= 1")
    if d < 2:
        raise ValueError("need d >= 2")
    z = Fraction(2, N)

    def op(X):
        return (
            res_conformal(X)
            + res_exponent(X, z)
            + _res_const_rotation(X)
            + _res_quadratic_time(X)
        )

    raw = solve_system(d, op, nt_time=max(N, 2), nt_space=max(N, 1))
    named = alt_candidate(d, N, z)
    basis = _presented("alt", d, raw, named, z=z)
    report = closure_check(basis.generators)
    if not report.closed:
        raise AssertionError("polynomial family must close at z = 2/N")
    return basis


def alt_obstruction_coefficient(d: int, N: int, z) -> Fraction:
    """Top-degree coefficient obstructing closure: the bracket of the
    expansion generator with a degree-N translation has a t^(N+1)
    translation part with coefficient (N/2 - 1/z)."""
    zinv = Fraction(1) / Fraction(z)
    K = time_translation(d, 2).scale(_HALF) + space_dilation(d, 1).scale(zinv)
    eta = translation(d, 1, N)
    br = lie_bracket(K, eta)
    exp = tuple([N + 1] + [0] * d)
    return br[1].terms.get(exp, Fraction(0))


def alt_closure_scan(d: int, N: int, z_values) -> dict:
    """Exact closure verdict of the candidate family across exponents."""
    out = {}
    for z in z_values:
        fields = [X for _, X in alt_candidate(d, N, z)]
        out[str(z)] = closure_check(fields).closed
    return out

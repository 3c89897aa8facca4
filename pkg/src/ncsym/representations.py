"""Finite-dimensional matrix forms of the two projective families.

The parameter-to-matrix maps below are verified (not assumed) to be
bracket-consistent: for every basis pair the matrix commutator must
equal the matrix of the vector-field bracket up to ONE global sign,
the same across all pairs.  The maps come out as anti-homomorphisms
(sign -1) for the bracket conventions used by the vector-field layer;
the verifier records whichever sign it finds and reports any pair
violating consistency.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .lie import lie_bracket
from .solver import (
    acceleration,
    cga_dilation,
    cga_expansion,
    expand_in_basis,
    rotation,
    sch_dilation,
    sch_expansion,
    time_translation,
    translation,
    _pairs,
)

_HALF = Fraction(1, 2)


def _zeros(n: int) -> list:
    return [[Fraction(0)] * n for _ in range(n)]


def _check_omega(d: int, omega) -> list:
    om = [[Fraction(v) for v in row] for row in omega]
    if len(om) != d or any(len(r) != d for r in om):
        raise ValueError(f"rotation block must be {d}x{d}")
    for A in range(d):
        for B in range(d):
            if om[A][B] != -om[B][A]:
                raise ValueError("rotation block must be antisymmetric")
    return om


def _check_vector(d: int, v, name: str) -> list:
    vec = [Fraction(x) for x in v]
    if len(vec) != d:
        raise ValueError(f"{name} must have length {d}")
    return vec


def rep_schrodinger(d: int, omega, beta, gamma, kappa, lam, eps) -> list:
    """(d+2)-square matrix of a generator with the given parameters:
    rows [omega, beta, gamma; 0, lam, eps; 0, -kappa, -lam]."""
    om = _check_omega(d, omega)
    be = _check_vector(d, beta, "beta")
    ga = _check_vector(d, gamma, "gamma")
    kappa, lam, eps = Fraction(kappa), Fraction(lam), Fraction(eps)
    n = d + 2
    Z = _zeros(n)
    for A in range(d):
        for B in range(d):
            Z[A][B] = om[A][B]
        Z[A][d] = be[A]
        Z[A][d + 1] = ga[A]
    Z[d][d] = lam
    Z[d][d + 1] = eps
    Z[d + 1][d] = -kappa
    Z[d + 1][d + 1] = -lam
    return Z


def rep_cga(d: int, omega, alpha, beta, gamma, kappa, lam, eps) -> list:
    """(d+3)-square matrix of a generator with the given parameters.

    The lower-right 3x3 block is the sl(2) triple; its entries are fixed
    by requiring bracket consistency with the vector-field basis, which
    pins the kappa entry in the beta-row at -1/2 (the opposite choice
    breaks the commutator [expansion, time translation] exactly).
    """
    om = _check_omega(d, omega)
    al = _check_vector(d, alpha, "alpha")
    be = _check_vector(d, beta, "beta")
    ga = _check_vector(d, gamma, "gamma")
    kappa, lam, eps = Fraction(kappa), Fraction(lam), Fraction(eps)
    n = d + 3
    Z = _zeros(n)
    for A in range(d):
        for B in range(d):
            Z[A][B] = om[A][B]
        Z[A][d] = -_HALF * al[A]
        Z[A][d + 1] = be[A]
        Z[A][d + 2] = ga[A]
    Z[d][d] = lam
    Z[d][d + 1] = 2 * eps
    Z[d + 1][d] = -_HALF * kappa
    Z[d + 1][d + 2] = eps
    Z[d + 2][d + 1] = -kappa
    Z[d + 2][d + 2] = -lam
    return Z


# ---------------------------------------------------------------------------
# basis enumeration: (label, parameter kwargs, vector field)
# ---------------------------------------------------------------------------


def _omega_unit(d: int, A: int, B: int) -> list:
    """Rotation block matching the field x^A d_B - x^B d_A."""
    om = [[Fraction(0)] * d for _ in range(d)]
    om[B - 1][A - 1] = Fraction(1)
    om[A - 1][B - 1] = Fraction(-1)
    return om


def _zero_params(d: int, with_alpha: bool) -> dict:
    p = {
        "omega": [[Fraction(0)] * d for _ in range(d)],
        "beta": [Fraction(0)] * d,
        "gamma": [Fraction(0)] * d,
        "kappa": Fraction(0),
        "lam": Fraction(0),
        "eps": Fraction(0),
    }
    if with_alpha:
        p["alpha"] = [Fraction(0)] * d
    return p


def sch_parameter_basis(d: int):
    """Generators of the z = 2 projective family in parameter order."""
    out = []
    for A, B in _pairs(d):
        p = _zero_params(d, False)
        p["omega"] = _omega_unit(d, A, B)
        out.append((f"omega[{A},{B}]", p, rotation(d, A, B)))
    for A in range(1, d + 1):
        p = _zero_params(d, False)
        p["beta"][A - 1] = Fraction(1)
        out.append((f"beta[{A}]", p, translation(d, A, 1)))
    for A in range(1, d + 1):
        p = _zero_params(d, False)
        p["gamma"][A - 1] = Fraction(1)
        out.append((f"gamma[{A}]", p, translation(d, A, 0)))
    p = _zero_params(d, False)
    p["kappa"] = Fraction(1)
    out.append(("kappa", p, sch_expansion(d)))
    p = _zero_params(d, False)
    p["lam"] = Fraction(1)
    out.append(("lambda", p, sch_dilation(d)))
    p = _zero_params(d, False)
    p["eps"] = Fraction(1)
    out.append(("epsilon", p, time_translation(d)))
    return out


def cga_parameter_basis(d: int):
    """Generators of the z = 1 family (with accelerations) in order."""
    out = []
    for A, B in _pairs(d):
        p = _zero_params(d, True)
        p["omega"] = _omega_unit(d, A, B)
        out.append((f"omega[{A},{B}]", p, rotation(d, A, B)))
    for A in range(1, d + 1):
        p = _zero_params(d, True)
        p["alpha"][A - 1] = Fraction(1)
        out.append((f"alpha[{A}]", p, acceleration(d, A)))
    for A in range(1, d + 1):
        p = _zero_params(d, True)
        p["beta"][A - 1] = Fraction(1)
        out.append((f"beta[{A}]", p, translation(d, A, 1)))
    for A in range(1, d + 1):
        p = _zero_params(d, True)
        p["gamma"][A - 1] = Fraction(1)
        out.append((f"gamma[{A}]", p, translation(d, A, 0)))
    p = _zero_params(d, True)
    p["kappa"] = Fraction(1)
    out.append(("kappa", p, cga_expansion(d)))
    p = _zero_params(d, True)
    p["lam"] = Fraction(1)
    out.append(("lambda", p, cga_dilation(d)))
    p = _zero_params(d, True)
    p["eps"] = Fraction(1)
    out.append(("epsilon", p, time_translation(d)))
    return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def _mat_sub(a, b):
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)
    ]


def _commutator(a, b):
    return _mat_sub(_mat_mul(a, b), _mat_mul(b, a))


def _mat_scale(a, c):
    return [[v * c for v in row] for row in a]


def _mat_add(a, b):
    return [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def _is_zero(a) -> bool:
    return all(not v for row in a for v in row)


def verify_representation(kind: str, d: int) -> dict:
    """Exhaustive bracket-consistency and faithfulness report.

    For every basis pair, the commutator of the two matrices must equal
    sign * (matrix of the vector-field bracket) for one global sign.
    """
    if kind == "sch":
        basis = sch_parameter_basis(d)
        rep = lambda p: rep_schrodinger(d, **p)
    elif kind == "cga":
        basis = cga_parameter_basis(d)
        rep = lambda p: rep_cga(d, **p)
    else:
        raise ValueError("kind must be 'sch' or 'cga'")

    fields = [X for _, _, X in basis]
    mats = [rep(p) for _, p, _ in basis]

    flat = [[v for row in m for v in row] for m in mats]
    faithful = linalg.rank([list(col) for col in zip(*flat)]) == len(basis)

    sign = None
    mismatches = []
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            br = lie_bracket(fields[i], fields[j])
            coeffs = expand_in_basis(fields, br)
            if coeffs is None:
                mismatches.append([basis[i][0], basis[j][0], "bracket leaves span"])
                continue
            target = _zeros(len(mats[0]))
            for k, c in enumerate(coeffs):
                if c:
                    target = _mat_add(target, _mat_scale(mats[k], c))
            comm = _commutator(mats[i], mats[j])
            if _is_zero(target) and _is_zero(comm):
                continue
            if _is_zero(_mat_sub(comm, target)):
                pair_sign = 1
            elif _is_zero(_mat_add(comm, target)):
                pair_sign = -1
            else:
                mismatches.append([basis[i][0], basis[j][0], "no sign matches"])
                continue
            if sign is None:
                sign = pair_sign
            elif sign != pair_sign:
                mismatches.append([basis[i][0], basis[j][0], "sign flips"])
    return {
        "rep": kind,
        "size": len(mats[0]),
        "dim": len(basis),
        "sign": sign,
        "faithful": faithful,
        "mismatches": mismatches,
    }


# ---------------------------------------------------------------------------
# Levi-style decomposition checks
# ---------------------------------------------------------------------------


def levi_check(sc, radical: set, rotation_indices: set, sl2_indices: set) -> dict:
    """Checks that the designated radical is an abelian ideal and that the
    quotient splits as commuting rotation and sl(2)-type blocks with the
    expected structure constants.

    Reports each failure distinctly: 'not_an_ideal' and 'not_abelian'
    carry a witness pair; the quotient checks compare against the
    so(d) relations on the rotation block and the dilation-graded
    relations on the (expansion, dilation, time translation) block.
    """
    n = sc.n
    radical = set(radical)
    complement = [i for i in range(n) if i not in radical]
    report = {"ideal": True, "abelian": True, "quotient": True, "failures": []}

    for i in radical:
        for j in range(n):
            for k in complement:
                if sc.c[i][j][k]:
                    report["ideal"] = False
                    report["failures"].append(["not_an_ideal", i, j, k])
    for i in radical:
        for j in radical:
            for k in range(n):
                if sc.c[i][j][k]:
                    report["abelian"] = False
                    report["failures"].append(["not_abelian", i, j, k])
    if not report["ideal"]:
        return report

    # quotient structure constants on the complement
    pos = {idx: a for a, idx in enumerate(complement)}
    q = {}
    for i in complement:
        for j in complement:
            for k in complement:
                v = sc.c[i][j][k]
                if v:
                    q[(pos[i], pos[j], pos[k])] = v
    rot = sorted(pos[i] for i in rotation_indices)
    sl2 = sorted(pos[i] for i in sl2_indices)

    # the two factors must commute in the quotient
    for i in rot:
        for j in sl2:
            for k in range(len(complement)):
                if q.get((i, j, k)):
                    report["quotient"] = False
                    report["failures"].append(["factors_do_not_commute", i, j, k])
    # rotations close on rotations, sl2 closes on sl2
    for block, other in ((rot, sl2), (sl2, rot)):
        for i in block:
            for j in block:
                for k in other:
                    if q.get((i, j, k)):
                        report["quotient"] = False
                        report["failures"].append(["block_not_closed", i, j, k])
    # sl(2) grading: with basis (expansion K, dilation D, translation H),
    # ad(D) has eigenvalues (+c, 0, -c) and [K, H] is proportional to D.
    if len(sl2) != 3:
        report["quotient"] = False
        report["failures"].append(["sl2_block_size", len(sl2)])
        return report
    K, D, H = sl2
    checks = [
        q.get((D, K, K)) is not None,
        q.get((D, H, H)) is not None,
        q.get((K, H, D)) is not None,
        q.get((D, K, H)) is None,
        q.get((D, H, K)) is None,
        q.get((K, H, K)) is None,
        q.get((K, H, H)) is None,
    ]
    if not all(checks):
        report["quotient"] = False
        report["failures"].append(["sl2_relations", checks])
    else:
        lam_k = q[(D, K, K)]
        lam_h = q[(D, H, H)]
        if lam_k != -lam_h:
            report["quotient"] = False
            report["failures"].append(["sl2_grading", str(lam_k), str(lam_h)])
    return report

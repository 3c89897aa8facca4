"""Command-line front end: solvers, verifiers and simulations.

Exit codes: 0 success / verification pass, 1 usage or domain error,
2 verification failure (inverted by --negative-control where offered).
Output is byte-stable for fixed inputs and seed: canonical generator
ordering and sorted JSON keys throughout.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from . import em, fluids, mechanics, representations, solver
from .geometry import flat_structure
from .poly import Poly


def _write_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _solve_basis(args) -> tuple:
    """(AlgebraBasis, StructureConstants or None) for a family request."""
    d = args.d
    z = solver.parse_z(args.z) if args.z else None
    family = args.family
    if family == "cgal":
        return solver.solve_cgal(d, args.deg_t), None
    if family == "cgal-z":
        if z is None:
            raise ValueError("--z required for cgal-z")
        return solver.solve_cgal_z(d, z, args.deg_t), None
    if family == "gal":
        basis = solver.solve_gal(d)
    elif family == "sch-expanded":
        basis = solver.solve_sch_expanded(d)
    elif family == "sch":
        basis = solver.restrict_sch_z(solver.solve_sch_expanded(d), z or Fraction(2))
    elif family == "cnc":
        basis, _ = solver.solve_cnc_flat(d, args.deg_t)
        return basis, None
    elif family == "cmil":
        c1, c2 = solver.solve_cmil_flat(d)
        basis = c1 if args.branch == "c1" else c2
    elif family == "cga":
        c1, _ = solver.solve_cmil_flat(d)
        basis = solver.restrict_cmil_z(c1, z or Fraction(1))
    elif family == "alt":
        basis = solver.alt_subalgebra(d, args.N)
    else:
        raise ValueError(f"unknown family {family}")
    return basis, solver.structure_constants(basis)


def cmd_solve(args) -> int:
    basis, sc = _solve_basis(args)
    _write_json(basis.to_report(sc), args.out)
    return 0


def cmd_bracket_table(args) -> int:
    basis, sc = _solve_basis(args)
    if sc is None:
        sc = solver.structure_constants(basis)
    payload = {
        "family": basis.family,
        "d": basis.d,
        "dim": basis.dim,
        "labels": basis.labels,
        "antisymmetric": sc.antisymmetry_ok(),
        "jacobi": sc.jacobi_ok(),
        "structure_constants": sc.to_entries(),
    }
    _write_json(payload, args.out)
    return 0 if payload["antisymmetric"] and payload["jacobi"] else 2


def cmd_rep_check(args) -> int:
    report = representations.verify_representation(args.rep, args.d)
    _write_json(report, args.out)
    ok = report["faithful"] and not report["mismatches"] and report["sign"] in (1, -1)
    return 0 if ok else 2


def cmd_geodesic(args) -> int:
    d = 3
    if args.model == "free":
        conn = flat_structure(d).connection
    elif args.model == "harmonic":
        from .geometry import newtonian_connection

        V = Poly.zero(d)
        for A in range(1, d + 1):
            V = V + Poly.x(d, A) * Poly.x(d, A) * Fraction(1, 2)
        conn = newtonian_connection(d, V).connection
    else:
        raise ValueError("geodesic model must be free or harmonic")
    x0 = [0.0, 1.0, 0.0, 0.0]
    v0 = [1.0, 0.0, 0.5, 0.0]
    res = mechanics.integrate_geodesic(conn, x0, v0, args.h, args.steps)
    traj = res["trajectory"]
    if args.out:
        spin = np.array([0.0, 0.0, 1.0])
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["tau"]
                + [f"x{a}" for a in range(d + 1)]
                + [f"xdot{a}" for a in range(d + 1)]
                + ["H", "D", "K"]
                + [f"P{A}" for A in range(1, d + 1)]
                + [f"G{A}" for A in range(1, d + 1)]
                + [f"J{A}" for A in range(1, d + 1)]
            )
            for i, row in enumerate(traj):
                state = mechanics.MassiveState(row[0], row[1:4], row[5:8], spin)
                ch = mechanics.massive_charges(state, 1.0, 0.0)
                cells = (
                    [i * args.h]
                    + list(row)
                    + [ch["H"], ch["D"], ch["K"]]
                    + list(ch["P"])
                    + list(ch["G"])
                    + list(ch["J"])
                )
                writer.writerow([f"{v:.17g}" for v in cells])
    _write_json(
        {
            "model": args.model,
            "steps": args.steps,
            "h": args.h,
            "tdot_class": res["tdot_class"],
            "final": [float(v) for v in traj[-1]],
        },
        None,
    )
    return 0


def cmd_noether(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.model == "massive":
        m, s = 1.3, 0.5
        pts = [
            mechanics.MassiveState(
                rng.normal(), rng.normal(size=3), rng.normal(size=3), rng.normal(size=3)
            )
            for _ in range(10)
        ]
        om = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        params = mechanics.SchParams(om, np.array([1.0, 0.0, 2.0]),
                                     np.array([0.0, 1.0, 0.0]), 0.7, -0.3, 1.1)
        residual = mechanics.massive_noether_residual(params, m, s, pts)
        payload = {"model": "massive", "noether_residual": residual, "tolerance": 1e-6}
        _write_json(payload, args.out)
        return 0 if residual < 1e-6 else 2
    if args.model == "photon":
        k, s = 2.0, 1.0
        z = Poly.zero(1)
        om = [[z for _ in range(3)] for _ in range(3)]
        om[0][1] = Poly.const(1, 1)
        om[1][0] = Poly.const(1, -1)
        eta = [Poly.t(1), Poly.const(1, 1), z]
        xi = Poly.t(1) * Poly.t(1)
        lift = mechanics.photon_lift(k, om, eta, xi)
        states = []
        for _ in range(4):
            u = rng.normal(size=3)
            u /= np.linalg.norm(u)
            states.append(mechanics.PhotonState(rng.normal(), rng.normal(size=3), rng.normal(), u))
        residual = mechanics.presymplectic_residual_photon(lift, states, k, s)
        payload = {"model": "photon", "symmetry_residual": residual, "tolerance": 1e-6}
        _write_json(payload, args.out)
        return 0 if residual < 1e-6 else 2
    raise ValueError("noether model must be massive or photon")


def cmd_fluid_check(args) -> int:
    d = 3
    theta, rho = fluids.self_similar_free(a=1.0, rho0=2.0, d=d)
    pts = fluids.random_points(d, 100, seed=args.seed)
    base = fluids.fluid_residual(theta, rho, fluids.ZERO_POTENTIAL, pts)
    T = fluids.FluidTransform("EXPANSION", kappa=0.4)
    th2, rh2 = fluids.apply_transform(T, theta, rho, d)
    pred = lambda c: 1.0 - 0.4 * c[0] > 0.05
    pts2 = fluids.random_points(d, 100, seed=args.seed + 1, predicate=pred)
    expanded = fluids.fluid_residual(th2, rh2, fluids.ZERO_POTENTIAL, pts2)
    thu, rhu = fluids.uniform_flow([0.3, -0.2, 0.5])
    ta, ra = fluids.apply_transform(
        fluids.FluidTransform("ACCELERATION", a=(1.0, 0.0, 0.0)), thu, rhu, d
    )
    accel = fluids.fluid_residual(ta, ra, fluids.ZERO_POTENTIAL, pts)
    payload = {
        "self_similar": base,
        "expansion_image": expanded,
        "acceleration_image": accel,
        "gamma_z2_d3": str(fluids.polytropic_exponent(Fraction(2), 3)),
    }
    symmetric_ok = (
        max(base.values()) < 1e-10 and max(expanded.values()) < 1e-9
    )
    accel_breaks = max(accel.values()) > 0.1
    _write_json(payload, args.out)
    if args.negative_control:
        return 0 if accel_breaks else 2
    return 0 if symmetric_ok and accel_breaks else 2


def cmd_em_check(args) -> int:
    nc = flat_structure(3)
    lib = em.sourcefree_library()
    c1, _ = solver.solve_cmil_flat(3)
    failures = []
    for label, X in zip(c1.labels, c1.generators):
        for idx, f in enumerate(lib):
            ok, _, _ = em.symmetry_check(X, f, nc)
            if not ok:
                failures.append([label, idx])
    rot_t = solver.rotation(3, 1, 2, k=1)
    witness_fail = [
        idx for idx, f in enumerate(lib) if not em.symmetry_check(rot_t, f, nc)[0]
    ]
    payload = {
        "generators": c1.dim,
        "fields": len(lib),
        "failures": failures,
        "time_dependent_rotation_fails_on": witness_fail,
    }
    _write_json(payload, args.out)
    if args.negative_control:
        return 0 if witness_fail else 2
    return 0 if not failures and witness_fail else 2


def cmd_selftest(args) -> int:
    checks = []

    def record(name, ok):
        checks.append((name, bool(ok)))
        print(f"{'PASS' if ok else 'FAIL'}  {name}")

    s = solver.solve_sch(3)
    record("dim sch(3) == 12", s.dim == 12)
    c1, c2 = solver.solve_cmil_flat(3)
    record("dim cmil(3) == 16", c1.dim == 16)
    record("dim expanded sch(3) == 13", c2.dim == 13)
    cga = solver.restrict_cmil_z(c1, Fraction(1))
    record("dim cga(3) == 15", cga.dim == 15)
    sc = solver.structure_constants(s)
    record("sch(3) antisymmetry + Jacobi", sc.antisymmetry_ok() and sc.jacobi_ok())
    rep = representations.verify_representation("sch", 3)
    record("sch rep faithful + consistent", rep["faithful"] and not rep["mismatches"])
    rep = representations.verify_representation("cga", 3)
    record("cga rep faithful + consistent", rep["faithful"] and not rep["mismatches"])
    out = mechanics.inverse_square_trajectory(
        1.0, -1.0, [1.0, 0.0, 0.0], [0.0, float(np.sqrt(2.0)), 0.0], 1e-3, 2000
    )
    drift = float(np.max(np.abs(out["D"] - out["D"][0])))
    record("inverse-square dilation charge drift < 1e-6", drift < 1e-6)
    theta, rho = fluids.self_similar_free(1.0, 2.0, 3)
    res = fluids.fluid_residual(
        theta, rho, fluids.ZERO_POTENTIAL, fluids.random_points(3, 50, seed=0)
    )
    record("self-similar fluid residuals < 1e-10", max(res.values()) < 1e-10)
    nc = flat_structure(3)
    lib = em.sourcefree_library()
    ok_em = all(
        em.symmetry_check(X, f, nc)[0] for X in c1.generators for f in lib[:2]
    )
    record("field equations keep cmil symmetry", ok_em)
    failed = [name for name, ok in checks if not ok]
    return 0 if not failed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncsym",
        description="Conformal symmetry algebras of Newton-Cartan spacetime",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="write JSON/CSV here")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="solve a symmetry family")
    p.add_argument("--family", required=True,
                   choices=["cgal", "cgal-z", "gal", "sch", "sch-expanded", "cnc", "cmil", "cga", "alt"])
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--z", default=None, help="dynamical exponent 'p/q' or 'inf'")
    p.add_argument("--deg-t", type=int, default=2, dest="deg_t")
    p.add_argument("--branch", choices=["c1", "c2"], default="c1")
    p.add_argument("--N", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bracket-table", help="structure constants of a closed family")
    p.add_argument("--family", required=True,
                   choices=["gal", "sch", "sch-expanded", "cmil", "cga", "alt"])
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--z", default=None)
    p.add_argument("--deg-t", type=int, default=2, dest="deg_t")
    p.add_argument("--branch", choices=["c1", "c2"], default="c1")
    p.add_argument("--N", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_bracket_table)

    p = sub.add_parser("rep-check", help="verify a matrix representation")
    p.add_argument("--rep", choices=["sch", "cga"], required=True)
    p.add_argument("--d", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_rep_check)

    p = sub.add_parser("geodesic", help="integrate a geodesic and dump CSV")
    p.add_argument("--model", choices=["free", "harmonic"], default="free")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--h", type=float, default=1e-3)
    common(p)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("noether", help="conserved-quantity residual checks")
    p.add_argument("--model", choices=["massive", "photon"], required=True)
    common(p)
    p.set_defaults(func=cmd_noether)

    p = sub.add_parser("fluid-check", help="fluid symmetry suite")
    p.add_argument("--negative-control", action="store_true")
    common(p)
    p.set_defaults(func=cmd_fluid_check)

    p = sub.add_parser("em-check", help="Galilean electromagnetism suite")
    p.add_argument("--negative-control", action="store_true")
    common(p)
    p.set_defaults(func=cmd_em_check)

    p = sub.add_parser("selftest", help="run the quick invariant suite")
    common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

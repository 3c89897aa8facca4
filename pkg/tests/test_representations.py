from fractions import Fraction

import pytest

from ncsym import representations as reps
from ncsym.solver import solve_cga, solve_sch, structure_constants


def test_rep_sch_zero_params_zero_matrix():
    Z = reps.rep_schrodinger(3, [[0] * 3 for _ in range(3)], [0] * 3, [0] * 3, 0, 0, 0)
    assert all(v == 0 for row in Z for v in row)


def test_rep_sch_rotation_block():
    om = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    Z = reps.rep_schrodinger(3, om, [0] * 3, [0] * 3, 0, 0, 0)
    for A in range(3):
        for B in range(3):
            assert Z[A][B] == om[A][B]
    assert all(Z[A][B] == 0 for A in range(5) for B in range(5) if A >= 3 or B >= 3)


def test_rep_sch_commutator_of_rotations_matches_so3():
    om12 = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    om13 = [[0, 0, 1], [0, 0, 0], [-1, 0, 0]]
    Z1 = reps.rep_schrodinger(3, om12, [0] * 3, [0] * 3, 0, 0, 0)
    Z2 = reps.rep_schrodinger(3, om13, [0] * 3, [0] * 3, 0, 0, 0)
    comm = reps._commutator(Z1, Z2)
    # [om12, om13] as matrices
    expect = reps._mat_sub(reps._mat_mul(Z1, Z2), reps._mat_mul(Z2, Z1))
    assert comm == expect
    assert any(v for row in comm for v in row)


def test_rep_sch_sl2_block_closes_like_vector_fields():
    report = reps.verify_representation("sch", 3)
    assert report["mismatches"] == []
    assert report["sign"] in (1, -1)


def test_rep_shapes_rejected():
    with pytest.raises(ValueError):
        reps.rep_schrodinger(3, [[0, 1], [-1, 0]], [0] * 3, [0] * 3, 0, 0, 0)
    with pytest.raises(ValueError):
        reps.rep_cga(3, [[0] * 3 for _ in range(3)], [0] * 2, [0] * 3, [0] * 3, 0, 0, 0)
    with pytest.raises(ValueError):
        reps.rep_schrodinger(3, [[0, 1, 0], [1, 0, 0], [0, 0, 0]], [0] * 3, [0] * 3, 0, 0, 0)


def test_rep_cga_zero_and_block_structure():
    Z = reps.rep_cga(3, [[0] * 3 for _ in range(3)], [0] * 3, [0] * 3, [0] * 3, 0, 0, 0)
    assert all(v == 0 for row in Z for v in row)
    Z = reps.rep_cga(3, [[0] * 3 for _ in range(3)], [2, 0, 0], [0] * 3, [0] * 3, 0, 0, 0)
    assert Z[0][3] == Fraction(-1)  # alpha column carries -alpha/2


def test_rep_cga_so21_block():
    # the lower 3x3 block of the (kappa, lam, eps) triple closes with the
    # structure constants of the corresponding vector fields
    report = reps.verify_representation("cga", 3)
    assert report["mismatches"] == []
    assert report["faithful"]


def test_rep_consistency_full_pairwise():
    for kind, d in (("sch", 3), ("cga", 3), ("sch", 2), ("cga", 2)):
        report = reps.verify_representation(kind, d)
        assert report["faithful"], (kind, d)
        assert report["mismatches"] == [], (kind, d)
        assert report["sign"] == -1, (kind, d)  # anti-homomorphism throughout


def test_levi_sch():
    sch = solve_sch(3)
    sc = structure_constants(sch)
    rot = {i for i, l in enumerate(sch.labels) if l.startswith("omega")}
    radical = {i for i, l in enumerate(sch.labels) if l.startswith(("beta", "gamma"))}
    sl2 = {sch.labels.index("kappa"), sch.labels.index("lambda"), sch.labels.index("epsilon")}
    assert len(radical) == 6
    report = reps.levi_check(sc, radical, rot, sl2)
    assert report["ideal"] and report["abelian"] and report["quotient"]
    assert report["failures"] == []


def test_levi_cga():
    cga = solve_cga(3)
    sc = structure_constants(cga)
    rot = {i for i, l in enumerate(cga.labels) if l.startswith("omega")}
    radical = {i for i, l in enumerate(cga.labels) if l.startswith(("alpha", "beta", "gamma"))}
    sl2 = {cga.labels.index("kappa"), cga.labels.index("lambda"), cga.labels.index("epsilon")}
    assert len(radical) == 9
    report = reps.levi_check(sc, radical, rot, sl2)
    assert report["ideal"] and report["abelian"] and report["quotient"]
    assert report["failures"] == []


def test_levi_rejects_rotation_in_radical():
    sch = solve_sch(3)
    sc = structure_constants(sch)
    rot = {1, 2}
    radical = {i for i, l in enumerate(sch.labels) if l.startswith(("beta", "gamma"))}
    radical.add(0)  # omega[1,2] wrongly included
    sl2 = {sch.labels.index("kappa"), sch.labels.index("lambda"), sch.labels.index("epsilon")}
    report = reps.levi_check(sc, radical, rot, sl2)
    assert not report["ideal"]
    assert any(f[0] == "not_an_ideal" for f in report["failures"])

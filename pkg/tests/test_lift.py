import pytest

from defring import (
    CheckFailed,
    DeformationSystem,
    Ladder,
    Lift,
    LiftExtensions,
    Obstruction,
    as_representation,
    base_embedding,
    extend_step,
    first_order_space,
    is_valid,
    ladder_search,
    residual_coefficients,
    shift_endomorphism,
    validate,
    verify_ladder,
)
from defring.linalg import Matrix, rank
from helpers import load_module


def ints(mat):
    return [[int(x.value) for x in row] for row in mat.tolist()]


def unit_lift(v, *degrees):
    # x deforms by the given scalar coefficients in degrees 1..order
    field = v.field
    lift = Lift.trivial(v)
    for c in degrees:
        lift = lift.extended({"x": Matrix.from_rows(field, [[c]])})
    return lift


def test_trivial_lift_shape():
    v = load_module("kx2_f5.alg", "V")
    lift = Lift.trivial(v, order=2)
    assert lift.order == 2
    assert all(m.is_zero() for m in lift.coeffs["x"][1:])
    assert lift.coeffs["x"][0] == v.mats["x"]
    assert is_valid(Lift.trivial(v, order=5))


def test_first_order_residual_of_square_relation():
    v = load_module("kx2_f5.alg", "V")
    lift = unit_lift(v, 1)
    # (c1 t)^2 has no t coefficient, so order 1 is consistent
    assert is_valid(lift)
    # the t^2 coefficient of the square is c1^2 = 1
    stuck = lift.extended({"x": Matrix.zeros(v.field, 1, 1)})
    res = residual_coefficients(stuck, 2)
    assert [ints(r) for r in res] == [[[1]]]
    assert not is_valid(stuck)


def test_first_order_space_matches_cocycles():
    v = load_module("kx2_f5.alg", "V")
    cocycles, coboundaries = first_order_space(v)
    assert len(cocycles) == 1
    assert ints(cocycles[0]["x"]) == [[1]]
    assert all(all(m.is_zero() for m in c.values()) for c in coboundaries)

    p1 = load_module("kx2_f5.alg", "P1")
    z_p, b_p = first_order_space(p1)
    # rigid module: every infinitesimal deformation is a coboundary
    sys_p = DeformationSystem(p1, p1)
    for z in z_p:
        assert sys_p.is_coboundary(z)


def test_extend_step_solves_next_order():
    v = load_module("kx3_f5.alg", "V")
    lift = unit_lift(v, 1)
    step = extend_step(lift)
    assert isinstance(step, LiftExtensions)
    ext = step.particular()
    assert ext.order == 2
    assert is_valid(ext)
    # kernel freedom: every point of the solution space is a valid lift
    assert step.kernel_dim == 1
    points = [ext]
    assert all(is_valid(p) for p in points)


def test_extend_step_reports_obstruction():
    v = load_module("kx2_f5.alg", "V")
    step = extend_step(unit_lift(v, 1))
    assert isinstance(step, Obstruction)
    assert step.order == 2
    assert step.rank_coefficient == 0
    assert step.rank_augmented == 1
    assert step.certifies
    labels = [label for label, _ in step.residuals]
    assert labels == ["x*x"]
    assert [ints(r) for _, r in step.residuals] == [[[1]]]


def test_reduce_extend_round_trip():
    v = load_module("kx4_f5.alg", "V")
    lift = unit_lift(v, 1, 0, 0)
    assert lift.reduced(1) == unit_lift(v, 1)
    assert lift.reduced(1).extended({"x": Matrix.zeros(v.field, 1, 1)}) == lift.reduced(2)
    assert lift.reduced(lift.order) == lift


def test_lift_constructor_rejects_base_mismatch():
    v = load_module("kx2_f5.alg", "V")
    wrong = Matrix.from_rows(v.field, [[1]])
    with pytest.raises(AssertionError):
        Lift(v, 0, {"x": [wrong]})


def test_as_representation_block_toeplitz():
    v = load_module("kx4_f5.alg", "V")
    lift = unit_lift(v, 1, 2)
    rep = as_representation(lift)
    assert rep.dims == {"v": 3}
    # block (i, j) holds coefficient i - j: constant diagonal stripes
    assert ints(rep.mats["x"]) == [[0, 0, 0], [1, 0, 0], [2, 1, 0]]
    assert validate(rep) == []


def test_as_representation_respects_relations_only_when_valid():
    v = load_module("kx2_f5.alg", "V")
    stuck = unit_lift(v, 1, 0)
    rep = as_representation(stuck)
    assert validate(rep) != []


def test_shift_endomorphism_structure():
    v = load_module("kx3_f5.alg", "V")
    lift = unit_lift(v, 1, 0)
    rep = as_representation(lift)
    sigma = shift_endomorphism(lift)["v"]
    assert ints(sigma) == [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
    # commutes with the action, cubes to zero, squares to the base embedding
    assert sigma * rep.mats["x"] == rep.mats["x"] * sigma
    assert sigma.power(lift.order + 1).is_zero()
    assert not sigma.power(lift.order).is_zero()
    emb = base_embedding(lift)["v"]
    assert rank(emb) == 1
    assert (sigma * emb).is_zero()


def test_ladder_from_lift():
    v = load_module("kx4_f5.alg", "V")
    top = unit_lift(v, 1, 0, 0)
    ladder = Ladder.from_lift(top)
    assert ladder.length == 3
    assert [l.order for l in ladder.chain] == [1, 2, 3]
    assert ladder.top == top
    assert ladder.first_order_class == {"x": top.coeffs["x"][1]}
    assert ladder.coefficient_tuples()


def test_verify_ladder_accepts_engine_output():
    v = load_module("kx4_f5.alg", "V")
    search = ladder_search(v, max_order=10)
    transcript = verify_ladder(search.ladder)
    assert transcript.ok
    names = [c.name for c in transcript.checks]
    assert "first_order_nontrivial" in names
    for required in (
        "residuals_vanish",
        "sigma_is_composite",
        "sigma_nilpotent",
        "kernel_is_base_witness",
        "image_power_is_base_witness",
    ):
        assert any(n.startswith(required) or n == required for n in names)
    assert all(c.ok for c in transcript.checks)
    assert transcript.lines()


def test_verify_ladder_rejects_trivial_first_class():
    p1 = load_module("kx2_f5.alg", "P1")
    z, _ = first_order_space(p1)
    # every cocycle here is a coboundary, so the gate must fail
    lift = Lift.first_order(p1, z[0])
    transcript = verify_ladder(Ladder.from_lift(lift))
    assert not transcript.ok
    failed = [c.name for c in transcript.checks if not c.ok]
    assert any("nontrivial" in n for n in failed)
    with pytest.raises(CheckFailed):
        verify_ladder(Ladder.from_lift(lift), strict=True)


def test_verify_ladder_flags_inconsistent_chain():
    v = load_module("kx2_f5.alg", "V")
    stuck = unit_lift(v, 1, 0)
    transcript = verify_ladder(Ladder.from_lift(stuck))
    assert not transcript.ok
    failed = [c.name for c in transcript.checks if not c.ok]
    assert any("residual" in n for n in failed)

import json

import pytest

from defring import (
    BudgetExceeded,
    ClassifyConfig,
    classify,
    ladder_search,
    serialize_report,
    source_digest,
    tangent_dimension,
    verify_ladder,
)
from helpers import load_module, load_source, read_corpus


def run(name, module, **kw):
    return classify(load_source(name), module, ClassifyConfig(**kw) if kw else None)


def test_tangent_dimension_examples():
    assert tangent_dimension(load_module("kx2_f5.alg", "V")) == 1
    assert tangent_dimension(load_module("kx2_f5.alg", "P1")) == 0
    assert tangent_dimension(load_module("kx2_f5.alg", "VV")) == 4
    assert tangent_dimension(load_module("kronecker_q.alg", "M11")) == 1


@pytest.mark.parametrize(
    "name,module,vtype,n,proved",
    [
        ("kx2_f5.alg", "V", "finite", 1, True),
        ("kx3_f5.alg", "V", "finite", 2, True),
        ("kx2_q.alg", "V", "finite", 1, False),
        ("kx2_rel_f5.alg", "V", "finite", 1, True),
        ("kx2_f5.alg", "P1", "point", None, None),
        ("a2_f5.alg", "S1", "point", None, None),
        ("a2_f5.alg", "P1", "point", None, None),
        ("parallel_rel_f3.alg", "M", "point", None, None),
        ("kx2_f5.alg", "VV", "out_of_scope", None, None),
        ("kx2_f5.alg", "PV", "inconclusive", None, None),
        ("loop_free_q.alg", "V", "power_series", None, True),
        ("loop_free_f2.alg", "V", "power_series", None, True),
        ("kronecker_f3.alg", "M11", "power_series", None, True),
    ],
)
def test_verdict_table(name, module, vtype, n, proved):
    report = run(name, module)
    assert report.verdict.type == vtype
    if n is not None:
        assert report.verdict.n == n
    if proved is not None:
        assert report.verdict.proved is proved


def test_finite_report_details():
    report = run("kx2_f5.alg", "V")
    assert report.tangent_dim == 1
    assert report.verdict.n == 1
    assert report.checks.hom_top_dim == 1
    assert report.checks.ext_top_dim == 0
    assert report.checks.sigma_nilpotent is True
    assert report.checks.first_order_nontrivial is True
    assert report.ladder is not None and report.ladder.length == 1
    assert any("tangent dimension: 1" in note for note in report.notes)
    assert any("obstruction at order 2" in note for note in report.notes)


def test_point_report_has_no_ladder():
    report = run("a2_f5.alg", "S2")
    assert report.verdict.type == "point"
    assert report.ladder is None
    assert report.checks.hom_top_dim is None
    assert report.checks.sigma_nilpotent is None


def test_out_of_scope_reports_tangent():
    report = run("kx2_f5.alg", "VV")
    assert report.tangent_dim == 4
    assert report.verdict.reason
    assert report.ladder is None


def test_inconclusive_side_condition():
    report = run("kx2_f5.alg", "PV")
    assert report.verdict.type == "inconclusive"
    # the chain terminates but the top fails the hom side condition
    assert report.checks.hom_top_dim == 9
    assert report.checks.ext_top_dim == 0
    assert "hom" in report.verdict.reason.lower()
    assert any(report.verdict.reason in note for note in report.notes)


def test_reached_bound_gives_unproved_power_series():
    report = run("kx4_f5.alg", "V", max_order=2)
    assert report.verdict.type == "power_series"
    assert report.verdict.proved is False
    assert report.verdict.max_order_checked == 2
    # with enough room the same module is settled as finite
    assert run("kx4_f5.alg", "V", max_order=10).verdict.type == "finite"


def test_finite_verdict_stable_under_larger_bound():
    a = run("kx3_f5.alg", "V", max_order=10)
    b = run("kx3_f5.alg", "V", max_order=14)
    assert (a.verdict.type, a.verdict.n) == (b.verdict.type, b.verdict.n) == ("finite", 2)


def test_greedy_strategy_never_claims_proof():
    report = run("kx3_f5.alg", "V", strategy="greedy")
    assert report.verdict.type == "finite"
    assert report.verdict.n == 2
    assert report.verdict.proved is False
    assert any("strategy-limited" in note for note in report.notes)


def test_exhaustive_requires_prime_field():
    with pytest.raises(ValueError):
        run("kx2_q.alg", "V", strategy="exhaustive")
    with pytest.raises(ValueError):
        run("kx2_f5.alg", "V", strategy="sideways")


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as exc:
        run("kx2_f5.alg", "V", point_budget=1)
    assert exc.value.budget == 1
    assert exc.value.needed > 1


def test_ladder_search_result_shape():
    v = load_module("kx3_f5.alg", "V")
    result = ladder_search(v, max_order=10)
    assert result.kind == "terminated"
    assert result.exhaustive
    assert result.terminated_at == 2
    assert result.obstruction is not None and result.obstruction.certifies
    assert result.ladder.length == 2
    assert verify_ladder(result.ladder).ok

    loop = load_module("loop_free_f3.alg", "V")
    free = ladder_search(loop, max_order=10)
    assert free.kind == "unobstructed"
    assert free.kernel_dims == [1] * 10

    bounded = ladder_search(v, max_order=1)
    assert bounded.kind == "reached_bound"


def test_hereditary_strategy_used_automatically():
    report = run("loop_free_q.alg", "V")
    assert report.verdict.proved is True
    assert any("always feasible" in note for note in report.notes)
    assert any("kernel dimensions per order: [1, 1" in note for note in report.notes)


def test_stable_end_note_advisory():
    report = run("kx2_f5.alg", "V")
    assert any("stable endomorphism dimension: 1" in n for n in report.notes)
    assert any("weak and full deformations agree" in n for n in report.notes)
    hered = run("loop_free_f2.alg", "V")
    assert any("not applicable" in n for n in hered.notes)


def test_report_json_schema():
    report = run("kx2_f5.alg", "V")
    blob = json.loads(serialize_report(report))
    assert set(blob) == {
        "input_digest",
        "field",
        "tangent_dim",
        "verdict",
        "ladder",
        "checks",
        "notes",
    }
    assert blob["field"] == {"kind": "prime", "p": 5}
    assert blob["tangent_dim"] == 1
    assert blob["verdict"] == {"type": "finite", "N": 1, "proved": True}
    assert "reason" not in blob["verdict"]
    assert blob["checks"]["hom_top_dim"] == 1
    assert blob["checks"]["ext_top_dim"] == 0
    assert blob["checks"]["sigma_nilpotent"] is True
    assert blob["checks"]["first_order_nontrivial"] is True
    rung = blob["ladder"][0]
    assert rung["order"] == 1
    assert rung["matrices"] == {"x": [["1"]]}
    assert all(isinstance(n, str) for n in blob["notes"])


def test_report_json_rational_field_and_nulls():
    report = run("kx2_q.alg", "P1")
    blob = json.loads(serialize_report(report))
    assert blob["field"] == {"kind": "rationals"}
    assert blob["verdict"] == {"type": "point"}
    assert blob["ladder"] == []
    assert blob["checks"]["hom_top_dim"] is None
    assert blob["checks"]["sigma_nilpotent"] is None


def test_serialization_is_deterministic():
    for name, module in (("kx2_f5.alg", "V"), ("kx2_f5.alg", "PV")):
        a = serialize_report(run(name, module))
        b = serialize_report(run(name, module))
        assert a == b


def test_input_digest_ignores_comments_and_spacing():
    text = read_corpus("kx2_f5.alg")
    from defring import parse

    digest_plain = source_digest(parse(text))
    digest_commented = source_digest(parse("# extra leading comment\n" + text))
    assert digest_plain == digest_commented
    report = run("kx2_f5.alg", "V")
    assert report.input_digest == digest_plain
    assert len(report.input_digest) == 64

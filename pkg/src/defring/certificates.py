"""Re-verification of classification reports from the input file alone.

A report is a certificate: the ladder coefficients plus the claimed
checks.  Verification reparses the input, rebuilds every rung from the
serialized coefficients, and replays all checks with no state carried
over from the run that produced the report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .algebra import PresentedAlgebra
from .classify import (nontriviality_checks_pass, sigma_checks_pass,
                       source_digest, tangent_dimension)
from .dsl import field_to_json, parse
from .lift import Ladder, Lift, verify_ladder
from .linalg import Matrix
from .rep import Representation, ext1_dim, hom_dim, validate


@dataclass
class VerificationResult:
    ok: bool
    failures: list
    lines: list

    def summary(self) -> str:
        head = "certificate verifies" if self.ok else "certificate FAILS"
        return "\n".join([head] + [f"  {line}" for line in self.lines])


def _ladder_from_json(base: Representation, entries: list) -> Ladder | None:
    if not entries:
        return None
    field = base.field
    coeffs = {a.name: [base.mats[a.name]] for a in base.algebra.quiver.arrows}
    for expected_order, entry in enumerate(entries, start=1):
        if entry.get("order") != expected_order:
            raise ValueError(f"ladder orders out of sequence at {entry.get('order')}")
        mats = entry.get("matrices", {})
        for a in base.algebra.quiver.arrows:
            rows = mats.get(a.name)
            if rows is None:
                raise ValueError(f"ladder entry {expected_order} misses arrow {a.name}")
            dt, ds = base.dims[a.target], base.dims[a.source]
            if len(rows) != dt or any(len(r) != ds for r in rows):
                raise ValueError(f"ladder matrix shape mismatch for {a.name}")
            parsed = [[field.parse_literal(x) for x in r] for r in rows]
            coeffs[a.name].append(
                Matrix.from_rows(field, parsed) if dt else Matrix.zeros(field, 0, ds))
    top = Lift(base, len(entries), coeffs)
    return Ladder.from_lift(top)


def verify_report(source_text: str, module_name: str, report_json: str,
                  filename: str = "<input>") -> VerificationResult:
    """Replay every check of a serialized report against its input."""
    failures = []
    lines = []

    def check(name: str, ok: bool, detail: str = ""):
        suffix = f" ({detail})" if detail else ""
        lines.append(f"{name}: {'ok' if ok else 'FAILED'}{suffix}")
        if not ok:
            failures.append(name)

    report = json.loads(report_json)
    source = parse(source_text, filename)
    check("input_digest", report.get("input_digest") == source_digest(source))
    check("field", report.get("field") == field_to_json(source.field))
    if module_name not in source.modules:
        check("module_exists", False, module_name)
        return VerificationResult(False, failures, lines)
    check("module_exists", True)

    algebra = PresentedAlgebra.from_source(source)
    base = Representation.from_module_def(algebra, source.modules[module_name])
    bad = validate(base)
    check("module_satisfies_relations", not bad, ", ".join(bad))

    tangent = tangent_dimension(base)
    check("tangent_dim", report.get("tangent_dim") == tangent,
          f"recomputed {tangent}")

    verdict = report.get("verdict", {})
    vtype = verdict.get("type")
    ladder_entries = report.get("ladder", [])
    checks = report.get("checks", {})

    if vtype == "point":
        check("verdict_point_tangent_zero", tangent == 0)
        check("ladder_empty", not ladder_entries)
        return VerificationResult(not failures, failures, lines)
    if vtype == "out_of_scope":
        check("verdict_out_of_scope_tangent", tangent >= 2)
        check("ladder_empty", not ladder_entries)
        return VerificationResult(not failures, failures, lines)

    check("tangent_is_one", tangent == 1)
    try:
        ladder = _ladder_from_json(base, ladder_entries)
    except ValueError as exc:
        check("ladder_parses", False, str(exc))
        return VerificationResult(False, failures, lines)
    check("ladder_parses", True)
    if ladder is None:
        check("ladder_present", False, "verdict needs a ladder certificate")
        return VerificationResult(False, failures, lines)

    transcript = verify_ladder(ladder)
    sigma_ok = sigma_checks_pass(transcript)
    nontrivial_ok = nontriviality_checks_pass(transcript)
    if vtype in ("finite", "power_series"):
        # these verdicts assert a passing certificate; replay every check
        for entry in transcript.checks:
            check(f"order {entry.order}: {entry.name}", entry.ok, entry.detail)
    else:
        passed = sum(1 for entry in transcript.checks if entry.ok)
        lines.append(f"ladder transcript: {passed}/{len(transcript.checks)} checks pass")

    from .lift import as_representation

    top = as_representation(ladder.top)
    top_problems = validate(top)
    check("top_satisfies_relations", not top_problems, "; ".join(top_problems[:2]))
    if top_problems:
        # hom/ext of a non-module are meaningless; everything downstream is void
        return VerificationResult(False, failures, lines)
    hom_top = hom_dim(top, base)
    ext_top = ext1_dim(top, base, backend="all")
    check("hom_top_dim_matches", checks.get("hom_top_dim") == hom_top,
          f"recomputed {hom_top}")
    check("ext_top_dim_matches", checks.get("ext_top_dim") == ext_top,
          f"recomputed {ext_top}")
    check("sigma_nilpotent_matches", checks.get("sigma_nilpotent") == sigma_ok,
          f"recomputed {sigma_ok}")
    check("first_order_nontrivial_matches",
          checks.get("first_order_nontrivial") == nontrivial_ok,
          f"recomputed {nontrivial_ok}")

    if vtype == "finite":
        n = verdict.get("N")
        check("ladder_length_is_N", ladder.length == n,
              f"length {ladder.length}, N {n}")
        check("hom_top_is_one", hom_top == 1)
        check("ext_top_is_zero", ext_top == 0)
    elif vtype == "power_series":
        if verdict.get("proved"):
            check("proved_power_series_is_hereditary", algebra.hereditary)
    elif vtype == "inconclusive":
        check("inconclusive_side_condition_fails",
              hom_top != 1 or ext_top != 0 or not transcript.ok)
    else:
        check("verdict_known", False, repr(vtype))
    return VerificationResult(not failures, failures, lines)

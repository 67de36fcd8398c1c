"""Classification of the weak universal deformation ring of a module.

The decision tree is driven by the tangent dimension dim Ext^1(V, V):
zero means the only deformation is trivial (the ring is k), two or more
puts the ring outside the single-parameter scope of this tool, and one
triggers the ladder search.  A search that terminates with the right
side conditions at the top yields k[[t]]/(t^(N+1)); a relation-free
algebra or a search that never obstructs yields k[[t]].
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field as dc_field

from .dsl import SourceFile, print_source
from .lift import (
    Ladder,
    Lift,
    Obstruction,
    as_representation,
    extend_step,
    verify_ladder,
)
from .linalg import in_row_span, vec_add, vec_is_zero, vec_scale
from .rep import DeformationSystem, Representation, ext1_dim, hom_dim, hom_stable, validate


class BudgetExceeded(Exception):
    """A configured search budget was too small for the requested run."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: needs {needed}, budget {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


@dataclass
class ClassifyConfig:
    max_order: int = 10
    strategy: str | None = None  # exhaustive | greedy | None = pick by field
    point_budget: int = 200000
    branch_budget: int = 20000


def tangent_dimension(v: Representation) -> int:
    """dim Ext^1(V, V), cross-checked against the second applicable backend."""
    dim = ext1_dim(v, v, backend="all")
    return dim


# ----------------------------------------------------------------------
# ladder search


@dataclass
class SearchResult:
    kind: str  # terminated | reached_bound | unobstructed
    exhaustive: bool
    ladder: Ladder | None
    terminated_at: int | None = None
    obstruction: Obstruction | None = None
    kernel_dims: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)


def _vector_key(vec) -> tuple:
    return tuple(str(s.value) for s in vec)


def _nontrivial_seeds(system: DeformationSystem, point_budget: int) -> list:
    """All non-coboundary cocycle points over a prime field, in a fixed order."""
    field = system.field
    z = system.cocycles()
    count = field.p ** len(z)
    if count > point_budget:
        raise BudgetExceeded("first-order point enumeration", count, point_budget)
    cob = system.coboundary_space()
    seeds = []
    for combo in itertools.product(range(field.p), repeat=len(z)):
        vec = system.layout.zero_vector()
        for c, basis_vec in zip(combo, z):
            if c:
                vec = vec_add(vec, vec_scale(field.scalar(c), basis_vec))
        if vec_is_zero(vec):
            continue
        if not in_row_span(cob, vec):
            seeds.append(vec)
    seeds.sort(key=_vector_key)
    return seeds


def solution_points(solution, field) -> list:
    """Every point of an affine solution space over a prime field, sorted."""
    points = []
    for combo in itertools.product(range(field.p), repeat=len(solution.kernel)):
        vec = solution.particular
        for c, basis_vec in zip(combo, solution.kernel):
            if c:
                vec = vec_add(vec, vec_scale(field.scalar(c), basis_vec))
        points.append(vec)
    points.sort(key=_vector_key)
    return points


def _exhaustive_search(base: Representation, system: DeformationSystem,
                       cfg: ClassifyConfig) -> SearchResult:
    field = base.field
    if field.p is None:
        raise ValueError("exhaustive search requires a prime field")
    notes = []
    seeds = _nontrivial_seeds(system, cfg.point_budget)
    if not seeds:
        return SearchResult("terminated", exhaustive=True, ladder=None, terminated_at=0,
                            notes=["no nonzero tangent class to seed a chain"])
    frontier = [Lift.first_order(base, system.layout.unpack(v)) for v in seeds]
    notes.append(f"order 1: {len(frontier)} chains")
    last_obstruction = None
    order = 1
    while order < cfg.max_order:
        next_frontier = []
        for lift in frontier:
            step = extend_step(lift, system)
            if isinstance(step, Obstruction):
                last_obstruction = step
                continue
            count = field.p ** len(step.solution.kernel)
            if len(next_frontier) + count > cfg.point_budget:
                raise BudgetExceeded("extension frontier", len(next_frontier) + count,
                                     cfg.point_budget)
            for vec in solution_points(step.solution, field):
                next_frontier.append(lift.extended(system.layout.unpack(vec)))
        if not next_frontier:
            notes.append(f"order {order + 1}: every chain obstructs")
            return SearchResult("terminated", exhaustive=True,
                                ladder=Ladder.from_lift(frontier[0]),
                                terminated_at=order, obstruction=last_obstruction,
                                notes=notes)
        frontier = next_frontier
        order += 1
        notes.append(f"order {order}: {len(frontier)} chains")
    return SearchResult("reached_bound", exhaustive=True,
                        ladder=Ladder.from_lift(frontier[0]), notes=notes)


def _greedy_candidates(solution, field) -> list:
    """The particular solution nudged by each kernel direction, both ways."""
    out = [solution.particular]
    for basis_vec in solution.kernel:
        out.append(vec_add(solution.particular, basis_vec))
        out.append(vec_add(solution.particular, vec_scale(-field.one(), basis_vec)))
    seen = set()
    unique = []
    for vec in out:
        key = _vector_key(vec)
        if key not in seen:
            seen.add(key)
            unique.append(vec)
    return unique


def _greedy_search(base: Representation, system: DeformationSystem,
                   cfg: ClassifyConfig) -> SearchResult:
    field = base.field
    notes = ["greedy search: candidate extensions limited to kernel-basis nudges"]
    cob = system.coboundary_space()
    seeds = []
    for basis_vec in system.cocycles():
        for signed in (basis_vec, vec_scale(-field.one(), basis_vec)):
            if not in_row_span(cob, signed):
                seeds.append(signed)
    if not seeds:
        return SearchResult("terminated", exhaustive=False, ladder=None, terminated_at=0,
                            notes=notes + ["no nonzero tangent class to seed a chain"])
    stack = [Lift.first_order(base, system.layout.unpack(v)) for v in reversed(seeds)]
    best = None
    last_obstruction = None
    visits = 0
    while stack:
        lift = stack.pop()
        visits += 1
        if visits > cfg.branch_budget:
            raise BudgetExceeded("greedy branch visits", visits, cfg.branch_budget)
        if best is None or lift.order > best.order:
            best = lift
        if lift.order == cfg.max_order:
            notes.append(f"reached order {cfg.max_order} after {visits} visits")
            return SearchResult("reached_bound", exhaustive=False,
                                ladder=Ladder.from_lift(lift), notes=notes)
        step = extend_step(lift, system)
        if isinstance(step, Obstruction):
            if last_obstruction is None or step.order > last_obstruction.order:
                last_obstruction = step
            continue
        for vec in reversed(_greedy_candidates(step.solution, field)):
            stack.append(lift.extended(system.layout.unpack(vec)))
    notes.append(f"all {visits} explored chains obstruct by order {best.order + 1}")
    notes.append("strategy-limited: greedy search does not enumerate every chain")
    return SearchResult("terminated", exhaustive=False, ladder=Ladder.from_lift(best),
                        terminated_at=best.order, obstruction=last_obstruction, notes=notes)


def _hereditary_search(base: Representation, system: DeformationSystem,
                       cfg: ClassifyConfig) -> SearchResult:
    """No relations means no equations: every chain extends, pick the first."""
    field = base.field
    cob = system.coboundary_space()
    seed = None
    for basis_vec in system.cocycles():
        if not in_row_span(cob, basis_vec):
            seed = basis_vec
            break
    if seed is None:
        return SearchResult("terminated", exhaustive=True, ladder=None, terminated_at=0,
                            notes=["no nonzero tangent class to seed a chain"])
    lift = Lift.first_order(base, system.layout.unpack(seed))
    kernel_dims = [len(system.cocycles())]
    while lift.order < cfg.max_order:
        step = extend_step(lift, system)
        assert not isinstance(step, Obstruction), "relation-free system cannot obstruct"
        kernel_dims.append(len(step.solution.kernel))
        lift = step.particular()
    notes = ["no relations: the extension system is empty and always feasible",
             f"extension kernel dimensions per order: {kernel_dims}"]
    return SearchResult("unobstructed", exhaustive=True, ladder=Ladder.from_lift(lift),
                        kernel_dims=kernel_dims, notes=notes)


def ladder_search(base: Representation, max_order: int = 10, strategy: str | None = None,
                  point_budget: int = 200000, branch_budget: int = 20000,
                  system: DeformationSystem | None = None) -> SearchResult:
    """Grow chains of lifts order by order up to max_order.

    Exhaustive strategy (prime fields) follows every extension point, so
    termination at order N certifies that every chain obstructs at N+1.
    Greedy strategy (any field) backtracks over a bounded candidate set
    and its terminations are strategy-limited evidence, not proof.
    """
    cfg = ClassifyConfig(max_order=max_order, strategy=strategy,
                         point_budget=point_budget, branch_budget=branch_budget)
    if system is None:
        system = DeformationSystem(base, base)
    if base.algebra.hereditary:
        return _hereditary_search(base, system, cfg)
    if strategy is None:
        strategy = "exhaustive" if base.field.p is not None else "greedy"
    if strategy == "exhaustive":
        return _exhaustive_search(base, system, cfg)
    if strategy == "greedy":
        return _greedy_search(base, system, cfg)
    raise ValueError(f"unknown strategy {strategy!r}")


# ----------------------------------------------------------------------
# reports


@dataclass
class Verdict:
    type: str  # point | finite | power_series | inconclusive | out_of_scope
    n: int | None = None
    proved: bool | None = None
    max_order_checked: int | None = None
    reason: str | None = None


@dataclass
class Checks:
    hom_top_dim: int | None = None
    ext_top_dim: int | None = None
    sigma_nilpotent: bool | None = None
    first_order_nontrivial: bool | None = None


@dataclass
class ClassificationReport:
    input_digest: str
    field: object
    module_name: str
    tangent_dim: int
    verdict: Verdict
    ladder: Ladder | None
    checks: Checks
    notes: list

    @property
    def ladder_matrices(self) -> list:
        """Per order 1..N, the coefficient matrix of each arrow at that order."""
        if self.ladder is None:
            return []
        return self.ladder.coefficient_tuples()


def source_digest(source: SourceFile) -> str:
    """Digest of the canonical printing, stable under comments and spacing."""
    return hashlib.sha256(print_source(source).encode("utf-8")).hexdigest()


def stable_end_note(v: Representation) -> str:
    if v.algebra.hereditary:
        return "stable endomorphism check not applicable without truncation"
    dim = hom_stable(v, v)
    note = f"stable endomorphism dimension: {dim}"
    if dim == 1:
        note += " (advisory: the one-dimensional case, weak and full deformations agree)"
    return note


def _top_checks(ladder: Ladder, base: Representation) -> tuple:
    top = as_representation(ladder.top)
    hom_top = hom_dim(top, base)
    ext_top = ext1_dim(top, base, backend="all")
    return hom_top, ext_top


def classify(source: SourceFile, module_name: str,
             config: ClassifyConfig | None = None) -> ClassificationReport:
    """Full pipeline: tangent gate, ladder search, side conditions, verdict."""
    cfg = config or ClassifyConfig()
    if module_name not in source.modules:
        raise ValueError(f"no module named {module_name!r} in input")
    from .algebra import PresentedAlgebra

    algebra = PresentedAlgebra.from_source(source)
    rep = Representation.from_module_def(algebra, source.modules[module_name])
    bad = validate(rep)
    if bad:
        raise ValueError(f"module {module_name!r} violates relations: {', '.join(bad)}")

    digest = source_digest(source)
    notes = []
    notes.append("assumes a weak universal deformation ring exists; "
                 "the tangent-dimension gate below is the computable surrogate")
    system = DeformationSystem(rep, rep)
    tangent = tangent_dimension(rep)
    notes.append(f"tangent dimension: {tangent}")
    notes.append(stable_end_note(rep))

    def report(verdict, ladder=None, checks=None, extra=()):
        notes.extend(extra)
        return ClassificationReport(
            input_digest=digest,
            field=rep.field,
            module_name=module_name,
            tangent_dim=tangent,
            verdict=verdict,
            ladder=ladder,
            checks=checks or Checks(),
            notes=notes,
        )

    if tangent == 0:
        return report(Verdict("point"),
                      extra=["no first-order deformations: the ring is the base field"])
    if tangent >= 2:
        reason = (f"tangent dimension {tangent} is at least 2: "
                  "the deformation ring need not be a quotient of a power series ring in one variable")
        return report(Verdict("out_of_scope", reason=reason), extra=[reason])

    search = ladder_search(rep, max_order=cfg.max_order, strategy=cfg.strategy,
                           point_budget=cfg.point_budget, branch_budget=cfg.branch_budget,
                           system=system)
    notes.extend(search.notes)
    ladder = search.ladder

    if search.kind == "unobstructed":
        hom_top, ext_top = _top_checks(ladder, rep)
        transcript = verify_ladder(ladder, system=system)
        notes.extend(transcript.lines())
        checks = Checks(hom_top_dim=hom_top, ext_top_dim=ext_top,
                        sigma_nilpotent=sigma_checks_pass(transcript),
                        first_order_nontrivial=nontriviality_checks_pass(transcript))
        return report(Verdict("power_series", proved=True), ladder, checks)

    if search.kind == "reached_bound":
        hom_top, ext_top = _top_checks(ladder, rep)
        transcript = verify_ladder(ladder, system=system)
        notes.extend(transcript.lines())
        checks = Checks(hom_top_dim=hom_top, ext_top_dim=ext_top,
                        sigma_nilpotent=sigma_checks_pass(transcript),
                        first_order_nontrivial=nontriviality_checks_pass(transcript))
        return report(Verdict("power_series", proved=False, max_order_checked=cfg.max_order),
                      ladder, checks,
                      extra=[f"no obstruction found up to order {cfg.max_order}; "
                             "the classification is evidence, not proof"])

    # terminated
    n = search.terminated_at
    if n == 0 or ladder is None:
        # unreachable when the tangent gate passed, kept for robustness
        return report(Verdict("point"),
                      extra=["no nontrivial first-order lift: the ring is the base field"])
    if search.obstruction is not None:
        ob = search.obstruction
        notes.append(f"obstruction at order {ob.order}: "
                     f"rank {ob.rank_coefficient} vs augmented rank {ob.rank_augmented}")
    hom_top, ext_top = _top_checks(ladder, rep)
    transcript = verify_ladder(ladder, system=system)
    notes.extend(transcript.lines())
    checks = Checks(hom_top_dim=hom_top, ext_top_dim=ext_top,
                    sigma_nilpotent=sigma_checks_pass(transcript),
                    first_order_nontrivial=nontriviality_checks_pass(transcript))
    failures = []
    if hom_top != 1:
        failures.append(f"hom_top_dim = {hom_top} (need 1)")
    if ext_top != 0:
        failures.append(f"ext_top_dim = {ext_top} (need 0)")
    if not transcript.ok:
        failures.append("ladder certificate checks failed")
    if failures:
        reason = "side conditions at the ladder top fail: " + "; ".join(failures)
        return report(Verdict("inconclusive", reason=reason), ladder, checks, extra=[reason])
    if not search.exhaustive:
        return report(Verdict("finite", n=n, proved=False), ladder, checks,
                      extra=["finite verdict is strategy-limited: "
                             "greedy termination does not certify that every chain obstructs"])
    return report(Verdict("finite", n=n, proved=True), ladder, checks)


def sigma_checks_pass(transcript) -> bool:
    sigma_names = {"sigma_is_composite", "sigma_commutes", "sigma_nilpotent",
                   "sigma_power_nonzero", "kernel_is_base_witness",
                   "image_power_is_base_witness"}
    return all(c.ok for c in transcript.checks if c.name in sigma_names)


def nontriviality_checks_pass(transcript) -> bool:
    return all(c.ok for c in transcript.checks if c.name == "first_order_nontrivial")

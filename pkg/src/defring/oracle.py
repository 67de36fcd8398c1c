"""Brute-force ground truth over small prime fields.

Enumerates every coefficient tuple of a lift to a given order and keeps
the ones whose residuals all vanish, independently of the incremental
engine.  Intended for cross-checking on small cases; the point count is
p to the power (entries per arrow times order).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .classify import BudgetExceeded
from .lift import Lift, Obstruction, as_representation, extend_step, is_valid
from .linalg import Matrix, in_row_span
from .rep import DeformationSystem, Representation, iso_test

DEFAULT_BUDGET = 10**7


def coefficient_slots(v: Representation) -> list:
    """Matrix entry positions of one degree, in arrow then row-major order."""
    slots = []
    for a in v.algebra.quiver.arrows:
        for r in range(v.dims[a.target]):
            for c in range(v.dims[a.source]):
                slots.append((a.name, r, c))
    return slots


def lift_from_point(v: Representation, order: int, point: tuple) -> Lift:
    """Rebuild a lift from the flat integer tuple (degrees 1..order)."""
    field = v.field
    slots = coefficient_slots(v)
    assert len(point) == len(slots) * order
    coeffs = {a.name: [v.mats[a.name]] for a in v.algebra.quiver.arrows}
    pos = 0
    for _ in range(order):
        entries = {a.name: [[field.zero()] * v.dims[a.source] for _ in range(v.dims[a.target])]
                   for a in v.algebra.quiver.arrows}
        for name, r, c in slots:
            entries[name][r][c] = field.scalar(point[pos])
            pos += 1
        for a in v.algebra.quiver.arrows:
            coeffs[a.name].append(
                Matrix.from_rows(field, entries[a.name]) if v.dims[a.target]
                else Matrix.zeros(field, 0, v.dims[a.source]))
    return Lift(v, order, coeffs)


def point_from_lift(lift: Lift) -> tuple:
    """Flatten a lift's coefficients of degrees 1..order to residues."""
    slots = coefficient_slots(lift.base)
    out = []
    for j in range(1, lift.order + 1):
        for name, r, c in slots:
            out.append(lift.coeffs[name][j][r, c].value)
    return tuple(out)


def _valid_points(v: Representation, order: int, budget: int) -> tuple:
    field = v.field
    if field.p is None:
        raise ValueError("oracle enumeration needs a prime field")
    slots = coefficient_slots(v)
    total = field.p ** (len(slots) * order)
    if total > budget:
        raise BudgetExceeded("oracle enumeration", total, budget)
    valid = []
    for point in itertools.product(range(field.p), repeat=len(slots) * order):
        if is_valid(lift_from_point(v, order, point)):
            valid.append(point)
    return total, valid


def _first_degree_nontrivial(v: Representation, system: DeformationSystem,
                             points: list) -> int:
    slots = coefficient_slots(v)
    cob = system.coboundary_space()
    field = v.field
    count = 0
    for point in points:
        first = tuple(field.scalar(c) for c in point[: len(slots)])
        if not in_row_span(cob, first):
            count += 1
    return count


@dataclass
class EnumerationResult:
    order: int
    total_points: int
    valid_points: list  # flat residue tuples, lexicographically sorted
    nontrivial_count: int  # valid points whose degree-1 part is not a coboundary
    iso_classes: list  # lists of valid points, grouped by module isomorphism
    unknown_points: list  # points whose comparison stayed inconclusive


def valid_point_set(v: Representation, order: int,
                    budget: int = DEFAULT_BUDGET) -> list:
    """Just the sorted valid coefficient tuples, skipping iso grouping."""
    return _valid_points(v, order, budget)[1]


def _rank_profile(rep: Representation) -> tuple:
    """Iso invariant used to avoid pairwise tests across obvious non-isos.

    A module isomorphism conjugates each arrow matrix by invertible maps,
    so ranks of arrow matrices (and of arrow powers on loops) must agree.
    """
    from .linalg import rank

    parts = [rep.dim_vector]
    for a in rep.algebra.quiver.arrows:
        m = rep.mats[a.name]
        if a.source == a.target:
            power = m
            ranks = []
            while not power.is_zero() and len(ranks) < rep.dims[a.source]:
                ranks.append(rank(power))
                power = power * m
            parts.append((a.name, tuple(ranks)))
        else:
            parts.append((a.name, rank(m)))
    return tuple(parts)


def enumerate_lifts(v: Representation, order: int,
                    budget: int = DEFAULT_BUDGET) -> EnumerationResult:
    """Exhaustively test every coefficient tuple up to the given order."""
    total, valid = _valid_points(v, order, budget)
    system = DeformationSystem(v, v)
    nontrivial = _first_degree_nontrivial(v, system, valid)
    buckets = {}  # rank profile -> [(representative Representation, [points])]
    unknown = []
    ordered_classes = []
    for point in valid:
        rep = as_representation(lift_from_point(v, order, point))
        classes = buckets.setdefault(_rank_profile(rep), [])
        placed = False
        inconclusive = False
        for entry in classes:
            result = iso_test(rep, entry[0])
            if result.kind == "iso":
                entry[1].append(point)
                placed = True
                break
            if result.kind == "unknown":
                inconclusive = True
        if placed:
            continue
        if inconclusive:
            unknown.append(point)
        else:
            entry = (rep, [point])
            classes.append(entry)
            ordered_classes.append(entry)
    return EnumerationResult(
        order=order,
        total_points=total,
        valid_points=valid,
        nontrivial_count=nontrivial,
        iso_classes=[entry[1] for entry in ordered_classes],
        unknown_points=unknown,
    )


def oracle_max_order(v: Representation, max_order: int,
                     budget: int = DEFAULT_BUDGET) -> int:
    """Largest order up to the cap with a valid lift whose degree-1 part is nontrivial.

    A valid lift truncates to a valid lift with the same degree-1 part,
    so the first order with no nontrivial valid point settles all larger
    ones and the scan can stop there.
    """
    system = DeformationSystem(v, v)
    best = 0
    for order in range(1, max_order + 1):
        _, valid = _valid_points(v, order, budget)
        if _first_degree_nontrivial(v, system, valid) == 0:
            break
        best = order
    return best


def incremental_valid_points(v: Representation, order: int,
                             budget: int = DEFAULT_BUDGET) -> list:
    """Valid point sets per order 1..order via the incremental extension engine.

    Seeds from every first-order cocycle point, trivial ones included,
    so the sets are directly comparable with enumerate_lifts output.
    """
    field = v.field
    if field.p is None:
        raise ValueError("incremental point sets need a prime field")
    system = DeformationSystem(v, v)
    z = system.cocycles()
    count = field.p ** len(z)
    if count > budget:
        raise BudgetExceeded("first-order point enumeration", count, budget)
    from .classify import solution_points
    from .linalg import AffineSolutionSpace

    first = AffineSolutionSpace(True, system.layout.zero_vector(), list(z))
    frontier = [Lift.first_order(v, system.layout.unpack(vec))
                for vec in solution_points(first, field)]
    out = [sorted(point_from_lift(l) for l in frontier)]
    while len(out) < order:
        next_frontier = []
        for lift in frontier:
            step = extend_step(lift, system)
            if isinstance(step, Obstruction):
                continue  # obstructed chain contributes nothing further
            needed = len(next_frontier) + field.p ** len(step.solution.kernel)
            if needed > budget:
                raise BudgetExceeded("incremental frontier", needed, budget)
            for vec in solution_points(step.solution, field):
                next_frontier.append(lift.extended(system.layout.unpack(vec)))
        frontier = next_frontier
        out.append(sorted(point_from_lift(l) for l in frontier))
    return out

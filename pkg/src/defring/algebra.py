"""Finite dimensional quiver algebras presented by relations and truncation.

A presentation is a quiver, a list of relations (linear combinations of
parallel paths) and a truncation bound m that kills every path of length m.
The algebra is the path algebra modulo the ideal generated by the relations
and the length-m paths; truncation makes it finite dimensional, with a
canonical basis of path representatives.

Relation-free inputs without a truncation bound are kept in hereditary mode:
no basis is materialized (the path algebra may be infinite dimensional) and
the operations that need the radical filtration refuse to run.
"""

from __future__ import annotations

from .dsl import Relation
from .fields import FieldSpec
from .linalg import Matrix, rref, vec_is_zero
from .quiver import Path, Quiver


class HereditaryModeUnsupported(Exception):
    """Raised by operations that need a finite dimensional presented algebra."""


class PresentedAlgebra:
    """A presented quiver algebra with its canonical path basis.

    In truncated mode the basis consists of the path representatives left
    over after row-reducing the relation span in degree-lex path order, and
    reduce_path projects any path onto that basis.  Multiplication is path
    concatenation followed by reduction.
    """

    def __init__(self, field: FieldSpec, quiver: Quiver, relations: list, truncate: int | None):
        if truncate is None and relations:
            raise ValueError("relations require a truncation bound")
        self.field = field
        self.quiver = quiver
        self.relations = list(relations)
        self.truncate = truncate
        self.basis: list | None = None
        self.basis_index: dict | None = None
        self._reduction: dict | None = None
        if truncate is not None:
            self._build()

    @classmethod
    def from_source(cls, src) -> "PresentedAlgebra":
        return cls(src.field, src.quiver, src.relations, src.truncate)

    @property
    def hereditary(self) -> bool:
        return self.truncate is None

    def __eq__(self, other):
        return (
            isinstance(other, PresentedAlgebra)
            and self.field == other.field
            and self.quiver == other.quiver
            and self.truncate == other.truncate
            and self.relations == other.relations
        )

    def __repr__(self):
        mode = "hereditary" if self.hereditary else f"truncated at {self.truncate}"
        return f"PresentedAlgebra({self.quiver!r}, {mode})"

    # ------------------------------------------------------------------

    def generating_relations(self) -> list:
        """Ideal generators: the declared relations plus all length-m paths."""
        if self.hereditary:
            return []
        gens = list(self.relations)
        one = self.field.one()
        for p in self.quiver.paths_of_length(self.truncate):
            gens.append(Relation(((one, p),), p.source, p.target))
        return gens

    @property
    def dimension(self) -> int:
        if self.hereditary:
            raise HereditaryModeUnsupported(
                "hereditary mode materializes no finite basis; add a truncate bound")
        return len(self.basis)

    # ------------------------------------------------------------------
    # basis construction (truncated mode)

    def _build(self):
        m = self.truncate
        paths = self.quiver.paths_up_to(m - 1)
        index = {p: i for i, p in enumerate(paths)}
        n = len(paths)
        zero = self.field.zero()
        generators = []
        seen = set()
        for rel in self.relations:
            suffixes = [y for y in paths if y.target == rel.source]
            prefixes = [x for x in paths if x.source == rel.target]
            for y in suffixes:
                for x in prefixes:
                    vec = [zero] * n
                    hit = False
                    for coeff, p in rel.terms:
                        arrows = y.arrows + p.arrows + x.arrows
                        if len(arrows) < m:
                            full = Path(arrows, y.source, x.target)
                            vec[index[full]] = vec[index[full]] + coeff
                            hit = True
                    if hit and not vec_is_zero(vec):
                        key = tuple((i, s.value) for i, s in enumerate(vec) if not s.is_zero())
                        if key not in seen:
                            seen.add(key)
                            generators.append(vec)
        if generators:
            ech = rref(Matrix.from_rows(self.field, generators))
            pivots = ech.pivots
            rows = ech.matrix
        else:
            pivots = []
            rows = Matrix.zeros(self.field, 0, n)
        pivot_set = set(pivots)
        self.basis = [p for i, p in enumerate(paths) if i not in pivot_set]
        self.basis_index = {p: i for i, p in enumerate(self.basis)}
        free_cols = [i for i in range(n) if i not in pivot_set]
        free_positions = {col: j for j, col in enumerate(free_cols)}
        # pivot path -> its expression in basis coordinates
        reduction = {}
        for r, c in enumerate(pivots):
            expr = [zero] * len(self.basis)
            for i, j in free_positions.items():
                coeff = rows[r, i]
                if not coeff.is_zero():
                    expr[j] = -coeff
            reduction[paths[c]] = tuple(expr)
        self._reduction = reduction
        self._paths = paths
        for rel in self.relations:
            if not vec_is_zero(self.reduce_terms(rel.terms)):
                raise AssertionError(f"relation {rel.label()} does not reduce to zero")

    def reduce_path(self, path: Path) -> tuple:
        """Coordinates of a path in the canonical basis (zero if truncated away)."""
        if self.hereditary:
            raise HereditaryModeUnsupported("no basis in hereditary mode")
        zero = self.field.zero()
        if path.length >= self.truncate:
            return tuple([zero] * len(self.basis))
        if path in self._reduction:
            return self._reduction[path]
        out = [zero] * len(self.basis)
        out[self.basis_index[path]] = self.field.one()
        return tuple(out)

    def reduce_terms(self, terms) -> tuple:
        """Reduce a linear combination of paths to basis coordinates."""
        zero = self.field.zero()
        out = [zero] * len(self.basis)
        for coeff, p in terms:
            if coeff.is_zero():
                continue
            for j, x in enumerate(self.reduce_path(p)):
                if not x.is_zero():
                    out[j] = out[j] + coeff * x
        return tuple(out)

    def multiply_basis(self, first: Path, then: Path) -> tuple:
        """Product of two basis paths, applied first-then, in basis coordinates."""
        if first.target != then.source:
            return tuple([self.field.zero()] * len(self.basis))
        return self.reduce_path(Path(first.arrows + then.arrows, first.source, then.target))

    # ------------------------------------------------------------------

    def left_projective(self, v: str):
        """The projective module generated at a vertex.

        Its basis is the set of canonical basis paths starting at v; an
        arrow acts by extending the path at its target end and reducing.
        """
        from .rep import Representation

        if self.hereditary:
            raise HereditaryModeUnsupported("projectives need a truncated presentation")
        if v not in self.quiver.vertex_set:
            raise KeyError(v)
        basis_v = [p for p in self.basis if p.source == v]
        by_vertex = {w: [p for p in basis_v if p.target == w] for w in self.quiver.vertices}
        slot = {}
        for w, plist in by_vertex.items():
            for i, p in enumerate(plist):
                slot[p] = i
        dims = {w: len(by_vertex[w]) for w in self.quiver.vertices}
        mats = {}
        for a in self.quiver.arrows:
            cols = []
            for p in by_vertex[a.source]:
                extended = Path(p.arrows + (a,), p.source, a.target)
                reduced = self.reduce_path(extended)
                col = [self.field.zero()] * dims[a.target]
                for j, coeff in enumerate(reduced):
                    if not coeff.is_zero():
                        q = self.basis[j]
                        assert q.source == v and q.target == a.target
                        col[slot[q]] = coeff
                cols.append(col)
            mats[a.name] = Matrix.from_columns(self.field, dims[a.target], cols)
        return Representation(self, dims, mats)

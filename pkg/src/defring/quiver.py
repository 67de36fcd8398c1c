"""Quivers and composable paths.

A path stores its arrows in application order: path (a, b) means "a first,
then b", so it runs from source(a) to target(b) and acts on a representation
as M_b composed with M_a (column vector convention, matrices multiply on
the left).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """A composable arrow sequence, or a trivial path at a vertex."""

    arrows: tuple
    source: str
    target: str

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls((), vertex, vertex)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def then(self, other: "Path") -> "Path":
        """self first, then other; requires target(self) == source(other)."""
        if self.target != other.source:
            raise ValueError(f"paths do not compose: {self} then {other}")
        return Path(self.arrows + other.arrows, self.source, other.target)

    def label(self) -> str:
        if not self.arrows:
            return f"e_{self.source}"
        return "*".join(a.name for a in self.arrows)

    def __repr__(self):
        return self.label()


class Quiver:
    """A finite quiver with named vertices and arrows, in input order."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.vertex_set = set(self.vertices)
        if len(self.vertex_set) != len(self.vertices):
            raise ValueError("duplicate vertex")
        self.arrow_by_name = {}
        for a in self.arrows:
            if a.name in self.arrow_by_name:
                raise ValueError(f"duplicate arrow {a.name}")
            if a.source not in self.vertex_set or a.target not in self.vertex_set:
                raise ValueError(f"arrow {a.name} uses an unknown vertex")
            self.arrow_by_name[a.name] = a

    def arrows_from(self, v: str):
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: str):
        return [a for a in self.arrows if a.target == v]

    def path(self, arrow_names) -> Path:
        """Compose named arrows in application order."""
        arrows = []
        for name in arrow_names:
            if name not in self.arrow_by_name:
                raise KeyError(name)
            arrows.append(self.arrow_by_name[name])
        if not arrows:
            raise ValueError("empty path needs a vertex")
        p = Path((arrows[0],), arrows[0].source, arrows[0].target)
        for a in arrows[1:]:
            p = p.then(Path((a,), a.source, a.target))
        return p

    def paths_up_to(self, max_length: int) -> list:
        """All paths of length <= max_length in degree-lex order.

        Within a fixed length the order is lexicographic in arrow input
        order, which falls out of extending shorter paths in order.
        """
        out = [Path.trivial(v) for v in self.vertices]
        frontier = list(out)
        for _ in range(max_length):
            nxt = []
            for p in frontier:
                for a in self.arrows:
                    if a.source == p.target:
                        nxt.append(p.then(Path((a,), a.source, a.target)))
            out.extend(nxt)
            frontier = nxt
            if not frontier:
                break
        return out

    def paths_of_length(self, length: int) -> list:
        return [p for p in self.paths_up_to(length) if p.length == length]

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __repr__(self):
        return f"Quiver(vertices={list(self.vertices)}, arrows={[a.name for a in self.arrows]})"

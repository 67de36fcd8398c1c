"""Representations of a presented algebra and their homological invariants.

A representation assigns a finite dimensional space to each vertex and a
matrix to each arrow (shape dim target x dim source, column convention).
Intertwiners, radicals, projective covers, syzygies and three independent
routes to Ext^1 live here; the first-order deformation machinery shared
with the lifting engine is the DeformationSystem at the bottom.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .algebra import HereditaryModeUnsupported, PresentedAlgebra
from .fields import FieldSpec
from .linalg import (
    Matrix,
    complement_representatives,
    in_row_span,
    kernel_basis,
    rank,
    reduce_mod_rows,
    row_space,
    solve_affine,
    solve_matrix,
)
from .quiver import Path


class NotHereditary(Exception):
    pass


class NotInvariant(Exception):
    pass


class Representation:
    """One matrix per arrow; always validated for shape, not for relations."""

    def __init__(self, algebra: PresentedAlgebra, dims: dict, mats: dict):
        self.algebra = algebra
        self.field = algebra.field
        quiver = algebra.quiver
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        for v, d in self.dims.items():
            if d < 0:
                raise ValueError(f"negative dimension at vertex {v}")
        self.mats = {}
        for a in quiver.arrows:
            m = mats.get(a.name)
            if m is None:
                m = Matrix.zeros(self.field, self.dims[a.target], self.dims[a.source])
            if (m.nrows, m.ncols) != (self.dims[a.target], self.dims[a.source]):
                raise ValueError(
                    f"matrix for {a.name} must be {self.dims[a.target]}x{self.dims[a.source]}, "
                    f"got {m.nrows}x{m.ncols}")
            self.mats[a.name] = m

    @classmethod
    def from_module_def(cls, algebra: PresentedAlgebra, mod) -> "Representation":
        return cls(algebra, mod.dims, mod.mats)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def dim_vector(self) -> tuple:
        return tuple(self.dims[v] for v in self.algebra.quiver.vertices)

    def path_matrix(self, path: Path) -> Matrix:
        """Evaluate a path: matrices compose right to left in application order."""
        out = Matrix.identity(self.field, self.dims[path.source])
        for a in path.arrows:
            out = self.mats[a.name] * out
        return out

    def terms_value(self, terms) -> Matrix:
        first = terms[0][1]
        out = Matrix.zeros(self.field, self.dims[first.target], self.dims[first.source])
        for coeff, p in terms:
            if not coeff.is_zero():
                out = out + self.path_matrix(p).scale(coeff)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and self.algebra == other.algebra
            and self.dims == other.dims
            and self.mats == other.mats
        )

    def __repr__(self):
        return f"Representation(dims={self.dims})"


def validate(rep: Representation) -> list:
    """Labels of violated ideal generators; empty means the module is valid."""
    bad = []
    for rel in rep.algebra.generating_relations():
        if not rep.terms_value(rel.terms).is_zero():
            bad.append(rel.label())
    return bad


def direct_sum(m: Representation, n: Representation) -> Representation:
    return direct_sum_many([m, n])


def direct_sum_many(parts: list) -> Representation:
    assert parts
    algebra = parts[0].algebra
    field = algebra.field
    for p in parts[1:]:
        if p.algebra != algebra:
            raise ValueError("direct sum across different algebras")
    dims = {v: sum(p.dims[v] for p in parts) for v in algebra.quiver.vertices}
    mats = {}
    for a in algebra.quiver.arrows:
        zero = Matrix.zeros(field, dims[a.target], dims[a.source])
        data = [list(row) for row in zero.rows()]
        r0 = c0 = 0
        for p in parts:
            block = p.mats[a.name]
            for i in range(block.nrows):
                for j in range(block.ncols):
                    data[r0 + i][c0 + j] = block[i, j]
            r0 += p.dims[a.target]
            c0 += p.dims[a.source]
        mats[a.name] = Matrix.from_rows(field, data) if dims[a.target] else Matrix.zeros(field, 0, dims[a.source])
    return Representation(algebra, dims, mats)


# ----------------------------------------------------------------------
# flat coordinates for tuples of matrices


class MapLayout:
    """Row-major flat coordinates for an ordered family of matrices."""

    def __init__(self, field: FieldSpec, shapes: list):
        self.field = field
        self.shapes = list(shapes)  # (key, nrows, ncols)
        self.offsets = {}
        total = 0
        for key, nrows, ncols in self.shapes:
            self.offsets[key] = total
            total += nrows * ncols
        self.total = total

    def pack(self, mats: dict) -> tuple:
        out = []
        for key, nrows, ncols in self.shapes:
            m = mats[key]
            assert (m.nrows, m.ncols) == (nrows, ncols)
            out.extend(m.data)
        return tuple(out)

    def unpack(self, vec) -> dict:
        assert len(vec) == self.total
        out = {}
        pos = 0
        for key, nrows, ncols in self.shapes:
            size = nrows * ncols
            out[key] = Matrix(self.field, nrows, ncols, list(vec[pos : pos + size]))
            pos += size
        return out

    def zero_vector(self) -> tuple:
        return tuple([self.field.zero()] * self.total)


# ----------------------------------------------------------------------
# Hom


@dataclass
class HomSpace:
    """Echelon basis of the intertwiner space, as per-vertex matrices."""

    source: Representation
    target: Representation
    layout: MapLayout
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> dict:
        vec = list(self.layout.zero_vector())
        for c, b in zip(coeffs, self.basis):
            if not c.is_zero():
                packed = self.layout.pack(b)
                vec = [x + c * y for x, y in zip(vec, packed)]
        return self.layout.unpack(tuple(vec))


def _same_algebra(m: Representation, n: Representation):
    if m.algebra != n.algebra:
        raise ValueError("representations live over different presentations")


def hom_basis(m: Representation, n: Representation) -> HomSpace:
    """Solve the intertwining equations T_t M_a = N_a T_s for all arrows.

    Relations impose nothing extra: any arrow-wise intertwiner between
    valid modules automatically respects them.
    """
    _same_algebra(m, n)
    quiver = m.algebra.quiver
    field = m.field
    layout = MapLayout(field, [(v, n.dims[v], m.dims[v]) for v in quiver.vertices])
    rows = []
    zero = field.zero()
    for a in quiver.arrows:
        ma, na = m.mats[a.name], n.mats[a.name]
        et, ds = n.dims[a.target], m.dims[a.source]
        dt_cols = m.dims[a.target]
        es = n.dims[a.source]
        off_t = layout.offsets[a.target]
        off_s = layout.offsets[a.source]
        for i in range(et):
            for j in range(ds):
                row = [zero] * layout.total
                # (T_t M_a)[i, j] = sum_k T_t[i, k] M_a[k, j]
                for k in range(dt_cols):
                    coeff = ma[k, j]
                    if not coeff.is_zero():
                        row[off_t + i * dt_cols + k] = row[off_t + i * dt_cols + k] + coeff
                # (N_a T_s)[i, j] = sum_l N_a[i, l] T_s[l, j]
                for l in range(es):
                    coeff = na[i, l]
                    if not coeff.is_zero():
                        row[off_s + l * m.dims[a.source] + j] = row[off_s + l * m.dims[a.source] + j] - coeff
                rows.append(row)
    if rows:
        eq = Matrix.from_rows(field, rows)
    else:
        eq = Matrix.zeros(field, 0, layout.total)
    basis = [layout.unpack(v) for v in kernel_basis(eq)]
    return HomSpace(m, n, layout, basis)


def hom_dim(m: Representation, n: Representation) -> int:
    return hom_basis(m, n).dim


def is_homomorphism(m: Representation, n: Representation, maps: dict) -> bool:
    for a in m.algebra.quiver.arrows:
        if not (maps[a.target] * m.mats[a.name] - n.mats[a.name] * maps[a.source]).is_zero():
            return False
    return True


# ----------------------------------------------------------------------
# isomorphism testing


@dataclass
class IsoResult:
    kind: str  # "iso" | "not_iso" | "unknown"
    witness: dict | None = None
    reason: str | None = None


def _invertible(maps: dict, dims: dict) -> bool:
    for v, d in dims.items():
        if maps[v].nrows != maps[v].ncols:
            return False
        if rank(maps[v]) != d:
            return False
    return True


def iso_test(m: Representation, n: Representation, *, point_budget: int = 10**6,
             trials: int = 200, seed: int = 20240811) -> IsoResult:
    """Certified Iso or NotIso where possible, Unknown otherwise.

    NotIso is only ever certified by a dimension-vector mismatch or by
    asymmetric Hom dimensions; a fruitless search is reported as Unknown.
    """
    _same_algebra(m, n)
    field = m.field
    quiver = m.algebra.quiver
    if m.dim_vector != n.dim_vector:
        return IsoResult("not_iso", reason="dimension vectors differ")
    if m.total_dim == 0:
        return IsoResult("iso", witness={v: Matrix.zeros(field, 0, 0) for v in quiver.vertices})
    if m.dims == n.dims and m.mats == n.mats:
        return IsoResult("iso", witness={v: Matrix.identity(field, m.dims[v]) for v in quiver.vertices})
    hom_mn = hom_basis(m, n)
    hom_nm = hom_basis(n, m)
    if hom_mn.dim != hom_nm.dim:
        return IsoResult("not_iso", reason=f"dim Hom asymmetry {hom_mn.dim} vs {hom_nm.dim}")
    h = hom_mn.dim
    if h == 0:
        return IsoResult("unknown")

    def check(candidate: dict):
        if _invertible(candidate, m.dims) and is_homomorphism(m, n, candidate):
            return IsoResult("iso", witness=candidate)
        return None

    if field.is_prime_field and field.p ** h <= point_budget:
        for coeffs in itertools.product(range(field.p), repeat=h):
            if all(c == 0 for c in coeffs):
                continue
            hit = check(hom_mn.element([field.scalar(c) for c in coeffs]))
            if hit:
                return hit
        return IsoResult("unknown")
    # rationals, or a prime field too large to sweep: deterministic trials
    probes = []
    for i in range(h):
        coeffs = [field.zero()] * h
        coeffs[i] = field.one()
        probes.append(coeffs)
    probes.append([field.one()] * h)
    rng = random.Random(seed)
    for _ in range(trials):
        probes.append([field.scalar(rng.randint(-3, 3)) for _ in range(h)])
    for coeffs in probes:
        hit = check(hom_mn.element(coeffs))
        if hit:
            return hit
    return IsoResult("unknown")


# ----------------------------------------------------------------------
# radical, top, subquotients


def _require_truncated(algebra: PresentedAlgebra, what: str):
    if algebra.hereditary:
        raise HereditaryModeUnsupported(
            f"{what} needs the radical filtration of a truncated presentation")


def radical_subspaces(m: Representation) -> dict:
    """Echelon bases of the arrow-image subspaces (the radical, J nilpotent)."""
    _require_truncated(m.algebra, "radical")
    out = {}
    for v in m.algebra.quiver.vertices:
        vectors = []
        for a in m.algebra.quiver.arrows_into(v):
            mat = m.mats[a.name]
            for j in range(mat.ncols):
                vectors.append(mat.column(j))
        ech = row_space(vectors, m.field, m.dims[v])
        out[v] = [ech.matrix.row(i) for i in range(ech.rank)]
    return out


def sub_from_maps(m: Representation, bases: dict) -> Representation:
    """Subrepresentation spanned by the given vectors; must be arrow-stable."""
    field = m.field
    incl = {}
    dims = {}
    for v in m.algebra.quiver.vertices:
        vecs = bases.get(v, [])
        mat = Matrix.from_columns(field, m.dims[v], [list(x) for x in vecs])
        if vecs and rank(mat) != len(vecs):
            raise ValueError(f"vectors at vertex {v} are dependent")
        incl[v] = mat
        dims[v] = len(vecs)
    mats = {}
    for a in m.algebra.quiver.arrows:
        image = m.mats[a.name] * incl[a.source]
        x = solve_matrix(incl[a.target], image)
        if x is None:
            raise NotInvariant(f"subspace not stable under arrow {a.name}")
        mats[a.name] = x
    return Representation(m.algebra, dims, mats)


def _quotient_with_projection(m: Representation, bases: dict):
    field = m.field
    ech = {}
    free = {}
    for v in m.algebra.quiver.vertices:
        e = row_space(bases.get(v, []), field, m.dims[v])
        ech[v] = e
        pivot_set = set(e.pivots)
        free[v] = [c for c in range(m.dims[v]) if c not in pivot_set]

    def project(v, vec):
        reduced = reduce_mod_rows(ech[v], vec)
        return tuple(reduced[c] for c in free[v])

    proj = {}
    for v in m.algebra.quiver.vertices:
        cols = []
        for j in range(m.dims[v]):
            unit = [field.zero()] * m.dims[v]
            unit[j] = field.one()
            cols.append(list(project(v, tuple(unit))))
        proj[v] = Matrix.from_columns(field, len(free[v]), cols)
    mats = {}
    for a in m.algebra.quiver.arrows:
        # stability check: each subspace vector must map into the target subspace
        for vec in bases.get(a.source, []):
            image = m.mats[a.name].apply(vec)
            if not in_row_span(ech[a.target], image):
                raise NotInvariant(f"subspace not stable under arrow {a.name}")
        mats[a.name] = proj[a.target] * m.mats[a.name] * _pseudo_section(m, free, a.source)
    dims = {v: len(free[v]) for v in m.algebra.quiver.vertices}
    quotient = Representation(m.algebra, dims, mats)
    return quotient, proj


def _pseudo_section(m: Representation, free: dict, v: str) -> Matrix:
    """Standard-basis lift of quotient coordinates (free coordinates of v)."""
    field = m.field
    cols = []
    for f in free[v]:
        unit = [field.zero()] * m.dims[v]
        unit[f] = field.one()
        cols.append(unit)
    return Matrix.from_columns(field, m.dims[v], cols)


def quotient_from_maps(m: Representation, bases: dict) -> Representation:
    return _quotient_with_projection(m, bases)[0]


def radical(m: Representation) -> Representation:
    return sub_from_maps(m, radical_subspaces(m))


def top(m: Representation) -> Representation:
    """M modulo its radical; every arrow acts by zero there."""
    t, _ = _quotient_with_projection(m, radical_subspaces(m))
    for a in m.algebra.quiver.arrows:
        assert t.mats[a.name].is_zero()
    return t


# ----------------------------------------------------------------------
# projective cover and syzygy


def projective_cover(m: Representation):
    """Smallest projective mapping onto M, with the covering homomorphism.

    One projective summand per top basis vector; the cover sends the
    generator of each summand to the chosen lift and extends along paths.
    """
    _require_truncated(m.algebra, "projective cover")
    algebra = m.algebra
    field = m.field
    quiver = algebra.quiver
    rad = radical_subspaces(m)
    lifts = []  # (vertex, standard-basis lift vector)
    for v in quiver.vertices:
        ech = row_space(rad[v], field, m.dims[v])
        pivot_set = set(ech.pivots)
        for c in range(m.dims[v]):
            if c not in pivot_set:
                unit = [field.zero()] * m.dims[v]
                unit[c] = field.one()
                lifts.append((v, tuple(unit)))
    summands = [algebra.left_projective(v) for v, _ in lifts]
    if summands:
        p = direct_sum_many(summands)
    else:
        p = Representation(algebra, {}, {})
    cover = {}
    basis_paths = {v: [q for q in algebra.basis if q.source == v] for v in quiver.vertices}
    for w in quiver.vertices:
        cols = []
        for (v, u), summand in zip(lifts, summands):
            for q in basis_paths[v]:
                if q.target == w:
                    cols.append(list(m.path_matrix(q).apply(u)))
        cover[w] = Matrix.from_columns(field, m.dims[w], cols)
        if rank(cover[w]) != m.dims[w]:
            raise AssertionError(f"cover not surjective at vertex {w}")
    return p, cover


def syzygy_data(m: Representation):
    p, cover = projective_cover(m)
    field = m.field
    incl = {}
    bases = {}
    for v in m.algebra.quiver.vertices:
        kern = kernel_basis(cover[v])
        bases[v] = kern
        incl[v] = Matrix.from_columns(field, p.dims[v], [list(k) for k in kern])
    omega = sub_from_maps(p, bases)
    return p, cover, omega, incl


def syzygy(m: Representation) -> Representation:
    """Kernel of the projective cover; dim = dim P - dim M."""
    return syzygy_data(m)[2]


# ----------------------------------------------------------------------
# Ext^1, three routes


def ext1_syzygy(m: Representation, n: Representation):
    """Ext^1 as Hom(syzygy, N) modulo restrictions of Hom(cover, N)."""
    _require_truncated(m.algebra, "syzygy route to Ext")
    p, cover, omega, incl = syzygy_data(m)
    hom_pn = hom_basis(p, n)
    hom_on = hom_basis(omega, n)
    layout = hom_on.layout
    image = []
    for t in hom_pn.basis:
        restricted = {v: t[v] * incl[v] for v in m.algebra.quiver.vertices}
        image.append(layout.pack(restricted))
    packed = [layout.pack(b) for b in hom_on.basis]
    reps = complement_representatives(packed, image, m.field, layout.total)
    dim = len(reps)
    return dim, [layout.unpack(v) for v in reps]


def ext1_hereditary(m: Representation, n: Representation) -> int:
    """Relation-free closed form via the bilinear form of the quiver."""
    if not m.algebra.hereditary:
        raise NotHereditary("closed form only valid without relations")
    _same_algebra(m, n)
    quiver = m.algebra.quiver
    arrows_term = sum(m.dims[a.source] * n.dims[a.target] for a in quiver.arrows)
    vertex_term = sum(m.dims[v] * n.dims[v] for v in quiver.vertices)
    return arrows_term - vertex_term + hom_dim(m, n)


def ext1_cocycle(m: Representation, n: Representation):
    """Ext^1 as first-order deformation cocycles modulo coboundaries."""
    sys = DeformationSystem(m, n)
    return sys.ext_dim_and_representatives()


def ext1_dim(m: Representation, n: Representation, backend: str = "cocycle") -> int:
    """Dimension of Ext^1; backend 'all' cross-checks every applicable route."""
    if backend == "cocycle":
        return ext1_cocycle(m, n)[0]
    if backend == "syzygy":
        return ext1_syzygy(m, n)[0]
    if backend == "hereditary":
        return ext1_hereditary(m, n)
    if backend == "all":
        dims = {"cocycle": ext1_cocycle(m, n)[0]}
        if m.algebra.hereditary:
            dims["hereditary"] = ext1_hereditary(m, n)
        else:
            dims["syzygy"] = ext1_syzygy(m, n)[0]
        values = set(dims.values())
        if len(values) != 1:
            raise AssertionError(f"Ext backends disagree: {dims}")
        return values.pop()
    raise ValueError(f"unknown backend {backend!r}")


# ----------------------------------------------------------------------
# stable Hom


def hom_stable(m: Representation, n: Representation) -> int:
    """dim Hom(M, N) minus the maps that factor through a projective.

    Every map factoring through any projective factors through the cover
    of N, so the image of Hom(M, P(N)) under postcomposition is exactly
    the projectively-trivial part.
    """
    _require_truncated(m.algebra, "stable Hom")
    _same_algebra(m, n)
    p, cover = projective_cover(n)
    hom_mn = hom_basis(m, n)
    hom_mp = hom_basis(m, p)
    layout = hom_mn.layout
    image = []
    for t in hom_mp.basis:
        composed = {v: cover[v] * t[v] for v in m.algebra.quiver.vertices}
        image.append(layout.pack(composed))
    return hom_mn.dim - row_space(image, m.field, layout.total).rank


# ----------------------------------------------------------------------
# first-order deformation system


class DeformationSystem:
    """The linear part of the relation equations around a pair (M, N).

    Unknowns are per-arrow matrices B_a of shape dim N(target) x
    dim M(source).  For every ideal generator the directional derivative
    replaces one arrow occurrence at a time by B, with N matrices to the
    left of the replacement and M matrices to the right.  The kernel is
    the cocycle space; for M == N it is also the space of valid
    first-order lift coefficients, and the same matrix drives every
    higher-order extension step.
    """

    def __init__(self, m: Representation, n: Representation):
        _same_algebra(m, n)
        self.m = m
        self.n = n
        self.field = m.field
        quiver = m.algebra.quiver
        self.quiver = quiver
        self.relations = m.algebra.generating_relations()
        self.layout = MapLayout(
            self.field,
            [(a.name, n.dims[a.target], m.dims[a.source]) for a in quiver.arrows],
        )
        rows = []
        zero = self.field.zero()
        for rel in self.relations:
            block_rows = n.dims[rel.target]
            block_cols = m.dims[rel.source]
            block = [
                [[zero] * self.layout.total for _ in range(block_cols)]
                for _ in range(block_rows)
            ]
            for coeff, path in rel.terms:
                if coeff.is_zero():
                    continue
                k = path.length
                prefixes = [Matrix.identity(self.field, m.dims[path.source])]
                for arrow in path.arrows:
                    prefixes.append(m.mats[arrow.name] * prefixes[-1])
                suffixes = [None] * (k + 1)
                suffixes[k] = Matrix.identity(self.field, n.dims[path.target])
                for i in range(k - 1, -1, -1):
                    suffixes[i] = suffixes[i + 1] * n.mats[path.arrows[i].name]
                for pos in range(k):
                    arrow = path.arrows[pos]
                    suf = suffixes[pos + 1]
                    pre = prefixes[pos]
                    off = self.layout.offsets[arrow.name]
                    b_cols = m.dims[arrow.source]
                    for r in range(block_rows):
                        for alpha in range(n.dims[arrow.target]):
                            left = coeff * suf[r, alpha]
                            if left.is_zero():
                                continue
                            for beta in range(b_cols):
                                for c in range(block_cols):
                                    right = pre[beta, c]
                                    if not right.is_zero():
                                        cell = block[r][c]
                                        idx = off + alpha * b_cols + beta
                                        cell[idx] = cell[idx] + left * right
            for r in range(block_rows):
                for c in range(block_cols):
                    rows.append(block[r][c])
        if rows:
            self.matrix = Matrix.from_rows(self.field, rows)
        else:
            self.matrix = Matrix.zeros(self.field, 0, self.layout.total)

    def cocycles(self) -> list:
        """Echelon basis of the kernel, as packed vectors."""
        return kernel_basis(self.matrix)

    def coboundary_vectors(self) -> list:
        """Images of elementary vertex maps under C -> C M - N C, packed."""
        out = []
        quiver = self.quiver
        for v in quiver.vertices:
            for i in range(self.n.dims[v]):
                for j in range(self.m.dims[v]):
                    mats = {}
                    for a in quiver.arrows:
                        b = Matrix.zeros(self.field, self.n.dims[a.target], self.m.dims[a.source])
                        data = [list(row) for row in b.rows()]
                        if a.target == v:
                            # (E_ij M_a)[r, c] = delta(r, i) M_a[j, c]
                            ma = self.m.mats[a.name]
                            for c in range(ma.ncols):
                                data[i][c] = data[i][c] + ma[j, c]
                        if a.source == v:
                            # (N_a E_ij)[r, c] = N_a[r, i] delta(c, j)
                            na = self.n.mats[a.name]
                            for r in range(na.nrows):
                                data[r][j] = data[r][j] - na[r, i]
                        mats[a.name] = (
                            Matrix.from_rows(self.field, data)
                            if data else Matrix.zeros(self.field, 0, self.m.dims[a.source])
                        )
                    out.append(self.layout.pack(mats))
        return out

    def coboundary_space(self):
        return row_space(self.coboundary_vectors(), self.field, self.layout.total)

    def ext_dim_and_representatives(self):
        z = self.cocycles()
        cob = self.coboundary_vectors()
        reps = complement_representatives(z, cob, self.field, self.layout.total)
        return len(reps), [self.layout.unpack(v) for v in reps]

    def is_coboundary(self, mats: dict) -> bool:
        return in_row_span(self.coboundary_space(), self.layout.pack(mats))

    def solve_step(self, rhs_blocks: list):
        """Solve D(B) = -(stacked residual blocks); same row order as the matrix."""
        rhs = []
        for rel, block in zip(self.relations, rhs_blocks):
            assert (block.nrows, block.ncols) == (self.n.dims[rel.target], self.m.dims[rel.source])
            for r in range(block.nrows):
                for c in range(block.ncols):
                    rhs.append(-block[r, c])
        return solve_affine(self.matrix, tuple(rhs))

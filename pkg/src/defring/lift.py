"""Lifts of a module to truncated polynomial coefficients, order by order.

A lift of order L replaces each arrow matrix A by a polynomial
A + B1 t + ... + BL t^L and demands that every ideal generator still
vanish modulo t^(L+1).  The t-coefficients of the generator values are the
residuals; the next coefficient tuple must solve a linear system whose
matrix is the first-order deformation system of the base module and whose
right hand side is the next residual.  Infeasibility is an obstruction and
carries a rank certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import Matrix, solve_matrix, rank
from .rep import DeformationSystem, Representation


class CheckFailed(Exception):
    """A ladder certificate check did not hold."""


class Lift:
    """Coefficient matrices per arrow, degrees 0..order; degree 0 is the base."""

    def __init__(self, base: Representation, order: int, coeffs: dict):
        assert order >= 0
        self.base = base
        self.order = order
        self.coeffs = {}
        for a in base.algebra.quiver.arrows:
            series = list(coeffs[a.name])
            assert len(series) == order + 1, f"need {order + 1} coefficients for {a.name}"
            assert series[0] == base.mats[a.name], "degree-0 coefficient must be the base matrix"
            for m in series:
                assert (m.nrows, m.ncols) == (base.dims[a.target], base.dims[a.source])
            self.coeffs[a.name] = series
        self.field = base.field

    @classmethod
    def trivial(cls, base: Representation, order: int = 0) -> "Lift":
        coeffs = {}
        for a in base.algebra.quiver.arrows:
            zero = Matrix.zeros(base.field, base.dims[a.target], base.dims[a.source])
            coeffs[a.name] = [base.mats[a.name]] + [zero] * order
        return cls(base, order, coeffs)

    @classmethod
    def first_order(cls, base: Representation, b: dict) -> "Lift":
        coeffs = {a.name: [base.mats[a.name], b[a.name]] for a in base.algebra.quiver.arrows}
        return cls(base, 1, coeffs)

    def extended(self, b: dict) -> "Lift":
        coeffs = {name: series + [b[name]] for name, series in self.coeffs.items()}
        return Lift(self.base, self.order + 1, coeffs)

    def reduced(self, to_order: int) -> "Lift":
        assert 0 <= to_order <= self.order
        coeffs = {name: series[: to_order + 1] for name, series in self.coeffs.items()}
        return Lift(self.base, to_order, coeffs)

    def top_coefficients(self) -> dict:
        return {name: series[self.order] for name, series in self.coeffs.items()}

    def __eq__(self, other):
        return (
            isinstance(other, Lift)
            and self.base == other.base
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"Lift(order={self.order}, dims={self.base.dims})"


# ----------------------------------------------------------------------
# residuals


def _path_poly(lift: Lift, path, max_deg: int) -> list:
    """Coefficients 0..max_deg of the path evaluated at the arrow polynomials."""
    field = lift.field
    d_src = lift.base.dims[path.source]
    out = [Matrix.identity(field, d_src)]
    out += [Matrix.zeros(field, d_src, d_src) for _ in range(max_deg)]
    for arrow in path.arrows:
        series = lift.coeffs[arrow.name]
        nxt = [Matrix.zeros(field, series[0].nrows, out[0].ncols) for _ in range(max_deg + 1)]
        for d in range(max_deg + 1):
            for i in range(min(d, lift.order) + 1):
                coeff = series[i]
                prev = out[d - i]
                if not coeff.is_zero() and not prev.is_zero():
                    nxt[d] = nxt[d] + coeff * prev
        out = nxt
    return out


def residual_coefficient(lift: Lift, rel, j: int) -> Matrix:
    """t^j coefficient of one ideal generator evaluated at the lift."""
    assert j <= lift.order + 1
    field = lift.field
    first = rel.terms[0][1]
    out = Matrix.zeros(field, lift.base.dims[first.target], lift.base.dims[first.source])
    for coeff, path in rel.terms:
        if coeff.is_zero():
            continue
        poly = _path_poly(lift, path, j)
        out = out + poly[j].scale(coeff)
    return out


def residual_coefficients(lift: Lift, j: int) -> list:
    """The t^j residual of every ideal generator, in generator order."""
    return [residual_coefficient(lift, rel, j) for rel in lift.base.algebra.generating_relations()]


def is_valid(lift: Lift) -> bool:
    """All residuals vanish in degrees 0..order (degree 0 is base validity)."""
    for j in range(lift.order + 1):
        for block in residual_coefficients(lift, j):
            if not block.is_zero():
                return False
    return True


# ----------------------------------------------------------------------
# one extension step


@dataclass
class Obstruction:
    """Certificate that no next coefficient tuple exists.

    The linear step D(B) = -residual is infeasible exactly when the
    augmented rank exceeds the rank of the deformation matrix; both ranks
    are recorded so the certificate can be replayed independently.
    """

    order: int
    residuals: list  # (generator label, Matrix)
    rank_coefficient: int
    rank_augmented: int

    @property
    def certifies(self) -> bool:
        return self.rank_augmented > self.rank_coefficient


@dataclass
class LiftExtensions:
    """The affine space of valid next coefficient tuples of a lift."""

    lift: Lift
    system: DeformationSystem
    solution: object  # AffineSolutionSpace over packed arrow matrices

    @property
    def kernel_dim(self) -> int:
        return len(self.solution.kernel)

    def point(self, coeffs) -> Lift:
        vec = self.solution.point(coeffs)
        return self._make(vec)

    def particular(self) -> Lift:
        return self._make(self.solution.particular)

    def _make(self, vec) -> Lift:
        b = self.system.layout.unpack(vec)
        extended = self.lift.extended(b)
        for block in residual_coefficients(extended, extended.order):
            assert block.is_zero(), "extension point failed its residual check"
        return extended


def extend_step(lift: Lift, system: DeformationSystem | None = None):
    """Solve for the next coefficient tuple; Obstruction when infeasible."""
    if system is None:
        system = DeformationSystem(lift.base, lift.base)
    rhs = residual_coefficients(lift, lift.order + 1)
    sol = system.solve_step(rhs)
    if not sol.feasible:
        labels = [rel.label() for rel in lift.base.algebra.generating_relations()]
        aug_rows = []
        flat_rhs = []
        for block in rhs:
            for r in range(block.nrows):
                for c in range(block.ncols):
                    flat_rhs.append(-block[r, c])
        base_rank = rank(system.matrix)
        aug = system.matrix.hstack(
            Matrix.from_columns(system.field, system.matrix.nrows, [flat_rhs]))
        return Obstruction(
            order=lift.order + 1,
            residuals=list(zip(labels, rhs)),
            rank_coefficient=base_rank,
            rank_augmented=rank(aug),
        )
    return LiftExtensions(lift, system, sol)


def first_order_space(base: Representation):
    """Valid first-order coefficient tuples and the trivial ones among them.

    Returns (cocycle basis, coboundary generators) as per-arrow matrix
    dicts; the quotient of their spans is the tangent space.
    """
    sys = DeformationSystem(base, base)
    z = [sys.layout.unpack(v) for v in sys.cocycles()]
    cob = [sys.layout.unpack(v) for v in sys.coboundary_vectors()]
    return z, cob


# ----------------------------------------------------------------------
# the module underlying a lift


def as_representation(lift: Lift) -> Representation:
    """Forget the coefficient ring: lower block triangular Toeplitz matrices.

    Vertex spaces get one block per degree 0..order; arrow block (i, j)
    is the degree i-j coefficient.  The lift is valid exactly when this
    representation satisfies the relations.
    """
    base = lift.base
    field = lift.field
    ell = lift.order
    dims = {v: (ell + 1) * base.dims[v] for v in base.algebra.quiver.vertices}
    mats = {}
    for a in base.algebra.quiver.arrows:
        dt, ds = base.dims[a.target], base.dims[a.source]
        zero = Matrix.zeros(field, dims[a.target], dims[a.source])
        data = [list(row) for row in zero.rows()]
        for bi in range(ell + 1):
            for bj in range(bi + 1):
                block = lift.coeffs[a.name][bi - bj]
                if block.is_zero():
                    continue
                for r in range(dt):
                    for c in range(ds):
                        data[bi * dt + r][bj * ds + c] = block[r, c]
        mats[a.name] = (
            Matrix.from_rows(field, data) if dims[a.target] else Matrix.zeros(field, 0, dims[a.source])
        )
    return Representation(base.algebra, dims, mats)


def shift_endomorphism(lift: Lift) -> dict:
    """Multiplication by t on the underlying module: the block subdiagonal."""
    base = lift.base
    field = lift.field
    ell = lift.order
    out = {}
    for v in base.algebra.quiver.vertices:
        d = base.dims[v]
        n = (ell + 1) * d
        m = Matrix.zeros(field, n, n)
        data = [list(row) for row in m.rows()]
        one = field.one()
        for bi in range(1, ell + 1):
            for r in range(d):
                data[bi * d + r][(bi - 1) * d + r] = one
        out[v] = Matrix.from_rows(field, data) if n else Matrix.zeros(field, 0, 0)
    return out


def base_embedding(lift: Lift) -> dict:
    """The witness copy of the base inside the top degree block."""
    base = lift.base
    field = lift.field
    ell = lift.order
    out = {}
    for v in base.algebra.quiver.vertices:
        d = base.dims[v]
        cols = []
        for j in range(d):
            col = [field.zero()] * ((ell + 1) * d)
            col[ell * d + j] = field.one()
            cols.append(col)
        out[v] = Matrix.from_columns(field, (ell + 1) * d, cols)
    return out


def _block_projection(lift: Lift) -> dict:
    """Drop the top degree block: the reduction map of underlying modules."""
    base = lift.base
    field = lift.field
    ell = lift.order
    out = {}
    for v in base.algebra.quiver.vertices:
        d = base.dims[v]
        rows = []
        for i in range(ell * d):
            row = [field.zero()] * ((ell + 1) * d)
            row[i] = field.one()
            rows.append(row)
        out[v] = Matrix.from_rows(field, rows) if rows else Matrix.zeros(field, 0, (ell + 1) * d)
    return out


def _block_injection(lift: Lift) -> dict:
    """Multiply by t: shift degrees up by one, from order-1 into order blocks."""
    base = lift.base
    field = lift.field
    ell = lift.order
    out = {}
    for v in base.algebra.quiver.vertices:
        d = base.dims[v]
        cols = []
        for j in range(ell * d):
            col = [field.zero()] * ((ell + 1) * d)
            col[d + j] = field.one()
            cols.append(col)
        out[v] = Matrix.from_columns(field, (ell + 1) * d, cols)
    return out


# ----------------------------------------------------------------------
# ladders


@dataclass
class Ladder:
    """A coherent chain of lifts, orders 1..N, each reducing to the previous."""

    base: Representation
    chain: list

    @classmethod
    def from_lift(cls, lift: Lift) -> "Ladder":
        assert lift.order >= 1
        return cls(lift.base, [lift.reduced(j) for j in range(1, lift.order + 1)])

    @property
    def top(self) -> Lift:
        return self.chain[-1]

    @property
    def length(self) -> int:
        return len(self.chain)

    @property
    def first_order_class(self) -> dict:
        return self.chain[0].top_coefficients()

    def coefficient_tuples(self) -> list:
        """Per order 1..N, the degree-at-that-order coefficient per arrow."""
        return [rung.top_coefficients() for rung in self.chain]


@dataclass
class LadderCheck:
    name: str
    order: int
    ok: bool
    detail: str = ""


@dataclass
class LadderTranscript:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list:
        out = []
        for c in self.checks:
            status = "ok" if c.ok else "FAILED"
            suffix = f" ({c.detail})" if c.detail else ""
            out.append(f"order {c.order}: {c.name} {status}{suffix}")
        return out


def _is_hom(w_from, w_to, maps: dict) -> bool:
    for a in w_from.algebra.quiver.arrows:
        if not (maps[a.target] * w_from.mats[a.name] - w_to.mats[a.name] * maps[a.source]).is_zero():
            return False
    return True


def verify_ladder(ladder: Ladder, system: DeformationSystem | None = None,
                  strict: bool = False) -> LadderTranscript:
    """Replay every certificate check of a ladder.

    Checks per rung: residual vanishing, coherence with the previous rung,
    the reduction epimorphism and the degree-shift monomorphism, their
    composite (the shift endomorphism), its nilpotency degree, and the
    explicit block witness identifying both the kernel of the shift and
    the image of its top power with the base module.  The first-order
    class must not be a coboundary; that is what makes the chain a ladder
    rather than the trivial tower.
    """
    checks = []
    base = ladder.base

    def add(name, order, ok, detail=""):
        checks.append(LadderCheck(name, order, bool(ok), detail))
        if strict and not ok:
            raise CheckFailed(f"order {order}: {name} {detail}".strip())

    if system is None:
        system = DeformationSystem(base, base)
    nontrivial = not system.is_coboundary(ladder.first_order_class)
    add("first_order_nontrivial", 1, nontrivial,
        "" if nontrivial else "first-order class is a coboundary")

    prev_rep = base
    for ell, rung in enumerate(ladder.chain, start=1):
        add("order_matches", ell, rung.order == ell)
        add("residuals_vanish", ell, is_valid(rung))
        if ell >= 2:
            add("coherent_with_previous", ell, rung.reduced(ell - 1) == ladder.chain[ell - 2])
        w = as_representation(rung)
        eps = _block_projection(rung)
        iota = _block_injection(rung)
        sigma = shift_endomorphism(rung)
        add("reduction_is_hom", ell, _is_hom(w, prev_rep, eps))
        add("reduction_surjective", ell,
            all(rank(eps[v]) == prev_rep.dims[v] for v in base.algebra.quiver.vertices))
        add("shift_in_is_hom", ell, _is_hom(prev_rep, w, iota))
        add("shift_in_injective", ell,
            all(rank(iota[v]) == prev_rep.dims[v] for v in base.algebra.quiver.vertices))
        add("sigma_is_composite", ell,
            all((iota[v] * eps[v] - sigma[v]).is_zero() for v in base.algebra.quiver.vertices))
        add("sigma_commutes", ell, _is_hom(w, w, sigma))
        add("sigma_nilpotent", ell,
            all(sigma[v].power(ell + 1).is_zero() for v in base.algebra.quiver.vertices))
        add("sigma_power_nonzero", ell,
            any(not sigma[v].power(ell).is_zero() for v in base.algebra.quiver.vertices
                if base.dims[v]))
        emb = base_embedding(rung)
        add("witness_is_hom", ell, _is_hom(base, w, emb))
        kernel_ok = True
        image_ok = True
        for v in base.algebra.quiver.vertices:
            d = base.dims[v]
            n = (ell + 1) * d
            # ker sigma: witness columns lie in it and dimensions agree
            if not (sigma[v] * emb[v]).is_zero():
                kernel_ok = False
            if n - rank(sigma[v]) != d:
                kernel_ok = False
            if rank(emb[v]) != d:
                kernel_ok = False
            # im sigma^ell: columns solve emb * X = sigma^ell
            power = sigma[v].power(ell)
            if rank(power) != d:
                image_ok = False
            elif solve_matrix(emb[v], power) is None:
                image_ok = False
        add("kernel_is_base_witness", ell, kernel_ok)
        add("image_power_is_base_witness", ell, image_ok)
        prev_rep = w
    return LadderTranscript(checks)

"""Hermitian spaces and O_F-lattices with exact canonical forms.

A lattice is stored through a canonical Hermite normal form of its generators,
computed over the discrete valuation ring O_F (inert, ramified) or over Z_p
separately in each idempotent component (split).  The canonical form doubles
as a hashable key, so equal lattices compare equal regardless of the basis
they were built from.

Integrality is measured against an ideal J: J = O_F in the inert and split
cases; in the ramified case J is the inverse different (convention "B", the
default) or O_F (convention "A").  The dual of M is {v : (v, M) in J}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .localfield import INF, Case, FieldData, FieldElem, hilbert_symbol, valuation, vp
from .residue import digits_rep, reduce_elem, residue_field


class LatticeError(ValueError):
    """Invalid lattice input or a failed precondition (e.g. non-containment)."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed."""


Vector = list  # list[FieldElem]
Matrix = list  # list of rows


# ---------------------------------------------------------------------------
# the coefficient rings used by the normal form


class _NonsplitRing:
    """O_F for a nonsplit F, with canonical pivots and residues mod varpi**k."""

    def __init__(self, fd: FieldData):
        self.fd = fd
        self.p = fd.p
        self.zero = fd.zero
        self.inert = fd.case is Case.INERT

    def val(self, x: FieldElem):
        return valuation(x, "vF")

    def pivot(self, k: int) -> FieldElem:
        p = Fraction(self.p)
        if self.inert:
            return self.fd.elem(p**k, 0)
        j, r = divmod(k, 2)
        return self.fd.elem(p**j, 0) if r == 0 else self.fd.elem(0, p**j)

    def rep(self, x: FieldElem, k: int) -> FieldElem:
        p = self.p
        if self.inert:
            return self.fd.elem(digits_rep(x.a, p, k), digits_rep(x.b, p, k))
        return self.fd.elem(digits_rep(x.a, p, -(-k // 2)), digits_rep(x.b, p, k // 2))

    def is_zero(self, x: FieldElem) -> bool:
        return x.is_zero()

    def div(self, x, y):
        return x / y


class _ZpRing:
    """Z_p acting on one idempotent component of the split algebra."""

    def __init__(self, p: int):
        self.p = p
        self.zero = Fraction(0)

    def val(self, x: Fraction):
        return vp(x, self.p)

    def pivot(self, k: int) -> Fraction:
        return Fraction(self.p) ** k

    def rep(self, x: Fraction, k: int) -> Fraction:
        return digits_rep(x, self.p, k)

    def is_zero(self, x) -> bool:
        return x == 0

    def div(self, x, y):
        return x / y


def _echelon(cols: list[list], nrows: int, ring, row_order: Sequence[int] | None = None):
    """Canonical column echelon form over a DVR.

    Rows are processed in ``row_order``; each pivot is normalised to
    ``ring.pivot(k)`` and entries of other pivot columns in a pivot row are
    reduced to canonical residues.  Returns ``(columns, pivot_rows)``.
    """
    order = list(range(nrows)) if row_order is None else list(row_order)
    work = [list(c) for c in cols if not all(ring.is_zero(e) for e in c)]
    done: list[list] = []
    prow: list[int] = []
    for r in order:
        cand = [i for i, c in enumerate(work) if not ring.is_zero(c[r])]
        if not cand:
            continue
        best = min(cand, key=lambda i: ring.val(work[i][r]))
        pc = work.pop(best)
        k = ring.val(pc[r])
        scale = ring.div(ring.pivot(k), pc[r])
        pc = [e * scale for e in pc]
        piv = pc[r]
        nxt = []
        for c in work:
            if not ring.is_zero(c[r]):
                f = ring.div(c[r], piv)
                c = [a - f * b for a, b in zip(c, pc)]
            if not all(ring.is_zero(e) for e in c):
                nxt.append(c)
        work = nxt
        done.append(pc)
        prow.append(r)
    if work:
        raise InvariantViolation("echelon form left unreduced columns")
    # reduce entries of earlier pivot columns in the later pivot rows
    for j in range(len(done)):
        for i in range(j + 1, len(done)):
            r = prow[i]
            k = ring.val(done[i][r])
            x = done[j][r]
            rep = ring.rep(x, k)
            if x != rep:
                f = ring.div(x - rep, done[i][r])
                done[j] = [a - f * b for a, b in zip(done[j], done[i])]
    return done, prow


# ---------------------------------------------------------------------------
# linear algebra over F (exact)


def _split_parts(fd: FieldData, mat: Matrix):
    return [[e.a for e in row] for row in mat], [[e.b for e in row] for row in mat]


def _join_parts(fd: FieldData, a: Matrix, b: Matrix) -> Matrix:
    return [[FieldElem(fd, x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _inv_generic(mat: Matrix, zero, one, is_zero) -> Matrix:
    n = len(mat)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((i for i in range(col, n) if not is_zero(aug[i][col])), None)
        if piv is None:
            raise LatticeError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        iv = one / aug[col][col]
        aug[col] = [e * iv for e in aug[col]]
        for i in range(n):
            if i != col and not is_zero(aug[i][col]):
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def _det_generic(mat: Matrix, zero, one, is_zero):
    n = len(mat)
    m = [list(r) for r in mat]
    det = one
    for col in range(n):
        piv = next((i for i in range(col, n) if not is_zero(m[i][col])), None)
        if piv is None:
            return zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        iv = one / m[col][col]
        for i in range(col + 1, n):
            if not is_zero(m[i][col]):
                f = m[i][col] * iv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def mat_inv(fd: FieldData, mat: Matrix) -> Matrix:
    if fd.split:
        a, b = _split_parts(fd, mat)
        one, zero = Fraction(1), Fraction(0)
        return _join_parts(
            fd,
            _inv_generic(a, zero, one, lambda e: e == 0),
            _inv_generic(b, zero, one, lambda e: e == 0),
        )
    return _inv_generic(mat, fd.zero, fd.one, lambda e: e.is_zero())


def mat_det(fd: FieldData, mat: Matrix) -> FieldElem:
    if not mat:
        return fd.one
    if fd.split:
        a, b = _split_parts(fd, mat)
        one, zero = Fraction(1), Fraction(0)
        return FieldElem(
            fd,
            _det_generic(a, zero, one, lambda e: e == 0),
            _det_generic(b, zero, one, lambda e: e == 0),
        )
    return _det_generic(mat, fd.zero, fd.one, lambda e: e.is_zero())


def mat_mul(fd: FieldData, a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    return [
        [sum((a[i][k] * b[k][j] for k in range(inner)), fd.zero) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def transpose(m: Matrix) -> Matrix:
    return [list(r) for r in zip(*m)] if m else []


def conj_mat(m: Matrix) -> Matrix:
    return [[e.conj() for e in row] for row in m]


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class HermSpace:
    """F^n with the Hermitian form h(v, w) = v^T H conj(w)."""

    fd: FieldData
    H: tuple

    def __post_init__(self):
        H = tuple(tuple(self.fd.from_base(e) if not isinstance(e, FieldElem) else e for e in row) for row in self.H)
        object.__setattr__(self, "H", H)
        n = len(H)
        if any(len(row) != n for row in H):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if H[i][j] != H[j][i].conj():
                    raise LatticeError(f"Gram matrix is not Hermitian at entry ({j + 1},{i + 1})")
        if mat_det(self.fd, [list(r) for r in H]).norm() == 0:
            raise LatticeError("Gram matrix is degenerate")

    @property
    def n(self) -> int:
        return len(self.H)

    def pair(self, v: Vector, w: Vector) -> FieldElem:
        fd = self.fd
        out = fd.zero
        for i, vi in enumerate(v):
            if vi.is_zero():
                continue
            for j, wj in enumerate(w):
                hij = self.H[i][j]
                if not hij.is_zero() and not wj.is_zero():
                    out = out + vi * hij * wj.conj()
        return out

    def basis_vector(self, i: int) -> Vector:
        return [self.fd.one if j == i else self.fd.zero for j in range(self.n)]

    def standard_lattice(self) -> "HermLattice":
        return HermLattice(self, [self.basis_vector(i) for i in range(self.n)])


def diagonal_space(fd: FieldData, diag: Sequence) -> HermSpace:
    n = len(diag)
    H = [[fd.zero] * n for _ in range(n)]
    for i, c in enumerate(diag):
        H[i][i] = c if isinstance(c, FieldElem) else fd.from_base(c)
    return HermSpace(fd, tuple(tuple(r) for r in H))


def lattice_from_gram(fd: FieldData, gram: Sequence[Sequence]) -> "HermLattice":
    """The standard lattice O_F^m in the space with Gram matrix ``gram``."""
    H = tuple(tuple(e if isinstance(e, FieldElem) else fd.from_base(e) for e in row) for row in gram)
    return HermSpace(fd, H).standard_lattice()


# ---------------------------------------------------------------------------
# lattices


class HermLattice:
    """A finitely generated O_F-submodule of a Hermitian space, stored canonically.

    ``generators`` are column vectors (lists of FieldElem of length n).  The
    lattice need not have full rank in the ambient space.
    """

    __slots__ = ("space", "basis", "key", "_cache", "_pivots", "_rank_parts")

    def __init__(self, space: HermSpace, generators: Sequence[Vector], row_order=None):
        self.space = space
        fd = space.fd
        n = space.n
        gens = [list(g) for g in generators]
        for g in gens:
            if len(g) != n:
                raise LatticeError("generator length does not match the ambient rank")
        self._cache: dict = {}
        if fd.split:
            ring = _ZpRing(fd.p)
            ca, pa = _echelon([[e.a for e in g] for g in gens], n, ring, row_order)
            cb, pb = _echelon([[e.b for e in g] for g in gens], n, ring, row_order)
            if len(ca) != len(cb):
                raise LatticeError("generators do not span a free O_F-module")
            self.basis = [[FieldElem(fd, x, y) for x, y in zip(u, v)] for u, v in zip(ca, cb)]
            self._pivots = (tuple(ring.val(c[r]) for c, r in zip(ca, pa)), tuple(ring.val(c[r]) for c, r in zip(cb, pb)))
            self.key = (tuple(tuple(c) for c in ca), tuple(pa), tuple(tuple(c) for c in cb), tuple(pb))
        else:
            ring = _NonsplitRing(fd)
            cols, prow = _echelon(gens, n, ring, row_order)
            self.basis = cols
            self._pivots = (tuple(ring.val(c[r]) for c, r in zip(cols, prow)),)
            self.key = (tuple(tuple((e.a, e.b) for e in c) for c in cols), tuple(prow))

    # basic structure -------------------------------------------------------

    @property
    def fd(self) -> FieldData:
        return self.space.fd

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, HermLattice) and self.space == other.space and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"HermLattice(rank={self.rank}, gram={self.gram_matrix()})"

    @property
    def log_volume(self) -> int:
        """log_q of the covolume relative to the standard lattice of its span (up to sign)."""
        fd = self.fd
        if fd.split:
            return sum(self._pivots[0]) + sum(self._pivots[1])
        return fd.residue_degree * sum(self._pivots[0])

    def gram_matrix(self) -> Matrix:
        c = self._cache.get("gram")
        if c is None:
            b = self.basis
            c = [[self.space.pair(b[i], b[j]) for j in range(len(b))] for i in range(len(b))]
            self._cache["gram"] = c
        return c

    def scaled(self, c: FieldElem) -> "HermLattice":
        return HermLattice(self.space, [[c * e for e in v] for v in self.basis])

    def __add__(self, other: "HermLattice") -> "HermLattice":
        return HermLattice(self.space, self.basis + other.basis)

    def with_vectors(self, vecs: Sequence[Vector]) -> "HermLattice":
        return HermLattice(self.space, self.basis + [list(v) for v in vecs])

    def contains_vector(self, v: Vector) -> bool:
        return self.with_vectors([v]).key == self.key

    def contains(self, other: "HermLattice") -> bool:
        return (self + other).key == self.key

    def coordinates(self, v: Vector) -> Vector:
        """Coordinates of a vector of the F-span in the canonical basis."""
        fd = self.fd
        m = self.rank
        # solve via the Gram matrix of the form restricted to the span
        T = self.gram_matrix()
        rhs = [self.space.pair(v, self.basis[i]) for i in range(m)]
        # h(v, b_i) = sum_k c_k T[k][i]
        Ti = mat_inv(fd, transpose(T))
        return [sum((Ti[k][i] * rhs[i] for i in range(m)), fd.zero) for k in range(m)]


# ---------------------------------------------------------------------------
# forms, duals, integrality


def _j_generator(fd: FieldData) -> FieldElem:
    """Generator of the ideal J that integral pairings must land in."""
    if fd.case is Case.RAMIFIED and fd.ramified_convention == "B":
        return fd.uniformizer.inv()
    return fd.one


def gram(L: HermLattice) -> Matrix:
    return L.gram_matrix()


def dual(L: HermLattice) -> HermLattice:
    """{v in L_F : (v, L) in J}, computed inside the F-span of L."""
    c = L._cache.get("dual")
    if c is None:
        fd = L.fd
        T = L.gram_matrix()
        Ti = mat_inv(fd, T)
        g = _j_generator(fd).conj()
        m = L.rank
        # D = B * conj(g) * conj(T^{-1})
        Y = [[g * Ti[i][j].conj() for j in range(m)] for i in range(m)]
        cols = []
        for j in range(m):
            vec = [fd.zero] * L.space.n
            for k in range(m):
                if not Y[k][j].is_zero():
                    vec = [a + Y[k][j] * b for a, b in zip(vec, L.basis[k])]
            cols.append(vec)
        c = HermLattice(L.space, cols)
        L._cache["dual"] = c
    return c


def _in_ideal(fd: FieldData, x: FieldElem, gen: FieldElem) -> bool:
    if x.is_zero():
        return True
    y = x / gen
    if fd.split:
        return vp(y.a, fd.p) >= 0 and vp(y.b, fd.p) >= 0
    return valuation(y, "vF") >= 0


def is_integral(L: HermLattice) -> bool:
    c = L._cache.get("integral")
    if c is None:
        fd = L.fd
        g = _j_generator(fd)
        T = L.gram_matrix()
        c = all(_in_ideal(fd, e, g) for row in T for e in row)
        L._cache["integral"] = c
    return c


def index_length(L: HermLattice, M: HermLattice) -> int:
    """log_q [M : L] for L inside M (both of the same rank)."""
    if L.rank != M.rank or not M.contains(L):
        raise LatticeError("index_length needs L contained in M of equal rank")
    return L.log_volume - M.log_volume


def val_det(L: HermLattice) -> int:
    """vF0 of the Gram determinant."""
    c = L._cache.get("val")
    if c is None:
        fd = L.fd
        det = mat_det(fd, L.gram_matrix())
        if fd.split:
            c = vp(det.a, fd.p)
            if c != vp(det.b, fd.p):
                raise InvariantViolation("split Gram determinant components disagree")
        else:
            if det.b != 0:
                raise InvariantViolation("Hermitian determinant not in F0")
            c = vp(det.a, fd.p)
        L._cache["val"] = c
    return c


def _type_rows(L: HermLattice, component: int | None = None):
    return _gram_type_rows(L.fd, L.gram_matrix(), component)


def _type_multiplier(fd: FieldData) -> FieldElem:
    """u under pairings valued in the inverse different; 1 when they are O_F-valued
    in the ramified case (convention A), where u * T would always vanish mod varpi."""
    if fd.case is Case.RAMIFIED and fd.ramified_convention == "A":
        return fd.one
    return fd.different_generator


def _gram_type_rows(fd: FieldData, T: Matrix, component: int | None = None):
    u = _type_multiplier(fd)
    return [[reduce_elem(fd, u * e, component) for e in row] for row in T]


def gram_type(fd: FieldData, T: Matrix) -> int:
    """rank(T) - rank of (u * T) mod varpi, for an integral Gram matrix T (u = 1 under ramified convention A)."""
    k = residue_field(fd)
    u = _type_multiplier(fd)
    for row in T:
        for e in row:
            if not _in_ideal(fd, u * e, fd.one):
                raise LatticeError("u * Gram is not integral under the selected convention")
    if fd.split:
        r1 = k.rank(_gram_type_rows(fd, T, 0))
        r2 = k.rank(_gram_type_rows(fd, T, 1))
        if r1 != r2:
            raise InvariantViolation(f"split residue ranks disagree: {r1} != {r2}")
        return len(T) - r1
    return len(T) - k.rank(_gram_type_rows(fd, T))


def lattice_type(L: HermLattice) -> int:
    """t(L) = rank - rank of (u * Gram) over the residue field."""
    c = L._cache.get("type")
    if c is None:
        if not is_integral(L):
            raise LatticeError("type is only defined for integral lattices")
        c = gram_type(L.fd, L.gram_matrix())
        L._cache["type"] = c
    return c


def socle_vectors(L: HermLattice) -> list[Vector]:
    """Vectors v in L* with varpi v in L (one per residue line), integral or not.

    In the split case the returned vectors are idempotent-pure and come from
    both simple quotients O_F / varpi_1 and O_F / varpi_2.
    """
    fd = L.fd
    k = residue_field(fd)
    out = []
    if fd.split:
        p = Fraction(fd.p)
        for comp in (0, 1):
            rows = _type_rows(L, comp)
            for c in k.span_lines(k.kernel_left(rows)):
                coeffs = [
                    FieldElem(fd, Fraction(ci) / p, Fraction(0)) if comp == 0 else FieldElem(fd, Fraction(0), Fraction(ci) / p)
                    for ci in c
                ]
                out.append(_combine(L, coeffs))
        return out
    pinv = fd.uniformizer.inv()
    from .residue import lift_elem

    for c in k.span_lines(k.kernel_left(_type_rows(L))):
        coeffs = [lift_elem(fd, ci) * pinv for ci in c]
        out.append(_combine(L, coeffs))
    return out


def _combine(L: HermLattice, coeffs: Sequence[FieldElem]) -> Vector:
    fd = L.fd
    vec = [fd.zero] * L.space.n
    for c, b in zip(coeffs, L.basis):
        if not c.is_zero():
            vec = [a + c * e for a, e in zip(vec, b)]
    return vec


def norm_integral(L: HermLattice, v: Vector) -> bool:
    """Whether (v, v) lies in J (equivalently, in Z_p)."""
    fd = L.fd
    return _in_ideal(fd, L.space.pair(v, v), _j_generator(fd))


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class FiniteModuleDesc:
    """A finite O_F-module as a sum of cyclic factors.

    ``exponents``: nonsplit, the varpi-exponents sorted descending; split, the
    (e1, e2) pairs meaning O_F / varpi_1^e1 varpi_2^e2, paired in descending
    order of each component.  ``generators`` lift the cyclic generators into
    the ambient space; in the split case each entry is a pair of
    idempotent-pure vectors (e_1-part generator, e_2-part generator).
    """

    fd: FieldData
    exponents: tuple
    generators: tuple = field(default=(), compare=False)

    @property
    def log_size(self) -> int:
        """log_q of the cardinality."""
        if self.fd.split:
            return sum(a + b for a, b in self.exponents)
        return self.fd.residue_degree * sum(self.exponents)

    def nonzero_count(self) -> int:
        if self.fd.split:
            return sum(1 for a, b in self.exponents if a or b)
        return sum(1 for e in self.exponents if e)

    def max_exponent(self) -> int:
        if not self.exponents:
            return 0
        if self.fd.split:
            return max(max(a, b) for a, b in self.exponents)
        return max(self.exponents)


def _snf_exponents(mat: Matrix, ring, track: list[Vector] | None = None):
    """Elementary divisor valuations of a square matrix over a DVR.

    If ``track`` (the basis of the bigger lattice, as columns) is given it is
    transformed alongside so that the returned generators are adapted.
    """
    m = [list(r) for r in mat]
    n = len(m)
    basis = [list(c) for c in track] if track is not None else None
    exps = []
    gens = []
    active_r = list(range(n))
    active_c = list(range(len(m[0]) if m else 0))
    while active_r and active_c:
        best = None
        for i in active_r:
            for j in active_c:
                if not ring.is_zero(m[i][j]):
                    v = ring.val(m[i][j])
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best
        piv = m[pi][pj]
        for i in active_r:
            if i != pi and not ring.is_zero(m[i][pj]):
                f = ring.div(m[i][pj], piv)
                m[i] = [a - f * b for a, b in zip(m[i], m[pi])]
                if basis is not None:
                    # row_i -= f row_pi on coordinates <=> col_pi += f col_i on the basis
                    basis[pi] = [a + f * b for a, b in zip(basis[pi], basis[i])]
        for j in active_c:
            if j != pj and not ring.is_zero(m[pi][j]):
                f = ring.div(m[pi][j], piv)
                for i in active_r:
                    m[i][j] = m[i][j] - f * m[i][pj]
        exps.append(v)
        if basis is not None:
            gens.append(basis[pi])
        active_r.remove(pi)
        active_c.remove(pj)
    order = sorted(range(len(exps)), key=lambda i: -exps[i])
    return [exps[i] for i in order], [gens[i] for i in order] if basis is not None else []


def snf_invariants(L: HermLattice, M: HermLattice) -> FiniteModuleDesc:
    """Cyclic decomposition of M / L for L inside M of equal rank."""
    if L.rank != M.rank or not M.contains(L):
        raise LatticeError("snf_invariants needs L contained in M of equal rank")
    fd = L.fd
    coords = transpose([M.coordinates(v) for v in L.basis])  # columns = L generators in M basis
    if fd.split:
        ring = _ZpRing(fd.p)
        a, b = _split_parts(fd, coords)
        ea, ga = _snf_exponents(a, ring, track=[[e.a for e in v] for v in M.basis])
        eb, gb = _snf_exponents(b, ring, track=[[e.b for e in v] for v in M.basis])
        zero = Fraction(0)
        gens = tuple(
            (tuple(FieldElem(fd, x, zero) for x in u), tuple(FieldElem(fd, zero, y) for y in v))
            for u, v in zip(ga, gb)
        )
        return FiniteModuleDesc(fd, tuple(zip(ea, eb)), gens)
    ring = _NonsplitRing(fd)
    # track generators: rows of coords correspond to M basis vectors
    exps, gens = _snf_exponents(coords, ring, track=M.basis)
    return FiniteModuleDesc(fd, tuple(exps), tuple(tuple(g) for g in gens))


def disc_module(L: HermLattice) -> FiniteModuleDesc:
    c = L._cache.get("disc")
    if c is None:
        if not is_integral(L):
            raise LatticeError("discriminant module needs an integral lattice")
        c = snf_invariants(L, dual(L))
        L._cache["disc"] = c
    return c


def a_max(L: HermLattice) -> int:
    """Smallest e with varpi^e L* inside L."""
    return disc_module(L).max_exponent()


def snf_type(L: HermLattice) -> int:
    """Type counted from the discriminant module: dim over k of L* / (L + varpi L*)."""
    d = disc_module(L)
    if L.fd.split:
        n1 = sum(1 for a, _ in d.exponents if a)
        n2 = sum(1 for _, b in d.exponents if b)
        if n1 != n2:
            raise InvariantViolation("split discriminant components have different lengths")
        return n1
    return d.nonzero_count()


# ---------------------------------------------------------------------------
# constructions


def orth_extend(Lflat: HermLattice, c) -> HermLattice:
    """L = Lflat (+) <x> with (x, x) = c, in the ambient space enlarged by one line.

    Lflat must have full rank in its space.
    """
    fd = Lflat.fd
    c = c if isinstance(c, FieldElem) else fd.from_base(c)
    if c != c.conj():
        raise LatticeError("(x, x) must lie in F0")
    n = Lflat.space.n
    H = [list(r) + [fd.zero] for r in Lflat.space.H] + [[fd.zero] * n + [c]]
    space = HermSpace(fd, tuple(tuple(r) for r in H))
    gens = [list(v) + [fd.zero] for v in Lflat.basis]
    gens.append([fd.zero] * n + [fd.one])
    return HermLattice(space, gens)


def line_vector(space: HermSpace, scalar: FieldElem) -> Vector:
    """scalar * e_n, the last basis vector of the space scaled."""
    fd = space.fd
    return [fd.zero] * (space.n - 1) + [scalar]


def intersect_with_subspace(M: HermLattice, coords: Sequence[int]) -> HermLattice:
    """M intersected with the coordinate subspace spanned by ``coords``."""
    n = M.space.n
    coords = list(coords)
    if any(not 0 <= c < n for c in coords):
        raise LatticeError("coordinate index out of range")
    others = [i for i in range(n) if i not in coords]
    order = others + coords
    tmp = HermLattice(M.space, M.basis, row_order=order)
    fd = M.fd
    keep = [v for v in tmp.basis if all(v[i].is_zero() for i in others)]
    if fd.split:
        # each component kept separately; rebuild from both
        keep_a = [v for v in tmp.basis if all(v[i].a == 0 for i in others)]
        keep_b = [v for v in tmp.basis if all(v[i].b == 0 for i in others)]
        ga = [[FieldElem(fd, e.a, Fraction(0)) for e in v] for v in keep_a]
        gb = [[FieldElem(fd, Fraction(0), e.b) for e in v] for v in keep_b]
        return HermLattice(M.space, ga + gb)
    return HermLattice(M.space, keep)


def restrict_to_subspace(M: HermLattice, coords: Sequence[int], space: HermSpace) -> HermLattice:
    """Re-express a lattice lying in a coordinate subspace inside that subspace."""
    coords = list(coords)
    return HermLattice(space, [[v[i] for i in coords] for v in M.basis])


def subspace(space: HermSpace, coords: Sequence[int]) -> HermSpace:
    coords = list(coords)
    for i in range(space.n):
        for j in coords:
            if i not in coords and not space.H[i][j].is_zero():
                raise LatticeError("coordinate subspace does not split off orthogonally")
    return HermSpace(space.fd, tuple(tuple(space.H[i][j] for j in coords) for i in coords))


def embed_in(L: HermLattice, space: HermSpace) -> HermLattice:
    """Image of L under the inclusion of its space as the first coordinates of ``space``."""
    extra = space.n - L.space.n
    return HermLattice(space, [list(v) + [L.fd.zero] * extra for v in L.basis])


def epsilon(space: HermSpace) -> int:
    """The sign of the isomorphism class of a nondegenerate Hermitian space.

    inert: (-1)^{vF0(det)}; split: +1; ramified: the Hilbert symbol
    ((-1)^{n(n-1)/2} det, d)_p, which is +1 exactly when the space has a
    Hermitian basis with determinant equal to (-1)^{n(n-1)/2} up to norms.
    """
    fd = space.fd
    if fd.split:
        return 1
    det = mat_det(fd, [list(r) for r in space.H])
    dval = det.base_value()
    if fd.case is Case.INERT:
        return -1 if vp(dval, fd.p) % 2 else 1
    n = space.n
    return hilbert_symbol((-1) ** (n * (n - 1) // 2) * dval, fd.d, fd.p)


def unimodular_change(L: HermLattice, U: Matrix) -> list[Vector]:
    """Generators B*U for U over O_F; the lattice is unchanged when U is invertible."""
    m = L.rank
    return [
        _combine(L, [U[k][j] for k in range(m)])
        for j in range(m)
    ]


def is_unit(fd: FieldData, x: FieldElem) -> bool:
    if fd.split:
        return vp(x.a, fd.p) == 0 and vp(x.b, fd.p) == 0
    return valuation(x, "vF") == 0


__all__ = [
    "HermSpace",
    "HermLattice",
    "FiniteModuleDesc",
    "LatticeError",
    "InvariantViolation",
    "gram",
    "dual",
    "is_integral",
    "index_length",
    "lattice_type",
    "gram_type",
    "socle_vectors",
    "norm_integral",
    "mat_det",
    "mat_inv",
    "line_vector",
    "embed_in",
    "subspace",
    "restrict_to_subspace",
    "unimodular_change",
    "is_unit",
    "snf_type",
    "val_det",
    "a_max",
    "snf_invariants",
    "disc_module",
    "orth_extend",
    "intersect_with_subspace",
    "epsilon",
    "diagonal_space",
    "lattice_from_gram",
    "INF",
]

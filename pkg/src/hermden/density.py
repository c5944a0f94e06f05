"""Local density polynomials of Hermitian lattices and the quantities built from them.

Notation used throughout:

* ``Den(X, L)`` for a lattice of full rank n is the weighted count of integral
  overlattices ``sum_M X^{l(M/L)} prim(t(M))`` with the exclusive primitive
  product ``prod_{i<t}(1 - eta^i q^i X)``.
* For a corank one lattice ``Lflat`` only the evaluation ``G(X) = Den(q^2 X, Lflat)``
  is computed, as ``S(X) / (1 - X)`` where ``S`` is the kernel sum with weights
  ``(qX)^l`` and the inclusive primitive product.
* ``Den*(q^2 X, Lflat) = X^{-val/2} G(X)``; the starred value is ``bF * G(1)``
  and the derivative is ``-2 bF d/dX`` of the starred polynomial at X = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from fractions import Fraction
from typing import Callable

from .enumerate import DEFAULT_CAP, integral_overlattices, submodules, t0
from .hermlattice import (
    HermLattice,
    HermSpace,
    InvariantViolation,
    LatticeError,
    disc_module,
    dual,
    gram_type,
    is_integral,
    lattice_type,
    val_det,
)
from .laurent import ONE, ZERO, HalfLaurent
from .localfield import Case, FieldData, FieldElem, eta_power, hilbert_symbol, valuation, vp
from .enumerate import _residues

X = HalfLaurent.X()


class DivisibilityError(ArithmeticError):
    """The kernel sum was not divisible by (1 - X): the conventions are inconsistent."""


@dataclass
class DenContext:
    """Field data, ambient rank n and the memo tables shared by density computations."""

    fd: FieldData
    n: int
    cap: int = DEFAULT_CAP
    memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.fd.case is Case.RAMIFIED and self.n % 2:
            raise ValueError("the ramified case needs an even ambient rank n")

    def cached(self, tag: str, L: HermLattice, fn: Callable):
        k = (tag, L.space, L.key)
        if k not in self.memo:
            self.memo[k] = fn()
        return self.memo[k]

    def overlattices(self, L: HermLattice) -> list[HermLattice]:
        return integral_overlattices(L, self.cap)


# ---------------------------------------------------------------------------
# primitive products


def den_primitive(fd: FieldData, t: int, inclusive: bool = False) -> HalfLaurent:
    """prod_{i=0}^{T} (1 - eta^i(varpi_0) q^i X) with T = t (inclusive) or t - 1."""
    top = t if inclusive else t - 1
    out = ONE
    for i in range(top + 1):
        c = eta_power(fd, i) * fd.q**i
        if c:
            out = out * (ONE - HalfLaurent.monomial(1, c))
    return out


def m_poly(q: int, t: int) -> HalfLaurent:
    """m(t, X) = prod_{i<t} (1 - q^i X)."""
    out = ONE
    for i in range(t):
        out = out * (ONE - HalfLaurent.monomial(1, q**i))
    return out


def _ell(L: HermLattice, M: HermLattice) -> int:
    # M comes out of the overlattice enumeration, so it contains L
    return L.log_volume - M.log_volume


# ---------------------------------------------------------------------------
# full rank densities


def den_full(ctx: DenContext, L: HermLattice) -> HalfLaurent:
    """Den(X, L) for L of rank n."""
    if L.rank != ctx.n:
        raise LatticeError(f"den_full needs a lattice of rank n = {ctx.n}, got {L.rank}")

    def run():
        if not is_integral(L):
            return ZERO
        total = ZERO
        for M in ctx.overlattices(L):
            total = total + HalfLaurent.monomial(_ell(L, M)) * den_primitive(ctx.fd, lattice_type(M))
        return total

    return ctx.cached("den_full", L, run)


# ---------------------------------------------------------------------------
# corank one


def kernel_sum(ctx: DenContext, Lflat: HermLattice) -> HalfLaurent:
    """S(X) = sum over integral N containing Lflat of (qX)^{l(N/Lflat)} prod_{i<=t(N)}(...)."""
    fd = ctx.fd
    if not is_integral(Lflat):
        return ZERO
    total = ZERO
    for N in ctx.overlattices(Lflat):
        ell = _ell(Lflat, N)
        total = total + HalfLaurent.monomial(ell, fd.q**ell) * den_primitive(fd, lattice_type(N), inclusive=True)
    return total


def _check_corank1(ctx: DenContext, Lflat: HermLattice):
    if Lflat.rank != ctx.n - 1:
        raise LatticeError(f"expected a lattice of rank n - 1 = {ctx.n - 1}, got {Lflat.rank}")


def den_corank1_q2(ctx: DenContext, Lflat: HermLattice) -> HalfLaurent:
    """G(X) = Den(q^2 X, Lflat) = S(X) / (1 - X), with exact division."""
    _check_corank1(ctx, Lflat)

    def run():
        try:
            return kernel_sum(ctx, Lflat).divide_one_minus_x()
        except ArithmeticError as exc:
            raise DivisibilityError(f"kernel sum of {Lflat!r} is not divisible by 1 - X") from exc

    return ctx.cached("G", Lflat, run)


def density_val(L: HermLattice) -> int:
    """The valuation entering the density bookkeeping.

    vF0 of the Gram determinant, plus floor(rank / 2) in the ramified case when
    pairings take values in the inverse different (a self-dual lattice of even
    rank then has valuation 0).  For rank n this is the exponent of the
    functional equation; for rank n - 1 it is the half-power normalization
    exponent, and for rank 1 it is vF0((x, x)).
    """
    v = val_det(L)
    fd = L.fd
    if fd.case is Case.RAMIFIED and fd.ramified_convention == "B":
        v += L.rank // 2
    return v


def val_prime(ctx: DenContext, Lflat: HermLattice) -> int:
    """Exponent of the half-power normalization of Den*."""
    return density_val(Lflat)


def den_star_q2(ctx: DenContext, Lflat: HermLattice) -> HalfLaurent:
    """Den*(q^2 X, Lflat) = X^{-val/2} G(X)."""
    _check_corank1(ctx, Lflat)
    if not is_integral(Lflat):
        return ZERO
    return HalfLaurent.monomial(Fraction(-val_prime(ctx, Lflat), 2)) * den_corank1_q2(ctx, Lflat)


def den_star_value(ctx: DenContext, Lflat: HermLattice) -> Fraction:
    """Den*(Lflat) = bF * Den*(q^2, Lflat)."""
    return ctx.fd.bF * den_star_q2(ctx, Lflat).at_one()


def partial_den_star(ctx: DenContext, Lflat: HermLattice) -> Fraction:
    """-2 bF d/dX at X = 1 of Den*(q^2 X, Lflat)."""
    return -2 * ctx.fd.bF * den_star_q2(ctx, Lflat).deriv_at_one()


# ---------------------------------------------------------------------------
# horizontal primitives by Moebius inversion over the overlattice poset


def _proper_overlattices_checked(ctx: DenContext, M: HermLattice) -> list[HermLattice]:
    out = []
    for N in ctx.overlattices(M):
        if N.key == M.key:
            continue
        if lattice_type(N) > 1:
            raise InvariantViolation(f"integral overlattice of type {lattice_type(N)} above a type <= 1 lattice {M!r}")
        out.append(N)
    return out


def _mobius(ctx: DenContext, Mflat: HermLattice, tag: str, total: Callable[[HermLattice], Fraction]) -> Fraction:
    _check_corank1(ctx, Mflat)
    if not is_integral(Mflat):
        return Fraction(0)
    if lattice_type(Mflat) > 1:
        raise LatticeError("primitive parts are defined for lattices of type at most 1")

    def run():
        value = total(Mflat)
        for N in _proper_overlattices_checked(ctx, Mflat):
            value -= _mobius(ctx, N, tag, total)
        return value

    return ctx.cached(tag, Mflat, run)


def den_star_prim(ctx: DenContext, Mflat: HermLattice) -> Fraction:
    """Den*(Mflat)°: the values summing to Den* over integral overlattices."""
    return _mobius(ctx, Mflat, "den_star_prim", lambda M: den_star_value(ctx, M))


def partial_den_star_h_prim(ctx: DenContext, Mflat: HermLattice) -> Fraction:
    """The horizontal primitive part of the derivative."""
    return _mobius(ctx, Mflat, "h_prim", lambda M: partial_den_star(ctx, M))


def horizontal_lattices(ctx: DenContext, Lflat: HermLattice) -> list[HermLattice]:
    """Integral overlattices of type at most 1."""
    if not is_integral(Lflat):
        return []
    return [M for M in ctx.overlattices(Lflat) if lattice_type(M) <= 1]


def partial_den_star_h(ctx: DenContext, Lflat: HermLattice) -> Fraction:
    return sum((partial_den_star_h_prim(ctx, M) for M in horizontal_lattices(ctx, Lflat)), Fraction(0))


def partial_den_star_v(ctx: DenContext, Lflat: HermLattice) -> Fraction:
    """Vertical part: the derivative minus its horizontal part."""
    _check_corank1(ctx, Lflat)
    if not is_integral(Lflat):
        return Fraction(0)
    return partial_den_star(ctx, Lflat) - partial_den_star_h(ctx, Lflat)


# ---------------------------------------------------------------------------
# the vector family x, x', x''


def norm_step(fd: FieldData) -> Fraction:
    """N(varpi) for nonsplit F, and p in the split case (so (x,x) has val = step count)."""
    if fd.split:
        return Fraction(fd.p)
    return fd.uniformizer.norm()


@dataclass(frozen=True)
class VectorSetup:
    """L = Lflat (+) <x>, L' = Lflat (+) <x'>, L'' = Lflat (+) <x''> in one space.

    x is the last basis vector; x' = varpi^{-1} x (nonsplit) or varpi_1^{-1} x
    (split), and x'' = varpi^{-1} x in the split case.
    """

    space: HermSpace
    Lflat: HermLattice
    L: HermLattice
    L1: HermLattice
    L2: HermLattice | None
    val_x: int
    x_norm: Fraction


def x_norm(fd: FieldData, val_x: int, unit=1) -> Fraction:
    """(x, x) for the vector of valuation val_x in the family with unit class ``unit``."""
    unit = Fraction(unit)
    if fd.case is Case.INERT:
        return unit * Fraction(fd.p) ** val_x
    return unit * norm_step(fd) ** val_x


def vector_setup(Lflat: HermLattice, val_x: int, unit=1) -> VectorSetup:
    fd = Lflat.fd
    if Lflat.rank != Lflat.space.n:
        raise LatticeError("Lflat must have full rank in its space")
    c = x_norm(fd, val_x, unit)
    n1 = Lflat.space.n
    H = [list(r) + [fd.zero] for r in Lflat.space.H] + [[fd.zero] * n1 + [fd.from_base(c)]]
    space = HermSpace(fd, tuple(tuple(r) for r in H))
    flat = [list(v) + [fd.zero] for v in Lflat.basis]
    Lf = HermLattice(space, flat)

    def with_x(scale: FieldElem) -> HermLattice:
        return HermLattice(space, flat + [[fd.zero] * n1 + [scale]])

    if fd.split:
        L1 = with_x(fd.varpi1.inv())
        L2 = with_x(fd.uniformizer.inv())
    else:
        L1 = with_x(fd.uniformizer.inv())
        L2 = None
    return VectorSetup(space, Lf, with_x(fd.one), L1, L2, val_x, c)


def x_unit_for_sign(ctx: DenContext, Lflat: HermLattice, sign: int) -> int | None:
    """A unit u so that the space Lflat_F (+) <x> with (x,x) = u * step^v has epsilon = sign.

    Returns None when the sign cannot be reached by a unit change (inert and
    split: the sign depends only on val).
    """
    fd = ctx.fd
    if fd.case is not Case.RAMIFIED:
        return None
    from .hermlattice import epsilon

    for u in (1, _nonresidue(fd.p)):
        if epsilon(vector_setup(Lflat, 0, u).space) == sign:
            return u
    raise InvariantViolation("no unit reaches the requested sign")


def _nonresidue(p: int) -> int:
    from .localfield import smallest_nonresidue

    return smallest_nonresidue(p)


def val_double_prime(fd: FieldData, val_x: int) -> Fraction:
    """val''(x): (val(x) - 1)/2 inert, the rank-one density valuation val(x) otherwise."""
    if fd.case is Case.INERT:
        return Fraction(val_x - 1, 2)
    return Fraction(val_x)


# ---------------------------------------------------------------------------
# primitive densities along the x-line


def _disc_elements(Lflat: HermLattice):
    """Pairs (y, orders) running over Lflat^* / Lflat.

    ``orders`` is the exact varpi-order of y (nonsplit) or the pair of exact
    varpi_1, varpi_2 orders (split).
    """
    fd = Lflat.fd
    D = disc_module(Lflat)
    n = Lflat.space.n
    zero_vec = [fd.zero] * n

    def add(v, w, c):
        return [a + c * b for a, b in zip(v, w)]

    if fd.split:
        p = fd.p
        slots = []
        for (ea, eb), (ga, gb) in zip(D.exponents, D.generators):
            if ea:
                slots.append((0, ea, list(ga)))
            if eb:
                slots.append((1, eb, list(gb)))
        yield from _split_combos(fd, slots, 0, zero_vec, [0, 0], p, add)
        return
    slots = [(e, list(g)) for e, g in zip(D.exponents, D.generators) if e]
    yield from _nonsplit_combos(fd, slots, 0, zero_vec, 0, add)


def _nonsplit_combos(fd, slots, i, acc, order, add):
    if i == len(slots):
        yield acc, order
        return
    e, g = slots[i]
    for a in _residues(fd, e):
        if a.is_zero():
            yield from _nonsplit_combos(fd, slots, i + 1, acc, order, add)
        else:
            o = e - valuation(a, "vF")
            yield from _nonsplit_combos(fd, slots, i + 1, add(acc, g, a), max(order, o), add)


def _split_combos(fd, slots, i, acc, orders, p, add):
    if i == len(slots):
        yield acc, tuple(orders)
        return
    comp, e, g = slots[i]
    for a in range(p**e):
        if a == 0:
            yield from _split_combos(fd, slots, i + 1, acc, orders, p, add)
            continue
        o = e - vp(a, p)
        new = list(orders)
        new[comp] = max(new[comp], o)
        yield from _split_combos(fd, slots, i + 1, add(acc, g, fd.from_base(a)), new, p, add)


def _y_terms(ctx: DenContext, Lflat: HermLattice, val_x: int, unit=1, mode: str = "all"):
    """(ell, t(M)) for M = Lflat (+) O_F (y + c x) running over the integral
    overlattices of L = Lflat (+) <x> with M cap Lflat_F = Lflat.

    ``mode``: ``all``; ``exact`` keeps varpi^{-1} x outside M (split: both
    varpi_i^{-1} x); ``exact1`` (split) keeps varpi_1^{-1} x outside M.
    """
    fd = ctx.fd
    if not is_integral(Lflat):
        return
    c = x_norm(fd, val_x, unit)
    space = Lflat.space
    T = Lflat.gram_matrix()
    m = Lflat.rank
    for y, orders in _disc_elements(Lflat):
        yy = space.pair(y, y).base_value()
        col = [space.pair(b, y) for b in Lflat.basis]
        for es in _exponent_range(fd, orders, mode, val_x, yy):
            if fd.split:
                e1, e2 = es
                nc = Fraction((-1) ** e2, fd.p ** (e1 + e2))
                ell = e1 + e2
            else:
                nc = norm_step(fd) ** (-es)
                ell = fd.residue_degree * es
            zz = yy + nc * c
            if vp(zz, fd.p) < 0:
                continue
            G = [list(T[i]) + [col[i]] for i in range(m)]
            G.append([col[j].conj() for j in range(m)] + [fd.from_base(zz)])
            yield ell, gram_type(fd, G)


def _exponent_range(fd: FieldData, orders, mode: str, val_x: int, yy: Fraction):
    """Candidate exponents e >= order(y) for which (y + varpi^{-e} x) may be integral."""
    floor_val = min(0, vp(yy, fd.p)) if yy else 0
    if fd.split:
        o1, o2 = orders
        # N(c)(x,x) has valuation val_x - e1 - e2; beyond floor_val it cannot cancel
        top = val_x - floor_val
        r1 = [o1] if mode in ("exact", "exact1") else range(o1, top + 1)
        r2 = [o2] if mode == "exact" else range(o2, top + 1)
        for e1 in r1:
            for e2 in r2:
                if e1 + e2 <= top or (e1, e2) == (o1, o2):
                    yield (e1, e2)
        return
    step = 2 if fd.case is Case.INERT else 1
    top = (val_x - floor_val) // step
    if mode == "exact":
        yield orders
        return
    for e in range(orders, max(orders, top) + 1):
        yield e


def den_vec_prim(ctx: DenContext, Lflat: HermLattice, val_x: int, unit=1, mode: str = "all") -> HalfLaurent:
    """Den°_{Lflat,x}(X): sum over M containing L with M cap Lflat_F = Lflat, via the y-parameterization."""
    _check_corank1(ctx, Lflat)

    def run():
        total = ZERO
        for ell, t in _y_terms(ctx, Lflat, val_x, unit, mode):
            total = total + HalfLaurent.monomial(ell) * den_primitive(ctx.fd, t)
        return total

    return ctx.cached(f"den_vec_prim:{val_x}:{unit}:{mode}", Lflat, run)


def den_vec_prim_by_enumeration(ctx: DenContext, Lflat: HermLattice, val_x: int, unit=1) -> HalfLaurent:
    """The same sum by filtering the overlattices of L (second, independent route)."""
    from .enumerate import intersects_subspace_exactly

    S = vector_setup(Lflat, val_x, unit)
    if not is_integral(S.L):
        return ZERO
    coords = list(range(Lflat.rank))
    pred = intersects_subspace_exactly(coords, S.Lflat)
    total = ZERO
    for M in ctx.overlattices(S.L):
        if pred(S.L, M):
            total = total + HalfLaurent.monomial(_ell(S.L, M)) * den_primitive(ctx.fd, lattice_type(M))
    return total


def den_full_by_flats(ctx: DenContext, Lflat: HermLattice, val_x: int, unit=1) -> HalfLaurent:
    """Den(X, Lflat (+) <x>) as sum over Mflat of X^{l(Mflat/Lflat)} Den°_{Mflat,x}(X)."""
    if not is_integral(Lflat):
        return ZERO
    total = ZERO
    for M in ctx.overlattices(Lflat):
        total = total + HalfLaurent.monomial(_ell(Lflat, M)) * den_vec_prim(ctx, M, val_x, unit)
    return total


def f_x(ctx: DenContext, Lflat: HermLattice, val_x: int, unit=1) -> HalfLaurent:
    """The difference polynomial of the stabilization lemma, from its definition."""
    fd = ctx.fd
    d0 = den_vec_prim(ctx, Lflat, val_x, unit)
    if fd.case is Case.INERT:
        return d0 - X * X * den_vec_prim(ctx, Lflat, val_x - 2, _unit_shift(fd, unit, 1))
    if fd.case is Case.RAMIFIED:
        return d0 - X * den_vec_prim(ctx, Lflat, val_x - 1, unit)
    return (
        d0
        - 2 * X * den_vec_prim(ctx, Lflat, val_x - 1, unit)
        + X * X * den_vec_prim(ctx, Lflat, val_x - 2, _unit_shift(fd, unit, 1))
    )


def _unit_shift(fd: FieldData, unit, k: int):
    """Unit class of (x', x') when x' = varpi^{-k} x, as consumed by x_norm."""
    if fd.split:
        return Fraction(unit) * (-1) ** k
    return unit


def den_vec_prim_difference(ctx: DenContext, Lflat: HermLattice, val_x: int, unit=1) -> HalfLaurent:
    """Den°_{Lflat,x} - X Den°_{Lflat,x'} (split, x' = varpi_1^{-1} x)."""
    if not ctx.fd.split:
        raise ValueError("only used in the split case")
    return den_vec_prim(ctx, Lflat, val_x, unit) - X * den_vec_prim(ctx, Lflat, val_x - 1, unit)


# ---------------------------------------------------------------------------
# the with-vector derivative family


@dataclass
class VecFamily:
    full: Fraction
    h: Fraction
    v: Fraction
    h_prim: dict


def _vec_value(ctx: DenContext, poly: HalfLaurent) -> Fraction:
    if ctx.fd.split:
        return poly.at_one()
    return -ctx.fd.bF * poly.deriv_at_one()


def partial_den_vec_family(ctx: DenContext, Lflat: HermLattice, val_x: int, unit=1) -> VecFamily:
    """full / horizontal / vertical parts of the with-vector quantity at val(x).

    Nonsplit: derivative values -bF d/dX at 1; split: values at X = 1.
    """
    _check_corank1(ctx, Lflat)
    if not is_integral(Lflat):
        return VecFamily(Fraction(0), Fraction(0), Fraction(0), {})
    S = vector_setup(Lflat, val_x, unit)
    full = _vec_value(ctx, den_full(ctx, S.L))
    h_prim = {}
    for M in horizontal_lattices(ctx, Lflat):
        h_prim[M.key] = _vec_value(ctx, den_vec_prim(ctx, M, val_x, unit))
    h = sum(h_prim.values(), Fraction(0))
    return VecFamily(full, h, full - h, h_prim)


def h_prim_vec(ctx: DenContext, Mflat: HermLattice, val_x: int, unit=1) -> Fraction:
    return _vec_value(ctx, den_vec_prim(ctx, Mflat, val_x, unit))


# ---------------------------------------------------------------------------
# split auxiliaries


def h_diff(ctx: DenContext, Lflat: HermLattice, val_x: int, unit=1) -> HalfLaurent:
    """The split difference sum over cyclic M/L with M_1 meeting Lflat_F in Lflat_1,
    M_2 not meeting it in Lflat_2, and varpi_1^{-1} x not in M."""
    from .enumerate import component_intersects_exactly, cyclic_quotient, excludes_vector

    fd = ctx.fd
    if not fd.split:
        raise ValueError("h_diff is only defined in the split case")
    S = vector_setup(Lflat, val_x, unit)
    if not is_integral(S.L):
        return ZERO
    coords = list(range(Lflat.rank))
    n = S.space.n
    x1 = [fd.zero] * (n - 1) + [fd.varpi1.inv()]
    preds = [
        component_intersects_exactly(0, coords, S.Lflat, True),
        component_intersects_exactly(1, coords, S.Lflat, False),
        cyclic_quotient(),
        excludes_vector(x1),
    ]
    total = ZERO
    for M in ctx.overlattices(S.L):
        if all(pr(S.L, M) for pr in preds):
            total = total + HalfLaurent.monomial(_ell(S.L, M)) * m_poly(fd.q, lattice_type(M))
    return total


def alpha_b(exponents, b: int, p: int, cap: int = DEFAULT_CAP) -> HalfLaurent:
    """sum over cyclic N in A_b = T (+) p^{-b}Z_p/Z_p of X^{ord N} m(t_0(A_b/N), X).

    Counted through generators: the elements g of A_b are grouped by their
    coordinate valuations; <g> has ord = max(e_i - v_i), phi(p^ord) generators,
    and t_0(A_b/<g>) = t_0(A_b) - [g not in p A_b].
    """
    return _alpha_counting(tuple(sorted(a for a in exponents if a > 0)) + ((b,) if b > 0 else ()), p)


@lru_cache(maxsize=None)
def _alpha_counting(exps: tuple, p: int) -> HalfLaurent:
    r = len(exps)
    totals: dict[tuple[int, bool], int] = {}
    for vals in product(*(range(e + 1) for e in exps)):
        count = 1
        for e, v in zip(exps, vals):
            count *= p ** (e - v) - p ** (e - v - 1) if v < e else 1
        order = max((e - v for e, v in zip(exps, vals)), default=0)
        primitive = any(v == 0 for v in vals)
        key = (order, primitive)
        totals[key] = totals.get(key, 0) + count
    total = ZERO
    for (order, primitive), count in sorted(totals.items()):
        gens = p**order - p ** (order - 1) if order else 1
        if count % gens:
            raise InvariantViolation("generator count does not divide the element count")
        total = total + (count // gens) * HalfLaurent.monomial(order) * m_poly(p, r - int(primitive))
    return total


def alpha_b_by_submodules(exponents, b: int, p: int, cap: int = DEFAULT_CAP) -> HalfLaurent:
    """alpha_b from the submodule enumeration (slow; cross-check for small modules)."""
    exps = list(exponents) + [b]
    total = ZERO
    for N in submodules(exps, p, "cyclic", cap):
        total = total + HalfLaurent.monomial(N.order) * m_poly(p, N.t0_quotient)
    return total


def is_self_dual(L: HermLattice) -> bool:
    return is_integral(L) and dual(L).key == L.key


__all__ = [
    "DenContext",
    "DivisibilityError",
    "VectorSetup",
    "VecFamily",
    "den_primitive",
    "m_poly",
    "den_full",
    "kernel_sum",
    "den_corank1_q2",
    "density_val",
    "val_prime",
    "den_star_q2",
    "den_star_value",
    "partial_den_star",
    "den_star_prim",
    "partial_den_star_h_prim",
    "partial_den_star_h",
    "partial_den_star_v",
    "horizontal_lattices",
    "vector_setup",
    "x_norm",
    "x_unit_for_sign",
    "val_double_prime",
    "den_vec_prim",
    "den_vec_prim_by_enumeration",
    "den_full_by_flats",
    "f_x",
    "den_vec_prim_difference",
    "partial_den_vec_family",
    "h_prim_vec",
    "h_diff",
    "alpha_b",
    "alpha_b_by_submodules",
    "t0",
    "hilbert_symbol",
]

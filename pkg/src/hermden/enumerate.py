"""Enumeration of integral overlattices, intermediate lattices and finite submodules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .hermlattice import (
    FiniteModuleDesc,
    HermLattice,
    LatticeError,
    _echelon,
    _NonsplitRing,
    _snf_exponents,
    _ZpRing,
    dual,
    intersect_with_subspace,
    is_integral,
    lattice_type,
    norm_integral,
    snf_invariants,
    socle_vectors,
)
from .localfield import Case, FieldData, FieldElem

DEFAULT_CAP = 10**6


class ResourceCapError(RuntimeError):
    """An enumeration exceeded its configured cap."""

    def __init__(self, message: str, partial_count: int):
        super().__init__(f"{message} (partial count {partial_count})")
        self.partial_count = partial_count


# a process-wide memo: canonical key -> sorted overlattices
_MEMO: dict = {}
_MEMO_STATS = {"hits": 0, "misses": 0}


def cache_clear() -> None:
    _MEMO.clear()
    _MEMO_STATS.update(hits=0, misses=0)


def cache_info() -> dict:
    return {"entries": len(_MEMO), **_MEMO_STATS}


def _memo_key(L: HermLattice, tag: str):
    return (tag, L.space, L.key)


def sort_key(L: HermLattice):
    return repr(L.key)


# ---------------------------------------------------------------------------
# integral overlattices


def integral_overlattices(L: HermLattice, cap: int = DEFAULT_CAP) -> list[HermLattice]:
    """All M with L inside M inside M^*, each once, sorted by canonical key.

    Built level by level: every proper integral overlattice of M contains
    M + O_F v for some v in M^* with varpi v in M (or varpi_i v in M in the
    split case) and (v, v) integral.
    """
    if not is_integral(L):
        return []
    mk = _memo_key(L, "overlattices")
    hit = _MEMO.get(mk)
    if hit is not None:
        _MEMO_STATS["hits"] += 1
        if len(hit) > cap:
            # same outcome as a cold run
            raise ResourceCapError("integral overlattice enumeration exceeded the cap", cap + 1)
        return list(hit)
    _MEMO_STATS["misses"] += 1
    seen = {L.key: L}
    frontier = [L]
    while frontier:
        nxt = []
        for M in frontier:
            for v in socle_vectors(M):
                if not norm_integral(M, v):
                    continue
                N = M.with_vectors([v])
                if N.key in seen:
                    continue
                seen[N.key] = N
                nxt.append(N)
                if len(seen) > cap:
                    raise ResourceCapError("integral overlattice enumeration exceeded the cap", len(seen))
        frontier = nxt
    out = sorted(seen.values(), key=sort_key)
    _MEMO[mk] = tuple(out)
    return out


# ---------------------------------------------------------------------------
# predicates


@dataclass(frozen=True)
class Predicate:
    """A named filter on overlattices M of a base lattice L."""

    name: str
    fn: Callable[[HermLattice, HermLattice], bool]

    def __call__(self, L: HermLattice, M: HermLattice) -> bool:
        return self.fn(L, M)


def intersects_subspace_exactly(coords: Sequence[int], target: HermLattice) -> Predicate:
    """M intersected with the coordinate subspace equals ``target``."""
    coords = tuple(coords)
    return Predicate(f"cap{coords}=", lambda L, M: intersect_with_subspace(M, coords).key == target.key)


def component_intersects_exactly(component: int, coords: Sequence[int], target: HermLattice, equal: bool = True) -> Predicate:
    """Split only: e_i M intersected with the subspace equals (or differs from) e_i target."""
    coords = tuple(coords)

    def fn(L, M):
        a = component_key(intersect_with_subspace(M, coords), component)
        b = component_key(target, component)
        return (a == b) == equal

    return Predicate(f"comp{component}cap{coords}{'=' if equal else '!='}", fn)


def component_key(M: HermLattice, component: int):
    """Canonical key of the idempotent component e_i M (split only)."""
    if not M.fd.split:
        raise ValueError("components only exist in the split case")
    return M.key[2 * component : 2 * component + 2]


def cyclic_quotient() -> Predicate:
    return Predicate("cyclic", lambda L, M: is_cyclic_quotient(L, M))


def type_at_most(k: int) -> Predicate:
    return Predicate(f"type<={k}", lambda L, M: lattice_type(M) <= k)


def excludes_vector(v) -> Predicate:
    v = list(v)
    return Predicate(f"excl{tuple(v)!r}", lambda L, M: not M.contains_vector(v))


def contains_vector(v) -> Predicate:
    v = list(v)
    return Predicate(f"incl{tuple(v)!r}", lambda L, M: M.contains_vector(v))


def is_cyclic_quotient(L: HermLattice, M: HermLattice) -> bool:
    """Whether M / L is generated by one element over O_F."""
    d = snf_invariants(L, M)
    if L.fd.split:
        return sum(1 for a, _ in d.exponents if a) <= 1 and sum(1 for _, b in d.exponents if b) <= 1
    return d.nonzero_count() <= 1


def filtered_overlattices(L: HermLattice, preds: Iterable[Predicate], cap: int = DEFAULT_CAP) -> list[HermLattice]:
    preds = list(preds)
    return [M for M in integral_overlattices(L, cap) if all(p(L, M) for p in preds)]


# ---------------------------------------------------------------------------
# intermediate lattices by normal-form enumeration (independent second route)


def _residues(fd: FieldData, k: int) -> list[FieldElem]:
    """All canonical residues of O_F modulo varpi^k (nonsplit)."""
    if k <= 0:
        return [fd.zero]
    p = fd.p
    if fd.case is Case.INERT:
        return [fd.elem(a, b) for a in range(p**k) for b in range(p**k)]
    return [fd.elem(a, b) for a in range(p ** (-(-k // 2))) for b in range(p ** (k // 2))]


def _hnf_matrices_dvr(m: int, max_exp: int, residues: Callable[[int], list], pivot: Callable[[int], object], zero):
    """Lower-triangular canonical matrices with pivot exponents in [0, max_exp]."""
    for ks in product(range(max_exp + 1), repeat=m):
        slots = [(i, j) for j in range(m) for i in range(j + 1, m)]
        choices = [residues(ks[i]) for (i, j) in slots]
        for vals in product(*choices):
            H = [[zero] * m for _ in range(m)]
            for j in range(m):
                H[j][j] = pivot(ks[j])
            for (i, j), v in zip(slots, vals):
                H[i][j] = v
            yield H


def intermediate_lattices(L: HermLattice, N: HermLattice, cap: int = DEFAULT_CAP) -> list[HermLattice]:
    """All O_F-lattices M with L inside M inside N, by enumerating normal forms in N-coordinates."""
    if not N.contains(L) or L.rank != N.rank:
        raise LatticeError("intermediate_lattices needs L inside N of equal rank")
    fd = L.fd
    m = N.rank
    d = snf_invariants(L, N)
    out = {}
    count = 0
    if fd.split:
        emax_a = max((a for a, _ in d.exponents), default=0)
        emax_b = max((b for _, b in d.exponents), default=0)
        ring = _ZpRing(fd.p)
        p = fd.p

        def zres(k):
            return [Fraction(a) for a in range(p**k)] if k > 0 else [Fraction(0)]

        za = list(_hnf_matrices_dvr(m, emax_a, zres, ring.pivot, Fraction(0)))
        zb = list(_hnf_matrices_dvr(m, emax_b, zres, ring.pivot, Fraction(0)))
        def comp_cols(H, comp):
            return [
                [sum((H[k][j] * (N.basis[k][i].a if comp == 0 else N.basis[k][i].b) for k in range(m)), Fraction(0))
                 for i in range(N.space.n)]
                for j in range(m)
            ]

        def comp_key(vecs):
            cols, prow = _echelon(vecs, N.space.n, ring)
            return tuple(tuple(c) for c in cols), tuple(prow)

        La = [[e.a for e in v] for v in L.basis]
        Lb = [[e.b for e in v] for v in L.basis]
        cand = []
        for comp, zs, Lc in ((0, za, La), (1, zb, Lb)):
            keep = []
            for H in zs:
                vecs = comp_cols(H, comp)
                if comp_key(vecs) == comp_key(vecs + Lc):
                    keep.append(vecs)
            cand.append(keep)
        for A in cand[0]:
            for B in cand[1]:
                count += 1
                if count > cap:
                    raise ResourceCapError("normal-form enumeration exceeded the cap", count)
                gens = [[FieldElem(fd, x, y) for x, y in zip(u, v)] for u, v in zip(A, B)]
                M = HermLattice(N.space, gens)
                out[M.key] = M
        return sorted(out.values(), key=sort_key)
    ring = _NonsplitRing(fd)
    emax = max(d.exponents, default=0)
    for H in _hnf_matrices_dvr(m, emax, lambda k: _residues(fd, k), ring.pivot, fd.zero):
        count += 1
        if count > cap:
            raise ResourceCapError("normal-form enumeration exceeded the cap", count)
        vecs = []
        for j in range(m):
            v = [fd.zero] * N.space.n
            for k in range(m):
                if not H[k][j].is_zero():
                    v = [x + H[k][j] * y for x, y in zip(v, N.basis[k])]
            vecs.append(v)
        M = HermLattice(N.space, vecs)
        if M.contains(L):
            out[M.key] = M
    return sorted(out.values(), key=sort_key)


def integral_overlattices_by_normal_forms(L: HermLattice, cap: int = DEFAULT_CAP) -> list[HermLattice]:
    if not is_integral(L):
        return []
    return [M for M in intermediate_lattices(L, dual(L), cap) if is_integral(M)]


@dataclass
class CrossCheckReport:
    identity_id: str
    status: str
    count_bfs: int
    count_normal_forms: int
    detail: str = ""


def cross_enumerate_check(L: HermLattice, cap: int = DEFAULT_CAP) -> CrossCheckReport:
    a = {M.key for M in integral_overlattices(L, cap)}
    b = {M.key for M in integral_overlattices_by_normal_forms(L, cap)}
    status = "pass" if a == b else "fail"
    detail = "" if a == b else f"only-bfs={len(a - b)} only-normal-forms={len(b - a)}"
    return CrossCheckReport("cross_enumerate", status, len(a), len(b), detail)


# ---------------------------------------------------------------------------
# finite O_{F0}-modules


@dataclass(frozen=True)
class Submodule:
    """A submodule N of A = (+) Z_p / p^{a_i}, given by its lattice preimage.

    ``order``: ord(N) for cyclic N (log_p |N|); ``t0_quotient``: t_0(A / N);
    ``length``: log_p |N|.
    """

    columns: tuple
    length: int
    cyclic: bool
    t0_quotient: int

    @property
    def order(self) -> int:
        if not self.cyclic:
            raise ValueError("ord is only defined for cyclic submodules")
        return self.length


def submodules(exponents: Sequence[int], p: int, filter: str = "all", cap: int = DEFAULT_CAP) -> list[Submodule]:
    """Submodules of (+) Z_p / p^{a_i} over O_{F0} = Z_p.

    Each submodule is the image of a lattice Lambda with D Z^r inside Lambda
    inside Z^r (D = diag p^{a_i}), enumerated through its canonical normal form.
    """
    if filter not in ("all", "cyclic"):
        raise ValueError("filter must be 'all' or 'cyclic'")
    exps = [a for a in exponents if a > 0]
    r = len(exps)
    if r == 0:
        return [Submodule((), 0, True, 0)]
    ring = _ZpRing(p)
    emax = max(exps)
    total = sum(exps)
    out = []
    count = 0

    def zres(k):
        return [Fraction(a) for a in range(p**k)] if k > 0 else [Fraction(0)]

    for H in _hnf_matrices_dvr(r, emax, zres, ring.pivot, Fraction(0)):
        count += 1
        if count > cap:
            raise ResourceCapError("submodule enumeration exceeded the cap", count)
        # D columns must lie in the column span of H: solve lower triangular
        if not _contains_diag(H, exps, p):
            continue
        piv = [ring.val(H[i][i]) for i in range(r)]
        quotient_len = sum(piv)  # log_p |Z^r / Lambda| = log_p |A / N|
        length = total - quotient_len
        # N = Lambda / D; cyclic iff D inside Lambda has at most one nonzero divisor
        coords = _solve_lower(H, [[Fraction(p**exps[j]) if i == j else Fraction(0) for i in range(r)] for j in range(r)])
        ex, _ = _snf_exponents(coords, ring)
        cyc = sum(1 for e in ex if e) <= 1
        ex_q, _ = _snf_exponents(H, ring)
        t0 = sum(1 for e in ex_q if e)
        if filter == "cyclic" and not cyc:
            continue
        out.append(Submodule(tuple(tuple(row) for row in H), length, cyc, t0))
    return out


def _solve_lower(H, vecs):
    """Coordinates (as matrix columns) of the vectors in the lower-triangular basis H."""
    r = len(H)
    cols = []
    for v in vecs:
        c = [Fraction(0)] * r
        for i in range(r):
            s = v[i] - sum((H[i][j] * c[j] for j in range(i)), Fraction(0))
            c[i] = s / H[i][i]
        cols.append(c)
    return [[cols[j][i] for j in range(len(cols))] for i in range(r)]


def _contains_diag(H, exps, p) -> bool:
    r = len(H)
    coords = _solve_lower(H, [[Fraction(p**exps[j]) if i == j else Fraction(0) for i in range(r)] for j in range(r)])
    return all(x.denominator % p != 0 for row in coords for x in row)


def t0(exponents: Sequence[int]) -> int:
    """dim over F_q of T / varpi_0 T."""
    return sum(1 for a in exponents if a > 0)


def generator_count(desc: FiniteModuleDesc) -> int:
    """Number of generators of a cyclic O_F-module described by ``desc``."""
    fd = desc.fd
    q = fd.q
    if fd.split:
        total = Fraction(1)
        for a, b in desc.exponents:
            for e in (a, b):
                if e:
                    total *= Fraction(q**e) * (1 - Fraction(1, q))
        return int(total)
    nz = [e for e in desc.exponents if e]
    if not nz:
        return 1
    if len(nz) > 1:
        return 0
    size = q ** (fd.residue_degree * nz[0])
    res = q**fd.residue_degree
    return size - size // res

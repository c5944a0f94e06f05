"""Executable checks of the density identities and lattice lemmas.

Every check returns a ``VerifyReport``.  Comparisons are exact; identities
indexed by val(x) pass when they hold at every tested val(x) strictly above
the stated threshold (holding below it is recorded but not required).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import density as D
from .enumerate import ResourceCapError
from .hermlattice import (
    HermLattice,
    HermSpace,
    InvariantViolation,
    LatticeError,
    _snf_exponents,
    _ZpRing,
    a_max,
    diagonal_space,
    disc_module,
    epsilon,
    gram_type,
    intersect_with_subspace,
    is_unit,
    is_integral,
    lattice_from_gram,
    lattice_type,
    snf_type,
    subspace,
    val_det,
)
from .laurent import HalfLaurent
from .localfield import Case, FieldData

X = HalfLaurent.X()


def _fmt(v) -> str:
    if isinstance(v, HalfLaurent):
        return v.records()
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


@dataclass
class VerifyReport:
    identity_id: str
    params: dict
    status: str
    observed_threshold: int | None = None
    stated_threshold: int | None = None
    lhs: str = ""
    rhs: str = ""
    points: list = field(default_factory=list)
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def record(self) -> str:
        fields = [
            f"id={self.identity_id}",
            "params=" + ",".join(f"{k}:{self.params[k]}" for k in sorted(self.params)),
            f"status={self.status}",
            f"observed={self.observed_threshold}",
            f"stated={self.stated_threshold}",
        ]
        if self.points:
            fields.append("points=" + ",".join(f"{v}:{'T' if ok else 'F'}" for v, ok in self.points))
        if self.status == "fail":
            fields += [f"lhs={self.lhs}", f"rhs={self.rhs}"]
        if self.reason:
            fields.append(f"reason={self.reason}")
        return "\t".join(fields)


def lattice_params(L: HermLattice, **extra) -> dict:
    fd = L.fd
    out = {"case": fd.case.value, "p": fd.p, "gram": _gram_str(L)}
    if fd.case is Case.RAMIFIED:
        out["conv"] = fd.ramified_convention
        out["eta"] = fd.ramified_eta
        out["d"] = _fmt(fd.d)
    out.update(extra)
    return out


def _gram_str(L: HermLattice) -> str:
    rows = []
    for row in L.gram_matrix():
        rows.append(" ".join(_elem_str(e) for e in row))
    return "[" + ";".join(rows) + "]"


def _elem_str(e) -> str:
    if e.fd.split:
        return f"({_fmt(e.a)},{_fmt(e.b)})"
    if e.b == 0:
        return _fmt(e.a)
    return f"{_fmt(e.a)}+{_fmt(e.b)}w"


# ---------------------------------------------------------------------------
# thresholds


def stated_threshold(fd: FieldData, Lflat: HermLattice, weak: bool = False) -> int:
    """val(x) must exceed this.  Induction and limits: a_max (nonsplit) or
    2 a_max (split); stabilization lemmas: 2 a_max / bF."""
    if not is_integral(Lflat):
        return 0
    a = a_max(Lflat)
    if weak:
        return 2 * a // fd.bF
    return 2 * a if fd.split else a


def _series_report(identity_id, params, thr, results: list[tuple[int, bool, object, object]]) -> VerifyReport:
    """results: (val_x, holds, lhs, rhs) in increasing val_x."""
    points = [(v, ok) for v, ok, _, _ in results]
    observed = None
    for v, ok, _, _ in reversed(results):
        if not ok:
            break
        observed = v
    bad = [(v, lhs, rhs) for v, ok, lhs, rhs in results if v > thr and not ok]
    rep = VerifyReport(identity_id, params, "pass" if not bad else "fail", observed, thr, points=points)
    if bad:
        v, lhs, rhs = bad[0]
        rep.lhs, rep.rhs = _fmt(lhs), _fmt(rhs)
        rep.reason = f"first failure above threshold at val(x)={v}"
    elif not any(v > thr for v, _, _, _ in results):
        rep.status = "skipped"
        rep.reason = "no tested val(x) above the threshold"
    return rep


def _guard(identity_id: str, params: dict, fn: Callable[[], VerifyReport]) -> VerifyReport:
    try:
        return fn()
    except ResourceCapError as exc:
        return VerifyReport(identity_id, params, "skipped", reason=f"resource cap: {exc}")


# ---------------------------------------------------------------------------
# induction formula and its weak form


def induction_sides(ctx: D.DenContext, Lflat: HermLattice, v: int, unit=1):
    fd = ctx.fd
    S = D.vector_setup(Lflat, v, unit)
    lhs = D.den_full(ctx, S.L)
    G = D.den_corank1_q2(ctx, Lflat) if is_integral(Lflat) else HalfLaurent()
    d1 = D.den_full(ctx, S.L1)
    if fd.case is Case.INERT:
        rhs = X * X * d1 + (1 - X) * G
    elif fd.case is Case.RAMIFIED:
        rhs = X * d1 + (1 - X) * G
    else:
        rhs = X * d1 + G
    return lhs, rhs


def weak_sides(ctx: D.DenContext, Lflat: HermLattice, v: int, unit=1):
    fd = ctx.fd
    S = D.vector_setup(Lflat, v, unit)
    G = D.den_corank1_q2(ctx, Lflat) if is_integral(Lflat) else HalfLaurent()
    lhs = (1 - X) * G
    d0, d1 = D.den_full(ctx, S.L), D.den_full(ctx, S.L1)
    if fd.case is Case.INERT:
        rhs = d0 - X * X * d1
    elif fd.case is Case.RAMIFIED:
        rhs = d0 - X * d1
    else:
        rhs = d0 - 2 * X * d1 + X * X * D.den_full(ctx, S.L2)
    return lhs, rhs


def _series(identity_id, ctx, Lflat, val_range, sides, weak, unit) -> VerifyReport:
    params = lattice_params(Lflat, n=ctx.n, vals=f"{min(val_range)}..{max(val_range)}" if val_range else "")
    if not val_range:
        return VerifyReport(identity_id, params, "skipped", reason="empty val(x) range")

    def run():
        thr = stated_threshold(ctx.fd, Lflat, weak)
        res = []
        for v in sorted(val_range):
            try:
                lhs, rhs = sides(ctx, Lflat, v, 1 if unit is None else unit)
            except D.DivisibilityError as exc:
                return VerifyReport(identity_id, params, "fail", stated_threshold=thr, reason=str(exc))
            res.append((v, lhs == rhs, lhs, rhs))
        return _series_report(identity_id, params, thr, res)

    return _guard(identity_id, params, run)


def verify_induction(ctx: D.DenContext, Lflat: HermLattice, val_range: Sequence[int], unit=None) -> VerifyReport:
    return _series("induction", ctx, Lflat, list(val_range), induction_sides, False, unit)


def verify_weak_induction(ctx: D.DenContext, Lflat: HermLattice, val_range: Sequence[int], unit=None) -> VerifyReport:
    return _series("weak-induction", ctx, Lflat, list(val_range), weak_sides, True, unit)


# ---------------------------------------------------------------------------
# functional-equation consequences


def verify_fe(ctx: D.DenContext, L: HermLattice) -> VerifyReport:
    fd = ctx.fd
    params = lattice_params(L, n=ctx.n)

    def run():
        F = D.den_full(ctx, L)
        if not is_integral(L):
            return VerifyReport("fe", params, "pass", reason="non-integral: Den = 0")
        val = D.density_val(L)
        f1, f2 = F.deriv_at_one(1), F.deriv_at_one(2)
        if fd.split:
            lhs, rhs = 2 * f1, val * F.at_one()
            ok = lhs == rhs
            return VerifyReport("fe", params, "pass" if ok else "fail", lhs=_fmt(lhs), rhs=_fmt(rhs))
        if epsilon(L.space) != -1:
            return VerifyReport("fe", params, "skipped", reason="epsilon(V) = +1")
        ok = F.at_one() == 0 and f2 == (val - 1) * f1
        return VerifyReport(
            "fe", params, "pass" if ok else "fail",
            lhs=f"{_fmt(F.at_one())},{_fmt(f2)}", rhs=f"0,{_fmt((val - 1) * f1)}",
        )

    return _guard("fe", params, run)


# ---------------------------------------------------------------------------
# limit formulas


def _limit_unit(ctx: D.DenContext, Lflat: HermLattice, unit):
    if unit is not None:
        return unit
    if ctx.fd.case is Case.RAMIFIED:
        return D.x_unit_for_sign(ctx, Lflat, -1)
    return 1


def _eps_ok(ctx: D.DenContext, Lflat: HermLattice, v: int, unit) -> bool:
    if ctx.fd.split:
        return True
    return epsilon(D.vector_setup(Lflat, v, unit).space) == -1


def _prev_val(fd: FieldData, v: int) -> int:
    """val(x') for x' = varpi^{-1} x (nonsplit) or varpi_1^{-1} x (split)."""
    return v - 2 if fd.case is Case.INERT else v - 1


def limit_arguments(ctx: D.DenContext, Lflat: HermLattice, v: int, unit, c_ram: int = 0) -> dict:
    """The limit arguments at val(x) = v: key "0" for the proposition, "1" and
    "2" for the corollary parts, and (3, i) for the i-th type <= 1 overlattice."""
    fd = ctx.fd
    v1 = _prev_val(fd, v)
    den_star = D.den_star_value(ctx, Lflat)
    if fd.split:
        vpp, k = Fraction(v), Fraction(1)
    else:
        # c_ram shifts val''(x) in the ramified case (used by the arbitration suite)
        vpp = D.val_double_prime(fd, v) + (c_ram if fd.case is Case.RAMIFIED else 0)
        k = Fraction(2, fd.bF)
    fam1 = D.partial_den_vec_family(ctx, Lflat, v1, unit)
    fam0 = D.partial_den_vec_family(ctx, Lflat, v, unit)
    out = {
        "0": k * (fam1.full - vpp * den_star),
        "1": k * fam0.v,
        "2": k * (fam1.h - vpp * den_star),
    }
    for i, M in enumerate(D.horizontal_lattices(ctx, Lflat)):
        out[(3, i)] = k * (D.h_prim_vec(ctx, M, v1, unit) - vpp * D.den_star_prim(ctx, M))
    return out


def limit_targets(ctx: D.DenContext, Lflat: HermLattice) -> dict:
    out = {
        "0": D.partial_den_star(ctx, Lflat),
        "1": D.partial_den_star_v(ctx, Lflat),
        "2": D.partial_den_star_h(ctx, Lflat),
    }
    for i, M in enumerate(D.horizontal_lattices(ctx, Lflat)):
        out[(3, i)] = D.partial_den_star_h_prim(ctx, M)
    return out


def _check_constant(rep: VerifyReport, series, thr) -> VerifyReport:
    above = {a for v, ok, t, a in series if v > thr}
    if rep.status == "pass" and len(above) > 1:
        rep.status = "fail"
        rep.reason = "limit argument not constant above the threshold"
    return rep


def verify_limits(ctx: D.DenContext, Lflat: HermLattice, val_range: Sequence[int], unit=None, c_ram: int = 0) -> list[VerifyReport]:
    """One report for the proposition, for corollary parts (1) and (2), and one
    per type <= 1 overlattice for part (3).  Nonsplit cases only use val(x)
    with epsilon(V) = -1."""
    fd = ctx.fd
    params = lattice_params(Lflat, n=ctx.n)
    if not is_integral(Lflat):
        vals = list(val_range)[:2]
        zero = D.partial_den_star(ctx, Lflat) == 0 and all(
            D.partial_den_vec_family(ctx, Lflat, v, 1).full == 0 for v in vals
        )
        return [VerifyReport("limits", params, "pass" if zero else "fail", reason="non-integral")]
    try:
        unit = _limit_unit(ctx, Lflat, unit)
        targets = limit_targets(ctx, Lflat)
        vals = [v for v in sorted(val_range) if _eps_ok(ctx, Lflat, v, unit)]
        series: dict = {k: [] for k in targets}
        for v in vals:
            args = limit_arguments(ctx, Lflat, v, unit, c_ram)
            for k, a in args.items():
                series[k].append((v, a == targets[k], targets[k], a))
    except ResourceCapError as exc:
        return [VerifyReport("limits", params, "skipped", reason=f"resource cap: {exc}")]
    horiz = D.horizontal_lattices(ctx, Lflat)
    if unit != 1:
        params = dict(params, unit=unit)
    reports = []
    for k, res in series.items():
        if isinstance(k, tuple):
            M = horiz[k[1]]
            thr = stated_threshold(fd, M)
            rep = _series_report("limits-3", dict(params, sub=_gram_str(M)), thr, res)
        else:
            thr = stated_threshold(fd, Lflat)
            rep = _series_report(f"limits-{k}", dict(params), thr, res)
        reports.append(_check_constant(rep, res, thr))
    return reports


# ---------------------------------------------------------------------------
# randomized instances


@dataclass
class FuzzConfig:
    instances: int = 200
    seed: int = 0
    max_rank: int = 3
    max_val: int = 2
    # bound on log_p |Lflat^* / Lflat| for the stabilization draws
    max_disc_log: int = 4
    cap: int = D.DEFAULT_CAP


def _rand_unit_base(fd: FieldData, rng: random.Random) -> Fraction:
    if fd.case is Case.RAMIFIED:
        return Fraction(rng.choice([1, D._nonresidue(fd.p)]))
    return Fraction(1)


def _rand_int_elem(fd: FieldData, rng: random.Random, unit: bool = False):
    """A small element of O_F; a unit when ``unit`` is set."""
    p = fd.p
    while True:
        e = fd.elem(rng.randrange(-p, p + 1), rng.randrange(-p, p + 1))
        if not unit or is_unit(fd, e):
            return e


def random_space(fd: FieldData, n: int, rng: random.Random, max_val: int = 2) -> HermSpace:
    """Diagonal space with entries unit * p^a, 0 <= a <= max_val."""
    diag = [_rand_unit_base(fd, rng) * fd.p ** rng.randint(0, max_val) for _ in range(n)]
    return diagonal_space(fd, diag)


def random_sublattice(space: HermSpace, rng: random.Random, scale_prob: float = 0.3) -> HermLattice:
    """A full-rank sublattice of the standard lattice: a random unimodular change
    of basis, with each generator multiplied by varpi with probability scale_prob."""
    fd = space.fd
    n = space.n
    U = [[fd.one if i == j else fd.zero for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = _rand_int_elem(fd, rng)
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
    for i in range(n):
        U[i][i] = U[i][i] if n > 1 else _rand_int_elem(fd, rng, unit=True)
        if rng.random() < scale_prob:
            U[i] = [fd.uniformizer * a for a in U[i]]
    return HermLattice(space, U)


def random_lattice(fd: FieldData, rank: int, rng: random.Random, max_val: int = 2) -> HermLattice:
    return random_sublattice(random_space(fd, rank, rng, max_val), rng)


# ---------------------------------------------------------------------------
# lattice lemmas


class _Tally:
    def __init__(self, identity_id: str, params: dict):
        self.identity_id = identity_id
        self.params = params
        self.count = 0
        self.failure: tuple | None = None

    def check(self, ok: bool, lhs, rhs, where: str):
        self.count += 1
        if not ok and self.failure is None:
            self.failure = (lhs, rhs, where)

    def report(self) -> VerifyReport:
        params = dict(self.params, instances=self.count)
        if self.failure is not None:
            lhs, rhs, where = self.failure
            return VerifyReport(self.identity_id, params, "fail", lhs=_fmt(lhs), rhs=_fmt(rhs), reason=where)
        if self.count == 0:
            return VerifyReport(self.identity_id, params, "skipped", reason="no admissible instances")
        return VerifyReport(self.identity_id, params, "pass")


def _residue_rank_check(M: HermLattice, rng: random.Random) -> tuple[int, int]:
    """(t(M) + rank(uT mod varpi), rank M) for T the Gram matrix of a random
    spanning family: the basis plus one extra O_F-combination."""
    fd = M.fd
    extra = [fd.zero] * M.space.n
    for v in M.basis:
        c = _rand_int_elem(fd, rng)
        extra = [a + c * b for a, b in zip(extra, v)]
    fam = list(M.basis) + [extra]
    order = list(range(len(fam)))
    rng.shuffle(order)
    fam = [fam[i] for i in order]
    T = [[M.space.pair(a, b) for b in fam] for a in fam]
    # gram_type returns (#family) - residue rank
    residue_rank = len(fam) - gram_type(fd, T)
    return snf_type(M) + residue_rank, M.rank


def _projection(M: HermLattice, coords: Sequence[int]) -> HermLattice:
    sub = subspace(M.space, coords)
    return HermLattice(sub, [[v[i] for i in coords] for v in M.basis])


def _quotient_check(p: int, rng: random.Random, max_e: int = 3) -> tuple[list, list, str]:
    """Invariant factors of A/(u) and of T/(t) (+) Z/p^b for a random instance."""
    k = rng.randint(1, 3)
    exps = sorted((rng.randint(1, max_e) for _ in range(k)), reverse=True)
    e = max(exps)
    b = rng.randint(e + 1, e + 2)
    t = [rng.randrange(p**a) for a in exps]
    r = max((a - vp_int(ti, p, a) for ti, a in zip(t, exps)), default=0)
    w = (p ** (b - r)) * rng.choice([u for u in range(1, p**r + 1) if u % p]) % p**b if r else 0
    ring = _ZpRing(p)

    def invariants(mods, gen):
        rows = len(mods)
        mat = [[Fraction(0)] * (rows + 1) for _ in range(rows)]
        for i, a in enumerate(mods):
            mat[i][i] = Fraction(p**a)
            mat[i][rows] = Fraction(gen[i])
        ex, _ = _snf_exponents(mat, ring)
        return sorted(x for x in ex if x)

    left = invariants(exps + [b], t + [w])
    right = sorted(invariants(exps, t) + [b])
    return left, right, f"T={exps} b={b} t={t} w={w}"


def vp_int(x: int, p: int, cap: int) -> int:
    """p-adic valuation of an integer, capped (x = 0 gives cap)."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return min(v, cap)


def verify_lattice_lemmas(ctx: D.DenContext, fuzz_config: FuzzConfig | None = None) -> list[VerifyReport]:
    """Randomized checks of the type-and-rank identity, the type-change bounds and
    their projection refinement, the quotient-module isomorphism and, in the
    ramified case, parity of the type in odd rank."""
    cfg = fuzz_config or FuzzConfig()
    fd = ctx.fd
    rng = random.Random(cfg.seed)
    base = {"case": fd.case.value, "p": fd.p, "seed": cfg.seed}
    if fd.case is Case.RAMIFIED:
        base["conv"] = fd.ramified_convention
    tr = _Tally("type-and-rank", base)
    tc = _Tally("type-change", base)
    tc2 = _Tally("type-change-2", base)
    quo = _Tally("quotient", base)
    par = _Tally("odd-rank-parity", base)
    for _ in range(cfg.instances):
        m = rng.randint(1, cfg.max_rank)
        M = random_lattice(fd, m, rng, cfg.max_val)
        if not is_integral(M):
            continue
        where = f"gram={_gram_str(M)}"
        try:
            tM = lattice_type(M)
        except LatticeError as exc:
            tr.check(False, str(exc), "", where)
            continue
        lhs, rhs = _residue_rank_check(M, rng)
        tr.check(lhs == rhs and tM == snf_type(M), (lhs, tM), (rhs, snf_type(M)), where)
        if fd.case is Case.RAMIFIED and m % 2 == 1:
            par.check(tM % 2 == 1, tM, "odd", where)
        if m >= 2:
            front = list(range(m - 1))
            inter = intersect_with_subspace(M, front)
            inner = HermLattice(subspace(M.space, front), [[v[i] for i in front] for v in inter.basis])
            ti = lattice_type(inner)
            tc.check(tM - 1 <= ti <= tM + 1, ti, f"[{tM - 1},{tM + 1}]", where)
            Mp, Mpp = _projection(M, front), _projection(M, [m - 1])
            if is_integral(Mp) and is_integral(Mpp) and D.density_val(Mpp) > 0 and val_det(Mpp) > 0:
                tp = lattice_type(Mp)
                tc2.check(tM == tp + 1, tM, tp + 1, where)
    for _ in range(cfg.instances):
        left, right, where = _quotient_check(fd.p, rng)
        quo.check(left == right, left, right, where)
    out = [tr.report(), tc.report(), tc2.report(), quo.report()]
    if fd.case is Case.RAMIFIED:
        out.append(par.report())
    return out


# ---------------------------------------------------------------------------
# stabilization lemmas


def _stab_pair(rng: random.Random, thr: int, span: int = 3) -> tuple[int, int]:
    v1 = thr + 1 + rng.randrange(span)
    v2 = thr + 1 + rng.randrange(span)
    return v1, v2


def verify_stabilization(ctx: D.DenContext, fuzz_config: FuzzConfig | None = None) -> list[VerifyReport]:
    """f_x for every case, h_diff and the Den-circle difference for split, and
    alpha_b: each compared at two random points beyond the stated threshold."""
    cfg = fuzz_config or FuzzConfig()
    fd = ctx.fd
    rng = random.Random(cfg.seed + 1)
    base = {"case": fd.case.value, "p": fd.p, "n": ctx.n, "seed": cfg.seed}
    fx = _Tally("stab-f_x", base)
    hd = _Tally("stab-h_diff", base)
    dd = _Tally("stab-den-circle-diff", base)
    ab = _Tally("stab-alpha_b", dict(base, n="-"))
    try:
        attempts = 0
        while fx.count < cfg.instances and attempts < 50 * cfg.instances:
            attempts += 1
            Lflat = random_lattice(fd, ctx.n - 1, rng, cfg.max_val)
            if not is_integral(Lflat) or disc_module(Lflat).log_size > cfg.max_disc_log:
                continue
            where = f"gram={_gram_str(Lflat)}"
            unit = _rand_unit_base(fd, rng) if fd.case is Case.RAMIFIED else 1
            thr = stated_threshold(fd, Lflat, weak=True)
            v1, v2 = _stab_pair(rng, thr)
            a, b = D.f_x(ctx, Lflat, v1, unit), D.f_x(ctx, Lflat, v2, unit)
            fx.check(a == b, a, b, f"{where} val(x)={v1},{v2}")
            if fd.split:
                thr2 = 2 * a_max(Lflat)
                v1, v2 = _stab_pair(rng, thr2, 2)
                a, b = D.h_diff(ctx, Lflat, v1, unit), D.h_diff(ctx, Lflat, v2, unit)
                hd.check(a == b, a, b, f"{where} val(x)={v1},{v2}")
                a, b = D.den_vec_prim_difference(ctx, Lflat, v1, unit), D.den_vec_prim_difference(ctx, Lflat, v2, unit)
                dd.check(a == b, a, b, f"{where} val(x)={v1},{v2}")
        for _ in range(cfg.instances):
            k = rng.randint(1, 2)
            exps = [rng.randint(1, 2) for _ in range(k)]
            e = max(exps)
            b = rng.randint(e + 1, e + 2)
            a1, a2 = D.alpha_b(exps, b, fd.p, cfg.cap), D.alpha_b(exps, b + 1, fd.p, cfg.cap)
            ab.check(a1 == a2, a1, a2, f"T={exps} b={b}")
    except ResourceCapError as exc:
        return [VerifyReport("stabilization", base, "skipped", reason=f"resource cap: {exc}")]
    out = [fx.report()]
    if fd.split:
        out += [hd.report(), dd.report()]
    out.append(ab.report())
    return out


# ---------------------------------------------------------------------------
# ramified arbitration


def _unit_gram_lattices(fd: FieldData, grams) -> list[HermLattice]:
    return [lattice_from_gram(fd, g) for g in grams]


def _convention_checks(p: int, conv: str, seed: int, instances: int, cap: int) -> dict[str, VerifyReport]:
    from .geom import NoValPrimeError, build_geom_table

    fd = FieldData.make("ramified", p, ramified_convention=conv)
    ctx = D.DenContext(fd, 2, cap)
    out = {}
    lem = verify_lattice_lemmas(ctx, FuzzConfig(instances=instances, seed=seed, max_rank=3))
    out["parity"] = next(r for r in lem if r.identity_id == "odd-rank-parity")
    flats = _unit_gram_lattices(fd, [[[1]], [[-p]], [[p * p]]])
    weak = [verify_weak_induction(ctx, L, range(0, stated_threshold(fd, L, True) + 3)) for L in flats]
    out["weak-induction"] = next((r for r in weak if r.status == "fail"), weak[0])
    params = {"case": "ramified", "p": p, "conv": conv}
    try:
        table = build_geom_table(ctx, flats)
        prims = [D.den_star_prim(ctx, M) for L in flats for M in D.horizontal_lattices(ctx, L)]
        ok = table.consistent and all(x > 0 for x in prims)
        out["moebius"] = VerifyReport(
            "moebius-positivity", params, "pass" if ok else "fail",
            lhs=",".join(_fmt(x) for x in prims), reason="" if ok else "; ".join(table.records()),
        )
    except (NoValPrimeError, InvariantViolation, LatticeError) as exc:
        out["moebius"] = VerifyReport("moebius-positivity", params, "fail", reason=str(exc))
    fes = []
    for L in flats:
        unit = D.x_unit_for_sign(ctx, L, -1) if is_integral(L) else None
        if unit is None:
            continue
        for v in range(0, 3):
            fes.append(verify_fe(ctx, D.vector_setup(L, v, unit).L))
    out["fe"] = next((r for r in fes if r.status == "fail"), fes[0])
    return out


def _verdict(identity_id: str, params: dict, results: dict[str, dict[str, VerifyReport]], chosen: str) -> VerifyReport:
    # skipped checks (nothing tested above a threshold) neither convict nor acquit
    survivors = [
        k for k, checks in results.items()
        if all(r.status != "fail" for r in checks.values()) and any(r.passed for r in checks.values())
    ]
    detail = "; ".join(
        f"{k}: " + ",".join(f"{name}={r.status}" for name, r in sorted(checks.items()))
        for k, checks in results.items()
    )
    ok = survivors == [chosen]
    return VerifyReport(
        identity_id, dict(params, selected=chosen, survivors="|".join(survivors) or "none"),
        "pass" if ok else "fail", reason=detail,
    )


def _eta_checks(p: int, eta: str, cap: int) -> dict[str, VerifyReport]:
    """n = 4: the two readings of eta**i differ only on type >= 2 terms."""
    fd = FieldData.make("ramified", p, ramified_eta=eta)
    ctx = D.DenContext(fd, 4, cap)
    out = {}
    for i, g in enumerate(([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, -p]])):
        L = lattice_from_gram(fd, g)
        unit = D.x_unit_for_sign(ctx, L, -1)
        out[f"fe-{i}"] = verify_fe(ctx, D.vector_setup(L, 1, unit).L)
        out[f"weak-{i}"] = verify_weak_induction(ctx, L, range(0, 3))
    return out


def _val2_checks(p: int, shift: int, cap: int) -> dict[str, VerifyReport]:
    fd = FieldData.make("ramified", p)
    ctx = D.DenContext(fd, 2, cap)
    out = {}
    for g in ([[1]], [[-p]]):
        L = lattice_from_gram(fd, g)
        thr = stated_threshold(fd, L)
        for r in verify_limits(ctx, L, range(0, thr + 4), c_ram=shift):
            key = r.identity_id
            if key not in out or r.status == "fail":
                out[key] = r
    return out


def arbitrate_ramified(p: int = 3, seed: int = 0, instances: int = 100, cap: int = D.DEFAULT_CAP, eta: bool = True) -> list[VerifyReport]:
    """Selects the ramified integrality convention (A vs B), the reading of
    eta**i at the uniformizer, and the offset of val''(x) by running the same
    checks under every candidate; each report passes iff the default is the
    unique survivor."""
    base = {"p": p, "seed": seed}
    conv = {c: _convention_checks(p, c, seed, instances, cap) for c in ("A", "B")}
    out = [_verdict("arbitration-convention", base, conv, "B")]
    if eta:
        etas = {e: _eta_checks(p, e, cap) for e in ("even", "zero")}
        out.append(_verdict("arbitration-eta", base, etas, "even"))
    shifts = {str(c): _val2_checks(p, c, cap) for c in (-1, 0, 1)}
    out.append(_verdict("arbitration-val2", base, shifts, "0"))
    return out


# ---------------------------------------------------------------------------
# suites


SMOKE_GRAMS = {
    "inert": [[[1]], [[3]], [[9]]],
    "ramified": [[[1]], [[-3]], [[9]]],
    "split": [[[1]], [[3]], [[9]]],
}


@dataclass
class SuiteResult:
    suite_id: str
    seed: int
    reports: list

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.reports:
            out[r.status] += 1
        return out

    def min_observed(self) -> dict:
        """Smallest observed threshold per identity id."""
        out: dict = {}
        for r in self.reports:
            if r.observed_threshold is not None:
                cur = out.get(r.identity_id)
                out[r.identity_id] = r.observed_threshold if cur is None else min(cur, r.observed_threshold)
        return out


def _smoke_points(params: dict):
    p = params.get("p", 3)
    cases = params.get("cases", ["inert", "ramified", "split"])
    for case in cases:
        fd = FieldData.make(case, p)
        grams = params.get("grid", SMOKE_GRAMS[case] if p == 3 else [[[1]], [[p]]])
        for g in grams:
            yield fd, g


def theorem_reports(ctx: D.DenContext, Lflat: HermLattice, extra: int = 3) -> list[VerifyReport]:
    """Induction, weak induction, FE at val(x) = 1, 2, 3 and limits for one L-flat.

    Each series runs val(x) from 0 to its own stated threshold + extra."""
    thr = stated_threshold(ctx.fd, Lflat)
    vals = range(0, thr + extra + 1)
    weak_vals = range(0, stated_threshold(ctx.fd, Lflat, weak=True) + extra + 1)
    out = [verify_induction(ctx, Lflat, vals), verify_weak_induction(ctx, Lflat, weak_vals)]
    unit = _limit_unit(ctx, Lflat, None) if is_integral(Lflat) else 1
    if unit is not None:
        for v in (1, 2, 3):
            try:
                out.append(verify_fe(ctx, D.vector_setup(Lflat, v, unit).L))
            except ResourceCapError as exc:
                out.append(VerifyReport("fe", lattice_params(Lflat), "skipped", reason=f"resource cap: {exc}"))
        out += verify_limits(ctx, Lflat, vals, unit)
    return out


def run_suite(ctx: D.DenContext | None, suite_id: str, params: dict | None = None) -> SuiteResult:
    """Run a named suite.  ``ctx`` supplies the enumeration cap (and, for the
    single-case suites, the field data and n); ``params`` may carry ``p``,
    ``cases``, ``grid`` (list of Gram matrices for L-flat), ``extra`` (val(x)
    points beyond the threshold), ``seed`` and ``instances``."""
    params = dict(params or {})
    cap = ctx.cap if ctx is not None else D.DEFAULT_CAP
    seed = params.get("seed", 0)
    contexts: dict = {}

    def ctx_for(fd: FieldData, n: int | None = None) -> D.DenContext:
        n = n or params.get("n", 2)
        key = (fd, n)
        if key not in contexts:
            contexts[key] = D.DenContext(fd, n, cap)
        return contexts[key]

    reports: list[VerifyReport] = []
    if suite_id == "theorem-smoke":
        for fd, g in _smoke_points(params):
            reports += theorem_reports(ctx_for(fd), lattice_from_gram(fd, g), params.get("extra", 3))
    elif suite_id == "lattice-lemmas":
        for case in params.get("cases", ["inert", "ramified", "split"]):
            fd = FieldData.make(case, params.get("p", 3))
            reports += verify_lattice_lemmas(ctx_for(fd), FuzzConfig(instances=params.get("instances", 200), seed=seed))
    elif suite_id == "stabilization":
        for case in params.get("cases", ["inert", "ramified", "split"]):
            fd = FieldData.make(case, params.get("p", 3))
            n = params.get("n", 2)
            cfg = FuzzConfig(instances=params.get("instances", 200), seed=seed, max_val=1)
            reports += verify_stabilization(ctx_for(fd, n), cfg)
    elif suite_id == "arbitration":
        reports += arbitrate_ramified(params.get("p", 3), seed, params.get("instances", 100), cap, params.get("eta", True))
    else:
        raise ValueError(f"unknown suite {suite_id!r}")
    return SuiteResult(suite_id, seed, reports)


SUITES = ("theorem-smoke", "lattice-lemmas", "stabilization", "arbitration")

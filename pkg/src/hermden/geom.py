"""Quasi-canonical degrees, the derived val' and delta_tau tables, and the
horizontal / vertical intersection numbers certified by the density side.

val' of a type <= 1 lattice is not given a lattice-theoretic definition here:
it is recovered by inverting the degree formula against den_star_prim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import density as D
from .hermlattice import HermLattice, InvariantViolation, LatticeError, is_integral, lattice_type
from .localfield import FieldData


class NoValPrimeError(ArithmeticError):
    """den_star_prim is not a quasi-canonical degree for any level."""


def deg_qcan(fd: FieldData, s: int) -> Fraction:
    """bF p^s (1 - eta(p)/p) for s >= 1, and bF for s = 0."""
    if s < 0:
        raise ValueError("level must be nonnegative")
    if s == 0:
        return Fraction(fd.bF)
    return fd.bF * Fraction(fd.p) ** s * (1 - Fraction(fd.eta_pi0, fd.p))


def _check_horizontal(M: HermLattice):
    if not is_integral(M):
        raise LatticeError("val' needs an integral lattice")
    if lattice_type(M) > 1:
        raise LatticeError("val' is only defined for lattices of type at most 1")


def derive_val_prime(ctx: D.DenContext, Mflat: HermLattice) -> int:
    """The level s with deg_qcan(s) = den_star_prim(Mflat)."""
    _check_horizontal(Mflat)
    target = D.den_star_prim(ctx, Mflat)
    s = 0
    while True:
        deg = deg_qcan(ctx.fd, s)
        if deg == target:
            return s
        if deg > target and s > 0:
            raise NoValPrimeError(f"den_star_prim = {target} is not a quasi-canonical degree")
        s += 1


def delta_tau(ctx: D.DenContext, Mflat: HermLattice) -> Fraction:
    """partial_den_star_h_prim / (2 deg_qcan(val'))."""
    s = derive_val_prime(ctx, Mflat)
    return D.partial_den_star_h_prim(ctx, Mflat) / (2 * deg_qcan(ctx.fd, s))


@dataclass
class GeomEntry:
    deg: Fraction
    delta_tau: Fraction
    provenance: list = field(default_factory=list)


@dataclass
class GeomTable:
    entries: dict = field(default_factory=dict)
    # (key, lattice key, conflicting delta_tau, recorded delta_tau)
    conflicts: list = field(default_factory=list)
    # (lattice key, reason) for representatives with no val'
    unsolved: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.conflicts and not self.unsolved

    def records(self) -> list[str]:
        out = []
        for (case, s), e in sorted(self.entries.items()):
            out.append(
                f"case={case}\tval'={s}\tdeg={_q(e.deg)}\tdelta_tau={_q(e.delta_tau)}\treps={len(e.provenance)}"
            )
        for key, lkey, got, want in self.conflicts:
            out.append(f"conflict\tcase={key[0]}\tval'={key[1]}\tlattice={lkey}\tdelta_tau={_q(got)}\trecorded={_q(want)}")
        for lkey, reason in self.unsolved:
            out.append(f"unsolved\tlattice={lkey}\treason={reason}")
        return out


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _label(M: HermLattice) -> str:
    """Gram matrix of M as text; identifies M up to isometry for provenance."""
    return repr([[str(e) for e in row] for row in M.gram_matrix()])


def build_geom_table(ctx: D.DenContext, lattices: Iterable[HermLattice], include_overlattices: bool = True) -> GeomTable:
    """Aggregate delta_tau per (case, val') over the given lattices (and, by
    default, their integral overlattices of type <= 1)."""
    fd = ctx.fd
    table = GeomTable()
    seen = set()
    reps = []
    for L in lattices:
        if not is_integral(L):
            continue
        cands = D.horizontal_lattices(ctx, L) if include_overlattices else [L]
        for M in cands:
            ident = (M.space, M.key)
            if ident not in seen and lattice_type(M) <= 1:
                seen.add(ident)
                reps.append(M)
    for M in reps:
        try:
            s = derive_val_prime(ctx, M)
        except NoValPrimeError as exc:
            table.unsolved.append((_label(M), str(exc)))
            continue
        dt = D.partial_den_star_h_prim(ctx, M) / (2 * deg_qcan(fd, s))
        key = (fd.case.value, s)
        entry = table.entries.get(key)
        if entry is None:
            table.entries[key] = GeomEntry(deg_qcan(fd, s), dt, [_label(M)])
        elif entry.delta_tau != dt:
            table.conflicts.append((key, _label(M), dt, entry.delta_tau))
        else:
            entry.provenance.append(_label(M))
    return table


@dataclass
class IntReport:
    int_h: Fraction
    int_v: Fraction
    int_total: Fraction
    deg_zh: Fraction
    deg_sum: Fraction

    def fields(self) -> dict:
        return {
            "Int_H": self.int_h,
            "Int_V(density-certified)": self.int_v,
            "Int": self.int_total,
            "deg_ZH": self.deg_zh,
            "sum_deg_qcan": self.deg_sum,
        }


def int_report(ctx: D.DenContext, Lflat: HermLattice) -> IntReport:
    """Int_H from the delta_tau table, Int_V and Int from the density side,
    and deg Z_H both as Den* and as the sum of quasi-canonical degrees."""
    fd = ctx.fd
    if not is_integral(Lflat):
        z = Fraction(0)
        return IntReport(z, z, z, z, z)
    int_h = Fraction(0)
    deg_sum = Fraction(0)
    for M in D.horizontal_lattices(ctx, Lflat):
        s = derive_val_prime(ctx, M)
        deg = deg_qcan(fd, s)
        int_h += 2 * deg * delta_tau(ctx, M)
        deg_sum += deg
    int_v = D.partial_den_star_v(ctx, Lflat)
    total = D.partial_den_star(ctx, Lflat)
    if int_h + int_v != total:
        raise InvariantViolation(f"Int_H + Int_V = {int_h + int_v} differs from Int = {total}")
    return IntReport(int_h, int_v, total, D.den_star_value(ctx, Lflat), deg_sum)


__all__ = [
    "NoValPrimeError",
    "deg_qcan",
    "derive_val_prime",
    "delta_tau",
    "GeomEntry",
    "GeomTable",
    "build_geom_table",
    "IntReport",
    "int_report",
]

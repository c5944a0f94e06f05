"""Toy-scale ground truth: congruence point counts and an affine calibration
of Den evaluations against them.

A point count for L of rank m against a unimodular target of rank n counts
m-tuples in (O_F / p^N)^n whose scaled Gram matrix u * (v_i, v_j) agrees with
u * gram(L) modulo p^N O_F, and divides by q^{N m (2n - m)}.  The target is
block diagonal (unit 1x1 blocks, or hyperbolic 2x2 blocks in the ramified case
under pairings valued in the inverse different), so the count is a
convolution of per-block distributions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import density as D
from .enumerate import ResourceCapError
from .hermlattice import HermLattice, _type_multiplier, a_max, is_integral
from .localfield import Case, FieldData, FieldElem
from .verify import VerifyReport, _fmt, _gram_str

MAX_RANK = 2
MAX_PRECISION = 4
MAX_PRIME = 3
# bound on the number of block-distribution entries combined in one count
WORK_CAP = 5 * 10**6


def _check_caps(fd: FieldData, m: int, N: int):
    if m > MAX_RANK or N > MAX_PRECISION or fd.p > MAX_PRIME:
        raise ResourceCapError(f"oracle caps are rank <= {MAX_RANK}, N <= {MAX_PRECISION}, p <= {MAX_PRIME}", 0)
    if N < 1:
        raise ValueError("precision N must be positive")


class _Residues:
    """O_F / p^N with elements as integer pairs (coordinates in 1, omega, or
    the two idempotent components in the split case)."""

    def __init__(self, fd: FieldData, N: int):
        self.fd = fd
        self.mod = fd.p**N
        self.split = fd.split
        if not fd.split:
            if fd.d.denominator != 1:
                raise ValueError("the oracle needs an integral d")
            self.d = int(fd.d)

    def reduce_q(self, x: Fraction) -> int:
        if x.denominator % self.fd.p == 0:
            raise ValueError("not p-integral")
        return x.numerator * pow(x.denominator, -1, self.mod) % self.mod

    def from_elem(self, e: FieldElem) -> tuple[int, int]:
        return (self.reduce_q(e.a), self.reduce_q(e.b))

    def mul(self, x, y):
        m = self.mod
        if self.split:
            return (x[0] * y[0] % m, x[1] * y[1] % m)
        return ((x[0] * y[0] + self.d * x[1] * y[1]) % m, (x[0] * y[1] + x[1] * y[0]) % m)

    def add(self, x, y):
        m = self.mod
        return ((x[0] + y[0]) % m, (x[1] + y[1]) % m)

    def conj(self, x):
        if self.split:
            return (x[1], x[0])
        return (x[0], -x[1] % self.mod)

    def elements(self):
        r = range(self.mod)
        return product(r, r)


def target_blocks(fd: FieldData, n: int) -> list[list[list[FieldElem]]]:
    """Gram blocks of the unimodular target of rank n."""
    if fd.case is Case.RAMIFIED and fd.ramified_convention == "B":
        if n % 2:
            raise ValueError("the ramified unimodular target needs even rank")
        h = fd.uniformizer.inv()
        return [[[fd.zero, h], [h.conj(), fd.zero]] for _ in range(n // 2)]
    return [[[fd.one]] for _ in range(n)]


def _block_distribution(R: _Residues, uG, m: int) -> dict:
    """Counts of the scaled Gram values (upper triangle) over m-tuples of
    vectors in one block."""
    k = len(uG)
    pairs = [(i, j) for i in range(m) for j in range(i, m)]
    dist: dict = {}
    elems = list(R.elements())
    if len(elems) ** (k * m) > WORK_CAP:
        raise ResourceCapError("block enumeration exceeded the work cap", len(elems) ** (k * m))
    zero = (0, 0)
    for coords in product(elems, repeat=k * m):
        vecs = [coords[i * k:(i + 1) * k] for i in range(m)]
        key = []
        for i, j in pairs:
            acc = zero
            for a in range(k):
                for b in range(k):
                    if uG[a][b] != zero:
                        acc = R.add(acc, R.mul(R.mul(vecs[i][a], uG[a][b]), R.conj(vecs[j][b])))
            key.append(acc)
        key = tuple(key)
        dist[key] = dist.get(key, 0) + 1
    return dist


def _combine(R: _Residues, d1: dict, d2: dict) -> dict:
    if len(d1) * len(d2) > WORK_CAP:
        raise ResourceCapError("point count convolution exceeded the work cap", len(d1) * len(d2))
    out: dict = {}
    for k1, c1 in d1.items():
        for k2, c2 in d2.items():
            k = tuple(R.add(a, b) for a, b in zip(k1, k2))
            out[k] = out.get(k, 0) + c1 * c2
    return out


def _count_against(R: _Residues, dists: list[dict], target: tuple) -> int:
    acc = dists[0]
    for d in dists[1:-1]:
        acc = _combine(R, acc, d)
    if len(dists) == 1:
        return acc.get(target, 0)
    last = dists[-1]
    if len(acc) > WORK_CAP:
        raise ResourceCapError("point count lookup exceeded the work cap", len(acc))
    m = R.mod
    total = 0
    for k1, c1 in acc.items():
        need = tuple(((t[0] - a[0]) % m, (t[1] - a[1]) % m) for t, a in zip(target, k1))
        total += c1 * last.get(need, 0)
    return total


def pointcount_density(L: HermLattice, N: int, n: int | None = None) -> Fraction:
    """Normalized count of representations of gram(L) modulo p^N by the
    unimodular target of rank n (default: rank of L)."""
    fd = L.fd
    m = L.rank
    n = m if n is None else n
    _check_caps(fd, m, N)
    if not is_integral(L):
        return Fraction(0)
    R = _Residues(fd, N)
    u = _type_multiplier(fd)
    T = L.gram_matrix()
    target = tuple(R.from_elem(u * T[i][j]) for i in range(m) for j in range(i, m))
    dists = []
    cache: dict = {}
    for block in target_blocks(fd, n):
        key = tuple(tuple(e for e in row) for row in block)
        if key not in cache:
            uG = [[R.from_elem(u * e) for e in row] for row in block]
            cache[key] = _block_distribution(R, uG, m)
        dists.append(cache[key])
    count = _count_against(R, dists, target)
    return Fraction(count, fd.q ** (N * m * (2 * n - m)))


@dataclass
class Stabilized:
    values: list
    value: Fraction | None
    at: int | None


def stabilized_density(L: HermLattice, n: int | None = None, max_N: int = MAX_PRECISION) -> Stabilized:
    """alpha_N for N = 1..max_N (stopping early at the work cap); the
    stabilized value is the first alpha_N with alpha_N = alpha_{N+1} and
    N >= a_max(L) + 1 (None if not reached)."""
    vals = []
    for N in range(1, max_N + 1):
        try:
            vals.append(pointcount_density(L, N, n))
        except ResourceCapError:
            if len(vals) < 2:
                raise
            break
    if not is_integral(L):
        return Stabilized(vals, Fraction(0), 1)
    start = a_max(L) + 1
    for i in range(len(vals) - 1):
        N = i + 1
        if N >= start and vals[i] == vals[i + 1]:
            return Stabilized(vals, vals[i], N)
    return Stabilized(vals, None, None)


def candidate_points(q: int, kmax: int = 4) -> list[Fraction]:
    """Evaluation points: +-q^-k and q^-2k for k <= kmax, then a few rationals."""
    out: list[Fraction] = []
    for k in range(kmax + 1):
        for x in (Fraction(1, q**k), Fraction(-1, q**k), Fraction(1, q ** (2 * k))):
            if x not in out:
                out.append(x)
    for x in (Fraction(-1, q * q), Fraction(1, 2), Fraction(-1, 2)):
        if x not in out:
            out.append(x)
    return out


def _den_value(ctx: D.DenContext, L: HermLattice, x: Fraction) -> Fraction:
    return D.den_full(ctx, L).evaluate(x)


def calibrate_and_compare(
    ctx: D.DenContext,
    training: Sequence[HermLattice],
    holdout: Sequence[HermLattice],
    n_target: int | None = None,
    max_N: int = MAX_PRECISION,
) -> VerifyReport:
    """Fit (c, x*) with stabilized point count = c * Den(x*, L) on training, then
    test the same pair on holdout."""
    fd = ctx.fd
    n_target = ctx.n if n_target is None else n_target
    params = {"case": fd.case.value, "p": fd.p, "n": ctx.n, "target": n_target}
    if not holdout:
        return VerifyReport("oracle-calibration", params, "pass", reason="empty holdout")
    try:
        alpha = {}
        for L in list(training) + list(holdout):
            st = stabilized_density(L, n_target, max_N)
            if st.value is None:
                return VerifyReport(
                    "oracle-calibration", params, "skipped",
                    reason=f"no stabilization up to N={max_N} for {_gram_str(L)}: {','.join(_fmt(v) for v in st.values)}",
                )
            alpha[(L.space, L.key)] = st.value
    except ResourceCapError as exc:
        return VerifyReport("oracle-calibration", params, "skipped", reason=f"resource cap: {exc}")
    found = None
    for x in candidate_points(fd.q):
        c = None
        ok = True
        for L in training:
            a, d = alpha[(L.space, L.key)], _den_value(ctx, L, x)
            if d == 0:
                ok = a == 0
            elif c is None:
                c = a / d
            else:
                ok = a == c * d
            if not ok:
                break
        if ok and c is not None and c != 0:
            found = (c, x)
            break
    if found is None:
        return VerifyReport("oracle-calibration", params, "skipped", reason="no affine calibration found")
    c, x = found
    params = dict(params, c=_fmt(c), x=_fmt(x))
    for L in holdout:
        a, d = alpha[(L.space, L.key)], _den_value(ctx, L, x)
        if a != c * d:
            return VerifyReport(
                "oracle-calibration", params, "fail", lhs=_fmt(a), rhs=_fmt(c * d),
                reason=f"holdout {_gram_str(L)}",
            )
    return VerifyReport("oracle-calibration", params, "pass")


__all__ = [
    "pointcount_density",
    "stabilized_density",
    "Stabilized",
    "target_blocks",
    "candidate_points",
    "calibrate_and_compare",
    "MAX_RANK",
    "MAX_PRECISION",
    "MAX_PRIME",
]

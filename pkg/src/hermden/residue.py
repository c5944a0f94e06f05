"""Residue fields of O_F and canonical representatives modulo powers of the uniformizer."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .localfield import Case, FieldData, FieldElem, vp

# ---------------------------------------------------------------------------
# p-adic digits


def unit_mod(x: Fraction, p: int, k: int) -> int:
    """Integer representative of a p-integral rational modulo p**k."""
    if k <= 0:
        return 0
    m = p**k
    return x.numerator * pow(x.denominator, -1, m) % m


def digits_rep(x: Fraction, p: int, k: int) -> Fraction:
    """Canonical representative of the class of x in Q_p / p**k Z_p.

    The result is sum of c_i p**i over v(x) <= i < k with digits in [0, p).
    """
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    v = vp(x, p)
    if v >= k:
        return Fraction(0)
    s = max(0, -v)
    a = x * Fraction(p) ** s
    return Fraction(unit_mod(a, p, k + s), p**s)


# ---------------------------------------------------------------------------
# residue fields


class ResidueField:
    """F_p or F_{p^2} = F_p[w] / (w^2 - d); elements are ints or int pairs."""

    def __init__(self, p: int, d_mod: int | None = None):
        self.p = p
        self.d_mod = d_mod
        self.degree = 1 if d_mod is None else 2
        self.size = p**self.degree
        self.zero = 0 if d_mod is None else (0, 0)
        self.one = 1 if d_mod is None else (1, 0)

    def add(self, x, y):
        p = self.p
        if self.degree == 1:
            return (x + y) % p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def neg(self, x):
        p = self.p
        if self.degree == 1:
            return -x % p
        return (-x[0] % p, -x[1] % p)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        p = self.p
        if self.degree == 1:
            return x * y % p
        return ((x[0] * y[0] + self.d_mod * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def inv(self, x):
        p = self.p
        if self.degree == 1:
            return pow(x, -1, p)
        n = (x[0] * x[0] - self.d_mod * x[1] * x[1]) % p
        ni = pow(n, -1, p)
        return (x[0] * ni % p, -x[1] * ni % p)

    def is_zero(self, x) -> bool:
        return x == self.zero

    def elements(self):
        if self.degree == 1:
            return list(range(self.p))
        return list(product(range(self.p), repeat=2))

    def kernel_left(self, rows: list[list]) -> list[list]:
        """Basis of {c : c^T A = 0} for the m x m' matrix A given by rows."""
        m = len(rows)
        if m == 0:
            return []
        ncols = len(rows[0])
        # row reduce the transpose augmented by identity: work with A^T c = 0
        at = [[rows[i][j] for i in range(m)] for j in range(ncols)]
        return self.nullspace(at, m)

    def nullspace(self, mat: list[list], nvars: int) -> list[list]:
        """Basis of {c in k^nvars : mat c = 0}."""
        mat = [list(r) for r in mat]
        pivots = []
        r = 0
        for col in range(nvars):
            piv = next((i for i in range(r, len(mat)) if not self.is_zero(mat[i][col])), None)
            if piv is None:
                continue
            mat[r], mat[piv] = mat[piv], mat[r]
            iv = self.inv(mat[r][col])
            mat[r] = [self.mul(iv, e) for e in mat[r]]
            for i in range(len(mat)):
                if i != r and not self.is_zero(mat[i][col]):
                    f = mat[i][col]
                    mat[i] = [self.sub(a, self.mul(f, b)) for a, b in zip(mat[i], mat[r])]
            pivots.append(col)
            r += 1
            if r == len(mat):
                break
        free = [c for c in range(nvars) if c not in pivots]
        basis = []
        for fcol in free:
            vec = [self.zero] * nvars
            vec[fcol] = self.one
            for i, pc in enumerate(pivots):
                vec[pc] = self.neg(mat[i][fcol])
            basis.append(vec)
        return basis

    def rank(self, rows: list[list]) -> int:
        if not rows:
            return 0
        return len(rows[0]) - len(self.nullspace(rows, len(rows[0])))

    def span_lines(self, basis: list[list]) -> list[list]:
        """One normalised representative (first nonzero coordinate 1) per line of the span."""
        if not basis:
            return []
        out = []
        dim = len(basis)
        nvars = len(basis[0])
        for coeffs in product(self.elements(), repeat=dim):
            first = next((c for c in coeffs if not self.is_zero(c)), None)
            if first is None or first != self.one:
                continue
            vec = [self.zero] * nvars
            for c, b in zip(coeffs, basis):
                if not self.is_zero(c):
                    vec = [self.add(v, self.mul(c, e)) for v, e in zip(vec, b)]
            out.append(vec)
        return out


def residue_field(fd: FieldData) -> ResidueField:
    if fd.case is Case.INERT:
        return ResidueField(fd.p, unit_mod(fd.d, fd.p, 1))
    return ResidueField(fd.p)


def reduce_elem(fd: FieldData, x: FieldElem, component: int | None = None):
    """Image in the residue field of an integral element (split: pick a component)."""
    p = fd.p
    if fd.case is Case.INERT:
        return (unit_mod(x.a, p, 1), unit_mod(x.b, p, 1))
    if fd.case is Case.RAMIFIED:
        return unit_mod(x.a, p, 1)
    return unit_mod(x.a if component == 0 else x.b, p, 1)


def lift_elem(fd: FieldData, c) -> FieldElem:
    """Lift of a residue class in a nonsplit case."""
    if fd.case is Case.INERT:
        return fd.elem(c[0], c[1])
    return fd.elem(c, 0)

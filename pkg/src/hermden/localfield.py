"""Exact arithmetic in F0 = Q_p and the quadratic etale algebra F / F0.

Elements of F are stored with rational coordinates.  In the nonsplit cases an
element is ``a + b*w`` with ``w**2 = d`` inside Q(sqrt d), which is dense in F
because p is inert (d a non-square unit) or ramified (d = p * unit) in Q(sqrt d).
In the split case F = F0 x F0 and an element is the pair ``(a, b)``; the
conjugation swaps the two coordinates.

Distinguished constants (all satisfy ``conj(c) == -c`` where the convention
requires it)::

    inert     uniformizer p*w      different generator w
    ramified  uniformizer w        different generator w
    split     uniformizer (p, -p)  different generator (1, -1)
              varpi_1 = (p, 1), varpi_2 = (1, -p), e_1 = (1, 0), e_2 = (0, 1)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

INF = math.inf


class Case(str, enum.Enum):
    INERT = "inert"
    RAMIFIED = "ramified"
    SPLIT = "split"


class DegenerateError(ZeroDivisionError):
    """Inversion of zero or of a zero divisor of F0 x F0."""


def vp(x, p: int):
    """p-adic valuation of a rational number (``inf`` for zero)."""
    x = Fraction(x)
    if x == 0:
        return INF
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero rationals and an odd prime p."""
    if p == 2:
        raise ValueError("hilbert_symbol is only implemented for odd p")
    a, b = Fraction(a), Fraction(b)
    alpha, beta = vp(a, p), vp(b, p)
    u = a / Fraction(p) ** alpha
    v = b / Fraction(p) ** beta
    # units of Z_(p): reduce numerator * denominator^{-1} mod p
    ui = u.numerator * pow(u.denominator, -1, p) % p
    vi = v.numerator * pow(v.denominator, -1, p) % p
    sign = (-1) ** (alpha * beta * ((p - 1) // 2))
    return sign * legendre(ui, p) ** beta * legendre(vi, p) ** alpha


def smallest_nonresidue(p: int) -> int:
    for a in range(2, p):
        if legendre(a, p) == -1:
            return a
    raise ValueError(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True)
class FieldData:
    """The local setting: which quadratic algebra F / Q_p, and its constants.

    ``d`` is the rational with ``w**2 = d`` (unused in the split case).
    ``ramified_convention`` selects how integrality is read in the ramified
    case: ``"B"`` means pairings valued in the inverse different, ``"A"``
    means pairings valued in O_F.  ``ramified_eta`` selects how the powers
    eta**i are read at the uniformizer in the ramified case (see
    ``eta_power``).  Both are ignored in the other cases.
    """

    case: Case
    p: int
    d: Fraction = Fraction(0)
    ramified_convention: str = "B"
    ramified_eta: str = "even"

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        object.__setattr__(self, "d", Fraction(self.d))
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.case is Case.INERT:
            if self.p == 2:
                raise ValueError("the inert case is implemented for odd p only")
            if vp(self.d, self.p) != 0 or legendre(_unit_residue(self.d, self.p), self.p) != -1:
                raise ValueError("inert case needs d a non-square unit mod p")
        elif self.case is Case.RAMIFIED:
            if self.p == 2:
                raise ValueError("p = 2 is out of scope unless F / Q_p is split")
            if vp(self.d, self.p) != 1:
                raise ValueError("ramified case needs d = p * unit")
            if self.ramified_convention not in ("A", "B"):
                raise ValueError("ramified_convention must be 'A' or 'B'")
            if self.ramified_eta not in ("even", "zero"):
                raise ValueError("ramified_eta must be 'even' or 'zero'")

    @classmethod
    def make(cls, case, p: int, d=None, unit_class: int = 1, ramified_convention: str = "B", ramified_eta: str = "even"):
        """Build the default configuration for ``case`` at ``p``.

        For the ramified case ``unit_class = 1`` gives d = p and ``-1`` gives
        d = p * (smallest non-residue), the two ramified extensions of Q_p.
        """
        case = Case(case)
        if d is None:
            if case is Case.INERT:
                d = smallest_nonresidue(p)
            elif case is Case.RAMIFIED:
                d = p if unit_class == 1 else p * smallest_nonresidue(p)
            else:
                d = 0
        return cls(case, p, Fraction(d), ramified_convention, ramified_eta)

    @property
    def q(self) -> int:
        return self.p

    @property
    def eta_pi0(self) -> int:
        return {Case.INERT: -1, Case.RAMIFIED: 0, Case.SPLIT: 1}[self.case]

    @property
    def bF(self) -> int:
        """The degree [F-breve : F0-breve]."""
        return 2 if self.case is Case.RAMIFIED else 1

    @property
    def diff_val(self) -> int:
        return 1 if self.case is Case.RAMIFIED else 0

    @property
    def residue_degree(self) -> int:
        """F_p-dimension of O_F / varpi."""
        return 2 if self.case is Case.INERT else 1

    @property
    def split(self) -> bool:
        return self.case is Case.SPLIT

    # distinguished elements --------------------------------------------------

    def elem(self, a, b=0) -> "FieldElem":
        return FieldElem(self, Fraction(a), Fraction(b))

    def from_base(self, a) -> "FieldElem":
        """Image of a in F0 -> F (the diagonal in the split case)."""
        a = Fraction(a)
        return FieldElem(self, a, a) if self.split else FieldElem(self, a, Fraction(0))

    @cached_property
    def one(self) -> "FieldElem":
        return self.from_base(1)

    @cached_property
    def zero(self) -> "FieldElem":
        return self.from_base(0)

    @cached_property
    def omega(self) -> "FieldElem":
        if self.split:
            raise ValueError("no sqrt(d) generator in the split case")
        return self.elem(0, 1)

    @cached_property
    def uniformizer(self) -> "FieldElem":
        p = self.p
        if self.case is Case.INERT:
            return self.elem(0, p)
        if self.case is Case.RAMIFIED:
            return self.elem(0, 1)
        return self.elem(p, -p)

    @cached_property
    def different_generator(self) -> "FieldElem":
        if self.split:
            return self.elem(1, -1)
        return self.elem(0, 1)

    @cached_property
    def varpi1(self) -> "FieldElem":
        self._need_split()
        return self.elem(self.p, 1)

    @cached_property
    def varpi2(self) -> "FieldElem":
        self._need_split()
        return self.elem(1, -self.p)

    @cached_property
    def idempotents(self) -> tuple["FieldElem", "FieldElem"]:
        self._need_split()
        return self.elem(1, 0), self.elem(0, 1)

    def _need_split(self):
        if not self.split:
            raise ValueError("only defined in the split case")

    def label(self) -> str:
        if self.split:
            return f"split p={self.p}"
        return f"{self.case.value} p={self.p} d={self.d}"


def _unit_residue(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def eta_power(fd: FieldData, i: int) -> int:
    """Value of the character eta**i at the uniformizer of F0.

    eta**0 is the trivial character, so the value is 1 for i = 0 in every case.
    In the ramified case eta is a ramified character and eta**i is trivial
    exactly for even i.  The reading ``"even"`` gives 1 for even i and 0 for
    odd i; the reading ``"zero"`` gives 0 for every i >= 1.
    """
    if i < 0:
        raise ValueError("i must be nonnegative")
    if fd.case is Case.RAMIFIED:
        if i == 0:
            return 1
        return 1 if fd.ramified_eta == "even" and i % 2 == 0 else 0
    return fd.eta_pi0**i


@dataclass(frozen=True)
class FieldElem:
    """An element of F with rational coordinates (see module docstring)."""

    fd: FieldData
    a: Fraction
    b: Fraction

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            return other
        return self.fd.from_base(other)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.fd, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.fd, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self.fd.split:
            return FieldElem(self.fd, self.a * o.a, self.b * o.b)
        d = self.fd.d
        return FieldElem(self.fd, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conj(self) -> "FieldElem":
        if self.fd.split:
            return FieldElem(self.fd, self.b, self.a)
        return FieldElem(self.fd, self.a, -self.b)

    def norm(self) -> Fraction:
        """e * conj(e), returned as an element of F0."""
        if self.fd.split:
            return self.a * self.b
        return self.a * self.a - self.fd.d * self.b * self.b

    def trace(self) -> Fraction:
        if self.fd.split:
            return self.a + self.b
        return 2 * self.a

    def inv(self) -> "FieldElem":
        if self.fd.split:
            if self.a == 0 or self.b == 0:
                raise DegenerateError(f"{self} is a zero divisor")
            return FieldElem(self.fd, 1 / self.a, 1 / self.b)
        n = self.norm()
        if n == 0:
            raise DegenerateError("division by zero in F")
        c = self.conj()
        return FieldElem(self.fd, c.a / n, c.b / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = self.fd.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def in_base(self) -> bool:
        """True iff the element lies in the image of F0."""
        return self.a == self.b if self.fd.split else self.b == 0

    def base_value(self) -> Fraction:
        if not self.in_base():
            raise ValueError(f"{self} is not in F0")
        return self.a

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.fd == other.fd and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self == self.fd.from_base(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        if self.fd.split:
            return f"({self.a}, {self.b})"
        if self.b == 0:
            return f"{self.a}"
        return f"{self.a} + {self.b}*w"


def valuation(e: FieldElem, mode: str = "vF"):
    """Valuation of ``e``.

    ``vF0``: normalised so the uniformizer of F0 has valuation 1 (half-integers
    can occur in the ramified case).  ``vF``: normalised so the uniformizer of
    F has valuation 1.  ``per_component``: the split pair of p-adic valuations.
    """
    fd = e.fd
    p = fd.p
    if mode == "per_component":
        if not fd.split:
            raise ValueError("per_component only applies in the split case")
        return vp(e.a, p), vp(e.b, p)
    if fd.split:
        va, vb = vp(e.a, p), vp(e.b, p)
        v = min(va, vb)
        return v
    nv = vp(e.norm(), p)
    if nv == INF:
        return INF
    if mode == "vF0":
        return Fraction(nv, 2)
    if mode == "vF":
        return nv // 2 if fd.case is Case.INERT else nv
    raise ValueError(f"unknown valuation mode {mode!r}")

"""Laurent polynomials in X^{1/2} with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class HalfLaurent:
    """A finite sum of c_k X^k with k in (1/2)Z and rational c_k.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping | Iterable | None = None):
        c: dict[Fraction, Fraction] = {}
        if coeffs is None:
            pass
        elif isinstance(coeffs, Mapping):
            for k, v in coeffs.items():
                k, v = _frac(k), _frac(v)
                if k.denominator not in (1, 2):
                    raise ValueError(f"exponent {k} is not a half-integer")
                if v:
                    c[k] = c.get(k, Fraction(0)) + v
        else:
            # a list of coefficients of X^0, X^1, ...
            for k, v in enumerate(coeffs):
                v = _frac(v)
                if v:
                    c[Fraction(k)] = v
        self._c = {k: v for k, v in c.items() if v}
        self._hash = None

    # construction ------------------------------------------------------------

    @classmethod
    def const(cls, a) -> "HalfLaurent":
        return cls({0: a})

    @classmethod
    def monomial(cls, k, a=1) -> "HalfLaurent":
        return cls({k: a})

    @classmethod
    def X(cls) -> "HalfLaurent":
        return cls({1: 1})

    # access ----------------------------------------------------------------

    def items(self):
        return sorted(self._c.items())

    def coeff(self, k) -> Fraction:
        return self._c.get(_frac(k), Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def is_polynomial(self) -> bool:
        return all(k >= 0 and k.denominator == 1 for k in self._c)

    def degree(self):
        return max(self._c) if self._c else None

    def low_degree(self):
        return min(self._c) if self._c else None

    def to_list(self) -> list[Fraction]:
        """Coefficient list of an honest polynomial, constant term first."""
        if not self.is_polynomial():
            raise ValueError("not a polynomial in X")
        if not self._c:
            return []
        out = [Fraction(0)] * (int(max(self._c)) + 1)
        for k, v in self._c.items():
            out[int(k)] = v
        return out

    # ring operations ---------------------------------------------------------

    def _coerce(self, other) -> "HalfLaurent":
        return other if isinstance(other, HalfLaurent) else HalfLaurent.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        c = dict(self._c)
        for k, v in o._c.items():
            c[k] = c.get(k, Fraction(0)) + v
        return HalfLaurent(c)

    __radd__ = __add__

    def __neg__(self):
        return HalfLaurent({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        c: dict[Fraction, Fraction] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in o._c.items():
                k = k1 + k2
                c[k] = c.get(k, Fraction(0)) + v1 * v2
        return HalfLaurent(c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are only supported for monomials via monomial()")
        out = HalfLaurent.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfLaurent.const(other)
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._c.items())))
        return self._hash

    # calculus and evaluation -------------------------------------------------

    def derivative(self) -> "HalfLaurent":
        return HalfLaurent({k - 1: k * v for k, v in self._c.items() if k != 0})

    def substitute_scale(self, q: int, power: int = 2) -> "HalfLaurent":
        """X -> q^power X, i.e. X^{1/2} -> q^{power/2} X^{1/2}; needs an even power or integer exponents."""
        out = {}
        for k, v in self._c.items():
            e = k * power
            if e.denominator != 1:
                raise ValueError("substitution would leave a square root of q")
            out[k] = v * Fraction(q) ** int(e)
        return HalfLaurent(out)

    def substitute_q2(self, q: int) -> "HalfLaurent":
        """X -> q^2 X (so X^{1/2} -> q X^{1/2})."""
        return self.substitute_scale(q, 2)

    def at_one(self) -> Fraction:
        return sum(self._c.values(), Fraction(0))

    def eval_sqrt(self, s) -> Fraction:
        """Evaluate with X^{1/2} replaced by the rational s."""
        s = _frac(s)
        return sum((v * s ** int(2 * k) for k, v in self._c.items()), Fraction(0))

    def evaluate(self, x) -> Fraction:
        """Evaluate at a rational X (only integer exponents allowed)."""
        x = _frac(x)
        total = Fraction(0)
        for k, v in self._c.items():
            if k.denominator != 1:
                raise ValueError("half-integer exponent needs an explicit square root")
            total += v * x ** int(k)
        return total

    def deriv_at_one(self, order: int = 1) -> Fraction:
        p = self
        for _ in range(order):
            p = p.derivative()
        return p.at_one()

    def divide_one_minus_x(self) -> "HalfLaurent":
        """Exact quotient by (1 - X); raises ArithmeticError if it is not exact."""
        if not self._c:
            return HalfLaurent()
        out: dict[Fraction, Fraction] = {}
        # process each coset of exponents mod 1 separately, lowest first:
        # if P = (1 - X) Q then q_k = p_k + q_{k-1}
        for off in sorted({k - (k.numerator // k.denominator) for k in self._c}):
            ks = [k for k in self._c if k - (k.numerator // k.denominator) == off]
            lo, hi = min(ks), max(ks)
            acc = Fraction(0)
            k = lo
            while k <= hi:
                acc += self._c.get(k, Fraction(0))
                if acc:
                    out[k] = acc
                k += 1
            if acc != 0:
                raise ArithmeticError("not divisible by (1 - X)")
        return HalfLaurent(out)

    # display -----------------------------------------------------------------

    def __repr__(self):
        return f"HalfLaurent({self.format()})"

    def format(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, v in self.items():
            if k == 0:
                mono = ""
            elif k == 1:
                mono = "X"
            elif k.denominator == 1:
                mono = f"X^{k.numerator}"
            else:
                mono = f"X^({k.numerator}/{k.denominator})"
            if mono and v == 1:
                term = mono
            elif mono and v == -1:
                term = "-" + mono
            else:
                term = f"{v}*{mono}" if mono else f"{v}"
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")

    def records(self) -> str:
        """Exact machine form: space separated 'k:num/den' with k written as 'a/2'."""
        out = []
        for k, v in self.items():
            out.append(f"{int(2 * k)}/2:{v.numerator}/{v.denominator}")
        return " ".join(out) if out else "0"


ZERO = HalfLaurent()
ONE = HalfLaurent.const(1)
X = HalfLaurent.X()

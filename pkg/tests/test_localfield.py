from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hermden.localfield import Case, FieldData, eta_power, valuation


def test_case_constants():
    assert [FieldData.make(c, 3).eta_pi0 for c in ("inert", "ramified", "split")] == [-1, 0, 1]
    assert [FieldData.make(c, 3).bF for c in ("inert", "ramified", "split")] == [1, 2, 1]


def test_ramified_p2_rejected():
    with pytest.raises(ValueError, match="out of scope"):
        FieldData.make("ramified", 2)


def test_split_p2_allowed():
    assert FieldData.make("split", 2).case is Case.SPLIT


def test_examples():
    inert = FieldData(Case.INERT, 3, 2)
    assert (inert.one + inert.omega).conj() == inert.one - inert.omega
    split = FieldData.make("split", 3)
    assert split.elem(1, 0) * split.elem(0, 1) == split.zero
    ram = FieldData(Case.RAMIFIED, 3, 3)
    assert ram.omega.norm() == -3


def test_valuations():
    inert = FieldData.make("inert", 3)
    assert valuation(inert.omega * 3, "vF0") == 1
    ram = FieldData(Case.RAMIFIED, 3, 3)
    assert valuation(ram.omega, "vF") == 1
    assert valuation(ram.from_base(ram.omega.norm()), "vF0") == 1
    split = FieldData.make("split", 3)
    assert valuation(split.elem(9, Fraction(1, 3)), "per_component") == (2, -1)


def test_eta_power():
    assert eta_power(FieldData.make("inert", 3), 3) == -1
    ram = FieldData.make("ramified", 3)
    assert eta_power(ram, 0) == 1
    assert eta_power(FieldData.make("split", 3), 5) == 1


rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@pytest.mark.parametrize("case", ["inert", "ramified", "split"])
@given(a=rats, b=rats, c=rats, d=rats)
def test_norm_multiplicative_and_roundtrip(case, a, b, c, d):
    fd = FieldData.make(case, 3)
    x, y = fd.elem(a, b), fd.elem(c, d)
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.conj().conj() == x
    assert (x + x.conj()).in_base() and (x * x.conj()).in_base()
    if x.norm() != 0:
        assert x * x.inv() == fd.one
        assert (y / x) * x == y
        vx = valuation(fd.from_base(x.norm()), "vF0")
        vy = valuation(fd.from_base(y.norm()), "vF0") if y.norm() != 0 else None
        if vy is not None:
            assert valuation(fd.from_base((x * y).norm()), "vF0") == vx + vy

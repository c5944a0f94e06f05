from fractions import Fraction

import pytest

from hermden import density as D
from hermden.geom import build_geom_table, deg_qcan, delta_tau, derive_val_prime, int_report
from hermden.hermlattice import LatticeError, lattice_from_gram
from hermden.localfield import FieldData


def ctx(case, n=2):
    return D.DenContext(FieldData.make(case, 3), n)


def lat(c, gram):
    return lattice_from_gram(c.fd, gram)


def test_degrees():
    for case in ("inert", "ramified", "split"):
        fd = FieldData.make(case, 3)
        assert deg_qcan(fd, 0) == fd.bF
    assert deg_qcan(FieldData.make("split", 3), 2) == 6
    assert deg_qcan(FieldData.make("inert", 3), 1) == 4


def test_val_prime_examples():
    s = ctx("split")
    for k in range(4):
        assert derive_val_prime(s, lat(s, [[3**k]])) == k
    for case in ("inert", "ramified", "split"):
        c = ctx(case)
        assert derive_val_prime(c, lat(c, [[1]])) == 0
        assert delta_tau(c, lat(c, [[1]])) == 0


def test_val_prime_rejects_large_type():
    c = ctx("inert", 3)
    with pytest.raises(LatticeError):
        derive_val_prime(c, lat(c, [[3, 0], [0, 3]]))


def test_split_table_consistent():
    s = ctx("split")
    table = build_geom_table(s, [lat(s, [[3**k]]) for k in range(5)])
    assert table.consistent
    assert table.entries[("split", 1)].delta_tau == Fraction(-1, 2)
    s3 = ctx("split", 3)
    t3 = build_geom_table(s3, [lat(s3, [[1, 0], [0, 3**k]]) for k in range(4)])
    assert t3.consistent
    for key, entry in t3.entries.items():
        assert entry.delta_tau == table.entries[key].delta_tau


@pytest.mark.parametrize("case, gram", [("split", [[9]]), ("inert", [[3]]), ("ramified", [[9]])])
def test_int_report(case, gram):
    c = ctx(case)
    rep = int_report(c, lat(c, gram))
    assert rep.int_h + rep.int_v == rep.int_total
    assert rep.deg_sum == rep.deg_zh == D.den_star_value(c, lat(c, gram))
    if case == "split":
        assert rep.int_v == 0


def test_unimodular_int_report():
    c = ctx("inert")
    rep = int_report(c, lat(c, [[1]]))
    assert rep.int_total == 0 and rep.deg_zh == 1

"""Hopf structure on quantum SL(2): tables, axiom corpus, serialization."""

import random

import pytest

from ncgv.algebra import NCPoly
from ncgv.hopf import (Tensor, hopf_axiom_report, hopf_to_doc, load_hopf,
                       slq2_hopf)
from ncgv.presentations import builtin_presentation
from ncgv.scalars import ONE, Q, QScalar, ZERO

qp = QScalar.q_power


@pytest.fixture(scope="module")
def pres():
    return builtin_presentation("slq2")


@pytest.fixture(scope="module")
def H(pres):
    return slq2_hopf(pres)


def test_coproduct_unitality(H, pres):
    assert H.coproduct(pres.one()) == Tensor(pres, 2, {((), ()): ONE})


def test_coproduct_generator(H, pres):
    d = H.coproduct(pres.gen("v11"))
    expected = Tensor(pres, 2, {
        (("v11",), ("v11",)): ONE,
        (("v12",), ("v21",)): ONE,
    })
    assert d == expected


def test_coproduct_of_product_is_product_of_coproducts(H, pres):
    a = pres.gen("v11") * pres.gen("v12")
    lhs = H.coproduct(a)
    rhs = H.coproduct(pres.gen("v11")).mul(H.coproduct(pres.gen("v12")))
    assert lhs == rhs


def test_counit_values(H, pres):
    assert H.counit(pres.one()) == ONE
    assert H.counit(pres.gen("v12")) == ZERO
    # oracle: substitute the identity matrix for the generators
    rng = random.Random(3)
    from ncgv.algebra import random_poly
    subst = {"v11": ONE, "v22": ONE, "v12": ZERO, "v21": ZERO}
    for _ in range(20):
        p = random_poly(pres, rng, 3, 3)
        want = ZERO
        for w, c in p.terms.items():
            v = c
            for g in w:
                v = v * subst[g]
            want = want + v
        assert H.counit(p) == want


def test_antipode_is_matrix_inverse(H, pres):
    # frozen expected table for the solved antipode
    assert H.antipode_table["v11"] == pres.gen("v22")
    assert H.antipode_table["v22"] == pres.gen("v11")
    assert H.antipode_table["v12"] == pres.gen("v12").scale(-qp(-1))
    assert H.antipode_table["v21"] == pres.gen("v21").scale(-qp(1))
    # oracle: m(S (x) id) Delta(v^i_j) = delta_ij
    for i in (1, 2):
        for j in (1, 2):
            g = pres.gen(f"v{i}{j}")
            total = pres.zero()
            for (w1, w2), c in H.coproduct(g).terms.items():
                total = total + (H.antipode(NCPoly(pres, {w1: ONE}))
                                 * NCPoly(pres, {w2: ONE})).scale(c)
            want = pres.one() if i == j else pres.zero()
            assert total == want


def test_antipode_antihomomorphism_random(H, pres):
    rng = random.Random(4)
    from ncgv.algebra import random_poly
    for _ in range(30):
        a = random_poly(pres, rng, 2, 2)
        b = random_poly(pres, rng, 2, 2)
        assert H.antipode(a * b) == H.antipode(b) * H.antipode(a)


def test_iterated_coproduct(H, pres):
    a = pres.gen("v11")
    assert H.iterated_coproduct(a, 1) == Tensor.of_poly(a)
    assert H.iterated_coproduct(a, 2) == H.coproduct(a)
    with pytest.raises(Exception):
        H.iterated_coproduct(a, 0)
    # both association orders agree at m = 3
    d = H.coproduct(a)
    left = {}
    right = {}
    for (w1, w2), c in d.terms.items():
        for (u1, u2), cu in H.coproduct(NCPoly(pres, {w1: ONE})).terms.items():
            key = (u1, u2, w2)
            left[key] = left.get(key, ZERO) + c * cu
        for (u1, u2), cu in H.coproduct(NCPoly(pres, {w2: ONE})).terms.items():
            key = (w1, u1, u2)
            right[key] = right.get(key, ZERO) + c * cu
    left = {k: v for k, v in left.items() if not v.is_zero()}
    right = {k: v for k, v in right.items() if not v.is_zero()}
    assert left == right
    assert H.iterated_coproduct(a, 3).terms == left


def test_axiom_report_degree3(H):
    report = hopf_axiom_report(H, degree=3)
    assert all(ok for _, ok, _ in report), report
    names = [name for name, _, _ in report]
    assert "coassociativity" in names and "star_compatibility" in names


def test_hopf_json_roundtrip(H, pres):
    doc = hopf_to_doc(H)
    H2 = load_hopf(doc, pres)
    assert H2.antipode_table == H.antipode_table
    assert H2.counit_table == H.counit_table


def test_load_rejects_broken_tables(H, pres):
    doc = hopf_to_doc(H)
    doc["antipode"]["v11"] = [{"coeff": "1", "word": "v11"}]
    with pytest.raises(Exception):
        load_hopf(doc, pres)

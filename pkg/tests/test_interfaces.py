"""File-format surfaces: calculus files reused by scenarios, character and
R-matrix loaders, and the direct-sum central element."""

import json

import pytest

from ncgv.cli import main, run_scenario
from ncgv.commrep import centrality_check, direct_sum_central, dual_centrality
from ncgv.dual import BF, LM, LP, DualError, load_character, make_slq2_context
from ncgv.fodc import bicovariant_build, fodc_from_doc, fodc_validate
from ncgv.rmatrix import RMatrixError, builtin_rmatrix, load_rmatrix
from ncgv.scalars import ONE


@pytest.fixture(scope="module")
def ctx():
    return make_slq2_context()


def test_built_calculus_file_reusable(tmp_path, ctx):
    calc_file = tmp_path / "calc.json"
    assert main(["build-bicovariant", "--algebra", "slq2", "--zeta", "eps",
                 "--out", str(calc_file)]) == 0
    doc = {
        "name": "from_file",
        "algebra": "slq2",
        "checks": [{"name": "fodc_validate", "file": str(calc_file), "degree": 2}],
    }
    report = run_scenario(doc)
    assert report["status"] == "pass"
    assert report["checks"][0]["source"] == str(calc_file)


def test_fodc_from_doc_matches_build(tmp_path, ctx):
    from ncgv.fodc import bicovariant_to_doc

    B = bicovariant_build(ctx, "eps")
    doc = bicovariant_to_doc(B)
    fodc = fodc_from_doc(ctx, doc)
    assert fodc.labels == B.fodc.labels
    assert fodc.X == B.fodc.X
    assert all(ok for _, ok, _ in fodc_validate(fodc, 2))


def test_character_loader(ctx, tmp_path):
    doc = {"name": "zeta_t", "values": {"v11": "q^2", "v12": "0",
                                        "v21": "0", "v22": "q^-2"}}
    path = tmp_path / "char.json"
    path.write_text(json.dumps(doc))
    name = load_character(str(path), ctx)
    assert name == "zeta_t"
    from ncgv.scalars import QScalar
    assert ctx.character_values("zeta_t")["v11"] == QScalar.q_power(2)
    bad = {"name": "broken", "values": {"v11": "1", "v12": "1",
                                        "v21": "1", "v22": "1"}}
    with pytest.raises(DualError):
        load_character(bad, ctx)


def test_rmatrix_loader_rejects_broken_inverse():
    good = json.loads(json.dumps({
        "name": "broken", "n": 2, "c": "s^-1",
        "R": [["q", "0", "0", "0"], ["0", "1", "0", "0"],
              ["0", "q - q^-1", "1", "0"], ["0", "0", "0", "q"]],
        "Rinv": [["q", "0", "0", "0"], ["0", "1", "0", "0"],
                 ["0", "-(q - q^-1)", "1", "0"], ["0", "0", "0", "q^-1"]],
    }))
    with pytest.raises(RMatrixError):
        load_rmatrix(good)


def test_rmatrix_yang_baxter_guard():
    R0 = builtin_rmatrix("slq2")
    from ncgv.rmatrix import RMatrixData
    from ncgv.scalars import QScalar
    bad_R = dict(R0.R)
    bad_R[(1, 1, 1, 1)] = QScalar.from_int(3)
    bad_inv = dict(R0.Rinv)
    bad_inv[(1, 1, 1, 1)] = QScalar.from_fraction("1/3")
    with pytest.raises(RMatrixError):
        RMatrixData("ybe_broken", 2, R0.c, bad_R, bad_inv)


def test_direct_sum_central(ctx):
    # verification is per-summand plus linearity of the summed commutator
    B1 = bicovariant_build(ctx, "eps")
    B2 = bicovariant_build(ctx, "zeta_q")
    total, checks = direct_sum_central([B1, B2], degree=2)
    assert all(ok for _, ok, _ in checks), checks
    assert total == B1.C + B2.C


def test_noncentral_character_detected(ctx):
    # zeta_q is a valid algebra map but not convolution-central, and the
    # centrality check on its central candidate says so
    B2 = bicovariant_build(ctx, "zeta_q")
    letters = [BF(LP, i, j) for i in (1, 2) for j in (1, 2)]
    name, ok, witness = dual_centrality(B2.C, letters, degree=2)[0]
    assert not ok and witness is not None
    assert centrality_check(B2, degree=2)[0][1] is False

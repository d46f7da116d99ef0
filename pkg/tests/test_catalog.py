import dataclasses
import math

import numpy as np
import pytest
from helpers import cgauss

from uinorms.catalog import (
    CASE_IDS,
    CASES,
    Mode,
    SubCheck,
    TrialOutcome,
    build,
    cor_2_6_blocks,
    evaluate,
    get_case,
    identity_inputs,
    sample,
)
from uinorms.ensembles import make_rng
from uinorms.matrix import zeros
from uinorms.spectral import singular_values

SHIFT = np.array([[0, 1], [0, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def spectrum(m):
    return singular_values(m)


def test_catalog_shape():
    assert len(CASE_IDS) == 16
    assert get_case("lemma_2_1").mode is Mode.ALL_UI_NORMS
    assert {c for c in CASE_IDS if CASES[c].mode is Mode.OPERATOR_NORM_ONLY} == {
        "cor_2_6", "cor_2_7", "lemma_2_6", "cor_2_8a", "cor_2_8b"}
    with pytest.raises(KeyError):
        get_case("nope")


def test_block_counts():
    assert get_case("lemma_2_1").block_counts([1, 2, 3]) == [1]
    assert get_case("thm_2_2").block_counts([1, 2, 3]) == [1, 2, 3]
    assert get_case("cor_2_3").block_counts([1, 2, 5]) == [2, 5]


def test_sample_rejects_bad_block_counts():
    rng = make_rng(0)
    with pytest.raises(ValueError):
        sample("lemma_2_1", 2, 2, rng)
    with pytest.raises(ValueError):
        sample("cor_2_3", 2, 1, rng)


# -- hand-computed examples


@pytest.mark.parametrize("case_id", ["prop_1_3", "prop_1_4", "prop_1_5"])
def test_shift_gives_equal_spectra(case_id):
    inputs = {"a": SHIFT, "b": SHIFT} if case_id == "prop_1_4" else {"a": SHIFT}
    lhs, rhs = build(case_id, inputs)
    np.testing.assert_allclose(spectrum(lhs), spectrum(rhs), atol=1e-14)
    ev = evaluate(case_id, inputs)
    assert ev.holds and ev.ratio == pytest.approx(1)


def test_prop_1_3_shift_spectrum():
    lhs, rhs = build("prop_1_3", {"a": SHIFT})
    np.testing.assert_allclose(spectrum(lhs), [1, 1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(spectrum(rhs), [1, 1, 0, 0], atol=1e-15)


def test_lemma_2_1_examples(rng):
    ev = evaluate("lemma_2_1", identity_inputs("lemma_2_1", 3))
    assert ev.holds and ev.ratio == pytest.approx(1, abs=1e-12)
    ev = evaluate("lemma_2_1", {"a": cgauss(rng, 3, 3), "b": cgauss(rng, 3, 3), "x": zeros(3)})
    assert ev.holds and ev.lhs_norm == 0


def test_thm_2_2_identity_two_blocks():
    lhs, rhs = build("thm_2_2", identity_inputs("thm_2_2", 2, 2))
    np.testing.assert_allclose(spectrum(lhs), [4, 4, 0, 0], atol=1e-14)
    np.testing.assert_allclose(spectrum(rhs)[0], 4, atol=1e-12)


def test_cor_2_3_examples():
    ev = evaluate("cor_2_3", identity_inputs("cor_2_3", 2, 3))
    assert ev.holds and ev.ratio == pytest.approx(1, abs=1e-12)
    a = [np.diag([1.0, 0]).astype(complex), np.diag([0, 1.0]).astype(complex)]
    lhs, rhs = build("cor_2_3", {"a": a})
    np.testing.assert_array_equal(lhs, zeros(2))
    np.testing.assert_array_equal(rhs, I2)


def test_ineq_1_10_examples(rng):
    a = cgauss(rng, 3, 3)
    lhs, rhs = build("ineq_1_10", {"a": a, "b": a})
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    lhs, _ = build("ineq_1_10", {"a": a, "b": zeros(3)})
    np.testing.assert_array_equal(lhs, zeros(3))


def test_lemma_2_4_examples():
    a, b = np.diag([2.0, 1.0]).astype(complex), np.diag([0.5, 3.0]).astype(complex)
    lhs, rhs = build("lemma_2_4", {"a": a, "b": b})
    # positive inputs: |A| + |B| = A + B
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    ev = evaluate("lemma_2_4", {"a": a, "b": -a})
    assert ev.holds and ev.lhs_norm == 0


def test_cor_2_5_examples():
    z = zeros(2)
    ev = evaluate("cor_2_5", {"p1": z, "p2": z, "p3": z, "p4": z})
    assert ev.holds and ev.lhs_norm == 0 and ev.rhs_norm == 0
    ev = evaluate("cor_2_5", {"p1": I2, "p2": z, "p3": z, "p4": z})
    assert ev.holds and ev.ratio == pytest.approx(1, abs=1e-12)
    assert ev.checks["operator_max_form"].holds


@pytest.mark.parametrize("n", [2, 3, 5])
def test_cor_2_6_identity_is_tight(n):
    ev = evaluate("cor_2_6", identity_inputs("cor_2_6", 2, n))
    assert ev.lhs_norm == pytest.approx(n) and ev.ratio == pytest.approx(1, abs=1e-12)
    assert ev.holds


def test_cor_2_6_orthogonal_diagonals():
    a = [np.diag([1.0, 0]).astype(complex), np.diag([0, 1.0]).astype(complex)]
    ev = evaluate("cor_2_6", {"a": a})
    assert ev.lhs_norm == pytest.approx(1) and ev.rhs_norm == pytest.approx(2)
    assert ev.holds


def test_ineq_1_12_examples(rng):
    g = cgauss(rng, 3, 3)
    p = g @ g.conj().T
    assert evaluate("ineq_1_12", {"a": p, "b": p}).holds
    ev = evaluate("ineq_1_12", {"a": p, "b": zeros(3)})
    assert ev.holds and ev.ratio == pytest.approx(1, abs=1e-9)


def test_cor_2_7_identity():
    ev = evaluate("cor_2_7", {"a": I2, "b": I2})
    assert ev.lhs_norm == pytest.approx(2) and ev.rhs_norm == pytest.approx(2)
    assert ev.holds and all(c.holds for c in ev.checks.values())


def test_lemma_2_6_examples(rng):
    a, d = cgauss(rng, 3, 3), cgauss(rng, 3, 3)
    ev = evaluate("lemma_2_6", {"a": a, "b": zeros(3), "c": zeros(3), "d": d})
    assert ev.holds and ev.ratio == pytest.approx(1, abs=1e-10)
    ev = evaluate("lemma_2_6", identity_inputs("lemma_2_6", 2))
    assert ev.lhs_norm == pytest.approx(2) and ev.rhs_norm == pytest.approx(2)


@pytest.mark.parametrize("case_id", ["cor_2_8a", "cor_2_8b"])
def test_shift_is_an_equality_witness(case_id):
    ev = evaluate(case_id, {"a": SHIFT})
    assert ev.lhs_norm == pytest.approx(1, abs=1e-14)
    assert ev.rhs_norm == pytest.approx(1, abs=1e-14)
    assert ev.ratio >= 1 - 1e-9 and ev.holds


# -- structural consistency


def test_thm_2_2_single_block_is_lemma_2_1(rng):
    a, b, x = (cgauss(rng, 4, 4) for _ in range(3))
    lemma = build("lemma_2_1", {"a": a, "b": b, "x": x})
    thm = build("thm_2_2", {"a": [a], "b": [b], "x": [x]})
    for m1, m2 in zip(lemma, thm):
        np.testing.assert_allclose(m1, m2, atol=1e-12)


def test_two_term_bound_is_two_block_theorem(rng):
    x = {k: cgauss(rng, 3, 3) for k in ("a1", "a2", "b1", "b2", "x", "y")}
    pair = build("ineq_1_9", x)
    thm = build("thm_2_2", {"a": [x["a1"], x["b1"]], "b": [x["a2"], x["b2"]], "x": [x["x"], x["y"]]})
    for m1, m2 in zip(pair, thm):
        np.testing.assert_array_equal(m1, m2)


def test_cyclic_sum_with_adjoints_is_symmetrized_product(rng):
    a, b = cgauss(rng, 3, 3), cgauss(rng, 3, 3)
    cyc = build("cor_2_3", {"a": [a.conj().T, b.conj().T]})
    sym = build("ineq_1_10", {"a": a, "b": b})
    for m1, m2 in zip(cyc, sym):
        np.testing.assert_allclose(m1, m2, atol=1e-12)


def test_positive_sum_factorization(rng):
    a = [g @ g.conj().T for g in (cgauss(rng, 3, 3) for _ in range(3))]
    t, dmat, c, m = cor_2_6_blocks(a)
    assert np.linalg.norm(3 * c - m @ m.conj().T) <= 1e-8 * np.linalg.norm(c)
    assert np.linalg.eigvalsh(0.5 * (c + c.conj().T))[0] >= -1e-8 * np.linalg.norm(c, 2)
    assert np.linalg.eigvalsh(0.5 * ((dmat - t) + (dmat - t).conj().T))[0] >= -1e-8 * np.linalg.norm(dmat, 2)


# -- random inputs: every case holds, including sub-checks


@pytest.mark.parametrize("case_id", CASE_IDS)
@pytest.mark.parametrize("d", [1, 2, 5])
def test_random_inputs_satisfy_every_case(case_id, d):
    case = get_case(case_id)
    for n in case.block_counts([1, 2, 3]):
        for trial in range(8):
            inputs = sample(case, d, n, make_rng(99, case_id, d, n, trial))
            ev = evaluate(case, inputs)
            failed = [k for k, c in ev.checks.items() if not c.holds]
            assert ev.verdict.holds and not failed, (case_id, d, n, trial, ev.verdict, failed)
            assert 0 <= ev.ratio <= 1 + 1e-7


@pytest.mark.parametrize("case_id", [c for c in CASE_IDS if CASES[c].mode is Mode.ALL_UI_NORMS])
def test_fan_cross_check_runs_on_every_majorization_case(case_id):
    case = get_case(case_id)
    n = case.block_counts([2])[0]
    ev = evaluate(case, sample(case, 3, n, make_rng(5, case_id)))
    assert ev.checks["fan_cross_check"].holds
    if case.mutual:
        assert ev.checks["fan_cross_check_reverse"].holds


def test_reversed_inequality_is_caught(rng):
    case = get_case("lemma_2_1")
    flipped = dataclasses.replace(case, builder=lambda x: case.builder(x)[::-1])
    inputs = {"a": cgauss(rng, 3, 3), "b": cgauss(rng, 3, 3), "x": cgauss(rng, 3, 3)}
    ev = evaluate(flipped, inputs)
    assert not ev.holds and ev.verdict.margin < 0 and ev.ratio > 1


def test_operator_mode_catches_a_false_bound():
    case = get_case("cor_2_8b")
    halved = dataclasses.replace(case, builder=lambda x: (case.builder(x)[0], 0.5 * case.builder(x)[1]))
    ev = evaluate(halved, {"a": SHIFT})
    assert not ev.verdict.holds and ev.ratio == pytest.approx(2)


def test_schatten_mode():
    case = dataclasses.replace(get_case("lemma_2_1"), mode=Mode.SCHATTEN_SET, schatten_ps=(1.0, 2.0))
    ev = evaluate(case, identity_inputs(case, 2))
    assert ev.holds and set(ev.checks) == {"schatten:1", "schatten:2"}


def test_subcheck_boundary():
    assert SubCheck(1.0, 1.0, 0.0).holds
    assert not SubCheck(1.0 + 1e-9, 1.0, 1e-10).holds


def test_outcome_serializes_non_finite():
    out = TrialOutcome("lemma_2_1", 2, 1, "x", ratio=math.inf)
    d = out.to_dict()
    assert d["ratio"] == "inf" and d["lhs_norm"] == "nan" and not d["holds"]

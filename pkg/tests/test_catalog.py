import math

import pytest

from pqss.catalog import build_catalog, grid_modulus_estimate, verify_metadata

WIDTH_CASES = [(1.0, 1.0), (2.0, 2.0), (4.0, 2.0)]

EXPECTED_NAMES = {
    "const1", "e10", "e01", "e11", "e20", "e02", "sum", "exp_sum",
    "sinprod", "abs_ramp", "smooth_abs_005", "smooth_abs_010", "smooth_abs_020",
}


def test_catalog_names_and_evaluation():
    cat = build_catalog(1.0, 1.0)
    assert set(cat) == EXPECTED_NAMES
    assert cat["e11"](0.25, 0.5) == 0.125
    assert cat["const1"](0.9, 0.1) == 1.0


def test_width_floor():
    with pytest.raises(ValueError, match="width1 >= 1"):
        build_catalog(0.5, 1.0)
    with pytest.raises(ValueError, match="width"):
        build_catalog(1.0, 0.0)


@pytest.mark.parametrize("w1,w2", WIDTH_CASES)
def test_all_metadata_survives_verification(w1, w2):
    cat = build_catalog(w1, w2)
    for tf in cat.values():
        assert verify_metadata(tf) == [], tf.name


def test_frozen_modulus_values():
    cat = build_catalog(1.0, 1.0)
    assert cat["sum"].total_modulus(0.1, 0.2) == pytest.approx(0.3, abs=1e-15)
    assert cat["e10"].total_modulus(0.25, 0.9) == 0.25
    assert cat["exp_sum"].total_modulus(0.3, 0.4) == pytest.approx(
        math.exp(2.0) * -math.expm1(-0.7), rel=1e-15
    )
    assert cat["abs_ramp"].total_modulus(0.2, 1.0) == pytest.approx(0.2, abs=1e-15)
    # ramp arm saturates at u* = 1/2
    assert cat["abs_ramp"].total_modulus(2.0, 0.0) == 0.5

    cat22 = build_catalog(2.0, 2.0)
    # W2 d1 + W1 d2 - d1 d2 = 1 + 0.5 - 0.125
    assert cat22["e11"].total_modulus(0.5, 0.25) == pytest.approx(1.375, abs=1e-15)
    # d1 (2 W1 - d1) = 0.5 * 3.5
    assert cat22["e20"].total_modulus(0.5, 0.9) == pytest.approx(1.75, abs=1e-15)

    g = lambda u: math.hypot(u, 0.1) - 0.1
    ustar = 1.5
    got = cat22["smooth_abs_010"].total_modulus(0.4, 0.0)
    assert got == pytest.approx(g(ustar) - g(ustar - 0.4), rel=1e-14)


def test_modulus_saturates_at_full_range():
    cat = build_catalog(1.0, 1.0)
    # deltas beyond the rectangle act like the full widths
    assert cat["sum"].total_modulus(5.0, 9.0) == 2.0
    assert cat["e20"].total_modulus(10.0, 0.0) == 1.0
    cat42 = build_catalog(4.0, 2.0)
    assert cat42["e11"].total_modulus(100.0, 100.0) == pytest.approx(8.0, abs=1e-13)


def test_modulus_rejects_negative_delta():
    cat = build_catalog(1.0, 1.0)
    for name in ("sum", "e11", "abs_ramp", "const1", "smooth_abs_005"):
        with pytest.raises(ValueError, match="delta >= 0"):
            cat[name].total_modulus(-0.1, 0.2)


def test_modulus_monotone_in_window():
    cat = build_catalog(2.0, 2.0)
    deltas = [0.0, 0.1, 0.3, 0.7, 1.5, 2.0, 3.0]
    for name in ("e11", "e20", "exp_sum", "abs_ramp", "smooth_abs_020", "sum"):
        om = cat[name].total_modulus
        vals = [om(d, 0.5 * d) for d in deltas]
        assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:])), name
        assert om(0.0, 0.0) == 0.0


def test_grid_estimate_linear_case():
    got = grid_modulus_estimate(lambda a, b: a, 1.0, 1.0, 0.3, 0.0, grid_k=101)
    assert got == pytest.approx(0.3, abs=1e-12)
    with pytest.raises(ValueError, match="deltas >= 0"):
        grid_modulus_estimate(lambda a, b: a, 1.0, 1.0, -0.1, 0.0)


def test_grid_estimate_never_exceeds_exact():
    cat = build_catalog(2.0, 2.0)
    for name in ("e11", "exp_sum", "abs_ramp", "smooth_abs_010"):
        tf = cat[name]
        for d1, d2 in ((0.15, 0.4), (0.8, 0.0), (2.0, 2.0)):
            est = grid_modulus_estimate(tf.fn, tf.width1, tf.width2, d1, d2, grid_k=41)
            assert est <= tf.total_modulus(d1, d2) + 1e-9, (name, d1, d2)


def test_estimate_only_and_non_smooth_entries():
    cat = build_catalog(1.0, 1.0)
    assert cat["sinprod"].total_modulus is None
    assert cat["abs_ramp"].cb2_norm is None
    assert cat["sinprod"].sup_norm == 1.0


def test_verify_metadata_catches_bad_claims():
    import dataclasses

    cat = build_catalog(1.0, 1.0)
    bad_sup = dataclasses.replace(cat["e11"], sup_norm=0.5)
    assert any("sup_norm" in p for p in verify_metadata(bad_sup))
    bad_lip = dataclasses.replace(cat["e20"], lipschitz_axis=(0.5, 0.0))
    assert any("Lipschitz" in p for p in verify_metadata(bad_lip))
    bad_mod = dataclasses.replace(cat["sum"], total_modulus=lambda d1, d2: 0.25 * (d1 + d2))
    assert any("total_modulus" in p for p in verify_metadata(bad_mod))

"""Tests for balanced polynomials, weights, and the homogeneous splitting."""

from fractions import Fraction

import numpy as np
import pytest

from bergman.errors import DimensionError, InvalidPolynomialError
from bergman.polynomials import (
    BalancedPolynomial,
    HoloPolynomial,
    WeightTuple,
    balanced_from_json,
    balanced_to_json,
    check_scaling_identity,
    diagonal_coefficients,
    diagonal_polynomial,
    eval_p,
    homogeneous_decompose,
    scale_point,
    weight_of,
)


def test_weight_tuple_constants():
    wt = WeightTuple((1, 2, 3))
    assert wt.inv_mu == Fraction(1, 1) + Fraction(1, 2) + Fraction(1, 3)
    assert wt.big_M == 6
    assert wt.n == 3


def test_weight_tuple_empty_is_the_base_case():
    wt = WeightTuple(())
    assert wt.n == 0
    assert wt.inv_mu == 0
    assert wt.big_M == 2


def test_weight_tuple_rejects_nonpositive():
    with pytest.raises(InvalidPolynomialError):
        WeightTuple((1, 0))
    with pytest.raises(InvalidPolynomialError):
        WeightTuple((-2,))


def test_weight_of_exact_rationals():
    # alpha = (1, 3) with m = (2, 3): 1/4 + 3/6 = 3/4, exactly.
    assert weight_of((1, 3), (2, 3)) == Fraction(3, 4)
    assert weight_of((2,), (2,)) == Fraction(1, 2)
    assert weight_of((0, 0), (5, 7)) == 0


def test_weight_of_dimension_mismatch():
    with pytest.raises(DimensionError):
        weight_of((1, 2, 3), (1, 2))


def test_diagonal_polynomial_evaluates_to_power_sum():
    p = diagonal_polynomial((1, 2))
    w = np.array([0.3 + 0.4j, -0.2 + 0.1j])
    expected = abs(w[0]) ** 2 + abs(w[1]) ** 4
    assert eval_p(p, w) == pytest.approx(expected, rel=1e-14)


def test_eval_handles_cross_terms():
    # p(w) = |w1|^2 + |w2|^2 + w1 conj(w2) + w2 conj(w1) = |w1 + w2|^2 >= 0.
    terms = (
        ((1, 0), (1, 0), 1.0),
        ((0, 1), (0, 1), 1.0),
        ((1, 0), (0, 1), 1.0),
        ((0, 1), (1, 0), 1.0),
    )
    p = BalancedPolynomial(WeightTuple((1, 1)), terms)
    rng = np.random.default_rng(7)
    w = rng.standard_normal((64, 2)) + 1j * rng.standard_normal((64, 2))
    got = p.eval_many(w)
    expected = np.abs(w[:, 0] + w[:, 1]) ** 2
    assert np.allclose(got, expected, rtol=1e-12, atol=1e-12)
    assert got.dtype == np.float64


def test_complex_cross_coefficients():
    # |w1 + i w2|^2 has off-diagonal coefficients -i and +i.
    terms = (
        ((1, 0), (1, 0), 1.0),
        ((0, 1), (0, 1), 1.0),
        ((1, 0), (0, 1), -1.0j),
        ((0, 1), (1, 0), 1.0j),
    )
    p = BalancedPolynomial(WeightTuple((1, 1)), terms)
    w = np.array([0.5 - 0.25j, 0.125 + 1.0j])
    assert p(w) == pytest.approx(abs(w[0] + 1j * w[1]) ** 2, rel=1e-14)


def test_balance_condition_enforced():
    # |w|^2 under m = (2) has weight 1/4 per side, not 1/2.
    with pytest.raises(InvalidPolynomialError):
        BalancedPolynomial(WeightTuple((2,)), (((1,), (1,), 1.0),))


def test_hermitian_symmetry_enforced():
    with pytest.raises(InvalidPolynomialError):
        BalancedPolynomial(
            WeightTuple((1, 1)),
            (((1, 0), (0, 1), 1.0),),  # partner term missing
        )
    with pytest.raises(InvalidPolynomialError):
        BalancedPolynomial(
            WeightTuple((1, 1)),
            (((1, 0), (0, 1), 1.0), ((0, 1), (1, 0), 2.0)),  # not conjugates
        )


def test_diagonal_coefficient_must_be_real():
    with pytest.raises(InvalidPolynomialError):
        BalancedPolynomial(WeightTuple((1,)), (((1,), (1,), 1.0 + 0.5j),))


def test_nonnegativity_rejects_sign_changing_polynomial():
    # -|w|^2 is balanced and Hermitian but negative away from 0.
    with pytest.raises(InvalidPolynomialError):
        BalancedPolynomial(WeightTuple((1,)), (((1,), (1,), -1.0),))


def test_indefinite_cross_term_rejected():
    # w1 conj(w2) + w2 conj(w1) = 2 Re(w1 conj(w2)) changes sign.
    with pytest.raises(InvalidPolynomialError):
        BalancedPolynomial(
            WeightTuple((1, 1)),
            (((1, 0), (0, 1), 1.0), ((0, 1), (1, 0), 1.0)),
        )


def test_zero_polynomial_is_allowed():
    p = BalancedPolynomial(WeightTuple((1,)), ())
    assert p.is_zero
    assert p(np.array([2.0 + 3.0j])) == 0.0


def test_scaling_identity_holds_for_balanced():
    rng = np.random.default_rng(11)
    p = diagonal_polynomial((1, 2, 3))
    for theta in (0.25, 1.0, 7.5):
        w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        assert check_scaling_identity(p, theta, w)


def test_scale_point_exponents():
    m = WeightTuple((2,))
    w = np.array([1.0 + 0.0j])
    out = scale_point(16.0, w, m)
    # 16 ** (1/4) = 2.
    assert out[0] == pytest.approx(2.0)


def test_homogeneous_decompose_splits_by_exact_weight():
    m = WeightTuple((1, 2))
    # Terms of weight 1/2 (w1), 1/4 (w2), 3/4 (w1 w2), 1/2 (w2^2).
    q = HoloPolynomial(2, (((1, 0), 1.0), ((0, 1), 2.0), ((1, 1), 3.0), ((0, 2), 4.0)))
    parts = homogeneous_decompose(q, m)
    assert parts.scale == 4
    assert set(parts.parts) == {1, 2, 3}
    assert parts.parts[2].terms == (((0, 2), 4.0 + 0j), ((1, 0), 1.0 + 0j))
    assert parts.parts[1].terms == (((0, 1), 2.0 + 0j),)
    assert parts.parts[3].terms == (((1, 1), 3.0 + 0j),)


def test_homogeneous_decompose_sum_reconstructs():
    m = WeightTuple((2, 3))
    rng = np.random.default_rng(5)
    alphas = [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3), (4, 0)]
    coeffs = rng.standard_normal(len(alphas)) + 1j * rng.standard_normal(len(alphas))
    q = HoloPolynomial(2, tuple((a, c) for a, c in zip(alphas, coeffs)))
    parts = homogeneous_decompose(q, m)
    w = rng.standard_normal((16, 2)) + 1j * rng.standard_normal((16, 2))
    total = sum(part(w) for part in parts.parts.values())
    assert np.allclose(total, q(w), rtol=1e-13, atol=1e-13)


def test_holo_polynomial_merges_duplicates_and_drops_zeros():
    q = HoloPolynomial(1, (((2,), 1.0), ((2,), -1.0), ((0,), 3.0)))
    assert q.terms == (((0,), 3.0 + 0j),)


def test_diagonal_coefficients_detector():
    p = diagonal_polynomial((1, 3))
    assert diagonal_coefficients(p) == (1.0, 1.0)

    scaled = BalancedPolynomial(
        WeightTuple((1, 3)),
        (((1, 0), (1, 0), 2.0), ((0, 3), (0, 3), 0.5)),
    )
    assert diagonal_coefficients(scaled) == (2.0, 0.5)

    # |w1 + w2|^2 is not diagonal.
    cross = BalancedPolynomial(
        WeightTuple((1, 1)),
        (
            ((1, 0), (1, 0), 1.0),
            ((0, 1), (0, 1), 1.0),
            ((1, 0), (0, 1), 1.0),
            ((0, 1), (1, 0), 1.0),
        ),
    )
    assert diagonal_coefficients(cross) is None


def test_json_round_trip():
    p = diagonal_polynomial((1, 2))
    blob = balanced_to_json(p)
    q, added = balanced_from_json(blob)
    assert added == 0
    assert q == p


def test_json_completes_missing_partner():
    blob = {
        "m": [1, 1],
        "terms": [
            {"alpha": [1, 0], "beta": [1, 0], "c": [1.0, 0.0]},
            {"alpha": [0, 1], "beta": [0, 1], "c": [1.0, 0.0]},
            {"alpha": [1, 0], "beta": [0, 1], "c": [0.5, 0.0]},
        ],
    }
    p, added = balanced_from_json(blob)
    assert added == 1
    w = np.array([0.4 + 0.1j, -0.3 + 0.2j])
    expected = abs(w[0]) ** 2 + abs(w[1]) ** 2 + 2 * 0.5 * (w[0] * np.conj(w[1])).real
    assert p(w) == pytest.approx(expected, rel=1e-13)


def test_json_rejects_malformed():
    with pytest.raises(InvalidPolynomialError):
        balanced_from_json({"terms": []})

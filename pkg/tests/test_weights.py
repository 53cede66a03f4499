"""Weight functions and the three spectral norms."""

import math

import numpy as np
import pytest

from bergman.errors import DivergenceError, DomainError
from bergman.polynomials import BalancedPolynomial, HoloPolynomial, WeightTuple
from bergman.quad import gaussian_weighted_Cn, integrate_Bp
from bergman.transforms1d import Piece, Profile1D, exp_profile
from bergman.weights import (
    diag_monomial_norm,
    lambda_weight,
    log_lambda,
    log_omega,
    norm_Hp,
    norm_Xp,
    norm_Yp,
    omega,
)

def make_disc():
    return BalancedPolynomial(WeightTuple((1,)), (((1,), (1,), 1.0),))


def make_point():
    return BalancedPolynomial(WeightTuple(()), ())


def make_coupled():
    # Positive semidefinite cross form with eigenvalues 3/2 and 1/2.
    return BalancedPolynomial(
        WeightTuple((1, 1)),
        (
            ((1, 0), (1, 0), 1.0),
            ((0, 1), (0, 1), 1.0),
            ((1, 0), (0, 1), 0.5),
            ((0, 1), (1, 0), 0.5),
        ),
    )


# ---------------------------------------------------------------------------
# omega
# ---------------------------------------------------------------------------

def test_omega_examples():
    assert omega(0.0, 1.0, 0.0) == 1.0
    assert abs(omega(0.0, math.inf, 1.0) - 1.0 / (4.0 * np.pi)) < 1e-16
    expect = (1.0 - np.exp(-4.0 * np.pi)) / (4.0 * np.pi)
    assert abs(omega(0.0, 1.0, 1.0) - expect) < 1e-15


def test_omega_negative_t_and_errors():
    val = omega(0.0, 1.0, -1.0)
    assert abs(val - (np.exp(4.0 * np.pi) - 1.0) / (4.0 * np.pi)) < 1e-9 * val
    with pytest.raises(DomainError):
        omega(0.0, math.inf, 0.0)
    with pytest.raises(DomainError):
        omega(0.0, math.inf, -1.0)
    with pytest.raises(DomainError):
        omega(1.0, 1.0, 0.5)


def test_omega_shift_identity():
    rng = np.random.default_rng(42)
    for _ in range(200):
        a = rng.uniform(-2, 2)
        b = a + rng.uniform(0.01, 4)
        t = rng.uniform(-2, 2)
        lhs = omega(a, b, t)
        rhs = np.exp(-4.0 * np.pi * a * t) * omega(0.0, b - a, t)
        assert abs(lhs - rhs) < 1e-12 * max(abs(lhs), abs(rhs))


def test_omega_continuity_at_zero():
    # No cancellation blow-up approaching the removable singularity.
    for k in range(4, 13):
        eps = 10.0**-k
        for a, b in ((0.0, 1.0), (-0.5, 2.0), (0.3, 0.31)):
            drift = abs(omega(a, b, eps) - (b - a))
            assert drift < 20.0 * np.pi * max(abs(a), abs(b)) * (b - a) * eps + 1e-15


def test_omega_positive_and_vectorized():
    t = np.linspace(-3, 3, 101)
    vals = omega(-0.2, 1.7, t)
    assert vals.shape == t.shape
    assert np.all(vals > 0)


def test_log_omega_matches_log():
    rng = np.random.default_rng(7)
    for _ in range(100):
        a = rng.uniform(-1, 1)
        b = a + rng.uniform(0.05, 3)
        t = rng.uniform(-1.5, 1.5)
        assert abs(log_omega(a, b, t) - math.log(omega(a, b, t))) < 1e-11
    assert abs(log_omega(0.0, 1.0, 0.0) - 0.0) < 1e-15
    # Where omega itself underflows, the log form stays finite.
    big = log_omega(2.0, 3.0, 60.0)
    assert math.isfinite(big) and big < -1000.0
    assert abs(log_omega(0.0, math.inf, 2.0) + math.log(8.0 * np.pi)) < 1e-12


# ---------------------------------------------------------------------------
# lambda
# ---------------------------------------------------------------------------

def test_lambda_at_origin_machine_exact():
    assert lambda_weight(0.0, 0.0) == math.pi


def test_lambda_near_degenerate_s():
    assert lambda_weight(1.0 - 1e-12, 0.0) < 1e-5
    with pytest.raises(DomainError):
        lambda_weight(1.0, 0.0)
    with pytest.raises(DomainError):
        lambda_weight(-0.1, 0.0)


def test_lambda_example_value():
    expect = (1.0 - np.exp(-4.0 * np.pi**2)) / (4.0 * np.pi)
    assert abs(lambda_weight(0.0, 1.0) - expect) < 1e-15


def test_lambda_equals_omega_on_random_pairs():
    rng = np.random.default_rng(123)
    s = rng.uniform(0.0, 0.999, 1000)
    t = rng.uniform(-2.0, 2.0, 1000)
    lam = lambda_weight(s, t)
    for k in range(1000):
        a = math.asin(s[k])
        ref = omega(a, np.pi - a, t[k])
        assert abs(lam[k] - ref) < 1e-12 * max(1.0, abs(ref))


def test_log_lambda_matches():
    rng = np.random.default_rng(5)
    s = rng.uniform(0.0, 0.99, 50)
    t = rng.uniform(-1.5, 1.5, 50)
    assert np.max(np.abs(log_lambda(s, t) - np.log(lambda_weight(s, t)))) < 1e-11
    # Exponential growth direction stays finite in log space.
    assert math.isfinite(log_lambda(0.0, -40.0))


# ---------------------------------------------------------------------------
# Y_p norm
# ---------------------------------------------------------------------------

def test_norm_Yp_constant_on_disc():
    p = make_disc()
    res = norm_Yp(p, [1.0])
    assert abs(res.value - np.pi**2 / 2.0) < 1e-9
    assert res.converged


def test_norm_Yp_empty_and_zero():
    assert norm_Yp(make_disc(), []).value == 0.0
    assert norm_Yp(make_point(), []).value == 0.0


def test_norm_Yp_degenerate_base_is_exact():
    vals = [1.0, 2.0j, 0.5]
    res = norm_Yp(make_point(), vals)
    expect = np.pi * (1.0 + 4.0 / 2.0 + 0.25 / 3.0)
    assert res.value == expect
    assert res.error_estimate == 0.0


def test_norm_Yp_homogeneous():
    p = make_disc()
    w = HoloPolynomial(1, (((1,), 1.0),))
    base = norm_Yp(p, [w, 2.0]).value
    scaled = norm_Yp(p, [w.scaled(3.0j), 6.0j]).value
    assert abs(scaled - 9.0 * base) < 1e-11 * scaled


# ---------------------------------------------------------------------------
# H_p norm
# ---------------------------------------------------------------------------

def test_norm_Hp_scalar_example():
    f = [(exp_profile(1.0, 1.0, 1.0), 1.0)]
    res = norm_Hp(make_point(), f)
    assert abs(res.value - 1.0 / (16.0 * np.pi)) < 1e-12


def test_norm_Hp_divergence_at_zero():
    with pytest.raises(DivergenceError):
        norm_Hp(make_point(), [(exp_profile(1.0, 0.0, 1.0), 1.0)])
    # Borderline equality case diverges logarithmically.
    w = HoloPolynomial(1, (((1,), 1.0),))
    with pytest.raises(DivergenceError):
        norm_Hp(make_disc(), [(exp_profile(1.0, 1.0, 1.0), w)])


def test_norm_Hp_monomial_closed_value():
    w = HoloPolynomial(1, (((1,), 1.0),))
    f = [(exp_profile(1.0, 2.0, 1.0), w)]
    res = norm_Hp(make_disc(), f)
    expect = 1.0 / (256.0 * np.pi**2)
    assert abs(res.value - expect) < 1e-10 * expect


def test_norm_Hp_mixed_polynomial():
    # t^2 e^{-t} (1 + w): the two monomials are fiber-orthogonal, so the
    # norms add: 1/(64 pi) + 1/(256 pi^2).
    q = HoloPolynomial(1, (((0,), 1.0), ((1,), 1.0)))
    f = [(exp_profile(1.0, 2.0, 1.0), q)]
    res = norm_Hp(make_disc(), f)
    expect = 1.0 / (64.0 * np.pi) + 1.0 / (256.0 * np.pi**2)
    assert abs(res.value - expect) < 1e-10 * expect


def test_norm_Hp_against_iterated_quadrature():
    # Independent path: fiber integrals by gaussian-weighted quadrature,
    # then a plain t quadrature of the resulting profile.
    p = make_disc()
    w = HoloPolynomial(1, (((1,), 1.0),))
    f = [(exp_profile(1.0, 2.0, 1.0), w)]
    closed = norm_Hp(p, f).value

    from bergman.quad import integrate_halfline

    def g(t_nodes):
        t_nodes = np.asarray(t_nodes).real
        out = np.empty(t_nodes.shape)
        for idx, t in np.ndenumerate(t_nodes):
            fiber = gaussian_weighted_Cn(
                p, lambda w_: np.abs(w_[..., 0]) ** 2, float(t)
            ).value
            out[idx] = t**4 * np.exp(-2.0 * t) * fiber.real / (4.0 * np.pi * t)
        return out

    direct = integrate_halfline(g, 2.0).value.real
    assert abs(closed - direct) < 1e-8 * direct


def test_norm_Hp_gram_path_scaling_transport():
    # Coupled quadratic form: exact value by diagonalizing the form,
    # computed here through the sampled Gram and its power-law transport.
    p = make_coupled()
    w1 = HoloPolynomial(2, (((1, 0), 1.0),))
    f = [(exp_profile(1.0, 2.0, 1.0), w1)]
    res = norm_Hp(p, f, qmc_exponent=14)
    expect = 1.0 / (288.0 * np.pi**2)
    assert abs(res.value - expect) < 3e-2 * expect
    assert abs(res.value - expect) < 10.0 * res.error_estimate + 1e-12


def test_norm_Hp_homogeneous():
    w = HoloPolynomial(1, (((1,), 1.0),))
    f = [(exp_profile(1.0, 2.0, 1.0), w)]
    g = [(exp_profile(2.0j, 2.0, 1.0), w)]
    a = norm_Hp(make_disc(), f).value
    b = norm_Hp(make_disc(), g).value
    assert abs(b - 4.0 * a) < 1e-12 * b


def test_diag_monomial_norm_values():
    n, a = diag_monomial_norm((1,), (1.0,), (0,))
    assert abs(n - np.pi) < 1e-14 and a == 1
    n2, a2 = diag_monomial_norm((2,), (1.0,), (1,))
    assert abs(n2 - (np.pi / 2.0) * math.gamma(1.0)) < 1e-14 and a2 == 1


# ---------------------------------------------------------------------------
# X_p norm
# ---------------------------------------------------------------------------

def test_norm_Xp_rejects_exponential_tails():
    with pytest.raises(DivergenceError):
        norm_Xp(make_disc(), [(exp_profile(1.0, 0.0, 1.0), 1.0)])


def test_norm_Xp_t_zero_slice():
    # integral over the disc of lambda(|z|^2, 0) equals 2 pi.
    p = make_disc()
    res = integrate_Bp(p, lambda w: lambda_weight(np.clip(p(w), 0, 1 - 1e-15), 0.0))
    # The arcsin kink at the boundary slows the radial rule; a level-3
    # refinement still lands within 1e-6 of the exact 2 pi.
    assert abs(res.value - 2.0 * np.pi) < 1e-6


def test_norm_Xp_indicator_baseline():
    p = make_disc()
    box = Profile1D((Piece(1.0, 0.0, 0.0, support=(0.0, 1.0)),))
    res = norm_Xp(p, [(box, 1.0)], tol=1e-6)

    # Independent tensor quadrature in polar coordinates.
    from scipy.special import roots_legendre

    x, wq = roots_legendre(80)
    r = 0.5 * (x + 1.0)
    t = 0.5 * (x + 1.0)
    rw = 0.5 * wq
    tw = 0.5 * wq
    lam = lambda_weight(np.minimum(r[:, None] ** 2, 1 - 1e-15), t[None, :])
    direct = 2.0 * np.pi * float(np.einsum("i,ij,j->", rw * r, lam, tw))
    assert abs(res.value - direct) < 1e-6 * direct
    assert res.converged


def test_norm_Xp_scalar_case():
    box = Profile1D((Piece(1.0, 0.0, 0.0, support=(0.0, 1.0)),))
    res = norm_Xp(make_point(), [(box, 1.0)])
    from scipy.special import roots_legendre

    x, wq = roots_legendre(200)
    t = 0.5 * (x + 1.0)
    direct = 0.5 * float(np.sum(wq * lambda_weight(0.0, t)))
    assert abs(res.value - direct) < 1e-8 * direct


def test_norm_Xp_gaussian_profile():
    p = make_disc()
    gauss = Profile1D((Piece(1.0, 0, 0.0, sigma=1.0),))
    zeta = HoloPolynomial(1, (((1,), 1.0),))
    res = norm_Xp(p, [(gauss, zeta)])
    assert res.value > 0
    scaled = norm_Xp(p, [(gauss.scaled(2.0), zeta)])
    assert abs(scaled.value - 4.0 * res.value) < 1e-10 * scaled.value

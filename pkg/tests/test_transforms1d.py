"""Strip and sector transforms: closed forms, inversion, norms."""

import math

import numpy as np
import pytest

from bergman.errors import AccuracyError, DomainError, NotInSpaceError
from bergman.quad import integrate_halfline, integrate_line
from bergman.transforms1d import (
    HoloFunction1D,
    Piece,
    Profile1D,
    cauchy_riemann_residual,
    exp_profile,
    leading_exponent_at_zero,
    profile_in_strip_class,
    sector_A2_norm_sq,
    sector_forward,
    sector_forward_numeric,
    sector_inverse,
    strip_A2_norm_sq,
    strip_forward,
    strip_forward_numeric,
    strip_inverse,
    strip_lower_edge,
)


def omega(a, b, t):
    t = np.asarray(t).real.astype(float)
    return (np.exp(-4.0 * np.pi * a * t) - np.exp(-4.0 * np.pi * b * t)) / (4.0 * np.pi * t)


# ---------------------------------------------------------------------------
# Pieces and profiles
# ---------------------------------------------------------------------------

def test_piece_validation():
    Piece(1.0, 1.0, 2.0)
    Piece(1.0, 2.0, 0.3, sigma=0.5)
    Piece(1.0, 0.5, 1.0, support=(0.0, 2.0))
    with pytest.raises(NotInSpaceError):
        Piece(1.0, -0.5, 1.0)
    with pytest.raises(NotInSpaceError):
        Piece(1.0, 0.0, -1.0)  # exponential growth
    with pytest.raises(NotInSpaceError):
        Piece(1.0, 0.5, 1.0, sigma=1.0)  # fractional power on the whole line
    with pytest.raises(NotInSpaceError):
        Piece(1.0, 0.5, 1.0, support=(-1.0, 1.0))


def test_profile_evaluation():
    f = Profile1D((Piece(2.0, 1.0, 3.0),))
    t = np.array([0.0, 0.5, 2.0, -1.0])
    expect = np.array([0.0, 2.0 * 0.5 * np.exp(-1.5), 4.0 * np.exp(-6.0), 0.0])
    assert np.allclose(f(t), expect, rtol=0, atol=1e-15)
    g = Profile1D((Piece(1.0, 0.0, 0.2, sigma=0.5),))
    assert np.isclose(g(-1.0), np.exp(0.2 - 0.5))
    h = Profile1D((Piece(1.0, 0.0, 0.0, support=(1.0, 2.0)),))
    assert h(0.5) == 0.0 and h(1.5) == 1.0


def test_profile_algebra_and_modulation():
    f = exp_profile(1.0, 1.0, 1.0)
    g = exp_profile(2.0, 0.0, 2.0)
    t = np.linspace(0.1, 3.0, 7)
    assert np.allclose((f + g)(t), f(t) + g(t))
    assert np.allclose(f.scaled(3.0 - 1.0j)(t), (3.0 - 1.0j) * f(t))
    theta = 0.7
    assert np.allclose(f.modulated(theta)(t), np.exp(2j * np.pi * theta * t) * f(t))


def test_leading_exponent_cancellation():
    assert leading_exponent_at_zero(exp_profile(1.0, 1.0, 1.0)) == 1.0
    f = Profile1D((Piece(1.0, 0.0, 1.0), Piece(-1.0, 0.0, 2.0)))
    assert leading_exponent_at_zero(f) == 1.0
    g = Profile1D((Piece(1.0, 0.0, 1.0), Piece(-1.0, 0.0, 2.0), Piece(-1.0, 1.0, 1.0)))
    assert leading_exponent_at_zero(g) == 2.0


def test_strip_class_membership():
    f = exp_profile(1.0, 0.0, 1.0)
    assert profile_in_strip_class(f, -0.1, 1.0)
    assert not profile_in_strip_class(f, -1.0, 1.0)  # decay loses to the weight
    assert not profile_in_strip_class(f, 0.0, math.inf)  # 1/t at 0 wins
    assert profile_in_strip_class(exp_profile(1.0, 1.0, 1.0), 0.0, math.inf)


# ---------------------------------------------------------------------------
# Forward transform
# ---------------------------------------------------------------------------

def test_strip_forward_exponential_examples():
    F = strip_forward(exp_profile(1.0, 0.0, 1.0), (-0.1, 1.0))
    for z in (0.0, 0.3 + 0.2j, -1.0 + 0.5j):
        assert abs(F(z) - 1.0 / (1.0 - 2j * np.pi * z)) < 1e-14
    G = strip_forward(exp_profile(1.0, 1.0, 1.0), (0.0, math.inf))
    assert abs(G(0.25j) - 1.0 / (1.0 - 2j * np.pi * 0.25j) ** 2) < 1e-14


def test_strip_forward_rejects_bad_strip():
    with pytest.raises(NotInSpaceError):
        strip_forward(exp_profile(1.0, 0.0, 1.0), (-1.0, 0.0))
    with pytest.raises(NotInSpaceError):
        strip_forward(exp_profile(1.0, 0.0, 1.0), (0.1, math.inf))


def test_strip_forward_domain_check():
    F = strip_forward(exp_profile(1.0, 1.0, 1.0), (0.0, 2.0))
    with pytest.raises(DomainError):
        F(1.0)  # Im z = 0 is on the boundary, hence outside
    with pytest.raises(DomainError):
        F(1.0 + 3.0j)


def test_strip_forward_matches_quadrature():
    f = Profile1D((Piece(1.0, 0.0, 1.0), Piece(0.5j, 2.0, 2.0 + 0.5j)))
    F = strip_forward(f, (0.0, 4.0))
    for z in (0.1 + 0.5j, -0.4 + 1.5j, 2.0 + 0.8j):
        res = strip_forward_numeric(f, z)
        assert abs(F(z) - res.value) < 1e-8


def test_gaussian_forward_low_moments():
    # a = 0 and a = 1 have textbook closed forms; check the recurrence
    # against them, then a = 3 against quadrature.
    sigma, b = 0.7, 0.4 + 0.2j
    for z in (0.3 + 0.1j, -1.2 - 0.6j):
        beta = 2j * np.pi * z - b
        F0 = strip_forward(Profile1D((Piece(1.0, 0, b, sigma=sigma),)), (-5.0, 5.0))
        expect0 = np.sqrt(np.pi / sigma) * np.exp(beta**2 / (4 * sigma))
        assert abs(F0(z) - expect0) < 1e-12 * abs(expect0)
        F1 = strip_forward(Profile1D((Piece(1.0, 1, b, sigma=sigma),)), (-5.0, 5.0))
        expect1 = (beta / (2 * sigma)) * expect0
        assert abs(F1(z) - expect1) < 1e-12 * abs(expect1)
    f3 = Profile1D((Piece(1.0, 3, b, sigma=sigma),))
    res = strip_forward_numeric(f3, 0.2 - 0.3j)
    F3 = strip_forward(f3, (-5.0, 5.0))
    assert abs(F3(0.2 - 0.3j) - res.value) < 1e-10 * abs(res.value)


def test_window_forward_example():
    # integral over [0, 1] of t e^{2 pi i z t} at z = i.
    f = Profile1D((Piece(1.0, 1.0, 0.0, support=(0.0, 1.0)),))
    F = strip_forward(f, (-3.0, 3.0))
    cc = 2.0 * np.pi
    expect = (1.0 - np.exp(-cc) * (1.0 + cc)) / cc**2
    assert abs(F(1j) - expect) < 1e-13


def test_forward_linearity():
    f = exp_profile(1.0, 1.0, 1.0)
    g = exp_profile(2.0j, 0.0, 2.0)
    strip = (0.0, 2.0)
    Fsum = strip_forward(f + g.scaled(-0.5), strip)
    F = strip_forward(f, strip)
    G = strip_forward(g, strip)
    z = np.array([0.1 + 0.4j, -1.0 + 1.2j, 3.0 + 0.9j])
    assert np.max(np.abs(Fsum(z) - (F(z) - 0.5 * G(z)))) < 1e-12


def test_translation_equivariance():
    # Modulating the profile by e^{2 pi i theta t} translates the transform.
    f = Profile1D((Piece(1.0, 1.0, 1.0), Piece(0.3, 0.0, 2.0 + 1.0j)))
    strip = (0.0, 3.0)
    rng = np.random.default_rng(5)
    for theta in (-1.3, 0.25, 2.0):
        F = strip_forward(f, strip)
        Ftheta = strip_forward(f.modulated(theta), strip)
        for _ in range(5):
            z = rng.uniform(-2, 2) + 1j * rng.uniform(0.1, 2.9)
            assert abs(Ftheta(z) - F(z + theta)) < 1e-12 * max(1.0, abs(F(z + theta)))


def test_holomorphy_spot_check():
    F = strip_forward(exp_profile(1.0, 1.0, 1.0), (0.0, 2.0))
    rng = np.random.default_rng(11)
    for _ in range(20):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.2, 1.8))
        assert cauchy_riemann_residual(F.fn, z) < 1e-6


# ---------------------------------------------------------------------------
# Sector transform
# ---------------------------------------------------------------------------

def test_sector_forward_example():
    # f = e^{-t} on the upper half plane viewed as V(0, pi): at z = i the
    # value is G(i pi/2)/i = 1/(i (1 + pi^2)).
    F = sector_forward(exp_profile(1.0, 0.0, 1.0), (0.0, np.pi))
    expect = 1.0 / (1j * (1.0 + np.pi**2))
    assert abs(F(1j) - expect) < 1e-14
    with pytest.raises(DomainError):
        F(-1.0 + 0.0j)
    with pytest.raises(DomainError):
        F(1.0)  # boundary ray


def test_sector_forward_matches_direct_integral():
    f = Profile1D((Piece(1.0, 0.0, 1.0), Piece(0.4, 1.0, 1.5)))
    F = sector_forward(f, (0.0, np.pi))
    for z in (1j, 0.5 + 0.8j, -0.3 + 1.1j, 2.0 + 0.1j):
        res = sector_forward_numeric(f, z)
        assert abs(F(z) - res.value) < 1e-10 * max(1.0, abs(res.value))


def test_sector_bounds_validation():
    with pytest.raises(DomainError):
        sector_forward(exp_profile(1.0, 0.0, 1.0), (0.0, 4.0))
    with pytest.raises(DomainError):
        sector_forward(exp_profile(1.0, 0.0, 1.0), (1.0, 0.5))


# ---------------------------------------------------------------------------
# Inversion
# ---------------------------------------------------------------------------

def test_strip_roundtrip():
    f = exp_profile(1.0, 1.0, 1.0)
    F = strip_forward(f, (0.0, 1.0))
    grid = np.linspace(0.1, 5.0, 25)
    rec = strip_inverse(F, 0.3, grid)
    assert np.max(np.abs(rec.values - f(grid))) < 1e-6
    assert rec.error_estimate < 1e-6


def test_contour_height_independence():
    f = exp_profile(1.0, 1.0, 1.0)
    F = strip_forward(f, (0.0, 3.0))
    grid = np.linspace(0.1, 1.0, 9)
    rec_low = strip_inverse(F, 0.5, grid, half_width=3e5)
    rec_high = strip_inverse(F, 2.0, grid, half_width=3e5)
    assert np.max(np.abs(rec_low.values - rec_high.values)) < 1e-6
    assert np.max(np.abs(rec_low.values - f(grid))) < 1e-6


def test_inverse_window_too_small():
    F = strip_forward(exp_profile(1.0, 1.0, 1.0), (0.0, 3.0))
    with pytest.raises(AccuracyError):
        strip_inverse(F, 2.0, np.linspace(0.1, 1.0, 5), half_width=50.0)


def test_inverse_contour_outside_strip():
    F = strip_forward(exp_profile(1.0, 1.0, 1.0), (0.0, 1.0))
    with pytest.raises(DomainError):
        strip_inverse(F, 2.0, [0.5])


def test_sector_roundtrip():
    f = exp_profile(1.0, 1.0, 1.0)
    F = sector_forward(f, (0.0, np.pi))
    grid = np.linspace(0.1, 3.0, 15)
    rec = sector_inverse(F, 0.05, grid)
    assert np.max(np.abs(rec.values - f(grid))) < 1e-6


# ---------------------------------------------------------------------------
# Norms and the Plancherel identity
# ---------------------------------------------------------------------------

def test_strip_plancherel_exact_oracle():
    # |T f|^2 integrated over S(0, 1) for f = t e^{-t} has the closed value
    # (1/4pi) (1/4 - (2 + 4pi)^{-2}).
    f = exp_profile(1.0, 1.0, 1.0)
    F = strip_forward(f, (0.0, 1.0))
    expect = (0.25 - (2.0 + 4.0 * np.pi) ** -2) / (4.0 * np.pi)
    res = strip_A2_norm_sq(F, 0.0, 1.0, tol=1e-11)
    assert abs(res.value - expect) < 1e-7 * expect
    assert abs(res.value - expect) < 10.0 * res.error_estimate + 1e-9


def test_strip_plancherel_mixed_profile():
    f = Profile1D((Piece(1.0, 1.0, 1.0), Piece(1.0 + 1.0j, 2.0, 2.0 + 0.5j)))
    a, b = -0.05, 0.8
    F = strip_forward(f, (a, b))
    lhs = strip_A2_norm_sq(F, a, b, tol=1e-11).value
    rhs = integrate_halfline(lambda t: np.abs(f(t)) ** 2 * omega(a, b, t), 1.5).value.real
    assert abs(lhs - rhs) < 1e-7 * rhs


def test_strip_plancherel_gaussian():
    f = Profile1D((Piece(1.0, 0, 0.2, sigma=0.5),))
    a, b = -0.3, 0.6
    F = strip_forward(f, (a, b))
    lhs = strip_A2_norm_sq(F, a, b, tol=1e-11).value
    rhs = integrate_line(lambda t: np.abs(f(t)) ** 2 * omega(a, b, t), 12.0).value.real
    assert abs(lhs - rhs) < 1e-7 * rhs


def test_sector_plancherel():
    f = Profile1D((Piece(1.0, 0.0, 1.0), Piece(0.3, 1.0, 1.0)))
    a, b = 0.2, 2.6
    F = sector_forward(f, (a, b))
    lhs = sector_A2_norm_sq(F, a, b, tol=1e-9).value
    rhs = integrate_halfline(lambda t: np.abs(f(t)) ** 2 * omega(a, b, t), 2.0).value.real
    assert abs(lhs - rhs) < 1e-6 * rhs


def test_reflected_profile_maps_to_reflected_transform():
    # A profile supported in t <= 0 transforms to z -> F(-z); exercised
    # through a window piece straddling the reflection.
    f = Profile1D((Piece(1.0, 2.0, 0.5, support=(0.0, 2.0)),))
    g = Profile1D((Piece(1.0, 2.0, -0.5, support=(-2.0, 0.0)),))  # f(-t)
    Ff = strip_forward(f, (-1.0, 1.0))
    Fg = strip_forward(g, (-1.0, 1.0))
    for z in (0.3 + 0.4j, -0.7 - 0.2j):
        assert abs(Fg(z) - Ff(-z)) < 1e-12


def test_strip_edge_helper():
    f = Profile1D((Piece(1.0, 0.0, 1.0), Piece(1.0, 0.0, 4.0)))
    assert abs(strip_lower_edge(f) - (-1.0 / (2.0 * np.pi))) < 1e-15
    entire = Profile1D((Piece(1.0, 0, 0.0, sigma=1.0),))
    assert strip_lower_edge(entire) == -math.inf

"""Quadrature engines behind every norm, transform, and kernel integral.

Four families of rules live here:

* ``integrate_halfline``: Gauss-Laguerre on (0, inf) after the substitution
  u = s*t, where s is the (possibly complex) decay rate of the integrand.
* ``integrate_line``: composite Gauss-Legendre on [-T, T] with panels that
  grow geometrically away from the center, so kinks at 0 and slow algebraic
  tails both get resolved at logarithmic panel count.
* ``integrate_Bp``: integrals over the sublevel set {p < 1} of a balanced
  polynomial.  Diagonal p gets an exact-measure tensor rule (weighted
  Gauss-Jacobi in the radial variables u_j = c_j r_j^(2 m_j) nested over the
  simplex sum u_j < 1, trapezoid in the angles); everything else falls back
  to scrambled quasi-Monte Carlo over a bounding polydisc.
* ``gaussian_weighted_Cn``: integrals of g(w) e^{-4 pi t p(w)} over C^n,
  with generalized Gauss-Laguerre radial rules in the diagonal case and
  importance-sampled QMC otherwise.

All node tables are cached and every stochastic path uses fixed seeds, so
repeated calls with equal arguments are bit-identical.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special as sp
from scipy.stats import qmc

from .errors import DimensionError, DivergenceError, DomainError
from .polynomials import BalancedPolynomial, diagonal_coefficients

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral together with an internal error estimate.

    ``converged`` is False when a budgeted rule ran out of refinement levels
    before its error estimate dropped below the requested tolerance; the
    value and estimate are still returned.
    """

    value: complex
    error_estimate: float
    nodes_used: int
    converged: bool = True


# ---------------------------------------------------------------------------
# Cached node tables
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _laguerre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Laguerre nodes and log-scaled weights log(w_k) + u_k.

    The scaled weights turn sum(w_k e^{u_k} f(u_k)) into
    sum(exp(logw_k) f(u_k)) without overflowing at large nodes.
    """
    u, w = np.polynomial.laguerre.laggauss(n)
    return u, np.log(w) + u


@functools.lru_cache(maxsize=None)
def _genlaguerre_rule(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Generalized Gauss-Laguerre rule for the weight u^alpha e^{-u}."""
    u, w = sp.roots_genlaguerre(n, alpha)
    return u, np.log(w) + u


@functools.lru_cache(maxsize=None)
def _legendre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


@functools.lru_cache(maxsize=None)
def power_weighted_01(n: int, power: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integral_0^1 x^power h(x) dx with power > -1.

    Gauss-Jacobi with the singular factor built into the weight, so h only
    needs to be smooth.  Exact for polynomial h up to degree 2n - 1.
    """
    if power <= -1:
        raise DivergenceError(f"x^{power} is not integrable at 0")
    x, w = sp.roots_jacobi(n, 0.0, power)
    # Map [-1, 1] -> [0, 1]; the weight (1+x)^power picks up 2^power and the
    # measure dx picks up 1/2, combining to 2^-(power+1).
    return 0.5 * (x + 1.0), w * 0.5 ** (power + 1.0)


# ---------------------------------------------------------------------------
# Half-line
# ---------------------------------------------------------------------------

def integrate_halfline(g: Integrand, decay_rate: complex) -> QuadratureResult:
    """Integrate g over (0, inf) when g(t) e^{st} is polynomially bounded.

    Uses Gauss-Laguerre after the rotation t = u/s, which is legitimate for
    integrands analytic in the sector swept between the ray arg(1/s) and the
    positive axis.  Runs the 16, 32, and 64 point rules; the value is the
    64-point result and the error estimate is |result_64 - result_32|.
    """
    s = complex(decay_rate)
    if s.real <= 0:
        raise DivergenceError(f"decay rate {s} has nonpositive real part")
    results = []
    for n in (16, 32, 64):
        u, logw = _laguerre_rule(n)
        vals = np.asarray(g(u / s), dtype=complex)
        results.append(complex(np.sum(np.exp(logw) * vals)) / s)
    return QuadratureResult(
        value=results[2],
        error_estimate=abs(results[2] - results[1]),
        nodes_used=16 + 32 + 64,
    )


# ---------------------------------------------------------------------------
# Real line
# ---------------------------------------------------------------------------

def _panel_edges(half_width: float, max_panel: float, center: float) -> np.ndarray:
    """Geometric panel edges covering [center - T, center + T].

    Panels double in width away from the center (resolving kinks and decay
    there at log cost) until they hit ``max_panel``, after which they stay
    that wide (resolving oscillation of a known frequency).
    """
    if half_width <= 0:
        raise DomainError(f"window half-width must be positive, got {half_width}")
    first = min(1.0, half_width, max_panel)
    edges = [0.0]
    while edges[-1] < half_width:
        width = min(max(first, edges[-1]), max_panel)
        edges.append(min(edges[-1] + width, half_width))
    right = np.array(edges)
    return center + np.concatenate([-right[::-1], right[1:]])


def integrate_line(
    g: Integrand,
    half_width: float,
    *,
    points: int = 24,
    max_panel_width: float = math.inf,
    center: float = 0.0,
) -> QuadratureResult:
    """Composite Gauss-Legendre over [center - T, center + T].

    The tail beyond T is the caller's responsibility.  The error estimate
    comes from comparing ``points`` against ``2 * points`` nodes per panel.
    """
    edges = _panel_edges(half_width, max_panel_width, center)
    lo, hi = edges[:-1], edges[1:]
    results = []
    nodes_used = 0
    for n in (points, 2 * points):
        x, w = _legendre_rule(n)
        # All panels at once: t has shape (panels, n).
        t = 0.5 * (hi - lo)[:, None] * x[None, :] + 0.5 * (hi + lo)[:, None]
        vals = np.asarray(g(t.ravel()), dtype=complex).reshape(t.shape)
        results.append(complex(np.sum(vals * w[None, :] * (0.5 * (hi - lo))[:, None])))
        nodes_used += t.size
    return QuadratureResult(
        value=results[1],
        error_estimate=abs(results[1] - results[0]),
        nodes_used=nodes_used,
    )


# ---------------------------------------------------------------------------
# Shared helpers for the domain rules
# ---------------------------------------------------------------------------

def _angular_nodes(count: int) -> tuple[np.ndarray, float]:
    theta = 2.0 * np.pi * np.arange(count) / count
    return theta, 2.0 * np.pi / count


def _weighted_sphere_min(p: BalancedPolynomial, samples: int = 8192) -> float:
    """Sampled minimum of p on the weighted unit sphere sum |v_j|^(2 m_j) = 1.

    Every w decomposes as w_j = theta^(1/(2 m_j)) v_j with v on that sphere
    and p(w) = theta p(v), so a positive minimum here bounds the sublevel set
    {p < 1} inside an explicit polydisc.
    """
    m = p.weights.m
    n = len(m)
    rng = np.random.default_rng(31415926)
    # Uniform point on the simplex sum x_j = 1 via normalized exponentials.
    x = rng.standard_exponential((samples, n))
    x /= x.sum(axis=1, keepdims=True)
    radii = x ** (1.0 / (2.0 * np.array(m)))
    phases = np.exp(2j * np.pi * rng.random((samples, n)))
    values = p.eval_many(radii * phases)
    return float(values.min())


_QMC_SEEDS = (97, 193, 389, 769, 1543, 3079, 6151, 12289)


def _qmc_mean(
    f: Callable[[np.ndarray], np.ndarray],
    dim: int,
    points_per_replicate: int,
) -> tuple[complex, float, int]:
    """Mean of f over [0,1)^dim by scrambled Sobol with replicate spread.

    Eight independently scrambled replicates with pinned seeds; the error
    estimate is the standard error of the replicate means.  Deterministic.
    """
    means = []
    for seed in _QMC_SEEDS:
        sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
        u = sampler.random(points_per_replicate)
        means.append(complex(np.mean(f(u))))
    means = np.array(means)
    value = complex(means.mean())
    spread = float(np.sqrt(np.sum(np.abs(means - value) ** 2) / (len(means) - 1)))
    return value, spread / math.sqrt(len(means)), len(_QMC_SEEDS) * points_per_replicate


# ---------------------------------------------------------------------------
# Sublevel set {p < 1}
# ---------------------------------------------------------------------------

def _diagonal_Bp_level(
    g: Integrand,
    coeffs: Sequence[float],
    m: Sequence[int],
    radial: int,
    angular: int,
) -> tuple[complex, int]:
    """One tensor-rule evaluation of integral over {sum c_j r_j^(2m_j) < 1}.

    Radial variables are u_j = c_j r_j^(2 m_j) nested over the simplex:
    u_1 in (0, 1), u_2 in (0, 1 - u_1), and so on, each with a Gauss-Jacobi
    rule absorbing the measure factor u^(1/m_j - 1).
    """
    n = len(m)
    theta, dtheta = _angular_nodes(angular)
    axes_u = []
    axes_w = []
    for mj in m:
        xi, wxi = power_weighted_01(radial, 1.0 / mj - 1.0)
        axes_u.append(xi)
        axes_w.append(wxi)

    # Build the nested grid: xi_j are simplex fractions, u_j the actual
    # radial variables, jac the accumulated measure factor.
    grids = np.meshgrid(*axes_u, *([theta] * n), indexing="ij")
    xi = grids[:n]
    th = grids[n:]
    u = []
    jac = np.ones_like(xi[0])
    remaining = np.ones_like(xi[0])
    for j, mj in enumerate(m):
        uj = remaining * xi[j]
        u.append(uj)
        # du_j = remaining * dxi_j, and the Jacobi weight supplies
        # xi^(1/m_j - 1), leaving remaining^(1/m_j) to carry explicitly.
        jac = jac * remaining ** (1.0 / mj)
        remaining = remaining * (1.0 - xi[j])
    for j, (mj, cj) in enumerate(zip(m, coeffs)):
        jac = jac / (2.0 * mj * cj ** (1.0 / mj))

    w_pts = np.stack(
        [(u[j] / coeffs[j]) ** (1.0 / (2.0 * m[j])) * np.exp(1j * th[j]) for j in range(n)],
        axis=-1,
    )
    vals = np.asarray(g(w_pts), dtype=complex)

    weight = jac * dtheta**n
    for j in range(n):
        shape = [1] * (2 * n)
        shape[j] = radial
        weight = weight * axes_w[j].reshape(shape)
    return complex(np.sum(vals * weight)), vals.size


def integrate_Bp(
    p: BalancedPolynomial,
    g: Callable[[np.ndarray], np.ndarray],
    *,
    tol: float = 1e-9,
    radial_points: int = 24,
    angular_points: int = 17,
    max_level: int = 3,
    qmc_exponent: int = 16,
) -> QuadratureResult:
    """Integral of g over the sublevel set {p < 1} in C^n.

    ``g`` receives an array of shape (..., n) of complex points and must
    return values of matching shape.  For diagonal p the tensor rule refines
    by doubling until the level-to-level difference is below tol (relative)
    or ``max_level`` doublings are exhausted; otherwise scrambled QMC over a
    bounding polydisc is used and the tolerance class is only around 1e-3.
    """
    coeffs = diagonal_coefficients(p)
    if coeffs is not None:
        m = p.weights.m
        prev = None
        nodes = 0
        err = math.inf
        for level in range(max_level + 1):
            radial = radial_points * 2**level
            angular = angular_points * 2**level
            value, used = _diagonal_Bp_level(g, coeffs, m, radial, angular)
            nodes += used
            if prev is not None:
                err = abs(value - prev)
                if err <= tol * max(1.0, abs(value)):
                    return QuadratureResult(value, err, nodes)
            prev = value
        return QuadratureResult(value, err, nodes, converged=False)

    pmin = _weighted_sphere_min(p)
    if pmin <= 1e-3:
        raise DomainError(
            "sublevel set {p < 1} is unbounded or too eccentric for the QMC box"
        )
    m = np.array(p.weights.m)
    radii = (1.25 / pmin) ** (1.0 / (2.0 * m))
    cell = float(np.prod(np.pi * radii**2))
    n = p.weights.n

    def sample(unit: np.ndarray) -> np.ndarray:
        r = radii * np.sqrt(unit[:, :n])
        w = r * np.exp(2j * np.pi * unit[:, n:])
        inside = p.eval_many(w) < 1.0
        vals = np.zeros(len(w), dtype=complex)
        if inside.any():
            vals[inside] = np.asarray(g(w[inside]), dtype=complex)
        return vals * cell

    value, err, nodes = _qmc_mean(sample, 2 * n, 2 ** (qmc_exponent - 3))
    return QuadratureResult(value, err, nodes, converged=err <= max(tol, 1e-3) * max(1.0, abs(value)))


# ---------------------------------------------------------------------------
# Gaussian-type weights over all of C^n
# ---------------------------------------------------------------------------

def _radial_gaussian_rule(mj: int, s: float, radial: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integral f(r) e^{-s r^(2 mj)} r dr over (0, inf).

    For mj = 1 the substitution u = s r^2 turns every surviving angular mode
    of a polynomial f into an integer power of u, so plain Gauss-Laguerre is
    exact.  Higher mj would leave fractional powers of u, where Laguerre
    stalls at a fixed bias; those coordinates instead get panelled
    Gauss-Legendre in the scaled radius, truncated where the weight has
    decayed below 1e-20.
    """
    if mj == 1:
        u, logw = _genlaguerre_rule(radial, 0.0)
        return np.sqrt(u / s), np.exp(logw - u) / (2.0 * s)
    r0 = s ** (-1.0 / (2.0 * mj))
    reach = (46.0 + 2.0 * mj) ** (1.0 / (2.0 * mj))
    panels = max(6, int(np.ceil(reach / 0.4)))
    pts = max(6, radial // 4)
    nodes, wts = _legendre_rule(pts)
    edges = np.linspace(0.0, reach, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    x = (0.5 * (hi - lo)[:, None] * nodes[None, :] + 0.5 * (hi + lo)[:, None]).ravel()
    v = (0.5 * (hi - lo)[:, None] * wts[None, :]).ravel()
    return r0 * x, v * x * np.exp(-(x ** (2 * mj))) * r0**2


def _diagonal_Cn_level(
    g: Integrand,
    coeffs: Sequence[float],
    m: Sequence[int],
    t: float,
    radial: int,
    angular: int,
) -> tuple[complex, int]:
    """One tensor evaluation of integral g(w) e^{-4 pi t p(w)} dV, p diagonal.

    Each coordinate contributes a radial rule against e^{-4 pi t c_j
    r^(2 m_j)} r dr and a trapezoid circle rule; the tensor product handles
    diagonal p exactly because the weight factorizes.
    """
    n = len(m)
    theta, dtheta = _angular_nodes(angular)
    axes_r = []
    axes_w = []
    for mj, cj in zip(m, coeffs):
        r, wr = _radial_gaussian_rule(mj, 4.0 * np.pi * t * cj, radial)
        axes_r.append(r)
        axes_w.append(wr)

    grids = np.meshgrid(*axes_r, *([theta] * n), indexing="ij")
    rr = grids[:n]
    th = grids[n:]
    w_pts = np.stack([rr[j] * np.exp(1j * th[j]) for j in range(n)], axis=-1)
    vals = np.asarray(g(w_pts), dtype=complex)

    weight = np.full(rr[0].shape, dtheta**n)
    for j in range(n):
        shape = [1] * (2 * n)
        shape[j] = axes_w[j].size
        weight = weight * axes_w[j].reshape(shape)
    return complex(np.sum(vals * weight)), vals.size


def _diagonal_part(p: BalancedPolynomial) -> BalancedPolynomial | None:
    """The diagonal (alpha == beta, single-variable) terms of p, if they
    dominate: returns None when some coordinate has no diagonal term."""
    terms = []
    seen = [False] * p.weights.n
    for alpha, beta, c in p.terms:
        if alpha == beta:
            support = [j for j, aj in enumerate(alpha) if aj]
            if len(support) == 1 and alpha[support[0]] == p.weights.m[support[0]] and c.real > 0:
                seen[support[0]] = True
                terms.append((alpha, beta, complex(c.real)))
    if not all(seen):
        return None
    return BalancedPolynomial(p.weights, tuple(terms))


def gaussian_weighted_Cn(
    p: BalancedPolynomial,
    g: Callable[[np.ndarray], np.ndarray],
    t: float,
    *,
    tol: float = 1e-9,
    radial_points: int = 32,
    angular_points: int = 17,
    max_level: int = 2,
    qmc_exponent: int = 16,
) -> QuadratureResult:
    """Integral of g(w) e^{-4 pi t p(w)} over C^n.

    The Gaussian-type factor is supplied by the rule; ``g`` should be the
    remaining polynomially bounded part, taking arrays of shape (..., n).
    Diagonal p uses tensor generalized-Laguerre rules with doubling; other p
    uses importance-sampled QMC against the diagonal part of p (and refuses
    if that part does not dominate a positive multiple of p).
    """
    if t <= 0:
        raise DivergenceError(f"Gaussian weight needs t > 0, got t = {t}")
    n = p.weights.n
    if n == 0:
        value = complex(np.asarray(g(np.zeros((1, 0), dtype=complex)), dtype=complex).ravel()[0])
        return QuadratureResult(value, 0.0, 1)

    coeffs = diagonal_coefficients(p)
    if coeffs is not None:
        m = p.weights.m
        prev = None
        nodes = 0
        for level in range(max_level + 1):
            radial = radial_points * 2**level
            angular = angular_points * 2**level
            value, used = _diagonal_Cn_level(g, coeffs, m, t, radial, angular)
            nodes += used
            if prev is not None:
                err = abs(value - prev)
                if err <= tol * max(1.0, abs(value)):
                    return QuadratureResult(value, err, nodes)
            prev = value
        return QuadratureResult(value, abs(value - prev) if prev is not value else math.inf,
                                nodes, converged=False)

    diag = _diagonal_part(p)
    if diag is None:
        raise DomainError("p has no dominating diagonal part; no QMC importance density")
    dcoeffs = diagonal_coefficients(diag)
    # Empirical lower bound rho with p >= rho * diag, checked on the weighted
    # sphere of diag (both sides scale identically along weighted rays).
    m = np.array(p.weights.m, dtype=float)
    rng = np.random.default_rng(27182818)
    x = rng.standard_exponential((8192, n))
    x /= x.sum(axis=1, keepdims=True)
    v = (x / np.array(dcoeffs)) ** (1.0 / (2.0 * m)) * np.exp(2j * np.pi * rng.random((8192, n)))
    ratio = p.eval_many(v)  # diag(v) == 1 on these points
    rho = 0.8 * float(ratio.min())
    if rho <= 1e-3:
        raise DomainError(
            "p is too degenerate relative to its diagonal part for the QMC density"
        )

    shapes = 1.0 / m
    scale = 4.0 * np.pi * t * rho * np.array(dcoeffs)
    # dV in the u variables: prod u^(1/m_j - 1) / (2 m_j scale_j^(1/m_j)),
    # and the Gamma(1/m_j) importance density cancels the u^(1/m_j - 1) e^-u.
    const = float(np.prod(2.0 * np.pi * sp.gamma(shapes) / (2.0 * m * scale**shapes)))

    def sample(unit: np.ndarray) -> np.ndarray:
        u = sp.gammaincinv(shapes, np.clip(unit[:, :n], 1e-15, 1.0 - 1e-15))
        r = (u / scale) ** (1.0 / (2.0 * m))
        w = r * np.exp(2j * np.pi * unit[:, n:])
        pw = p.eval_many(w)
        # e^{-4 pi t p + sum u} = e^{-4 pi t (p - rho * diag)} <= 1.
        damp = np.exp(-4.0 * np.pi * t * pw + u.sum(axis=1))
        return np.asarray(g(w), dtype=complex) * damp * const

    value, err, nodes = _qmc_mean(sample, 2 * n, 2 ** (qmc_exponent - 3))
    return QuadratureResult(value, err, nodes, converged=err <= max(tol, 1e-3) * max(1.0, abs(value)))

"""Bergman kernels of polynomial half-spaces along three routes.

The kernel of the weighted Bergman space on ``U_p`` can be written as a
power series through the bounded model ``E_p``, as a Fourier-type integral
of the fiberwise Gaussian-weighted kernels, and as a Mellin-type integral
of the fiberwise sector-weighted kernels.  All three routes share one
truncation scheme: monomials are cut at a weighted-degree shell and the
discarded tail is estimated from the geometric decay of the shell sums.

For diagonal base polynomials every fiber norm is known in closed form
(Gamma factors, or a one-dimensional radial integral for the sector
weight), so the kernels are semi-analytic.  General base polynomials go
through a quadrature Gram matrix with a Cholesky factorization.

The classical closed forms (half-plane, disc, ball, Siegel domain) are
collected in :func:`oracle_kernel`; the test suite cross-checks every
route against them and against each other.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.special as sp

from .domains import DomainSpec, in_Bp, in_Ep, in_Up, principal_power, rho_hat
from .errors import (
    AccuracyError,
    ConditioningError,
    DimensionError,
    DivergenceError,
    DomainError,
)
from .polynomials import BalancedPolynomial, WeightTuple, diagonal_coefficients
from .quad import gaussian_weighted_Cn, integrate_Bp, integrate_line, power_weighted_01
from .weights import lambda_weight, log_lambda

__all__ = [
    "KernelEstimate",
    "MonomialGramBasis",
    "monomial_gram_basis",
    "segal_bargmann_kernel",
    "ellipsoid_fiber_kernel",
    "lambda_fiber_kernel",
    "bergman_series",
    "bergman_fourier",
    "bergman_mellin",
    "kernel_transport",
    "oracle_kernel",
]

#: Default weighted-degree cut, in units of big_M * sum(alpha_j / m_j).
DEFAULT_DEGREE = 24

#: Gram matrices whose condition number exceeds this are refused.
CONDITION_LIMIT = 1e12

_WEIGHT_TAGS = ("segal_bargmann", "ellipsoid_power", "lambda")


@dataclass(frozen=True)
class KernelEstimate:
    """A kernel value with an internal error estimate and its route tag.

    ``converged`` is False when the truncation tail could not be certified
    below the requested tolerance; the value is still returned.
    """

    value: complex
    error_estimate: float
    method: str
    converged: bool = True


def _spec_of(spec) -> DomainSpec:
    if isinstance(spec, DomainSpec):
        return spec
    if isinstance(spec, BalancedPolynomial):
        return DomainSpec(spec)
    raise DomainError(f"expected a domain spec or balanced polynomial, got {type(spec)!r}")


def _fiber_point(spec: DomainSpec, w) -> np.ndarray:
    w = np.asarray(w, dtype=complex).reshape(-1)
    if w.shape != (spec.n,):
        raise DimensionError(f"fiber point has {w.shape[0]} coordinates, expected {spec.n}")
    return w


def _base_pair(spec: DomainSpec, x) -> tuple[complex, np.ndarray]:
    z, w = x
    return complex(z), _fiber_point(spec, w)


# ---------------------------------------------------------------------------
# Monomial shells
# ---------------------------------------------------------------------------

def monomial_shells(m: WeightTuple, degree: int) -> tuple[tuple[int, ...], ...]:
    """All multi-indices with big_M * sum(alpha_j / m_j) <= degree.

    The level of alpha is an integer because big_M is a common multiple of
    the weights; shells are returned sorted by (level, alpha).
    """
    units = [m.big_M // mj for mj in m.m]
    if m.n == 0:
        return ((),)
    ranges = [range(degree // u + 1) for u in units]
    out = []
    for alpha in itertools.product(*ranges):
        level = sum(a * u for a, u in zip(alpha, units))
        if level <= degree:
            out.append((level, alpha))
    out.sort()
    return tuple(alpha for _, alpha in out)


def _shell_levels(m: WeightTuple, alphas) -> np.ndarray:
    units = [m.big_M // mj for mj in m.m]
    return np.array([sum(a * u for a, u in zip(alpha, units)) for alpha in alphas], dtype=int)


def _monomial_matrix(points: np.ndarray, alphas) -> np.ndarray:
    """w^alpha over the last axis of ``points``; output shape (..., len(alphas))."""
    base = points[..., None, :] ** np.array(alphas, dtype=float)
    return np.prod(base, axis=-1)


def _geometric_tail(levels: np.ndarray, magnitudes: np.ndarray) -> tuple[float, bool]:
    """Tail estimate from the decay of per-shell magnitude sums.

    Returns (tail, trustworthy); trustworthy is False when the top shells
    are not yet decaying, in which case the tail is a bare lower bound.
    """
    top = int(levels.max())
    sums = np.zeros(top + 1)
    np.add.at(sums, levels, magnitudes)
    occupied = np.nonzero(sums > 0.0)[0]
    if len(occupied) < 2:
        return 0.0, True
    last, prev = occupied[-1], occupied[-2]
    if last < top:
        # The outermost shells vanished identically (e.g. a zero coordinate),
        # so the truncated tail vanishes too.
        return 0.0, True
    ratio = sums[last] / sums[prev]
    if not ratio < 0.98:
        return float(sums[last]), False
    return float(sums[last] * ratio / (1.0 - ratio)), True


# ---------------------------------------------------------------------------
# Closed fiber norms for diagonal base polynomials
# ---------------------------------------------------------------------------

def _alpha_exponents(m, coeffs, alpha) -> tuple[float, float]:
    """(A, logpref) with A = sum (alpha_j+1)/m_j and the coordinatewise
    prefactor prod (pi/m_j) Gamma(A_j) c_j^(-A_j) in log form."""
    A = 0.0
    logpref = 0.0
    for mj, cj, aj in zip(m, coeffs, alpha):
        Aj = (aj + 1.0) / mj
        A += Aj
        logpref += math.log(math.pi / mj) + sp.gammaln(Aj) - Aj * math.log(cj)
    return A, logpref


def _lambda_radial_log(A: float, t, points: int = 80) -> np.ndarray:
    """log of J_A(t) = integral_0^1 s^(A-1) lambda(s, t) ds.

    Substituting s = sin(phi) makes the sector weight smooth (the arcsin
    kink sits at the endpoint s = 1), and the remaining phi^(A-1) power is
    absorbed by a Gauss-Jacobi rule.  Evaluated in log space so the
    exponential growth for t < 0 cannot overflow.
    """
    x, wq = power_weighted_01(points, A - 1.0)
    phi = 0.5 * np.pi * x
    s_nodes = np.sin(phi)
    coef = wq * 0.5 * np.pi * (s_nodes / x) ** (A - 1.0) * np.cos(phi)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    logs = log_lambda(s_nodes[:, None], t[None, :])
    return sp.logsumexp(logs, axis=0, b=coef[:, None])


def _diag_log_norms(spec: DomainSpec, coeffs, alphas, weight: str, param: float) -> np.ndarray:
    """log of the squared monomial norms under the tagged fiber weight."""
    m = spec.m.m
    out = np.empty(len(alphas))
    for i, alpha in enumerate(alphas):
        A, logpref = _alpha_exponents(m, coeffs, alpha)
        if weight == "segal_bargmann":
            out[i] = logpref - A * math.log(4.0 * math.pi * param)
        elif weight == "ellipsoid_power":
            out[i] = logpref + sp.gammaln(param + 2.0) - sp.gammaln(A + param + 2.0)
        else:  # lambda
            if spec.n == 0:
                out[i] = float(log_lambda(0.0, param))
            else:
                out[i] = logpref - sp.gammaln(A) + float(_lambda_radial_log(A, param)[0])
    return out


# ---------------------------------------------------------------------------
# The Gram basis
# ---------------------------------------------------------------------------

class MonomialGramBasis:
    """Monomials up to a weighted-degree shell, orthogonalized for a fiber
    weight.

    For diagonal base polynomials the monomials are orthogonal and only the
    log squared norms are stored; otherwise the Gram matrix is filled by
    quadrature and Cholesky-factored.  ``condition`` is the (estimated)
    condition number of the Gram matrix; construction refuses anything
    beyond 1e12.
    """

    def __init__(self, spec: DomainSpec, weight: str, param: float, degree: int):
        if weight not in _WEIGHT_TAGS:
            raise DomainError(f"unknown fiber weight {weight!r}; expected one of {_WEIGHT_TAGS}")
        if weight == "segal_bargmann" and param <= 0:
            raise DomainError(f"Gaussian fiber weight needs t > 0, got t = {param}")
        if weight == "ellipsoid_power" and param < 0:
            raise DomainError(f"ellipsoid power weight needs k >= 0, got k = {param}")
        self.spec = spec
        self.weight = weight
        self.param = float(param)
        self.degree = int(degree)
        self.alphas = monomial_shells(spec.m, degree)
        self.levels = _shell_levels(spec.m, self.alphas)
        coeffs = diagonal_coefficients(spec.p) if spec.n else ()
        self.log_norms: np.ndarray | None = None
        self.gram: np.ndarray | None = None
        self.gram_error = 0.0
        self._chol = None
        if coeffs is not None:
            self.log_norms = _diag_log_norms(spec, coeffs, self.alphas, weight, self.param)
            spread = float(self.log_norms.max() - self.log_norms.min())
            self.condition = math.exp(min(spread, 700.0))
        else:
            self.gram, self.gram_error = self._quadrature_gram()
            eig = np.linalg.eigvalsh(self.gram)
            self.condition = math.inf if eig[0] <= 0 else float(eig[-1] / eig[0])
        if self.condition > CONDITION_LIMIT:
            raise ConditioningError(
                f"Gram matrix condition {self.condition:.3e} exceeds {CONDITION_LIMIT:.0e} "
                f"(weight {weight!r}, parameter {param}, degree {degree})"
            )
        if self.gram is not None:
            self._chol = sla.cho_factor(self.gram, lower=True)

    @property
    def is_diagonal(self) -> bool:
        return self.log_norms is not None

    def _quadrature_gram(self) -> tuple[np.ndarray, float]:
        p = self.spec.p
        size = len(self.alphas)
        gram = np.zeros((size, size), dtype=complex)
        err = 0.0
        for i in range(size):
            for j in range(i + 1):
                ai, aj = self.alphas[i], self.alphas[j]

                def entry(w, ai=ai, aj=aj):
                    vals = _monomial_matrix(w, (ai,))[..., 0]
                    vals = vals * np.conj(_monomial_matrix(w, (aj,))[..., 0])
                    if self.weight == "segal_bargmann":
                        return vals
                    s = np.clip(np.real(p.eval_many(w.reshape(-1, p.n))), 0.0, 1.0 - 1e-15)
                    s = s.reshape(vals.shape)
                    if self.weight == "ellipsoid_power":
                        return vals * (1.0 - s) ** (self.param + 1.0)
                    return vals * lambda_weight(s, self.param)

                if self.weight == "segal_bargmann":
                    res = gaussian_weighted_Cn(p, entry, self.param, qmc_exponent=14)
                else:
                    res = integrate_Bp(p, entry, qmc_exponent=14)
                gram[i, j] = res.value
                gram[j, i] = np.conj(res.value)
                err = max(err, res.error_estimate)
        gram = 0.5 * (gram + gram.conj().T)
        return gram, err

    def factor_residual(self) -> float:
        """Relative residual of the Cholesky factor; 0 for the diagonal path."""
        if self.gram is None:
            return 0.0
        low = np.tril(self._chol[0])
        resid = low @ low.conj().T - self.gram
        return float(np.linalg.norm(resid) / max(np.linalg.norm(self.gram), 1e-300))

    def monomials(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        if points.ndim == 1:
            points = points[None, :]
            return _monomial_matrix(points, self.alphas)[0]
        return _monomial_matrix(points, self.alphas)

    def kernel(self, w, W) -> np.ndarray | complex:
        """Reproducing kernel of the truncated span, broadcasting over ``w``."""
        vw = self.monomials(w)
        vW = self.monomials(np.asarray(W, dtype=complex).reshape(-1))
        if self.is_diagonal:
            scale = np.exp(-np.clip(self.log_norms, -700.0, None))
            out = np.sum(vw * np.conj(vW) * scale, axis=-1)
        else:
            solved = sla.cho_solve(self._chol, vW)
            out = np.sum(vw * np.conj(solved), axis=-1)
        return complex(out) if np.ndim(out) == 0 else out


@functools.lru_cache(maxsize=128)
def _cached_basis(spec: DomainSpec, weight: str, param: float, degree: int) -> MonomialGramBasis:
    return MonomialGramBasis(spec, weight, param, degree)


def monomial_gram_basis(spec, weight: str, param: float, degree: int = DEFAULT_DEGREE):
    """Build (or fetch) the Gram basis for one fiber weight.

    Bases are cached per (polynomial, weight tag, parameter, degree); the
    construction cost is a single closed-form pass for diagonal base
    polynomials and a full quadrature Gram fill otherwise.
    """
    return _cached_basis(_spec_of(spec), weight, float(param), int(degree))


# ---------------------------------------------------------------------------
# Fiber kernels
# ---------------------------------------------------------------------------

def _diag_series(basis: MonomialGramBasis, w, W, tol: float) -> KernelEstimate:
    terms = basis.monomials(w) * np.conj(basis.monomials(W))
    terms = terms * np.exp(-np.clip(basis.log_norms, -700.0, None))
    value = complex(np.sum(terms))
    tail, trustworthy = _geometric_tail(basis.levels, np.abs(terms))
    converged = trustworthy and tail <= tol * max(1.0, abs(value))
    return KernelEstimate(value, tail, "series", converged)


def segal_bargmann_kernel(spec, t: float, w, W, *,
                          degree: int = DEFAULT_DEGREE, tol: float = 1e-9) -> KernelEstimate:
    """Reproducing kernel of the Gaussian-weighted fiber space at height t.

    For weights all equal to 1 the series sums to a closed exponential,
    prod(4 t c_j) exp(4 pi t sum c_j w_j conj(W_j)); otherwise the monomial
    series is truncated at ``degree``.  Obeys the scaling law
    H(t; w, W) = t^(1/mu) H(1; rho_hat_t w, rho_hat_t W).
    """
    spec = _spec_of(spec)
    if t <= 0:
        raise DomainError(f"fiber height must be positive, got t = {t}")
    w = _fiber_point(spec, w)
    W = _fiber_point(spec, W)
    coeffs = diagonal_coefficients(spec.p) if spec.n else ()
    if coeffs is not None and all(mj == 1 for mj in spec.m.m):
        pairing = complex(np.sum(np.array(coeffs) * w * np.conj(W)))
        value = complex(np.prod(4.0 * t * np.array(coeffs))) if spec.n else 1.0
        value *= np.exp(4.0 * np.pi * t * pairing)
        return KernelEstimate(complex(value), 0.0, "closed")
    basis = monomial_gram_basis(spec, "segal_bargmann", t, degree)
    if basis.is_diagonal:
        return _diag_series(basis, w, W, tol)
    value = complex(basis.kernel(w, W))
    return KernelEstimate(value, basis.gram_error * len(basis.alphas), "gram",
                          converged=False)


def ellipsoid_fiber_kernel(spec, k: float, w, W, *,
                           degree: int = DEFAULT_DEGREE, tol: float = 1e-9) -> KernelEstimate:
    """Reproducing kernel of the power-weighted space on the sublevel set.

    The weight is (1 - p)^(k+1); for n = 1 and p = |w|^2 the series sums to
    (k+2)/pi (1 - w conj(W))^(-(k+3)), which the tests use as an oracle.
    """
    spec = _spec_of(spec)
    if k < 0:
        raise DomainError(f"ellipsoid power must be nonnegative, got k = {k}")
    w = _fiber_point(spec, w)
    W = _fiber_point(spec, W)
    if spec.n == 0:
        return KernelEstimate(1.0 + 0.0j, 0.0, "closed")
    if not (in_Bp(spec, w) and in_Bp(spec, W)):
        raise DomainError("ellipsoid fiber kernel needs both points inside the sublevel set")
    basis = monomial_gram_basis(spec, "ellipsoid_power", k, degree)
    if basis.is_diagonal:
        return _diag_series(basis, w, W, tol)
    value = complex(basis.kernel(w, W))
    return KernelEstimate(value, basis.gram_error * len(basis.alphas), "gram",
                          converged=False)


def lambda_fiber_kernel(spec, t: float, zeta, Z, *,
                        degree: int = DEFAULT_DEGREE, tol: float = 1e-8) -> KernelEstimate:
    """Reproducing kernel of the sector-weighted space on the sublevel set.

    Monomial norms come from a one-dimensional radial integral against the
    sector weight; with n = 0 the kernel is the constant 1/lambda(0, t).
    """
    spec = _spec_of(spec)
    if spec.n == 0:
        value = math.exp(-float(log_lambda(0.0, float(t))))
        return KernelEstimate(complex(value), 0.0, "closed")
    zeta = _fiber_point(spec, zeta)
    Z = _fiber_point(spec, Z)
    if not (in_Bp(spec, zeta) and in_Bp(spec, Z)):
        raise DomainError("sector fiber kernel needs both points inside the sublevel set")
    basis = monomial_gram_basis(spec, "lambda", float(t), degree)
    if basis.is_diagonal:
        return _diag_series(basis, zeta, Z, tol)
    value = complex(basis.kernel(zeta, Z))
    return KernelEstimate(value, basis.gram_error * len(basis.alphas), "gram",
                          converged=False)


# ---------------------------------------------------------------------------
# The Bergman kernel of U_p: series route through the bounded model
# ---------------------------------------------------------------------------

def bergman_series(spec, x, y, *, k_max: int = 200,
                   degree: int = DEFAULT_DEGREE, tol: float = 1e-8) -> KernelEstimate:
    """Kernel of the bounded model as sum_k (k+1)/pi Y(k; w, W) z^k conj(Z)^k.

    Both points must lie in E_p.  The k sum stops early once the terms are
    certified below the tolerance; the tail estimate is geometric in
    |z conj(Z)|.  With n = 0 this is the classical disc kernel.
    """
    spec = _spec_of(spec)
    z, w = _base_pair(spec, x)
    Z, W = _base_pair(spec, y)
    if not (in_Ep(spec, z, w) and in_Ep(spec, Z, W)):
        raise DomainError("series route needs both points in the bounded model")
    coeffs = diagonal_coefficients(spec.p) if spec.n else ()
    if coeffs is None:
        raise DomainError("series route needs a diagonal base polynomial")
    alphas = monomial_shells(spec.m, degree)
    levels = _shell_levels(spec.m, alphas)
    A = np.empty(len(alphas))
    logpref = np.empty(len(alphas))
    for i, alpha in enumerate(alphas):
        A[i], logpref[i] = _alpha_exponents(spec.m.m, coeffs, alpha)
    pair = _monomial_matrix(w[None, :], alphas)[0] * np.conj(_monomial_matrix(W[None, :], alphas)[0])
    zfac = z * np.conj(Z)
    acc = 0.0 + 0.0j
    err = 0.0
    mags: list[float] = []
    converged = True
    for k in range(k_max + 1):
        log_norms = logpref + sp.gammaln(k + 2.0) - sp.gammaln(A + k + 2.0)
        fiber_terms = pair * np.exp(-log_norms)
        Yk = complex(np.sum(fiber_terms))
        tail_k, ok = _geometric_tail(levels, np.abs(fiber_terms))
        factor = (k + 1) / math.pi * zfac**k
        acc += Yk * factor
        err += tail_k * abs(factor)
        converged = converged and ok
        mags.append(abs(Yk * factor))
        if k >= 8 and mags[-1] <= 0.01 * tol * max(1.0, abs(acc)) and abs(zfac) < 1.0:
            break
    if len(mags) >= 3 and mags[-2] > 0.0:
        ratio = mags[-1] / mags[-2]
        if ratio < 0.98:
            err += mags[-1] * ratio / (1.0 - ratio)
        else:
            err += mags[-1]
            converged = False
    value = complex(acc)
    converged = converged and err <= tol * max(1.0, abs(value))
    return KernelEstimate(value, err, "series", converged)


# ---------------------------------------------------------------------------
# Fourier route through the Gaussian fibers
# ---------------------------------------------------------------------------

def bergman_fourier(spec, x, y, *,
                    degree: int = DEFAULT_DEGREE, tol: float = 1e-8) -> KernelEstimate:
    """Kernel of U_p as 4 pi integral_0^inf t H(t; w, W) e^(2 pi i (z - conj(Z)) t) dt.

    The monomial expansion of H turns each t-integral into a Gamma factor
    against s = -2 pi i (z - conj(Z)), whose real part is positive for
    interior points.  Weights all equal to 1 resum to the Siegel closed
    form 4^(n+1) pi (n+1)! prod(c_j) s_eff^(-(n+2)) with the shifted decay
    s_eff = s - 4 pi sum c_j w_j conj(W_j).
    """
    spec = _spec_of(spec)
    z, w = _base_pair(spec, x)
    Z, W = _base_pair(spec, y)
    if not (in_Up(spec, z, w) and in_Up(spec, Z, W)):
        raise DomainError("Fourier route needs both points in the half-space")
    coeffs = diagonal_coefficients(spec.p) if spec.n else ()
    if coeffs is None:
        raise DomainError("Fourier route needs a diagonal base polynomial")
    s = -2j * np.pi * (z - np.conj(Z))
    if s.real <= 0:
        raise DivergenceError(f"decay rate {s} has nonpositive real part")
    if all(mj == 1 for mj in spec.m.m):
        pairing = complex(np.sum(np.array(coeffs) * w * np.conj(W))) if spec.n else 0.0
        s_eff = s - 4.0 * np.pi * pairing
        if s_eff.real <= 0:
            raise DivergenceError(f"shifted decay rate {s_eff} has nonpositive real part")
        n = spec.n
        value = 4.0 ** (n + 1) * math.pi * math.factorial(n + 1)
        value *= complex(np.prod(np.array(coeffs))) if n else 1.0
        value *= s_eff ** (-(n + 2))
        return KernelEstimate(complex(value), 0.0, "fourier")
    alphas = monomial_shells(spec.m, degree)
    levels = _shell_levels(spec.m, alphas)
    pair = _monomial_matrix(w[None, :], alphas)[0] * np.conj(_monomial_matrix(W[None, :], alphas)[0])
    terms = np.empty(len(alphas), dtype=complex)
    for i, alpha in enumerate(alphas):
        A, logpref = _alpha_exponents(spec.m.m, coeffs, alpha)
        scale = math.exp((1.0 + A) * math.log(4.0 * math.pi) + sp.gammaln(A + 2.0) - logpref)
        terms[i] = pair[i] * scale * principal_power(s, -(A + 2.0))
    value = complex(np.sum(terms))
    tail, trustworthy = _geometric_tail(levels, np.abs(terms))
    converged = trustworthy and tail <= tol * max(1.0, abs(value))
    return KernelEstimate(value, tail, "fourier", converged)


# ---------------------------------------------------------------------------
# Mellin route through the sector fibers
# ---------------------------------------------------------------------------

def bergman_mellin(spec, x, y, *, tol: float = 1e-6, degree: int = DEFAULT_DEGREE,
                   window: float | None = None, points: int = 32) -> KernelEstimate:
    """Kernel of U_p as a windowed integral of the sector fiber kernels.

    K(x, y) = integral_{-T}^{T} X(t; zeta, Zhat) z^(2 pi i t)
              conj(Z)^(-2 pi i t) (z conj(Z))^(-1 - 1/(2 mu)) dt,

    where zeta = rho_hat_{1/z} w and Zhat = rho_hat_{1/Z} W are the cone
    coordinates of the two points.  The window T is chosen so that the
    sector-weight growth bound e^(-4 pi (pi - arcsin p_max) T) falls below
    a tenth of the tolerance; passing an explicit smaller ``window`` raises
    an accuracy error.  Everything is assembled in log space, so the
    exponential growth of the fiber norms inside the window cannot
    overflow.
    """
    spec = _spec_of(spec)
    z, w = _base_pair(spec, x)
    Z, W = _base_pair(spec, y)
    if not (in_Up(spec, z, w) and in_Up(spec, Z, W)):
        raise DomainError("Mellin route needs both points in the half-space")
    coeffs = diagonal_coefficients(spec.p) if spec.n else ()
    if coeffs is None:
        raise DomainError("Mellin route needs a diagonal base polynomial")
    arg_sum = math.atan2(z.imag, z.real) + math.atan2(Z.imag, Z.real)
    log_ratio = math.log(abs(z)) - math.log(abs(Z))
    if spec.n:
        zeta = rho_hat(1.0 / z, w, spec.m)
        Zhat = rho_hat(1.0 / Z, W, spec.m)
        p_hat = max(float(np.real(spec.p(zeta))), float(np.real(spec.p(Zhat))), 0.0)
        p_hat = min(p_hat, 1.0 - 1e-12)
    else:
        p_hat = 0.0
    rate_neg = 4.0 * np.pi * (np.pi - math.asin(p_hat)) - 2.0 * np.pi * arg_sum
    rate_pos = 2.0 * np.pi * arg_sum
    if rate_neg <= 1e-9 or rate_pos <= 1e-9:
        raise AccuracyError(
            "no finite window meets the tail target: the sector-weight decay "
            f"rates are ({rate_neg:.3e}, {rate_pos:.3e}) for these points"
        )
    budget = -math.log(0.1 * tol)
    alphas = monomial_shells(spec.m, degree)
    levels = _shell_levels(spec.m, alphas)
    if spec.n:
        A = np.empty(len(alphas))
        logpref = np.empty(len(alphas))
        for i, alpha in enumerate(alphas):
            A[i], logpref[i] = _alpha_exponents(spec.m.m, coeffs, alpha)
        logpref -= sp.gammaln(A)
        pair = (_monomial_matrix(zeta[None, :], alphas)[0]
                * np.conj(_monomial_matrix(Zhat[None, :], alphas)[0]))
        coeff_terms = pair * np.exp(-logpref)
        a_max = float(A.max())
    else:
        coeff_terms = np.array([1.0 + 0.0j])
        A = np.array([0.0])
        a_max = 0.0
    slack = (a_max + 2.0) * math.log1p((budget + 6.0) / rate_pos)
    needed = max((budget + 6.0) / rate_neg, (budget + 6.0 + slack) / rate_pos)
    if window is None:
        T = needed
    else:
        T = float(window)
        if T < needed:
            raise AccuracyError(
                f"window half-width {T:.4g} violates the tail bound; "
                f"these points and tolerance need at least {needed:.4g}"
            )
    distinct_A = np.unique(A)
    groups = [(a, np.nonzero(A == a)[0]) for a in distinct_A]
    prefactor = principal_power(z * np.conj(Z), -1.0 - 0.5 * float(spec.inv_mu))

    def integrand(tarr: np.ndarray) -> np.ndarray:
        tarr = np.real(np.asarray(tarr))
        out = np.zeros(tarr.shape, dtype=complex)
        for a, idx in groups:
            if spec.n:
                log_j = _lambda_radial_log(a, tarr)
            else:
                log_j = np.atleast_1d(log_lambda(0.0, tarr))
            weight = np.exp(log_j * (-1.0) - 2.0 * np.pi * arg_sum * tarr)
            out = out + complex(np.sum(coeff_terms[idx])) * weight
        return prefactor * out * np.exp(2j * np.pi * log_ratio * tarr)

    cap = min(0.4, 2.5 / max(abs(log_ratio), 1.0))
    res = integrate_line(integrand, T, points=points, max_panel_width=cap)
    edge = np.abs(integrand(np.array([T, -T])))
    tail = float(edge[0] / rate_pos + edge[1] / rate_neg)
    mags = np.abs(coeff_terms)
    series_tail, trustworthy = _geometric_tail(levels, mags)
    rel_series = series_tail / max(float(mags.sum()), 1e-300)
    value = complex(res.value)
    err = res.error_estimate + tail + rel_series * abs(value)
    converged = trustworthy and err <= tol * max(1.0, abs(value))
    return KernelEstimate(value, err, "mellin", converged)


# ---------------------------------------------------------------------------
# Transport and the classical oracles
# ---------------------------------------------------------------------------

def kernel_transport(kernel, phi, det_phi, x, y):
    """Pull a kernel back along a biholomorphism.

    K_target(x, y) = K_source(phi x, phi y) det phi'(x) conj(det phi'(y)).
    ``kernel`` may return a bare complex value or a KernelEstimate; the
    error estimate is scaled by the Jacobian magnitude.
    """
    jac = det_phi(*x) * np.conj(det_phi(*y))
    out = kernel(phi(*x), phi(*y))
    if isinstance(out, KernelEstimate):
        return KernelEstimate(out.value * jac, out.error_estimate * abs(jac),
                              out.method, out.converged)
    return out * jac


def oracle_kernel(name: str, x, y) -> complex:
    """Closed-form Bergman kernels of the four classical domains.

    halfplane: -1/(pi (z - conj(Z))^2) on the upper half-plane.
    disc:      1/(pi (1 - z conj(Z))^2) on the unit disc.
    ball:      N!/pi^N (1 - <x, y>)^(-(N+1)) on the unit ball of C^N.
    siegel:    4^(n+1) pi (n+1)! s^(-(n+2)) on Im z > |w|^2, with
               s = -2 pi i ((z - conj(Z)) - 2 i <w, W>).
    """
    if name == "halfplane":
        z, Z = complex(x), complex(y)
        if z.imag <= 0 or Z.imag <= 0:
            raise DomainError("half-plane oracle needs points with positive imaginary part")
        return -1.0 / (math.pi * (z - np.conj(Z)) ** 2)
    if name == "disc":
        z, Z = complex(x), complex(y)
        if abs(z) >= 1 or abs(Z) >= 1:
            raise DomainError("disc oracle needs points inside the unit disc")
        return 1.0 / (math.pi * (1.0 - z * np.conj(Z)) ** 2)
    if name == "ball":
        u = np.asarray(x, dtype=complex).reshape(-1)
        v = np.asarray(y, dtype=complex).reshape(-1)
        if u.shape != v.shape:
            raise DimensionError("ball oracle needs points of equal dimension")
        if np.sum(np.abs(u) ** 2) >= 1 or np.sum(np.abs(v) ** 2) >= 1:
            raise DomainError("ball oracle needs points inside the unit ball")
        N = len(u)
        pairing = complex(np.sum(u * np.conj(v)))
        return math.factorial(N) / math.pi**N * (1.0 - pairing) ** (-(N + 1))
    if name == "siegel":
        z, w = x
        Z, W = y
        w = np.asarray(w, dtype=complex).reshape(-1)
        W = np.asarray(W, dtype=complex).reshape(-1)
        if w.shape != W.shape:
            raise DimensionError("Siegel oracle needs fiber points of equal dimension")
        n = len(w)
        if complex(z).imag <= float(np.sum(np.abs(w) ** 2)):
            raise DomainError("Siegel oracle needs Im z > |w|^2")
        if complex(Z).imag <= float(np.sum(np.abs(W) ** 2)):
            raise DomainError("Siegel oracle needs Im Z > |W|^2")
        pairing = complex(np.sum(w * np.conj(W)))
        s = -2j * np.pi * ((complex(z) - np.conj(complex(Z))) - 2j * pairing)
        return 4.0 ** (n + 1) * math.pi * math.factorial(n + 1) * s ** (-(n + 2))
    raise DomainError(
        f"unknown oracle {name!r}; expected halfplane, disc, ball, or siegel"
    )

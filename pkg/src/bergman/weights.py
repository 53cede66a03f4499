"""Scalar weights on the line and the weighted norms they induce.

Two weight families drive every isometry in this package:

    omega_{a,b}(t) = (e^{-4 pi a t} - e^{-4 pi b t}) / (4 pi t)

for horizontal strips (with the b = +inf degeneration e^{-4 pi a t}/(4 pi t)
on t > 0), and

    lambda(s, t) = omega_{arcsin s, pi - arcsin s}(t)

for the sector geometry, where s ranges over values of the defining
polynomial on its unit sublevel set.  Both have removable singularities at
t = 0 that the implementations cross smoothly.

On top of these sit the squared-norm evaluators for the three spectral
spaces: norm_Yp (power series on the egg domain), norm_Hp (half-space
profiles against the Fock-type fiber weight e^{-4 pi t p(w)} / 4 pi t) and
norm_Xp (two-sided profiles against lambda(p(zeta), t) over the sublevel
set).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import special as sp

from .errors import DivergenceError, DomainError, NotInSpaceError
from .polynomials import (
    BalancedPolynomial,
    HoloPolynomial,
    diagonal_coefficients,
    weight_of,
)
from .quad import gaussian_weighted_Cn, integrate_Bp, integrate_halfline, power_weighted_01
from .transforms1d import Piece, Profile1D, leading_exponent_at_zero


# ---------------------------------------------------------------------------
# The strip weight omega and the sector weight lambda
# ---------------------------------------------------------------------------

def omega(a: float, b: float, t):
    """The strip weight, stable through the removable singularity at t = 0.

    Written as e^{-4 pi a t} (b - a) (-expm1(-x))/x with x = 4 pi t (b - a),
    which has no subtractive cancellation anywhere; the limit value at
    t = 0 is b - a.  With b = +inf the domain shrinks to t > 0.
    """
    t = np.asarray(t, dtype=float)
    if not a < b:
        raise DomainError(f"weight bounds ({a}, {b}) are not increasing")
    if math.isinf(b):
        if np.any(t <= 0.0):
            raise DomainError("omega_{a,inf} is defined for t > 0 only")
        out = np.exp(-4.0 * np.pi * a * t) / (4.0 * np.pi * t)
        return float(out) if out.ndim == 0 else out
    x = 4.0 * np.pi * t * (b - a)
    with np.errstate(invalid="ignore"):
        ratio = np.where(x == 0.0, 1.0, -np.expm1(-x) / np.where(x == 0.0, 1.0, x))
    out = np.exp(-4.0 * np.pi * a * t) * (b - a) * ratio
    return float(out) if out.ndim == 0 else out


def log_omega(a: float, b: float, t):
    """log omega_{a,b}(t), safe where omega itself would overflow.

    For t < 0 uses the reflection omega_{a,b}(-t) = omega_{-b,-a}(t).
    """
    t = np.asarray(t, dtype=float)
    if not a < b:
        raise DomainError(f"weight bounds ({a}, {b}) are not increasing")
    if math.isinf(b):
        if np.any(t <= 0.0):
            raise DomainError("omega_{a,inf} is defined for t > 0 only")
        return -4.0 * np.pi * a * t - np.log(4.0 * np.pi * t)
    out = np.empty(t.shape if t.ndim else (1,), dtype=float)
    tt = np.atleast_1d(t)
    pos = tt > 0
    neg = tt < 0
    zero = ~pos & ~neg
    if np.any(pos):
        tp = tt[pos]
        x = 4.0 * np.pi * tp * (b - a)
        out[pos] = -4.0 * np.pi * a * tp + np.log1p(-np.exp(-x)) - np.log(4.0 * np.pi * tp)
    if np.any(neg):
        tn = -tt[neg]
        x = 4.0 * np.pi * tn * (b - a)  # reflection keeps the width
        out[neg] = 4.0 * np.pi * b * tn + np.log1p(-np.exp(-x)) - np.log(4.0 * np.pi * tn)
    if np.any(zero):
        out[zero] = math.log(b - a)
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def lambda_weight(s, t):
    """The sector weight lambda(s, t) = omega_{arcsin s, pi - arcsin s}(t).

    At t = 0 this is pi - 2 arcsin s; in particular lambda(0, 0) = pi
    exactly.  s must lie in [0, 1).
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s < 0.0) or np.any(s >= 1.0):
        raise DomainError("lambda weight needs s in [0, 1)")
    a = np.arcsin(s)
    width = np.pi - 2.0 * a
    x = 4.0 * np.pi * t * width
    with np.errstate(invalid="ignore"):
        ratio = np.where(x == 0.0, 1.0, -np.expm1(-x) / np.where(x == 0.0, 1.0, x))
    out = np.exp(-4.0 * np.pi * a * t) * width * ratio
    return float(out) if out.ndim == 0 else out


def log_lambda(s, t):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0.0) or np.any(s >= 1.0):
        raise DomainError("lambda weight needs s in [0, 1)")
    a = np.arcsin(s)
    b = np.pi - a
    t = np.asarray(t, dtype=float)
    x_pos = 4.0 * np.pi * np.abs(t) * (b - a)
    lead = np.where(t >= 0, -4.0 * np.pi * a * t, -4.0 * np.pi * b * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        body = np.where(
            t == 0.0,
            np.log(b - a),
            np.log1p(-np.exp(-x_pos)) - np.log(4.0 * np.pi * np.abs(np.where(t == 0, 1.0, t))),
        )
    out = lead + body
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Norm results and shared helpers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormResult:
    value: float
    error_estimate: float
    converged: bool = True


def _poly_of(spec) -> BalancedPolynomial:
    p = getattr(spec, "p", spec)
    if not isinstance(p, BalancedPolynomial):
        raise DomainError("expected a domain spec or balanced polynomial")
    return p


def _as_holo(q, n: int) -> HoloPolynomial:
    if isinstance(q, HoloPolynomial):
        if q.n != n:
            raise DomainError(f"coefficient polynomial has {q.n} variables, expected {n}")
        return q
    return HoloPolynomial(n, (((0,) * n, complex(q)),))


def _element_terms(f) -> list[tuple[Profile1D, HoloPolynomial]]:
    terms = getattr(f, "terms", f)
    return [(prof, q) for prof, q in terms]


def diag_monomial_norm(m: Sequence[int], coeffs: Sequence[float],
                       alpha: Sequence[int]) -> tuple[float, Fraction]:
    """Fiber norm data of a monomial against e^{-4 pi t sum c_j |w_j|^{2 m_j}}.

    Returns (N, A) with the squared norm at parameter t equal to
    N (4 pi t)^{-A}, where A = sum (alpha_j + 1)/m_j and
    N = prod (pi/m_j) Gamma((alpha_j + 1)/m_j) c_j^{-(alpha_j + 1)/m_j}.
    """
    N = 1.0
    A = Fraction(0)
    for mj, cj, aj in zip(m, coeffs, alpha):
        Aj = Fraction(aj + 1, mj)
        N *= (np.pi / mj) * sp.gamma(float(Aj)) * cj ** (-float(Aj))
        A += Aj
    return N, A


# ---------------------------------------------------------------------------
# Y_p: power series on the egg domain
# ---------------------------------------------------------------------------

def norm_Yp(spec, coefficients: Sequence, *, tol: float = 1e-9) -> NormResult:
    """Squared norm of sum a_k(w) z^k on the egg domain.

    Equals pi sum_k (1/(k+1)) integral over the sublevel set of
    |a_k|^2 (1 - p)^{k+1}.  With n = 0 the integrals collapse and the value
    is pi sum |a_k|^2 / (k+1) exactly.
    """
    p = _poly_of(spec)
    n = p.n
    if n == 0:
        total = 0.0
        for k, a in enumerate(coefficients):
            c = dict(_as_holo(a, 0).terms).get((), 0.0)
            total += abs(complex(c)) ** 2 / (k + 1)
        return NormResult(np.pi * total, 0.0, True)
    value = 0.0
    err = 0.0
    ok = True
    for k, a in enumerate(coefficients):
        q = _as_holo(a, n)
        if q.is_zero:
            continue

        def g(w, q=q, k=k):
            vals = np.abs(q(w)) ** 2
            return vals * (1.0 - p(w)) ** (k + 1)

        res = integrate_Bp(p, g, tol=tol)
        value += np.pi / (k + 1) * float(np.real(res.value))
        err += np.pi / (k + 1) * res.error_estimate
        ok = ok and res.converged
    return NormResult(value, err, ok and err <= max(tol, 1e-6 * abs(value)) * 10)


# ---------------------------------------------------------------------------
# H_p: half-space profiles
# ---------------------------------------------------------------------------

def _halfline_decay(profile: Profile1D) -> float:
    rates = []
    for piece in profile.pieces:
        if piece.kind == "window":
            continue
        if piece.kind == "exp":
            rates.append(2.0 * piece.b.real)
        else:
            rates.append(max(0.5, 2.0 * (piece.b.real + piece.sigma)))
    return min(rates) if rates else 1.0


def _pair_t_integral(h1: Profile1D, h2: Profile1D, lead: float, S: float,
                     points: int = 32) -> tuple[complex, float]:
    """integral_0^inf h1(t) conj(h2(t)) t^{-S-1} dt, split at t = 1.

    The [0, 1] part runs Gauss-Jacobi against the known leading power
    t^{2 lead - S - 1}; the tail rides a Laguerre rule at the profiles'
    joint decay rate.  Returns (value, error estimate).
    """
    power = 2.0 * lead - S - 1.0
    vals = []
    for nn in (points, 2 * points):
        x, w = power_weighted_01(nn, power)
        smooth = h1(x) * np.conj(h2(x)) * x ** (-2.0 * lead)
        vals.append(complex(np.sum(w * smooth)))
    head, head_err = vals[1], abs(vals[1] - vals[0])

    rate = min(_halfline_decay(h1), _halfline_decay(h2))

    def g(s):
        t = 1.0 + np.asarray(s).real
        return h1(t) * np.conj(h2(t)) * t ** (-S - 1.0)

    tail = integrate_halfline(g, rate)
    return head + tail.value, head_err + tail.error_estimate


def _monomial_profiles(f, n: int) -> dict[tuple, Profile1D]:
    """Collect f = sum_i phi_i(t) q_i(w) into per-monomial t-profiles."""
    buckets: dict[tuple, list[Piece]] = {}
    for prof, q in _element_terms(f):
        poly = _as_holo(q, n)
        for alpha, c in poly.terms:
            scaled = prof.scaled(c)
            buckets.setdefault(alpha, []).extend(scaled.pieces)
    return {alpha: Profile1D(tuple(pieces)) for alpha, pieces in buckets.items()}


def norm_Hp(spec, f, *, tol: float = 1e-9, qmc_exponent: int = 16) -> NormResult:
    """Squared norm against the fiber weight e^{-4 pi t p(w)} / (4 pi t).

    Expands the w-part into monomials.  The Gram matrix of the monomials in
    the fiber at parameter 4 pi t = 1 is exact for diagonal p and sampled
    once by quadrature otherwise; scaling transports it to every other t,
    leaving one-dimensional t-integrals per monomial pair.  Divergence at
    t = 0 is decided exactly from the profiles' leading exponents: monomial
    alpha needs its profile to vanish to order > A_alpha / 2.
    """
    p = _poly_of(spec)
    n = p.n
    profiles = _monomial_profiles(f, n)
    alphas = sorted(profiles)
    leads: dict[tuple, float] = {}
    A: dict[tuple, float] = {}
    for alpha in list(alphas):
        lead = leading_exponent_at_zero(profiles[alpha])
        if lead is None:
            alphas.remove(alpha)
            continue
        a_val = float(sum(Fraction(aj + 1, mj) for aj, mj in zip(alpha, p.weights.m)))
        if 2.0 * lead - a_val <= 1e-9:
            raise DivergenceError(
                f"profile of w^{alpha} vanishes to order {lead}, "
                f"needs more than {a_val / 2} against the 1/t fiber weight"
            )
        leads[alpha] = lead
        A[alpha] = a_val
    if not alphas:
        return NormResult(0.0, 0.0, True)

    # Gram matrix of the monomials at 4 pi t = 1.
    coeffs = diagonal_coefficients(p)
    size = len(alphas)
    gram = np.zeros((size, size), dtype=complex)
    gram_err = np.zeros((size, size))
    converged = True
    if coeffs is not None:
        for i, alpha in enumerate(alphas):
            gram[i, i] = diag_monomial_norm(p.weights.m, coeffs, alpha)[0]
    else:
        t0 = 1.0 / (4.0 * np.pi)
        for i, ai in enumerate(alphas):
            for j in range(i, size):
                aj = alphas[j]

                def g(w, ai=ai, aj=aj):
                    mono = np.ones(w.shape[:-1], dtype=complex)
                    for axis, (e1, e2) in enumerate(zip(ai, aj)):
                        mono = mono * w[..., axis] ** e1 * np.conj(w[..., axis]) ** e2
                    return mono

                res = gaussian_weighted_Cn(p, g, t0, qmc_exponent=qmc_exponent)
                gram[i, j] = res.value
                gram[j, i] = np.conj(res.value)
                gram_err[i, j] = gram_err[j, i] = res.error_estimate
                converged = converged and res.converged

    total = 0.0 + 0.0j
    err = 0.0
    for i, ai in enumerate(alphas):
        for j, aj in enumerate(alphas):
            if gram[i, j] == 0 and gram_err[i, j] == 0:
                continue
            S = 0.5 * (A[ai] + A[aj])
            lead = 0.5 * (leads[ai] + leads[aj])
            integral, ierr = _pair_t_integral(profiles[ai], profiles[aj], lead, S)
            factor = (4.0 * np.pi) ** (-S - 1.0)
            total += gram[i, j] * factor * integral
            err += factor * (abs(gram[i, j]) * ierr + gram_err[i, j] * abs(integral))
    value = float(total.real)
    return NormResult(value, err, converged and err <= max(tol, 1e-6 * abs(value)) * 10)


# ---------------------------------------------------------------------------
# X_p: two-sided profiles on the sublevel set
# ---------------------------------------------------------------------------

def _check_xp_admissible(profile: Profile1D) -> None:
    for piece in profile.pieces:
        if piece.kind == "exp":
            raise DivergenceError(
                "X_p profiles must decay super-exponentially (gaussian factor "
                "or compact support); a bare exponential tail loses to the "
                "weight's e^{4 pi (pi - arcsin s)|t|} growth"
            )


def _pair_window(p1: Piece, p2: Piece) -> float:
    """Half-width beyond which |p1 p2| lambda is negligible."""
    sigma = p1.sigma + p2.sigma
    spans = []
    for piece in (p1, p2):
        if piece.support is not None:
            spans.append(max(abs(piece.support[0]), abs(piece.support[1])))
    if spans and sigma == 0.0:
        return max(spans)
    drift = 4.0 * np.pi**2 + abs(p1.b.real) + abs(p2.b.real)
    half = (drift + math.sqrt(drift * drift + 8.0 * sigma * 80.0)) / (2.0 * sigma)
    return min(half, max(spans)) if spans else half


def _lambda_pair_integrals(prof_pairs, s_values: np.ndarray, points: int = 32):
    """Lambda_{il}(s) = integral phi_i(t) conj(phi_l(t)) lambda(s, t) dt.

    Evaluated for every distinct s at once; the integrand is assembled in
    log space piece-pair by piece-pair, since lambda alone can overflow
    where the gaussian factors have not yet taken over.
    """
    out = []
    for f1, f2 in prof_pairs:
        total = np.zeros((2, len(s_values)), dtype=complex)
        for p1 in f1.pieces:
            for p2 in f2.pieces:
                half = _pair_window(p1, p2)
                lo, hi = -half, half
                for piece in (p1, p2):
                    if piece.support is not None:
                        lo = max(lo, piece.support[0])
                        hi = min(hi, piece.support[1])
                if not lo < hi:
                    continue
                count = max(8, int(math.ceil((hi - lo) / 0.5)))
                edges = np.linspace(lo, hi, count + 1)
                for round_idx, nn in enumerate((points, 2 * points)):
                    x, w = sp.roots_legendre(nn)
                    mid = 0.5 * (edges[1:] + edges[:-1])
                    rad = 0.5 * (edges[1:] - edges[:-1])
                    t_all = (mid[:, None] + rad[:, None] * x[None, :]).ravel()
                    wt_all = (rad[:, None] * w[None, :]).ravel()
                    for k in range(0, len(t_all), 4096):
                        t = t_all[k : k + 4096]
                        wt = wt_all[k : k + 4096]
                        logmag = (
                            np.log(np.abs(p1.c) * np.abs(p2.c) + 1e-300)
                            + (p1.a + p2.a) * np.log(np.abs(t) + 1e-300)
                            - (p1.b.real + p2.b.real) * t
                            - (p1.sigma + p2.sigma) * t**2
                        )
                        sign = np.where(t >= 0, 1.0, (-1.0) ** (p1.a + p2.a))
                        phase = np.exp(1j * (np.angle(p1.c) - np.angle(p2.c))
                                       - 1j * (p1.b.imag - p2.b.imag) * t)
                        ll = log_lambda(s_values[None, :], t[:, None])
                        mat = np.exp(logmag[:, None] + ll) * (sign * wt * phase)[:, None]
                        total[round_idx] += mat.sum(axis=0)
        out.append((total[1], float(np.max(np.abs(total[1] - total[0]), initial=0.0))))
    return out


def norm_Xp(spec, f, *, tol: float = 1e-8) -> NormResult:
    """Squared norm of a two-sided element against lambda(p(zeta), t).

    Writes |f|^2 = sum over term pairs q_i conj(q_l) Lambda_{il}(p(zeta))
    and integrates over the sublevel set; the t-integrals Lambda_{il} are
    shared across quadrature nodes through the distinct values of p.
    """
    p = _poly_of(spec)
    n = p.n
    terms = [(prof, _as_holo(q, n)) for prof, q in _element_terms(f)]
    for prof, _ in terms:
        _check_xp_admissible(prof)
    if not terms:
        return NormResult(0.0, 0.0, True)
    if n == 0:
        pairs = [(f1, f2) for f1, _ in terms for f2, _ in terms]
        lam = _lambda_pair_integrals(pairs, np.array([0.0]))
        total = 0.0 + 0.0j
        err = 0.0
        idx = 0
        for _, q1 in terms:
            for _, q2 in terms:
                c1 = complex(dict(q1.terms).get((), 0.0))
                c2 = complex(dict(q2.terms).get((), 0.0))
                vals, verr = lam[idx]
                total += c1 * np.conj(c2) * vals[0]
                err += abs(c1 * c2) * verr
                idx += 1
        return NormResult(float(total.real), err, True)

    pairs = [(f1, f2) for f1, _ in terms for f2, _ in terms]

    def g(w):
        s_raw = p(w)
        s_flat = np.clip(np.asarray(s_raw, dtype=float).ravel(), 0.0, 1.0 - 1e-15)
        uniq, inverse = np.unique(np.round(s_flat, 12), return_inverse=True)
        lam = _lambda_pair_integrals(pairs, uniq)
        out = np.zeros(s_flat.shape, dtype=complex)
        idx = 0
        for _, q1 in terms:
            for _, q2 in terms:
                vals, _ = lam[idx]
                qq = (q1(w) * np.conj(q2(w))).ravel()
                out += qq * vals[inverse]
                idx += 1
        return out.real.reshape(np.shape(s_raw))

    res = integrate_Bp(p, g, tol=tol)
    return NormResult(float(np.real(res.value)), res.error_estimate, res.converged)

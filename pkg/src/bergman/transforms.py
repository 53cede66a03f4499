"""Paley-Wiener maps in several variables.

Three unitary pictures of the Bergman space of a polynomial half-space:
power series on the egg domain (compact picture), half-line Fourier
integrals against the fiber variables (translation picture), and
scaling-line Mellin integrals (scaling picture).  Each map comes with the
norm identity that makes it an isometry and with the group action it
intertwines; the module also ships the quadrature engines that compute
the transform-side norms independently of the model-side ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .domains import (
    DomainSpec,
    automorphism_apply,
    automorphism_det,
    det_psi_prime,
    in_Ep,
    in_Up,
    rho_hat,
)
from .errors import (
    AccuracyError,
    DimensionError,
    DivergenceError,
    DomainError,
    NotInSpaceError,
)
from .polynomials import BalancedPolynomial, HoloPolynomial
from .quad import (
    QuadratureResult,
    _legendre_rule,
    gaussian_weighted_Cn,
    integrate_Bp,
    integrate_halfline,
    integrate_line,
)
from .transforms1d import (
    Piece,
    Profile1D,
    SampledProfile,
    _piece_forward,
    sector_forward,
    strip_forward_numeric,
    strip_inverse,
)
from .weights import NormResult, norm_Hp, norm_Xp, norm_Yp

__all__ = [
    "PolySequence",
    "SpectralElement",
    "T_compact",
    "T_S_multi",
    "T_S_numeric",
    "T_S_inverse",
    "T_V_multi",
    "equivariance_check",
    "egg_norm_sq",
    "halfspace_norm_sq",
    "sector_bundle_norm_sq",
    "isometry_pair",
    "isometry_suite",
]


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


def _split_point(spec: DomainSpec, point) -> tuple[complex, np.ndarray]:
    if isinstance(point, (tuple, list)) and len(point) == 2:
        z, w = point
        return complex(z), _fiber_point(spec, w)
    if spec.n == 0:
        return complex(point), np.zeros(0, dtype=complex)
    raise DomainError(f"expected a point (z, w) with {spec.n} fiber coordinates")


def _as_poly(q, n: int) -> HoloPolynomial:
    if isinstance(q, HoloPolynomial):
        if q.n != n:
            raise DimensionError(f"coefficient polynomial has {q.n} variables, expected {n}")
        return q
    return HoloPolynomial(n, (((0,) * n, complex(q)),))


# ---------------------------------------------------------------------------
# Element types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolySequence:
    """Finite coefficient sequence a_0, ..., a_K for the compact picture."""

    spec: DomainSpec
    entries: tuple[HoloPolynomial, ...]

    def __post_init__(self) -> None:
        spec = _spec_of(self.spec)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(
            self, "entries", tuple(_as_poly(a, spec.n) for a in self.entries)
        )

    def norm_sq(self, *, tol: float = 1e-9) -> NormResult:
        return norm_Yp(self.spec, self.entries, tol=tol)

    def rotated(self, theta: float) -> "PolySequence":
        """Entry-wise phases e^{i k theta}, the compact-picture group action."""
        return PolySequence(self.spec, tuple(
            a.scaled(np.exp(1j * k * theta)) for k, a in enumerate(self.entries)
        ))


def _require_halfline(terms) -> None:
    for prof, _ in terms:
        for piece in prof.pieces:
            if piece.kind == "gaussian" or (piece.kind == "window" and piece.support[0] < 0):
                raise NotInSpaceError(
                    "half-line elements need profiles supported in t >= 0; "
                    f"found a {piece.kind} piece reaching t < 0"
                )


@dataclass(frozen=True)
class SpectralElement:
    """Finite separable sum f(t, w) = sum_j phi_j(t) q_j(w).

    ``space`` declares the intended norm and is checked on construction:
    "Hp" for the half-line class against e^{-4 pi t p(w)} dV dt/(4 pi t),
    "Xp" for the two-sided scaling class against lambda(p(zeta), t), or
    None for elements used pointwise only (no finiteness claim is made).
    A declared element whose norm diverges raises a not-in-space error.
    """

    spec: DomainSpec
    terms: tuple[tuple[Profile1D, HoloPolynomial], ...]
    space: str | None = None

    def __post_init__(self) -> None:
        spec = _spec_of(self.spec)
        object.__setattr__(self, "spec", spec)
        fixed = []
        for prof, q in self.terms:
            if not isinstance(prof, Profile1D):
                prof = Profile1D(tuple(prof))
            fixed.append((prof, _as_poly(q, spec.n)))
        object.__setattr__(self, "terms", tuple(fixed))
        if self.space is None:
            return
        if self.space == "Hp":
            _require_halfline(self.terms)
            try:
                norm_Hp(spec, self.terms)
            except DivergenceError as exc:
                raise NotInSpaceError(str(exc)) from exc
        elif self.space == "Xp":
            try:
                norm_Xp(spec, self.terms)
            except DivergenceError as exc:
                raise NotInSpaceError(str(exc)) from exc
        else:
            raise DomainError(
                f"unknown space tag {self.space!r}; use 'Hp', 'Xp', or None"
            )

    def __call__(self, t, w) -> complex | np.ndarray:
        w = _fiber_point(self.spec, w)
        out = None
        for prof, q in self.terms:
            vals = prof(t) * complex(q(w))
            out = vals if out is None else out + vals
        if out is None:
            out = np.zeros(np.shape(t), dtype=complex)
        return complex(out) if np.ndim(out) == 0 else out

    def profile_at(self, w) -> Profile1D:
        """The scalar t-profile of the slice at fixed w."""
        w = _fiber_point(self.spec, w)
        pieces = []
        for prof, q in self.terms:
            c = complex(q(w))
            if c != 0:
                pieces.extend(prof.scaled(c).pieces)
        return Profile1D(tuple(pieces))

    def modulated(self, theta: float) -> "SpectralElement":
        """e^{2 pi i theta t} f; modulation preserves both norm classes."""
        return SpectralElement(self.spec, tuple(
            (prof.modulated(theta), q) for prof, q in self.terms
        ), self.space)

    def scaled(self, factor: complex) -> "SpectralElement":
        return SpectralElement(self.spec, tuple(
            (prof.scaled(factor), q) for prof, q in self.terms
        ), self.space)

    def norm_sq(self, *, tol: float = 1e-8) -> NormResult:
        if self.space == "Hp":
            return norm_Hp(self.spec, self.terms, tol=tol)
        if self.space == "Xp":
            return norm_Xp(self.spec, self.terms, tol=tol)
        raise DomainError("element has no declared space; construct with 'Hp' or 'Xp'")


# ---------------------------------------------------------------------------
# The three forward maps
# ---------------------------------------------------------------------------

def T_compact(a: PolySequence, point) -> complex:
    """Series sum_k a_k(w) z^k at a point of the egg domain."""
    z, w = _split_point(a.spec, point)
    if not in_Ep(a.spec, z, w):
        raise DomainError(f"point {(z, tuple(w))} is outside the egg domain")
    total = 0.0 + 0.0j
    for a_k in reversed(a.entries):
        total = total * z + complex(a_k(w))
    return complex(total)


def T_S_multi(f: SpectralElement, point) -> complex:
    """Half-line Fourier integral sum_j q_j(w) int_0^inf phi_j(t) e^{2 pi i z t} dt.

    Evaluated through the per-piece closed forms (Gamma factors for
    exponential pieces, finite rules for windows); the membership gate of
    the declared space is not re-imposed here, so borderline elements can
    still be transformed pointwise.
    """
    z, w = _split_point(f.spec, point)
    if not in_Up(f.spec, z, w):
        raise DomainError(f"point {(z, tuple(w))} is outside the half-space")
    if f.space == "Xp":
        raise NotInSpaceError("two-sided scaling element passed to the half-line transform")
    _require_halfline(f.terms)
    zz = np.asarray(z, dtype=complex)
    total = 0.0 + 0.0j
    for prof, q in f.terms:
        qw = complex(q(w))
        if qw == 0:
            continue
        for piece in prof.pieces:
            total += qw * complex(_piece_forward(piece, zz))
    return complex(total)


def T_S_numeric(f: SpectralElement, point) -> QuadratureResult:
    """Quadrature cross-path for the half-line transform (rotated rays)."""
    z, w = _split_point(f.spec, point)
    if not in_Up(f.spec, z, w):
        raise DomainError(f"point {(z, tuple(w))} is outside the half-space")
    _require_halfline(f.terms)
    total = 0.0 + 0.0j
    err = 0.0
    nodes = 0
    for prof, q in f.terms:
        qw = complex(q(w))
        if qw == 0:
            continue
        res = strip_forward_numeric(prof, complex(z))
        total += qw * res.value
        err += abs(qw) * res.error_estimate
        nodes += res.nodes_used
    return QuadratureResult(total, err, nodes)


def T_S_inverse(F, w, c: float, grid, *, half_width: float = 2e4,
                tol: float = 1e-6, points: int = 24) -> SampledProfile:
    """Contour inversion of the half-line transform on the slice at w.

    Recovers e^{2 pi c t} int F(x + ic, w) e^{-2 pi i x t} dx on the grid.
    ``F`` is either a SpectralElement, whose transform is inverted through
    its closed slice forms, or a callable F(z, w) holomorphic above the
    contour.  The contour must sit above p(w), and the window [-X, X] must
    pass the tail bound of the line inversion or an accuracy error is
    raised.  The recovered values are c-independent for transforms of
    genuine half-line profiles, which is what the tests pin down.
    """
    if isinstance(F, SpectralElement):
        spec = F.spec
        w_arr = _fiber_point(spec, w)
        height = float(spec.p(w_arr)) if spec.n else 0.0
        if c <= height:
            raise DomainError(f"contour height {c} is not above p(w) = {height}")
        if F.space == "Xp":
            raise NotInSpaceError("two-sided scaling element passed to the half-line inverse")
        _require_halfline(F.terms)
        prof = F.profile_at(w_arr)

        def slice_fn(zs):
            zs = np.asarray(zs, dtype=complex)
            out = np.zeros(zs.shape, dtype=complex)
            for piece in prof.pieces:
                out = out + _piece_forward(piece, zs)
            return out
    else:
        w_arr = np.asarray(w, dtype=complex).reshape(-1)

        def slice_fn(zs):
            return np.asarray(F(np.asarray(zs, dtype=complex), w_arr), dtype=complex)

    return strip_inverse(slice_fn, c, grid, half_width=half_width, tol=tol, points=points)


def _scaling_window(prof: Profile1D, logz: complex, tol: float) -> tuple[float, float]:
    """Window half-width and panel cap for the scaling-line integrand.

    The integrand is prof(t) e^{2 pi i t log z}; its envelope gains
    e^{-2 pi arg(z) t}, so exponential pieces keep a positive decay rate on
    the right and gaussian pieces beat the growth on the left.
    """
    theta = logz.imag
    scale = sum(abs(p.c) for p in prof.pieces) or 1.0
    budget = math.log(scale / (0.01 * tol) + 10.0)
    half = 1.0
    osc = 2.0 * np.pi * abs(logz.real)
    for p in prof.pieces:
        osc = max(osc, abs(p.b.imag))
        if p.support is not None:
            half = max(half, abs(p.support[0]), abs(p.support[1]))
            continue
        rate = p.b.real + 2.0 * np.pi * theta
        if p.sigma == 0.0:
            span = budget / rate
            half = max(half, (budget + p.a * math.log1p(max(span, 1.0))) / rate)
            osc = max(osc, 0.5 * rate)
        else:
            for sign in (1.0, -1.0):
                drift = max(sign * rate, 0.0)
                span = (drift + math.sqrt(drift * drift + 4.0 * p.sigma * budget)) / (2.0 * p.sigma)
                need = budget + p.a * math.log1p(span)
                edge = (drift + math.sqrt(drift * drift + 4.0 * p.sigma * need)) / (2.0 * p.sigma)
                half = max(half, edge)
                osc = max(osc, 0.5 * (2.0 * p.sigma * edge + abs(rate)))
    cap = min(2.0, 10.0 / max(1.0, osc))
    return half, cap


def T_V_multi(g: SpectralElement, point, *, method: str = "line",
              tol: float = 1e-10) -> complex:
    """Scaling-line integral int g(t, rho_hat_{1/z} w) z^{2 pi i t - 1 - 1/(2 mu)} dt.

    The default route integrates over a window sized from the profiles'
    decay against the e^{-2 pi arg(z) t} damping that z^{2 pi i t} carries
    on the half-space.  ``method="sector"`` evaluates the same value as
    z^{-1/(2 mu)} times the one-variable sector transform of the combined
    slice profile, which is the closed route the isometry proof factors
    through; the two must agree and the tests compare them.
    """
    z, w = _split_point(g.spec, point)
    if not in_Up(g.spec, z, w):
        raise DomainError(f"point {(z, tuple(w))} is outside the half-space")
    if g.space == "Hp":
        raise NotInSpaceError("half-line element passed to the scaling transform")
    spec = g.spec
    zc = complex(z)
    scaled_w = rho_hat(1.0 / zc, w, spec.m) if spec.n else w
    prof = g.profile_at(scaled_w)
    if prof.is_zero or not prof.pieces:
        return 0.0 + 0.0j
    if method == "sector":
        handle = sector_forward(prof, (0.0, math.pi))
        return complex(complex(handle(zc)) * det_psi_prime(spec, zc))
    if method != "line":
        raise DomainError(f"unknown method {method!r}; use 'line' or 'sector'")
    logz = complex(np.log(zc))
    half, cap = _scaling_window(prof, logz, tol)

    def integrand(t):
        return prof(t) * np.exp(2j * np.pi * logz * t)

    res = integrate_line(integrand, half, points=24, max_panel_width=cap)
    return complex(res.value * det_psi_prime(spec, zc) / zc)


# ---------------------------------------------------------------------------
# Group equivariance
# ---------------------------------------------------------------------------

def equivariance_check(kind: str, theta: float, element, point) -> float:
    """Residual of the intertwining identity for one transform.

    translation: |T_S(e^{2 pi i theta t} f)(z, w) - T_S f(z + theta, w)|
    rotation:    |T(a_k <- e^{i k theta} a_k)(z, w) - T a(e^{i theta} z, w)|
    scaling:     |T_V(theta^{2 pi i t - 1 - 1/(2 mu)} g)(z, w)
                  - T_V g(theta z, rho_hat_theta w)|
    """
    if kind == "rotation":
        if not isinstance(element, PolySequence):
            raise DomainError("rotation equivariance needs a PolySequence")
        z, w = _split_point(element.spec, point)
        lhs = T_compact(element.rotated(theta), (z, w))
        rhs = T_compact(element, automorphism_apply(element.spec, "rotation", theta, z, w))
        return abs(lhs - rhs)
    if not isinstance(element, SpectralElement):
        raise DomainError(f"{kind} equivariance needs a SpectralElement")
    z, w = _split_point(element.spec, point)
    if kind == "translation":
        lhs = T_S_multi(element.modulated(theta), (z, w))
        rhs = T_S_multi(element, automorphism_apply(element.spec, "translation", theta, z, w))
        return abs(lhs - rhs)
    if kind == "scaling":
        if theta <= 0:
            raise DomainError("scaling parameter must be positive")
        det = automorphism_det(element.spec, "scaling", theta)
        twisted = element.modulated(math.log(theta)).scaled(1.0 / det)
        lhs = T_V_multi(twisted, (z, w), method="sector")
        rhs = T_V_multi(element, automorphism_apply(element.spec, "scaling", theta, z, w),
                        method="sector")
        return abs(lhs - rhs)
    raise DomainError(f"unknown equivariance kind {kind!r}")


# ---------------------------------------------------------------------------
# Transform-side norms
# ---------------------------------------------------------------------------

def egg_norm_sq(a: PolySequence, *, tol: float = 1e-9,
                z_quadrature: bool = False) -> QuadratureResult:
    """Squared Bergman norm of the compact-picture series on the egg domain.

    The fiber integral over the disc |z|^2 < 1 - p(w) is exact on
    monomials, pi (1 - p)^{k+1}/(k + 1), with cross terms killed by
    rotation; the base integral runs over the sublevel set.  With
    ``z_quadrature=True`` the exact fiber step is replaced by a polar rule
    that samples the full square modulus, cross terms included, which is
    the honest check that they really cancel.
    """
    spec = a.spec
    p = spec.p
    entries = a.entries
    if z_quadrature:
        u_nodes, u_weights = _legendre_rule(32)
        u = 0.5 * (u_nodes + 1.0)
        uw = 0.5 * u_weights
        m_ang = 2 * len(entries) + 8
        phi = 2.0 * np.pi * np.arange(m_ang) / m_ang
        zdisc = np.sqrt(u)[:, None] * np.exp(1j * phi)[None, :]

    def fiber_values(w):
        w = np.asarray(w, dtype=complex)
        pw = np.asarray(p(w), dtype=float) if spec.n else np.asarray(0.0)
        vals = [np.asarray(q(w), dtype=complex) for q in entries]
        if not z_quadrature:
            out = np.zeros(pw.shape, dtype=float)
            r2 = 1.0 - pw
            for k, ak in enumerate(vals):
                out += np.abs(ak) ** 2 * r2 ** (k + 1) / (k + 1)
            return np.pi * out
        radius = np.sqrt(np.clip(1.0 - pw, 0.0, None))
        series = np.zeros(pw.shape + zdisc.shape, dtype=complex)
        for k in range(len(vals) - 1, -1, -1):
            series = series * (radius[..., None, None] * zdisc) + vals[k][..., None, None]
        sq = np.abs(series) ** 2
        fiber = np.tensordot(sq, uw, axes=([sq.ndim - 2], [0])).sum(axis=-1)
        return (1.0 - pw) * fiber * (np.pi / m_ang)

    if spec.n == 0:
        value = float(np.real(fiber_values(np.zeros((0,), dtype=complex))))
        return QuadratureResult(value, 1e-15 * abs(value), 1)
    res = integrate_Bp(p, fiber_values, tol=tol)
    return QuadratureResult(float(np.real(res.value)), res.error_estimate,
                            res.nodes_used, res.converged)


def _exp_pair_data(f: SpectralElement):
    """Monomial-bucketed exponential pieces for the iterated half-space norm."""
    buckets: dict[tuple, list[Piece]] = {}
    for prof, q in f.terms:
        for alpha, c in q.terms:
            for piece in prof.scaled(c).pieces:
                if piece.kind != "exp":
                    raise DomainError(
                        "the closed strip pair integrals need exponential profiles; "
                        f"got a {piece.kind} piece"
                    )
                buckets.setdefault(alpha, []).append(piece)
    return buckets


def halfspace_norm_sq(f: SpectralElement, *, tol: float = 1e-9) -> QuadratureResult:
    """Squared Bergman norm of the half-line transform over the half-space.

    Iterated route: at fixed w the x-integral of a transformed pair of
    exponential pieces is the Plancherel pairing
    c conj(c') Gamma(a + a' + 1) (b + conj(b') + 4 pi y)^{-(a + a' + 1)},
    and the y-integral over (p(w), inf) is its explicit tail.  The
    remaining algebraic factor is fed through its Gamma representation, so
    the outer integral becomes gaussian-weighted C^n quadratures along an
    auxiliary half-line: honest in w and in the auxiliary variable, closed
    only where Plancherel is exact.
    """
    if f.space != "Hp":
        raise NotInSpaceError("declare the element in the half-line space first")
    spec = f.spec
    buckets = _exp_pair_data(f)
    alphas = sorted(buckets)
    pairs = []
    min_rate = math.inf
    for alpha in alphas:
        for beta in alphas:
            for pa in buckets[alpha]:
                for pb in buckets[beta]:
                    k_exp = pa.a + pb.a
                    rate = pa.b + np.conj(pb.b)
                    pairs.append((alpha, beta, pa.c * np.conj(pb.c), k_exp, rate))
                    min_rate = min(min_rate, rate.real)
    if not pairs:
        return QuadratureResult(0.0, 0.0, 0)

    big_m = spec.m.big_M
    cn_err = 0.0
    cn_nodes = 0

    def inner(tau: float) -> complex:
        nonlocal cn_err, cn_nodes
        coeffs: dict[tuple[tuple, tuple], complex] = {}
        for alpha, beta, c, k_exp, rate in pairs:
            val = c * tau ** (k_exp - 1) * np.exp(-rate * tau)
            coeffs[(alpha, beta)] = coeffs.get((alpha, beta), 0.0) + val

        def h(w):
            w = np.asarray(w, dtype=complex)
            out = np.zeros(w.shape[:-1], dtype=complex)
            for (alpha, beta), cval in coeffs.items():
                mono = np.ones(w.shape[:-1], dtype=complex)
                for j in range(spec.n):
                    if alpha[j]:
                        mono = mono * w[..., j] ** alpha[j]
                    if beta[j]:
                        mono = mono * np.conj(w[..., j]) ** beta[j]
                out += cval * mono
            return out

        res = gaussian_weighted_Cn(spec.p, h, tau, tol=tol)
        cn_err += res.error_estimate
        cn_nodes += res.nodes_used
        return complex(res.value)

    # [0, 1] with tau = u^big_M: every fractional power from the fiber
    # norms becomes an integer power of u.
    def low_part(points: int) -> complex:
        total = 0.0 + 0.0j
        for lo, hi in ((0.0, 0.5), (0.5, 1.0)):
            nodes, wts = _legendre_rule(points)
            u = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
            for uv, wv in zip(u, wts):
                tau = uv ** big_m
                total += 0.5 * (hi - lo) * wv * big_m * uv ** (big_m - 1) * inner(tau)
        return total

    low_coarse = low_part(16)
    low_fine = low_part(32)

    def upper(v):
        v = np.real(np.asarray(v, dtype=complex))
        out = np.zeros(v.shape, dtype=complex)
        for idx, vv in np.ndenumerate(v):
            out[idx] = inner(1.0 + float(vv))
        return out

    high = integrate_halfline(upper, min_rate)
    value = (low_fine + high.value) / (4.0 * np.pi)
    err = (abs(low_fine - low_coarse) + high.error_estimate + cn_err) / (4.0 * np.pi)
    return QuadratureResult(float(value.real), err, cn_nodes + high.nodes_used)


def _pair_strip_integrals(prof_a: Profile1D, prof_b: Profile1D,
                          y_nodes: np.ndarray, x_half: float,
                          width: float, points: int) -> np.ndarray:
    """x-integrals of Fphi_a(x+iy) conj(Fphi_b(x+iy)) on a grid of heights."""
    nodes, wts = _legendre_rule(points)
    count = max(4, int(np.ceil(2.0 * x_half / width)))
    edges = np.linspace(-x_half, x_half, count + 1)
    lo, hi = edges[:-1], edges[1:]
    x = (0.5 * (hi - lo)[:, None] * nodes[None, :] + 0.5 * (hi + lo)[:, None]).ravel()
    wx = (0.5 * (hi - lo)[:, None] * wts[None, :]).ravel()
    zgrid = x[None, :] + 1j * y_nodes[:, None]
    fa = np.zeros(zgrid.shape, dtype=complex)
    fb = np.zeros(zgrid.shape, dtype=complex)
    for piece in prof_a.pieces:
        fa += _piece_forward(piece, zgrid)
    for piece in prof_b.pieces:
        fb += _piece_forward(piece, zgrid)
    return (fa * np.conj(fb)) @ wx


def _pair_x_geometry(prof_a: Profile1D, prof_b: Profile1D,
                     tol: float) -> tuple[float, float, float]:
    """(x_half, panel width, peak growth rate) for one transform pair.

    A gaussian piece transforms with magnitude
    e^{((b_r + 2 pi y)^2 - (2 pi x)^2)/(4 sigma)}: the exponent peaks near
    y = pi and falls quadratically in x, which fixes both the truncation
    point and how fine the x panels must be to track the decay.  The
    returned growth rate bounds d/dy of the pair's log-magnitude and
    drives the resolution of the height grid.  Window pieces are entire
    with only algebraic x-decay; they get a fixed wide window and rely on
    the doubled-rule error estimate.
    """
    budget = math.log(1.0 / (0.01 * tol) + 10.0) + 20.0
    half = 6.0
    width = 1.0
    growth = 1.0
    peak_log = 0.0
    for prof in (prof_a, prof_b):
        sigmas = [p.sigma for p in prof.pieces if p.sigma > 0]
        if len(sigmas) < len(prof.pieces):
            half = max(half, 80.0)
        if sigmas:
            sigma_hi = max(sigmas)
            sigma_lo = min(sigmas)
            shift = max(abs(p.b.real) + 2.0 * np.pi * math.pi for p in prof.pieces)
            half = max(half, (shift + 2.0 * math.sqrt(sigma_hi * budget)) / (2.0 * np.pi) + 1.0)
            width = min(width, 0.16 * math.sqrt(sigma_lo))
            growth = max(growth, np.pi * shift / sigma_lo)
            peak_log += shift * shift / (4.0 * sigma_lo)
    if peak_log > 650.0:
        raise AccuracyError(
            "the scaling-side norm overflows double precision for this element; "
            "its gaussian pieces decay too slowly against the weight's growth"
        )
    return half, width, growth


def sector_bundle_norm_sq(g: SpectralElement, *, tol: float = 1e-7) -> QuadratureResult:
    """Squared Bergman norm of the scaling transform over the half-space.

    Computed on the sector bundle that the fiber-scaling substitution
    straightens the half-space into: over each base point zeta the fiber is
    the sector V(arcsin p(zeta), pi - arcsin p(zeta)), and in logarithmic
    coordinates the fiber integral of a pair of one-variable transforms is
    a plain strip integral S_jl(theta).  S_jl is assembled from x-integrals
    on a fixed grid of heights (splined in the height, then integrated
    exactly), and the base integral runs through the sublevel-set rule.
    """
    if g.space != "Xp":
        raise NotInSpaceError("declare the element in the scaling space first")
    spec = g.spec
    terms = g.terms
    if not terms:
        return QuadratureResult(0.0, 0.0, 0)

    half_pi = 0.5 * math.pi
    splines = {}
    pair_err = 0.0
    for j, (prof_j, _) in enumerate(terms):
        for l in range(j, len(terms)):
            prof_l = terms[l][0]
            x_half, width, growth = _pair_x_geometry(prof_j, prof_l, tol)
            y_count = int(np.clip(math.ceil(11.3 * growth), 160, 4096))
            y_nodes = np.linspace(0.0, half_pi, y_count + 1)
            y_full = np.concatenate([y_nodes, math.pi - y_nodes])
            coarse = _pair_strip_integrals(prof_j, prof_l, y_full, x_half, width, 6)
            fine = _pair_strip_integrals(prof_j, prof_l, y_full, 1.3 * x_half, width, 12)
            scale = float(np.max(np.abs(fine))) or 1.0
            pair_err = max(pair_err, float(np.max(np.abs(fine - coarse))) / scale)
            folded = fine[: y_count + 1] + fine[y_count + 1:]
            anti = CubicSpline(y_nodes, folded).antiderivative()
            splines[(j, l)] = (anti, complex(anti(half_pi)))

    def s_pair(j: int, l: int, theta: np.ndarray) -> np.ndarray:
        anti, top = splines[(j, l)] if j <= l else splines[(l, j)]
        vals = top - anti(theta)
        return vals if j <= l else np.conj(vals)

    def base_integrand(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        pz = np.clip(np.asarray(spec.p(zeta), dtype=float), 0.0, 1.0 - 1e-15)
        theta = np.arcsin(pz)
        qvals = [np.asarray(q(zeta), dtype=complex) for _, q in terms]
        out = np.zeros(pz.shape, dtype=float)
        for j in range(len(terms)):
            out += np.abs(qvals[j]) ** 2 * np.real(s_pair(j, j, theta))
            for l in range(j + 1, len(terms)):
                out += 2.0 * np.real(qvals[j] * np.conj(qvals[l]) * s_pair(j, l, theta))
        return out

    if spec.n == 0:
        theta0 = np.asarray(0.0)
        value = 0.0
        for j in range(len(terms)):
            cj = complex(terms[j][1](np.zeros(0, dtype=complex)))
            value += abs(cj) ** 2 * float(np.real(s_pair(j, j, theta0)))
            for l in range(j + 1, len(terms)):
                cl = complex(terms[l][1](np.zeros(0, dtype=complex)))
                value += 2.0 * float(np.real(cj * np.conj(cl) * s_pair(j, l, theta0)))
        return QuadratureResult(value, pair_err * abs(value), 1)

    res = integrate_Bp(spec.p, base_integrand, tol=max(tol, 1e-9))
    value = float(np.real(res.value))
    err = res.error_estimate + pair_err * abs(value)
    return QuadratureResult(value, err, res.nodes_used, res.converged)


def isometry_pair(kind: str, element, *, tol: float = 1e-8) -> tuple[float, float]:
    """(transform-side, model-side) squared norms for one isometry check."""
    if kind == "rotation":
        if not isinstance(element, PolySequence):
            raise DomainError("rotation isometry needs a PolySequence")
        return egg_norm_sq(element, tol=tol).value, element.norm_sq(tol=tol).value
    if not isinstance(element, SpectralElement):
        raise DomainError(f"{kind} isometry needs a SpectralElement")
    if kind == "translation":
        return halfspace_norm_sq(element, tol=tol).value, element.norm_sq(tol=tol).value
    if kind == "scaling":
        return (sector_bundle_norm_sq(element, tol=max(tol, 1e-8)).value,
                element.norm_sq(tol=max(tol, 1e-8)).value)
    raise DomainError(f"unknown isometry kind {kind!r}")


# ---------------------------------------------------------------------------
# Deterministic element suites
# ---------------------------------------------------------------------------

def _random_poly(rng, n: int, max_power: int, terms: int) -> HoloPolynomial:
    entries = []
    for _ in range(terms):
        alpha = tuple(int(rng.integers(0, max_power + 1)) for _ in range(n))
        c = complex(rng.normal(), rng.normal())
        entries.append((alpha, c))
    return HoloPolynomial(n, tuple(entries))


def isometry_suite(kind: str, spec, count: int = 20, seed: int = 7) -> list:
    """Deterministic elements for the isometry checks.

    rotation: coefficient sequences with small polynomial entries;
    translation: half-line elements t^a e^{-bt} x monomials with the
    exponent a chosen above A_alpha/2 so every norm is finite;
    scaling: gaussian-damped two-sided elements.
    """
    spec = _spec_of(spec)
    n = spec.n
    codes = {"rotation": 1, "translation": 2, "scaling": 3}
    if kind not in codes:
        raise DomainError(f"unknown isometry kind {kind!r}")
    rng = np.random.default_rng([seed, codes[kind], n, *spec.m.m])
    out = []
    for i in range(count):
        if kind == "rotation":
            length = 2 + i % 3
            entries = tuple(_random_poly(rng, n, 2, 1 + int(rng.integers(0, 2)))
                            for _ in range(length))
            out.append(PolySequence(spec, entries))
            continue
        terms = []
        for _ in range(1 + i % 2):
            q = _random_poly(rng, n, 2, 1)
            if kind == "translation":
                a_max = 0.0
                for alpha, _ in q.terms:
                    a_max = max(a_max, float(sum((aj + 1) / mj
                                                 for aj, mj in zip(alpha, spec.m.m))))
                power = int(a_max / 2.0) + 1
                b = complex(rng.uniform(0.7, 2.2), rng.uniform(-1.0, 1.0))
                prof = Profile1D((Piece(complex(rng.normal(), rng.normal()), power, b),))
            else:
                prof = Profile1D((Piece(
                    complex(rng.normal(), rng.normal()),
                    int(rng.integers(0, 3)),
                    complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.8, 0.8)),
                    float(rng.uniform(4.0, 9.0)),
                ),))
            terms.append((prof, q))
        space = "Hp" if kind == "translation" else "Xp"
        out.append(SpectralElement(spec, tuple(terms), space))
    return out

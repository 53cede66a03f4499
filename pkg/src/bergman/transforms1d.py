"""One-variable Paley-Wiener transforms for strips and sectors.

The forward map sends a profile f on the line to

    F(z) = integral f(t) e^{2 pi i z t} dt,

holomorphic on a horizontal strip S(a, b) = {a < Im z < b} determined by the
decay of f; the sector variant composes with the logarithm,

    (T_V f)(z) = integral f(t) z^{2 pi i t - 1} dt,

holomorphic on V(a, b) = {a < arg z < b}.  Both are isometries onto the
Bergman spaces of the strip and sector when the line carries the weight
omega_{a,b}; the tests exercise that through the 2-D norm engine at the
bottom of this module.

Profiles are finite sums of three piece shapes, chosen so every forward
transform has a closed form or a finite-window quadrature:

    exponential   c t^a e^{-bt}            on [0, inf), Re b > 0
    gaussian      c t^a e^{-bt - sigma t^2} on all of R, sigma > 0, a integer
    window        c t^a e^{-bt}            on [t0, t1]

The inverse transform returns a sampled profile on a caller grid,

    f(t) = e^{2 pi c t} integral F(x + ic) e^{-2 pi i x t} dx,

whose contour height c drops out of the result; tests verify that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special as sp

from .errors import AccuracyError, DomainError, NotInSpaceError
from .quad import QuadratureResult, _legendre_rule, integrate_halfline


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    """One additive piece c t^a e^{-bt - sigma t^2} with an optional window.

    ``support=None`` means [0, inf) when sigma == 0 and all of R when
    sigma > 0.  A piece that can see t < 0 must have an integer exponent.
    """

    c: complex
    a: float = 0.0
    b: complex = 0.0
    sigma: float = 0.0
    support: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "b", complex(self.b))
        if self.a < 0:
            raise NotInSpaceError(f"piece exponent must be nonnegative, got {self.a}")
        if self.support is not None:
            t0, t1 = self.support
            if not t0 < t1:
                raise NotInSpaceError(f"window {self.support} is empty")
            if t0 < 0 and self.a != int(self.a):
                raise NotInSpaceError("fractional exponent on a window reaching t < 0")
        elif self.sigma == 0.0:
            if self.b.real <= 0:
                raise NotInSpaceError(f"exponential piece needs Re b > 0, got b = {self.b}")
        else:
            if self.sigma < 0:
                raise NotInSpaceError("gaussian piece needs sigma > 0")
            if self.a != int(self.a):
                raise NotInSpaceError("two-sided gaussian piece needs an integer exponent")

    @property
    def kind(self) -> str:
        if self.support is not None:
            return "window"
        return "exp" if self.sigma == 0.0 else "gaussian"


@dataclass(frozen=True)
class Profile1D:
    """A finite sum of pieces; evaluation is vectorized over t."""

    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t)
        if np.iscomplexobj(t):
            t = t.real  # profiles live on the line; quadrature nodes may
        t = np.asarray(t, dtype=float)  # arrive as complex with zero imag
        out = np.zeros(t.shape, dtype=complex)
        for piece in self.pieces:
            if piece.support is not None:
                t0, t1 = piece.support
                mask = (t >= t0) & (t <= t1)
            elif piece.kind == "exp":
                mask = t >= 0
            else:
                mask = np.ones(t.shape, dtype=bool)
            ts = t[mask]
            with np.errstate(invalid="ignore"):
                mono = np.where(ts == 0.0, 1.0 if piece.a == 0 else 0.0, ts**piece.a)
            vals = piece.c * mono * np.exp(-piece.b * ts - piece.sigma * ts**2)
            out[mask] += vals
        return out

    def __add__(self, other: "Profile1D") -> "Profile1D":
        return Profile1D(self.pieces + other.pieces)

    def scaled(self, factor: complex) -> "Profile1D":
        return Profile1D(tuple(
            Piece(factor * p.c, p.a, p.b, p.sigma, p.support) for p in self.pieces
        ))

    def modulated(self, theta: float) -> "Profile1D":
        """e^{2 pi i theta t} f(t): shifts every decay rate b by -2 pi i theta."""
        return Profile1D(tuple(
            Piece(p.c, p.a, p.b - 2j * np.pi * theta, p.sigma, p.support) for p in self.pieces
        ))

    @property
    def is_zero(self) -> bool:
        return all(p.c == 0 for p in self.pieces)


def exp_profile(c: complex, a: float, b: complex) -> Profile1D:
    return Profile1D((Piece(c, a, b),))


@dataclass(frozen=True)
class SampledProfile:
    """Grid samples of a reconstructed profile with a rule-doubling error."""

    grid: np.ndarray
    values: np.ndarray
    error_estimate: float


def leading_exponent_at_zero(profile: Profile1D, orders: int = 8) -> float | None:
    """Smallest exponent with a surviving coefficient in the t -> 0+ expansion.

    Expands each piece's exponential factors to ``orders`` terms, clusters
    the resulting exponents a + k (k integer), and returns the smallest
    cluster whose summed coefficient is not a pure cancellation.  None means
    the profile vanishes to high order (treated as identically small).
    """
    contrib: dict[float, complex] = {}
    scale = 0.0
    for piece in profile.pieces:
        if piece.support is not None and piece.support[0] > 0:
            continue  # invisible at t = 0+
        scale = max(scale, abs(piece.c))
        # e^{-bt - sigma t^2} = sum over k1, k2 of (-b)^k1 (-sigma)^k2 / ...
        for k1 in range(orders):
            for k2 in range(orders // 2 + 1):
                expo = piece.a + k1 + 2 * k2
                if expo >= piece.a + orders:
                    continue
                coef = piece.c * (-piece.b) ** k1 / math.factorial(k1)
                coef *= (-piece.sigma) ** k2 / math.factorial(k2)
                key = round(expo, 9)
                contrib[key] = contrib.get(key, 0.0) + coef
    if scale == 0.0:
        return None
    for expo in sorted(contrib):
        if abs(contrib[expo]) > 1e-12 * scale:
            return expo
    return None


def profile_in_strip_class(profile: Profile1D, a: float, b: float) -> bool:
    """Finiteness of the weighted L^2 norm of f against omega_{a,b}.

    Sufficient conditions per piece shape: gaussian and window pieces are
    always fine on finite strips; exponential pieces need their decay to
    beat e^{-4 pi a t} at +infinity.  With b = +inf the weight behaves like
    1/(4 pi t) at 0+ and the profile must vanish there.
    """
    if not a < b:
        raise DomainError(f"strip bounds ({a}, {b}) are not increasing")
    for piece in profile.pieces:
        if piece.kind == "gaussian":
            continue
        if piece.kind == "window":
            if math.isinf(b) and piece.support[0] < 0:
                return False  # weight undefined for t <= 0
            continue
        if 2.0 * piece.b.real + 4.0 * math.pi * a <= 0:
            return False
    if math.isinf(b):
        if any(p.kind == "gaussian" for p in profile.pieces):
            return False
        lead = leading_exponent_at_zero(profile)
        if lead is not None and 2.0 * lead <= 0.0:
            return False
    return True


# ---------------------------------------------------------------------------
# Holomorphic function handles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HoloFunction1D:
    """Evaluation handle on a strip or sector with membership checking.

    A sector handle may carry its logarithmic conjugate G(zeta) =
    F(e^zeta) e^zeta as a strip handle; inversion and norms prefer it, since
    e^zeta overflows long before the inversion window is exhausted.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    kind: str                    # "strip" or "sector"
    bounds: tuple[float, float]  # (a, b): Im z range or arg z range
    label: str = ""
    log_conjugate: "HoloFunction1D | None" = None

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        a, b = self.bounds
        if self.kind == "strip":
            coord = z.imag
        else:
            coord = np.where(z == 0, np.nan, np.angle(z))
        with np.errstate(invalid="ignore"):
            inside = (coord > a) & (coord < b)
        return inside

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if not np.all(self.contains(z)):
            raise DomainError(f"point outside the {self.kind} {self.bounds}")
        out = self.fn(z)
        return complex(out) if np.ndim(out) == 0 and np.ndim(z) == 0 else np.asarray(out)


def _gaussian_forward(piece: Piece, z: np.ndarray) -> np.ndarray:
    """Closed form for a two-sided gaussian piece.

    With beta = 2 pi i z - b, the a-th derivative in beta of
    sqrt(pi/sigma) e^{beta^2/(4 sigma)} gives the t^a factor; the
    polynomial prefactors follow the recurrence P_{k+1} = P_k' + beta/(2
    sigma) P_k.
    """
    beta = 2j * np.pi * z - piece.b
    coeffs = np.array([1.0 + 0.0j])  # ascending powers of beta
    for _ in range(int(piece.a)):
        deriv = coeffs[1:] * np.arange(1, len(coeffs))
        shifted = np.concatenate([[0.0], coeffs]) / (2.0 * piece.sigma)
        size = max(len(deriv), len(shifted))
        nxt = np.zeros(size, dtype=complex)
        nxt[: len(deriv)] += deriv
        nxt[: len(shifted)] += shifted
        coeffs = nxt
    poly = np.zeros(beta.shape, dtype=complex)
    for k in range(len(coeffs) - 1, -1, -1):
        poly = poly * beta + coeffs[k]
    return piece.c * poly * np.sqrt(np.pi / piece.sigma) * np.exp(beta**2 / (4.0 * piece.sigma))


def _window_forward(piece: Piece, z: np.ndarray, points: int = 48) -> np.ndarray:
    """Finite-window piece by panelled Gauss-Legendre, oscillation-capped."""
    t0, t1 = piece.support
    beta = 2j * np.pi * z - piece.b
    freq = float(np.max(np.abs(beta.imag))) if beta.size else abs(beta.imag)
    width = min(t1 - t0, 10.0 * np.pi / max(float(freq), 1e-9))
    count = max(1, int(np.ceil((t1 - t0) / width)))
    edges = np.linspace(t0, t1, count + 1)
    x, wgt = _legendre_rule(points)
    out = np.zeros(np.shape(z), dtype=complex)
    for lo, hi in zip(edges[:-1], edges[1:]):
        t = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        mono = t**piece.a if piece.a else np.ones_like(t)
        ft = piece.c * mono * np.exp(-piece.sigma * t**2)
        kernel = np.exp(np.multiply.outer(beta, t))
        out = out + 0.5 * (hi - lo) * np.tensordot(kernel, ft * wgt, axes=([kernel.ndim - 1], [0]))
    return out


def _piece_forward(piece: Piece, z: np.ndarray) -> np.ndarray:
    if piece.kind == "exp":
        denom = piece.b - 2j * np.pi * z
        return piece.c * sp.gamma(piece.a + 1.0) * denom ** (-(piece.a + 1.0))
    if piece.kind == "gaussian":
        return _gaussian_forward(piece, z)
    return _window_forward(piece, z)


def strip_lower_edge(profile: Profile1D) -> float:
    """Lowest admissible strip bottom: exponential pieces force
    Im z > -Re b/(2 pi); gaussian and window pieces are entire."""
    edges = [-p.b.real / (2.0 * np.pi) for p in profile.pieces if p.kind == "exp"]
    return max(edges) if edges else -math.inf


def strip_forward(profile: Profile1D, strip: tuple[float, float]) -> HoloFunction1D:
    """The forward transform as a holomorphic function on the given strip.

    Exponential pieces use the Gamma closed form
    c Gamma(a+1) (b - 2 pi i z)^{-(a+1)}; gaussian pieces the Hermite-type
    closed form; window pieces a finite quadrature.  The profile must lie in
    L^2(omega_strip) or a not-in-space error is raised.
    """
    a, b = strip
    if not profile_in_strip_class(profile, a, b):
        raise NotInSpaceError(f"profile has infinite norm against omega_{{{a},{b}}}")
    edge = strip_lower_edge(profile)
    if a < edge - 1e-12:
        raise NotInSpaceError(
            f"strip bottom {a} lies below the transform's domain edge {edge}"
        )

    def fn(z: np.ndarray) -> np.ndarray:
        total = np.zeros(np.shape(z), dtype=complex)
        for piece in profile.pieces:
            total = total + _piece_forward(piece, np.asarray(z, dtype=complex))
        return total

    return HoloFunction1D(fn=fn, kind="strip", bounds=(a, b), label="strip_forward")


def strip_forward_numeric(profile: Profile1D, z: complex) -> QuadratureResult:
    """Independent quadrature path for the forward transform at one point.

    Each exponential piece is integrated on its own rotated Laguerre ray
    (decay rate b - 2 pi i z); gaussian and window pieces reuse their
    finite-window evaluators with doubled rules for the error estimate.
    """
    z = complex(z)
    total = 0.0 + 0.0j
    err = 0.0
    nodes = 0
    for piece in profile.pieces:
        if piece.kind == "exp":
            s = piece.b - 2j * np.pi * z

            def g(t, piece=piece, s=s):
                return piece.c * t**piece.a * np.exp(-s * t)

            res = integrate_halfline(g, s)
            total += res.value
            err += res.error_estimate
            nodes += res.nodes_used
        else:
            zz = np.asarray([z])
            coarse = (_window_forward(piece, zz, points=32) if piece.kind == "window"
                      else _gaussian_numeric(piece, zz, points=32))
            fine = (_window_forward(piece, zz, points=64) if piece.kind == "window"
                    else _gaussian_numeric(piece, zz, points=64))
            total += complex(fine[0])
            err += abs(complex(fine[0] - coarse[0]))
            nodes += 96
    return QuadratureResult(total, err, nodes)


def _gaussian_numeric(piece: Piece, z: np.ndarray, points: int = 48) -> np.ndarray:
    """Gaussian piece by truncated line quadrature (independent of the
    closed form)."""
    beta = 2j * np.pi * z - piece.b
    re = float(np.max(np.abs(beta.real)))
    half = (re + math.sqrt(re * re + 160.0 * piece.sigma)) / (2.0 * piece.sigma)
    windowed = Piece(piece.c, piece.a, piece.b, piece.sigma, (-half, half))
    return _window_forward(windowed, z, points=points)


# ---------------------------------------------------------------------------
# Inverse transform
# ---------------------------------------------------------------------------

def _inverse_nodes(half_width: float, t_max: float, points: int):
    """Panel nodes and weights on [-X, X] shared across the whole t grid."""
    cap = 5.0 / max(0.2, t_max)
    edges = [0.0]
    while edges[-1] < half_width:
        width = min(max(1.0, edges[-1]), cap)
        edges.append(min(edges[-1] + width, half_width))
    right = np.array(edges)
    edges = np.concatenate([-right[::-1], right[1:]])
    lo, hi = edges[:-1], edges[1:]
    x, w = _legendre_rule(points)
    nodes = (0.5 * (hi - lo)[:, None] * x[None, :] + 0.5 * (hi + lo)[:, None]).ravel()
    weights = (0.5 * (hi - lo)[:, None] * w[None, :]).ravel()
    return nodes, weights


def _fourier_sum(fvals: np.ndarray, weights: np.ndarray, x: np.ndarray,
                 t: np.ndarray) -> np.ndarray:
    """sum_k weights_k fvals_k e^{-2 pi i x_k t}, chunked to bound memory."""
    out = np.zeros(t.shape, dtype=complex)
    step = 1 << 16
    for k in range(0, len(x), step):
        phase = np.exp(-2j * np.pi * np.multiply.outer(t, x[k : k + step]))
        out += phase @ (weights[k : k + step] * fvals[k : k + step])
    return out


def strip_inverse(
    F,
    c: float,
    grid: Sequence[float],
    *,
    half_width: float = 2e4,
    tol: float = 1e-6,
    points: int = 24,
) -> SampledProfile:
    """Recover f(t) = e^{2 pi c t} integral F(x + ic) e^{-2 pi i x t} dx.

    ``F`` is a holomorphic handle (or plain callable) evaluated on the
    contour Im z = c, which must lie inside its strip.  The window [-X, X]
    must capture the tail: the integration-by-parts proxy
    e^{2 pi c t} |F(+-X + ic)| / (pi t) is required to stay below 0.1 tol on
    the grid, else an accuracy error is raised.
    """
    t = np.asarray(grid, dtype=float)
    if isinstance(F, HoloFunction1D) and not (F.bounds[0] < c < F.bounds[1]):
        raise DomainError(f"contour height {c} outside the strip {F.bounds}")
    t_max = float(np.max(np.abs(t))) if t.size else 1.0

    edge = np.array([half_width + 1j * c, -half_width + 1j * c])
    fedge = np.abs(np.asarray(F(edge), dtype=complex))
    t_eff = np.maximum(np.abs(t), 1.0 / half_width)
    tail_proxy = np.exp(2.0 * np.pi * c * t) * float(fedge.sum()) / (np.pi * t_eff)
    worst = float(np.max(tail_proxy)) if t.size else 0.0
    if worst > 0.1 * tol:
        raise AccuracyError(
            f"window half-width {half_width} leaves a tail proxy {worst:.3e} > {0.1 * tol:.1e}"
        )

    results = []
    for pts in (points, 2 * points):
        x, wgt = _inverse_nodes(half_width, t_max, pts)
        fvals = np.asarray(F(x + 1j * c), dtype=complex)
        results.append(np.exp(2.0 * np.pi * c * t) * _fourier_sum(fvals, wgt, x, t))
    err = float(np.max(np.abs(results[1] - results[0]))) if t.size else 0.0
    return SampledProfile(grid=t, values=results[1], error_estimate=err)


# ---------------------------------------------------------------------------
# Sector transforms
# ---------------------------------------------------------------------------

def sector_forward(profile: Profile1D, sector: tuple[float, float]) -> HoloFunction1D:
    """The Mellin-type forward transform on the sector V(a, b).

    Realized as the pullback of the strip transform under z -> log z: the
    value is G(log z)/z where G is the strip transform on S(a, b) (the
    bounds are now angles).
    """
    a, b = sector
    if not (-math.pi <= a < b <= math.pi):
        raise DomainError(f"sector bounds ({a}, {b}) must satisfy -pi <= a < b <= pi")
    G = strip_forward(profile, (a, b))

    def fn(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return G.fn(np.log(z)) / z

    return HoloFunction1D(fn=fn, kind="sector", bounds=(a, b),
                          label="sector_forward", log_conjugate=G)


def sector_forward_numeric(profile: Profile1D, z: complex) -> QuadratureResult:
    """Direct integral f(t) z^{2 pi i t - 1} dt without the log pullback."""
    z = complex(z)
    if z == 0 or (z.real < 0 and z.imag == 0):
        raise DomainError(f"z = {z} is outside every admissible sector")
    # z^{2 pi i t} = e^{2 pi i t log|z|} e^{-2 pi t arg z}: fold the modulus
    # into a modulation and the argument into extra exponential decay.
    shifted = Profile1D(tuple(
        Piece(p.c, p.a, p.b - 2j * np.pi * math.log(abs(z)) + 2.0 * np.pi * np.angle(z),
              p.sigma, p.support)
        for p in profile.pieces
    ))
    res = strip_forward_numeric(shifted, 0.0)
    return QuadratureResult(res.value / z, res.error_estimate / abs(z), res.nodes_used)


def sector_inverse(
    F,
    c: float,
    grid: Sequence[float],
    *,
    half_width: float = 2e4,
    tol: float = 1e-6,
    points: int = 24,
) -> SampledProfile:
    """Inverse of the sector transform via the log substitution.

    (F o exp) * exp is a strip-type transform of the same profile, so the
    strip inverse applies verbatim.  Handles carrying a logarithmic
    conjugate use it directly; a bare callable is composed with exp, which
    limits the window to log-coordinates below the overflow threshold.
    """
    if isinstance(F, HoloFunction1D) and F.log_conjugate is not None:
        handle = HoloFunction1D(fn=F.log_conjugate.fn, kind="strip",
                                bounds=F.bounds, label="sector_inverse")
        return strip_inverse(handle, c, grid, half_width=half_width, tol=tol, points=points)

    if half_width > 700.0:
        raise DomainError(
            "inverting a bare sector callable needs half_width <= 700: "
            "e^zeta overflows beyond that, so the tail cannot be probed"
        )
    bounds = F.bounds if isinstance(F, HoloFunction1D) else (-math.pi, math.pi)

    def G(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        ez = np.exp(zeta)
        inner = F.fn(ez) if isinstance(F, HoloFunction1D) else F(ez)
        return np.asarray(inner, dtype=complex) * ez

    handle = HoloFunction1D(fn=G, kind="strip", bounds=bounds, label="sector_inverse")
    return strip_inverse(handle, c, grid, half_width=half_width, tol=tol, points=points)


# ---------------------------------------------------------------------------
# Bergman norms on strips and sectors
# ---------------------------------------------------------------------------

def _graded_edges(a: float, b: float, levels: int = 42) -> np.ndarray:
    """Panel edges on (a, b) geometrically refined toward both endpoints."""
    frac = np.concatenate([
        [0.0], 2.0 ** np.arange(-levels, -1.0), [0.5],
        1.0 - 2.0 ** np.arange(-2.0, -levels - 1, -1), [1.0],
    ])
    return a + (b - a) * np.unique(frac)


def strip_A2_norm_sq(
    F,
    a: float,
    b: float,
    *,
    tol: float = 1e-8,
    x_points: int = 24,
    y_points: int = 12,
) -> QuadratureResult:
    """Squared Bergman norm of F over the strip S(a, b) by 2-D quadrature.

    The x-integral uses geometric panels out to where the analytic tail
    bound |F(X)|^2 X falls below the tolerance (|F|^2 decays algebraically
    and monotonically for the transform class, so panel doubling reaches
    X ~ 1e9 in ~30 panels); the y-integral uses panels graded toward both
    strip edges, where the integrand may be steep.
    """
    fn = F.fn if isinstance(F, HoloFunction1D) else F
    y_edges = _graded_edges(a, b)

    def value_at(xp: int, yp: int) -> tuple[complex, int]:
        xg, xw = _legendre_rule(xp)
        yg, yw = _legendre_rule(yp)
        ylo, yhi = y_edges[:-1], y_edges[1:]
        y = (0.5 * (yhi - ylo)[:, None] * yg[None, :] + 0.5 * (yhi + ylo)[:, None]).ravel()
        wy = (0.5 * (yhi - ylo)[:, None] * yw[None, :]).ravel()

        # Shared x panels, grown until the tail proxy at the worst y is small.
        half = 16.0
        probe = np.array([half + 1j * yv for yv in (y.min(), y.max())])
        while half < 1e12:
            tail = float(np.max(np.abs(fn(probe)) ** 2)) * half
            if tail < 0.05 * tol:
                break
            half *= 4.0
            probe = np.array([half + 1j * y.min(), -half + 1j * y.min(),
                              half + 1j * y.max(), -half + 1j * y.max()])
        edges = [0.0]
        while edges[-1] < half:
            edges.append(min(edges[-1] + max(1.0, edges[-1]), half))
        right = np.array(edges)
        x_edges = np.concatenate([-right[::-1], right[1:]])
        xlo, xhi = x_edges[:-1], x_edges[1:]
        x = (0.5 * (xhi - xlo)[:, None] * xg[None, :] + 0.5 * (xhi + xlo)[:, None]).ravel()
        wx = (0.5 * (xhi - xlo)[:, None] * xw[None, :]).ravel()

        total = 0.0
        for k in range(0, len(y), 128):
            yk = y[k : k + 128]
            wk = wy[k : k + 128]
            z = x[None, :] + 1j * yk[:, None]
            vals = np.abs(np.asarray(fn(z), dtype=complex)) ** 2
            total += float(np.einsum("i,ij,j->", wk, vals, wx).real)
        return total, len(x) * len(y)

    coarse, n1 = value_at(x_points, y_points)
    fine, n2 = value_at(2 * x_points, 2 * y_points)
    return QuadratureResult(fine, abs(fine - coarse), n1 + n2)


def sector_A2_norm_sq(F, a: float, b: float, *, tol: float = 1e-8) -> QuadratureResult:
    """Squared Bergman norm over the sector V(a, b).

    In logarithmic coordinates z = e^zeta the area element contributes
    e^{2 xi}, so the integrand |F(e^zeta) e^zeta|^2 runs through the strip
    engine unchanged.  Handles from the forward transform integrate their
    logarithmic conjugate, which stays finite on the whole window.
    """
    if isinstance(F, HoloFunction1D) and F.log_conjugate is not None:
        return strip_A2_norm_sq(F.log_conjugate.fn, a, b, tol=tol)
    fn = F.fn if isinstance(F, HoloFunction1D) else F

    def H(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        ez = np.exp(zeta)
        return np.asarray(fn(ez), dtype=complex) * ez

    return strip_A2_norm_sq(H, a, b, tol=tol)


# ---------------------------------------------------------------------------
# Holomorphy spot check
# ---------------------------------------------------------------------------

def cauchy_riemann_residual(fn, z: complex, h: float = 1e-5) -> float:
    """Relative mismatch between the x- and iy-difference quotients at z."""
    fx = (fn(z + h) - fn(z - h)) / (2.0 * h)
    fy = (fn(z + 1j * h) - fn(z - 1j * h)) / (2j * h)
    scale = max(abs(fx), abs(fy), 1e-30)
    return abs(fx - fy) / scale

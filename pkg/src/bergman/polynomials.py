"""Weighted-homogeneous balanced polynomials and their exact-arithmetic checks.

A weight tuple ``m = (m_1, ..., m_n)`` of positive integers assigns to a
multi-index ``alpha`` the rational weight ``sum(alpha_j / (2 m_j))``.  The
defining functions of the domains in this package are real polynomials

    p(w) = sum_{alpha, beta} C[alpha, beta] * w^alpha * conj(w)^beta

whose terms all carry weight 1/2 in ``alpha`` and in ``beta`` separately,
whose coefficient array is Hermitian (``C[beta, alpha] == conj(C[alpha,
beta])``), and whose values are nonnegative.  Weights are kept as
``fractions.Fraction`` so the balance condition is checked exactly; floats
only appear at evaluation time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionError, InvalidPolynomialError

Multi = tuple[int, ...]

#: Points sampled when checking nonnegativity at construction time.
_NONNEG_SAMPLES = 10_000
#: Polydisc radii used for the nonnegativity sample: 2**j for j in -2..4.
_NONNEG_RADII = tuple(2.0**j for j in range(-2, 5))
#: Values below this are treated as genuine sign violations, not roundoff.
_NONNEG_SLACK = -1e-10


def _as_multi(alpha: Sequence[int]) -> Multi:
    out = tuple(int(a) for a in alpha)
    if any(a < 0 for a in out):
        raise InvalidPolynomialError(f"multi-index has a negative entry: {out}")
    return out


@dataclass(frozen=True)
class WeightTuple:
    """A tuple of positive integer weights with its derived constants.

    Attributes
    ----------
    m : tuple of int
        The weights themselves, all >= 1.
    inv_mu : Fraction
        ``sum(1 / m_j)``, the trace of the weight; exact.
    big_M : int
        ``lcm(2, m_1, ..., m_n)``, the common denominator used when
        homogeneous pieces are indexed by integers.
    """

    m: Multi
    inv_mu: Fraction = field(init=False)
    big_M: int = field(init=False)

    def __post_init__(self) -> None:
        m = _as_multi(self.m)
        if any(mj < 1 for mj in m):
            raise InvalidPolynomialError(f"weights must be positive integers: {m}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "inv_mu", sum((Fraction(1, mj) for mj in m), Fraction(0)))
        object.__setattr__(self, "big_M", math.lcm(2, *m))

    @property
    def n(self) -> int:
        return len(self.m)


def weight_of(alpha: Sequence[int], m: WeightTuple | Sequence[int]) -> Fraction:
    """Exact weight ``sum(alpha_j / (2 m_j))`` of a multi-index.

    Raises a dimension error when ``alpha`` and ``m`` have different lengths.
    """
    weights = m.m if isinstance(m, WeightTuple) else _as_multi(m)
    a = _as_multi(alpha)
    if len(a) != len(weights):
        raise DimensionError(f"multi-index length {len(a)} != weight tuple length {len(weights)}")
    return sum((Fraction(aj, 2 * mj) for aj, mj in zip(a, weights)), Fraction(0))


def _monomial(w: np.ndarray, alpha: Multi) -> np.ndarray:
    """w^alpha over the last axis of ``w`` (shape (..., n))."""
    out = np.ones(w.shape[:-1], dtype=complex)
    for j, aj in enumerate(alpha):
        if aj:
            out = out * w[..., j] ** aj
    return out


@dataclass(frozen=True)
class HoloPolynomial:
    """A holomorphic polynomial ``sum_alpha c_alpha w^alpha`` in n variables.

    Terms are stored sorted with duplicate multi-indices merged and exact
    zeros dropped, so equal polynomials compare equal.
    """

    n: int
    terms: tuple[tuple[Multi, complex], ...]

    def __post_init__(self) -> None:
        merged: dict[Multi, complex] = {}
        for alpha, c in self.terms:
            a = _as_multi(alpha)
            if len(a) != self.n:
                raise DimensionError(f"term {a} does not have {self.n} variables")
            merged[a] = merged.get(a, 0.0) + complex(c)
        cleaned = tuple(sorted((a, c) for a, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", cleaned)

    def __call__(self, w: Sequence[complex] | np.ndarray) -> complex | np.ndarray:
        w = np.asarray(w, dtype=complex)
        if w.shape[-1:] != (self.n,):
            raise DimensionError(f"point has {w.shape[-1] if w.ndim else 0} coordinates, expected {self.n}")
        total = np.zeros(w.shape[:-1], dtype=complex)
        for alpha, c in self.terms:
            total = total + c * _monomial(w, alpha)
        return complex(total) if total.ndim == 0 else total

    def scaled(self, factor: complex) -> "HoloPolynomial":
        return HoloPolynomial(self.n, tuple((a, factor * c) for a, c in self.terms))

    @property
    def is_zero(self) -> bool:
        return not self.terms


def _hermitian_partner(alpha: Multi, beta: Multi, c: complex) -> tuple[Multi, Multi, complex]:
    return (beta, alpha, complex(c).conjugate())


def hermitian_complete(
    terms: Iterable[tuple[Sequence[int], Sequence[int], complex]],
) -> tuple[tuple[tuple[Multi, Multi, complex], ...], int]:
    """Merge duplicate (alpha, beta) keys and add any missing conjugate partners.

    Returns the completed term tuple together with the number of partner
    terms that had to be added.  Terms whose merged coefficient is zero are
    dropped.  A diagonal term (alpha == beta) with a non-real coefficient is
    rejected since no partner can repair it.
    """
    merged: dict[tuple[Multi, Multi], complex] = {}
    for alpha, beta, c in terms:
        key = (_as_multi(alpha), _as_multi(beta))
        if len(key[0]) != len(key[1]):
            raise DimensionError(f"alpha {key[0]} and beta {key[1]} differ in length")
        merged[key] = merged.get(key, 0.0) + complex(c)

    added = 0
    out: dict[tuple[Multi, Multi], complex] = {}
    for (alpha, beta), c in merged.items():
        if c == 0:
            continue
        if alpha == beta:
            if abs(c.imag) > 1e-14 * abs(c):
                raise InvalidPolynomialError(
                    f"diagonal term {alpha} has non-real coefficient {c}"
                )
            out[(alpha, beta)] = complex(c.real)
            continue
        if (beta, alpha) in out or (alpha, beta) in out:
            continue
        partner = merged.get((beta, alpha))
        if partner is None:
            pa, pb, pc = _hermitian_partner(alpha, beta, c)
            out[(alpha, beta)] = c
            out[(pa, pb)] = pc
            added += 1
        else:
            if abs(partner - c.conjugate()) > 1e-14 * max(abs(c), abs(partner)):
                raise InvalidPolynomialError(
                    f"terms {(alpha, beta)} and {(beta, alpha)} are not conjugate: "
                    f"{c} vs {partner}"
                )
            out[(alpha, beta)] = c
            out[(beta, alpha)] = partner
    flat = tuple((alpha, beta, c) for (alpha, beta), c in sorted(out.items()))
    return flat, added


def _sample_polydisc(n: int, rng: np.random.Generator, radius: float, count: int) -> np.ndarray:
    """Uniform sample of ``count`` points from the polydisc of the given radius."""
    u = rng.random((count, n))
    theta = rng.random((count, n)) * (2.0 * np.pi)
    return radius * np.sqrt(u) * np.exp(1j * theta)


@dataclass(frozen=True)
class BalancedPolynomial:
    """A balanced nonnegative polynomial with Hermitian coefficient data.

    Construction validates the full contract: every term has weight exactly
    1/2 in alpha and in beta, the term list is Hermitian-symmetric, and the
    polynomial is nonnegative on a fixed random sample of polydiscs.  All
    three checks raise an invalid-polynomial error on failure.
    """

    weights: WeightTuple
    terms: tuple[tuple[Multi, Multi, complex], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.weights, WeightTuple):
            object.__setattr__(self, "weights", WeightTuple(tuple(self.weights)))
        completed, added = hermitian_complete(self.terms)
        if added:
            raise InvalidPolynomialError(
                f"{added} conjugate partner term(s) missing; "
                "use balanced_from_json to complete a half-specified term list"
            )
        half = Fraction(1, 2)
        for alpha, beta, _ in completed:
            wa = weight_of(alpha, self.weights)
            wb = weight_of(beta, self.weights)
            if wa != half or wb != half:
                raise InvalidPolynomialError(
                    f"term ({alpha}, {beta}) has weights ({wa}, {wb}), expected (1/2, 1/2)"
                )
        object.__setattr__(self, "terms", completed)
        self._check_nonnegative()

    def _check_nonnegative(self) -> None:
        if not self.terms:
            return
        rng = np.random.default_rng(718281828)
        n = self.weights.n
        per_radius = -(-_NONNEG_SAMPLES // len(_NONNEG_RADII))
        worst = 0.0
        for radius in _NONNEG_RADII:
            w = _sample_polydisc(n, rng, radius, per_radius)
            values = self.eval_many(w)
            worst = min(worst, float(values.min()))
            if worst < _NONNEG_SLACK:
                raise InvalidPolynomialError(
                    f"polynomial takes value {worst} < 0 on the polydisc of radius {radius}"
                )

    @property
    def n(self) -> int:
        return self.weights.n

    # Evaluation groups each off-diagonal term with its conjugate partner and
    # sums 2*Re of one of them, so the result is real by construction and the
    # imaginary-part tolerance below is a genuine consistency check rather
    # than a source of noise.
    def _half_terms(self) -> tuple[tuple[Multi, Multi, complex, float], ...]:
        halves = []
        for alpha, beta, c in self.terms:
            if alpha == beta:
                halves.append((alpha, beta, c, 1.0))
            elif (alpha, beta) <= (beta, alpha):
                halves.append((alpha, beta, c, 2.0))
        return tuple(halves)

    def eval_many(self, w: np.ndarray) -> np.ndarray:
        """Evaluate at an array of points of shape (..., n); returns real values."""
        w = np.asarray(w, dtype=complex)
        if w.shape[-1:] != (self.n,):
            raise DimensionError(f"points have {w.shape[-1] if w.ndim else 0} coordinates, expected {self.n}")
        raw = np.zeros(w.shape[:-1], dtype=complex)
        scale = np.zeros(w.shape[:-1])
        wbar = np.conj(w)
        for alpha, beta, c, mult in self._half_terms():
            term = c * _monomial(w, alpha) * _monomial(wbar, beta)
            scale = scale + mult * np.abs(term)
            if mult == 2.0:
                raw = raw + 2.0 * term.real
            else:
                raw = raw + term
        # The yardstick for "real up to roundoff" is the term magnitude sum,
        # since the value itself vanishes on the zero set of p.
        bad = np.abs(raw.imag) > 1e-12 * np.maximum(np.abs(raw), scale)
        if np.any(bad):
            raise InvalidPolynomialError("evaluation produced a non-real value")
        return raw.real

    def __call__(self, w: Sequence[complex] | np.ndarray) -> float | np.ndarray:
        w = np.asarray(w, dtype=complex)
        out = self.eval_many(w)
        return float(out) if out.ndim == 0 else out

    @property
    def is_zero(self) -> bool:
        return not self.terms


def eval_p(p: BalancedPolynomial, w: Sequence[complex] | np.ndarray) -> float | np.ndarray:
    """Evaluate a balanced polynomial; the (tiny) imaginary part is discarded."""
    return p(w)


def diagonal_polynomial(m: Sequence[int] | WeightTuple) -> BalancedPolynomial:
    """The model polynomial ``sum_j |w_j|^(2 m_j)`` for a weight tuple."""
    weights = m if isinstance(m, WeightTuple) else WeightTuple(tuple(m))
    terms = []
    for j, mj in enumerate(weights.m):
        alpha = tuple(mj if k == j else 0 for k in range(weights.n))
        terms.append((alpha, alpha, 1.0 + 0.0j))
    return BalancedPolynomial(weights, tuple(terms))


def diagonal_coefficients(p: BalancedPolynomial) -> tuple[float, ...] | None:
    """Positive coefficients ``c_j`` when ``p = sum_j c_j |w_j|^(2 m_j)``, else None.

    Detecting this shape lets norm and kernel routines take exact
    tensor-product paths; anything else falls back to generic quadrature.
    """
    weights = p.weights
    found = [0.0] * weights.n
    for alpha, beta, c in p.terms:
        if alpha != beta:
            return None
        support = [j for j, aj in enumerate(alpha) if aj]
        if len(support) != 1:
            return None
        j = support[0]
        if alpha[j] != weights.m[j]:
            return None
        if abs(c.imag) > 0 or c.real <= 0:
            return None
        found[j] = c.real
    if any(cj == 0.0 for cj in found):
        return None
    return tuple(found)


def scale_point(theta: float, w: np.ndarray, m: WeightTuple) -> np.ndarray:
    """Apply ``w_j -> theta**(1/(2 m_j)) w_j`` for real theta > 0."""
    if theta <= 0:
        raise InvalidPolynomialError(f"scaling parameter must be positive, got {theta}")
    w = np.asarray(w, dtype=complex)
    factors = np.array([theta ** (1.0 / (2.0 * mj)) for mj in m.m])
    return w * factors


def check_scaling_identity(
    p: BalancedPolynomial,
    theta: float,
    w: Sequence[complex] | np.ndarray,
    tol: float = 1e-10,
) -> bool:
    """Verify ``p(theta^(1/2m) . w) == theta * p(w)`` to relative tolerance."""
    w = np.asarray(w, dtype=complex)
    lhs = p(scale_point(theta, w, p.weights))
    rhs = theta * p(w)
    err = np.max(np.abs(np.atleast_1d(lhs - rhs)))
    bound = tol * (1.0 + abs(theta) * np.max(np.abs(np.atleast_1d(rhs))))
    return bool(err <= bound)


@dataclass(frozen=True)
class HomogeneousParts:
    """Decomposition of a holomorphic polynomial into weight-homogeneous pieces.

    ``parts[k]`` collects the terms of weight ``k / scale``; the scale is the
    least common multiple of all weight denominators that actually occur, so
    the integer keys are exact.
    """

    scale: int
    parts: Mapping[int, HoloPolynomial]


def homogeneous_decompose(q: HoloPolynomial, m: WeightTuple) -> HomogeneousParts:
    """Split ``q`` into weight-homogeneous components under ``m``."""
    if q.n != m.n:
        raise DimensionError(f"polynomial has {q.n} variables, weight tuple has {m.n}")
    weights = {alpha: weight_of(alpha, m) for alpha, _ in q.terms}
    scale = m.big_M
    for wt in weights.values():
        scale = math.lcm(scale, wt.denominator)
    buckets: dict[int, list[tuple[Multi, complex]]] = {}
    for alpha, c in q.terms:
        key = int(weights[alpha] * scale)
        buckets.setdefault(key, []).append((alpha, c))
    parts = {k: HoloPolynomial(q.n, tuple(v)) for k, v in sorted(buckets.items())}
    return HomogeneousParts(scale=scale, parts=parts)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def balanced_to_json(p: BalancedPolynomial) -> dict:
    """Serialize to the {"m": [...], "terms": [...]} interchange form."""
    return {
        "m": list(p.weights.m),
        "terms": [
            {"alpha": list(alpha), "beta": list(beta), "c": [c.real, c.imag]}
            for alpha, beta, c in p.terms
        ],
    }


def balanced_from_json(obj: dict | str) -> tuple[BalancedPolynomial, int]:
    """Parse the interchange form, completing missing conjugate partners.

    Returns the polynomial and the number of partner terms that were added;
    callers that surface data to users should report a nonzero count.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "m" not in obj or "terms" not in obj:
        raise InvalidPolynomialError('polynomial JSON must have keys "m" and "terms"')
    weights = WeightTuple(tuple(int(v) for v in obj["m"]))
    raw_terms = []
    for entry in obj["terms"]:
        c = entry["c"]
        raw_terms.append((entry["alpha"], entry["beta"], complex(float(c[0]), float(c[1]))))
    completed, added = hermitian_complete(raw_terms)
    return BalancedPolynomial(weights, completed), added

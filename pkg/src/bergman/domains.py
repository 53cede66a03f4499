"""Domains, biholomorphisms, and automorphism groups.

Four regions are attached to a balanced polynomial p on C^n:

* the half-space ``U_p = {(z, w) : Im z > p(w)}`` in C^(1+n),
* its bounded model ``E_p = {|z|^2 + p(w) < 1}``,
* the base ``B_p = {p(w) < 1}`` in C^n,
* the cone-like region ``C_p = {(gamma, zeta) : Im gamma > p(zeta) |gamma|}``.

The Cayley-type map Lambda takes U_p onto E_p and the shear Psi takes U_p
onto C_p.  Both are triangular in (z, w), so their Jacobian determinants are
products of the diagonal entries; the closed forms below are validated
against finite differences in the test suite.  All fractional powers use the
principal branch, which is safe because every base point has Im z > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BranchCutError, DimensionError, DomainError
from .polynomials import BalancedPolynomial, WeightTuple, balanced_from_json, balanced_to_json

#: Relative slack below which a point counts as on the boundary, hence outside.
_BOUNDARY_TOL = 1e-14


@dataclass(frozen=True)
class DomainSpec:
    """A balanced polynomial together with its weight tuple.

    The weight tuple is shared with the polynomial; ``n`` is the number of
    fiber variables (0 gives the classical half-plane and disc).
    """

    p: BalancedPolynomial
    m: WeightTuple = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", self.p.weights)

    @property
    def n(self) -> int:
        return self.m.n

    @property
    def inv_mu(self) -> Fraction:
        return self.m.inv_mu

    @classmethod
    def from_json(cls, obj: dict | str) -> tuple["DomainSpec", int]:
        p, added = balanced_from_json(obj)
        return cls(p), added

    def to_json(self) -> dict:
        return balanced_to_json(self.p)


def _check_point(spec: DomainSpec, w) -> np.ndarray:
    w = np.asarray(w, dtype=complex).reshape(-1)
    if w.shape != (spec.n,):
        raise DimensionError(f"fiber point has {w.shape[0]} coordinates, expected {spec.n}")
    return w


# ---------------------------------------------------------------------------
# Membership predicates (strict; boundary counts as outside)
# ---------------------------------------------------------------------------

def in_Up(spec: DomainSpec, z: complex, w) -> bool:
    w = _check_point(spec, w)
    pw = float(spec.p(w)) if spec.n else 0.0
    margin = _BOUNDARY_TOL * max(1.0, abs(z), abs(pw))
    return z.imag - pw > margin


def in_Ep(spec: DomainSpec, z: complex, w) -> bool:
    w = _check_point(spec, w)
    pw = float(spec.p(w)) if spec.n else 0.0
    gap = 1.0 - (abs(z) ** 2 + pw)
    return gap > _BOUNDARY_TOL


def in_Bp(spec: DomainSpec, w) -> bool:
    w = _check_point(spec, w)
    pw = float(spec.p(w)) if spec.n else 0.0
    return 1.0 - pw > _BOUNDARY_TOL


def in_Cp(spec: DomainSpec, gamma: complex, zeta) -> bool:
    zeta = _check_point(spec, zeta)
    pz = float(spec.p(zeta)) if spec.n else 0.0
    margin = _BOUNDARY_TOL * max(1.0, abs(gamma))
    return gamma.imag - pz * abs(gamma) > margin


# ---------------------------------------------------------------------------
# The scaling map and the two biholomorphisms
# ---------------------------------------------------------------------------

def principal_power(base: complex | np.ndarray, exponent: float) -> complex | np.ndarray:
    """base**exponent on the principal branch; rejects the slit (-inf, 0]."""
    arr = np.asarray(base, dtype=complex)
    on_slit = (arr.real <= 0) & (np.abs(arr.imag) <= 1e-300 * np.maximum(1.0, np.abs(arr.real)))
    if np.any(on_slit):
        raise BranchCutError(f"principal power of {base} undefined on (-inf, 0]")
    out = np.exp(exponent * np.log(arr))
    return complex(out) if out.ndim == 0 else out


def rho_hat(gamma: complex, w, m: WeightTuple) -> np.ndarray:
    """Componentwise gamma^(1/(2 m_j)) w_j, principal branch.

    For real gamma = t > 0 this realizes p(rho_hat(t, w)) = t p(w).
    """
    w = np.asarray(w, dtype=complex).reshape(-1)
    if w.shape != (m.n,):
        raise DimensionError(f"point has {w.shape[0]} coordinates, expected {m.n}")
    factors = np.array([principal_power(gamma, 1.0 / (2.0 * mj)) for mj in m.m], dtype=complex)
    return factors * w


def lambda_map(spec: DomainSpec, z: complex, w) -> tuple[complex, np.ndarray]:
    """The Cayley-type map from U_p onto E_p.

    (z, w) goes to ((1 + iz/4)/(1 - iz/4), w_j (1 - iz/4)^(-1/m_j)).
    """
    w = _check_point(spec, w)
    if not in_Up(spec, z, w):
        raise DomainError(f"({z}, {w}) is not in U_p")
    d = 1.0 - 1j * z / 4.0
    zeta = (1.0 + 1j * z / 4.0) / d
    factors = np.array([principal_power(d, -1.0 / mj) for mj in spec.m.m], dtype=complex)
    return zeta, factors * w


def det_lambda_prime(spec: DomainSpec, z: complex) -> complex:
    """Jacobian determinant of the Cayley-type map.

    The map is triangular: dzeta/dz = (i/2)(1 - iz/4)^-2 and each fiber
    entry contributes (1 - iz/4)^(-1/m_j), so the determinant is
    (i/2)(1 - iz/4)^(-2 - 1/mu).
    """
    if z.imag <= 0:
        raise DomainError(f"z = {z} must have positive imaginary part")
    d = 1.0 - 1j * z / 4.0
    return (0.5j) * principal_power(d, -2.0 - float(spec.inv_mu))


def psi_map(spec: DomainSpec, z: complex, w) -> tuple[complex, np.ndarray]:
    """The shear (z, w) -> (z, rho_hat_{1/z}(w)) from U_p onto C_p."""
    w = _check_point(spec, w)
    if not in_Up(spec, z, w):
        raise DomainError(f"({z}, {w}) is not in U_p")
    return z, rho_hat(1.0 / z, w, spec.m)


def psi_inverse(spec: DomainSpec, gamma: complex, zeta) -> tuple[complex, np.ndarray]:
    """Inverse shear (gamma, zeta) -> (gamma, rho_hat_gamma(zeta))."""
    zeta = _check_point(spec, zeta)
    return gamma, rho_hat(gamma, zeta, spec.m)


def det_psi_prime(spec: DomainSpec, z: complex) -> complex:
    """Jacobian determinant of the shear: z^(-1/(2 mu))."""
    if z.imag <= 0:
        raise DomainError(f"z = {z} must have positive imaginary part")
    return principal_power(z, -0.5 * float(spec.inv_mu))


# ---------------------------------------------------------------------------
# Automorphisms
# ---------------------------------------------------------------------------

_KINDS = ("rotation", "translation", "scaling")


def automorphism_apply(
    spec: DomainSpec, kind: str, theta: float, z: complex, w
) -> tuple[complex, np.ndarray]:
    """Apply one of the three one-parameter families.

    rotation (on E_p):    (e^{i theta} z, w)
    translation (on U_p): (z + theta, w)
    scaling (on U_p):     (theta z, rho_hat_theta(w)), theta > 0
    """
    w = _check_point(spec, w)
    if kind == "rotation":
        return np.exp(1j * theta) * z, w
    if kind == "translation":
        return z + theta, w
    if kind == "scaling":
        if theta <= 0:
            raise DomainError(f"scaling parameter must be positive, got {theta}")
        return theta * z, rho_hat(theta, w, spec.m)
    raise DomainError(f"unknown automorphism kind {kind!r}; expected one of {_KINDS}")


def automorphism_det(spec: DomainSpec, kind: str, theta: float) -> complex:
    """Jacobian determinant of the automorphism (constant in the point)."""
    if kind == "rotation":
        return np.exp(1j * theta)
    if kind == "translation":
        return 1.0 + 0.0j
    if kind == "scaling":
        if theta <= 0:
            raise DomainError(f"scaling parameter must be positive, got {theta}")
        return complex(theta ** (1.0 + 0.5 * float(spec.inv_mu)))
    raise DomainError(f"unknown automorphism kind {kind!r}; expected one of {_KINDS}")


# ---------------------------------------------------------------------------
# Pullback
# ---------------------------------------------------------------------------

def pullback(f, phi, det_phi):
    """The weighted composition phi*f = (f o phi) * det phi'.

    ``phi`` maps (z, w) to an image pair, ``det_phi`` gives its Jacobian
    determinant at (z, w); both are ordinary callables.  Unitarity of this
    operation between the corresponding Bergman spaces is what the isometry
    tests downstream exercise.
    """

    def pulled(z: complex, w) -> complex:
        image_z, image_w = phi(z, w)
        return f(image_z, image_w) * det_phi(z, w)

    return pulled

"""Bergman-space transforms and reproducing kernels for polynomial half-spaces.

The package is organised around one geometric object, the half-space
U_p = {Im z > p(w)} attached to a balanced polynomial p, together with its
bounded model E_p and the sector bundle V_p.  Three layers sit on top:

* ``polynomials``, ``domains``, ``weights``: the defining data, the maps
  between the three models, and the fiber weights those maps induce.
* ``quad``, ``transforms1d``, ``transforms``: quadrature rules, the
  one-variable strip and sector transforms, and their multivariate
  extensions with norm identities and group equivariance.
* ``kernels``: reproducing kernels of the fiber spaces and of the full
  domains, computed by series, Fourier, and Mellin routes that can be
  cross-checked against each other and against closed forms.

The most commonly used names are re-exported here; the submodules remain
the authoritative home of each API.
"""

from bergman.errors import (
    AccuracyError,
    BergmanError,
    BranchCutError,
    ConditioningError,
    DimensionError,
    DivergenceError,
    DomainError,
    InvalidPolynomialError,
    NotInSpaceError,
)
from bergman.polynomials import (
    BalancedPolynomial,
    HoloPolynomial,
    WeightTuple,
    balanced_from_json,
    balanced_to_json,
    hermitian_complete,
)
from bergman.domains import (
    DomainSpec,
    det_lambda_prime,
    det_psi_prime,
    in_Bp,
    in_Ep,
    in_Up,
    lambda_map,
    psi_inverse,
    psi_map,
    rho_hat,
)
from bergman.weights import (
    NormResult,
    lambda_weight,
    log_lambda,
    log_omega,
    norm_Hp,
    norm_Xp,
    norm_Yp,
    omega,
)
from bergman.quad import (
    QuadratureResult,
    gaussian_weighted_Cn,
    integrate_Bp,
    integrate_halfline,
    integrate_line,
)
from bergman.transforms1d import (
    HoloFunction1D,
    Piece,
    Profile1D,
    exp_profile,
    sector_A2_norm_sq,
    sector_forward,
    sector_inverse,
    strip_A2_norm_sq,
    strip_forward,
    strip_inverse,
)
from bergman.transforms import (
    PolySequence,
    SpectralElement,
    T_compact,
    T_S_inverse,
    T_S_multi,
    T_S_numeric,
    T_V_multi,
    egg_norm_sq,
    equivariance_check,
    halfspace_norm_sq,
    isometry_pair,
    isometry_suite,
    sector_bundle_norm_sq,
)
from bergman.kernels import (
    KernelEstimate,
    bergman_fourier,
    bergman_mellin,
    bergman_series,
    ellipsoid_fiber_kernel,
    kernel_transport,
    lambda_fiber_kernel,
    monomial_gram_basis,
    oracle_kernel,
    segal_bargmann_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "BergmanError",
    "DimensionError",
    "InvalidPolynomialError",
    "DomainError",
    "BranchCutError",
    "DivergenceError",
    "NotInSpaceError",
    "AccuracyError",
    "ConditioningError",
    # polynomials
    "WeightTuple",
    "HoloPolynomial",
    "BalancedPolynomial",
    "hermitian_complete",
    "balanced_to_json",
    "balanced_from_json",
    # domains
    "DomainSpec",
    "in_Up",
    "in_Ep",
    "in_Bp",
    "rho_hat",
    "lambda_map",
    "det_lambda_prime",
    "psi_map",
    "psi_inverse",
    "det_psi_prime",
    # weights
    "omega",
    "log_omega",
    "lambda_weight",
    "log_lambda",
    "NormResult",
    "norm_Yp",
    "norm_Hp",
    "norm_Xp",
    # quadrature
    "QuadratureResult",
    "integrate_halfline",
    "integrate_line",
    "integrate_Bp",
    "gaussian_weighted_Cn",
    # one-variable transforms
    "Piece",
    "Profile1D",
    "exp_profile",
    "HoloFunction1D",
    "strip_forward",
    "strip_inverse",
    "strip_A2_norm_sq",
    "sector_forward",
    "sector_inverse",
    "sector_A2_norm_sq",
    # multivariate transforms
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
    # kernels
    "KernelEstimate",
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

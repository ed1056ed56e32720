"""Cross-verification toolkit for a conditionally solvable radial eigenproblem.

Two independent routes to the same spectrum are implemented and checked
against each other:

* terminating Frobenius series -- closed-form eigenpairs that exist only when
  the couplings satisfy a polynomial truncation condition;
* Rayleigh-Ritz diagonalization in a Gaussian-weighted power basis --
  variational spectral curves W_nu(a) that the terminating points must lie on.

The package exposes the core numerics (``model``, ``series``, ``truncation``,
``variational``), shared workflows (``workflows``), an HTTP service
(``api``) and a command-line client (``cli``).
"""

__version__ = "0.1.0"

from .errors import NumericalError, UsageError, VerificationError
from .model import (RadialModel, HeunParams, PhysicalParams,
                    RadialCoefficients, heun_from_radial, indicial_exponent,
                    radial_from_physical)
from .series import SeriesAnsatz, build_series, eval_wavefunction, ode_residual
from .truncation import (TruncationSolution, assemble_solution, real_roots,
                         truncation_energy, truncation_family,
                         truncation_polynomial_in_a)
from .variational import (gaussian_moment, generalized_eigensolve,
                          hellmann_feynman_check, match_points_to_curves,
                          spectral_curves)
from .workflows import (RunConfig, run_curves, run_figure, run_heun_roots,
                        run_truncate, run_verify)

__all__ = [
    "__version__",
    "NumericalError", "UsageError", "VerificationError",
    "PhysicalParams", "RadialCoefficients", "HeunParams", "RadialModel",
    "radial_from_physical", "indicial_exponent", "heun_from_radial",
    "SeriesAnsatz", "build_series", "eval_wavefunction", "ode_residual",
    "TruncationSolution", "truncation_energy", "truncation_polynomial_in_a",
    "real_roots", "assemble_solution", "truncation_family",
    "gaussian_moment", "generalized_eigensolve", "hellmann_feynman_check",
    "spectral_curves", "match_points_to_curves",
    "RunConfig", "run_truncate", "run_heun_roots", "run_curves",
    "run_figure", "run_verify",
]

"""Von Neumann and relative entropies of fermionic Gaussian states.

Submodules
----------
gaussian      covariance matrices, Bogoliubov diagonalization, entropies
fock          dense Jordan-Wigner reference implementation
excitations   closed forms for excitations of number-preserving vacua
rindler       Rindler spectrum, boost-mode transform, entropy quadrature
matrixio      JSON matrix exchange format
cli           command-line front end (``fermirel``)
"""

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InfiniteEntropy
from .gaussian import (
    BogoliubovTransform,
    CovarianceMatrix,
    OneParticleDensity,
    bogoliubov_diagonalize,
    covariance_from_density,
    density_from_covariance,
    partition_log,
    relative_entropy,
    relative_entropy_unitary,
    validate_covariance,
    von_neumann_entropy,
)

__all__ = [
    "DEFAULT_TOLERANCES",
    "Tolerances",
    "InfiniteEntropy",
    "BogoliubovTransform",
    "CovarianceMatrix",
    "OneParticleDensity",
    "bogoliubov_diagonalize",
    "covariance_from_density",
    "density_from_covariance",
    "partition_log",
    "relative_entropy",
    "relative_entropy_unitary",
    "validate_covariance",
    "von_neumann_entropy",
]

__version__ = "0.1.0"

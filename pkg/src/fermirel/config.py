from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by the Gaussian-state routines.

    Attributes
    ----------
    sym_rel : float
        Relative tolerance for the Hermiticity and self-duality checks; the
        absolute threshold is ``sym_rel * ||M||`` (spectral norm).
    diag : float
        Diagonalization residual tolerance, also used for eigenvalue pairing
        and kernel detection.
    num : float
        Tolerance for scalar identities (traces, entropy sign checks).
    eigen_clip : float
        Eigenvalue clipping used before taking ``log(T / (1 - T))``.
    """

    sym_rel: float = 1e-10
    diag: float = 1e-9
    num: float = 1e-8
    eigen_clip: float = 1e-12

    def with_(self, **kwargs) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT_TOLERANCES = Tolerances()

# first lambda that splits the kernel by more than 10 * diag wins
KERNEL_PERTURBATION_SCHEDULE = (1e-8, 1e-6, 1e-4)

FOCK_MAX_MODES = 6
FOCK_SUPPORT_THRESHOLD = 1e-13

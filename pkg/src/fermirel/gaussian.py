"""Covariance-matrix calculus for fermionic Gaussian states.

A Gaussian state on ``N`` modes is ``W = exp(-Q) / tr exp(-Q)`` with

    Q = sum_ij X_i^dagger C_ij X_j,     X = (psi_1..psi_N, psi_1^dagger..psi_N^dagger),

and ``C = [[A, B], [-conj(B), -conj(A)]]`` Hermitian with ``S C S = -conj(C)``,
``S`` the block swap. Its doubled one-particle density operator is

    T_jk = tr(W X_k^dagger X_j) = [exp(-C) / (2 cosh C)]_jk,

so the upper-left block of ``T`` holds the occupations ``<psi_k^dagger psi_j>``.
All matrix functions are evaluated on the Hermitian eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .config import DEFAULT_TOLERANCES, KERNEL_PERTURBATION_SCHEDULE, Tolerances
from .errors import (
    DegenerateKernel,
    InfiniteEntropy,
    InvalidDensity,
    NotHermitian,
    NotUnitarilyEquivalent,
    SelfDualViolation,
    SingularOccupation,
)


def swap_matrix(n_modes: int) -> np.ndarray:
    """Block swap ``S = [[0, 1], [1, 0]]`` of size ``2N``."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [eye, zero]])


def _matrix(x) -> np.ndarray:
    return np.asarray(getattr(x, "data", x), dtype=complex)


def _n_modes(m: np.ndarray) -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError(f"expected a square matrix of even dimension, got shape {m.shape}")
    return m.shape[0] // 2


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _self_dual_part(m: np.ndarray) -> np.ndarray:
    """Project onto ``S M S = -conj(M)``."""
    n = m.shape[0] // 2
    s = swap_matrix(n)
    return 0.5 * (m - s @ m.conj() @ s)


def hermitian_function(m, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Evaluate ``func(M)`` for Hermitian ``M`` by eigendecomposition."""
    w, v = np.linalg.eigh(_hermitize(_matrix(m)))
    return (v * func(w)) @ v.conj().T


def log2cosh(x):
    """``log(2 cosh x)`` without overflow."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CovarianceMatrix:
    """Validated ``2N x 2N`` covariance matrix; build with :func:`validate_covariance`."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _freeze(self.data))
        _n_modes(self.data)

    @property
    def n_modes(self) -> int:
        return self.data.shape[0] // 2

    @property
    def A(self) -> np.ndarray:
        n = self.n_modes
        return self.data[:n, :n]

    @property
    def B(self) -> np.ndarray:
        n = self.n_modes
        return self.data[:n, n:]

    @classmethod
    def from_blocks(cls, A, B=None) -> "CovarianceMatrix":
        A = np.atleast_2d(np.asarray(A, dtype=complex))
        B = np.zeros_like(A) if B is None else np.atleast_2d(np.asarray(B, dtype=complex))
        return validate_covariance(np.block([[A, B], [-B.conj(), -A.conj()]]))


@dataclass(frozen=True)
class OneParticleDensity:
    """Doubled reduced one-particle density operator ``T``."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _freeze(self.data))
        _n_modes(self.data)

    @property
    def n_modes(self) -> int:
        return self.data.shape[0] // 2


@dataclass(frozen=True)
class BogoliubovTransform:
    """Unitary ``[[U, V], [conj(V), conj(U)]]`` acting as ``X~ = U X``."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _freeze(self.data))
        _n_modes(self.data)

    @property
    def n_modes(self) -> int:
        return self.data.shape[0] // 2

    @property
    def U(self) -> np.ndarray:
        n = self.n_modes
        return self.data[:n, :n]

    @property
    def V(self) -> np.ndarray:
        n = self.n_modes
        return self.data[:n, n:]

    def conjugate(self, m) -> np.ndarray:
        """Return ``U M U^{-1}``."""
        return self.data @ _matrix(m) @ self.data.conj().T

    def unitarity_residual(self) -> float:
        u = self.data
        return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))

    def structure_residual(self) -> float:
        s = swap_matrix(self.n_modes)
        return float(np.max(np.abs(s @ self.data @ s - self.data.conj())))


def validate_covariance(m, tol: Tolerances = DEFAULT_TOLERANCES) -> CovarianceMatrix:
    """Check Hermiticity and self-duality of ``m`` and wrap it.

    Raises
    ------
    NotHermitian, SelfDualViolation
        ``violations`` on the exception lists every failed constraint with its
        max-abs residual.
    """
    m = _matrix(m)
    n = _n_modes(m)
    s = swap_matrix(n)
    threshold = tol.sym_rel * np.linalg.norm(m, 2)
    herm = float(np.max(np.abs(m - m.conj().T)))
    dual = float(np.max(np.abs(s @ m @ s + m.conj())))
    violations = []
    if herm > threshold:
        violations.append(("hermitian", herm))
    if dual > threshold:
        violations.append(("self_dual", dual))
    if violations:
        cls = NotHermitian if violations[0][0] == "hermitian" else SelfDualViolation
        detail = ", ".join(f"{name} residual {res:.3e}" for name, res in violations)
        raise cls(f"invalid covariance matrix: {detail}", violations)
    return CovarianceMatrix(m)


def validate_density(t, tol: Tolerances = DEFAULT_TOLERANCES) -> OneParticleDensity:
    """Check the one-particle density invariants (Hermitian, spectrum in [0, 1], pairing)."""
    t = _matrix(t)
    n = _n_modes(t)
    s = swap_matrix(n)
    threshold = tol.sym_rel * max(np.linalg.norm(t, 2), 1.0)
    herm = float(np.max(np.abs(t - t.conj().T)))
    if herm > threshold:
        raise InvalidDensity(f"T is not Hermitian (residual {herm:.3e})")
    pairing = float(np.max(np.abs(s @ t.conj() @ s + t - np.eye(2 * n))))
    if pairing > threshold:
        raise InvalidDensity(f"T violates S conj(T) S = 1 - T (residual {pairing:.3e})")
    w = np.linalg.eigvalsh(_hermitize(t))
    if w[0] < -tol.num or w[-1] > 1 + tol.num:
        raise InvalidDensity(f"T has eigenvalues outside [0, 1]: [{w[0]:.3e}, {w[-1]:.3e}]")
    return OneParticleDensity(t)


def _as_covariance(c, tol: Tolerances) -> CovarianceMatrix:
    return c if isinstance(c, CovarianceMatrix) else validate_covariance(c, tol)


def _as_density(t, tol: Tolerances) -> OneParticleDensity:
    return t if isinstance(t, OneParticleDensity) else validate_density(t, tol)


def _default_perturbations(n: int) -> list:
    # diag(1..N) first; a fixed generic Hermitian matrix covers kernels spanned by
    # self-conjugate (Majorana-like) vectors, on which every real diagonal D vanishes
    rng = np.random.default_rng(20240531)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return [np.diag(np.arange(1.0, n + 1)), 0.5 * (g + g.conj().T)]


def _split_kernel(h, kernel, tol, perturbations, schedule):
    n = h.shape[0] // 2
    m = kernel.shape[1] // 2
    for d in perturbations:
        d = np.asarray(d, dtype=complex)
        delta = np.block([[d, np.zeros((n, n))], [np.zeros((n, n)), -d.conj()]])
        for lam in schedule:
            r = _hermitize(kernel.conj().T @ (h + lam * delta) @ kernel)
            w, y = np.linalg.eigh(r)
            if np.min(np.abs(w)) > 10 * tol.diag and np.count_nonzero(w > 0) == m:
                return kernel @ y[:, w > 0][:, ::-1]
    raise DegenerateKernel(
        f"perturbation schedule failed to split a {2 * m}-dimensional kernel"
    )


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    lead = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(lead) / lead)


def bogoliubov_diagonalize(
    c,
    tol: Tolerances = DEFAULT_TOLERANCES,
    perturbations: Optional[Sequence[np.ndarray]] = None,
    schedule: Sequence[float] = KERNEL_PERTURBATION_SCHEDULE,
) -> Tuple[BogoliubovTransform, np.ndarray]:
    """Diagonalize a covariance matrix by a Bogoliubov transformation.

    Returns ``(U, c)`` with ``U C U^{-1} = diag(c_1..c_N, -c_1..-c_N)``,
    ``c`` non-negative and sorted descending. Eigenvectors for positive
    eigenvalues come from the Hermitian eigensolver; each negative partner is
    built as ``S conj(psi)``, so the block structure of ``U`` holds by
    construction.

    A kernel of ``C`` is split inside the kernel subspace by the perturbation
    ``lam * diag(D, -conj(D))`` for each ``D`` in ``perturbations`` and each
    ``lam`` in ``schedule``; the first choice opening a gap larger than
    ``10 * tol.diag`` wins. The resulting ``U`` diagonalizes the unperturbed
    ``C`` exactly.

    Raises
    ------
    DegenerateKernel
        If no perturbation splits the kernel.
    """
    cov = _as_covariance(c, tol)
    h = _hermitize(cov.data)
    n = cov.n_modes
    s = swap_matrix(n)
    w, v = np.linalg.eigh(h)
    ktol = tol.diag * max(1.0, float(np.max(np.abs(w))))

    m = 0
    while m < n and max(abs(w[n - 1 - m]), abs(w[n + m])) <= ktol:
        m += 1

    psi = v[:, n + m:][:, ::-1]
    energies = w[n + m:][::-1]
    if m:
        if perturbations is None:
            perturbations = _default_perturbations(n)
        kernel = v[:, n - m:n + m]
        psi = np.hstack([psi, _split_kernel(h, kernel, tol, perturbations, schedule)])
        energies = np.concatenate([energies, np.zeros(m)])

    psi = _fix_phase(psi)
    cols = np.hstack([psi, s @ psi.conj()])
    # polar cleanup; keeps S conj(M) S = M since M^* M shares that symmetry
    g = _hermitize(cols.conj().T @ cols)
    gw, gv = np.linalg.eigh(g)
    cols = cols @ ((gv / np.sqrt(gw)) @ gv.conj().T)
    return BogoliubovTransform(cols.conj().T), np.maximum(energies, 0.0)


def covariance_from_spectrum(transform, energies) -> CovarianceMatrix:
    """Inverse of :func:`bogoliubov_diagonalize`: ``U^{-1} diag(c, -c) U``."""
    u = _matrix(transform)
    e = np.asarray(energies, dtype=float)
    m = (u.conj().T * np.concatenate([e, -e])) @ u
    return CovarianceMatrix(_self_dual_part(_hermitize(m)))


def _paired_density(t: np.ndarray) -> np.ndarray:
    n = t.shape[0] // 2
    s = swap_matrix(n)
    return _hermitize(0.5 * (t + np.eye(2 * n) - s @ t.conj() @ s))


def density_from_covariance(c, tol: Tolerances = DEFAULT_TOLERANCES) -> OneParticleDensity:
    """``T = exp(-C) / (2 cosh C)``, i.e. ``x -> 1 / (1 + exp(2x))`` on the spectrum."""
    cov = _as_covariance(c, tol)
    t = hermitian_function(cov.data, lambda x: special.expit(-2.0 * x))
    return OneParticleDensity(_paired_density(t))


def covariance_from_density(
    t,
    eigen_clip: Optional[float] = None,
    strict: bool = False,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CovarianceMatrix:
    """``C = -(1/2) log(T / (1 - T))`` with eigenvalues clipped to ``[eps, 1 - eps]``.

    With ``strict=True`` an eigenvalue that would need clipping raises
    :class:`SingularOccupation` instead.
    """
    eps = tol.eigen_clip if eigen_clip is None else eigen_clip
    dens = _as_density(t, tol)
    w, v = np.linalg.eigh(_hermitize(dens.data))
    if strict and (np.any(w <= eps) or np.any(w >= 1 - eps)):
        raise SingularOccupation("T has eigenvalues at 0 or 1; the covariance is unbounded")
    x = -0.5 * special.logit(np.clip(w, eps, 1 - eps))
    c = (v * x) @ v.conj().T
    return CovarianceMatrix(_self_dual_part(_hermitize(c)))


def von_neumann_entropy(t) -> float:
    """``-tr(T log T)`` over all ``2N`` eigenvalues, with ``0 log 0 = 0``."""
    w = np.clip(np.linalg.eigvalsh(_hermitize(_matrix(t))), 0.0, 1.0)
    return float(np.sum(special.entr(w)))


def partition_log(c, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``log tr exp(-Q) = (1/2) sum_i log(2 cosh x_i) = sum_k log(2 cosh c_k)``."""
    cov = _as_covariance(c, tol)
    return float(0.5 * np.sum(log2cosh(np.linalg.eigvalsh(_hermitize(cov.data)))))


def relative_entropy(
    t,
    t0,
    c0=None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Relative entropy ``S(W || W0)`` from one-particle density operators.

    Evaluates ``tr T(log T - log T0) - tr (T - T0) log(2 cosh C0)``. Without
    ``c0`` the last factor is taken as ``-(1/2) log(T0 (1 - T0))``, which is the
    same function of ``T0`` and stays finite when ``T0`` is pure.

    Returns an :class:`InfiniteEntropy` when ``T`` has weight on an eigenvector
    of ``T0`` with eigenvalue 0.
    """
    tm = _hermitize(_matrix(t))
    t0m = _hermitize(_matrix(t0))
    t_log_t = -float(np.sum(special.entr(np.clip(np.linalg.eigvalsh(tm), 0.0, 1.0))))

    p, u0 = np.linalg.eigh(t0m)
    p = np.clip(p, 0.0, 1.0)
    weights = np.real(np.einsum("ij,ik,kj->j", u0.conj(), tm, u0))
    zero = p < tol.eigen_clip
    one = p > 1 - tol.eigen_clip
    if np.any(weights[zero] > tol.diag):
        return InfiniteEntropy("T has weight where T0 vanishes")

    regular = ~(zero | one)
    if c0 is not None:
        cross = float(np.sum(weights[regular] * np.log(p[regular])))
        l0 = hermitian_function(c0, log2cosh)
        return t_log_t - cross - float(np.real(np.trace((tm - t0m) @ l0)))

    # per eigenvector: -w log p + (w - p)/2 * log(p (1 - p)); singular ones drop out
    pr, wr = p[regular], weights[regular]
    terms = -wr * np.log(pr) + 0.5 * (wr - pr) * (np.log(pr) + np.log1p(-pr))
    return t_log_t + float(np.sum(terms))


def relative_entropy_via_entropies(t, t0, c0=None, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``-S(W) + S(W0) + tr (T - T0) C0``."""
    tm, t0m = _matrix(t), _matrix(t0)
    if c0 is None:
        c0 = covariance_from_density(t0m, tol=tol)
    cross = float(np.real(np.trace((tm - t0m) @ _matrix(c0))))
    return -von_neumann_entropy(tm) + von_neumann_entropy(t0m) + cross


def relative_entropy_unitary(t, t0, c0=None, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``tr (T - T0) C0``, valid when ``T`` and ``T0`` are unitarily equivalent.

    Raises
    ------
    NotUnitarilyEquivalent
        If the sorted spectra of ``T`` and ``T0`` differ by more than ``tol.diag``.
    """
    tm, t0m = _hermitize(_matrix(t)), _hermitize(_matrix(t0))
    gap = float(np.max(np.abs(np.linalg.eigvalsh(tm) - np.linalg.eigvalsh(t0m))))
    if gap > tol.diag:
        raise NotUnitarilyEquivalent(f"spectra of T and T0 differ by {gap:.3e}")
    if c0 is None:
        c0 = covariance_from_density(t0m, tol=tol)
    return float(np.real(np.trace((tm - t0m) @ _matrix(c0))))


def random_covariance(rng: np.random.Generator, n_modes: int, scale: float = 1.0) -> CovarianceMatrix:
    """Random valid covariance matrix with spectral norm ``scale``.

    ``A`` is a symmetrized complex Gaussian matrix and ``B`` an antisymmetrized one.
    """
    def gauss():
        return rng.standard_normal((n_modes, n_modes)) + 1j * rng.standard_normal((n_modes, n_modes))

    a = gauss()
    a = 0.5 * (a + a.conj().T)
    b = gauss()
    b = 0.5 * (b - b.T)
    m = np.block([[a, b], [-b.conj(), -a.conj()]])
    norm = np.linalg.norm(m, 2)
    if norm > 0:
        m = m * (scale / norm)
    return CovarianceMatrix(m)


def random_bogoliubov(rng: np.random.Generator, n_modes: int, scale: float = np.pi) -> BogoliubovTransform:
    """``exp(iK)`` for a random covariance-type generator ``K``."""
    k = random_covariance(rng, n_modes, scale).data
    return BogoliubovTransform(hermitian_function(k, lambda x: np.exp(1j * x)))

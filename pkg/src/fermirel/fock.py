"""Brute-force Fock-space reference for N fermionic modes.

Field operators are Jordan-Wigner matrices on ``(C^2)^{(x)N}`` with mode 1 the
leftmost tensor factor and the single-mode basis ordered ``(|0>, |1>)``.
Everything here is dense linear algebra and meant for ``N <= 6``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy import special

from .config import FOCK_MAX_MODES, FOCK_SUPPORT_THRESHOLD
from .errors import DimensionTooLarge, InfiniteEntropy, NotNormalized

_ANNIHILATE = np.array([[0.0, 1.0], [0.0, 0.0]])
_PARITY = np.diag([1.0, -1.0])


def check_mode_count(n_modes: int, max_modes: int = FOCK_MAX_MODES) -> None:
    if n_modes < 1:
        raise ValueError("need at least one mode")
    if n_modes > max_modes:
        raise DimensionTooLarge(
            f"{n_modes} modes exceed the Fock oracle limit of {max_modes} "
            f"(dimension 2^{n_modes})"
        )


@lru_cache(maxsize=None)
def _annihilators(n_modes: int) -> np.ndarray:
    ops = []
    for k in range(n_modes):
        op = np.ones((1, 1))
        for j in range(n_modes):
            factor = _PARITY if j < k else (_ANNIHILATE if j == k else np.eye(2))
            op = np.kron(op, factor)
        ops.append(op)
    out = np.array(ops, dtype=complex)
    out.setflags(write=False)
    return out


def jordan_wigner_field_ops(n_modes: int, max_modes: int = FOCK_MAX_MODES) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Return ``[(psi_k, psi_k^dagger)]`` for ``k = 1..N``.

    >>> (psi, psi_dag), = jordan_wigner_field_ops(1)
    >>> psi.real.tolist()
    [[0.0, 1.0], [0.0, 0.0]]
    """
    check_mode_count(n_modes, max_modes)
    return [(a.copy(), a.conj().T.copy()) for a in _annihilators(n_modes)]


def doubled_fields(n_modes: int, max_modes: int = FOCK_MAX_MODES) -> np.ndarray:
    """Stack ``X = (psi_1..psi_N, psi_1^dagger..psi_N^dagger)``, shape ``(2N, 2^N, 2^N)``."""
    check_mode_count(n_modes, max_modes)
    a = _annihilators(n_modes)
    return np.concatenate([a, a.conj().transpose(0, 2, 1)])


def parity_operator(n_modes: int) -> np.ndarray:
    p = np.ones((1, 1))
    for _ in range(n_modes):
        p = np.kron(p, _PARITY)
    return p


def quadratic_form(c) -> np.ndarray:
    """``Q = sum_ij X_i^dagger C_ij X_j`` as a ``2^N x 2^N`` matrix."""
    c = np.asarray(getattr(c, "data", c), dtype=complex)
    x = doubled_fields(c.shape[0] // 2)
    xdag = x.conj().transpose(0, 2, 1)
    return np.einsum("iab,ij,jbc->ac", xdag, c, x)


def _exp_neg(q: np.ndarray):
    w, v = np.linalg.eigh(0.5 * (q + q.conj().T))
    shift = w[0]
    weights = np.exp(-(w - shift))
    return w, v, weights, shift


def fock_partition_log(c) -> float:
    """``log tr exp(-Q)`` by direct diagonalization of ``Q``."""
    _, _, weights, shift = _exp_neg(quadratic_form(c))
    return float(-shift + np.log(np.sum(weights)))


def gaussian_density_matrix(c) -> np.ndarray:
    """``W = exp(-Q) / tr exp(-Q)``."""
    _, v, weights, _ = _exp_neg(quadratic_form(c))
    w = (v * (weights / np.sum(weights))) @ v.conj().T
    return 0.5 * (w + w.conj().T)


def number_preserving_density(occupations) -> np.ndarray:
    """Product state with ``<psi_n^dagger psi_n> = d_n``; ``d_n`` may be 0 or 1."""
    d = np.asarray(occupations, dtype=float)
    check_mode_count(d.size)
    w = np.ones((1, 1))
    for dn in d:
        w = np.kron(w, np.diag([1.0 - dn, dn]))
    return w.astype(complex)


def check_density_matrix(w, tol: float = 1e-12) -> None:
    """Raise ``ValueError`` unless ``w`` is Hermitian, PSD and unit-trace within ``tol``."""
    w = np.asarray(w)
    if np.max(np.abs(w - w.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(w) - 1.0) > tol:
        raise ValueError(f"density matrix trace is {np.trace(w).real!r}")
    if np.linalg.eigvalsh(0.5 * (w + w.conj().T))[0] < -tol:
        raise ValueError("density matrix is not positive semi-definite")


def _mode_count(w: np.ndarray) -> int:
    n = int(round(np.log2(w.shape[0])))
    if 2 ** n != w.shape[0]:
        raise ValueError(f"dimension {w.shape[0]} is not a power of two")
    return n


def excitation_operator(f) -> np.ndarray:
    """``psi^dagger(f) + psi(conj f) = sum_k f_k psi_k^dagger + conj(f_k) psi_k``."""
    f = np.asarray(f, dtype=complex).ravel()
    check_mode_count(f.size)
    a = _annihilators(f.size)
    adag = a.conj().transpose(0, 2, 1)
    return np.einsum("k,kab->ab", f, adag) + np.einsum("k,kab->ab", f.conj(), a)


def excitation_unitary(f, tol: float = 1e-12) -> np.ndarray:
    """``U = psi^dagger(f) + psi(conj f)`` for normalized ``f``; ``U = U^* = U^{-1}``."""
    f = np.asarray(f, dtype=complex).ravel()
    norm = np.linalg.norm(f)
    if abs(norm - 1.0) > tol:
        raise NotNormalized(f"|f| = {norm!r}, expected 1")
    return excitation_operator(f)


def excited_density(w0, f) -> np.ndarray:
    """``U W0 U^*`` for the unitary single-mode excitation."""
    u = excitation_unitary(f)
    return u @ np.asarray(w0) @ u.conj().T


def nonunitary_excited_density(w0, f) -> np.ndarray:
    """``(1 + B) W0 (1 + B) / (1 + |f|^2)`` with ``B = psi(conj f) + psi^dagger(f)``.

    ``f`` is not normalized. The normalization ``1 + |f|^2`` assumes ``W0`` is
    parity-even, which holds for every Gaussian state. The result carries
    parity-odd coherences; see :func:`even_part`.
    """
    w0 = np.asarray(w0, dtype=complex)
    f = np.asarray(f, dtype=complex).ravel()
    b = excitation_operator(f)
    g = np.eye(w0.shape[0]) + b
    w = g @ w0 @ g.conj().T / (1.0 + np.vdot(f, f).real)
    return 0.5 * (w + w.conj().T)


def even_part(w) -> np.ndarray:
    """Restriction to parity-even observables, ``(W + P W P) / 2``."""
    w = np.asarray(w)
    p = parity_operator(_mode_count(w))
    return 0.5 * (w + p @ w @ p)


def oracle_von_neumann(w) -> float:
    """``-tr(W log W)``."""
    ev = np.clip(np.linalg.eigvalsh(0.5 * (w + np.conj(w).T)), 0.0, 1.0)
    return float(np.sum(special.entr(ev)))


def oracle_relative_entropy(w, w0, threshold: float = FOCK_SUPPORT_THRESHOLD) -> float:
    """``tr W (log W - log W0)``; :class:`InfiniteEntropy` if ``supp W`` is not inside ``supp W0``."""
    w = 0.5 * (np.asarray(w) + np.conj(w).T)
    w0 = 0.5 * (np.asarray(w0) + np.conj(w0).T)
    p, u = np.linalg.eigh(w0)
    weights = np.real(np.einsum("ij,ik,kj->j", u.conj(), w, u))
    null = p < threshold
    if np.any(weights[null] > threshold):
        return InfiniteEntropy("W has weight outside the support of W0")
    cross = float(np.sum(weights[~null] * np.log(p[~null])))
    return -oracle_von_neumann(w) - cross


def oracle_reduced_density(w) -> np.ndarray:
    """``T_jk = tr(W X_k^dagger X_j)`` in the ``(psi, psi^dagger)`` doubling."""
    w = np.asarray(w, dtype=complex)
    x = doubled_fields(_mode_count(w))
    xdag = x.conj().transpose(0, 2, 1)
    # tr(W X_k^dag X_j) = sum W_ab (X_k^dag)_bc (X_j)_ca
    return np.einsum("ab,kbc,jca->jk", w, xdag, x)

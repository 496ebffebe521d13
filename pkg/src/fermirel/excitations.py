"""Closed-form relative entropies of excitations over number-preserving vacua."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import special

from .errors import InfiniteEntropy, NotNormalized


@dataclass(frozen=True)
class VacuumSpectrum:
    """Occupations ``d_n`` of a particle-number preserving vacuum."""

    d: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.d, dtype=float))
        if d.ndim != 1 or d.size == 0:
            raise ValueError("occupations must be a non-empty vector")
        if np.any(d < 0) or np.any(d > 1):
            raise ValueError("occupations must lie in [0, 1]")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n_modes(self) -> int:
        return self.d.size

    @property
    def s(self) -> np.ndarray:
        """``log((1 - d) / d)``; ``+inf`` at ``d = 0`` and ``-inf`` at ``d = 1``."""
        with np.errstate(divide="ignore"):
            return -special.logit(self.d)

    def reflected(self) -> "VacuumSpectrum":
        return VacuumSpectrum(1.0 - self.d)


@dataclass(frozen=True)
class ExcitationProfile:
    f: np.ndarray

    def __post_init__(self):
        f = np.atleast_1d(np.asarray(self.f, dtype=complex))
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.f, self.f).real)


def excite_relative_entropy(vac, f, tol: float = 1e-12) -> float:
    """Relative entropy of ``U W0 U^*`` with respect to ``W0``.

    ``sum_k |f_k|^2 s_k (1 - 2 d_k)``. Modes with ``d_k`` in ``{0, 1}`` contribute
    nothing when ``f_k = 0`` and make the entropy infinite otherwise.

    Parameters
    ----------
    vac : VacuumSpectrum or array_like
        Vacuum occupations.
    f : ExcitationProfile or array_like
        Excitation mode, normalized to 1 within ``tol``.
    """
    vac = vac if isinstance(vac, VacuumSpectrum) else VacuumSpectrum(vac)
    prof = f if isinstance(f, ExcitationProfile) else ExcitationProfile(f)
    if prof.f.size != vac.n_modes:
        raise ValueError(f"profile has {prof.f.size} entries for {vac.n_modes} modes")
    if abs(math.sqrt(prof.norm_sq) - 1.0) > tol:
        raise NotNormalized(f"|f| = {math.sqrt(prof.norm_sq)!r}, expected 1")

    weight = np.abs(prof.f) ** 2
    pure = (vac.d == 0) | (vac.d == 1)
    if np.any(weight[pure] > 0):
        return InfiniteEntropy("excitation touches a mode with occupation 0 or 1")
    live = ~pure
    d = vac.d[live]
    return float(np.sum(weight[live] * vac.s[live] * (1.0 - 2.0 * d)))


def nonunitary_T_matrices(lam: float, f_norm_sq: float) -> Tuple[np.ndarray, np.ndarray]:
    """Excited and vacuum density operators on ``span{f, conj f}``.

    Both are diagonal; the excited one interpolates from ``diag(lam, 1 - lam)``
    at ``|f|^2 = 0`` to ``diag(1 - lam, lam)`` as ``|f|^2 -> inf``.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if f_norm_sq < 0:
        raise ValueError("|f|^2 must be non-negative")
    t0 = np.diag([lam, 1.0 - lam])
    if math.isinf(f_norm_sq):
        return np.diag([1.0 - lam, lam]), t0
    x = float(f_norm_sq)
    t = np.diag([lam + (1.0 - lam) * x, (1.0 - lam) + lam * x]) / (1.0 + x)
    return t, t0


def nonunitary_relative_entropy(lam: float, f_norm_sq: float) -> float:
    """``tr T (log T - log T0)`` for the matrices of :func:`nonunitary_T_matrices`.

    The trace-free difference ``T - T0`` removes the ``log(2 cosh C0)`` term, so
    this is a two-point Kullback-Leibler divergence.
    """
    t, t0 = nonunitary_T_matrices(lam, f_norm_sq)
    p, q = np.diag(t), np.diag(t0)
    return float(np.sum(special.rel_entr(p, q)))


def nonunitary_limit(lam: float) -> float:
    """``(1 - 2 lam) log((1 - lam) / lam)``, the ``|f| -> inf`` value."""
    return float((1.0 - 2.0 * lam) * -special.logit(lam))

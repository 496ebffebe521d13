"""Rindler-wedge spectrum, boost-mode transform and single-excitation entropies.

Modes are delta-normalized in the boost momentum ``ell``, so none of the
formulas below depend on the particle mass. Boost-space profiles are
normalized by ``int |f(ell)|^2 d ell``.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy import integrate, special

from . import excitations
from .errors import GridTooCoarse, ProfileError, QuadratureNotConverged, SupportViolation

RINDLER_BETA = 4.0 * math.pi


def lambda_spectrum(ell):
    """Eigenvalue ``1 / (1 + exp(4 pi ell))`` of the reduced density operator."""
    out = special.expit(-RINDLER_BETA * np.asarray(ell, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def gram_coefficient(region: str, ell):
    """Coefficient of ``delta(ell - ell')`` in the plane-wave scalar product.

    ``8 pi^2`` on the full Minkowski line and ``4 pi^2 (1 - tanh(2 pi ell))`` on
    the Rindler half line.
    """
    region = region.lower()
    ell = np.asarray(ell, dtype=float)
    if region == "minkowski":
        out = np.full(ell.shape, 8.0 * math.pi ** 2)
    elif region == "rindler":
        out = 4.0 * math.pi ** 2 * (1.0 - np.tanh(2.0 * math.pi * ell))
    else:
        raise ValueError(f"unknown region {region!r}; expected 'minkowski' or 'rindler'")
    return float(out) if out.ndim == 0 else out


def mode_relative_entropy(ell):
    """Entropy ``4 pi ell tanh(2 pi ell)`` of a unit excitation of the single mode ``ell``."""
    ell = np.asarray(ell, dtype=float)
    out = RINDLER_BETA * ell * np.tanh(2.0 * math.pi * ell)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class OccupationLaw:
    """Occupation function ``eta(ell)`` of a number-preserving vacuum.

    Use the constructors: :meth:`rindler_vacuum`, :meth:`thermal`,
    :meth:`zero_temperature`, :meth:`infinite_temperature`, :meth:`custom`.
    """

    kind: str
    beta: Optional[float] = None
    func: Optional[Callable[[float], float]] = field(default=None, compare=False)

    @classmethod
    def rindler_vacuum(cls) -> "OccupationLaw":
        return cls("rindler_vacuum", RINDLER_BETA)

    @classmethod
    def thermal(cls, beta: float) -> "OccupationLaw":
        if not beta > 0:
            raise ValueError("inverse temperature must be positive")
        return cls("thermal", float(beta))

    @classmethod
    def zero_temperature(cls) -> "OccupationLaw":
        return cls("zero_temperature")

    @classmethod
    def infinite_temperature(cls) -> "OccupationLaw":
        return cls("infinite_temperature")

    @classmethod
    def custom(cls, func: Callable[[float], float]) -> "OccupationLaw":
        return cls("custom", func=func)


def occupation_eta(law: OccupationLaw, ell) -> float:
    """Evaluate ``eta(ell)``; the zero-temperature step takes the value 1/2 at 0."""
    ell = float(ell)
    if law.kind in ("rindler_vacuum", "thermal"):
        value = float(special.expit(-law.beta * ell))
    elif law.kind == "zero_temperature":
        value = 1.0 if ell < 0 else (0.0 if ell > 0 else 0.5)
    elif law.kind == "infinite_temperature":
        value = 0.5
    elif law.kind == "custom":
        value = float(law.func(ell))
    else:
        raise ValueError(f"unknown occupation law {law.kind!r}")
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"eta({ell}) = {value} lies outside [0, 1]")
    return value


def general_vacuum_excitation_entropy(law: OccupationLaw, ell: float, f_norm_sq: float) -> float:
    """Non-unitary excitation entropy for an eigenmode of ``eta(H_R)`` at ``ell``.

    Raises
    ------
    SupportViolation
        If ``eta(ell)`` is 0 or 1.
    """
    lam = occupation_eta(law, ell)
    if lam in (0.0, 1.0):
        raise SupportViolation(f"eta({ell}) = {lam}: the vacuum is pure on this mode")
    return excitations.nonunitary_relative_entropy(lam, f_norm_sq)


# -- profiles -----------------------------------------------------------------


@dataclass(frozen=True)
class BoostModeProfile:
    """Samples ``f(ell)`` on a strictly increasing grid."""

    ell: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ell = np.asarray(self.ell, dtype=float).ravel()
        values = np.asarray(self.values, dtype=complex).ravel()
        _check_grid(ell, values, "ell")
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "values", values)

    def norm_sq(self) -> float:
        return float(integrate.simpson(np.abs(self.values) ** 2, x=self.ell))


@dataclass(frozen=True)
class GaussianBoostProfile:
    """``f(ell) = sqrt(norm) (2 pi w^2)^(-1/4) exp(-(ell - center)^2 / (4 w^2))``.

    ``|f|^2`` is a normal density with standard deviation ``width`` scaled by ``norm``.
    """

    center: float
    width: float
    norm: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("width must be positive")
        if self.norm < 0:
            raise ValueError("norm must be non-negative")

    def __call__(self, ell):
        ell = np.asarray(ell, dtype=float)
        amp = math.sqrt(self.norm) * (2.0 * math.pi * self.width ** 2) ** -0.25
        return amp * np.exp(-((ell - self.center) ** 2) / (4.0 * self.width ** 2))

    def norm_sq(self) -> float:
        return float(self.norm)

    def half_width(self, rel: float = 1e-14) -> float:
        """Distance from the center where ``|f|^2`` drops to ``rel`` times its peak."""
        return self.width * math.sqrt(2.0 * math.log(1.0 / rel))

    def sample(self, ell) -> BoostModeProfile:
        return BoostModeProfile(np.asarray(ell, dtype=float), self(ell))


@dataclass(frozen=True)
class RapidityProfile:
    """Samples ``f(theta)`` on a uniform rapidity grid with negligible endpoints."""

    theta: np.ndarray
    values: np.ndarray
    edge_tol: float = 1e-12

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float).ravel()
        values = np.asarray(self.values, dtype=complex).ravel()
        _check_grid(theta, values, "theta")
        steps = np.diff(theta)
        if np.max(np.abs(steps - steps[0])) > 1e-9 * abs(steps[0]):
            raise ProfileError("theta grid must be uniform")
        peak = np.max(np.abs(values))
        if peak > 0 and max(abs(values[0]), abs(values[-1])) > self.edge_tol * peak:
            raise ProfileError("profile is not negligible at the ends of the theta grid")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "values", values)

    @property
    def step(self) -> float:
        return float(self.theta[1] - self.theta[0])


def _check_grid(grid, values, name):
    if grid.size < 2:
        raise ProfileError(f"profile needs at least two {name} samples")
    if grid.shape != values.shape:
        raise ProfileError(f"{grid.size} {name} points but {values.size} values")
    if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
        raise ProfileError("profile contains non-finite entries")
    if np.any(np.diff(grid) <= 0):
        raise ProfileError(f"{name} grid must be strictly increasing")


def rapidity_to_boost(profile: RapidityProfile, ell_grid, chunk: int = 256) -> BoostModeProfile:
    """``f(ell) = (1 / 2 pi) int exp(i ell theta) f(theta) d theta`` by the trapezoid rule.

    Raises
    ------
    GridTooCoarse
        If ``max |ell|`` exceeds the Nyquist bound ``pi / d theta``.
    """
    ell = np.asarray(ell_grid, dtype=float).ravel()
    h = profile.step
    nyquist = math.pi / h
    if np.max(np.abs(ell)) > nyquist:
        raise GridTooCoarse(
            f"requested |ell| up to {np.max(np.abs(ell)):.4g} but theta step {h:.4g} "
            f"resolves only {nyquist:.4g}"
        )
    weights = np.full(profile.theta.size, h)
    weights[[0, -1]] = 0.5 * h
    weighted = weights * profile.values
    out = np.empty(ell.size, dtype=complex)
    for start in range(0, ell.size, chunk):
        block = ell[start:start + chunk]
        out[start:start + chunk] = np.exp(1j * np.outer(block, profile.theta)) @ weighted
    return BoostModeProfile(ell, out / (2.0 * math.pi))


# -- quadrature ---------------------------------------------------------------


@dataclass(frozen=True)
class EntropyEstimate:
    """Quadrature result with its error budget."""

    value: float
    abserr: float
    truncation: float
    domain: Tuple[float, float]
    method: str

    def __float__(self):
        return float(self.value)


def _panel_quad(func, a, b, panel, epsabs, limit=200):
    edges = np.arange(a, b, panel)
    edges = np.append(edges, b)
    pieces, errors = [], []
    per_panel = epsabs / max(len(edges) - 1, 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        with warnings.catch_warnings():
            # roundoff warnings at tight per-panel targets; err still reports the achieved accuracy
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(func, lo, hi, epsabs=per_panel, epsrel=0.0, limit=limit)
        pieces.append(val)
        errors.append(err)
    # fixed panel order and fsum keep the result reproducible
    return math.fsum(pieces), math.fsum(errors)


def pv_kernel_transform(ell: float, epsabs: float = 1e-12, full_output: bool = False):
    """Principal value of ``int exp(2 i ell b) / (exp(b) - exp(-b)) db`` over the real line.

    The integrand is folded onto ``b > 0`` by adding its mirror image, which
    cancels the pole at ``b = 0`` (odd-part subtraction). The folded real part
    vanishes identically; the folded imaginary part ``sin(2 ell b) / sinh b`` is
    smooth and integrated panel by panel up to a cutoff where the remaining
    tail is below ``epsabs / 10``.

    Returns the complex value, or ``(value, abserr)`` with ``full_output``.

    Raises
    ------
    QuadratureNotConverged
        If the accumulated error estimate exceeds ``10 * epsabs``.
    """
    ell = float(ell)
    cutoff = math.log(20.0 / epsabs)
    panel = min(1.0, math.pi / max(abs(2.0 * ell), 1e-300))

    def folded_real(b):
        if b == 0.0:
            return 0.0
        return math.cos(2.0 * ell * b) / (2.0 * math.sinh(b)) + math.cos(-2.0 * ell * b) / (2.0 * math.sinh(-b))

    def folded_imag(b):
        if b < 1e-8:
            return 2.0 * ell
        return math.sin(2.0 * ell * b) / math.sinh(b)

    re, re_err = _panel_quad(folded_real, 0.0, cutoff, panel, epsabs)
    im, im_err = _panel_quad(folded_imag, 0.0, cutoff, panel, epsabs)
    abserr = re_err + im_err + 2.0 * math.exp(-cutoff)
    if abserr > 10 * epsabs:
        raise QuadratureNotConverged(f"PV kernel at ell={ell}: error estimate {abserr:.3e}", abserr)
    value = complex(re, im)
    return (value, abserr) if full_output else value


def pv_kernel_closed_form(ell):
    """``(i pi / 2) tanh(pi ell)``, the residue sum for the PV kernel integral."""
    return 0.5j * math.pi * np.tanh(math.pi * np.asarray(ell, dtype=float))


BoostProfile = Union[BoostModeProfile, GaussianBoostProfile]


def rindler_relative_entropy(
    profile: BoostProfile,
    epsabs: float = 1e-9,
    domain: Optional[Tuple[float, float]] = None,
) -> EntropyEstimate:
    """Relative entropy ``4 pi int ell tanh(2 pi ell) |f(ell)|^2 d ell`` of a single excitation.

    Closed-form Gaussian profiles use adaptive Gauss-Kronrod quadrature on
    ``center +- half_width()``; the truncation error is estimated by
    integrating the next strip out on both sides. Sampled profiles use
    Simpson's rule with the Simpson-trapezoid difference as error estimate and
    the first missing trapezoid panel at each end as truncation estimate.
    """
    if isinstance(profile, GaussianBoostProfile):
        if domain is None:
            r = profile.half_width()
            domain = (profile.center - r, profile.center + r)
        a, b = domain

        def integrand(x):
            return mode_relative_entropy(x) * abs(profile(x)) ** 2

        breaks = [0.0] if a < 0.0 < b else None
        value, err = integrate.quad(integrand, a, b, epsabs=epsabs, epsrel=0.0, limit=400, points=breaks)
        span = b - a
        left = integrate.quad(integrand, a - span / 2, a, epsabs=epsabs, epsrel=0.0)[0]
        right = integrate.quad(integrand, b, b + span / 2, epsabs=epsabs, epsrel=0.0)[0]
        if err > 10 * epsabs:
            raise QuadratureNotConverged(f"entropy quadrature error estimate {err:.3e}", err)
        return EntropyEstimate(value, err, abs(left) + abs(right), (a, b), "gauss-kronrod")

    if isinstance(profile, BoostModeProfile):
        x = profile.ell
        y = mode_relative_entropy(x) * np.abs(profile.values) ** 2
        simpson = float(integrate.simpson(y, x=x))
        trapezoid = float(integrate.trapezoid(y, x=x))
        truncation = 0.5 * (abs(y[0]) * (x[1] - x[0]) + abs(y[-1]) * (x[-1] - x[-2]))
        return EntropyEstimate(simpson, abs(simpson - trapezoid), truncation, (float(x[0]), float(x[-1])), "simpson")

    raise TypeError(f"unsupported profile type {type(profile).__name__}")


# -- profile I/O ----------------------------------------------------------------

_ELL_NAMES = {"ell", "l", "ℓ"}
_THETA_NAMES = {"theta", "θ"}


def read_profile_csv(source) -> Union[BoostModeProfile, RapidityProfile]:
    """Parse a profile CSV with header ``ell,re,im`` or ``theta,re,im``.

    ``source`` is a path or a file-like object. Validation errors carry the
    offending line number.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, newline="", encoding="utf-8") as fh:
            text = fh.read()
    rows = [(i, row) for i, row in enumerate(csv.reader(io.StringIO(text)), start=1)
            if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ProfileError("empty profile")
    line, header = rows[0]
    header = [h.strip().lower() for h in header]
    if len(header) != 3 or header[1:] != ["re", "im"]:
        raise ProfileError("header must be 'ell,re,im' or 'theta,re,im'", line)
    if header[0] in _ELL_NAMES:
        space = "ell"
    elif header[0] in _THETA_NAMES:
        space = "theta"
    else:
        raise ProfileError(f"unknown grid column {header[0]!r}", line)

    grid, values = [], []
    for line, row in rows[1:]:
        if len(row) != 3:
            raise ProfileError(f"expected 3 columns, got {len(row)}", line)
        try:
            x, re, im = (float(cell) for cell in row)
        except ValueError as exc:
            raise ProfileError(str(exc), line) from None
        if grid and x <= grid[-1]:
            raise ProfileError(f"{space} values must be strictly increasing", line)
        grid.append(x)
        values.append(complex(re, im))
    if len(grid) < 2:
        raise ProfileError("profile needs at least two data rows", rows[-1][0])
    if space == "ell":
        return BoostModeProfile(np.array(grid), np.array(values))
    return RapidityProfile(np.array(grid), np.array(values))


def write_profile_csv(profile: Union[BoostModeProfile, RapidityProfile]) -> str:
    if isinstance(profile, RapidityProfile):
        name, grid = "theta", profile.theta
    else:
        name, grid = "ell", profile.ell
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([name, "re", "im"])
    for x, v in zip(grid, profile.values):
        writer.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])
    return out.getvalue()

"""JSON exchange format for ``2N x 2N`` complex matrices.

    {"n_modes": N, "re": [[...], ...], "im": [[...], ...]}
"""

from __future__ import annotations

import json
from typing import Union

import numpy as np

from . import gaussian


def matrix_to_json(m) -> dict:
    m = np.asarray(getattr(m, "data", m), dtype=complex)
    n = m.shape[0] // 2
    if m.shape != (2 * n, 2 * n):
        raise ValueError(f"expected a 2N x 2N matrix, got shape {m.shape}")
    return {"n_modes": n, "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    """Decode and shape-check; raises ``ValueError`` on malformed input."""
    missing = {"n_modes", "re", "im"} - set(obj)
    if missing:
        raise ValueError(f"matrix JSON is missing keys: {sorted(missing)}")
    n = obj["n_modes"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n!r}")
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"matrix entries must be numeric: {exc}") from None
    for name, part in (("re", re), ("im", im)):
        if part.shape != (2 * n, 2 * n):
            raise ValueError(f"'{name}' has shape {part.shape}, expected {(2 * n, 2 * n)}")
    return re + 1j * im


def dumps_matrix(m) -> str:
    return json.dumps(matrix_to_json(m))


def load_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path, m) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(m), fh)
        fh.write("\n")


def load_covariance(path) -> gaussian.CovarianceMatrix:
    return gaussian.validate_covariance(load_matrix(path))


def load_density(path) -> gaussian.OneParticleDensity:
    return gaussian.validate_density(load_matrix(path))


MatrixLike = Union[np.ndarray, gaussian.CovarianceMatrix, gaussian.OneParticleDensity]

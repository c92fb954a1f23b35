"""Torus coherent states, phase-insensitive distances and Husimi grids.

A state is a length-``D`` complex numpy vector in the position basis
``|m>``, ``m = 0..D-1``, sitting at ``x = m/D``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DimensionMismatchError, InvalidInputError, InvalidParameterError
from .parallel import resolve_threads

CUTOFF_TOL = 1e-16
NORMALIZATIONS = ("raw", "unit-max")


def periodization_cutoff(sigma, D, tol=CUTOFF_TOL):
    """Smallest winding cutoff ``V >= 2`` whose next shell weighs less than ``tol``.

    Points of the shell ``|v| = V + 1`` lie at least ``V`` away from the
    centre, so their Gaussian weight is bounded by ``exp(-pi sigma D V^2)``.
    """
    V = 2
    while np.exp(-np.pi * sigma * D * V * V) >= tol:
        V += 1
    return V


def _check_params(sigma, D):
    if not np.isfinite(sigma) or sigma <= 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    if D < 1:
        raise InvalidParameterError(f"D must be >= 1, got {D}")
    if sigma * D < 1:
        raise InvalidParameterError(f"sigma * D must be >= 1 for a localized state, got {sigma * D}")


def torus_coherent_state(x0, p0, sigma, D, cutoff=None):
    """Normalized Gaussian wavepacket centred at ``(x0, p0)``, periodized on the torus.

    Parameters
    ----------
    x0, p0 : float
        Centre; reduced mod 1.
    sigma : float
        Squeezing (position width ~ ``1/sqrt(sigma D)``).
    D : int
        Hilbert-space dimension.
    cutoff : int, optional
        Number of windings ``V`` summed on each side; adaptive by default.

    Returns
    -------
    numpy.ndarray
        Complex amplitudes ``<m|psi>`` with unit Euclidean norm.
    """
    D = int(D)
    _check_params(sigma, D)
    x0, p0 = float(x0) % 1.0, float(p0) % 1.0
    V = periodization_cutoff(sigma, D) if cutoff is None else int(cutoff)
    if V < 0:
        raise InvalidInputError(f"cutoff must be >= 0, got {V}")
    m = np.arange(D)
    v = np.arange(-V, V + 1)
    y = m[None, :] / D + v[:, None]
    # exp(2 pi i D p0 y) split as exp(2 pi i p0 m) exp(2 pi i D p0 v), each reduced mod 1
    turns = np.mod(p0 * m, 1.0)[None, :] + np.mod(D * p0 * v, 1.0)[:, None]
    terms = np.exp(2j * np.pi * turns) * np.exp(-sigma * D * np.pi * (y - x0) ** 2)
    amp = terms.sum(axis=0)
    amp *= (2 * D * sigma) ** 0.25 * np.exp(-1j * np.pi * np.mod(D * x0 * p0, 2.0))
    return amp / np.linalg.norm(amp)


def _as_state(psi, name="psi"):
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1 or psi.size == 0:
        raise InvalidInputError(f"{name} must be a non-empty 1-D vector")
    return psi


def distance_up_to_phase(psi, phi):
    """``min_theta ||psi - e^{i theta} phi|| = sqrt(2 - 2 |<phi|psi>|)`` for unit vectors."""
    psi, phi = _as_state(psi), _as_state(phi, "phi")
    if psi.shape != phi.shape:
        raise DimensionMismatchError(f"dimensions differ: {psi.size} vs {phi.size}")
    overlap = np.vdot(phi, psi)
    if overlap == 0:
        return float(np.hypot(np.linalg.norm(psi), np.linalg.norm(phi)))
    # explicit difference at the optimal phase; the closed form loses half the digits near 0
    return float(np.linalg.norm(psi - (overlap / abs(overlap)) * phi))


def momentum_representation(psi):
    """``F_D psi`` with the plain DFT ``F[n, m] = exp(-2 pi i n m / D)/sqrt(D)``."""
    return np.fft.fft(_as_state(psi), norm="ortho")


@dataclass(frozen=True)
class HusimiGrid:
    """Husimi values on the corner grid ``x_i = i/nx``, ``p_j = j/n_p``; ``values[i, j]``."""

    nx: int
    n_p: int
    sigma: float
    values: np.ndarray
    normalization: str = "raw"

    def peak(self):
        """Grid point ``(x, p)`` of the largest value (first in row-major order on ties)."""
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return int(i) / self.nx, int(j) / self.n_p

    def unit_max(self):
        top = float(self.values.max())
        return HusimiGrid(self.nx, self.n_p, self.sigma, self.values / top if top > 0 else self.values,
                          "unit-max")


def husimi(psi, nx, n_p, sigma=1.0, normalization="raw", threads=None, cutoff=None):
    """Husimi function ``|<coherent(x_i, p_j; sigma)|psi>|^2`` on an ``nx x n_p`` grid.

    Uses the compiled kernel when available (see ``qbaker.BACKEND``).
    """
    psi = _as_state(psi)
    nx, n_p = int(nx), int(n_p)
    if nx < 2 or n_p < 2:
        raise InvalidInputError(f"grid sizes must be >= 2, got {nx} x {n_p}")
    if normalization not in NORMALIZATIONS:
        raise InvalidInputError(f"normalization must be one of {NORMALIZATIONS}")
    D = psi.size
    _check_params(sigma, D)
    V = periodization_cutoff(sigma, D) if cutoff is None else int(cutoff)
    values = _backend.husimi_kernel(psi, nx, n_p, float(sigma), V, resolve_threads(threads))
    grid = HusimiGrid(nx, n_p, float(sigma), np.asarray(values, dtype=np.float64))
    return grid.unit_max() if normalization == "unit-max" else grid

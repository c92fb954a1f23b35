"""Classical A-baker map and semiclassical checks of the tilde quantizations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .operators import ModMultSpec, as_permutation, tilde_baker, tilde_block_params
from .parallel import parallel_map
from .states import distance_up_to_phase, husimi, torus_coherent_state

TARGETS = ("classical", "shifted")


class PhasePoint(NamedTuple):
    x: float
    p: float


def phase_point(x, p):
    """PhasePoint with both coordinates reduced into ``[0, 1)``."""
    return PhasePoint(float(x) % 1.0, float(p) % 1.0)


def torus_distance(a, b):
    """Flat-torus distance between two phase points (nearest periodic image per coordinate)."""
    d = np.abs(np.subtract(a, b)) % 1.0
    d = np.minimum(d, 1.0 - d)
    return float(np.hypot(d[0], d[1]))


def _branch(A, x):
    return min(int(np.floor(A * x)), A - 1)


def classical_step(A, perm, z):
    """One step ``(x, p) -> (A x - l, (p + perm(l)) / A)`` with ``l = floor(A x)``, reduced mod 1.

    ``perm`` is a shift ``k`` (meaning ``perm(l) = (l - k) mod A``) or an explicit sequence.
    """
    perm = as_permutation(A, perm)
    x, p = z
    l = _branch(A, x)
    return phase_point(A * x - l, (p + perm[l]) / A)


def classical_orbit(A, perm, z0, steps):
    """``[z0, S(z0), ..., S^steps(z0)]``."""
    if steps < 0:
        raise InvalidInputError(f"steps must be >= 0, got {steps}")
    perm = as_permutation(A, perm)
    orbit = [PhasePoint(*z0)]
    for _ in range(steps):
        orbit.append(classical_step(A, perm, orbit[-1]))
    return orbit


def classical_step_array(A, perm, x, p):
    """Vectorized :func:`classical_step` over coordinate arrays."""
    perm = np.asarray(as_permutation(A, perm))
    x = np.asarray(x, dtype=np.float64)
    l = np.minimum(np.floor(A * x).astype(np.int64), A - 1)
    return (A * x - l) % 1.0, ((np.asarray(p, dtype=np.float64) + perm[l]) / A) % 1.0


def pushforward_histogram(A, perm, n_points, bins=10, seed=0, chunks=8, threads=None):
    """Histogram of uniform random points after one map step.

    Points are drawn in ``chunks`` independent streams spawned from ``seed``,
    so the counts do not depend on the thread count.
    """
    sizes = [n_points // chunks + (c < n_points % chunks) for c in range(chunks)]
    streams = np.random.SeedSequence(seed).spawn(chunks)

    def count(args):
        size, ss = args
        rng = np.random.default_rng(ss)
        x, p = classical_step_array(A, perm, rng.random(size), rng.random(size))
        return np.histogram2d(x, p, bins=bins, range=[[0, 1], [0, 1]])[0]

    return sum(parallel_map(count, zip(sizes, streams), threads)).astype(np.int64)


@dataclass(frozen=True)
class GoodRegionSpec:
    """Points at least ``delta`` from every line ``x = k/A`` with ``gamma < p < 1 - gamma``."""

    A: int
    delta: float
    gamma: float

    def __post_init__(self):
        if self.A < 1:
            raise InvalidParameterError(f"A must be >= 1, got {self.A}")
        if not 0 < self.delta < 1 / (2 * self.A):
            raise InvalidParameterError(f"delta must lie in (0, 1/(2A)), got {self.delta}")
        if not 0 < self.gamma < 0.5:
            raise InvalidParameterError(f"gamma must lie in (0, 1/2), got {self.gamma}")

    @classmethod
    def default(cls, A):
        return cls(A, 1 / (4 * A), 0.25)


def in_good_region(spec, z):
    x, p = z
    far = all(abs(x - k / spec.A) > spec.delta for k in range(spec.A + 1))
    return far and spec.gamma < p < 1 - spec.gamma


@dataclass(frozen=True)
class SemiclassicalReport:
    D: int
    error: float
    target: str
    classical_target: PhasePoint
    shifted_target: PhasePoint
    good_region: bool
    husimi_peak: Optional[PhasePoint] = None


def classical_target(A, perm, z0):
    return classical_step(A, perm, z0)


def shifted_target(spec, k, z0):
    """Image centre including the O(1/D) offsets set by the block DFT parameters."""
    perm, phases = tilde_block_params(spec, k)
    x0, p0 = z0
    l = _branch(spec.A, x0)
    alpha, beta, _ = phases[l]
    return phase_point(spec.A * x0 - l + beta * spec.A / spec.D,
                       (p0 + perm[l]) / spec.A - alpha / spec.D)


def semiclassical_error(spec, k, z0, sigma=1.0, target="classical", husimi_grid=None,
                        good_region=None, threads=None):
    """Distance up to phase between the evolved coherent state and a coherent target.

    Parameters
    ----------
    spec : ModMultSpec
    k : int
        Cyclic shift of the tilde map.
    z0 : tuple of float
        Initial centre.
    sigma : float
        Initial squeezing; the target uses ``sigma / A**2``.
    target : {"classical", "shifted"}
    husimi_grid : tuple of int, optional
        ``(nx, n_p)``; when given, the Husimi argmax of the evolved state is reported.
    good_region : GoodRegionSpec, optional
        Defaults to ``delta = 1/(4A)``, ``gamma = 1/4``. Points outside are flagged, not rejected.
    """
    if target not in TARGETS:
        raise InvalidInputError(f"target must be one of {TARGETS}, got {target!r}")
    z0 = phase_point(*z0)
    A, D = spec.A, spec.D
    inside = in_good_region(good_region or GoodRegionSpec.default(A), z0)
    psi = torus_coherent_state(z0.x, z0.p, sigma, D)
    phi = tilde_baker(spec, k) @ psi
    classical = classical_target(A, k, z0)
    shifted = shifted_target(spec, k, z0)
    centre = classical if target == "classical" else shifted
    reference = torus_coherent_state(centre.x, centre.p, sigma / A**2, D)
    peak = None
    if husimi_grid is not None:
        peak = PhasePoint(*husimi(phi, *husimi_grid, sigma=sigma, threads=threads).peak())
    return SemiclassicalReport(D, distance_up_to_phase(phi, reference), target, classical, shifted,
                               inside, peak)


def convergence_scan(A, k, sign, z0, sigma, q_list, target="classical", threads=None):
    """Rows ``(D, error)`` of :func:`semiclassical_error` for each ``q``; parallel over ``q``."""
    q_list = list(q_list)
    if not q_list:
        raise InvalidInputError("q_list must not be empty")
    specs = [ModMultSpec(A, q, sign) for q in q_list]

    def run(spec):
        return spec.D, semiclassical_error(spec, k, z0, sigma, target).error

    return parallel_map(run, specs, threads)

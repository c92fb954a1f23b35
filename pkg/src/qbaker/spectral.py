"""Eigenphases of unitary operators and degeneracy / level-spacing diagnostics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
import scipy.linalg as sla
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InvalidInputError, NonCoprimeError, NonUnitaryError
from .operators import unitarity_residual

TWO_PI = 2 * np.pi
DEFAULT_TOL = 1e-8
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
_CAYLEY_LIMIT = 1e8


def _check_unitary(U, tol=None):
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or U.size == 0:
        raise InvalidInputError(f"expected a non-empty square matrix, got shape {U.shape}")
    n = U.shape[0]
    tol = 1e-10 * n if tol is None else tol
    if np.iscomplexobj(U) and not U.imag.any():
        U = np.ascontiguousarray(U.real)
    residual = unitarity_residual(U)
    if not residual < tol:
        raise NonUnitaryError(residual, tol)
    return U


def _cayley_phases(U):
    """Eigenphases from the Hermitian matrix ``i (I - V)(I + V)^{-1}``, ``V = e^{-i theta} U``.

    ``U`` may be a stack of equally sized matrices. ``theta`` runs through the
    golden-angle sequence until ``-1`` is safely outside the spectrum of every
    ``V``; each eigenvalue ``h`` maps back to ``theta + 2 arctan(h)``.
    """
    eye = np.eye(U.shape[-1])
    for t in range(1, 33):
        theta = TWO_PI * ((t * _GOLDEN) % 1.0)
        try:
            inv = np.linalg.inv(eye + np.exp(-1j * theta) * U)
        except np.linalg.LinAlgError:
            continue
        H = 1j * (2.0 * inv - eye)
        H = (H + np.swapaxes(H, -1, -2).conj()) / 2
        if np.all(np.isfinite(H)) and np.abs(H).max() < _CAYLEY_LIMIT:
            h = np.linalg.eigvalsh(H)
            return np.mod(theta + 2.0 * np.arctan(h), TWO_PI).ravel()
    raise InvalidInputError("no usable spectral shift found")  # pragma: no cover


def _decoupled_blocks(U):
    """Index sets of the blocks of ``U`` that share no nonzero entry with each other.

    Exact zeros only; a dense matrix yields a single block. Coordinates of
    different blocks never mix, so the spectrum is the union of block spectra.
    """
    n_blocks, labels = connected_components(csr_matrix(U != 0), directed=True, connection="weak")
    if n_blocks == 1:
        return [np.arange(U.shape[0])]
    order = np.argsort(labels, kind="stable")
    return np.split(order, np.cumsum(np.bincount(labels))[:-1])


def eigenphases(U, method="cayley", tol=None):
    """Sorted eigenphases in ``[0, 2 pi)`` of a unitary matrix.

    Parameters
    ----------
    U : array_like
        Square matrix, unitary within ``tol`` (default ``1e-10 * dim``).
    method : {"cayley", "qr"}
        ``"cayley"`` diagonalizes a Hermitian transform (moduli exactly 1);
        ``"qr"`` uses the general eigensolver and checks moduli within 1e-8.
        The Cayley route first splits ``U`` into blocks that share no nonzero
        entry (a permutation splits into its cycles) and treats each alone.

    Raises
    ------
    NonUnitaryError
        With the unitarity residual ``||U^dag U - I||_F``.
    """
    U = _check_unitary(U, tol)
    if method == "cayley":
        by_size = {}
        for idx in _decoupled_blocks(U):
            by_size.setdefault(idx.size, []).append(idx)
        phases = np.concatenate([
            _cayley_phases(np.stack([U[np.ix_(idx, idx)] for idx in group]))
            for group in by_size.values()
        ])
    elif method == "qr":
        vals = np.linalg.eigvals(U)
        if np.abs(np.abs(vals) - 1).max() > 1e-8:
            raise NonUnitaryError(unitarity_residual(U), 1e-8)
        phases = np.mod(np.angle(vals), TWO_PI)
    else:
        raise InvalidInputError(f"method must be 'cayley' or 'qr', got {method!r}")
    phases[phases > TWO_PI - 1e-12] = 0.0
    return np.sort(phases)


def cycle_structure(A, N):
    """Sorted cycle lengths of ``m -> A m mod N`` on ``{0, ..., N-1}``."""
    if N < 1 or gcd(A, N) != 1:
        raise NonCoprimeError(f"gcd(A={A}, N={N}) != 1")
    seen = np.zeros(N, dtype=bool)
    lengths = []
    for start in range(N):
        if seen[start]:
            continue
        length, m = 0, start
        while not seen[m]:
            seen[m] = True
            m = (A * m) % N
            length += 1
        lengths.append(length)
    return sorted(lengths)


def period_residual(U, r):
    """``||U^r - I||_F`` using repeated squaring."""
    if r < 1:
        raise InvalidInputError(f"r must be >= 1, got {r}")
    U = np.asarray(U)
    return float(np.linalg.norm(np.linalg.matrix_power(U, r) - np.eye(U.shape[0])))


def degeneracy_histogram(phases, tol=DEFAULT_TOL):
    """Cluster sorted phases whose circular gap is ``<= tol``.

    Returns ``[(representative, multiplicity)]``; the representative is the
    smallest member, except that a class wrapping through 0 is represented by
    its member nearest above 0.
    """
    if tol <= 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    phases = np.sort(np.asarray(phases, dtype=np.float64))
    if phases.size == 0:
        return []
    classes = [[phases[0], 1]]
    for prev, cur in zip(phases[:-1], phases[1:]):
        if cur - prev <= tol:
            classes[-1][1] += 1
        else:
            classes.append([cur, 1])
    if len(classes) > 1 and phases[0] + TWO_PI - phases[-1] <= tol:
        classes[0][1] += classes.pop()[1]
    return [(float(p), int(c)) for p, c in classes]


def predicted_degeneracies(A, N):
    """Spectrum of the modmult permutation from its cycles: a c-cycle gives every c-th root of unity."""
    counts = Counter()
    for c, n_cycles in Counter(cycle_structure(A, N)).items():
        for j in range(c):
            g = gcd(j, c)
            counts[(j // g, c // g)] += n_cycles
    fractions = sorted(counts, key=lambda f: Fraction(*f))
    return [(TWO_PI * j / c, counts[(j, c)]) for j, c in fractions]


def histograms_match(found, predicted, tol=DEFAULT_TOL):
    """Exact multiplicity agreement with representatives equal within ``tol`` (circularly)."""
    if len(found) != len(predicted):
        return False
    for (p, m), (q, n) in zip(found, predicted):
        gap = abs(p - q) % TWO_PI
        if m != n or min(gap, TWO_PI - gap) > tol:
            return False
    return True


def spacing_ratios(phases):
    """Circular spacing ratios ``min(s_n, s_{n+1}) / max(s_n, s_{n+1})`` and their mean.

    Phases are taken as already uniform on the circle (no unfolding); ``0/0`` counts as 0.
    """
    phases = np.sort(np.mod(np.asarray(phases, dtype=np.float64), TWO_PI))
    if phases.size < 3:
        raise InvalidInputError(f"need at least 3 phases, got {phases.size}")
    s = np.diff(np.append(phases, phases[0] + TWO_PI))
    nxt = np.roll(s, -1)
    hi = np.maximum(s, nxt)
    ratios = np.divide(np.minimum(s, nxt), hi, out=np.zeros_like(s), where=hi > 0)
    return ratios, float(ratios.mean())


@dataclass(frozen=True)
class SpectrumReport:
    dim: int
    phases: np.ndarray
    degeneracy_classes: list
    mean_spacing_ratio: float


def spectrum_report(U, tol=DEFAULT_TOL, method="cayley"):
    phases = eigenphases(U, method=method)
    mean = spacing_ratios(phases)[1] if phases.size >= 3 else float("nan")
    return SpectrumReport(phases.size, phases, degeneracy_histogram(phases, tol), mean)

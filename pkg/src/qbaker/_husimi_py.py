"""Numpy Husimi kernel (fallback when the compiled extension is unavailable)."""

import numpy as np

from .parallel import parallel_map


def gaussian_table(D, nx, sigma, cutoff):
    """``G[i, v, m] = exp(-sigma D pi (m/D + v - i/nx)^2)`` for ``v`` in ``-cutoff..cutoff``."""
    m = np.arange(D) / D
    v = np.arange(-cutoff, cutoff + 1)
    x = np.arange(nx) / nx
    y = m[None, None, :] + v[None, :, None] - x[:, None, None]
    return np.exp(-sigma * D * np.pi * y * y)


def husimi_kernel(psi, nx, n_p, sigma, cutoff, threads=1):
    """``|<coherent(i/nx, j/n_p)|psi>|^2`` on the ``nx x n_p`` grid (coherent states normalized)."""
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    D = psi.shape[0]
    G = gaussian_table(D, nx, sigma, cutoff)
    # exact unit-root tables: exp(2 pi i D p v) and exp(2 pi i p m) at p = j/n_p
    roots = np.exp(2j * np.pi * np.arange(n_p) / n_p)
    j = np.arange(n_p)
    v = np.arange(-cutoff, cutoff + 1)
    W = roots[np.outer((D * j) % n_p, v) % n_p]
    P = roots[np.outer(j, np.arange(D)) % n_p]
    conj_weighted = P.conj() * psi[None, :]

    def row(i):
        S = W @ G[i]
        overlap = np.einsum("jm,jm->j", S.conj(), conj_weighted)
        norm = np.einsum("jm,jm->j", S.real, S.real) + np.einsum("jm,jm->j", S.imag, S.imag)
        return np.abs(overlap) ** 2 / norm

    return np.array(parallel_map(row, range(nx), threads))

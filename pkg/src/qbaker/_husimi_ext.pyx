# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Husimi kernel: OpenMP-parallel over position rows.

For each row the momentum index is the innermost, contiguous loop so the
compiler can vectorize it; all phases come from exact integer residues.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()


def husimi_kernel(psi, Py_ssize_t nx, Py_ssize_t n_p, double sigma, Py_ssize_t cutoff, int threads=1):
    """Same contract as the numpy kernel: ``|<coherent(i/nx, j/n_p)|psi>|^2``."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cpsi = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef Py_ssize_t D = cpsi.shape[0]
    cdef Py_ssize_t nv = 2 * cutoff + 1
    winding = np.arange(-cutoff, cutoff + 1)
    # G[i, m, v] = exp(-sigma D pi (m/D + v - i/nx)^2)
    cdef double[:, :, ::1] G = np.ascontiguousarray(
        np.exp(-sigma * D * np.pi * (
            (np.arange(D) / D)[None, :, None]
            + winding[None, None, :]
            - (np.arange(nx) / nx)[:, None, None]) ** 2))
    j_all = np.arange(n_p)
    # winding weights exp(2 pi i D j v / n_p), laid out [v, j]
    wturns = 2 * np.pi * (np.outer(winding, (D * j_all) % n_p) % n_p) / n_p
    cdef double[:, ::1] wc = np.ascontiguousarray(np.cos(wturns))
    cdef double[:, ::1] ws = np.ascontiguousarray(np.sin(wturns))
    # plane-wave factors exp(2 pi i j m / n_p) times conj-free psi split, laid out [m, j]
    pturns = 2 * np.pi * (np.outer(np.arange(D), j_all) % n_p) / n_p
    cdef double[:, ::1] pc = np.ascontiguousarray(np.cos(pturns))
    cdef double[:, ::1] ps = np.ascontiguousarray(np.sin(pturns))
    cdef double[::1] pr = np.ascontiguousarray(cpsi.real)
    cdef double[::1] pim = np.ascontiguousarray(cpsi.imag)
    cdef double[:, ::1] ore = np.zeros((nx, n_p))
    cdef double[:, ::1] oim = np.zeros((nx, n_p))
    cdef double[:, ::1] nrm = np.zeros((nx, n_p))
    cdef double[:, ::1] sre_row = np.zeros((nx, n_p))
    cdef double[:, ::1] sim_row = np.zeros((nx, n_p))
    cdef Py_ssize_t i, j, m, v
    cdef double sre, sim, g, cre, cim, a, b

    for i in prange(nx, nogil=True, schedule="static", num_threads=threads):
        for m in range(D):
            a = pr[m]
            b = pim[m]
            g = G[i, m, 0]
            for j in range(n_p):
                sre_row[i, j] = g * wc[0, j]
                sim_row[i, j] = g * ws[0, j]
            for v in range(1, nv):
                g = G[i, m, v]
                for j in range(n_p):
                    sre_row[i, j] += g * wc[v, j]
                    sim_row[i, j] += g * ws[v, j]
            for j in range(n_p):
                sre = sre_row[i, j]
                sim = sim_row[i, j]
                nrm[i, j] += sre * sre + sim * sim
                cre = pc[m, j] * sre - ps[m, j] * sim
                cim = pc[m, j] * sim + ps[m, j] * sre
                ore[i, j] += cre * a + cim * b
                oim[i, j] += cre * b - cim * a
    res = (np.asarray(ore) ** 2 + np.asarray(oim) ** 2) / np.asarray(nrm)
    return res

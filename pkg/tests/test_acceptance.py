"""Acceptance suite: one PASS/FAIL line per criterion (shown in the terminal summary)."""

import time
from math import gcd

import numpy as np
import pytest

from qbaker.dynamics import (
    classical_step,
    convergence_scan,
    pushforward_histogram,
    semiclassical_error,
    torus_distance,
)
from qbaker.operators import (
    ModMultSpec,
    abs_difference_fraction,
    bv_baker,
    decomposition_residual,
    dft_block_identity_residual,
    generalized_dft,
    modmult_full,
    modmult_reduced,
    modmult_via_dft,
    multiplicative_order,
    tilde_baker,
    unitarity_residual,
)
from qbaker.spectral import degeneracy_histogram, eigenphases, histograms_match, period_residual, predicted_degeneracies

FIXED_SPECS = [(2, 2, "plus"), (2, 2, "minus"), (3, 17, "plus"), (3, 17, "minus"), (5, 10, "plus"), (7, 7, "minus")]


def random_specs(n, max_dim=512, seed=2024):
    rng = np.random.default_rng(seed)
    specs = []
    while len(specs) < n:
        A = int(rng.integers(1, 13))
        q = int(rng.integers(1, max_dim // A + 1))
        sign = "plus" if rng.random() < 0.5 else "minus"
        if A * q + (1 if sign == "plus" else -1) > A:
            specs.append(ModMultSpec(A, q, sign))
    return specs


SWEEP = [ModMultSpec(*s) for s in FIXED_SPECS] + random_specs(20)
_constructed = []  # every operator built by criteria 1-7, checked by criterion 8


def test_criterion_1_decomposition(acceptance):
    start = time.perf_counter()
    worst, worst_spec = 0.0, None
    for spec in SWEEP:
        r = decomposition_residual(spec)
        if r >= worst:
            worst, worst_spec = r, spec
    elapsed = time.perf_counter() - start
    for spec in SWEEP[:6]:
        _constructed.extend(tilde_baker(spec, k) for k in range(spec.A))
        _constructed.append(modmult_reduced(spec))
    acceptance.check(1, "decomposition residual < 1e-10 on 26 specs, < 30 s",
                     worst < 1e-10 and elapsed < 30,
                     f"max residual {worst:.2e} at A={worst_spec.A} q={worst_spec.q} {worst_spec.sign}, {elapsed:.1f} s")


def test_criterion_2_cross_construction(acceptance):
    ratios = []
    for spec in SWEEP:
        U = modmult_via_dft(spec)
        ratios.append(np.linalg.norm(U - modmult_reduced(spec)) / spec.D)
        if spec.D <= 64:
            _constructed.append(U)
    acceptance.check(2, "||via DFT - reduced||_F < 1e-12 D on 26 specs", max(ratios) < 1e-12,
                     f"max residual/D {max(ratios):.2e}")


def test_criterion_3_periodicity_and_degeneracy(acceptance):
    start = time.perf_counter()
    period_ok = []
    for A, N in [(2, 5), (3, 52), (5, 51)]:
        U = modmult_full(A, N)
        _constructed.append(U)
        period_ok.append(period_residual(U, multiplicative_order(A, N)) < 1e-10 * N)
    mismatches, count = [], 0
    for N in range(2, 201):
        for A in range(1, N):
            if gcd(A, N) != 1:
                continue
            count += 1
            found = degeneracy_histogram(eigenphases(modmult_full(A, N)), 1e-8)
            if not histograms_match(found, predicted_degeneracies(A, N)):
                mismatches.append((A, N))
    elapsed = time.perf_counter() - start
    acceptance.check(3, "U^r = I and degeneracies match the cycle oracle for all coprime N <= 200, < 60 s",
                     all(period_ok) and not mismatches and elapsed < 60,
                     f"{count} operators, {len(mismatches)} mismatches, {elapsed:.1f} s")


def test_criterion_4_evolution_at_d150(acceptance):
    start = time.perf_counter()
    spec = ModMultSpec(3, 50, "plus")
    classical = semiclassical_error(spec, 1, (0.5, 0.5), 1.0, "classical", husimi_grid=(150, 150))
    shifted = semiclassical_error(spec, 1, (0.5, 0.5), 1.0, "shifted")
    _constructed.append(tilde_baker(spec, 1))
    elapsed = time.perf_counter() - start
    peak_gap = torus_distance(classical.husimi_peak, (0.5, 1 / 6))
    acceptance.check(4, "Husimi peak within 0.06 of (1/2, 1/6), error < 0.25, shifted <= classical, < 10 s",
                     peak_gap < 0.06 and classical.error < 0.25 and shifted.error <= classical.error
                     and elapsed < 10,
                     f"peak {tuple(round(c, 4) for c in classical.husimi_peak)}, gap {peak_gap:.4f}, "
                     f"error {classical.error:.4f}, shifted {shifted.error:.2e}, {elapsed:.2f} s")


def test_criterion_5_convergence(acceptance):
    start = time.perf_counter()
    rows = convergence_scan(3, 1, "plus", (0.5, 0.5), 1.0, [10, 20, 40, 80, 160])
    elapsed = time.perf_counter() - start
    errors = [e for _, e in rows]
    no_growth = all(b <= 1.1 * a for a, b in zip(errors, errors[1:]))
    acceptance.check(5, "err(480) < err(30)/2 and no doubling step grows > 10%, < 2 min",
                     errors[-1] < errors[0] / 2 and no_growth and elapsed < 120,
                     "errors " + ", ".join(f"D={D}:{e:.4f}" for D, e in rows) + f", {elapsed:.2f} s")


def test_criterion_6_entrywise_closeness_to_bv(acceptance):
    start = time.perf_counter()
    spec = ModMultSpec.from_modulus(3, 52)
    tilde = tilde_baker(spec, 1)
    bv = bv_baker(51, 3, 1)
    _constructed.extend([tilde, bv])
    fraction = abs_difference_fraction(tilde, bv, 0.01)
    elapsed = time.perf_counter() - start
    acceptance.check(6, "fewer than 10% of entries differ in modulus by > 0.01 (A=3, N=52, k=1), < 5 s",
                     fraction < 0.10 and elapsed < 5, f"fraction {fraction:.3f}, {elapsed:.2f} s")


def test_criterion_7_block_dft_identity(acceptance):
    start = time.perf_counter()
    values = (0.0, 1 / 3, -0.5)
    worst = 0.0
    for D, A in [(6, 3), (8, 2), (20, 5)]:
        for alpha in values:
            for beta in values:
                worst = max(worst, dft_block_identity_residual(D, A, alpha, beta))
                _constructed.append(generalized_dft(D, alpha, beta))
    elapsed = time.perf_counter() - start
    acceptance.check(7, "block-DFT identity residual < 1e-12 on 27 cases, < 5 s",
                     worst < 1e-12 and elapsed < 5, f"max residual {worst:.2e}, {elapsed:.3f} s")


def test_criterion_8_unitarity(acceptance):
    if not _constructed:
        pytest.skip("run together with criteria 1-7")
    ratios = [unitarity_residual(U) / U.shape[0] for U in _constructed]
    acceptance.check(8, "every constructed operator has ||U^dag U - I||_F < 1e-12 dim",
                     max(ratios) < 1e-12, f"{len(ratios)} operators, max residual/dim {max(ratios):.2e}")


def test_criterion_9_classical_map(acceptance):
    n_points, bins = 100_000, 10
    counts = pushforward_histogram(3, 1, n_points, bins=bins, seed=7)
    expected = n_points / bins**2
    z = np.abs(counts - expected) / np.sqrt(expected * (1 - 1 / bins**2))
    step = classical_step(3, 1, (0.5, 0.5))
    exact = abs(step.x - 0.5) <= 1e-15 and abs(step.p - 1 / 6) <= 1e-15
    acceptance.check(9, "push-forward histogram within 4 sigma of uniform; (1/2,1/2) -> (1/2,1/6) to 1e-15",
                     z.max() < 4 and exact, f"max |z| {z.max():.2f}, image {tuple(step)}")

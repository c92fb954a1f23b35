"""Unitary operators: generalized DFTs, modular multiplication and quantum A-baker maps.

All matrices are dense ``complex128`` numpy arrays (row index = output basis
state, column index = input basis state). Residuals are Frobenius norms unless
stated otherwise.

Conventions fixed numerically (see ``resolve_index_offset`` and
``resolve_omega_convention``):

* The reduced modular-multiplication basis of the ``plus`` case (N = Aq + 1)
  holds the states ``|1>, ..., |Aq>``; the ``minus`` case (N = Aq - 1) holds
  ``|0>, ..., |Aq-1>`` where ``|Aq-1>`` is the appended fixed point. The
  smallest label is the *label offset* (1 for plus, 0 for minus).
* Tilde baker maps carry unit-modulus block phases, so each one is unitary
  and ``U = A**-0.5 * sum_k tilde_baker(spec, k)`` holds exactly.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import (
    InvalidDimensionError,
    InvalidInputError,
    NonCoprimeError,
    SpecInconsistencyError,
)

PLUS = "plus"
MINUS = "minus"
OMEGA_CONVENTIONS = ("A", "D")

_SIGN_ALIASES = {"plus": PLUS, "+": PLUS, "+1": PLUS, 1: PLUS,
                 "minus": MINUS, "-": MINUS, "-1": MINUS, -1: MINUS}


def _as_int(value, name):
    try:
        return operator.index(value)
    except TypeError:
        raise InvalidInputError(f"{name} must be an integer, got {value!r}") from None


def _check_dim(D, name="D"):
    D = _as_int(D, name)
    if D < 1:
        raise InvalidDimensionError(f"{name} must be >= 1, got {D}")
    return D


def normalize_sign(sign):
    try:
        return _SIGN_ALIASES[sign]
    except (KeyError, TypeError):
        raise InvalidInputError(f"sign must be 'plus' or 'minus', got {sign!r}") from None


@dataclass(frozen=True)
class ModMultSpec:
    """Modular multiplication by ``A`` modulo ``N = A*q +/- 1``, reduced to ``D = A*q`` states."""

    A: int
    q: int
    sign: str = PLUS

    def __post_init__(self):
        object.__setattr__(self, "A", _as_int(self.A, "A"))
        object.__setattr__(self, "q", _as_int(self.q, "q"))
        object.__setattr__(self, "sign", normalize_sign(self.sign))
        if self.A < 1:
            raise InvalidInputError(f"A must be >= 1, got {self.A}")
        if self.q < 1:
            raise InvalidInputError(f"q must be >= 1, got {self.q}")
        if self.N <= self.A:
            raise SpecInconsistencyError(
                f"N = {self.N} must exceed A = {self.A} (A={self.A}, q={self.q}, {self.sign})"
            )
        if gcd(self.A, self.N) != 1:  # automatic for N = Aq +/- 1
            raise NonCoprimeError(f"gcd(A={self.A}, N={self.N}) != 1")

    @classmethod
    def from_modulus(cls, A, N, sign=None):
        """Build the spec from ``(A, N)``; the sign is inferred when omitted.

        When both ``N - 1`` and ``N + 1`` are multiples of ``A`` (``A`` = 1 or 2)
        the plus reduction is preferred.
        """
        A = _as_int(A, "A")
        N = _as_int(N, "N")
        if A < 1:
            raise InvalidInputError(f"A must be >= 1, got {A}")
        if sign is None:
            if (N - 1) % A == 0:
                sign = PLUS
            elif (N + 1) % A == 0:
                sign = MINUS
            else:
                raise SpecInconsistencyError(f"N = {N} is not of the form {A}q +/- 1")
        sign = normalize_sign(sign)
        shift = 1 if sign == PLUS else -1
        if (N - shift) % A != 0 or (N - shift) // A < 1:
            raise SpecInconsistencyError(f"N = {N} != {A}q {'+' if shift > 0 else '-'} 1")
        return cls(A, (N - shift) // A, sign)

    @property
    def s(self):
        return 1 if self.sign == PLUS else -1

    @property
    def N(self):
        return self.A * self.q + self.s

    @property
    def D(self):
        return self.A * self.q

    @property
    def label_offset(self):
        return 1 if self.sign == PLUS else 0


def generalized_dft(D, alpha=0.0, beta=0.0):
    """Generalized DFT matrix ``F[n, m] = exp(-2 pi i (n+alpha)(m+beta)/D) / sqrt(D)``."""
    D = _check_dim(D)
    n = np.arange(D, dtype=np.int64)
    # integer part of the exponent reduced exactly mod D
    phase = (np.outer(n, n) % D).astype(np.float64)
    phase += np.add.outer(beta * n, alpha * n) + alpha * beta
    phase = np.mod(phase, D)
    return np.exp((-2j * np.pi / D) * phase) / np.sqrt(D)


def inverse_dft(D, alpha=0.0, beta=0.0):
    return generalized_dft(D, alpha, beta).conj().T


def dft_block_identity_residual(D, A, alpha=0.0, beta=0.0):
    """Max deviation of the identity relating ``F_{D/A}^{alpha,beta}`` entries to ``F_D``.

    For block indices ``j, l`` and ``m, xi`` in blocks ``j`` and ``l``::

        F_{D/A}^{a,b}[m - jD/A, xi - lD/A]
            = sqrt(A) F_D[Am - jD, xi]
              * exp(-2 pi i (b A m/D + a A xi/D - j b - a l + a b A/D))
    """
    D = _check_dim(D)
    A = _check_dim(A, "A")
    if D % A:
        raise InvalidInputError(f"A = {A} does not divide D = {D}")
    q = D // A
    small = generalized_dft(q, alpha, beta)
    big = generalized_dft(D)
    worst = 0.0
    for j in range(A):
        m = np.arange(j * q, (j + 1) * q)
        for l in range(A):
            xi = np.arange(l * q, (l + 1) * q)
            lhs = small
            extra = (beta * A / D) * m[:, None] + (alpha * A / D) * xi[None, :] \
                - j * beta - alpha * l + alpha * beta * A / D
            rhs = np.sqrt(A) * big[np.ix_(A * m - j * D, xi)] * np.exp(-2j * np.pi * extra)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def multiplicative_order(A, N):
    """Smallest ``r >= 1`` with ``A**r = 1 (mod N)``."""
    A = _as_int(A, "A")
    N = _as_int(N, "N")
    if N < 2:
        raise InvalidInputError(f"N must be >= 2, got {N}")
    if gcd(A, N) != 1:
        raise NonCoprimeError(f"gcd(A={A}, N={N}) != 1")
    r, x = 1, A % N
    while x != 1:
        x = (x * A) % N
        r += 1
    return r


def modmult_full(A, N):
    """N x N permutation matrix of ``|m> -> |A m mod N>``."""
    A = _as_int(A, "A")
    N = _as_int(N, "N")
    if not 1 <= A < N:
        raise InvalidInputError(f"need 1 <= A < N, got A={A}, N={N}")
    if gcd(A, N) != 1:
        raise NonCoprimeError(f"gcd(A={A}, N={N}) != 1; the map is not a permutation")
    m = np.arange(N)
    U = np.zeros((N, N), dtype=np.complex128)
    U[(A * m) % N, m] = 1.0
    return U


def modmult_reduced(spec):
    """Modular multiplication acting on the ``D = Aq`` reduced states.

    plus: index ``i`` is the state ``|i+1>`` (the fixed point ``|0>`` is dropped).
    minus: index ``i`` is ``|i>``; index ``D-1`` is the appended fixed point.
    """
    A, N, D = spec.A, spec.N, spec.D
    c = np.arange(D)
    if spec.sign == PLUS:
        r = (A * (c + 1)) % N - 1
    else:
        r = np.where(c < D - 1, (A * c) % N, D - 1)
    U = np.zeros((D, D), dtype=np.complex128)
    U[r, c] = 1.0
    return U


def _check_offset(offset):
    if offset not in (0, 1):
        raise InvalidInputError(f"index offset must be 0 or 1, got {offset!r}")
    return offset


def modmult_via_dft(spec, index_offset=None):
    """Modular multiplication rebuilt from DFT blocks, ``F^{-1} (M (.) (F_A^{-/+} x J_q))``.

    Every block-row of ``M`` is ``[F_q, F_q^{0,-s/A}, ..., F_q^{0,-s(A-1)/A}]``
    (``s = +1`` for plus). DFT exponents are evaluated at basis labels
    ``index + index_offset``; the default is ``spec.label_offset``, which is
    the only choice that reproduces :func:`modmult_reduced`.
    """
    o = spec.label_offset if index_offset is None else _check_offset(index_offset)
    A, q, D, s = spec.A, spec.q, spec.D, spec.s
    M = np.empty((D, D), dtype=np.complex128)
    for l in range(A):
        M[:, l * q:(l + 1) * q] = np.tile(generalized_dft(q, o, o - s * l / A), (A, 1))
    FA = generalized_dft(A)
    if s > 0:
        FA = FA.conj()
    tilde_F = np.kron(FA, np.ones((q, q)))
    return inverse_dft(D, o, o) @ (M * tilde_F)


def resolve_index_offset(spec):
    """Return ``(best_offset, {offset: residual})`` over both label offsets."""
    target = modmult_reduced(spec)
    residuals = {o: float(np.linalg.norm(modmult_via_dft(spec, o) - target)) for o in (0, 1)}
    return min(residuals, key=residuals.get), residuals


def as_permutation(A, perm):
    """Normalize a cyclic shift ``k`` or an explicit sequence into a permutation list.

    ``perm[l]`` is the destination block of block ``l``; shift ``k`` means
    ``l -> (l - k) mod A``.
    """
    A = _check_dim(A, "A")
    if isinstance(perm, (int, np.integer)):
        k = int(perm)
        if not 0 <= k < A:
            raise InvalidInputError(f"shift k must satisfy 0 <= k < A = {A}, got {k}")
        return [(l - k) % A for l in range(A)]
    out = [_as_int(v, "permutation entry") for v in perm]
    if sorted(out) != list(range(A)):
        raise InvalidInputError(f"{out} is not a permutation of 0..{A - 1}")
    return out


def _block_permuted_product(left, blocks, perm):
    """``left @ (P_perm applied to blockdiag(blocks))`` without forming the sparse middle."""
    D = left.shape[0]
    q = D // len(blocks)
    out = np.empty((D, D), dtype=np.complex128)
    for l, (j, block) in enumerate(zip(perm, blocks)):
        out[:, l * q:(l + 1) * q] = left[:, j * q:(j + 1) * q] @ block
    return out


def bv_baker(D, A, k=0, alpha=0.0, beta=0.0):
    """Balazs-Voros quantum A-baker map with rectangles cyclically shifted by ``k``."""
    D = _check_dim(D)
    A = _check_dim(A, "A")
    if D % A:
        raise InvalidDimensionError(f"A = {A} does not divide D = {D}")
    perm = as_permutation(A, k)
    block = generalized_dft(D // A, alpha, beta)
    return _block_permuted_product(inverse_dft(D, alpha, beta), [block] * A, perm)


def general_tilde_baker(D, A, perm, phases=None):
    """``F_D^{-1} P_perm blockdiag(w_l F_{D/A}^{a_l, b_l})``.

    ``phases`` is a sequence of ``(alpha_l, beta_l, omega_l)`` per block,
    with ``|omega_l| = 1``; ``None`` means all ``(0, 0, 1)``.
    """
    D = _check_dim(D)
    A = _check_dim(A, "A")
    if D % A:
        raise InvalidDimensionError(f"A = {A} does not divide D = {D}")
    perm = as_permutation(A, perm)
    if phases is None:
        phases = [(0.0, 0.0, 1.0)] * A
    if len(phases) != A:
        raise InvalidInputError(f"expected {A} block phase triples, got {len(phases)}")
    blocks = []
    for alpha, beta, omega in phases:
        if abs(abs(omega) - 1.0) > 1e-12:
            raise InvalidInputError(f"block phase omega must have unit modulus, got |omega| = {abs(omega)}")
        blocks.append(omega * generalized_dft(D // A, alpha, beta))
    return _block_permuted_product(inverse_dft(D), blocks, perm)


def tilde_baker(spec, k):
    """Unitary quantum A-baker map ``B~^{(k)}`` entering the modmult decomposition.

    Block-row ``j`` carries ``exp(2 pi i s j l / A) F_q^{0,-s l/A}`` at
    block-column ``l = (j + k) mod A``. In the plus reduction the basis starts
    at ``|1>``, so index ``i`` maps to ``A i + (A-1) - l N``: the block form is
    followed by a translation of ``A - 1`` sites.
    """
    k = _as_int(k, "k")
    A, q, D, s = spec.A, spec.q, spec.D, spec.s
    if not 0 <= k < A:
        raise InvalidInputError(f"k must satisfy 0 <= k < A = {A}, got {k}")
    perm = as_permutation(A, k)
    blocks = [np.exp(2j * np.pi * s * perm[l] * l / A) * generalized_dft(q, 0.0, -s * l / A)
              for l in range(A)]
    B = _block_permuted_product(inverse_dft(D), blocks, perm)
    shift = spec.label_offset * (A - 1)
    return np.roll(B, shift, axis=0) if shift else B


def tilde_block_params(spec, k, omega_convention="A"):
    """General-form parameters ``(perm, [(alpha_l, beta_l, omega_l)])`` of ``tilde_baker``.

    ``omega_convention`` selects the denominator of the block phase
    ``exp(2 pi i s l perm(l) / den)``: ``"A"`` (exact) or ``"D"``.
    """
    if omega_convention not in OMEGA_CONVENTIONS:
        raise InvalidInputError(f"omega convention must be one of {OMEGA_CONVENTIONS}")
    A, D, s, o = spec.A, spec.D, spec.s, spec.label_offset
    perm = as_permutation(A, k)
    den = A if omega_convention == "A" else D
    phases = []
    for l in range(A):
        beta = -s * l / A + o * (A - 1) / A
        turns = s * l * perm[l] / den - o * (A - 1) * perm[l] / A
        phases.append((0.0, beta, np.exp(2j * np.pi * turns)))
    return perm, phases


def resolve_omega_convention(spec):
    """Return ``(best, {convention: residual})``, residual = max over k of the cross-construction gap."""
    maps = [tilde_baker(spec, k) for k in range(spec.A)]
    residuals = {}
    for conv in OMEGA_CONVENTIONS:
        worst = 0.0
        for k, B in enumerate(maps):
            perm, phases = tilde_block_params(spec, k, conv)
            G = general_tilde_baker(spec.D, spec.A, perm, phases)
            worst = max(worst, float(np.linalg.norm(G - B)))
        residuals[conv] = worst
    return min(residuals, key=residuals.get), residuals


def unitarity_residual(U):
    U = np.asarray(U)
    return float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])))


def residual_norms(X, Y):
    """``(frobenius, max_abs)`` of ``X - Y``."""
    diff = np.asarray(X) - np.asarray(Y)
    return float(np.linalg.norm(diff)), float(np.abs(diff).max())


def decomposition_residual(spec):
    """``|| U - A**-0.5 sum_k B~^{(k)} ||_F``."""
    total = sum(tilde_baker(spec, k) for k in range(spec.A))
    return residual_norms(modmult_reduced(spec), total / np.sqrt(spec.A))[0]


def abs_difference_fraction(U, V, threshold=0.01):
    """Fraction of entries where ``| |U| - |V| |`` exceeds ``threshold``."""
    return float(np.mean(np.abs(np.abs(U) - np.abs(V)) > threshold))


@dataclass(frozen=True)
class Certificate:
    spec: ModMultSpec
    residual: float
    residual_max: float
    unitarity: float
    cross: float
    cross_max: float
    label_offset: int
    omega_convention: str

    def passed(self, tol=1e-10):
        return max(self.residual, self.unitarity, self.cross) < tol


def certify(spec):
    """Decomposition, unitarity and cross-construction residuals for one spec."""
    U = modmult_reduced(spec)
    maps = [tilde_baker(spec, k) for k in range(spec.A)]
    residual, residual_max = residual_norms(U, sum(maps) / np.sqrt(spec.A))
    cross, cross_max = residual_norms(modmult_via_dft(spec), U)
    omega, _ = resolve_omega_convention(spec)
    return Certificate(
        spec=spec,
        residual=residual,
        residual_max=residual_max,
        unitarity=max(unitarity_residual(B) for B in maps),
        cross=cross,
        cross_max=cross_max,
        label_offset=spec.label_offset,
        omega_convention=omega,
    )

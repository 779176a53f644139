"""Periodic Schrodinger (Hill) operators -d^2/dx^2 + V(x) and the block operator H.

Operators are dense N x N matrices on the wave grid of [-T, T). The second
derivative is the Fourier circulant with wavenumbers pi*k/T, so the matrix is
unitarily equivalent to the Galerkin matrix in the trigonometric basis with the
potential acting by circular convolution of its discrete Fourier coefficients.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.linalg import circulant

from benney_cli.core.elliptic import check_modulus, complete_k, jacobi_sn_cn_dn
from benney_cli.core.waves import wave_grid, wavenumbers
from benney_cli.errors import EigensolverError, ParameterDomainError, SolvabilityError

logger = logging.getLogger(__name__)

ZERO_RTOL = 1e-6
SOLVE_RTOL = 1e-8


class OperatorLabel(str, Enum):
    L = "L"
    L1 = "L1"
    L2 = "L2"
    CUSTOM = "custom"
    LAME_DEGREE1 = "lame1"
    LAME_DEGREE2 = "lame2"


def second_derivative_matrix(grid_size, half_period):
    """Symmetric Fourier matrix of d^2/dx^2 on [-T, T); keeps the Nyquist mode."""
    k = wavenumbers(grid_size, half_period)
    d2 = circulant(np.real(np.fft.ifft(-(k**2))))
    return 0.5 * (d2 + d2.T)


def first_derivative_matrix(grid_size, half_period):
    """Skew-symmetric Fourier matrix of d/dx on [-T, T); the Nyquist mode is zeroed."""
    k = wavenumbers(grid_size, half_period)
    k[grid_size // 2] = 0.0
    d1 = circulant(np.real(np.fft.ifft(1j * k)))
    return 0.5 * (d1 - d1.T)


def _symmetric_eigh(matrix):
    try:
        return scipy.linalg.eigh(matrix)
    except scipy.linalg.LinAlgError as e:
        raise EigensolverError(f"symmetric eigensolver failed: {e}") from e


@dataclass(frozen=True, eq=False)
class HillOperator:
    potential: np.ndarray = field(repr=False)
    half_period: float
    matrix: np.ndarray = field(repr=False)
    label: OperatorLabel = OperatorLabel.CUSTOM

    @property
    def grid_size(self):
        return self.potential.size

    @property
    def zero_tolerance(self):
        return ZERO_RTOL * max(1.0, float(np.max(np.abs(self.potential))))

    @cached_property
    def eigh(self):
        """Full (eigenvalues, eigenvectors) pair, ascending, computed once."""
        logger.debug("eigh of %s operator, N=%d", self.label.value, self.grid_size)
        return _symmetric_eigh(self.matrix)

    def apply(self, u):
        return self.matrix @ u


@dataclass(frozen=True)
class SpectrumReport:
    label: str
    eigenvalues: np.ndarray = field(repr=False)
    morse_index: int
    kernel_dim: int
    zero_tolerance: float
    eigenvectors: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self):
        data = {
            "label": self.label,
            "eigenvalues": self.eigenvalues,
            "morse_index": self.morse_index,
            "kernel_dim": self.kernel_dim,
            "zero_tolerance": self.zero_tolerance,
        }
        if self.eigenvectors is not None:
            data["eigenvectors"] = self.eigenvectors.T
        return data

    def to_rows(self):
        return [(self.label, i, value) for i, value in enumerate(self.eigenvalues)]


def build_operator(potential, half_period, label=OperatorLabel.CUSTOM, grid_size=None):
    """Assemble -d^2/dx^2 + diag(V) for real periodic samples V on [-T, T)."""
    potential = np.asarray(potential, dtype=float)
    if potential.ndim != 1:
        raise ParameterDomainError("potential must be a one-dimensional array of samples")
    if grid_size is not None and potential.size != grid_size:
        raise ParameterDomainError(
            f"potential has {potential.size} samples but the grid has {grid_size}"
        )
    if potential.size % 2:
        raise ParameterDomainError(f"grid size must be even, got {potential.size}")
    if not np.all(np.isfinite(potential)):
        raise ParameterDomainError("potential samples must be finite")
    if not half_period > 0.0:
        raise ParameterDomainError(f"half period must be positive, got {half_period!r}")

    matrix = -second_derivative_matrix(potential.size, half_period) + np.diag(potential)
    matrix = 0.5 * (matrix + matrix.T)
    return HillOperator(
        potential=potential,
        half_period=float(half_period),
        matrix=matrix,
        label=OperatorLabel(label),
    )


def spectrum(op, count=10, zero_tol=None, vectors=None):
    """Lowest ``count`` eigenvalues with Morse index and kernel dimension.

    ``vectors`` optionally lists eigenvalue indices whose eigenvectors are returned.
    """
    w, v = op.eigh
    tol = op.zero_tolerance if zero_tol is None else zero_tol
    eigenvectors = None
    if vectors is not None:
        eigenvectors = v[:, list(vectors)]
    return SpectrumReport(
        label=op.label.value,
        eigenvalues=w[:count].copy(),
        morse_index=int(np.sum(w < -tol)),
        kernel_dim=int(np.sum(np.abs(w) <= tol)),
        zero_tolerance=tol,
        eigenvectors=eigenvectors,
    )


def kernel_projection_solve(op, rhs, zero_tol=None):
    """Solve op u = rhs on the orthogonal complement of the numerical kernel.

    Raises SolvabilityError when rhs is not orthogonal to the kernel to 1e-8.
    """
    rhs = np.asarray(rhs, dtype=float)
    w, v = op.eigh
    tol = op.zero_tolerance if zero_tol is None else zero_tol
    kernel = np.abs(w) <= tol
    coeffs = v.T @ rhs
    rhs_norm = float(np.linalg.norm(rhs))

    leak = float(np.linalg.norm(coeffs[kernel]))
    if leak > SOLVE_RTOL * rhs_norm:
        raise SolvabilityError(
            f"right-hand side has kernel component {leak:.3e} (relative "
            f"{leak / rhs_norm if rhs_norm else math.inf:.3e}) for the {op.label.value} operator"
        )

    regular = ~kernel
    u = v[:, regular] @ (coeffs[regular] / w[regular])
    projected = rhs - v[:, kernel] @ coeffs[kernel]
    residual = float(np.linalg.norm(op.matrix @ u - projected))
    if residual > SOLVE_RTOL * max(rhs_norm, np.finfo(float).tiny):
        logger.warning(
            "kernel-projected solve with %s: residual %.3e exceeds %.0e relative",
            op.label.value, residual / rhs_norm, SOLVE_RTOL,
        )
    return u


def wave_operators(wave):
    """The three Hill operators of a wave: L, L1 and L2."""
    p = wave.params
    phi_sq = wave.phi**2
    potentials = {
        OperatorLabel.L: p.sigma + 3.0 * p.nonlinearity * phi_sq,
        OperatorLabel.L1: p.sigma + (3.0 * p.beta - 1.0 / p.c) * phi_sq,
        OperatorLabel.L2: p.sigma + p.nonlinearity * phi_sq,
    }
    return {
        label: build_operator(v, wave.half_period, label, grid_size=wave.grid_size)
        for label, v in potentials.items()
    }


@dataclass(frozen=True, eq=False)
class BlockOperatorH:
    """[[L1, diag(phi), 0], [diag(phi), (c/2) I, 0], [0, 0, L2]] acting on (P, V, Q)."""

    wave: object = field(repr=False)
    l1: HillOperator = field(repr=False)
    l2: HillOperator = field(repr=False)
    matrix: np.ndarray = field(repr=False)

    @property
    def grid_size(self):
        return self.wave.grid_size

    @property
    def zero_tolerance(self):
        scale = max(
            1.0,
            float(np.max(np.abs(self.l1.potential))),
            float(np.max(np.abs(self.l2.potential))),
            abs(self.wave.params.c) / 2.0,
            float(np.max(np.abs(self.wave.phi))),
        )
        return ZERO_RTOL * scale

    @cached_property
    def eigenvalues(self):
        try:
            return scipy.linalg.eigvalsh(self.matrix)
        except scipy.linalg.LinAlgError as e:
            raise EigensolverError(f"eigensolver failed on H: {e}") from e

    def apply(self, z):
        return self.matrix @ z

    def inner(self, z, y):
        """Grid inner product of two stacked (P, V, Q) vectors."""
        return self.wave.spacing * float(np.dot(z, y))


def build_h_block(wave, operators=None):
    ops = operators or wave_operators(wave)
    n = wave.grid_size
    phi = np.diag(wave.phi)
    zero = np.zeros((n, n))
    l1, l2 = ops[OperatorLabel.L1], ops[OperatorLabel.L2]
    matrix = np.block([
        [l1.matrix, phi, zero],
        [phi, 0.5 * wave.params.c * np.eye(n), zero],
        [zero, zero, l2.matrix],
    ])
    return BlockOperatorH(wave=wave, l1=l1, l2=l2, matrix=matrix)


def morse_index_h(wave, block=None):
    """n(H): number of negative eigenvalues of the assembled block operator."""
    block = block or build_h_block(wave)
    return int(np.sum(block.eigenvalues < -block.zero_tolerance))


@dataclass(frozen=True)
class MorseDecomposition:
    n_h: int
    n_h0: int
    n_l2: int
    n_l: int

    @property
    def holds(self):
        return self.n_h == self.n_h0 + self.n_l2


def morse_decomposition(wave, block=None):
    """Compare n(H) with n(H0) + n(L2), H0 being the upper-left 2x2 block of H."""
    block = block or build_h_block(wave)
    n = wave.grid_size
    h0 = block.matrix[: 2 * n, : 2 * n]
    try:
        h0_eigs = scipy.linalg.eigvalsh(h0)
    except scipy.linalg.LinAlgError as e:
        raise EigensolverError(f"eigensolver failed on H0: {e}") from e
    l_op = wave_operators(wave)[OperatorLabel.L]
    tol = block.zero_tolerance
    return MorseDecomposition(
        n_h=morse_index_h(wave, block),
        n_h0=int(np.sum(h0_eigs < -tol)),
        n_l2=spectrum(block.l2, count=0).morse_index,
        n_l=spectrum(l_op, count=0).morse_index,
    )


def h0_quadratic_form_split(wave, f, g):
    """Both sides of <H0(f,g),(f,g)> = <Lf,f> + int (sqrt(2/c) phi f + sqrt(c/2) g)^2.

    The completed square only exists for c > 0.
    """
    c = wave.params.c
    if c <= 0.0:
        raise ParameterDomainError("the completed-square form of H0 requires c > 0")
    ops = wave_operators(wave)
    l1, l_op = ops[OperatorLabel.L1], ops[OperatorLabel.L]
    phi = wave.phi
    lhs = (
        wave.inner(l1.apply(f), f)
        + 2.0 * wave.inner(phi * f, g)
        + 0.5 * c * wave.inner(g, g)
    )
    square = math.sqrt(2.0 / c) * phi * f + math.sqrt(c / 2.0) * g
    rhs = wave.inner(l_op.apply(f), f) + wave.inner(square, square)
    return lhs, rhs


def lame_operator(kappa, degree, grid_size=256):
    """-d^2/dy^2 + n(n+1) kappa^2 sn^2(y) on [-2K, 2K) for Lame degree n in {1, 2}."""
    kappa = check_modulus(kappa)
    if degree not in (1, 2):
        raise ParameterDomainError(f"Lame degree must be 1 or 2, got {degree!r}")
    half_period = 2.0 * complete_k(kappa)
    y = wave_grid(half_period, grid_size)
    sn, _, _ = jacobi_sn_cn_dn(y, kappa)
    label = OperatorLabel.LAME_DEGREE2 if degree == 2 else OperatorLabel.LAME_DEGREE1
    return build_operator(degree * (degree + 1) * kappa**2 * sn**2, half_period, label)


def lame_eigenvalues(kappa, degree):
    """Closed-form lowest periodic eigenvalues on [-2K, 2K): four for degree 2, three for degree 1."""
    kappa = check_modulus(kappa)
    m = kappa**2
    if degree == 2:
        root = math.sqrt(1.0 - m + m**2)
        return np.array([2.0 + 2.0 * m - 2.0 * root, 1.0 + m, 1.0 + 4.0 * m, 4.0 + m])
    if degree == 1:
        return np.array([m, 1.0, 1.0 + m])
    raise ParameterDomainError(f"Lame degree must be 1 or 2, got {degree!r}")

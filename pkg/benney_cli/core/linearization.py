"""The linearized operator JH about a traveling wave and its spectrum.

Perturbations Z = (P, V, Q) of the wave evolve by Z_t = JHZ with

    H = [[L1, phi, 0], [phi, c/2, 0], [0, 0, L2]],   J = [[0, 0, 1], [0, 2 d/dx, 0], [-1, 0, 0]].

On an even grid the skew derivative matrix annihilates the Nyquist vector (-1)^j,
so the full 3N x 3N matrix carries one spurious exact zero eigenvalue. Spectra and
Jordan-structure checks therefore use the restriction of JH to the invariant
subspace whose V-block is orthogonal to that vector (dimension 3N - 1).
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from benney_cli.core.hill import (
    OperatorLabel,
    build_h_block,
    first_derivative_matrix,
    kernel_projection_solve,
    wave_operators,
)
from benney_cli.errors import DegeneracyError, EigensolverError, InconclusiveError, ParameterDomainError

logger = logging.getLogger(__name__)

ZERO_CLUSTER_DIM = 5
ZERO_TOL_FACTOR = 1e-4
RELATION_RTOL = 1e-7
DEGENERACY_RTOL = 1e-8
RANK_TOL = 1e-6
SEPARATION_FACTOR = 10.0


def assemble_j(grid_size, half_period):
    """J = [[0, 0, I], [0, 2D, 0], [-I, 0, 0]] with the skew Fourier derivative D."""
    n = grid_size
    eye, zero = np.eye(n), np.zeros((n, n))
    d1 = first_derivative_matrix(n, half_period)
    return np.block([
        [zero, zero, eye],
        [zero, 2.0 * d1, zero],
        [-eye, zero, zero],
    ])


def spectral_scale(wave):
    """Frequency of the gravest Fourier mode: max(|sigma|, (pi/T)^2, |c| pi/T)."""
    p = wave.params
    k1 = math.pi / p.half_period
    return max(abs(p.sigma), k1**2, abs(p.c) * k1)


def default_zero_tolerance(wave):
    return ZERO_TOL_FACTOR * spectral_scale(wave)


@dataclass(frozen=True, eq=False)
class BlockOperatorJH:
    wave: object = field(repr=False)
    h: object = field(repr=False)
    j: np.ndarray = field(repr=False)
    matrix: np.ndarray = field(repr=False)

    @property
    def grid_size(self):
        return self.wave.grid_size

    @property
    def zero_tolerance(self):
        return default_zero_tolerance(self.wave)

    @cached_property
    def reduced_basis(self):
        """Orthonormal 3N x (3N-1) basis of {z : z_V orthogonal to (-1)^j}."""
        n = self.grid_size
        nyquist = ((-1.0) ** np.arange(n))[None, :]
        v_basis = scipy.linalg.null_space(nyquist)
        basis = np.zeros((3 * n, 3 * n - 1))
        basis[:n, :n] = np.eye(n)
        basis[n : 2 * n, n : 2 * n - 1] = v_basis
        basis[2 * n :, 2 * n - 1 :] = np.eye(n)
        return basis

    @cached_property
    def reduced_matrix(self):
        basis = self.reduced_basis
        return basis.T @ self.matrix @ basis

    def apply(self, z):
        return self.matrix @ z


def assemble_jh(wave, operators=None):
    """Assemble J, H and the product J @ H for a wave."""
    ops = operators or wave_operators(wave)
    block = build_h_block(wave, ops)
    j = assemble_j(wave.grid_size, wave.half_period)
    logger.debug("assembled JH, size %d", 3 * wave.grid_size)
    return BlockOperatorJH(wave=wave, h=block, j=j, matrix=j @ block.matrix)


@dataclass(frozen=True)
class EigenReport:
    eigenvalues: np.ndarray = field(repr=False)
    max_real_part: float
    k_real: int
    k_complex_quadruplets: int
    zero_cluster_dim: int
    symmetry_residual: float
    zero_tolerance: float
    spectral_radius: float

    def summary(self):
        return {
            "max_real_part": self.max_real_part,
            "k_real": self.k_real,
            "k_complex_quadruplets": self.k_complex_quadruplets,
            "zero_cluster_dim": self.zero_cluster_dim,
            "symmetry_residual": self.symmetry_residual,
            "zero_tolerance": self.zero_tolerance,
            "spectral_radius": self.spectral_radius,
        }

    def to_dict(self):
        data = self.summary()
        data["eigenvalues"] = np.column_stack([self.eigenvalues.real, self.eigenvalues.imag])
        return data

    def to_rows(self):
        return [(i, z.real, z.imag) for i, z in enumerate(self.eigenvalues)]


def _eigvals(matrix):
    try:
        return scipy.linalg.eigvals(matrix)
    except scipy.linalg.LinAlgError as e:
        raise EigensolverError(f"nonsymmetric eigensolver failed: {e}") from e


def quadruplet_symmetry_residual(eigenvalues, zero_tol):
    """max over |lambda| > zero_tol of min_mu |mu + lambda| / (1 + |lambda|)."""
    outside = eigenvalues[np.abs(eigenvalues) > zero_tol]
    if outside.size == 0:
        return 0.0
    distance = np.abs(outside[:, None] + eigenvalues[None, :]).min(axis=1)
    return float(np.max(distance / (1.0 + np.abs(outside))))


def eigen_spectrum_jh(op, zero_tol=None):
    """Full spectrum of JH (Nyquist-reduced) with the instability counts."""
    tol = op.zero_tolerance if zero_tol is None else zero_tol
    eigenvalues = np.sort_complex(_eigvals(op.reduced_matrix))
    re, im = eigenvalues.real, eigenvalues.imag
    report = EigenReport(
        eigenvalues=eigenvalues,
        max_real_part=float(np.max(re)),
        k_real=int(np.sum((np.abs(im) <= tol) & (re > tol))),
        k_complex_quadruplets=int(np.sum((re > tol) & (im > tol))),
        zero_cluster_dim=int(np.sum(np.abs(eigenvalues) <= tol)),
        symmetry_residual=quadruplet_symmetry_residual(eigenvalues, tol),
        zero_tolerance=tol,
        spectral_radius=float(np.max(np.abs(eigenvalues))),
    )
    logger.debug(
        "JH spectrum: max Re %.3e, k_real %d, quadruplets %d, zero cluster %d (tol %.2e)",
        report.max_real_part, report.k_real, report.k_complex_quadruplets,
        report.zero_cluster_dim, tol,
    )
    return report


@dataclass(frozen=True, eq=False)
class GeneralizedKernelBasis:
    """Kernel vectors k1..k3 and chain heads g1, g2 with JH g1 = k1, JH g2 = -k2."""

    k1: np.ndarray = field(repr=False)
    k2: np.ndarray = field(repr=False)
    k3: np.ndarray = field(repr=False)
    g1: np.ndarray = field(repr=False)
    g2: np.ndarray = field(repr=False)
    l_inverse_phi: np.ndarray = field(repr=False)
    l2_inverse_dphi: np.ndarray = field(repr=False)
    residuals: dict = field(default_factory=dict)

    def as_matrix(self):
        return np.column_stack([self.k1, self.k2, self.k3, self.g1, self.g2])

    def smallest_singular_value(self):
        """Smallest singular value of the five columns after normalization."""
        columns = self.as_matrix()
        columns = columns / np.linalg.norm(columns, axis=0)
        return float(np.linalg.svd(columns, compute_uv=False)[-1])

    @property
    def max_residual(self):
        return max(self.residuals.values())


def _relative(vector, reference):
    return float(np.linalg.norm(vector) / np.linalg.norm(reference))


def generalized_kernel_basis(wave, op=None):
    """The five generalized-kernel vectors of JH and their defining-relation residuals."""
    op = op or assemble_jh(wave)
    ops = wave_operators(wave)
    p = wave.params
    c, beta = p.c, p.beta
    phi, dphi = wave.phi, wave.dphi
    zero = np.zeros_like(phi)

    l_inverse_phi = kernel_projection_solve(ops[OperatorLabel.L], phi)
    pairing = wave.inner(l_inverse_phi, phi)
    if abs(pairing) <= DEGENERACY_RTOL * wave.inner(phi, phi):
        raise DegeneracyError(f"<L^-1 phi, phi> = {pairing:.3e} is numerically zero")
    l2_inverse_dphi = kernel_projection_solve(ops[OperatorLabel.L2], dphi)

    cb = c * beta - 1.0
    k1 = np.concatenate([dphi, -(2.0 / c) * phi * dphi, zero])
    k2 = np.concatenate([zero, zero, phi])
    k3 = np.concatenate([-l_inverse_phi, 1.0 + (2.0 / c) * phi * l_inverse_phi, zero])
    g1 = np.concatenate([phi / (2.0 * c * cb), -beta * phi**2 / (c * cb), l2_inverse_dphi])
    g2 = np.concatenate([zero, np.ones_like(phi), zero])

    residuals = {
        "k1": _relative(op.apply(k1), k1),
        "k2": _relative(op.apply(k2), k2),
        "k3": _relative(op.apply(k3), k3),
        "g1": _relative(op.apply(g1) - k1, k1),
        "g2": _relative(op.apply(g2) + k2, k2),
    }
    worst = max(residuals.values())
    if worst > RELATION_RTOL:
        logger.warning("generalized kernel relations hold only to %.2e", worst)
    return GeneralizedKernelBasis(
        k1=k1, k2=k2, k3=k3, g1=g1, g2=g2,
        l_inverse_phi=l_inverse_phi,
        l2_inverse_dphi=l2_inverse_dphi,
        residuals=residuals,
    )


def verify_no_higher_jordan_blocks(wave, basis=None, op=None, zero_tol=None):
    """True when the zero eigenvalue of JH has algebraic multiplicity five and
    Jordan chains of length at most two.

    The zero cluster is moved to the top of an ordered complex Schur form; for its
    block M the test requires dim 5, rank(M) = 2 and rank(M^2) = 0.
    """
    op = op or assemble_jh(wave)
    if basis is not None and basis.smallest_singular_value() <= RANK_TOL:
        logger.warning("generalized kernel vectors are numerically dependent")
        return False
    tol = op.zero_tolerance if zero_tol is None else zero_tol
    try:
        t_form, _, sdim = scipy.linalg.schur(
            op.reduced_matrix, output="complex", sort=lambda z: abs(z) <= tol
        )
    except scipy.linalg.LinAlgError as e:
        raise EigensolverError(f"Schur decomposition failed: {e}") from e

    rest = np.abs(np.diag(t_form)[sdim:])
    if rest.size and rest.min() < SEPARATION_FACTOR * tol:
        raise InconclusiveError(
            f"nearest nonzero eigenvalue {rest.min():.3e} lies within "
            f"{SEPARATION_FACTOR:g} x zero tolerance {tol:.3e}"
        )
    if sdim != ZERO_CLUSTER_DIM:
        logger.info("zero cluster has dimension %d", sdim)
        return False

    cluster = t_form[:sdim, :sdim]
    rank_tol = SEPARATION_FACTOR * tol * max(1.0, float(np.linalg.norm(cluster, 2)))
    rank_one = np.linalg.matrix_rank(cluster, tol=rank_tol)
    rank_two = np.linalg.matrix_rank(cluster @ cluster, tol=rank_tol)
    logger.debug("zero cluster ranks: M -> %d, M^2 -> %d", rank_one, rank_two)
    return bool(rank_one == 2 and rank_two == 0)


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    state: np.ndarray = field(repr=False)
    time: float
    condition: float


class LinearizedFlow:
    """exp(t JH) through a cached complex Schur form JH = Z T Z^H."""

    def __init__(self, op):
        self.op = op
        try:
            self.schur_t, self.schur_z = scipy.linalg.schur(op.matrix, output="complex")
        except scipy.linalg.LinAlgError as e:
            raise EigensolverError(f"Schur decomposition failed: {e}") from e

    def evolve(self, initial, t):
        if t < 0:
            raise ParameterDomainError(f"evolution time must be nonnegative, got {t!r}")
        initial = np.asarray(initial)
        if t == 0:
            return initial.copy()
        coords = self.schur_z.conj().T @ initial
        state = self.schur_z @ (scipy.linalg.expm(t * self.schur_t) @ coords)
        if np.isrealobj(initial):
            return state.real
        return state

    def trajectory(self, initial, times):
        """States at each time; uniformly spaced times reuse one step propagator."""
        times = np.asarray(times, dtype=float)
        steps = np.diff(times)
        if times.size < 3 or times[0] < 0 or steps[0] <= 0 or not np.allclose(steps, steps[0]):
            return [self.evolve(initial, t) for t in times]
        initial = np.asarray(initial)
        step = scipy.linalg.expm(steps[0] * self.schur_t)
        coords = self.schur_z.conj().T @ initial
        if times[0] > 0:
            coords = scipy.linalg.expm(times[0] * self.schur_t) @ coords
        states = []
        for _ in times:
            state = self.schur_z @ coords
            states.append(state.real if np.isrealobj(initial) else state)
            coords = step @ coords
        return states

    @cached_property
    def eigenvector_condition(self):
        """Condition number of the eigenvector matrix; large near the defective zero cluster."""
        _, vectors = scipy.linalg.eig(self.op.matrix)
        return float(np.linalg.cond(vectors))


def evolve_linearized(op, initial, t, flow=None):
    """Z(t) = exp(t JH) Z(0) with the eigenvector condition number as accuracy indicator."""
    flow = flow or LinearizedFlow(op)
    state = flow.evolve(initial, t)
    return EvolutionResult(state=state, time=float(t), condition=flow.eigenvector_condition)


def growth_rate(op, initial, t_start=5.0, t_stop=10.0, samples=11, flow=None):
    """Least-squares slope of log ||Z(t)|| over [t_start, t_stop]."""
    flow = flow or LinearizedFlow(op)
    times = np.linspace(t_start, t_stop, samples)
    norms = [np.linalg.norm(z) for z in flow.trajectory(initial, times)]
    slope, _ = np.polyfit(times, np.log(norms), 1)
    return float(slope)


def energy(op, z):
    """Grid value of <H z, z>, conserved by the linear flow for real z."""
    return op.h.inner(op.h.apply(z), z)

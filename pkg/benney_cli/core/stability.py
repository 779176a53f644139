"""The D matrix, closed-form kappa factors and the Krein-index stability verdict.

For c > 0 the number of eigenvalues of JH with positive real part, counted as
k_real + 2 k_complex + 2 k_imaginary_negative, equals n(H) - n(D), where D is the
3 x 3 Gram matrix <H psi_i, psi_j> of

    psi_1 = g1,
    psi_2 = (-L^-1 phi, (2/c) phi L^-1 phi, 0),
    psi_3 = (0, 1, 0).
"""

import functools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np
from scipy import integrate

from benney_cli.core.elliptic import check_modulus, complete_integrals, jacobi_sn_cn_dn
from benney_cli.core.hill import OperatorLabel, kernel_projection_solve, morse_index_h, wave_operators
from benney_cli.core.linearization import (
    ZERO_CLUSTER_DIM,
    assemble_jh,
    eigen_spectrum_jh,
    generalized_kernel_basis,
)
from benney_cli.core.waves import WaveFamily, make_snoidal, make_wave, wave_parameters
from benney_cli.errors import DegeneracyError, ParameterDomainError

logger = logging.getLogger(__name__)

D_NEGATIVE_RTOL = 1e-10
DEGENERACY_RTOL = 1e-8
ASYMPTOTIC_RATIO_TOL = 0.1
QUAD_TOL = 1e-13


class Verdict(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class DComponents:
    """The inner products D is built from."""

    l_inverse_phi_phi: float
    l2_inverse_dphi_dphi: float
    phi_norm_sq: float
    phi_sq_norm_sq: float
    period: float


@dataclass(frozen=True, eq=False)
class DMatrix:
    entries: np.ndarray
    n_d: int
    det: float
    eigenvalues: np.ndarray
    components: DComponents

    def to_dict(self):
        return {
            "entries": self.entries,
            "eigenvalues": self.eigenvalues,
            "n_d": self.n_d,
            "det": self.det,
            "components": asdict(self.components),
        }

    def to_rows(self):
        header = ["row", "col", "value"]
        rows = [(i, j, self.entries[i, j]) for i in range(3) for j in range(3)]
        return header, rows


def _d_entries(c, beta, period, l_inverse_phi_phi, l2_inverse_dphi_dphi, phi_norm_sq, phi_sq_norm_sq):
    cb = c * beta - 1.0
    d11 = l2_inverse_dphi_dphi + beta * phi_sq_norm_sq / (2.0 * c**2 * cb)
    d12 = -phi_norm_sq / (2.0 * c * cb)
    d13 = -phi_norm_sq / (2.0 * c)
    d33 = c * period / 2.0
    return np.array([
        [d11, d12, d13],
        [d12, l_inverse_phi_phi, 0.0],
        [d13, 0.0, d33],
    ])


def _d_matrix(entries, components):
    eigenvalues = np.linalg.eigvalsh(entries)
    scale = float(np.max(np.abs(eigenvalues)))
    n_d = int(np.sum(eigenvalues < -D_NEGATIVE_RTOL * scale))
    return DMatrix(
        entries=entries,
        n_d=n_d,
        det=float(np.linalg.det(entries)),
        eigenvalues=eigenvalues,
        components=components,
    )


def assemble_d(wave, operators=None):
    """Assemble the symmetric 3 x 3 matrix D from two kernel-projected solves."""
    ops = operators or wave_operators(wave)
    p = wave.params
    phi, dphi = wave.phi, wave.dphi

    l_inverse_phi = kernel_projection_solve(ops[OperatorLabel.L], phi)
    phi_norm_sq = wave.inner(phi, phi)
    pairing = wave.inner(l_inverse_phi, phi)
    if abs(pairing) <= DEGENERACY_RTOL * phi_norm_sq:
        raise DegeneracyError(f"<L^-1 phi, phi> = {pairing:.3e} is numerically zero")
    l2_inverse_dphi = kernel_projection_solve(ops[OperatorLabel.L2], dphi)

    components = DComponents(
        l_inverse_phi_phi=pairing,
        l2_inverse_dphi_dphi=wave.inner(l2_inverse_dphi, dphi),
        phi_norm_sq=phi_norm_sq,
        phi_sq_norm_sq=wave.inner(phi**2, phi**2),
        period=p.period,
    )
    entries = _d_entries(
        p.c, p.beta, p.period,
        components.l_inverse_phi_phi,
        components.l2_inverse_dphi_dphi,
        components.phi_norm_sq,
        components.phi_sq_norm_sq,
    )
    d = _d_matrix(entries, components)
    logger.debug("D: det %.6e, n(D) %d", d.det, d.n_d)
    return d


def d_from_quadratic_form(wave, basis=None):
    """D computed directly as <H psi_i, psi_j> from the generalized kernel vectors."""
    op = assemble_jh(wave)
    basis = basis or generalized_kernel_basis(wave, op)
    psi = [basis.g1, basis.k3 - basis.g2, basis.g2]
    h_psi = [op.h.apply(v) for v in psi]
    return np.array([[op.h.inner(h_psi[i], psi[j]) for j in range(3)] for i in range(3)])


# closed forms in kappa
#
# Every kappa factor is a difference of complete integrals that vanishes like a power
# of m = k^2 as k -> 0. Below SERIES_KAPPA they are evaluated from exact Maclaurin
# coefficients in m with the vanishing orders divided out.

SERIES_KAPPA = 0.1
SERIES_ORDER = 14
HALF_PI = 0.5 * math.pi


def _poly_mul(p, q):
    out = [Fraction(0)] * (SERIES_ORDER + 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            if i + j <= SERIES_ORDER:
                out[i + j] += a * b
    return out


def _poly_add(*polys):
    out = [Fraction(0)] * (SERIES_ORDER + 1)
    for p in polys:
        for i, a in enumerate(p):
            out[i] += a
    return out


def _poly_scale(p, factor):
    return [factor * a for a in p]


def _divide_by_m(p, power):
    if any(p[:power]):
        raise ArithmeticError(f"series does not vanish to order m^{power}")
    return p[power:]


@functools.lru_cache(maxsize=None)
def _small_modulus_series():
    """Float Maclaurin coefficients in m of the kappa factors, in units of pi/2."""
    k, e = [], []
    a = Fraction(1)
    for n in range(SERIES_ORDER + 1):
        if n:
            a *= Fraction(2 * n - 1, 2 * n)
        k.append(a * a)
        e.append(-a * a / (2 * n - 1))

    one, m = [Fraction(1)], [Fraction(0), Fraction(1)]
    one_minus_m, one_plus_m = _poly_add(one, _poly_scale(m, -1)), _poly_add(one, m)
    two_minus_m, two_plus_m = _poly_add(_poly_scale(one, 2), _poly_scale(m, -1)), _poly_add(_poly_scale(one, 2), m)

    k_minus_e = _poly_add(k, _poly_scale(e, -1))
    ek, ee, kk = _poly_mul(e, k), _poly_mul(e, e), _poly_mul(k, k)
    d22_numerator = _poly_add(ee, _poly_scale(_poly_mul(one_minus_m, kk), -1))
    d22_denominator = _poly_add(_poly_scale(_poly_mul(one_minus_m, k), 2), _poly_scale(_poly_mul(two_minus_m, e), -1))
    n = _divide_by_m(_poly_add(_poly_scale(ek, 2), _poly_scale(ee, -1), _poly_scale(_poly_mul(one_minus_m, kk), -1)), 1)
    q = _divide_by_m(_poly_add(_poly_mul(one_plus_m, e), _poly_scale(_poly_mul(one_minus_m, k), -1)), 1)
    sn_sq = _poly_scale(_divide_by_m(k_minus_e, 1), 2)
    sn_fourth = _divide_by_m(
        _poly_add(
            _poly_scale(_poly_mul(two_plus_m, k), Fraction(2, 3)),
            _poly_scale(_poly_mul(one_plus_m, e), Fraction(-4, 3)),
        ),
        2,
    )
    h = _divide_by_m(
        _poly_add(_poly_scale(_poly_mul(sn_fourth, n), 2), _poly_scale(_poly_mul(_poly_mul(sn_sq, sn_sq), q), -1)),
        1,
    )
    series = {
        "k": k,
        "e": e,
        "k_minus_e": _divide_by_m(k_minus_e, 1),
        "d22_numerator": _divide_by_m(d22_numerator, 2),
        "d22_denominator": _divide_by_m(d22_denominator, 2),
        "n": n,
        "q": q,
        "sn_sq": sn_sq,
        "sn_fourth": sn_fourth,
        "h": h,
    }
    return {name: np.array([float(c) for c in coeffs]) for name, coeffs in series.items()}


def _series(name, m):
    return float(np.polynomial.polynomial.polyval(m, _small_modulus_series()[name]))


def d22_ratio(kappa):
    """(E^2 - (1-k^2) K^2) / (2 (1-k^2) K - (2-k^2) E); negative on (0, 1), -> -pi/6 as k -> 0."""
    kappa = check_modulus(kappa)
    m = kappa**2
    if kappa < SERIES_KAPPA:
        return HALF_PI * _series("d22_numerator", m) / _series("d22_denominator", m)
    k_value, e_value = complete_integrals(kappa)
    return (e_value**2 - (1.0 - m) * k_value**2) / (2.0 * (1.0 - m) * k_value - (2.0 - m) * e_value)


def closed_form_d22_dnoidal(c, beta, sigma, kappa):
    """<L^-1 phi, phi> of the dnoidal wave: d22_ratio(kappa) / (alpha (1/c - beta))."""
    p = wave_parameters(WaveFamily.DNOIDAL, c, beta, sigma, 0.0, kappa)
    return d22_ratio(p.kappa) / (p.alpha * (1.0 / p.c - p.beta))


class SnoidalFactors(NamedTuple):
    """K, E, m, N = 2EK - E^2 - (1-m) K^2, Q = (1+m) E - (1-m) K and K - E."""

    k: float
    e: float
    m: float
    numerator: float
    denominator: float
    k_minus_e: float


def snoidal_factors(kappa):
    kappa = check_modulus(kappa)
    m = kappa**2
    if kappa < SERIES_KAPPA:
        return SnoidalFactors(
            k=HALF_PI * _series("k", m),
            e=HALF_PI * _series("e", m),
            m=m,
            numerator=HALF_PI**2 * m * _series("n", m),
            denominator=HALF_PI * m * _series("q", m),
            k_minus_e=HALF_PI * m * _series("k_minus_e", m),
        )
    k_value, e_value = complete_integrals(kappa)
    return SnoidalFactors(
        k=k_value,
        e=e_value,
        m=m,
        numerator=2.0 * e_value * k_value - e_value**2 - (1.0 - m) * k_value**2,
        denominator=(1.0 + m) * e_value - (1.0 - m) * k_value,
        k_minus_e=k_value - e_value,
    )


def closed_form_f(kappa):
    """F = 2K + 2E(-1 + k^2 E / Q) = 2N / Q; positive, -> 2 pi / 3 as k -> 0."""
    f = snoidal_factors(kappa)
    return 2.0 * f.numerator / f.denominator


def _sn_power_integral(kappa, integrand):
    k_value, _ = complete_integrals(kappa)

    def f(u):
        sn, _, dn = jacobi_sn_cn_dn(u, kappa)
        return integrand(sn, dn)

    value, _ = integrate.quad(f, 0.0, 2.0 * k_value, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return value


def sn_power_integrals(kappa):
    """(int sn^2, int sn^4) over [0, 2K] by quadrature."""
    kappa = check_modulus(kappa)
    return (
        _sn_power_integral(kappa, lambda sn, dn: sn**2),
        _sn_power_integral(kappa, lambda sn, dn: sn**4),
    )


def f_from_quadrature(kappa):
    kappa = check_modulus(kappa)
    k_value, _ = complete_integrals(kappa)
    m = kappa**2
    sn_sq, _ = sn_power_integrals(kappa)
    weighted = _sn_power_integral(kappa, lambda sn, dn: (1.0 + sn**2) / dn**2)
    return (sn_sq + weighted - 2.0 * k_value) ** 2 / ((1.0 - m) * weighted) - m * weighted / (1.0 - m)


def closed_form_d22_snoidal(c, beta, sigma, kappa):
    """<L^-1 phi, phi> of the snoidal wave: F(kappa) / (alpha (beta - 1/c))."""
    p = wave_parameters(WaveFamily.SNOIDAL, c, beta, sigma, 0.0, kappa)
    return closed_form_f(p.kappa) / (p.alpha * p.nonlinearity)


def sn_moments(kappa):
    """(int sn^2, int sn^4) over [0, 2K] in closed form."""
    kappa = check_modulus(kappa)
    m = kappa**2
    if kappa < SERIES_KAPPA:
        return HALF_PI * _series("sn_sq", m), HALF_PI * _series("sn_fourth", m)
    k_value, e_value = complete_integrals(kappa)
    sn_sq = 2.0 * (k_value - e_value) / m
    sn_fourth = (2.0 * (2.0 + m) * k_value - 4.0 * (1.0 + m) * e_value) / (3.0 * m**2)
    return sn_sq, sn_fourth


def closed_form_h(kappa):
    """H = (int_0^2K sn^4) F - (int_0^2K sn^2)^2; positive, ~ pi^2 k^2 / 96 for small k."""
    kappa = check_modulus(kappa)
    if kappa < SERIES_KAPPA:
        m = kappa**2
        return HALF_PI**2 * m * _series("h", m) / _series("q", m)
    sn_sq, sn_fourth = sn_moments(kappa)
    return sn_fourth * closed_form_f(kappa) - sn_sq**2


def h_from_quadrature(kappa):
    sn_sq, sn_fourth = sn_power_integrals(kappa)
    return sn_fourth * f_from_quadrature(kappa) - sn_sq**2


def closed_form_l2_inverse_dphi_snoidal(c, beta, sigma, kappa):
    """<L2^-1 phi', phi'> of the snoidal wave in closed form."""
    p = wave_parameters(WaveFamily.SNOIDAL, c, beta, sigma, 0.0, kappa)
    f = snoidal_factors(p.kappa)
    return -(p.phi0**2) * f.numerator / (p.alpha * f.m * f.k_minus_e)


def closed_form_d_snoidal(c, beta, sigma, kappa):
    """The snoidal D matrix assembled entirely from elliptic integrals."""
    p = wave_parameters(WaveFamily.SNOIDAL, c, beta, sigma, 0.0, kappa)
    sn_sq, sn_fourth = sn_moments(p.kappa)
    components = DComponents(
        l_inverse_phi_phi=closed_form_d22_snoidal(c, beta, sigma, kappa),
        l2_inverse_dphi_dphi=closed_form_l2_inverse_dphi_snoidal(c, beta, sigma, kappa),
        phi_norm_sq=2.0 * p.phi0**2 * sn_sq / p.alpha,
        phi_sq_norm_sq=2.0 * p.phi0**4 * sn_fourth / p.alpha,
        period=p.period,
    )
    entries = _d_entries(
        p.c, p.beta, p.period,
        components.l_inverse_phi_phi,
        components.l2_inverse_dphi_dphi,
        components.phi_norm_sq,
        components.phi_sq_norm_sq,
    )
    return _d_matrix(entries, components)


# verdict


@dataclass(frozen=True)
class StabilityReport:
    family: WaveFamily
    c: float
    beta: float
    sigma: float
    omega: float
    kappa: float
    grid_size: int
    n_h: int
    n_d: int
    k_ham: Optional[int]
    det_d: float
    k_real: int
    k_complex_quadruplets: int
    max_real_part: float
    spectral_radius: float
    zero_cluster_dim: int
    verdict: Verdict
    consistency: bool
    index_formula_applies: bool

    ROW_HEADER = (
        "family", "c", "beta", "sigma", "kappa", "nH", "nD", "kHam",
        "detD", "kReal", "maxRe", "verdict",
    )

    @property
    def spectrally_stable(self):
        """max Re lambda at round-off level relative to the spectral radius."""
        return self.max_real_part <= 1e-6 * self.spectral_radius

    def to_row(self):
        return (
            self.family.value, self.c, self.beta, self.sigma, self.kappa,
            self.n_h, self.n_d, self.k_ham, self.det_d, self.k_real,
            self.max_real_part, self.verdict.value,
        )

    def to_dict(self):
        return {
            "family": self.family.value,
            "c": self.c,
            "beta": self.beta,
            "sigma": self.sigma,
            "omega": self.omega,
            "kappa": self.kappa,
            "grid_size": self.grid_size,
            "n_h": self.n_h,
            "n_d": self.n_d,
            "k_ham": self.k_ham,
            "det_d": self.det_d,
            "k_real": self.k_real,
            "k_complex_quadruplets": self.k_complex_quadruplets,
            "max_real_part": self.max_real_part,
            "zero_cluster_dim": self.zero_cluster_dim,
            "verdict": self.verdict.value,
            "consistency": self.consistency,
            "index_formula_applies": self.index_formula_applies,
        }


def _decide(k_ham, k_real, k_complex):
    if k_ham < 0:
        return Verdict.INDETERMINATE
    if k_ham == 0:
        return Verdict.STABLE
    if k_ham % 2 == 1:
        return Verdict.UNSTABLE
    if k_real >= 1 or k_complex >= 1:
        return Verdict.UNSTABLE
    return Verdict.INDETERMINATE


def krein_verdict(wave, op=None, eigen=None):
    """Combine n(H), n(D) and the direct eigenvalue counts of JH into a verdict.

    For c < 0 the index count is not available and the verdict rests on the counts alone.
    """
    p = wave.params
    op = op or assemble_jh(wave)
    eigen = eigen or eigen_spectrum_jh(op)
    d = assemble_d(wave)
    n_h = morse_index_h(wave, op.h)
    k_real, k_complex = eigen.k_real, eigen.k_complex_quadruplets

    applies = p.c > 0
    if applies:
        k_ham = n_h - d.n_d
        verdict = _decide(k_ham, k_real, k_complex)
        gap = k_ham - k_real - 2 * k_complex
        consistency = k_ham >= 0 and gap >= 0 and gap % 2 == 0
        if not consistency:
            logger.warning(
                "index count k_ham=%d disagrees with k_real=%d, quadruplets=%d",
                k_ham, k_real, k_complex,
            )
    else:
        k_ham = None
        unstable = k_real >= 1 or k_complex >= 1
        verdict = Verdict.UNSTABLE if unstable else Verdict.STABLE
        consistency = True
        logger.info("c < 0: n(H) grows with the grid, verdict from eigenvalue counts only")

    return StabilityReport(
        family=p.family,
        c=p.c,
        beta=p.beta,
        sigma=p.sigma,
        omega=p.omega,
        kappa=p.kappa,
        grid_size=wave.grid_size,
        n_h=n_h,
        n_d=d.n_d,
        k_ham=k_ham,
        det_d=d.det,
        k_real=k_real,
        k_complex_quadruplets=k_complex,
        max_real_part=eigen.max_real_part,
        spectral_radius=eigen.spectral_radius,
        zero_cluster_dim=eigen.zero_cluster_dim,
        verdict=verdict,
        consistency=consistency,
        index_formula_applies=applies,
    )


# snoidal asymptotics and continuation


class AsymptoticsRow(NamedTuple):
    epsilon: float
    beta: float
    det_d: float
    prediction: float
    ratio: float
    asymptotic: bool


def _positive_epsilons(epsilons):
    values = [float(e) for e in epsilons]
    if not values:
        raise ParameterDomainError("at least one epsilon is required")
    for e in values:
        if not math.isfinite(e) or e <= 0.0:
            raise ParameterDomainError(f"epsilon must be positive, got {e!r}")
    return values


def snoidal_detd_asymptotics(c, sigma, kappa, epsilons, grid_size=256):
    """det D against its leading small-epsilon prediction, beta = 1/c + epsilon.

    The prediction is D33 phi0^4 H(kappa) / (alpha^2 c^2 (c beta - 1)^2).
    """
    h_value = closed_form_h(kappa)
    rows = []
    for epsilon in _positive_epsilons(epsilons):
        beta = 1.0 / c + epsilon
        wave = make_snoidal(c, beta, sigma, 0.0, kappa, grid_size)
        d = assemble_d(wave)
        p = wave.params
        prediction = (
            d.entries[2, 2] * p.phi0**4 * h_value
            / (p.alpha**2 * p.c**2 * (p.c * p.beta - 1.0) ** 2)
        )
        ratio = d.det / prediction
        asymptotic = abs(ratio - 1.0) <= ASYMPTOTIC_RATIO_TOL
        if not asymptotic:
            logger.warning("epsilon=%g: det D / prediction = %.4g, not in the asymptotic regime", epsilon, ratio)
        rows.append(AsymptoticsRow(epsilon, beta, d.det, prediction, ratio, asymptotic))
    return rows


class ContinuationPoint(NamedTuple):
    epsilon: float
    beta: float
    k_real: int
    k_complex_quadruplets: int
    zero_cluster_dim: int
    max_real_part: float
    det_d: float


@dataclass(frozen=True)
class ContinuationResult:
    c: float
    sigma: float
    kappa: float
    points: list = field(default_factory=list)

    @property
    def holds(self):
        """Every point keeps a real unstable eigenvalue and a five-dimensional zero cluster."""
        return bool(self.points) and all(
            pt.k_real >= 1 and pt.zero_cluster_dim == ZERO_CLUSTER_DIM for pt in self.points
        )

    @property
    def unstable_throughout(self):
        """Every point has a real eigenvalue or a complex quadruplet off the imaginary axis."""
        return bool(self.points) and all(pt.k_real >= 1 or pt.k_complex_quadruplets >= 1 for pt in self.points)


def continuation_sweep(c, sigma, kappa, epsilons, grid_size=256, progress=None):
    """Follow the snoidal spectrum as beta = 1/c + epsilon decreases toward 1/c."""
    points = []
    for epsilon in sorted(_positive_epsilons(epsilons), reverse=True):
        beta = 1.0 / c + epsilon
        wave = make_snoidal(c, beta, sigma, 0.0, kappa, grid_size)
        eigen = eigen_spectrum_jh(assemble_jh(wave))
        points.append(ContinuationPoint(
            epsilon=epsilon,
            beta=beta,
            k_real=eigen.k_real,
            k_complex_quadruplets=eigen.k_complex_quadruplets,
            zero_cluster_dim=eigen.zero_cluster_dim,
            max_real_part=eigen.max_real_part,
            det_d=assemble_d(wave).det,
        ))
        logger.info(
            "epsilon=%g: k_real=%d, quadruplets=%d, zero cluster %d",
            epsilon, eigen.k_real, eigen.k_complex_quadruplets, eigen.zero_cluster_dim,
        )
        if progress is not None:
            progress(epsilon)
    return ContinuationResult(c=float(c), sigma=float(sigma), kappa=float(kappa), points=points)


# parameter sweeps


class SweepPoint(NamedTuple):
    family: str
    c: float
    beta: float
    sigma: float
    omega: float
    kappa: float
    grid_size: int = 256


def evaluate_point(point):
    wave = make_wave(point.family, point.c, point.beta, point.sigma, point.omega, point.kappa, point.grid_size)
    return krein_verdict(wave)


def validate_points(points):
    """Reject the whole sweep up front when any point lies outside its family's domain."""
    for point in points:
        wave_parameters(point.family, point.c, point.beta, point.sigma, point.omega, point.kappa)


def sweep(points, workers=1):
    """Yield a StabilityReport per point, in input order."""
    points = list(points)
    validate_points(points)
    if workers <= 1:
        yield from map(evaluate_point, points)
        return
    with ProcessPoolExecutor(max_workers=workers) as executor:
        yield from executor.map(evaluate_point, points)

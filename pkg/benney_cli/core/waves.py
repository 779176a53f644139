"""Periodic traveling waves of the Benney short/long-wave system.

The short-wave envelope phi solves phi'' - sigma*phi = (beta - 1/c) phi^3 and the
long wave is psi = -phi^2/c + gamma. Two families of bounded periodic orbits are
built here:

* dnoidal: phi = phi0 dn(alpha x, kappa) for 1/c - beta > 0 and sigma > 0,
* snoidal: phi = phi0 sn(alpha x, kappa) for 1/c - beta < 0 and sigma < 0.

Profiles are sampled on the uniform periodic grid x_j = -T + 2Tj/N of one full
period [-T, T).
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from benney_cli.core.elliptic import check_modulus, complete_k, jacobi_sn_cn_dn
from benney_cli.errors import ParameterDomainError, ResolutionError

logger = logging.getLogger(__name__)

MIN_GRID_SIZE = 32
RESIDUAL_RTOL = 1e-8


class WaveFamily(str, Enum):
    DNOIDAL = "dnoidal"
    SNOIDAL = "snoidal"


@dataclass(frozen=True)
class WaveParameters:
    c: float
    beta: float
    sigma: float
    omega: float
    kappa: float
    family: WaveFamily
    alpha: float
    phi0: float
    gamma: float
    half_period: float
    first_integral_a: Optional[float] = None
    phi1_sq: Optional[float] = None

    @property
    def nonlinearity(self):
        """The cubic coefficient beta - 1/c of the profile equation."""
        return self.beta - 1.0 / self.c

    @property
    def period(self):
        return 2.0 * self.half_period

    def to_dict(self):
        data = asdict(self)
        data["family"] = self.family.value
        return data


@dataclass(frozen=True, eq=False)
class WaveProfile:
    params: WaveParameters
    x: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    dphi: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)
    ode_residual: float = 0.0
    first_integral_residual: float = 0.0

    @property
    def grid_size(self):
        return self.x.size

    @property
    def half_period(self):
        return self.params.half_period

    @property
    def spacing(self):
        return 2.0 * self.params.half_period / self.x.size

    def inner(self, u, v):
        """Grid quadrature of u*v over one period (trapezoid rule on a periodic grid)."""
        return self.spacing * float(np.dot(u, v))

    def to_dict(self):
        return {
            "parameters": self.params.to_dict(),
            "grid_size": self.grid_size,
            "ode_residual": self.ode_residual,
            "first_integral_residual": self.first_integral_residual,
            "x": self.x,
            "phi": self.phi,
            "dphi": self.dphi,
            "psi": self.psi,
        }

    def to_rows(self):
        header = ["x", "phi", "dphi", "psi"]
        rows = list(zip(self.x, self.phi, self.dphi, self.psi))
        return header, rows


class PhaseCheck(NamedTuple):
    nearest: int
    residual: float
    q: float


def wave_grid(half_period, grid_size):
    """Uniform periodic grid x_j = -T + 2Tj/N, j = 0..N-1."""
    return -half_period + 2.0 * half_period * np.arange(grid_size) / grid_size


def wavenumbers(grid_size, half_period):
    """Angular wavenumbers pi*k/T in numpy FFT order."""
    return 2.0 * np.pi * np.fft.fftfreq(grid_size, d=2.0 * half_period / grid_size)


def spectral_derivative(samples, half_period, order=1):
    """Fourier derivative of periodic samples; the Nyquist mode is dropped for odd orders."""
    samples = np.asarray(samples, dtype=float)
    k = wavenumbers(samples.size, half_period)
    if order % 2 == 1 and samples.size % 2 == 0:
        k[samples.size // 2] = 0.0
    return np.real(np.fft.ifft((1j * k) ** order * np.fft.fft(samples)))


def _check_grid_size(grid_size):
    if int(grid_size) != grid_size or grid_size % 2 or grid_size < MIN_GRID_SIZE:
        raise ParameterDomainError(
            f"grid size must be an even integer >= {MIN_GRID_SIZE}, got {grid_size!r}"
        )
    return int(grid_size)


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise ParameterDomainError(f"{name} must be finite, got {value!r}")


def wave_parameters(family, c, beta, sigma, omega, kappa):
    """Derived constants of a wave; raises ParameterDomainError outside the family's domain."""
    family = WaveFamily(family)
    c, beta, sigma, omega = float(c), float(beta), float(sigma), float(omega)
    _check_finite(c=c, beta=beta, sigma=sigma, omega=omega)
    kappa = check_modulus(kappa)
    if c == 0.0:
        raise ParameterDomainError("wave speed c must be nonzero")

    gap = 1.0 / c - beta
    m = kappa**2
    k_value = complete_k(kappa)
    gamma = sigma + c**2 / 4.0 - omega

    if family is WaveFamily.DNOIDAL:
        if gap <= 0.0:
            raise ParameterDomainError(f"dnoidal waves need 1/c - beta > 0, got {gap!r}")
        if sigma <= 0.0:
            raise ParameterDomainError(f"dnoidal waves need sigma > 0, got {sigma!r}")
        alpha = math.sqrt(sigma / (2.0 - m))
        phi0_sq = 2.0 * sigma / ((2.0 - m) * gap)
        half_period = k_value / alpha
        phi1_sq = phi0_sq * (1.0 - m)
    else:
        if gap >= 0.0:
            raise ParameterDomainError(f"snoidal waves need 1/c - beta < 0, got {gap!r}")
        if sigma >= 0.0:
            raise ParameterDomainError(f"snoidal waves need sigma < 0, got {sigma!r}")
        alpha = math.sqrt(-sigma / (1.0 + m))
        phi0_sq = 2.0 * sigma * m / (gap * (1.0 + m))
        half_period = 2.0 * k_value / alpha
        phi1_sq = None

    return WaveParameters(
        c=c,
        beta=beta,
        sigma=sigma,
        omega=omega,
        kappa=kappa,
        family=family,
        alpha=alpha,
        phi0=math.sqrt(phi0_sq),
        gamma=gamma,
        half_period=half_period,
        phi1_sq=phi1_sq,
    )


def _psi(params, phi):
    return -(phi**2) / params.c + params.gamma


def psi_profile(wave):
    """Long-wave component psi = -phi^2/c + gamma."""
    return _psi(wave.params, wave.phi)


def ode_residual(params, phi, half_period):
    """max |phi'' - sigma*phi - (beta - 1/c) phi^3| with a spectral second derivative."""
    d2 = spectral_derivative(phi, half_period, order=2)
    return float(np.max(np.abs(d2 - params.sigma * phi - params.nonlinearity * phi**3)))


def first_integral(params, phi, dphi):
    """phi'^2 - (beta - 1/c) phi^4 / 2 - sigma phi^2, constant along a wave."""
    return dphi**2 - 0.5 * params.nonlinearity * phi**4 - params.sigma * phi**2


def _build_profile(params, grid_size):
    x = wave_grid(params.half_period, grid_size)
    sn, cn, dn = jacobi_sn_cn_dn(params.alpha * x, params.kappa)
    amp, alpha, m = params.phi0, params.alpha, params.kappa**2
    if params.family is WaveFamily.DNOIDAL:
        phi = amp * dn
        dphi = -amp * alpha * m * sn * cn
    else:
        phi = amp * sn
        dphi = amp * alpha * cn * dn

    residual = ode_residual(params, phi, params.half_period)
    scale = float(np.max(np.abs(phi))) * max(abs(params.sigma), 1.0)
    if residual > RESIDUAL_RTOL * scale:
        raise ResolutionError(
            f"profile equation residual {residual:.3e} exceeds {RESIDUAL_RTOL:g} x {scale:.3e}; "
            "increase the grid size"
        )

    integral = first_integral(params, phi, dphi)
    a_value = float(np.median(integral))
    terms = (dphi**2, 0.5 * params.nonlinearity * phi**4, params.sigma * phi**2)
    integral_scale = max(float(np.max(np.abs(t))) for t in terms) or 1.0
    spread = float(np.max(np.abs(integral - a_value))) / integral_scale
    if spread > RESIDUAL_RTOL:
        raise ResolutionError(f"first integral varies by {spread:.3e} across the grid")

    params = replace(params, first_integral_a=a_value)
    psi = _psi(params, phi)
    logger.debug(
        "%s wave: N=%d T=%.6g phi0=%.6g residual=%.2e spread=%.2e",
        params.family.value, grid_size, params.half_period, params.phi0, residual, spread,
    )
    return WaveProfile(
        params=params,
        x=x,
        phi=phi,
        dphi=dphi,
        psi=psi,
        ode_residual=residual,
        first_integral_residual=spread,
    )


def make_dnoidal(c, beta, sigma, omega, kappa, grid_size=256):
    """Sample phi = phi0 dn(alpha x, kappa) and its analytic derivative on [-T, T)."""
    grid_size = _check_grid_size(grid_size)
    params = wave_parameters(WaveFamily.DNOIDAL, c, beta, sigma, omega, kappa)
    return _build_profile(params, grid_size)


def make_snoidal(c, beta, sigma, omega, kappa, grid_size=256):
    """Sample phi = phi0 sn(alpha x, kappa) over one full period 2T = 4K/alpha."""
    grid_size = _check_grid_size(grid_size)
    params = wave_parameters(WaveFamily.SNOIDAL, c, beta, sigma, omega, kappa)
    return _build_profile(params, grid_size)


def make_wave(family, c, beta, sigma, omega, kappa, grid_size=256):
    if WaveFamily(family) is WaveFamily.DNOIDAL:
        return make_dnoidal(c, beta, sigma, omega, kappa, grid_size)
    return make_snoidal(c, beta, sigma, omega, kappa, grid_size)


def check_phase_periodicity(params):
    """How far the carrier phase c*T/(2 pi) is from an integer.

    Only a diagnostic: the linearized problem is posed on [-T, T] whatever the value.
    """
    k_value = complete_k(params.kappa)
    m = params.kappa**2
    if params.family is WaveFamily.DNOIDAL:
        q = params.c * k_value * math.sqrt(2.0 - m) / (2.0 * math.pi * math.sqrt(params.sigma))
    else:
        q = params.c * k_value * math.sqrt(1.0 + m) / (math.pi * math.sqrt(-params.sigma))
    nearest = int(round(q))
    return PhaseCheck(nearest=nearest, residual=abs(q - nearest), q=q)

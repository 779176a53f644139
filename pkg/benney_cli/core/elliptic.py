"""Complete elliptic integrals and Jacobi elliptic functions.

All routines take the elliptic *modulus* ``kappa`` (the parameter is m = kappa**2)
and require 0 < kappa < 1 strictly. Both K/E and sn/cn/dn come from the same
arithmetic-geometric mean sequence a_n, b_n, c_n started at (1, kappa', kappa).
"""

import math

import numpy as np

from benney_cli.errors import ParameterDomainError

EPS = np.finfo(float).eps
MAX_AGM_STEPS = 64


def check_modulus(kappa):
    """Validate an elliptic modulus and return it as a float."""
    try:
        value = float(kappa)
    except (TypeError, ValueError):
        raise ParameterDomainError(f"elliptic modulus must be a real number, got {kappa!r}")
    if not math.isfinite(value) or not 0.0 < value < 1.0:
        raise ParameterDomainError(f"elliptic modulus must satisfy 0 < kappa < 1, got {value!r}")
    return value


def complementary_modulus(kappa):
    """kappa' = sqrt(1 - kappa^2), evaluated without cancellation for small kappa."""
    return math.sqrt((1.0 - kappa) * (1.0 + kappa))


def agm_sequence(kappa):
    """Return the AGM arrays (a, c), with c_0 = kappa and c_N below round-off."""
    kappa = check_modulus(kappa)
    a, b, c = 1.0, complementary_modulus(kappa), kappa
    a_seq, c_seq = [a], [c]
    for _ in range(MAX_AGM_STEPS):
        if abs(c) <= EPS * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return np.array(a_seq), np.array(c_seq)


def complete_integrals(kappa):
    """Return (K(kappa), E(kappa)) from a single AGM pass."""
    a_seq, c_seq = agm_sequence(kappa)
    k_value = math.pi / (2.0 * a_seq[-1])
    weights = 2.0 ** (np.arange(len(c_seq)) - 1.0)
    e_value = k_value * (1.0 - float(np.sum(weights * c_seq**2)))
    return k_value, e_value


def complete_k(kappa):
    """Complete elliptic integral of the first kind K(kappa)."""
    return complete_integrals(kappa)[0]


def complete_e(kappa):
    """Complete elliptic integral of the second kind E(kappa)."""
    return complete_integrals(kappa)[1]


def jacobi_sn_cn_dn(u, kappa):
    """Jacobi elliptic functions (sn, cn, dn) at u for modulus kappa.

    Descending Landen recursion: phi_N = 2^N a_N u, then
    phi_{n-1} = (phi_n + arcsin((c_n / a_n) sin phi_n)) / 2 and sn = sin phi_0.
    ``u`` may be a scalar or an array; scalars give floats back.
    """
    kappa = check_modulus(kappa)
    u_arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u_arr)):
        raise ParameterDomainError("Jacobi functions need a finite argument")

    a_seq, c_seq = agm_sequence(kappa)
    steps = len(a_seq) - 1
    phi = (2.0**steps) * a_seq[-1] * u_arr
    for n in range(steps, 0, -1):
        ratio = c_seq[n] / a_seq[n]
        phi = 0.5 * (phi + np.arcsin(np.clip(ratio * np.sin(phi), -1.0, 1.0)))

    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(np.maximum(1.0 - kappa**2 * sn**2, 0.0))
    if u_arr.ndim == 0:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn

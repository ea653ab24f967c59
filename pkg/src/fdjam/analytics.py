"""Closed-form and quadrature evaluation of the wiretap-side statistics.

The quantity everything here revolves around is the CDF of the best
eavesdropper's SINR when eavesdroppers form a homogeneous PPP of density
``lambda_e`` around the transmitter, each one seeing the confidential signal
attenuated over its own distance and the receiver's jamming attenuated over
the (law-of-cosines) distance to the receiver, under unit-mean exponential
fading on every path.  Averaging the per-point hit probability over the PPP
gives

    F(x) = exp( -lambda_e/2 * J(x) ),

with ``J`` a double integral over squared distance and azimuth.  In the
small transmitter-receiver separation regime the jamming path loss equals
the signal path loss and ``J`` collapses to a closed form; both routes are
implemented and cross-validated (the simulator provides a third,
Monte Carlo, route).

All probabilities returned by this module are clamped to [0, 1] to guard
against floating-point residue of order 1e-17.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import integrate

from .errors import QuadratureError, ValidationError
from .params import SwitchedSolution, SystemParams

__all__ = [
    "LinkState",
    "ComparisonMetrics",
    "main_channel_sinr",
    "capacity",
    "exposure_integral",
    "cdf_phi_e_exact",
    "cdf_phi_e_approx",
    "sop_exact",
    "sop_approx",
    "hd_weight",
    "throughput_fd",
    "throughput_hd",
    "comparison_metrics",
]

# Tail cutoff for the radial integral: beyond u_cut the integrand is bounded
# by exp(-_TAIL_EXPONENT) ~ 2e-22, negligible against the 1e-8 relative
# quadrature tolerance.
_TAIL_EXPONENT = 50.0
_QUAD_EPSREL = 1e-8


@dataclass(frozen=True)
class LinkState:
    """One slot's transmit powers and fading gains on the A-B link."""

    p_a: float       # Alice transmit power [W], > 0
    p_b: float       # Bob jamming power [W], >= 0
    gamma_ab: float  # main-channel gain, >= 0
    gamma_bb: float  # self-interference channel gain, >= 0


def main_channel_sinr(link: LinkState, params: SystemParams) -> float:
    """SINR at the receiver: signal over noise plus residual self-interference."""
    signal = link.p_a * link.gamma_ab * params.d_ab ** (-params.alpha)
    return signal / (params.sigma_b2 + params.rho * link.p_b * link.gamma_bb)


def capacity(sinr: float) -> float:
    """Shannon capacity log2(1 + sinr) in bits/s/Hz."""
    return math.log2(1.0 + sinr)


def _clamp01(p: float) -> float:
    return min(1.0, max(0.0, p))


@lru_cache(maxsize=512)
def _exposure_integral_cached(x: float, p_a: float, p_b: float,
                              sigma_e2: float, alpha: float, d_ab: float) -> float:
    """The double integral J(x); see module docstring.

    Integrates over u = (eavesdropper-to-transmitter distance)^2 and the
    azimuth theta, exploiting the theta -> 2*pi - theta symmetry.  The
    integrand has a sharp notch where an eavesdropper sits on top of the
    receiver (jamming diverges), so breakpoints around u = d_ab^2 are passed
    to the adaptive scheme.
    """
    a = sigma_e2 * x / p_a            # radial decay coefficient
    q = p_b * x / p_a                 # jamming-to-signal weight
    half = alpha / 2.0
    u_cut = (_TAIL_EXPONENT / a) ** (1.0 / half)
    s = d_ab * d_ab

    def inner(theta: float) -> float:
        two_d_cos = 2.0 * d_ab * math.cos(theta)

        def f(u: float) -> float:
            d_bk2 = s + u - two_d_cos * math.sqrt(u)
            return math.exp(-a * u ** half) / (1.0 + q * (u / d_bk2) ** half)

        pts = sorted({p for p in (0.25 * s, s, 4.0 * s, a ** (-1.0 / half))
                      if 0.0 < p < u_cut})
        out = integrate.quad(f, 0.0, u_cut, points=pts or None,
                             limit=400, epsabs=0.0, epsrel=_QUAD_EPSREL * 0.1,
                             full_output=1)
        if len(out) > 3:
            raise QuadratureError(
                f"radial quadrature did not converge at theta={theta}: {out[3]}")
        return out[0]

    out = integrate.quad(inner, 0.0, math.pi, limit=200,
                         epsabs=0.0, epsrel=_QUAD_EPSREL, full_output=1)
    if len(out) > 3:
        raise QuadratureError(f"azimuthal quadrature did not converge: {out[3]}")
    val, abserr = out[0], out[1]
    if abserr > 10.0 * _QUAD_EPSREL * abs(val) + 1e-300:
        raise QuadratureError(
            f"quadrature error estimate {abserr} exceeds tolerance for J={val}")
    return 2.0 * val


def exposure_integral(x: float, p_a: float, p_b: float, params: SystemParams) -> float:
    """J(x) such that the best-eavesdropper SINR CDF is exp(-lambda_e/2 * J).

    Independent of ``lambda_e``, so sweeps over the eavesdropper density can
    reuse one evaluation (results are memoized on the remaining arguments).
    """
    _check_sinr_args(x, p_a, p_b)
    return _exposure_integral_cached(float(x), float(p_a), float(p_b),
                                     float(params.sigma_e2), float(params.alpha),
                                     float(params.d_ab))


def _check_sinr_args(x: float, p_a: float, p_b: float) -> None:
    if x <= 0.0:
        raise ValidationError(f"SINR threshold x must be > 0: {x}")
    if p_a <= 0.0:
        raise ValidationError(f"p_a must be > 0 W: {p_a}")
    if p_b < 0.0:
        raise ValidationError(f"p_b must be >= 0 W: {p_b}")


def cdf_phi_e_exact(x: float, p_a: float, p_b: float, params: SystemParams) -> float:
    """Best-eavesdropper SINR CDF by adaptive double quadrature."""
    j = exposure_integral(x, p_a, p_b, params)
    return _clamp01(math.exp(-0.5 * params.lambda_e * j))


def cdf_phi_e_approx(x: float, p_a: float, p_b: float, params: SystemParams) -> float:
    """Best-eavesdropper SINR CDF, closed form for small d_ab.

    exp(-beta * lambda_e * (p_b*x/p_a + 1)^-1 * (sigma_e2*x/p_a)^(-2/alpha)).
    """
    _check_sinr_args(x, p_a, p_b)
    beta = (2.0 * math.pi / params.alpha) * math.gamma(2.0 / params.alpha)
    eta = 2.0 / params.alpha
    exposure = (beta * params.lambda_e
                / (p_b * x / p_a + 1.0)
                * (params.sigma_e2 * x / p_a) ** (-eta))
    return _clamp01(math.exp(-exposure))


def _rate_threshold(r_c: float, r_s: float) -> float:
    if r_s >= r_c:
        raise ValidationError(f"require r_s < r_c, got r_s={r_s}, r_c={r_c}")
    if r_s <= 0.0:
        raise ValidationError(f"r_s must be > 0: {r_s}")
    return 2.0 ** (r_c - r_s) - 1.0


def sop_exact(p_a: float, p_b: float, r_c: float, r_s: float,
              params: SystemParams) -> float:
    """Secrecy outage probability 1 - F(2^(r_c - r_s) - 1), quadrature route."""
    return _clamp01(1.0 - cdf_phi_e_exact(_rate_threshold(r_c, r_s), p_a, p_b, params))


def sop_approx(p_a: float, p_b: float, r_c: float, r_s: float,
               params: SystemParams) -> float:
    """Secrecy outage probability, closed-form small-d_ab route."""
    return _clamp01(1.0 - cdf_phi_e_approx(_rate_threshold(r_c, r_s), p_a, p_b, params))


def hd_weight(mu_b: float, rho: float) -> float:
    """Probability exp(-mu_b/rho) that the residual SI exceeds the switch level.

    rho = 0 (perfect suppression) is taken as the limit: the receiver always
    jams when mu_b > 0; the mu_b = 0 corner keeps the half-duplex branch.
    """
    if mu_b < 0.0:
        raise ValidationError(f"mu_b must be >= 0: {mu_b}")
    if not 0.0 <= rho <= 1.0:
        raise ValidationError(f"rho out of [0,1]: {rho}")
    if rho == 0.0:
        return 1.0 if mu_b == 0.0 else 0.0
    return math.exp(-mu_b / rho)


def throughput_fd(r_s: float, mu_a: float, mu_b: float, rho: float) -> float:
    """Secrecy throughput carried by the jamming mode:
    r_s * exp(-mu_a) * (1 - exp(-mu_b/rho))."""
    return r_s * math.exp(-mu_a) * (1.0 - hd_weight(mu_b, rho))


def throughput_hd(r_s: float, mu_a: float, mu_b: float, rho: float) -> float:
    """Secrecy throughput carried by the half-duplex mode:
    r_s * exp(-mu_a) * exp(-mu_b/rho)."""
    return r_s * math.exp(-mu_a) * hd_weight(mu_b, rho)


@dataclass(frozen=True)
class ComparisonMetrics:
    """Single-mode yardsticks evaluated on the jamming-eligible slots.

    ``omega_fd_comp`` and ``omega_hd_comp`` weight both parameter groups by
    the same event (residual SI below the switch level) so the two modes are
    compared on equal footing; ``p_fd``/``p_hd`` are the probabilities of
    actually transmitting in each mode.
    """

    omega_fd_comp: float
    omega_hd_comp: float
    p_fd: float
    p_hd: float


def comparison_metrics(solution: SwitchedSolution, params: SystemParams) -> ComparisonMetrics:
    """Evaluate the four comparison expressions for a switched solution."""
    w = hd_weight(solution.mu_b, params.rho)
    fd, hd = solution.fd, solution.hd
    return ComparisonMetrics(
        omega_fd_comp=fd.r_s * math.exp(-fd.mu_a) * (1.0 - w),
        omega_hd_comp=hd.r_s * math.exp(-hd.mu_a) * (1.0 - w),
        p_fd=math.exp(-fd.mu_a) * (1.0 - w),
        p_hd=math.exp(-hd.mu_a) * w,
    )

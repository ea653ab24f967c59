"""Off-line design: rates, on-off threshold, jamming power, mode switch.

For a fixed jamming power and switch threshold, the constrained
throughput maximization over codeword/secrecy rates reduces to two nested
scalar root problems in the substituted variables

    y  = 2^r_c - 1,        yz = 2^(r_c - r_s) - 1:

the secrecy-outage constraint pins ``yz`` (its left side is strictly
decreasing), and the first-order optimality condition pins ``y`` through the
strictly increasing map :func:`v_of_y`.  The throughput is quasi-concave in
``y``, in the jamming power, and the jamming-power derivative has a single
sign change, so every search below is a bracketed bisection.  The remaining
switch-threshold variable is a deterministic line search over a logarithmic
grid (:func:`optimize`).

All bisections run on the logarithm of the unknown with geometric bracket
expansion; failures raise :class:`~fdjam.errors.InfeasibleError` carrying
the bracket endpoints.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .analytics import hd_weight, throughput_fd, throughput_hd
from .errors import InfeasibleError, ValidationError
from .params import (DerivedConstants, FdParams, HdParams, SwitchedSolution,
                     SystemParams, derived_constants, validate)
from .units import dbm_to_watts

__all__ = [
    "GridSpec",
    "Step1Result",
    "Step2Result",
    "HdResult",
    "v_of_y",
    "omega_tilde_of_y",
    "solve_step1",
    "mu_a_from_sop_constraint",
    "solve_step2",
    "solve_hd",
    "optimize",
]

LN2 = math.log(2.0)

# Log-space search window; exp(+-700) stays clear of double overflow.
_T_MIN, _T_MAX = -700.0, 700.0
# Initial bracket for y and yz searches: [1e-9, 2^40], expanded on demand.
_T_LO0, _T_HI0 = math.log(1e-9), 40.0 * LN2
_XTOL_LOG = 1e-13
_MAX_ITER = 300


@dataclass(frozen=True)
class GridSpec:
    """Search grids for the jamming power and the mode-switch threshold.

    ``mu_b_steps`` logarithmic points cover [mu_b_min, mu_b_max], with the
    pure-HD point mu_b = 0 always prepended.  The jamming-power grid covers
    [p_b_floor, p_b_max] with ``p_b_steps`` logarithmic points; the floor
    also serves as the reported power when the throughput decreases over the
    whole range (degenerate FD).
    """

    mu_b_min: float = 1e-10
    mu_b_max: float = 1e-5
    mu_b_steps: int = 60
    p_b_floor: float = dbm_to_watts(-10.0)
    p_b_steps: int = 60

    def check(self, params: SystemParams) -> None:
        if not 0.0 < self.mu_b_min <= self.mu_b_max:
            raise ValidationError(
                f"grid requires 0 < mu_b_min <= mu_b_max, got "
                f"[{self.mu_b_min}, {self.mu_b_max}]")
        if self.mu_b_steps < 1:
            raise ValidationError(f"mu_b_steps must be >= 1: {self.mu_b_steps}")
        if self.p_b_floor <= 0.0:
            raise ValidationError(f"p_b_floor must be > 0 W: {self.p_b_floor}")
        if self.p_b_steps < 2:
            raise ValidationError(f"p_b_steps must be >= 2: {self.p_b_steps}")
        if params.p_b_max <= 0.0:
            raise ValidationError(
                f"p_b_max must be > 0 W to design the jamming mode: {params.p_b_max}")

    def mu_b_values(self) -> np.ndarray:
        log_pts = np.logspace(math.log10(self.mu_b_min),
                              math.log10(self.mu_b_max), self.mu_b_steps)
        return np.concatenate(([0.0], log_pts))

    def p_b_values(self, p_b_max: float) -> np.ndarray:
        floor = min(self.p_b_floor, p_b_max)
        if floor == p_b_max:
            return np.array([p_b_max])
        return np.logspace(math.log10(floor), math.log10(p_b_max), self.p_b_steps)


# --------------------------------------------------------------------------
# scalar root finding on log-transformed unknowns
# --------------------------------------------------------------------------

def _expand_bracket(g: Callable[[float], float], lo: float, hi: float,
                    what: str) -> Tuple[float, float, float, float]:
    """Geometrically widen [lo, hi] until g changes sign across it."""
    g_lo, g_hi = g(lo), g(hi)
    while (g_lo > 0.0) == (g_hi > 0.0):
        width = hi - lo
        moved = False
        if lo > _T_MIN:
            lo = max(_T_MIN, lo - width)
            g_lo = g(lo)
            moved = True
            if (g_lo > 0.0) != (g_hi > 0.0):
                break
        if hi < _T_MAX:
            hi = min(_T_MAX, hi + width)
            g_hi = g(hi)
            moved = True
        if not moved:
            raise InfeasibleError(
                f"no sign change bracketing {what}: "
                f"f({math.exp(lo):.6g}) = {g_lo:.6g}, "
                f"f({math.exp(hi):.6g}) = {g_hi:.6g}")
    return lo, hi, g_lo, g_hi


def _bisect(g: Callable[[float], float], lo: float, hi: float,
            g_lo: float, *, xtol: float = _XTOL_LOG) -> Tuple[float, int]:
    """Bisection on a bracketed sign change; returns (root, iterations)."""
    lo_pos = g_lo > 0.0
    iters = 0
    while hi - lo > xtol and iters < _MAX_ITER:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        iters += 1
        if g_mid == 0.0:
            return mid, iters
        if (g_mid > 0.0) == lo_pos:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), iters


def _solve_log(g: Callable[[float], float], what: str,
               t_lo: float = _T_LO0, t_hi: float = _T_HI0) -> Tuple[float, int]:
    lo, hi, g_lo, _ = _expand_bracket(g, t_lo, t_hi, what)
    t_root, iters = _bisect(g, lo, hi, g_lo)
    return math.exp(t_root), iters


# --------------------------------------------------------------------------
# step 1: rates and on-off threshold for a given jamming power
# --------------------------------------------------------------------------

def v_of_y(y: float, u: float) -> float:
    """Stationarity map: the redundancy variable yz at which the throughput
    derivative in y vanishes, as a function of y.

    v(y) = (1+y) * exp(-1/(u*(1+y))) - 1; strictly increasing in y, negative
    at y = 0, v(y) < y everywhere, and v(y) -> y as u -> infinity.
    """
    if y < 0.0:
        raise ValidationError(f"y must be >= 0: {y}")
    if u <= 0.0:
        raise ValidationError(f"u must be > 0: {u}")
    return (1.0 + y) * math.exp(-1.0 / (u * (1.0 + y))) - 1.0


def omega_tilde_of_y(y: float, yz: float, u: float) -> float:
    """Unweighted throughput objective log2((1+y)/(1+yz)) * exp(-u*y)."""
    return (math.log1p(y) - math.log1p(yz)) / LN2 * math.exp(-u * y)


def _log_sop_lhs(log_s: float, p_b: float, p_a_max: float,
                 sigma_e2: float, eta: float) -> float:
    """ln of the outage-constraint left side at yz = exp(log_s);
    strictly decreasing in log_s."""
    s = math.exp(log_s)
    return -math.log1p(s * p_b / p_a_max) - eta * (log_s + math.log(sigma_e2 / p_a_max))


@dataclass(frozen=True)
class Step1Result:
    """Optimal rates and on-off threshold for fixed jamming power and switch level."""

    y_star: float         # 2^r_c - 1 at the optimum
    yz_star: float        # 2^(r_c - r_s) - 1 pinned by the outage constraint
    r_c: float            # codeword rate [bits/s/Hz]
    r_s: float            # secrecy rate [bits/s/Hz]
    mu_a: float           # on-off threshold, = u * y_star
    omega_tilde: float    # r_s * exp(-mu_a)
    residual: float       # relative residual of the optimality equation at y_star
    omega_forms_gap: float  # relative gap between the two closed forms of omega_tilde
    iterations: int       # total bisection iterations (yz plus y searches)
    constants: DerivedConstants


def solve_step1(p_b: float, mu_b: float, params: SystemParams) -> Step1Result:
    """Maximize r_s*exp(-mu_a) over rates and on-off threshold at fixed p_b.

    Two bisections: the outage constraint pins yz (decreasing left side),
    then v(y) = yz pins y.  The second root is solved through the
    substitution z = 1/(u*(1+y)), which turns v(y) = yz into the strictly
    increasing scalar equation z + ln z = -ln u - ln(1+yz) and yields the
    secrecy rate r_s = z/ln2 and ln(1+y) = ln(1+yz) + z without subtractive
    cancellation, even when the rate gap is many orders below the rates.
    mu_a = u*y saturates the power budget exactly at the threshold.
    """
    validate(params)
    dc = derived_constants(params, p_b, mu_b)
    log_tau = math.log(dc.tau)

    yz_star, it_s = _solve_log(
        lambda t: _log_sop_lhs(t, p_b, params.p_a_max, params.sigma_e2, dc.eta) - log_tau,
        "the outage-constraint root yz")
    if not math.isfinite(yz_star):
        raise InfeasibleError(f"outage-constraint root not finite (tau={dc.tau})")

    log1p_yz = math.log1p(yz_star)
    c_rhs = -math.log(dc.u) - log1p_yz

    def g_z(s: float) -> float:
        return math.exp(s) + s - c_rhs

    if g_z(-690.0) > 0.0:
        raise InfeasibleError(
            f"secrecy rate underflows: yz={yz_star}, u={dc.u}, tau={dc.tau}")
    s_hi = 8.0
    while g_z(s_hi) < 0.0 and s_hi < 700.0:
        s_hi += 5.0
    s_root, it_y = _bisect(g_z, -690.0, s_hi, g_z(-690.0))
    z_star = math.exp(s_root)

    log1p_y = log1p_yz + z_star
    if log1p_y > 700.0:
        raise InfeasibleError(
            f"codeword rate beyond representable range: ln(1+y)={log1p_y}")
    y_star = math.expm1(log1p_y)
    r_c = log1p_y / LN2
    r_s = z_star / LN2
    mu_a = dc.u * y_star
    omega_tilde = r_s * math.exp(-mu_a)

    # Residual of the optimality equation: plug v(y*) back into the
    # outage-constraint left side and compare with tau (relative).
    v_root = v_of_y(y_star, dc.u)
    if v_root > 0.0:
        lhs = _log_sop_lhs(math.log(v_root), p_b, params.p_a_max,
                           params.sigma_e2, dc.eta)
        residual = abs(math.expm1(lhs - log_tau))
    else:
        residual = math.inf

    # The first-order condition makes r_s equal 1/((1+y)*u*ln2); the product
    # with exp(-u*y) is the second closed form of omega_tilde.
    omega_alt = math.exp(-mu_a) / ((1.0 + y_star) * dc.u * LN2)
    forms_gap = abs(omega_alt / omega_tilde - 1.0) if omega_tilde > 0.0 else math.inf

    return Step1Result(y_star=y_star, yz_star=yz_star, r_c=r_c, r_s=r_s,
                       mu_a=mu_a, omega_tilde=omega_tilde, residual=residual,
                       omega_forms_gap=forms_gap, iterations=it_s + it_y,
                       constants=dc)


def mu_a_from_sop_constraint(r_c: float, r_s: float, p_b: float, mu_b: float,
                             params: SystemParams) -> float:
    """On-off threshold required by the outage constraint alone.

    Inverts the worst-case outage exposure (evaluated at the on-off gain
    threshold and the switch-level residual SI) with respect to mu_a; the
    exposure is strictly decreasing in mu_a, so this is a log-space
    bisection.  Independent of the step-1 solve path on purpose: at a step-1
    optimum it must reproduce mu_a = u * y_star.
    """
    validate(params)
    dc = derived_constants(params, p_b, mu_b)
    k = 2.0 ** (r_c - r_s) - 1.0
    if k <= 0.0:
        raise ValidationError(f"require r_s < r_c, got r_s={r_s}, r_c={r_c}")
    den = (2.0 ** r_c - 1.0) * (params.sigma_b2 + p_b * mu_b)
    scale = k * params.d_ab ** (-params.alpha) / den
    log_tau = math.log(dc.tau)

    def g(t: float) -> float:
        mu_a = math.exp(t)
        return (-math.log1p(p_b * scale * mu_a)
                - dc.eta * math.log(params.sigma_e2 * scale * mu_a)
                - log_tau)

    root, _ = _solve_log(g, "the outage-constraint on-off threshold")
    return root


# --------------------------------------------------------------------------
# step 2: jamming power
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Step2Result:
    """Optimal jamming power for a given switch threshold."""

    p_b_dagger: float       # chosen jamming power [W]
    capped: bool            # p_b_dagger == p_b_max (interior root above budget)
    degenerate: bool        # throughput decreases over the whole range; floor used
    step1: Step1Result      # rates/threshold recomputed at p_b_dagger
    omega_tilde_dagger: float
    residual: float         # relative residual of the stationarity equation
    iterations: int


def _w_of(v: float, p_b: float, params: SystemParams, eta: float) -> float:
    return eta * params.p_a_max + (1.0 + eta) * p_b * v


def _derivative_sign(p_b: float, mu_b: float, params: SystemParams) -> float:
    """Sign-carrying bracket of d(omega_tilde*)/d(p_b).

    Equals u*v^2*(1+y)/(w*(1+v)) - varpi*y after exact cancellation of the
    varpi/u terms; computed in log form to survive extreme y.
    """
    r1 = solve_step1(p_b, mu_b, params)
    dc = r1.constants
    v = v_of_y(r1.y_star, dc.u)
    w = _w_of(v, p_b, params, dc.eta)
    gain = math.exp(math.log(dc.u) + 2.0 * math.log(v)
                    + math.log1p(r1.y_star) - math.log(w) - math.log1p(v))
    return gain - dc.varpi * r1.y_star


def _residual_eq_step2(p_b: float, mu_b: float, params: SystemParams) -> float:
    """Relative residual of varpi*y*w*(1+v) = u*v^2*(1+y) at p_b."""
    r1 = solve_step1(p_b, mu_b, params)
    dc = r1.constants
    v = v_of_y(r1.y_star, dc.u)
    if dc.varpi == 0.0 or v <= 0.0:
        return math.nan
    w = _w_of(v, p_b, params, dc.eta)
    log_lhs = (math.log(dc.varpi) + math.log(r1.y_star)
               + math.log(w) + math.log1p(v))
    log_rhs = math.log(dc.u) + 2.0 * math.log(v) + math.log1p(r1.y_star)
    return abs(math.expm1(log_lhs - log_rhs))


def solve_step2(mu_b: float, params: SystemParams,
                grid: Optional[GridSpec] = None) -> Step2Result:
    """Maximize the step-1 throughput over the jamming power.

    The derivative bracket has at most one sign change (quasi-concavity), so
    the search scans a logarithmic power grid for the change and refines it
    by bisection.  A derivative that is negative already at the floor means
    jamming only hurts (degenerate FD); positive up to the budget means the
    budget binds (capped).
    """
    validate(params)
    if mu_b < 0.0:
        raise ValidationError(f"mu_b must be >= 0: {mu_b}")
    grid = grid or GridSpec()
    grid.check(params)

    p_values = [float(p) for p in grid.p_b_values(params.p_b_max)]
    signs = [_derivative_sign(p, mu_b, params) for p in p_values]

    if signs[0] <= 0.0:
        p_dag, capped, degenerate = p_values[0], False, True
        iters = 0
    elif signs[-1] > 0.0:
        p_dag, capped, degenerate = params.p_b_max, True, False
        iters = 0
    else:
        i = next(k for k, d in enumerate(signs) if d <= 0.0)
        lo, hi = math.log(p_values[i - 1]), math.log(p_values[i])
        t_root, iters = _bisect(
            lambda t: _derivative_sign(math.exp(t), mu_b, params), lo, hi, signs[i - 1])
        p_dag, capped, degenerate = math.exp(t_root), False, False

    step1 = solve_step1(p_dag, mu_b, params)
    residual = math.nan if (capped or degenerate) else _residual_eq_step2(p_dag, mu_b, params)
    return Step2Result(p_b_dagger=p_dag, capped=capped, degenerate=degenerate,
                       step1=step1, omega_tilde_dagger=step1.omega_tilde,
                       residual=residual, iterations=iters)


# --------------------------------------------------------------------------
# half-duplex receiver
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HdResult:
    """Optimal half-duplex parameter group.

    ``omega_tilde`` is the unweighted throughput r_s*exp(-mu_a); ``omega_hd``
    multiplies in the probability that the receiver actually operates
    half-duplex at the given switch threshold.
    """

    hd: HdParams
    omega_tilde: float
    omega_hd: float
    residual: float
    iterations: int


def solve_hd(mu_b: float, params: SystemParams) -> HdResult:
    """Solve the half-duplex design directly (no jamming power anywhere).

    With zero jamming the outage constraint has the closed-form redundancy
    yz = (p_a_max/sigma_e2) * tau^(-alpha/2), and the rate optimality
    condition becomes a single increasing scalar equation in r_c,

        2^r_c * (r_c - log2(1 + yz)) = p_a_max / (sigma_b2 * d_ab^alpha * ln 2),

    solved here in log form.  This is a deliberately separate code path from
    solve_step1(p_b=0); the two must agree and the tests enforce it.
    """
    validate(params)
    if mu_b < 0.0:
        raise ValidationError(f"mu_b must be >= 0: {mu_b}")
    dc = derived_constants(params, 0.0, mu_b)

    log_yz = (math.log(params.p_a_max / params.sigma_e2)
              - 0.5 * params.alpha * math.log(dc.tau))
    if not math.isfinite(log_yz):
        raise InfeasibleError(f"outage constraint unsatisfiable: tau={dc.tau}")
    c = float(np.logaddexp(0.0, log_yz)) / LN2    # log2(1 + yz)
    log_k = math.log(params.p_a_max) - math.log(params.sigma_b2) \
        - params.alpha * math.log(params.d_ab) - math.log(LN2)

    def g(s: float) -> float:
        # ln of (2^r_c * (r_c - c) / k) at r_c = c + e^s; increasing in s.
        return (c + math.exp(s)) * LN2 + s - log_k

    s_lo, s_hi = -690.0, 5.0
    if g(s_lo) > 0.0:
        raise InfeasibleError(
            f"half-duplex secrecy rate underflows (tau={dc.tau})")
    while g(s_hi) < 0.0 and s_hi < 700.0:
        s_hi += 5.0
    s_root, iters = _bisect(g, s_lo, s_hi, g(s_lo), xtol=1e-13)

    r_s = math.exp(s_root)
    r_c = c + r_s
    if r_s <= 0.0:
        raise InfeasibleError(
            f"no positive half-duplex secrecy rate (tau={dc.tau})")
    mu_a = dc.u * (2.0 ** r_c - 1.0)
    omega_tilde = r_s * math.exp(-mu_a)
    hd = HdParams(r_c=r_c, r_s=r_s, mu_a=mu_a)
    return HdResult(hd=hd, omega_tilde=omega_tilde,
                    omega_hd=omega_tilde * hd_weight(mu_b, params.rho),
                    residual=abs(math.expm1(g(s_root))), iterations=iters)


# --------------------------------------------------------------------------
# outer line search over the switch threshold
# --------------------------------------------------------------------------

def optimize(params: SystemParams, grid: Optional[GridSpec] = None, *,
             forced_mu_b: Optional[Sequence[float]] = None,
             forced_p_b: Optional[float] = None) -> SwitchedSolution:
    """Full off-line design: argmax over the switch threshold grid.

    For every candidate mu_b the jamming-mode group is optimized by
    :func:`solve_step2` (or pinned to ``forced_p_b``), the half-duplex group
    is reused from a single solve (its unweighted throughput does not depend
    on mu_b), and the two are combined with the mode-occupancy weights.  The
    smallest mu_b wins ties, making the search deterministic.  Grid points
    that fail to solve are reported as warnings; only a fully infeasible
    grid raises.

    The grid points are independent pure computations, so callers may
    evaluate them in parallel as long as the reduction keeps the
    smallest-mu_b tie-break; the serial loop here is simply the reference
    reduction.
    """
    validate(params)
    grid = grid or GridSpec()
    grid.check(params)
    if forced_p_b is not None and not 0.0 < forced_p_b <= params.p_b_max:
        raise ValidationError(
            f"forced p_b must be in (0, p_b_max]: {forced_p_b}")

    hd_core = solve_hd(0.0, params)
    mu_b_grid = [float(v) for v in
                 (forced_mu_b if forced_mu_b is not None else grid.mu_b_values())]

    best = None
    failures = 0
    for mu_b in mu_b_grid:
        try:
            if forced_p_b is not None:
                step1 = solve_step1(forced_p_b, mu_b, params)
                p_b, capped, degenerate = forced_p_b, False, False
            else:
                s2 = solve_step2(mu_b, params, grid)
                step1, p_b = s2.step1, s2.p_b_dagger
                capped, degenerate = s2.capped, s2.degenerate
        except (InfeasibleError, ValidationError) as exc:
            failures += 1
            warnings.warn(f"switch-threshold grid point mu_b={mu_b:.3g} "
                          f"infeasible: {exc}", RuntimeWarning, stacklevel=2)
            continue
        omega_fd = throughput_fd(step1.r_s, step1.mu_a, mu_b, params.rho)
        omega_hd = throughput_hd(hd_core.hd.r_s, hd_core.hd.mu_a, mu_b, params.rho)
        omega_s = omega_fd + omega_hd
        if best is None or omega_s > best[0]:
            best = (omega_s, omega_fd, omega_hd, mu_b, step1, p_b,
                    capped, degenerate)

    if best is None:
        raise InfeasibleError(
            f"every switch-threshold grid point infeasible ({failures} tried)")

    omega_s, omega_fd, omega_hd, mu_b, step1, p_b, capped, degenerate = best
    fd = FdParams(r_c=step1.r_c, r_s=step1.r_s, mu_a=step1.mu_a, p_b=p_b)
    return SwitchedSolution(mu_b=float(mu_b), fd=fd, hd=hd_core.hd,
                            omega_s=omega_s, omega_fd=omega_fd,
                            omega_hd=omega_hd, degenerate_fd=degenerate,
                            capped_fd=capped)

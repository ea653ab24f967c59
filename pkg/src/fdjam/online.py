"""Per-slot transmit decision for a designed switched FD/HD link.

Everything heavy happens off-line in :mod:`fdjam.optimizer`; the slot-rate
work is this one stateless function: compare two gains against two
thresholds and, when transmitting, set the transmit power that makes the
main channel support the mode's codeword rate with equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError
from .params import SwitchedSolution, SystemParams

__all__ = ["Mode", "Action", "decide"]

# Relative slack on the power-budget guarantee; the boundary case lands on
# the budget exactly up to roundoff.
_BUDGET_RTOL = 1e-9


class Mode(Enum):
    SILENT = "silent"
    FD = "fd"
    HD = "hd"


@dataclass(frozen=True)
class Action:
    """One slot's decision: stay silent or transmit in one of the two modes.

    ``p_a`` is Alice's transmit power and ``p_b`` the receiver's jamming
    power; both are zero when silent and ``p_b`` is zero in HD mode.
    """

    mode: Mode
    p_a: float = 0.0
    p_b: float = 0.0

    @property
    def transmitting(self) -> bool:
        return self.mode is not Mode.SILENT


def decide(gamma_ab: float, gamma_bb: float, solution: SwitchedSolution,
           params: SystemParams) -> Action:
    """Map one slot's channel gains to a transmit action.

    Residual self-interference at or below the switch threshold selects the
    jamming branch (ties jam); within a branch, transmission happens only if
    the main-channel gain clears that branch's on-off threshold.  The
    transmit power inverts the main-channel capacity at the branch's
    codeword rate, so the realized capacity equals the rate exactly and the
    power never exceeds the budget (equality at the threshold corner).
    """
    if gamma_ab < 0.0 or gamma_bb < 0.0:
        raise ValidationError(
            f"channel gains must be >= 0: gamma_ab={gamma_ab}, gamma_bb={gamma_bb}")
    gain_over_loss = gamma_ab * params.d_ab ** (-params.alpha)

    if params.rho * gamma_bb <= solution.mu_b:
        fd = solution.fd
        if gamma_ab >= fd.mu_a:
            noise = params.sigma_b2 + params.rho * fd.p_b * gamma_bb
            p_a = (2.0 ** fd.r_c - 1.0) * noise / gain_over_loss
            return Action(Mode.FD, p_a=_cap(p_a, params), p_b=fd.p_b)
    else:
        hd = solution.hd
        if gamma_ab >= hd.mu_a:
            p_a = (2.0 ** hd.r_c - 1.0) * params.sigma_b2 / gain_over_loss
            return Action(Mode.HD, p_a=_cap(p_a, params))
    return Action(Mode.SILENT)


def _cap(p_a: float, params: SystemParams) -> float:
    if p_a > params.p_a_max * (1.0 + _BUDGET_RTOL):
        raise ValidationError(
            f"required transmit power {p_a} W exceeds p_a_max "
            f"{params.p_a_max} W; the solution violates its threshold invariants")
    return min(p_a, params.p_a_max)

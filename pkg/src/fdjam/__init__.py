"""Secrecy-throughput design for a switched full-duplex/half-duplex
jamming receiver on a device-to-device link with Poisson-distributed
eavesdroppers.

The package splits into:

- :mod:`fdjam.params`    scenario types, validation, derived constants
- :mod:`fdjam.analytics` outage probability (quadrature and closed form),
  throughput expressions, comparison metrics
- :mod:`fdjam.optimizer` the off-line design: rates, on-off threshold,
  jamming power, mode-switch threshold
- :mod:`fdjam.online`    the per-slot transmit decision
- :mod:`fdjam.sim`       Monte Carlo oracle and slot-level simulator
- :mod:`fdjam.cli`       the ``fdjam`` command-line front end
"""

__version__ = "0.1.0"

from .analytics import (ComparisonMetrics, LinkState, cdf_phi_e_approx,
                        cdf_phi_e_exact, comparison_metrics, hd_weight,
                        sop_approx, sop_exact, throughput_fd, throughput_hd)
from .errors import InfeasibleError, QuadratureError, ValidationError
from .online import Action, Mode, decide
from .optimizer import (GridSpec, HdResult, Step1Result, Step2Result,
                        optimize, solve_hd, solve_step1, solve_step2, v_of_y)
from .params import (DerivedConstants, FdParams, HdParams, SwitchedSolution,
                     SystemParams, derived_constants, validate)
from .sim import (ChannelDraw, EveField, McEstimate, SimReport,
                  empirical_sop, run_online, sample_eve_field)
from .units import dbm_to_watts, db_to_linear, linear_to_db, watts_to_dbm

__all__ = [
    "__version__",
    # errors
    "ValidationError", "InfeasibleError", "QuadratureError",
    # units
    "dbm_to_watts", "watts_to_dbm", "db_to_linear", "linear_to_db",
    # params
    "SystemParams", "FdParams", "HdParams", "SwitchedSolution",
    "DerivedConstants", "validate", "derived_constants",
    # analytics
    "LinkState", "ComparisonMetrics", "cdf_phi_e_exact", "cdf_phi_e_approx",
    "sop_exact", "sop_approx", "throughput_fd", "throughput_hd", "hd_weight",
    "comparison_metrics",
    # optimizer
    "GridSpec", "Step1Result", "Step2Result", "HdResult", "v_of_y",
    "solve_step1", "solve_step2", "solve_hd", "optimize",
    # online
    "Mode", "Action", "decide",
    # sim
    "ChannelDraw", "EveField", "McEstimate", "SimReport", "sample_eve_field",
    "empirical_sop", "run_online",
]

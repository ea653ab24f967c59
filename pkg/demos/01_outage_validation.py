"""Three routes to the secrecy outage probability, side by side.

The outage probability of the best eavesdropper in a Poisson field can be
computed three ways: an exact double-integral over the field geometry, a
closed form that treats the jamming path loss as equal to the signal path
loss (tight when the transmitter-receiver separation is small), and a
brute-force Monte Carlo over sampled fields.  This script tabulates all
three across eavesdropper densities for three link lengths; watch the
closed form drift away from the other two as the link grows to 30 m.

Run:  python demos/01_outage_validation.py
"""

import dataclasses

import numpy as np

from fdjam import SystemParams, dbm_to_watts, empirical_sop, sop_approx, sop_exact

P_A = dbm_to_watts(20.0)   # fixed signal power for this experiment
P_B = dbm_to_watts(30.0)   # fixed jamming power
R_C, R_S = 4.0, 1.0        # 3 bits/s/Hz of rate redundancy

base = SystemParams(alpha=4.0, d_ab=10.0, lambda_e=1e-4,
                    sigma_b2=dbm_to_watts(-90.0), sigma_e2=dbm_to_watts(-90.0),
                    rho=1e-7, epsilon=0.1, p_a_max=P_A, p_b_max=P_B)

print(f"{'d_ab [m]':>9} {'lambda_e':>10} {'exact':>8} {'closed':>8} "
      f"{'monte carlo':>16}")
for d_ab in (0.2, 10.0, 30.0):
    for lam in np.logspace(-6, -3, 4):
        params = dataclasses.replace(base, d_ab=d_ab, lambda_e=float(lam))
        exact = sop_exact(P_A, P_B, R_C, R_S, params)
        closed = sop_approx(P_A, P_B, R_C, R_S, params)
        mc = empirical_sop(P_A, P_B, R_C, R_S, params,
                           n_trials=20000, r_cut=800.0, seed=1)
        print(f"{d_ab:9.1f} {lam:10.1e} {exact:8.4f} {closed:8.4f} "
              f"{mc.value:8.4f} +- {mc.stderr:.4f}")
    print()

print("The Monte Carlo column sides with the exact integral everywhere;")
print("the closed form is indistinguishable at 0.2 m and a few percent")
print("high in exponent terms by 30 m.")

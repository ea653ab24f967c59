"""Close the loop: simulate the designed link slot by slot.

Every slot draws fresh fading, applies the two-threshold decision rule,
adapts the transmit power to hit the codeword rate exactly, and tests the
realized secrecy against a freshly sampled eavesdropper field.  Three
things should come out of a healthy design: zero connection outages (the
power rule closes the link budget by construction), a conditional secrecy
outage rate at or below the configured bound, and a throughput matching
the off-line prediction.

Run:  python demos/04_slot_simulation.py
"""

from fdjam import (SystemParams, comparison_metrics, dbm_to_watts, optimize,
                   run_online)

params = SystemParams(alpha=4.0, d_ab=0.5, lambda_e=1e-4,
                      sigma_b2=dbm_to_watts(-90.0), sigma_e2=dbm_to_watts(-90.0),
                      rho=1e-7, epsilon=0.1,
                      p_a_max=dbm_to_watts(10.0), p_b_max=dbm_to_watts(10.0))

solution = optimize(params)
metrics = comparison_metrics(solution, params)
print("design:")
print(f"  switch threshold mu_b     = {solution.mu_b:.3e}")
print(f"  jamming group  (r_c, r_s) = ({solution.fd.r_c:.2f}, {solution.fd.r_s:.2f})")
print(f"  half-duplex    (r_c, r_s) = ({solution.hd.r_c:.2f}, {solution.hd.r_s:.2f})")
print(f"  predicted throughput      = {solution.omega_s:.4f} bits/s/Hz")
print(f"  predicted tx probability  = {metrics.p_fd + metrics.p_hd:.4f}")

report = run_online(solution, params, n_slots=50000, r_cut=800.0, seed=42)
print("\n50k simulated slots:")
print(f"  transmitted {report.transmissions} slots "
      f"(fd {report.mode_counts.fd}, hd {report.mode_counts.hd}, "
      f"silent {report.mode_counts.silent})")
print(f"  empirical tx probability  = {report.empirical_tx_prob:.4f} "
      f"+- {report.tx_prob_stderr:.4f}")
print(f"  empirical throughput      = {report.empirical_throughput:.4f} "
      f"+- {report.throughput_stderr:.4f}")
print(f"  conditional outage rate   = {report.empirical_sop:.4f} "
      f"+- {report.sop_stderr:.4f}   (bound {params.epsilon})")
print(f"  connection outages        = {report.connection_outages}")

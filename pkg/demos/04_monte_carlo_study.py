"""Monte Carlo comparison of the two estimators on a known 2-D system.

Trajectories of an autonomous two-component system are sampled, corrupted
with Gaussian noise, and both pipelines are fitted on every replication.
The matching estimator recovers the initial state far more tightly than the
grey pipeline, while their structural estimates coincide replication by
replication.
"""

import numpy as np

import greymatch as gm

A_TRUE = np.array([[-0.25, 0.70], [0.75, -0.25]])
ETA_TRUE = np.array([1.20, 0.35])

scenario = gm.SimulationScenario(
    a_matrix=A_TRUE, initial_state=ETA_TRUE,
    snr=5.0, replications=200, seed=4, step=0.25,
)
print(f"scenario: n={scenario.n} samples on [0, 5], snr={scenario.snr}, "
      f"{scenario.replications} replications")

summary = gm.run_monte_carlo(scenario)
print(f"failed fits: {summary.failure_count}")
print(f"max |A_grey - A_matching| over replications: "
      f"{summary.max_structural_gap:.1e}\n")

print("sample means (true values in brackets):")
a_means = summary.parameter_means["matching_A"]
print(f"  A        : {np.round(a_means, 3)}  [{A_TRUE.ravel()}]")
print(f"  eta match: {np.round(summary.parameter_means['matching_eta'], 3)}"
      f"  [{ETA_TRUE}]")
print(f"  eta grey : {np.round(summary.parameter_means['grey_eta'], 3)}"
      f"  [{ETA_TRUE}] (biased by the cusum discretization)\n")

print("median absolute percentage errors (per component):")
for key in ("matching_fit", "grey_fit", "matching_step10", "grey_step10"):
    med = summary.quartiles[key][2]
    print(f"  {key:16s} {np.round(med, 2)} %")

print("\nnoise level decreases like 1/snr^2; rerun with snr=2.5 to watch "
      "every error quartile roughly quadruple.")

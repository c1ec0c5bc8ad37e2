"""
Single drive run
----------------
Evolve the oscillator ground state through a drive window once inside and
once outside the resonance region, then look at where the probability ends up.
"""
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from paramres import DriveParams, decompose, energy_expectation, evolve, ground_state

h, nu = 0.03, 300

fig, ax = plt.subplots()
for r in (0.1, 0.6, 0.9):
    params = DriveParams.from_ratio(h, r, nu)
    state = evolve(ground_state(), params)
    spec = decompose(state)
    print(f"r={r}: B={state.B:.6f}  <E>={energy_expectation(state):.4f}  "
          f"p0={spec.p[0]:.4f}  levels kept={spec.n_max}")
    keep = spec.n <= 60
    ax.semilogy(spec.n[keep], spec.p[keep], "o-", label=f"r = {r}")

# Inside (r=0.1) the populations fall off slowly; outside they drop geometrically.
ax.set_xlabel("n")
ax.set_ylabel("p_n")
ax.legend()
fig.savefig("single_run.png", dpi=120)
print("wrote single_run.png")

# Odd levels are never populated: the Gaussian stays even in xi.
print("p_1 =", spec.pn(1), " sum of even p_n =", np.sum(spec.p))

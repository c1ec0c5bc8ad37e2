"""
Resonance sweep
---------------
Scan the detuning ratio r = eps_bar/h at fixed drive strength and duration.
The ground-state population collapses inside |r| < 1/2 and the absorbed
energy grows by orders of magnitude there.
"""
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from paramres import detect_transition, sweep, transition_width

h = 0.03
grid = np.linspace(-1.0, 1.0, 201)

fig, (top, bottom) = plt.subplots(2, 1, sharex=True)
for nu in (300, 1000):
    result = sweep(h, nu, grid, threads=4)
    r_minus, r_plus = detect_transition(result)
    width = transition_width(result)
    print(f"nu={nu}: p0 = 1/2 at r = {r_minus:.3f}, {r_plus:.3f}; 10-90 width {width:.3f}")
    top.plot(result.r, result.column("p0"), label=f"nu = {nu}")
    bottom.semilogy(result.r, result.column("energy"), label=f"nu = {nu}")

# A longer drive sharpens the edge of the resonance region.
top.set_ylabel("p_0")
bottom.set_ylabel("<E>")
bottom.set_xlabel("r")
top.legend()
fig.savefig("resonance_sweep.png", dpi=120)
print("wrote resonance_sweep.png")

"""
Classical link
--------------
The Gaussian width follows from a complex solution of the classical
equation u'' + g(tau) u = 0, and the quantum energy equals (|u|^2 + |u'|^2)/4.
Floquet multipliers of the periodic drive mark the classical instability band.
"""
import numpy as np

from paramres import (DriveParams, complex_solution, energy_expectation, evolve, floquet_growth,
                      ground_state, pr_condition)

params = DriveParams.from_ratio(0.1, 0.2, 50)
state = evolve(ground_state(), params)
u = complex_solution(params)[-1]
print("B from the wavefunction equations:", state.B)
print("B from the classical solution:   ", u.width)
print("energy, quantum vs classical:", energy_expectation(state), u.energy)
print("Wronskian Im(conj(u) u'):", u.wronskian)

# Growth per drive period across r; the band edge sits close to |r| = 1/2.
for r in np.round(np.linspace(-1.0, 1.0, 11), 2):
    p = DriveParams.from_ratio(0.1, r, 1)
    print(f"r={r:+.1f}  multiplier={floquet_growth(p):.6f}  inside={pr_condition(p)}")

"""
QFI near an anti-crossing
=========================

The ground state of a two-level Hamiltonian rotates fastest where the gap is
smallest, and that is where the parameter can be estimated best.
"""

import math

import numpy as np

from anticross import function_model, qfi_fidelity_oracle, qfi_ground
from anticross.zoo import PerturbationParams, RabiParams, perturbation_model, rabi_model

# delta = 1, gamma = lambda: the gap 2 sqrt(1 + lambda^2) is smallest at lambda = 0
linear = function_model(
    "linear", lambda l: 0.0, lambda l: 1.0, lambda l: l, (-4, 4),
    lambda l: 0.0, lambda l: 0.0, lambda l: 1.0,
)

print(" lambda    H (closed form)   H (fidelity)")
for lam in np.linspace(-3, 3, 7):
    h = qfi_ground(linear.coefficients(lam), linear.derivatives(lam))
    print(f"{lam:7.2f}   {h:14.8f}   {qfi_fidelity_oracle(linear, lam):12.8f}")

# %%
# A rotated rank-one perturbation opens the gap only when it does not
# commute with H0. At phi = pi/4 the profile is a squared Lorentzian.

pert = perturbation_model(PerturbationParams(delta_gap=1.0, epsilon=1.0, phi=math.pi / 4))
lams = np.linspace(-3, 3, 601)
h = [qfi_ground(pert.coefficients(l), pert.derivatives(l)) for l in lams]
print(f"\nperturbation: peak H = {max(h):.6f} at lambda = {lams[int(np.argmax(h))]:.3f}")

# %%
# The driven two-level system on resonance peaks at a finite drive strength.

rabi = rabi_model(RabiParams(omega0=1.0, omega=1.0))
lams = np.linspace(0, 4, 4001)[1:]
h = [qfi_ground(rabi.coefficients(l), rabi.derivatives(l)) for l in lams]
print(f"rabi: argmax lambda = {lams[int(np.argmax(h))]:.4f} (32/17 = {32 / 17:.4f})")

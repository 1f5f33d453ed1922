"""
Information in a thermal state
==============================

At inverse temperature beta the QFI splits into a population part (the
level occupations depend on lambda through the gap) and an eigenvector part
(the ground-state QFI scaled by tanh^2(beta E)).
"""

import math

import numpy as np

from anticross import MeasurementDirection, function_model, qfi_ground, thermal_fisher, thermal_qfi
from anticross.metrology import optimal_direction_highT, thermal_qfi_leading_coefficient

model = function_model(
    "tilted", lambda l: 0.0, lambda l: 1.0 + 0.5 * l, lambda l: l, (-1, 3),
    lambda l: 0.0, lambda l: 0.5, lambda l: 1.0,
)
lam = 0.8
c, d = model.coefficients(lam), model.derivatives(lam)
h0 = qfi_ground(c, d)

print("   beta    H_C/H0     H_Q/H0   H_total/H0")
for beta in np.geomspace(1e-2, 30, 10):
    br = thermal_qfi(c, d, beta)
    print(f"{beta:7.3f}  {br.H_classical / h0:8.5f}  {br.H_quantum / h0:8.5f}  {br.H_total / h0:10.7f}")

# %%
# When hot, both parts fall off as beta^2. The best spin measurement is then
# along (d_gamma, 0, -d_delta), and it captures all of the information.

r = optimal_direction_highT(d)
beta = 1e-3
print(f"\nH_beta / beta^2 = {thermal_qfi(c, d, beta).H_total / beta**2:.6f}, limit {thermal_qfi_leading_coefficient(d):.6f}")
print(f"F_beta / H_beta along {np.round(r.vector, 4)}: {thermal_fisher(c, d, beta, r) / thermal_qfi(c, d, beta).H_total:.6f}")
print(f"F_beta / H_beta along x:            {thermal_fisher(c, d, beta, MeasurementDirection(1, 0, 0)) / thermal_qfi(c, d, beta).H_total:.6f}")
print(f"zero temperature: H = {thermal_qfi(c, d, math.inf).H_total:.6f} = H0 = {h0:.6f}")

"""
Evolving superpositions
=======================

Prepare cos(theta/2) psi_- + e^{i phi} sin(theta/2) psi_+ in the eigenbasis
at lambda and let it evolve for a time t. The state now depends on lambda
through the eigenvectors and through the relative phase 2 E(lambda) t, so
its QFI can grow well beyond the ground-state value.
"""

import math

from anticross import SuperpositionSpec, function_model, qfi_evolved, qfi_evolved_analytic, qfi_ground

model = function_model(
    "linear", lambda l: 0.0, lambda l: 1.0, lambda l: l, (-4, 4),
    lambda l: 0.0, lambda l: 0.0, lambda l: 1.0,
)
lam = 0.5
c, d = model.coefficients(lam), model.derivatives(lam)
print(f"ground-state QFI: {qfi_ground(c, d):.6f}")

for theta, phi, t in [(0.0, 0.0, 5.0), (math.pi / 3, 0.0, 0.0), (math.pi / 2, math.pi / 2, 0.0), (math.pi / 4, 0.0, 2.3), (math.pi / 2, 0.0, 10.0)]:
    spec = SuperpositionSpec(theta, phi, t)
    fid = qfi_evolved(model, lam, spec)
    exact = qfi_evolved_analytic(c, d, spec)
    print(f"theta={theta:5.3f} phi={phi:5.3f} t={t:5.2f}:  fidelity {fid:10.6f}   closed form {exact:10.6f}")

# %%
# Eigenstates keep the ground value at every t, and so do real superpositions
# at t = 0. The equal imaginary superposition at t = 0 carries no information
# at all. For long times the phase term takes over and H grows like t^2.

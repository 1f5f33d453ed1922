"""
A distant third level
=====================

A level at energy eps coupled with strength g to both states shifts the
effective coefficients by kappa = g^2 / eps. The QFI changes linearly in
kappa, and the first-order formula leaves an O(kappa^2) residual.
"""

from anticross import CoefficientBundle, function_model, qfi_ground
from anticross.zoo import three_level_qfi_first_order

falling = function_model(
    "falling", lambda l: 0.0, lambda l: 1.0, lambda l: -l, (-3, 3),
    lambda l: 0.0, lambda l: 0.0, lambda l: -1.0,
)
c, d = falling.coefficients(0.5), falling.derivatives(0.5)


def exact(kappa):
    return qfi_ground(CoefficientBundle(c.omega0 + kappa, c.delta, c.gamma + kappa), d)


print(" kappa     residual (signed root)   residual (|root|)")
for kappa in (4e-3, 2e-3, 1e-3, 5e-4):
    a = abs(three_level_qfi_first_order(c, d, kappa, "signed") - exact(kappa))
    b = abs(three_level_qfi_first_order(c, d, kappa, "nonnegative") - exact(kappa))
    print(f"{kappa:7.1e}   {a:20.3e}   {b:18.3e}")

# %%
# Here delta d_gamma - gamma d_delta < 0. Only the signed square root of H0
# gives a residual that quarters when kappa halves.

"""
Which spin measurement is optimal?
==================================

For the ground state, a projective measurement along r recovers the fraction
g = F/H of the quantum Fisher information. Every direction in the x-z plane
reaches g = 1, whatever the ratio x = gamma/delta.
"""

import numpy as np

from anticross import MeasurementDirection, g_function

for x in (0.01, 0.1, 10, 100):
    circle = [g_function(x, MeasurementDirection.from_angle(t)) for t in np.linspace(0.1, 6.2, 50)]
    print(f"x = {x:6}: g on the x-z circle ranges over [{min(circle):.15f}, {max(circle):.15f}]")

# %%
# Tilting out of the plane costs information; sigma_y alone carries none.

for tilt in (0.0, 0.3, 0.6, 1.0, np.pi / 2):
    r = MeasurementDirection(np.cos(tilt), np.sin(tilt), 0.0)
    print(f"tilt {tilt:4.2f} towards y: g(x=1) = {g_function(1.0, r):.4f}")

# %%
# The surface for x is the surface for 1/x with r1 and r3 exchanged.

r = MeasurementDirection(0.3, 0.5, 0.81)
print(g_function(10.0, r), g_function(0.1, MeasurementDirection(r.r3, r.r2, r.r1)))

#!/usr/bin/env python3
"""Walk through the ensemble's macroscopic geometry.

The eigenvalues of the induced spherical symplectic ensemble concentrate
on an annulus r1 <= |z| <= r2 whose radii are simple ratios of (N, n, L),
with a density that integrates to one eigenvalue's worth of mass.
"""

import numpy as np

from sphefaffian import (
    EnsembleParams,
    Strong,
    droplet,
    local_scale_delta,
    macroscopic_density,
    potential_q,
)

params = EnsembleParams(N=100, n=200.0, L=100.0)  # the L = N, n = 2N showcase
geo = droplet(params)
print(f"parameters: N={params.N}, n={params.n}, L={params.L}")
print(f"droplet: r1 = {geo.r1:.6f} (= sqrt(1/2)), r2 = {geo.r2:.6f} (= sqrt(2))")

print("\npotential profile along the positive real axis:")
for r in (0.3, geo.r1, 1.0, geo.r2, 2.5):
    print(f"  Q({r:.4f}) = {potential_q(params, r):.6f}")

print("\ndensity profile (zero off the annulus):")
for r in (0.5, 0.8, 1.0, 1.2, 1.6):
    print(f"  rho({r:.2f}) = {macroscopic_density(params, r):.6f}")

# total mass check: 2 int rho(r) r dr over [r1, r2] = 1
rs = np.linspace(geo.r1, geo.r2, 20001)
mass = np.trapezoid([2 * r * macroscopic_density(params, r) for r in rs], rs)
print(f"\nintegrated density mass = {mass:.8f} (exactly 1; intensity = N * density)")

# the local scale delta that controls microscopic zooming
reg = Strong(a=1.0, b=1.0, p=1.0)
print(f"\nlocal density at the zoom point p=1: delta = {local_scale_delta(params, 1.0):.4f}")
print(f"microscopic length 1/sqrt(N delta) = {1/np.sqrt(params.N*local_scale_delta(params,1.0)):.4f}")

#!/usr/bin/env python3
"""The three universal scaling limits and finite-N convergence to them.

Strong non-unitarity gives the erf kernel (bulk) or an erfc-layer kernel
(edge); weak non-unitarity gives a rho-interpolating kernel; a point
charge at the origin gives the Mittag-Leffler kernel.  Each damped kernel
K = e^{-z^2-w^2} kappa solves dK/dz = F with K(w,w) = 0, and the finite-N
rescaled kernel converges to the limit on compact sets.
"""

import cmath

import numpy as np

from sphefaffian import (
    LimitKernelSpec,
    Origin,
    Strong,
    Weak,
    kappa,
    limit_rk,
    ode_residual,
    rescaled_kernel,
)

z, w = 0.5, -0.3j

print("kernel values at (z, w) = (0.5, -0.3i):")
for spec in (
    LimitKernelSpec("strong_bulk"),
    LimitKernelSpec("strong_edge"),
    LimitKernelSpec("weak", rho=2.0),
    LimitKernelSpec("origin", L=1.0),
):
    v = kappa(spec, z, w)
    resid, diag = ode_residual(spec, z, w)
    label = spec.kind + (f"(rho={spec.rho})" if spec.rho else "") + (
        f"(L={spec.L})" if spec.L is not None else "")
    print(f"  {label:22s} kappa = {v: .6e}   ODE residual {resid:.1e}")

print("\nlimiting one-point profile along the imaginary axis (strong bulk):")
spec = LimitKernelSpec("strong_bulk")
for y in (0.25, 0.5, 1.0, 1.5, 2.5):
    print(f"  R_1({y:.2f} i) = {limit_rk(spec, [1j*y]):.6f}")
print("  (vanishes on the real axis, saturates to 1 in the bulk)")

print("\nfinite-N convergence, sup error over a 3x3 grid:")
grid = [0.5 * complex(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1)]
pairs = [(a, b) for a in grid for b in grid if abs(a - b) > 1e-9][:12]
for name, regime, spec in (
    ("strong", Strong(a=1.0, b=1.0, p=1.0), LimitKernelSpec("strong_bulk")),
    ("weak  ", Weak(rho=2.0), LimitKernelSpec("weak", rho=2.0)),
    ("origin", Origin(L=1.0, b=1.0), LimitKernelSpec("origin", L=1.0)),
):
    lim = {pw: kappa(spec, *pw) for pw in pairs}
    errs = []
    for N in (25, 50, 100):
        pa = regime.params_at(N)
        errs.append(max(
            abs(cmath.exp(a*a + b*b) * rescaled_kernel(pa, regime, a, b) - lim[(a, b)])
            for (a, b) in pairs
        ))
    rate = np.log2(errs[0] / errs[2]) / 2.0
    print(f"  {name}: {errs[0]:.4g} -> {errs[1]:.4g} -> {errs[2]:.4g}"
          f"   (empirical rate ~ N^-{rate:.2f})")

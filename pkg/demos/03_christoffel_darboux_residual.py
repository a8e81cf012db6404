#!/usr/bin/env python3
"""The generalized Christoffel-Darboux identity as a numerical residual.

The derivative of the skew-kernel in its first argument equals a closed
combination of three binomial-type sums.  Here the left side comes from
exact term-by-term differentiation of the double sum and the right side
from the closed forms, in both their direct and incomplete-beta guises.
"""

import numpy as np

from sphefaffian import EnsembleParams, cdi_residual, cdi_rhs, cdi_rhs_beta_form
from sphefaffian.finitekernel import skew_kernel_tilde_dzeta

params = EnsembleParams(N=3, n=6.0, L=1.0)
zeta, eta = 0.3 + 0.2j, 0.5 - 0.1j

terms = cdi_rhs(params, zeta, eta)
print(f"term I   = {terms.term1:.10e}")
print(f"term II  = {terms.term2:.10e}")
print(f"term III = {terms.term3:.10e}")

lhs = skew_kernel_tilde_dzeta(params, zeta, eta)
print(f"\nexact d/dzeta of the kernel  = {lhs:.10e}")
print(f"relative residual against RHS = {cdi_residual(params, zeta, eta):.2e}")

beta = cdi_rhs_beta_form(params, zeta, eta)
print("\nincomplete-beta resummation of each term:")
for name, x, y in (
    ("I", terms.term1, beta.term1),
    ("II", terms.term2, beta.term2),
    ("III", terms.term3, beta.term3),
):
    print(f"  {name:3s}: direct vs beta rel diff {abs(x-y)/max(abs(x),abs(y)):.2e}")

print("\nresidual over a grid of parameter triples:")
for (N, n, L) in [(2, 4, 0.0), (3, 6, 1.0), (4, 9, 2.5)]:
    pa = EnsembleParams(N=N, n=float(n), L=L)
    worst = 0.0
    rng = np.random.default_rng(0)
    for _ in range(25):
        z = rng.normal(scale=0.4) + 1j * rng.normal(scale=0.4)
        e = rng.normal(scale=0.4) + 1j * rng.normal(scale=0.4)
        worst = max(worst, cdi_residual(pa, z, e))
    print(f"  (N, n, L) = ({N}, {n}, {L}): max residual {worst:.2e}")

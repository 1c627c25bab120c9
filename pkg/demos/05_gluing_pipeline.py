#!/usr/bin/env python3
"""Gluing a background to the exact cylinder and solving for the soliton.

The pipeline behind the existence result: write the inner Kahler form as
i ddbar P, interpolate P against the cylinder potential t^2 with a degree-7
smoothstep on [1, t0], add a bump rho dt ^ d^c t if positivity needs it,
and rebuild the soliton potential from f' = 2c.  The glued metric equals
the cigar for t <= 1/2 and the exact cylinder for t >= t0 + 1/2, so the
Monge-Ampere forcing F = -residual(glued, 0) is compactly supported, and
the continuity method turns the background into an exact steady soliton.
"""

import warnings

import numpy as np

import acylsoliton as ak

inner = ak.cigar_model(2)
spec = ak.GlueSpec(t0=3.0)

p_inner = ak.potential_of(inner, (0.0, spec.grid_end, spec.h))
rho0 = ak.auto_rho(p_inner, spec, inner)
coefficient = ak.glue_coefficient(p_inner, spec, inner, rho0=rho0)
print(f"bump amplitude rho0 = {rho0} (the default transition stays positive on its own)")
print(f"min c = {np.min(coefficient.values):.4f}, "
      f"c = 1 exactly beyond t0 + 1/2: {bool(np.all(coefficient.values[coefficient.t >= 3.5] == 1.0))}")

# a narrow transition needs a genuine bump
narrow = ak.GlueSpec(t0=1.3)
p_narrow = ak.potential_of(inner, (0.0, narrow.grid_end, narrow.h))
rho_narrow = ak.auto_rho(p_narrow, narrow, inner)
print(f"narrow transition t0 = 1.3: rho0 = {rho_narrow:.2f} "
      "(auto-selected so min c clears the margin)")

model = ak.glued_model(inner, spec)
grid = (-12.0, 20.0, 0.01)
forcing = ak.glued_forcing(model, grid)
support = forcing.t[np.abs(forcing.values) > 0]
print(f"\nforcing support: [{support.min():.2f}, {support.max():.2f}] "
      f"(compact, vanishes on the cylinder region)")

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    solution = ak.continuity_solve(model, forcing)

residual = ak.soliton_residual(model, solution.phi_anchored)
print(f"soliton residual of the corrected metric: sup = {np.max(np.abs(residual.values)):.3e}")
print(f"decay rate of the correction phi: {solution.decay_rate:.4f} "
      "(compactly supported forcing gives the full rate)")
print(f"Newton iterations along the path: {[r.newton_iterations for r in solution.records]}")

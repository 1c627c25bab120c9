#!/usr/bin/env python3
"""The linear drift equation (Delta_g + X) u = h, mode by mode.

On the cylinder the radial mode reduces to u'' + 2u' = h with decaying
solutions u = e^{-eps t}/(eps^2 - 2 eps) for h = e^{-eps t}; on the cigar
the same solve runs with the degenerating coefficient and a Neumann
condition at the center.  The discrete operator is an M-matrix, so the
solver inherits the maximum principle: nonnegative sources push the
potential down.
"""

import numpy as np

import acylsoliton as ak

# --- manufactured accuracy on the cylinder -------------------------------
model = ak.cylinder_model(1)
print("cylinder, h(t) = e^{-eps t}: discrete vs closed form e^{-eps t}/(eps^2-2eps)")
for eps in (0.5, 1.0, 1.5):
    rhs = ak.GridFunction.sample(lambda t: np.exp(-eps * t), 0.0, 20.0, 0.01)
    exact = rhs.like(rhs.values / (eps**2 - 2 * eps))
    problem = ak.ModeProblem(
        model=model, mu=0.0, rhs=rhs,
        boundary=ak.BoundaryPolicy(inner=("dirichlet", float(exact.values[0])),
                                   outer=("dirichlet", float(exact.values[-1]))),
    )
    u = ak.solve_mode(problem)
    print(f"   eps = {eps}:  sup error = {np.max(np.abs(u.values - exact.values)):.3e}")

# --- cigar with the geometric boundary policy ----------------------------
cigar = ak.cigar_model(1)
grid = (-12.0, 20.0, 0.01)
rhs = ak.GridFunction.sample(lambda t: np.exp(-1.5 * t) * np.clip(t / 2, 0, 1) ** 4, *grid)
u = ak.solve_mode(ak.ModeProblem(model=cigar, mu=0.0, rhs=rhs))
print("\ncigar radial solve (Neumann at the center, Dirichlet at t = 20):")
print(f"   decay rate of rhs  = {ak.decay_rate_fit(rhs):.4f}")
print(f"   decay rate of u    = {ak.decay_rate_fit(u):.4f}  (the mapping preserves the rate)")
slope = (-3 * u.values[0] + 4 * u.values[1] - u.values[2]) / 0.02
print(f"   u'(t_min)          = {slope:.2e}  (smoothness at the zero of X)")

# --- maximum principle ----------------------------------------------------
rng = np.random.default_rng(3)
t = ak.uniform_nodes(*grid)
source = np.exp(-0.5 * ((t - rng.uniform(0, 8)) / 1.5) ** 2)
u = ak.solve_mode(ak.ModeProblem(model=cigar, mu=0.0, rhs=ak.GridFunction(*grid, source)))
print(f"\nmaximum principle: h >= 0  ->  max u = {np.max(u.values):.3e} (never positive)")

# --- a two-mode field solve ----------------------------------------------
cs = ak.CrossSection(2 * np.pi, ak.square_lattice())
fields = {
    0.0: ak.GridFunction.sample(lambda s: np.exp(-1.2 * s), 0.0, 20.0, 0.01),
    1.0: ak.GridFunction.sample(lambda s: 0.5 * np.exp(-1.8 * s), 0.0, 20.0, 0.01),
}
solved = ak.solve_field(ak.cylinder_model(2), cs, fields)
for mu, sol in solved.items():
    print(f"field solve, mode mu = {mu}: sup |u| = {np.max(np.abs(sol.values)):.4e}")

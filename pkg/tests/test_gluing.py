import warnings

import numpy as np
import pytest

import acylsoliton as ak

GRID = (-12.0, 20.0, 0.01)


def test_smoothstep_junctions():
    s = ak.smoothstep(np.array([0.0, 1.0]), 7)
    assert s[0] == 0.0 and s[1] == 1.0
    x = np.linspace(0, 1, 101)
    vals = ak.smoothstep(x, 7)
    assert np.all(np.diff(vals) >= -1e-15)  # monotone
    # C^3 at junctions: first three derivatives vanish at 0 and 1
    h = 1e-3
    for edge in (0.0, 1.0):
        stencil = ak.smoothstep(edge + h * np.arange(-4, 5), 7)
        d1 = (stencil[5] - stencil[3]) / (2 * h)
        d2 = (stencil[5] - 2 * stencil[4] + stencil[3]) / h**2
        d3 = (stencil[6] - 2 * stencil[5] + 2 * stencil[3] - stencil[2]) / (2 * h**3)
        # d3 tends to 0 linearly in h (the 4th derivative jumps at the junction)
        assert abs(d1) < 1e-5 and abs(d2) < 1e-2 and abs(d3) < 300 * h


def test_smoothstep_rejects_even_degree():
    with pytest.raises(ak.DomainError):
        ak.smoothstep(0.5, 4)


def test_cylinder_potential_is_t_squared():
    p = ak.potential_of(ak.cylinder_model(1), (0.0, 6.0, 0.01))
    assert np.array_equal(p.values, p.t**2)


def test_cigar_potential_derivative_closed_form():
    dp = ak.potential_derivative_of(ak.cigar_model(1), (0.0, 6.0, 0.005))
    exact = np.logaddexp(0, 2 * dp.t)
    assert np.max(np.abs(dp.values - exact)) < 1e-8


def test_potential_second_derivative_recovers_a():
    from acylsoliton import fd

    model = ak.cigar_model(1)
    p = ak.potential_of(model, (0.0, 6.0, 0.005))
    a_rec = 0.5 * fd.d2(p.values, p.h)
    err = np.max(np.abs(a_rec - model.a(p.t))[1:-1])
    assert err < 1e-5  # O(h^2)


def test_glue_cylinder_to_itself():
    spec = ak.GlueSpec(t0=3.0, rho0=0.0)
    p = ak.potential_of(ak.cylinder_model(1), (0.0, spec.grid_end, spec.h))
    c = ak.glue_coefficient(p, spec, ak.cylinder_model(1))
    assert np.max(np.abs(c.values - 1.0)) < 1e-7
    assert ak.auto_rho(p, spec, ak.cylinder_model(1)) == 0.0


def test_glue_region_identities_exact():
    inner = ak.cigar_model(2)
    spec = ak.GlueSpec(t0=3.0, rho0=0.0)
    p = ak.potential_of(inner, (0.0, spec.grid_end, spec.h))
    c = ak.glue_coefficient(p, spec, inner)
    t = c.t
    outer = t >= 3.5
    assert np.all(c.values[outer] == 1.0)
    left = t <= 0.5
    assert np.array_equal(c.values[left], inner.a(t[left]))


def test_auto_rho_cigar_default_transition():
    inner = ak.cigar_model(2)
    spec = ak.GlueSpec(t0=3.0)
    p = ak.potential_of(inner, (0.0, spec.grid_end, spec.h))
    rho0 = ak.auto_rho(p, spec, inner)
    assert np.isfinite(rho0) and rho0 >= 0.0
    c = ak.glue_coefficient(p, spec, inner, rho0=rho0)
    assert np.min(c.values) >= 1e-2


def test_auto_rho_narrow_transition_needs_bump():
    # a narrow transition makes the interpolation dip strongly negative
    inner = ak.cigar_model(2)
    spec = ak.GlueSpec(t0=1.3)
    p = ak.potential_of(inner, (0.0, spec.grid_end, spec.h))
    rho0 = ak.auto_rho(p, spec, inner)
    assert rho0 > 1.0
    c = ak.glue_coefficient(p, spec, inner, rho0=rho0)
    assert np.min(c.values) >= spec.margin
    # near-minimality: 10% less amplitude violates the margin
    c_less = ak.glue_coefficient(p, spec, inner, rho0=0.9 * rho0)
    assert np.min(c_less.values) < spec.margin


def test_auto_rho_margin_monotonicity():
    inner = ak.cigar_model(2)
    rho_small = ak.auto_rho(
        ak.potential_of(inner, (0.0, 4.3, 0.005)), ak.GlueSpec(t0=1.3, margin=1e-2), inner
    )
    rho_large = ak.auto_rho(
        ak.potential_of(inner, (0.0, 4.3, 0.005)), ak.GlueSpec(t0=1.3, margin=2e-2), inner
    )
    assert rho_large >= rho_small


def test_glued_model_invariants():
    from acylsoliton import fd

    model = ak.glued_model(ak.cigar_model(2))
    assert model.kind is ak.Kind.GLUED
    t = ak.uniform_nodes(*GRID)
    a = model.sample_a(t)
    assert np.all(a > 0)
    # f' = 2 a to stencil accuracy
    fp = fd.d1(model.f(t), GRID[2])
    assert np.max(np.abs(fp - 2 * a)[1:-1]) < 5e-4
    # f - 2t constant on the cylinder region
    outer = t >= 3.5
    gap = model.f_minus_2t(t[outer])
    assert np.max(np.abs(gap - gap[0])) == 0.0


def test_glued_residual_vanishes_on_cylinder_region(zero_field):
    model = ak.glued_model(ak.cigar_model(2))
    r = ak.soliton_residual(model, zero_field)
    outer = r.t >= 3.5
    assert np.max(np.abs(r.values[outer])) == 0.0


def test_glued_forcing_compact_support():
    model = ak.glued_model(ak.cigar_model(2))
    forcing = ak.glued_forcing(model, GRID)
    assert np.max(np.abs(forcing.values[forcing.t >= 3.5])) == 0.0
    assert np.max(np.abs(forcing.values)) > 1e-3  # nontrivial in the transition


def test_glued_pipeline_end_to_end():
    model = ak.glued_model(ak.cigar_model(2))
    forcing = ak.glued_forcing(model, GRID)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        solution = ak.continuity_solve(model, forcing)
    residual = ak.soliton_residual(model, solution.phi_anchored)
    assert np.max(np.abs(residual.values)) <= 1e-8


def test_glued_model_text_roundtrip():
    model = ak.glued_model(ak.cigar_model(2))
    clone = ak.model_from_text(ak.model_to_text(model))
    t = ak.uniform_nodes(-2.0, 6.0, 0.05)
    assert np.allclose(clone.a(t), model.a(t), rtol=1e-12, atol=1e-14)
    assert np.allclose(clone.f(t), model.f(t), rtol=1e-12, atol=1e-12)

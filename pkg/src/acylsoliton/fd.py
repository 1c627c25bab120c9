"""Finite-difference stencils on uniform grids.

Interior nodes use 2nd-order central differences.  The two end nodes use
one-sided stencils of order 4 so that boundary values of reported residuals
are not the accuracy bottleneck (the radial operators divide second
derivatives by coefficients as small as e^{2t}, which magnifies stencil
truncation error near the inner end).

All helpers act along axis 0 and broadcast over trailing axes, so the same
code path serves 1D fields and (t,u) fields.  That keeps the u-independent
2D case numerically identical to the radial one.
"""

import numpy as np

# one-sided first derivative, order 4 (5 nodes)
_D1_EDGE = np.array([-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0])
# one-sided second derivative, order 4 (6 nodes)
_D2_EDGE = np.array([15.0 / 4.0, -77.0 / 6.0, 107.0 / 6.0, -13.0, 61.0 / 12.0, -5.0 / 6.0])

_MIN_NODES = 6


def _edge_dot(coeffs, u, reverse):
    """Sum coeffs[k] * u[k] (or u[-1-k]) along axis 0, broadcasting."""
    acc = coeffs[0] * (u[-1] if reverse else u[0])
    for k in range(1, len(coeffs)):
        acc = acc + coeffs[k] * (u[-1 - k] if reverse else u[k])
    return acc


def d1(u, h):
    """First derivative along axis 0: central interior, one-sided ends."""
    u = np.asarray(u, dtype=float)
    if u.shape[0] < _MIN_NODES:
        raise ValueError(f"need at least {_MIN_NODES} nodes, got {u.shape[0]}")
    out = np.empty_like(u)
    out[1:-1] = (u[2:] - u[:-2]) / (2.0 * h)
    out[0] = _edge_dot(_D1_EDGE, u, reverse=False) / h
    out[-1] = -_edge_dot(_D1_EDGE, u, reverse=True) / h
    return out


def d2(u, h):
    """Second derivative along axis 0: central interior, one-sided ends."""
    u = np.asarray(u, dtype=float)
    if u.shape[0] < _MIN_NODES:
        raise ValueError(f"need at least {_MIN_NODES} nodes, got {u.shape[0]}")
    out = np.empty_like(u)
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
    out[0] = _edge_dot(_D2_EDGE, u, reverse=False) / (h * h)
    out[-1] = _edge_dot(_D2_EDGE, u, reverse=True) / (h * h)
    return out


def d1_periodic(u, h, axis=1):
    """First derivative along a periodic axis (central everywhere)."""
    return (np.roll(u, -1, axis=axis) - np.roll(u, 1, axis=axis)) / (2.0 * h)


def d2_periodic(u, h, axis=1):
    """Second derivative along a periodic axis (central everywhere)."""
    return (np.roll(u, -1, axis=axis) - 2.0 * u + np.roll(u, 1, axis=axis)) / (h * h)


def derivative_interior(u, h, order):
    """Minimal-width central approximation of the order-th derivative.

    Returns (values, trim): `values` lives on the nodes trimmed by `trim`
    on each side.  Built by composing the 3-point second-derivative stencil
    and the central first-derivative stencil, which reproduces the standard
    2nd-order stencils (1,-2,1), (1,-4,6,-4,1)/..., etc.
    """
    u = np.asarray(u, dtype=float)
    if order < 0:
        raise ValueError("derivative order must be >= 0")
    vals = u.copy()
    trim = 0
    for _ in range(order // 2):
        vals = (vals[2:] - 2.0 * vals[1:-1] + vals[:-2]) / (h * h)
        trim += 1
    if order % 2:
        vals = (vals[2:] - vals[:-2]) / (2.0 * h)
        trim += 1
    return vals, trim

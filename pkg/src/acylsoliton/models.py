"""Closed-form radial Kahler models with cylindrical ends.

A radial model is a Kahler form a(t)*beta + flat torus factor, where
beta = dt ^ d^c t is the cylinder area form and t the cylindrical
coordinate.  The soliton potential f satisfies f' = 2a (the radial form of
iota_{JX} omega = -df for X = 2 d/dt), normalized additively so that
min f = 1.

Two closed-form models are provided: the product cylinder (a = 1,
f = 2t + 1, Ricci-flat) and the cigar times a flat torus, with

    a(t) = (1 + e^{-2t})^{-1},     f(t) = log(1 + e^{2t}) + 1.

The model also exposes log a and f - 2t as separate callables.  Both are
built from the same log1p(e^{-2t}) expression, so the soliton bracket
log a + (f - 2t) collapses to the constant c0 without floating-point
cancellation; this is what makes the exact-soliton residual vanish to
machine precision on wide grids.
"""

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import fd
from .errors import DomainError, PositivityLost
from .grids import GridFunction, uniform_nodes


class Kind(enum.Enum):
    CYLINDER = "cylinder"
    CIGAR = "cigar"
    GLUED = "glued"


@dataclass(frozen=True)
class RadialKahlerModel:
    """Radially symmetric ACyl Kahler model.

    a, log_a, f_minus_2t are vectorized callables of t.  f(t) is recovered
    as 2t + f_minus_2t(t).  torus is the lattice basis (rows) of the flat
    factor, or None when n = 1.  glue_params records how a glued model was
    built so it can be serialized and rebuilt exactly.
    """

    n: int
    kind: Kind
    c0: float
    a: Callable = field(repr=False)
    log_a: Callable = field(repr=False)
    f_minus_2t: Callable = field(repr=False)
    torus: Optional[np.ndarray] = None
    glue_params: Optional[dict] = None

    def f(self, t):
        t = np.asarray(t, dtype=float)
        return 2.0 * t + self.f_minus_2t(t)

    def sample_a(self, t):
        vals = np.asarray(self.a(np.asarray(t, dtype=float)), dtype=float)
        if np.any(vals <= 0.0):
            i = int(np.argmin(vals))
            raise DomainError(f"coefficient a(t) <= 0 at t={np.asarray(t)[i]:.6g}")
        return vals


def _default_torus(n):
    # unit square lattice in R^{2(n-1)}
    return np.eye(2 * (n - 1)) if n > 1 else None


def cigar_model(n, torus=None):
    """Cigar soliton times a flat torus; ACyl with cross-section S^1 x T^{2(n-1)}.

    a(t) = (1+e^{-2t})^{-1} tends to 1 (the paper's asymptotic cylinder) and
    f - 2t = log(1+e^{-2t}) + 1 decays at rate e^{-2t}.  min f = 1 is
    attained in the limit t -> -infty (the fixed point of the flow).
    """
    if n < 1:
        raise DomainError(f"complex dimension must be >= 1, got n={n}")

    def a(t):
        t = np.asarray(t, dtype=float)
        return 1.0 / (1.0 + np.exp(-2.0 * t))

    def log_a(t):
        t = np.asarray(t, dtype=float)
        return -np.logaddexp(0.0, -2.0 * t)

    def f_minus_2t(t):
        t = np.asarray(t, dtype=float)
        return np.logaddexp(0.0, -2.0 * t) + 1.0

    return RadialKahlerModel(
        n=n, kind=Kind.CIGAR, c0=1.0, a=a, log_a=log_a, f_minus_2t=f_minus_2t,
        torus=_default_torus(n) if torus is None else np.asarray(torus, dtype=float),
    )


def cylinder_model(n, torus=None):
    """Ricci-flat product cylinder: a = 1, f = 2t + 1 (min over t >= 0 is 1)."""
    if n < 1:
        raise DomainError(f"complex dimension must be >= 1, got n={n}")

    def a(t):
        return np.ones_like(np.asarray(t, dtype=float))

    def log_a(t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def f_minus_2t(t):
        return np.full_like(np.asarray(t, dtype=float), 1.0)

    return RadialKahlerModel(
        n=n, kind=Kind.CYLINDER, c0=1.0, a=a, log_a=log_a, f_minus_2t=f_minus_2t,
        torus=_default_torus(n) if torus is None else np.asarray(torus, dtype=float),
    )


def _as_nodes(grid):
    if isinstance(grid, GridFunction):
        return grid.t_min, grid.t_max, grid.h
    t_min, t_max, h = grid
    return float(t_min), float(t_max), float(h)


def ricci_coefficient(model, grid):
    """Coefficient of Ric(omega) relative to beta: -1/2 (log a)''.

    The e^{2t} Jacobian between (i/2) dz^dzbar and beta contributes -2t to
    log(omega^n / volume form), which drops out under d^2/dt^2.  Second
    derivative by finite differences on the grid.
    """
    t_min, t_max, h = _as_nodes(grid)
    t = uniform_nodes(t_min, t_max, h)
    model.sample_a(t)  # positivity check
    log_a = np.asarray(model.log_a(t), dtype=float)
    return GridFunction(t_min, t_max, h, -0.5 * fd.d2(log_a, h))


def soliton_residual(model, phi):
    """Pointwise defect of the gradient-soliton volume identity.

    r(t) = log(a + phi''/2) - (2t - f - phi') - c_fit, with c_fit taken at
    the last node.  r vanishes (to stencil error) iff omega + i ddbar phi
    solves the soliton Monge-Ampere identity.  Derivatives are evaluated on
    phi - phi(t_min); stencils are shift-invariant, and the subtraction
    keeps the e^{2t}-scale structure near a degenerate inner end
    representable in double precision.
    """
    t = phi.t
    h = phi.h
    a = model.sample_a(t)
    shifted = phi.values - phi.values[0]
    half_dd = 0.5 * fd.d2(shifted, h)
    a_phi = a + half_dd
    if np.any(a_phi <= 0.0):
        i = int(np.argmin(a_phi))
        raise PositivityLost(i, t[i], a_phi[i])
    bracket = (
        np.log1p(half_dd / a)
        + np.asarray(model.log_a(t), dtype=float)
        + np.asarray(model.f_minus_2t(t), dtype=float)
        + fd.d1(shifted, h)
    )
    return phi.like(bracket - bracket[-1])


# ---- plain-text key-value serialization ----

def model_to_text(model):
    lines = [
        f"kind = {model.kind.value}",
        f"n = {model.n}",
        f"c0 = {model.c0:.17g}",
    ]
    if model.torus is not None:
        for row in model.torus:
            lines.append("lattice_row = " + " ".join(f"{x:.17g}" for x in row))
    if model.glue_params:
        for key in sorted(model.glue_params):
            lines.append(f"glue.{key} = {model.glue_params[key]:.17g}")
    return "\n".join(lines) + "\n"


def model_from_text(text):
    kind = None
    n = None
    rows = []
    glue = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "kind":
            kind = Kind(value)
        elif key == "n":
            n = int(value)
        elif key == "lattice_row":
            rows.append([float(x) for x in value.split()])
        elif key.startswith("glue."):
            glue[key[5:]] = float(value)
        elif key == "c0":
            pass  # fixed by the min f = 1 normalization
        else:
            raise DomainError(f"unknown model key {key!r}")
    if kind is None or n is None:
        raise DomainError("model text must define kind and n")
    torus = np.array(rows) if rows else None
    if kind is Kind.CIGAR:
        return cigar_model(n, torus=torus)
    if kind is Kind.CYLINDER:
        return cylinder_model(n, torus=torus)
    from .gluing import GlueSpec, glued_model  # deferred: gluing imports models

    spec = GlueSpec(
        t0=glue["t0"],
        smoothstep_degree=int(glue.get("degree", 7)),
        rho0=glue.get("rho0"),
        margin=glue.get("margin", 1e-2),
    )
    return glued_model(cigar_model(n, torus=torus), spec)

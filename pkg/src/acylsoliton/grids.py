"""Sampled scalar fields on uniform grids.

GridFunction is the universal carrier for every numerical quantity in the
package: coefficients, right-hand sides, potentials, residuals.  The first
axis is always the cylindrical coordinate t on a uniform grid; 2D fields add
a periodic second axis (a torus coordinate u on [0, 2pi)).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

_TWO_PI = 2.0 * np.pi


def uniform_nodes(t_min, t_max, h):
    """Node vector t_min + k*h covering [t_min, t_max]; validates divisibility."""
    if h <= 0:
        raise DomainError(f"grid spacing must be positive, got {h}")
    if t_max <= t_min:
        raise DomainError(f"empty grid: t_max={t_max} <= t_min={t_min}")
    n_cells = (t_max - t_min) / h
    n = int(round(n_cells))
    if abs(n_cells - n) > 1e-8 * max(1.0, abs(n_cells)):
        raise DomainError(f"(t_max - t_min)/h = {n_cells} is not an integer")
    return t_min + h * np.arange(n + 1)


@dataclass(frozen=True)
class GridFunction:
    """Scalar field sampled on a uniform t-grid, optionally times a u-grid.

    values has shape (n_t,) or (n_t, n_u).  The u-axis, when present, is the
    periodic grid u_k = 2*pi*k/n_u.
    """

    t_min: float
    t_max: float
    h: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        n_expected = len(uniform_nodes(self.t_min, self.t_max, self.h))
        if vals.shape[0] != n_expected:
            raise DomainError(
                f"values length {vals.shape[0]} inconsistent with grid "
                f"({self.t_min}, {self.t_max}, {self.h}) -> {n_expected} nodes"
            )
        if vals.ndim not in (1, 2):
            raise DomainError("values must be 1D or 2D")
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid function contains non-finite values")

    @property
    def t(self):
        return uniform_nodes(self.t_min, self.t_max, self.h)

    @property
    def is_2d(self):
        return self.values.ndim == 2

    @property
    def u(self):
        if not self.is_2d:
            raise DomainError("1D grid function has no u-axis")
        n_u = self.values.shape[1]
        return _TWO_PI * np.arange(n_u) / n_u

    @property
    def hu(self):
        return _TWO_PI / self.values.shape[1]

    @classmethod
    def sample(cls, fn, t_min, t_max, h):
        t = uniform_nodes(t_min, t_max, h)
        return cls(t_min, t_max, h, np.asarray(fn(t), dtype=float))

    @classmethod
    def sample_2d(cls, fn, t_min, t_max, h, n_u):
        t = uniform_nodes(t_min, t_max, h)
        u = _TWO_PI * np.arange(n_u) / n_u
        tt, uu = np.meshgrid(t, u, indexing="ij")
        return cls(t_min, t_max, h, np.asarray(fn(tt, uu), dtype=float))

    def like(self, values):
        """New field with the same grid."""
        return GridFunction(self.t_min, self.t_max, self.h, values)

    def zeros_like(self):
        return self.like(np.zeros_like(self.values))

    def same_grid(self, other):
        return (
            self.t_min == other.t_min
            and self.t_max == other.t_max
            and self.h == other.h
            and self.values.shape == other.values.shape
        )

    # ---- serialization: CSV with header `t,value` (or `t,u,value`) ----

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            if self.is_2d:
                fh.write("t,u,value\n")
                t, u = self.t, self.u
                for i in range(len(t)):
                    for j in range(len(u)):
                        fh.write(f"{t[i]:.17g},{u[j]:.17g},{self.values[i, j]:.17g}\n")
            else:
                fh.write("t,value\n")
                for ti, vi in zip(self.t, self.values):
                    fh.write(f"{ti:.17g},{vi:.17g}\n")

    @classmethod
    def from_csv(cls, path):
        with open(path, "r") as fh:
            header = fh.readline().strip()
            rows = [line.strip().split(",") for line in fh if line.strip()]
        if header == "t,value":
            t = np.array([float(r[0]) for r in rows])
            v = np.array([float(r[1]) for r in rows])
            vals = v
        elif header == "t,u,value":
            t_all = np.array([float(r[0]) for r in rows])
            u_all = np.array([float(r[1]) for r in rows])
            v = np.array([float(r[2]) for r in rows])
            t = np.unique(t_all)
            n_u = len(np.unique(u_all))
            vals = v.reshape(len(t), n_u)
        else:
            raise DomainError(f"unrecognized CSV header {header!r}")
        if len(t) < 2:
            raise DomainError("need at least two grid nodes")
        h = float((t[-1] - t[0]) / (len(t) - 1))  # span-averaged, exact for clean spacings
        return cls(float(t[0]), float(t[-1]), h, vals)

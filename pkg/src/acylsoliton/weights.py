"""Critical weights of the model drift operator d^2/dt^2 + 2 d/dt + Delta_L.

Separating a cross-section eigenmode with eigenvalue mu >= 0 and substituting
v = e^{i lambda t} u(t) (u polynomial in t) shows that lambda = gamma + i eps
must satisfy 2 gamma (1 - eps) = 0 and eps^2 - 2 eps - gamma^2 = mu.
gamma != 0 would force eps = 1 and mu = -1 - gamma^2 < 0, so gamma = 0 and
the critical weights are exactly

    eps = 1 +/- sqrt(1 + mu).

Double roots would need 1 + mu = 0, which never happens, so polynomial-in-t
solutions contribute no extra weights.  For mu >= 0 the branches satisfy
eps_- <= 0 and eps_+ >= 2 (equality only at mu = 0), hence the interval
(0, 2) is always free of critical weights and the drift Laplacian is
Fredholm there.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DomainError

DEDUP_TOL = 1e-12


@dataclass(frozen=True)
class CriticalWeight:
    epsilon: float
    mu: float
    branch: int  # +1 or -1


@dataclass(frozen=True)
class CriticalWeightSet:
    """Critical weights found inside `window`, from eigenvalues up to mu_max."""

    weights: Tuple[CriticalWeight, ...]
    window: Tuple[float, float]
    mu_max: float

    def epsilons(self):
        return np.array([w.epsilon for w in self.weights])

    def verify_indicial(self, tol=1e-10):
        """Each weight solves the mode ODE characteristic polynomial."""
        return all(abs(w.epsilon**2 - 2.0 * w.epsilon - w.mu) < tol for w in self.weights)


def _as_mus(spectrum):
    mus = []
    for entry in spectrum:
        mu = entry[0] if isinstance(entry, (tuple, list)) else entry
        mu = float(mu)
        if mu < -DEDUP_TOL:
            raise DomainError(f"negative cross-section eigenvalue mu={mu}")
        mus.append(max(mu, 0.0))
    return mus


def critical_weights(spectrum, window):
    """All eps = 1 +/- sqrt(1+mu) strictly inside the open window (lo, hi),
    sorted and deduplicated.

    `spectrum` is a list of eigenvalues mu or of (mu, multiplicity) pairs.
    """
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise DomainError(f"empty window ({lo}, {hi})")
    mus = _as_mus(spectrum)
    found = []
    for mu in mus:
        root = np.sqrt(1.0 + mu)
        for branch in (-1, +1):
            eps = 1.0 + branch * root
            if lo + DEDUP_TOL < eps < hi - DEDUP_TOL:
                found.append(CriticalWeight(epsilon=eps, mu=mu, branch=branch))
    found.sort(key=lambda w: (w.epsilon, w.mu, w.branch))
    dedup = []
    for w in found:
        if dedup and abs(w.epsilon - dedup[-1].epsilon) <= DEDUP_TOL:
            continue
        dedup.append(w)
    return CriticalWeightSet(
        weights=tuple(dedup), window=(lo, hi), mu_max=max(mus) if mus else 0.0
    )


def fredholm_window_check(cws, interval=(0.0, 2.0)):
    """True iff no critical weight lies in the open interval.

    Also returns the margin: the distance from the interval to the nearest
    known weight (0 when a weight sits on the boundary).  Raises when the
    weight set cannot certify the interval, either because the interval is
    not contained in the searched window or because the eigenvalue coverage
    mu_max is too small (all weights in [1-sqrt(1+mu_max), 1+sqrt(1+mu_max)]
    are known; anything outside might be missing).
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise DomainError(f"empty interval ({lo}, {hi})")
    wlo, whi = cws.window
    if lo < wlo - DEDUP_TOL or hi > whi + DEDUP_TOL:
        raise DomainError(
            f"interval ({lo}, {hi}) not contained in searched window ({wlo}, {whi})"
        )
    reach = np.sqrt(1.0 + cws.mu_max)
    if hi > 1.0 + reach + DEDUP_TOL or lo < 1.0 - reach - DEDUP_TOL:
        raise DomainError(
            f"insufficient mu_max={cws.mu_max:.6g} to certify interval ({lo}, {hi})"
        )
    eps = cws.epsilons()
    inside = (eps > lo + DEDUP_TOL) & (eps < hi - DEDUP_TOL)
    ok = not bool(np.any(inside))
    if len(eps) == 0:
        margin = float("inf")
    else:
        dist = np.maximum(np.maximum(lo - eps, eps - hi), 0.0)
        margin = float(np.min(dist))
    return ok, margin


def weights_to_csv(cws, path):
    with open(path, "w", newline="") as fh:
        fh.write("epsilon,mu,branch\n")
        for w in cws.weights:
            fh.write(f"{w.epsilon:.17g},{w.mu:.17g},{'+' if w.branch > 0 else '-'}\n")

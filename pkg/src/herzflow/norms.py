"""Chi norms, homogeneous Sobolev seminorms, and space-time trajectory norms.

The chi(i) norm of a field is h^3 * sum_xi |xi|^i |u_hat(xi)| with the
Euclidean modulus of the complex 3-vector amplitude; the Leray projector is
per-mode non-expansive under this convention.  All trajectory norms use the
same trapezoidal time weights, so the interpolation inequality
l2_chi0^2 <= linf_chi(-1) * l1_chi(1) is an exact Cauchy-Schwarz statement
on finite sums.
"""

from __future__ import annotations

import numpy as np

from .lattice import ParameterError, SpectralField, Trajectory

__all__ = [
    "chi_norm",
    "sobolev_seminorm",
    "chi_series",
    "linf_chi_norm",
    "l1_chi_norm",
    "l2_chi0_norm",
]

CHI_ORDERS = (-1, 0, 1)


def _chi_weights(lattice, i: int) -> np.ndarray:
    if i not in CHI_ORDERS:
        raise ParameterError(f"chi order must be one of {CHI_ORDERS}, got {i}")
    if i == 0:
        return np.ones_like(lattice.xi_norm)
    return lattice.xi_norm**i


def chi_norm(u: SpectralField, i: int) -> float:
    """h^3 * sum_xi |xi|^i |u_hat(xi)|, i in {-1, 0, 1}."""
    w = _chi_weights(u.lattice, i)
    return float(u.lattice.h**3 * (w @ u.modulus()))


def sobolev_seminorm(u: SpectralField, s: float) -> float:
    """(h^3 * sum_xi |xi|^{2s} |u_hat(xi)|^2)^{1/2}."""
    w = u.lattice.xi_norm ** (2.0 * float(s))
    return float(np.sqrt(u.lattice.h**3 * (w @ u.modulus() ** 2)))


def _trapezoid_weights(n_nodes: int, dt: float) -> np.ndarray:
    # Normative quadrature for every space-time norm; tests may monkeypatch
    # this hook to inject a corrupted rule.
    w = np.full(n_nodes, dt)
    w[0] = 0.5 * dt
    w[-1] = 0.5 * dt
    return w


def chi_series(traj: Trajectory, i: int) -> np.ndarray:
    """chi(i) norm of the trajectory state at every time node."""
    w = _chi_weights(traj.lattice, i)
    mod = np.sqrt((np.abs(traj.states) ** 2).sum(axis=-1))
    return traj.lattice.h**3 * (mod @ w)


def linf_chi_norm(traj: Trajectory, i: int) -> float:
    """max over time nodes of the chi(i) norm."""
    return float(chi_series(traj, i).max())


def l1_chi_norm(traj: Trajectory, i: int) -> float:
    """Trapezoidal time integral of the chi(i) norm."""
    series = chi_series(traj, i)
    return float(_trapezoid_weights(traj.n_nodes, traj.dt) @ series)


def l2_chi0_norm(traj: Trajectory) -> float:
    """Trapezoidal L^2-in-time norm of the chi(0) norm."""
    series = chi_series(traj, 0)
    w = _trapezoid_weights(traj.n_nodes, traj.dt)
    return float(np.sqrt(w @ series**2))

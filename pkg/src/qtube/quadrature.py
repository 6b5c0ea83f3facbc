"""Quadrature rules: unit-sphere product rules and composite Gauss panels.

The fiber spheres here are genuine round spheres, so smooth integrands are
handled by a counting measure (k=1), the trapezoid rule on the circle (k=2,
spectrally accurate), and product Gauss-Legendre in angular coordinates with
the sin-power Jacobian for k >= 3.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError

__all__ = ["sphere_rule", "sphere_area", "gauss_panels", "ball_rule"]


def sphere_area(k):
    """Surface measure of the unit sphere S^{k-1} (counting measure for k=1)."""
    if k < 1:
        raise DimensionError(f"fiber dimension must be >= 1, got {k}")
    if k == 1:
        return 2.0
    from math import gamma, pi
    return 2.0 * pi ** (k / 2.0) / gamma(k / 2.0)


def sphere_rule(k, level=3):
    """Nodes and weights integrating smooth functions over S^{k-1}.

    Returns (dirs, w) with dirs of shape (q, k) and sum(w) == area(S^{k-1}).
    `level` doubles the node count per increment; level 3 is ample for the
    polynomial integrands (elementary symmetric functions) used here.
    """
    if k < 1:
        raise DimensionError(f"fiber dimension must be >= 1, got {k}")
    if k == 1:
        dirs = np.array([[1.0], [-1.0]])
        w = np.array([1.0, 1.0])
        return dirs, w
    if k == 2:
        q = 8 * 2 ** level
        ang = 2.0 * np.pi * np.arange(q) / q
        dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        w = np.full(q, 2.0 * np.pi / q)
        return dirs, w
    # k >= 3: recurse over the polar angle with Gauss-Legendre in cos(phi).
    n_polar = 4 * 2 ** level
    x, wx = np.polynomial.legendre.leggauss(n_polar)  # x = cos(phi) on [-1, 1]
    sub_dirs, sub_w = sphere_rule(k - 1, level)
    sin_phi = np.sqrt(1.0 - x ** 2)
    dirs = np.empty((n_polar * len(sub_w), k))
    w = np.empty(n_polar * len(sub_w))
    for i in range(n_polar):
        s = slice(i * len(sub_w), (i + 1) * len(sub_w))
        dirs[s, 0] = x[i]
        dirs[s, 1:] = sin_phi[i] * sub_dirs
        # measure: sin^{k-2}(phi) dphi dS^{k-2} = (1-x^2)^{(k-3)/2} dx dS^{k-2}
        w[s] = wx[i] * (1.0 - x[i] ** 2) ** ((k - 3) / 2.0) * sub_w
    return dirs, w


def gauss_panels(edges, n_per_panel=8):
    """Composite Gauss-Legendre nodes/weights over consecutive [e_i, e_{i+1}] panels."""
    edges = np.asarray(edges, dtype=float)
    x, w = np.polynomial.legendre.leggauss(n_per_panel)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes.append(mid + half * x)
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def ball_rule(k, radius=1.0, n_radial=32, sphere_level=3):
    """Product rule for the solid ball B^k(0, radius).

    Returns (t, wt, dirs, wd): radial Gauss nodes/weights on (0, radius)
    (the t^{k-1} Jacobian is left to the caller's integrand) and a sphere rule.
    """
    x, w = np.polynomial.legendre.leggauss(n_radial)
    t = 0.5 * radius * (x + 1.0)
    wt = 0.5 * radius * w
    dirs, wd = sphere_rule(k, sphere_level)
    return t, wt, dirs, wd

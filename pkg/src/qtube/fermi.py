"""Tube metric in Fermi coordinates: assembly, inverse, volume density.

A point of the tube is (x, u): chart coordinates on the base plus fiber
coordinates u against the orthonormal normal frame.  The pullback metric
has the block form [[Gt + C C^T, C], [C^T, I]] where Gt is the horizontal
block built from the shape operators and C carries the normal-connection
coefficients; det G = det Gt, so the volume density never sees C.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from .errors import Inadmissible, NonPositive, OutsideTube, Singular

__all__ = [
    "max_radius",
    "TubeSpec",
    "FermiPoint",
    "TubeMetric",
    "assemble_metric",
    "metric_inverse",
    "volume_density",
    "shape_operator_norm",
    "volume_sandwich",
    "random_fiber",
]


def max_radius(eps0, k):
    """Largest admissible tube radius for curvature bound eps0 and fiber dim k."""
    if eps0 <= 0:
        raise NonPositive(f"curvature bound must be positive, got {eps0}")
    if k < 1:
        raise NonPositive(f"fiber dimension must be >= 1, got {k}")
    return 1.0 / (np.sqrt(k) * eps0)


@dataclass(frozen=True)
class TubeSpec:
    """Fiber dimension, tube radius, and the curvature bound they must satisfy."""

    k: int
    r: float
    eps0: float

    def __post_init__(self):
        if self.k < 1:
            raise NonPositive(f"fiber dimension must be >= 1, got {self.k}")
        if self.r <= 0:
            raise NonPositive(f"tube radius must be positive, got {self.r}")
        if self.eps0 <= 0:
            raise NonPositive(f"eps0 must be positive, got {self.eps0}")
        if self.r > max_radius(self.eps0, self.k) * (1 + 1e-12):
            raise Inadmissible(
                f"radius {self.r} exceeds admissible bound "
                f"{max_radius(self.eps0, self.k):.6g} for k={self.k}, eps0={self.eps0}"
            )

    @property
    def threshold(self):
        """Reference fiber eigenvalue scale 1/r^2 multiplies rho(k)^2."""
        return 1.0 / self.r ** 2


@dataclass(frozen=True)
class FermiPoint:
    """Base framed point plus fiber coordinates inside the tube."""

    base: object  # FramedPoint
    u: np.ndarray
    t: float
    eta: np.ndarray | None  # u/t for t > 0

    @classmethod
    def make(cls, base, u, tube=None):
        u = np.asarray(u, dtype=float)
        t = float(np.linalg.norm(u))
        if tube is not None and t >= tube.r:
            raise OutsideTube(f"|u| = {t} >= tube radius {tube.r}")
        return cls(base, u, t, u / t if t > 0 else None)


@dataclass
class TubeMetric:
    """Assembled Fermi-coordinate metric blocks at one tube point."""

    n: int
    k: int
    u: np.ndarray
    g: np.ndarray
    G_tilde: np.ndarray  # (n, n)
    C: np.ndarray  # (n, k)
    G: np.ndarray  # (n+k, n+k)
    det_factor: float  # det(I - u_a H_a)
    sqrt_det_g: float

    @property
    def det_density(self):
        return self.det_factor * self.sqrt_det_g


def shape_operator_norm(fp, u):
    """Spectral norm of u_a S_a in a g-orthonormal basis.

    This is the norm the radial admissibility (Neumann-series) argument
    bounds; the combination is g-self-adjoint so the symmetrized
    representative L^{-1} B L^{-T} has the same spectrum.
    """
    B = np.einsum("a,aij->ij", np.asarray(u, dtype=float), fp.A)
    L = fp.chol
    sym = solve_triangular(L, solve_triangular(L, B, lower=True).T, lower=True)
    sym = 0.5 * (sym + sym.T)
    return float(np.max(np.abs(np.linalg.eigvalsh(sym))))


def assemble_metric(fp, u, tube=None):
    """Tube metric blocks at fiber coordinates u over a framed base point.

    Raises OutsideTube when |u| >= r (if a TubeSpec is given) and
    Inadmissible when the shape-operator combination reaches norm 1.
    """
    u = np.asarray(u, dtype=float)
    n, k = fp.n, fp.k
    if u.shape != (k,):
        raise Inadmissible(f"fiber coordinates must have length {k}, got {u.shape}")
    if tube is not None and float(np.linalg.norm(u)) >= tube.r:
        raise OutsideTube(f"|u| = {np.linalg.norm(u):.6g} >= tube radius {tube.r}")
    if shape_operator_norm(fp, u) >= 1.0:
        raise Inadmissible("u_a H_a reaches norm 1: tube map degenerates here")

    B = np.einsum("a,aij->ij", u, fp.A)  # lowered u_a A_a
    ginv_B = np.linalg.solve(fp.g, B)
    G_tilde = fp.g - 2.0 * B + B @ ginv_B
    G_tilde = 0.5 * (G_tilde + G_tilde.T)
    C = np.einsum("a,iab->ib", u, fp.omega)
    G = np.empty((n + k, n + k))
    G[:n, :n] = G_tilde + C @ C.T
    G[:n, n:] = C
    G[n:, :n] = C.T
    G[n:, n:] = np.eye(k)
    det_factor = float(np.linalg.det(np.eye(n) - ginv_B))
    return TubeMetric(n, k, u, fp.g, G_tilde, C, G, det_factor, fp.sqrt_det_g())


def metric_inverse(tm):
    """Inverse metric from the block formula; raises Singular if Gt fails."""
    n, k = tm.n, tm.k
    try:
        cf = cho_factor(tm.G_tilde, lower=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - scipy raises its own
        raise Singular(f"horizontal block not positive definite: {exc}") from None
    except Exception as exc:
        raise Singular(f"horizontal block not invertible: {exc}") from None
    Gt_inv = cho_solve(cf, np.eye(n))
    Gt_inv_C = cho_solve(cf, tm.C)
    out = np.empty((n + k, n + k))
    out[:n, :n] = Gt_inv
    out[:n, n:] = -Gt_inv_C
    out[n:, :n] = -Gt_inv_C.T
    out[n:, n:] = tm.C.T @ Gt_inv_C + np.eye(k)
    return 0.5 * (out + out.T)


def psd_inverse_block(tm):
    """The positive-semidefinite summand of the inverse metric (diagnostics)."""
    inv = metric_inverse(tm)
    n, k = tm.n, tm.k
    block = inv.copy()
    block[n:, n:] -= np.eye(k)
    return block


def volume_density(tm):
    """det(I - u_a H_a) * sqrt(det g): the tube volume element density."""
    return tm.det_density


def volume_sandwich(fp, u, tm=None):
    """Pointwise sandwich (lo, value, hi) for det(I - u_a H_a).

    Uses the local bound eps = sqrt(k) * |u| * A_norm; lo/hi are
    (1 -/+ eps)^k.  Valid whenever eps < 1.
    """
    if tm is None:
        tm = assemble_metric(fp, u)
    t = float(np.linalg.norm(np.asarray(u, dtype=float)))
    eps = np.sqrt(fp.k) * t * fp.A_norm
    return (1.0 - eps) ** fp.k, tm.det_factor, (1.0 + eps) ** fp.k


def random_fiber(rng, fp, tube, margin=0.98):
    """Random fiber coordinates, uniform in the ball of radius margin * r."""
    k = tube.k
    while True:
        u = rng.standard_normal(k)
        u *= (margin * tube.r) * rng.random() ** (1.0 / k) / np.linalg.norm(u)
        if shape_operator_norm(fp, u) < 0.999:
            return u

"""Immersed-manifold charts and first/second-order invariants.

A chart is a parametrized piece of a base manifold immersed in Euclidean
space.  From its position map and derivatives we compute, per point: the
induced metric, an orthonormal normal frame, shape-operator matrices, the
normal-connection coefficients, and the intrinsic curvature operator via
the Gauss equation (the ambient space is always flat here).

Index conventions
-----------------
* jacobian J has shape (n, m): row i is the tangent vector d(position)/dx_i.
* hessian has shape (n, n, m): second ambient derivatives.
* A (lowered second fundamental form) has shape (k, n, n), symmetric in the
  last two slots; S = g^{-1} A is the mixed shape operator, so the matrix
  named H in callers is g-self-adjoint rather than plain-symmetric.
* omega[i, a, b] = <D_i eta_a, eta_b> is antisymmetric in (a, b).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .errors import DomainError, GridTooCoarse, RankDeficient

__all__ = [
    "Box",
    "ImmersionChart",
    "FramedPoint",
    "frame_point",
    "frame_field",
    "curvature_operator",
    "gauss_curvature",
    "sectional_curvature",
    "orthonormal_curvature",
    "normal_curvature",
    "fd_jacobian",
    "fd_hessian",
]


@dataclass(frozen=True)
class Box:
    """Axis-aligned chart domain (already truncated to finite extent)."""

    lo: np.ndarray
    hi: np.ndarray

    def contains(self, x, pad=1e-12):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo - pad) and np.all(x <= self.hi + pad))

    def clipped_step(self, x, i, h):
        """Largest step <= h along +/- e_i keeping both stencil ends inside."""
        room = min(self.hi[i] - x[i], x[i] - self.lo[i])
        return min(h, room) if room > 0 else 0.0


@dataclass
class RadialStructure:
    """Rotational/radial metadata a family may attach to its chart.

    sigma_of(x) is the geodesic distance from the family's center (waist or
    pole), measured along the meridian; circumference(sigma) is the length
    (or boundary area, for n >= 3) of the geodesic sphere per declared end.
    """

    sigma_of: Callable[[np.ndarray], float]
    point_at: Callable[[float, float], np.ndarray]  # (sigma, angle) -> chart coords
    circumference: Callable[[float], float]  # per end
    n_ends: int = 1
    meridian_axis: int = 0
    signed: bool = False  # sigma takes both signs (two-ended meridian)
    pole_radius: float = 0.0  # chart starts at this sigma (pole cap excluded)


@dataclass
class ImmersionChart:
    """Parametrized immersion with derivative oracles up to second order."""

    name: str
    dim_base: int
    dim_ambient: int
    position: Callable[[np.ndarray], np.ndarray]
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    chart_domain: Box = None
    normal_frame: Optional[Callable[[np.ndarray], np.ndarray]] = None
    omega_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    symmetry_axis: Optional[int] = None  # metric independent of this coordinate
    radial: Optional[RadialStructure] = None
    euler: Optional[int] = None
    gauss_curvature_fn: Optional[Callable[[np.ndarray], float]] = None
    params: dict = field(default_factory=dict)

    @property
    def codim(self):
        return self.dim_ambient - self.dim_base

    def jac(self, x):
        if self.jacobian is not None:
            return np.asarray(self.jacobian(x), dtype=float)
        return fd_jacobian(self.position, x, self.dim_ambient)

    def hess(self, x):
        if self.hessian is not None:
            return np.asarray(self.hessian(x), dtype=float)
        return fd_hessian(self.position, x, self.dim_ambient)


@dataclass
class FramedPoint:
    """Per-point geometric package of the immersion."""

    chart: ImmersionChart
    x: np.ndarray
    g: np.ndarray  # (n, n) induced metric
    chol: np.ndarray  # lower Cholesky factor of g
    frame: np.ndarray  # (k, m) orthonormal normal vectors
    A: np.ndarray  # (k, n, n) lowered second fundamental form
    S: np.ndarray  # (k, n, n) mixed shape operators g^{-1} A
    omega: np.ndarray  # (n, k, k) normal-connection coefficients
    A_norm: float

    @property
    def n(self):
        return self.g.shape[0]

    @property
    def k(self):
        return self.frame.shape[0]

    def sqrt_det_g(self):
        return float(np.prod(np.diag(self.chol)))

    def shape_operator(self, direction):
        """Mixed shape operator for a unit normal direction in frame coords."""
        y = np.asarray(direction, dtype=float)
        return np.einsum("a,aij->ij", y, self.S)

    def lowered_form(self, direction):
        y = np.asarray(direction, dtype=float)
        return np.einsum("a,aij->ij", y, self.A)

    def rotated(self, rot):
        """Same geometric point expressed in a rotated normal frame.

        `rot` is a (k, k) orthogonal matrix; fiber coordinates transform as
        u' = rot @ u.  Constant rotations leave omega's derivative term out.
        """
        rot = np.asarray(rot, dtype=float)
        return FramedPoint(
            chart=self.chart,
            x=self.x,
            g=self.g,
            chol=self.chol,
            frame=rot @ self.frame,
            A=np.einsum("ab,bij->aij", rot, self.A),
            S=np.einsum("ab,bij->aij", rot, self.S),
            omega=np.einsum("ac,bd,icd->iab", rot, rot, self.omega),
            A_norm=self.A_norm,
        )


# ----------------------------------------------------------------------------
# finite differences
# ----------------------------------------------------------------------------

def _fd_step(x):
    return 1e-5 * (1.0 + float(np.linalg.norm(x)))


def fd_jacobian(position, x, m, h=None):
    x = np.asarray(x, dtype=float)
    n = x.size
    h = h or _fd_step(x)
    J = np.empty((n, m))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        J[i] = (np.asarray(position(x + e)) - np.asarray(position(x - e))) / (2 * h)
    return J


def fd_hessian(position, x, m, h=None):
    x = np.asarray(x, dtype=float)
    n = x.size
    h = h or (_fd_step(x) * 10.0)  # second differences lose more digits
    H = np.empty((n, n, m))
    f0 = np.asarray(position(x))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (np.asarray(position(x + ei)) - 2 * f0 + np.asarray(position(x - ei))) / h ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            mixed = (
                np.asarray(position(x + ei + ej))
                - np.asarray(position(x + ei - ej))
                - np.asarray(position(x - ei + ej))
                + np.asarray(position(x - ei - ej))
            ) / (4 * h ** 2)
            H[i, j] = mixed
            H[j, i] = mixed
    return H


# ----------------------------------------------------------------------------
# normal frames
# ----------------------------------------------------------------------------

def _tangent_basis(J):
    q, _ = np.linalg.qr(J.T)  # (m, n), orthonormal tangent columns
    return q


def _gram_schmidt_normals(J, k, prev=None, pivot_order=None):
    """Orthonormal basis of the normal space by pivoted modified Gram-Schmidt.

    Seeds from the fixed ambient reference basis; pivoting picks, at each
    step, the reference vector with the largest residual after projecting
    out the tangent space and previously chosen normals.  Passing a pivot
    order makes the construction smooth in x (used by frame derivatives);
    `prev` sign-aligns the result with a neighboring frame.
    """
    m = J.shape[1]
    q = _tangent_basis(J)
    residual = np.eye(m) - q @ q.T  # columns: reference basis minus tangent part
    chosen = []
    order = []
    cols = residual.copy()
    for step in range(k):
        if pivot_order is not None:
            pick = pivot_order[step]
        else:
            norms = np.linalg.norm(cols, axis=0)
            pick = int(np.argmax(norms))
        v = cols[:, pick].copy()
        nv = np.linalg.norm(v)
        if nv < 1e-10:
            raise RankDeficient("normal-space construction found no independent direction")
        v /= nv
        chosen.append(v)
        order.append(pick)
        cols -= np.outer(v, v @ cols)
    frame = np.array(chosen)
    if prev is not None:
        for a in range(k):
            if frame[a] @ prev[a] < 0:
                frame[a] = -frame[a]
    else:
        for a in range(k):  # canonical sign: largest-magnitude entry positive
            j = int(np.argmax(np.abs(frame[a])))
            if frame[a][j] < 0:
                frame[a] = -frame[a]
    return frame, order


def _frame_at(chart, x, prev=None, pivot_order=None):
    if chart.normal_frame is not None:
        frame = np.asarray(chart.normal_frame(x), dtype=float)
        if prev is not None:
            frame = frame.copy()
            for a in range(frame.shape[0]):
                if frame[a] @ prev[a] < 0:
                    frame[a] = -frame[a]
        return frame, None
    J = chart.jac(x)
    return _gram_schmidt_normals(J, chart.codim, prev=prev, pivot_order=pivot_order)


def _fd_omega(chart, x, frame, pivot_order, h=None):
    """Central-difference normal-connection coefficients, antisymmetrized.

    Antisymmetry in (a, b) is exact for orthonormal frames; enforcing it
    here removes the symmetric finite-difference error and is what the
    downstream cancellation identities rely on.
    """
    n, k = chart.dim_base, chart.codim
    h = h or _fd_step(x)
    W = np.empty((n, k, k))
    for i in range(n):
        step = chart.chart_domain.clipped_step(x, i, h)
        if step <= 0:
            raise GridTooCoarse(f"no room for an omega stencil along axis {i}")
        e = np.zeros(n)
        e[i] = step
        fp_, _ = _frame_at(chart, x + e, prev=frame, pivot_order=pivot_order)
        fm_, _ = _frame_at(chart, x - e, prev=frame, pivot_order=pivot_order)
        d = (fp_ - fm_) / (2 * step)
        W[i] = d @ frame.T
    return 0.5 * (W - np.swapaxes(W, 1, 2))


# ----------------------------------------------------------------------------
# main entry points
# ----------------------------------------------------------------------------

def frame_point(chart, x, prev_frame=None):
    """Full geometric package at chart coordinates x.

    Raises DomainError outside the chart domain and RankDeficient where the
    jacobian drops rank.  With `prev_frame`, the normal frame is sign-aligned
    to it so frames vary smoothly along sampled paths.
    """
    x = np.asarray(x, dtype=float)
    if not chart.chart_domain.contains(x):
        raise DomainError(f"{x} outside chart domain of {chart.name}")
    J = chart.jac(x)
    n, k = chart.dim_base, chart.codim
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[-1] <= 1e-10 * max(1.0, sv[0]):
        raise RankDeficient(f"jacobian rank < {n} at {x}")
    g = J @ J.T
    L = cholesky(g, lower=True)
    frame, order = _frame_at(chart, x, prev=prev_frame)
    hess = chart.hess(x)
    A = np.einsum("ija,ba->bij", hess, frame)
    A = 0.5 * (A + np.swapaxes(A, 1, 2))
    S = np.array([np.linalg.solve(g, A[a]) for a in range(k)])
    if k == 1:
        omega = np.zeros((n, 1, 1))
    elif chart.omega_fn is not None:
        omega = np.asarray(chart.omega_fn(x), dtype=float)
        omega = 0.5 * (omega - np.swapaxes(omega, 1, 2))
    else:
        omega = _fd_omega(chart, x, frame, order)
    # bilinear norm of the second fundamental form, in a g-orthonormal basis
    sq = 0.0
    for a in range(k):
        On = solve_triangular(L, solve_triangular(L, A[a], lower=True).T, lower=True)
        sq += float(np.sum(On * On))
    return FramedPoint(chart, x, g, L, frame, A, S, omega, float(np.sqrt(sq)))


def frame_field(chart, points):
    """Frame a sequence of chart points with sign-aligned (smooth) frames."""
    out = []
    prev = None
    for x in points:
        fp = frame_point(chart, x, prev_frame=prev)
        out.append(fp)
        prev = fp.frame
    return out


def curvature_operator(fp):
    """Riemann tensor R[i,j,k,l] = <R(d_i, d_j) d_k, d_l> via the Gauss equation."""
    A = fp.A
    return np.einsum("ail,ajk->ijkl", A, A) - np.einsum("aik,ajl->ijkl", A, A)


def sectional_curvature(fp, R=None, i=0, j=1):
    if R is None:
        R = curvature_operator(fp)
    g = fp.g
    denom = g[i, i] * g[j, j] - g[i, j] ** 2
    return float(R[i, j, j, i] / denom)


def gauss_curvature(fp, R=None):
    """Gauss curvature of a surface point (n = 2)."""
    if fp.n != 2:
        raise DimensionError("gauss_curvature needs a 2-dimensional base")
    return sectional_curvature(fp, R=R)


def orthonormal_curvature(fp, R=None):
    """Curvature components in a g-orthonormal tangent basis."""
    if R is None:
        R = curvature_operator(fp)
    E = solve_triangular(fp.chol, np.eye(fp.n), lower=True).T  # columns e_a
    return np.einsum("ijkl,ia,jb,kc,ld->abcd", R, E, E, E, E)


def normal_curvature(framed_grid, spacings):
    """Pointwise norm of the normal curvature tensor on a 2-D grid of frames.

    `framed_grid` is a (p, q) nested sequence of FramedPoint with frames
    already sign-aligned; `spacings` the grid steps per chart axis.  Exactly
    zero (to discretization tolerance) when the normal bundle is flat, in
    particular whenever k = 1.  Central differences: interior nodes only.
    """
    rows = len(framed_grid)
    cols = len(framed_grid[0])
    if rows < 3 or cols < 3:
        raise GridTooCoarse("normal_curvature needs at least a 3x3 grid")
    sample = framed_grid[0][0]
    n, k = sample.n, sample.k
    if n != 2:
        raise DimensionError("normal_curvature grid evaluation supports n = 2 charts")
    out = np.full((rows, cols), np.nan)
    for p in range(1, rows - 1):
        for q in range(1, cols - 1):
            fp = framed_grid[p][q]
            w = fp.omega
            # R^perp(d_0, d_1) eta_a = D_1 D_0 eta_a - D_0 D_1 eta_a:
            # components d_1 w_0 - d_0 w_1 + [w_0, w_1]
            d1_w0 = (framed_grid[p][q + 1].omega[0] - framed_grid[p][q - 1].omega[0]) / (2 * spacings[1])
            d0_w1 = (framed_grid[p + 1][q].omega[1] - framed_grid[p - 1][q].omega[1]) / (2 * spacings[0])
            R01 = d1_w0 - d0_w1 + (w[0] @ w[1] - w[1] @ w[0])
            ginv = np.linalg.inv(fp.g)
            # norm^2 = g^{ii'} g^{jj'} R_{ij ab} R_{i'j' ab}; only (0,1) independent
            coef = 2.0 * (ginv[0, 0] * ginv[1, 1] - ginv[0, 1] * ginv[1, 0])
            out[p, q] = float(np.sqrt(max(coef * np.sum(R01 * R01), 0.0)))
    return out

"""Sampling and quadrature over truncated chart domains.

Quadrature nodes carry the full framed-point package plus the metric area
weight, so base integrals (curvature invariants, certificate masses, test
function energies) are one weighted sum away.  For rotationally symmetric
charts the angular axis uses a uniform periodic rule (exact for the
symmetric integrands) and the meridian axis composite Gauss panels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .manifold import frame_field, frame_point
from .quadrature import gauss_panels

__all__ = ["BaseQuadrature", "base_quadrature", "grid_points", "sup_A_norm", "exterior_sup_A_norm"]


@dataclass
class BaseQuadrature:
    """Framed quadrature nodes over a truncated chart."""

    chart: object
    points: np.ndarray  # (q, n) chart coordinates
    weights: np.ndarray  # (q,) includes sqrt(det g)
    frames: list  # FramedPoint per node
    sigma: np.ndarray  # geodesic radius per node

    def integrate(self, values):
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))


def _axis_nodes(lo, hi, n, periodic=False, n_panels=None):
    if periodic:
        h = (hi - lo) / n
        return lo + h * (np.arange(n) + 0.5), np.full(n, h)
    n_panels = n_panels or max(4, n // 8)
    edges = np.linspace(lo, hi, n_panels + 1)
    return gauss_panels(edges, n_per_panel=max(2, n // n_panels))


def base_quadrature(chart, n_meridian=200, n_angle=8, meridian_panels=None):
    """Weighted framed nodes over the chart box.

    For charts with a symmetry axis the angular direction gets `n_angle`
    uniform nodes (trapezoid; exact for the rotationally invariant
    integrands used downstream) and the meridian `n_meridian` Gauss nodes.
    Generic charts get an (n_meridian x n_angle) Gauss tensor grid.
    """
    lo, hi = chart.chart_domain.lo, chart.chart_domain.hi
    if chart.dim_base != 2:
        raise NotImplementedError("base quadrature is implemented for 2-dimensional bases")
    ax_angle = chart.symmetry_axis
    if ax_angle is None:
        x0, w0 = _axis_nodes(lo[0], hi[0], n_meridian)
        x1, w1 = _axis_nodes(lo[1], hi[1], max(n_angle, 32))
    else:
        ax_mer = 1 - ax_angle
        xm, wm = _axis_nodes(lo[ax_mer], hi[ax_mer], n_meridian, n_panels=meridian_panels)
        xa, wa = _axis_nodes(lo[ax_angle], hi[ax_angle], n_angle, periodic=True)
        if ax_mer == 0:
            x0, w0, x1, w1 = xm, wm, xa, wa
        else:
            x0, w0, x1, w1 = xa, wa, xm, wm
    pts = np.array([[a, b] for a in x0 for b in x1])
    ww = np.array([wa_ * wb_ for wa_ in w0 for wb_ in w1])

    frames = []
    prev = None
    for x in pts:
        fp = frame_point(chart, x, prev_frame=prev)
        frames.append(fp)
        prev = fp.frame
    weights = ww * np.array([fp.sqrt_det_g() for fp in frames])
    if chart.radial is not None:
        sigma = np.array([chart.radial.sigma_of(x) for x in pts])
    else:
        sigma = np.linalg.norm(pts, axis=1)
    return BaseQuadrature(chart, pts, weights, frames, sigma)


def grid_points(chart, shape, margin=0.0):
    """Regular grid over the chart box; returns (grid, spacings).

    grid[i][j] is the chart coordinate; spacings are the per-axis steps.
    """
    lo = chart.chart_domain.lo + margin
    hi = chart.chart_domain.hi - margin
    axes = [np.linspace(lo[d], hi[d], shape[d]) for d in range(len(shape))]
    spacings = [ax[1] - ax[0] for ax in axes]
    grid = [[np.array([a, b]) for b in axes[1]] for a in axes[0]]
    return grid, spacings


def framed_grid(chart, shape, margin=0.0):
    """Frame a regular grid row by row with sign-aligned frames."""
    grid, spacings = grid_points(chart, shape, margin=margin)
    rows = []
    prev_row_first = None
    for row in grid:
        framed_row = []
        prev = prev_row_first
        for x in row:
            fp = frame_point(chart, x, prev_frame=prev)
            framed_row.append(fp)
            prev = fp.frame
        rows.append(framed_row)
        prev_row_first = framed_row[0].frame
    return rows, spacings


def sup_A_norm(chart, n_meridian=400, n_angle=8):
    """Sampled supremum of the second-fundamental-form norm over the chart."""
    bq = base_quadrature(chart, n_meridian=n_meridian, n_angle=n_angle)
    return float(max(fp.A_norm for fp in bq.frames))


def exterior_sup_A_norm(chart, radius, n_meridian=400, n_angle=4):
    """Sampled sup of A_norm outside the geodesic ball of the given radius."""
    bq = base_quadrature(chart, n_meridian=n_meridian, n_angle=n_angle)
    mask = bq.sigma > radius
    if not np.any(mask):
        return 0.0
    return float(max(fp.A_norm for fp, outside in zip(bq.frames, mask) if outside))

"""Tube curvature invariants.

Elementary symmetric functions of shape operators, their averages K_j over
the unit normal sphere (the classical tube curvatures), curvature-operator
traces by brute-force alternating-sum enumeration, and the proportionality
check between K_{2p} and tr(R^p).

The enumeration normalization of the p-th trace is fixed here as: index
tuples run over all 2p-tuples of distinct indices, and the prefactor is
1 / (2^p ((2p)!)^2).  Downstream verification is proportionality-based, so
only ratios of these traces matter.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial, gamma, pi

import numpy as np

from .errors import DegenerateSample, DimensionError, QuadratureNotConverged
from .manifold import curvature_operator, orthonormal_curvature
from .quadrature import sphere_rule

__all__ = [
    "elementary_symmetric",
    "elementary_symmetric_all",
    "tube_curvature_K",
    "tube_curvature_table",
    "trace_power",
    "gray_prefactor",
    "gray_ratio",
    "InvariantTable",
]


def elementary_symmetric(H_eta, j):
    """j-th elementary symmetric function of the eigenvalues of H_eta."""
    H_eta = np.asarray(H_eta, dtype=float)
    n = H_eta.shape[0]
    if not 0 <= j <= n:
        raise IndexError(f"order {j} out of range 0..{n}")
    return elementary_symmetric_all(H_eta)[j]


def elementary_symmetric_all(H_eta):
    """All elementary symmetric functions e_0..e_n of the eigenvalues.

    Shape operators are g-self-adjoint, so eigenvalues are real; tiny
    imaginary parts from the nonsymmetric mixed representation are dropped.
    """
    vals = np.linalg.eigvals(np.asarray(H_eta, dtype=float))
    vals = np.real(vals)
    n = len(vals)
    e = np.zeros(n + 1)
    e[0] = 1.0
    for v in vals:  # Newton-free recurrence: multiply out prod(1 + v_i x)
        e[1 : n + 1] = e[1 : n + 1] + v * e[0:n]
    return e


def _K_at_level(fp, j, level):
    dirs, w = sphere_rule(fp.k, level)
    total = 0.0
    for y, wy in zip(dirs, w):
        total += wy * elementary_symmetric(fp.shape_operator(y), j)
    return total


def tube_curvature_K(fp, j, quad_level=3, rtol=1e-6):
    """K_j: integral of C_j(S_eta) over the unit normal sphere at fp.

    Refined once to check convergence; the integrand is a degree-j
    polynomial in eta, so the rules here are effectively exact.
    """
    if not 0 <= j <= fp.n:
        raise IndexError(f"order {j} out of range 0..{fp.n}")
    coarse = _K_at_level(fp, j, quad_level)
    fine = _K_at_level(fp, j, quad_level + 1)
    scale = max(abs(fine), 1.0)
    if abs(fine - coarse) > rtol * scale:
        raise QuadratureNotConverged(
            f"K_{j} quadrature moved by {abs(fine - coarse):.3e} under refinement"
        )
    return fine


def tube_curvature_table(fp, quad_level=3):
    """K_j for j = 0..n at one framed point."""
    return np.array([tube_curvature_K(fp, j, quad_level) for j in range(fp.n + 1)])


def trace_power(R, p, orthonormal=True):
    """p-th trace of the curvature operator by direct enumeration.

    R must be given in an orthonormal tangent basis (use
    manifold.orthonormal_curvature for coordinate data).  Evaluates the
    double alternating sum over permutation pairs for every 2p-tuple of
    distinct indices, divided by 2^p ((2p)!)^2.
    """
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    if 2 * p > n:
        raise DimensionError(f"trace power p={p} needs dimension >= {2 * p}, got {n}")
    if not orthonormal:
        raise ValueError("pass orthonormal-frame components (orthonormal=True)")
    perms = list(permutations(range(2 * p)))
    signs = np.array([_perm_sign(s) for s in perms])
    total = 0.0
    for idx in permutations(range(n), 2 * p):
        idx = np.asarray(idx)
        for a, sa in zip(perms, signs):
            ia = idx[list(a)]
            for b, sb in zip(perms, signs):
                ib = idx[list(b)]
                term = 1.0
                for mmm in range(p):
                    term *= R[ia[2 * mmm], ia[2 * mmm + 1], ib[2 * mmm], ib[2 * mmm + 1]]
                total += sa * sb * term
    return total / (2 ** p * factorial(2 * p) ** 2)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def gray_prefactor(p, k):
    """Dimensional constant (2p)! pi^{k/2} / (2^{2p-1} p! Gamma(p + k/2)).

    Only its k-dependence at fixed p is normalization-free, and that is what
    the cross-codimension tests pin down.
    """
    return factorial(2 * p) * pi ** (k / 2.0) / (2 ** (2 * p - 1) * factorial(p) * gamma(p + k / 2.0))


def gray_ratio(fp_samples, p, quad_level=3, floor=1e-9):
    """Mean and coefficient of variation of K_{2p} / tr(R^p) across samples.

    A tiny dispersion certifies that the sphere-averaged extrinsic
    invariant is pointwise proportional to the intrinsic trace, which is
    the content of the tube-invariant identity independent of enumeration
    normalization.
    """
    ratios = []
    for fp in fp_samples:
        R_on = orthonormal_curvature(fp, curvature_operator(fp))
        tr = trace_power(R_on, p)
        if abs(tr) < floor:
            continue
        ratios.append(tube_curvature_K(fp, 2 * p, quad_level) / tr)
    if not ratios:
        raise DegenerateSample(f"all tr(R^{p}) samples below {floor}")
    ratios = np.asarray(ratios)
    mean = float(np.mean(ratios))
    cv = float(np.std(ratios) / abs(mean)) if mean != 0 else float("inf")
    return mean, cv


@dataclass
class InvariantTable:
    """Per-point tube curvatures plus manifold-level integrals."""

    points: np.ndarray  # (q, n) chart coordinates
    K: np.ndarray  # (q, n+1) K_j per point
    trRp: np.ndarray  # (q, n//2) traces per point
    integrals: dict  # {2p: integral of K_2p over the truncation}

    @classmethod
    def build(cls, bq, quad_level=3):
        """Tabulate invariants over a BaseQuadrature and integrate K_{2p}."""
        n = bq.frames[0].n
        K = np.array([tube_curvature_table(fp, quad_level) for fp in bq.frames])
        tr = np.empty((len(bq.frames), n // 2))
        for i, fp in enumerate(bq.frames):
            R_on = orthonormal_curvature(fp, curvature_operator(fp))
            for p in range(1, n // 2 + 1):
                tr[i, p - 1] = trace_power(R_on, p)
        integrals = {}
        for p in range(1, n // 2 + 1):
            integrals[2 * p] = bq.integrate(K[:, 2 * p])
        return cls(np.asarray(bq.points), K, tr, integrals)

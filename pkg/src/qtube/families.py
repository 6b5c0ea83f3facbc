"""Built-in chart families.

Covers totally geodesic, positive, negative, and zero total-curvature
regimes plus arbitrary codimension: flat planes, cylinders, catenoids,
surfaces of revolution built from a meridian-slope profile, polynomial
graph immersions, and suspensions (optionally frame-twisted) that re-embed
a codimension-1 surface with codimension 2.

All families provide analytic jacobians/hessians; finite differences are
only a fallback for user-supplied maps.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import erf

from .errors import ConfigError
from .manifold import Box, ImmersionChart, RadialStructure

__all__ = [
    "plane",
    "cylinder",
    "catenoid",
    "sphere_cap",
    "revolution",
    "ConeProfile",
    "BalancedProfile",
    "random_graph",
    "suspend",
    "make_family",
    "FAMILIES",
]


def plane(n=2, codim=1, extent=32.0):
    """Flat R^n immersed totally geodesically in R^{n+codim}."""
    n, codim = int(n), int(codim)
    m = n + codim

    def pos(x):
        out = np.zeros(m)
        out[:n] = x
        return out

    J = np.zeros((n, m))
    J[:, :n] = np.eye(n)
    hess = np.zeros((n, n, m))
    from .quadrature import sphere_area

    area_sn = sphere_area(n)  # geodesic spheres are round: |S^{n-1}(s)| = area_sn * s^{n-1}

    radial = RadialStructure(
        sigma_of=lambda x: float(np.linalg.norm(x)),
        point_at=lambda s, a: np.array([s * np.cos(a), s * np.sin(a)] + [0.0] * (n - 2)),
        circumference=lambda s: area_sn * s ** (n - 1),
        n_ends=1,
    )
    return ImmersionChart(
        name=f"plane{n}d_codim{codim}",
        dim_base=n,
        dim_ambient=m,
        position=pos,
        jacobian=lambda x: J,
        hessian=lambda x: hess,
        chart_domain=Box(np.full(n, -extent), np.full(n, extent)),
        radial=radial,
        euler=1,
        gauss_curvature_fn=(lambda x: 0.0) if n == 2 else None,
        params={"n": n, "codim": codim, "extent": extent},
    )


def cylinder(radius=2.0, half_length=24.0):
    """Circular cylinder in R^3, chart (theta, z); violates curvature decay."""
    R = float(radius)

    def pos(x):
        th, z = x
        return np.array([R * np.cos(th), R * np.sin(th), z])

    def jac(x):
        th, _ = x
        return np.array([[-R * np.sin(th), R * np.cos(th), 0.0], [0.0, 0.0, 1.0]])

    def hess(x):
        th, _ = x
        H = np.zeros((2, 2, 3))
        H[0, 0] = [-R * np.cos(th), -R * np.sin(th), 0.0]
        return H

    def normal(x):
        th, _ = x
        return np.array([[np.cos(th), np.sin(th), 0.0]])  # outward

    radial = RadialStructure(
        sigma_of=lambda x: abs(float(x[1])),
        point_at=lambda s, a: np.array([a, s]),
        circumference=lambda s: 2.0 * np.pi * R,
        n_ends=2,
        meridian_axis=1,
        signed=True,
    )
    return ImmersionChart(
        name=f"cylinder_R{R:g}",
        dim_base=2,
        dim_ambient=3,
        position=pos,
        jacobian=jac,
        hessian=hess,
        chart_domain=Box(np.array([-np.pi, -half_length]), np.array([np.pi, half_length])),
        normal_frame=normal,
        symmetry_axis=0,
        radial=radial,
        euler=0,
        gauss_curvature_fn=lambda x: 0.0,
        params={"radius": R, "half_length": half_length},
    )


def catenoid(scale=1.0, sigma_max=130.0):
    """Catenoid of neck scale c, chart (v, theta); two asymptotically flat ends.

    Meridian arclength from the waist is sigma = c*sinh(v); principal
    curvatures are +/- 1/(c cosh^2 v).
    """
    c = float(scale)
    v_max = float(np.arcsinh(sigma_max / c))

    def pos(x):
        v, th = x
        return c * np.array([np.cosh(v) * np.cos(th), np.cosh(v) * np.sin(th), v])

    def jac(x):
        v, th = x
        sh, ch = np.sinh(v), np.cosh(v)
        return c * np.array(
            [[sh * np.cos(th), sh * np.sin(th), 1.0], [-ch * np.sin(th), ch * np.cos(th), 0.0]]
        )

    def hess(x):
        v, th = x
        sh, ch = np.sinh(v), np.cosh(v)
        H = np.empty((2, 2, 3))
        H[0, 0] = c * np.array([ch * np.cos(th), ch * np.sin(th), 0.0])
        H[0, 1] = H[1, 0] = c * np.array([-sh * np.sin(th), sh * np.cos(th), 0.0])
        H[1, 1] = c * np.array([-ch * np.cos(th), -ch * np.sin(th), 0.0])
        return H

    def normal(x):
        v, th = x
        ch = np.cosh(v)
        return np.array([[-np.cos(th) / ch, -np.sin(th) / ch, np.tanh(v)]])

    radial = RadialStructure(
        sigma_of=lambda x: c * np.sinh(abs(float(x[0]))),
        point_at=lambda s, a: np.array([np.arcsinh(s / c), a]),
        circumference=lambda s: 2.0 * np.pi * np.sqrt(c * c + s * s),
        n_ends=2,
        meridian_axis=0,
        signed=True,
    )
    return ImmersionChart(
        name=f"catenoid_c{c:g}",
        dim_base=2,
        dim_ambient=3,
        position=pos,
        jacobian=jac,
        hessian=hess,
        chart_domain=Box(np.array([-v_max, -np.pi]), np.array([v_max, np.pi])),
        normal_frame=normal,
        symmetry_axis=1,
        radial=radial,
        euler=0,
        gauss_curvature_fn=lambda x: -1.0 / (c * np.cosh(x[0]) ** 2) ** 2,
        params={"scale": c, "sigma_max": sigma_max},
    )


def sphere_cap(radius=1.0, pad=0.4):
    """Polar chart on a round 2-sphere (poles excluded); curvature tests only."""
    R = float(radius)

    def pos(x):
        ph, th = x
        return R * np.array([np.sin(ph) * np.cos(th), np.sin(ph) * np.sin(th), np.cos(ph)])

    def jac(x):
        ph, th = x
        return R * np.array(
            [
                [np.cos(ph) * np.cos(th), np.cos(ph) * np.sin(th), -np.sin(ph)],
                [-np.sin(ph) * np.sin(th), np.sin(ph) * np.cos(th), 0.0],
            ]
        )

    def hess(x):
        ph, th = x
        H = np.empty((2, 2, 3))
        H[0, 0] = R * np.array([-np.sin(ph) * np.cos(th), -np.sin(ph) * np.sin(th), -np.cos(ph)])
        H[0, 1] = H[1, 0] = R * np.array([-np.cos(ph) * np.sin(th), np.cos(ph) * np.cos(th), 0.0])
        H[1, 1] = R * np.array([-np.sin(ph) * np.cos(th), -np.sin(ph) * np.sin(th), 0.0])
        return H

    return ImmersionChart(
        name=f"sphere_R{R:g}",
        dim_base=2,
        dim_ambient=3,
        position=pos,
        jacobian=jac,
        hessian=hess,
        chart_domain=Box(np.array([pad, -np.pi]), np.array([np.pi - pad, np.pi])),
        symmetry_axis=1,
        euler=2,
        gauss_curvature_fn=lambda x: 1.0 / R ** 2,
        params={"radius": R},
    )


# ----------------------------------------------------------------------------
# surfaces of revolution from a meridian-slope profile
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeProfile:
    """Slope eases from 1 at the pole to `slope` < 1: a cone-asymptotic flare.

    Total curvature is 2*pi*(1 - slope) > 0 and the single end opens with
    area ratio `slope` relative to a flat plane.
    """

    slope: float = 0.6
    width: float = 1.5
    name: str = "cone_flare"

    def phi(self, s):
        t = s / self.width
        return self.slope + (1.0 - self.slope) * np.exp(-t * t)

    def one_minus_phi(self, s):
        t = s / self.width
        return (1.0 - self.slope) * (-np.expm1(-t * t))

    def dphi(self, s):
        t = s / self.width
        return (1.0 - self.slope) * (-2.0 * t / self.width) * np.exp(-t * t)

    def d2phi(self, s):
        t = s / self.width
        return (1.0 - self.slope) * (4.0 * t * t - 2.0) / self.width ** 2 * np.exp(-t * t)

    def ell(self, s):
        t = s / self.width
        return self.slope * s + (1.0 - self.slope) * self.width * 0.5 * np.sqrt(np.pi) * erf(t)


@dataclass(frozen=True)
class BalancedProfile:
    """Slope dips from 1 and recovers to 1: zero total curvature.

    Positive curvature near the pole exactly balances the negative flare,
    so the certificate integral sits at the equality threshold.
    """

    depth: float = 0.72
    width: float = 1.0
    name: str = "balanced_flare"

    def phi(self, s):
        t = s / self.width
        return 1.0 - self.depth * t * t * np.exp(1.0 - t * t)

    def one_minus_phi(self, s):
        t = s / self.width
        return self.depth * t * t * np.exp(1.0 - t * t)

    def dphi(self, s):
        t = s / self.width
        return -self.depth * np.e * (2.0 * t / self.width) * (1.0 - t * t) * np.exp(-t * t)

    def d2phi(self, s):
        t = s / self.width
        return -self.depth * np.e / self.width ** 2 * (2.0 - 10.0 * t * t + 4.0 * t ** 4) * np.exp(-t * t)

    def ell(self, s):
        t = s / self.width
        gauss_moment = 0.25 * np.sqrt(np.pi) * erf(t) - 0.5 * t * np.exp(-t * t)
        return s - self.depth * self.width * np.e * gauss_moment


def revolution(profile, sigma_max=60.0, sigma_min=1e-4):
    """Surface of revolution from a unit-speed meridian with slope profile.

    The chart coordinate sigma is meridian arclength from the pole; the
    circle radius is ell(sigma) with ell' = phi in (0, 1], and the height is
    z(sigma) with z' = sqrt(1 - phi^2).  The pole itself (a coordinate
    singularity) is excluded below `sigma_min`; Gauss curvature is
    -phi'/ell.
    """
    p = profile

    def zprime(s):
        return np.sqrt(p.one_minus_phi(s) * (1.0 + p.phi(s)))

    def z2prime(s):
        zp = zprime(s)
        return -p.phi(s) * p.dphi(s) / zp

    # height by cumulative quadrature, cached on demand
    _zcache = {}

    def zval(s):
        key = round(float(s), 12)
        if key not in _zcache:
            _zcache[key] = quad(zprime, 0.0, float(s), limit=200)[0]
        return _zcache[key]

    def pos(x):
        s, th = x
        l = p.ell(s)
        return np.array([l * np.cos(th), l * np.sin(th), zval(s)])

    def jac(x):
        s, th = x
        l, ph, zp = p.ell(s), p.phi(s), zprime(s)
        return np.array([[ph * np.cos(th), ph * np.sin(th), zp], [-l * np.sin(th), l * np.cos(th), 0.0]])

    def hess(x):
        s, th = x
        l, ph = p.ell(s), p.phi(s)
        H = np.empty((2, 2, 3))
        H[0, 0] = [p.dphi(s) * np.cos(th), p.dphi(s) * np.sin(th), z2prime(s)]
        H[0, 1] = H[1, 0] = [-ph * np.sin(th), ph * np.cos(th), 0.0]
        H[1, 1] = [-l * np.cos(th), -l * np.sin(th), 0.0]
        return H

    def normal(x):
        s, th = x
        zp, ph = zprime(s), p.phi(s)
        return np.array([[-zp * np.cos(th), -zp * np.sin(th), ph]])

    radial = RadialStructure(
        sigma_of=lambda x: float(x[0]),
        point_at=lambda s, a: np.array([s, a]),
        circumference=lambda s: 2.0 * np.pi * p.ell(s),
        n_ends=1,
        meridian_axis=0,
        signed=False,
        pole_radius=sigma_min,
    )
    return ImmersionChart(
        name=p.name,
        dim_base=2,
        dim_ambient=3,
        position=pos,
        jacobian=jac,
        hessian=hess,
        chart_domain=Box(np.array([sigma_min, -np.pi]), np.array([sigma_max, np.pi])),
        normal_frame=normal,
        symmetry_axis=1,
        radial=radial,
        euler=1,
        gauss_curvature_fn=lambda x: -p.dphi(x[0]) / p.ell(x[0]),
        params={"profile": p.name, "sigma_max": sigma_max, "sigma_min": sigma_min},
    )


# ----------------------------------------------------------------------------
# polynomial graph immersions (arbitrary codimension)
# ----------------------------------------------------------------------------

def random_graph(n=2, codim=2, amplitude=0.15, seed=7, extent=1.0):
    """Graph immersion x -> (x, h(x)) with seeded random cubic h: R^n -> R^codim.

    Generic second fundamental form and (for codim >= 2) a genuinely curved
    normal connection; intended for identity and property tests on random
    admissible points.
    """
    rng = np.random.default_rng(seed)
    k, m = int(codim), int(n) + int(codim)
    lin = rng.standard_normal((k, n))
    qu = rng.standard_normal((k, n, n))
    qu = 0.5 * (qu + np.swapaxes(qu, 1, 2))
    cu = rng.standard_normal((k, n, n, n))
    cu = (cu + np.transpose(cu, (0, 2, 1, 3)) + np.transpose(cu, (0, 3, 2, 1))
          + np.transpose(cu, (0, 1, 3, 2)) + np.transpose(cu, (0, 2, 3, 1))
          + np.transpose(cu, (0, 3, 1, 2))) / 6.0
    a = float(amplitude)

    def hval(x):
        return a * (lin @ x + np.einsum("aij,i,j->a", qu, x, x) + np.einsum("aijl,i,j,l->a", cu, x, x, x))

    def hjac(x):
        return a * (lin + 2.0 * np.einsum("aij,j->ai", qu, x) + 3.0 * np.einsum("aijl,j,l->ai", cu, x, x))

    def hhess(x):
        return a * (2.0 * qu + 6.0 * np.einsum("aijl,l->aij", cu, x))

    def pos(x):
        out = np.empty(m)
        out[:n] = x
        out[n:] = hval(x)
        return out

    def jac(x):
        J = np.zeros((n, m))
        J[:, :n] = np.eye(n)
        J[:, n:] = hjac(x).T
        return J

    def hess(x):
        H = np.zeros((n, n, m))
        H[:, :, n:] = np.transpose(hhess(x), (1, 2, 0))
        return H

    return ImmersionChart(
        name=f"graph{n}to{m}_seed{seed}",
        dim_base=n,
        dim_ambient=m,
        position=pos,
        jacobian=jac,
        hessian=hess,
        chart_domain=Box(np.full(n, -extent), np.full(n, extent)),
        params={"n": n, "codim": codim, "amplitude": amplitude, "seed": seed},
    )


# ----------------------------------------------------------------------------
# suspensions: re-embed a codim-1 surface with codim 2
# ----------------------------------------------------------------------------

def suspend(base, twist=None, dtwist=None):
    """Embed a surface chart in R^3 into R^4 with a (possibly twisted) frame.

    The position map is unchanged (padded by a zero coordinate), so all
    intrinsic and extrinsic geometry is that of the base; only the normal
    frame gains a second, flat direction.  With a twist angle field gamma
    the frame rotates inside the normal plane, producing nonzero (pure
    gauge) normal-connection coefficients d(gamma) while the normal bundle
    stays flat.
    """
    if base.dim_ambient != 3 or base.dim_base != 2 or base.normal_frame is None:
        raise ConfigError("suspend expects a surface chart in R^3 with an analytic normal")
    if (twist is None) != (dtwist is None):
        raise ConfigError("twist and dtwist must be supplied together")

    def pos(x):
        return np.append(base.position(x), 0.0)

    def jac(x):
        J = np.zeros((2, 4))
        J[:, :3] = base.jac(x)
        return J

    def hess(x):
        H = np.zeros((2, 2, 4))
        H[:, :, :3] = base.hess(x)
        return H

    def frame(x):
        eta = np.zeros(4)
        eta[:3] = base.normal_frame(x)[0]
        e4 = np.array([0.0, 0.0, 0.0, 1.0])
        if twist is None:
            return np.stack([eta, e4])
        gamma = twist(x)
        cg, sg = np.cos(gamma), np.sin(gamma)
        return np.stack([cg * eta + sg * e4, -sg * eta + cg * e4])

    def omega(x):
        w = np.zeros((2, 2, 2))
        if twist is not None:
            dg = np.asarray(dtwist(x), dtype=float)
            w[:, 0, 1] = dg
            w[:, 1, 0] = -dg
        return w

    label = "twisted" if twist is not None else "suspended"
    return ImmersionChart(
        name=f"{label}_{base.name}",
        dim_base=2,
        dim_ambient=4,
        position=pos,
        jacobian=jac,
        hessian=hess,
        chart_domain=base.chart_domain,
        normal_frame=frame,
        omega_fn=omega,
        symmetry_axis=base.symmetry_axis if twist is None else None,
        radial=base.radial,
        euler=base.euler,
        gauss_curvature_fn=base.gauss_curvature_fn,
        params={"base": base.name, "twisted": twist is not None},
    )


def _twisted_catenoid(scale=1.0, sigma_max=130.0, amp_v=0.8, amp_th=0.4):
    base = catenoid(scale=scale, sigma_max=sigma_max)

    def gamma(x):
        return amp_v * np.sin(x[0]) + amp_th * np.sin(x[1])

    def dgamma(x):
        return np.array([amp_v * np.cos(x[0]), amp_th * np.cos(x[1])])

    return suspend(base, twist=gamma, dtwist=dgamma)


FAMILIES = {
    "plane": plane,
    "cylinder": cylinder,
    "catenoid": catenoid,
    "sphere_cap": sphere_cap,
    "cone_flare": lambda **kw: revolution(
        ConeProfile(slope=kw.pop("slope", 0.6), width=kw.pop("width", 1.5)), **kw
    ),
    "balanced_flare": lambda **kw: revolution(
        BalancedProfile(depth=kw.pop("depth", 0.72), width=kw.pop("width", 1.0)), **kw
    ),
    "random_graph": random_graph,
    "catenoid_codim2": lambda **kw: suspend(catenoid(**kw)),
    "twisted_catenoid": _twisted_catenoid,
}


def make_family(name, **params):
    """Instantiate a built-in chart family by name (CLI/config entry point)."""
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise ConfigError(f"unknown chart family {name!r}; known: {sorted(FAMILIES)}") from None
    try:
        return builder(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for family {name!r}: {exc}") from None

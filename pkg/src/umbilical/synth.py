"""Curves of constant torsion on totally umbilical surfaces, plus oracle curves.

A curve of constant torsion tau != 0 (and non-constant curvature) on an umbilical
surface of mean curvature H has curvature

    kappa(s) = |H| / sin(tau s + a).

Inside the surface its geodesic curvature is therefore k_g = +-|H| cot(tau s + a)
(because kappa^2 = H^2 + k_g^2), and every synthesizer here integrates that
prescribed geodesic curvature on a fixed grid with the classical fourth order
Runge-Kutta step.
"""

import numpy as np

from .errors import DomainError, IntegrationError, InvalidSurfaceError
from .frames import SampledCurve
from .spaceform import (
    classify_surface,
    complement,
    inner,
    project_to_hyperquadric,
    surface_normal,
    tangent_project,
)

DEFAULT_DS = 1e-3
DOMAIN_MARGIN = 1e-3
TRIM_FRACTION = 0.15


def constant_torsion_curvature(H, tau, a, s):
    """|H| / sin(tau s + a); raises outside the domain where it is positive."""
    if H == 0 or tau == 0:
        raise DomainError("H and tau must be nonzero")
    sn = np.sin(tau * np.asarray(s, dtype=float) + a)
    if np.any(sn <= 0):
        raise DomainError("sin(tau s + a) must be positive")
    return abs(H) / sn


def maximal_domain(tau, phase=0.0):
    """Interval of s where sin(tau s + phase) > 0 containing the peak."""
    lo, hi = (0.0 - phase) / tau, (np.pi - phase) / tau
    return (min(lo, hi), max(lo, hi))


def trimmed_window(tau, phase=0.0, fraction=TRIM_FRACTION):
    lo, hi = maximal_domain(tau, phase)
    length = hi - lo
    return lo + fraction * length, hi - fraction * length


def _check_range(tau, phase, s_range, margin):
    lo, hi = s_range
    if not lo < hi:
        raise DomainError(f"empty s range {s_range}")
    arg = tau * np.array([lo, hi]) + phase
    if np.min(arg) < margin or np.max(arg) > np.pi - margin:
        dlo, dhi = maximal_domain(tau, phase)
        raise DomainError(
            f"s range {s_range} must stay inside ({dlo:.6g}, {dhi:.6g}) "
            f"with margin {margin:g}/|tau|")


def grid_through(s0, s_range, ds):
    """Uniform grid with spacing ds that contains s0 and covers s_range.

    Returns (grid, index of s0).
    """
    lo, hi = s_range
    if not lo - 1e-12 <= s0 <= hi + 1e-12:
        raise DomainError(f"s0={s0} is outside {s_range}")
    k_lo = int(np.floor((s0 - lo) / ds + 1e-9))
    k_hi = int(np.floor((hi - s0) / ds + 1e-9))
    grid = s0 + ds * np.arange(-k_lo, k_hi + 1)
    return grid, k_lo


def _rk4_step(f, s, y, h):
    k1 = f(s, y)
    k2 = f(s + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(s + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(s + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _integrate_both_ways(f, grid, i0, y0, post=None):
    """RK4 from grid[i0] forward and backward; ``post`` renormalizes each state."""
    out = np.empty((len(grid), len(y0)))
    out[i0] = y0
    for direction in (1, -1):
        y = np.array(y0, dtype=float)
        k = i0
        while 0 <= k + direction < len(grid):
            h = grid[k + direction] - grid[k]
            y = _rk4_step(f, grid[k], y, h)
            if post is not None:
                y = post(y)
            k += direction
            out[k] = y
    return out


# --------------------------------------------------------------------------
# horosphere x3 + x4 = 1 of H^3


def horosphere_angle(s, tau, phase=0.0, mirror=False):
    """theta(s) = (1/tau) log sin(tau s + phase), the + branch of theta' = cot."""
    theta = np.log(np.sin(tau * np.asarray(s, dtype=float) + phase)) / tau
    return -theta if mirror else theta


def synthesize_horosphere(tau, s0=None, x1_0=0.0, x2_0=0.0, s_range=None,
                          ds=DEFAULT_DS, phase=0.0, mirror=False,
                          margin=DOMAIN_MARGIN):
    """Constant torsion curve on the horosphere U((0,0,1,-1), 1) of H^3.

    Integrates x1' = cos(theta), x2' = sin(theta) and lifts with
    x3 = -(x1^2 + x2^2)/2, x4 = 1 + (x1^2 + x2^2)/2.  The defaults are the
    peak s0 = (pi/2 - phase)/tau and the trimmed window.
    """
    if tau == 0:
        raise DomainError("tau must be nonzero")
    if s0 is None:
        s0 = (0.5 * np.pi - phase) / tau
    if s_range is None:
        s_range = trimmed_window(tau, phase)
    _check_range(tau, phase, s_range, margin)
    grid, i0 = grid_through(s0, s_range, ds)

    def f(s, _y):
        th = horosphere_angle(s, tau, phase, mirror)
        return np.array([np.cos(th), np.sin(th)])

    xy = _integrate_both_ways(f, grid, i0, np.array([x1_0, x2_0], dtype=float))
    r2 = (xy ** 2).sum(axis=1)
    pts = np.column_stack([xy[:, 0], xy[:, 1], -0.5 * r2, 1.0 + 0.5 * r2])
    return SampledCurve(-1, grid, pts, ds)


def horosphere_surface():
    return classify_surface([0.0, 0.0, 1.0, -1.0], 1.0, -1)


# --------------------------------------------------------------------------
# geodesic sphere x4 = sigma of S^3 in spherical coordinates


def ks2_lhs(phi, theta, dphi, dtheta, ddphi, ddtheta):
    """Left side of the printed curvature equation in (phi, theta).

    It equals |u'' + u|^2 for u = (cos phi cos theta, cos phi sin theta, sin phi);
    ``theta`` is accepted for symmetry but does not enter.
    """
    c, s2, c2 = np.cos(phi), np.sin(2 * phi), np.cos(2 * phi)
    return (c ** 2 * ddtheta ** 2 + ddphi ** 2
            - 2 * dtheta * ddtheta * dphi * s2 + dtheta ** 2 * s2 * ddphi
            - dtheta ** 2 * (dphi ** 2 * (c2 - 3) + c2 + 1)
            + dtheta ** 4 * c ** 2 + dphi ** 4 - 2 * dphi ** 2 + 1)


def ks2_rhs(s, tau, sigma=0.5, phase=0.0, literal=False):
    """Right side of the curvature equation for kappa = |H| / sin(tau s + phase).

    The consistent value is (kappa^2 - sigma^2) / (1 - sigma^2): the x4 = sigma
    component of alpha'' + alpha contributes sigma^2 to kappa^2.  With
    ``literal=True`` the sigma^2 term is dropped, which for sigma = 1/2 gives
    the coefficient 4 / (9 sin^2(tau s)) as printed; curves integrated from that
    form do not have constant torsion.
    """
    H = sigma / np.sqrt(1.0 - sigma ** 2)
    k2 = constant_torsion_curvature(H, tau, phase, s) ** 2
    if literal:
        return k2 / (1.0 - sigma ** 2)
    return (k2 - sigma ** 2) / (1.0 - sigma ** 2)


def sphere_speed_constant(sigma):
    """phi'^2 + cos^2(phi) theta'^2 for unit speed on the sphere of radius sqrt(1 - sigma^2)."""
    return 1.0 / (1.0 - sigma ** 2)


def sphere_accelerations(phi, dphi, dtheta, kg, radius):
    """(phi'', theta'') with unit speed kept and geodesic curvature ``kg``.

    Solves the 2x2 linear system: tangential component zero (the derivative of
    the speed constraint) and normal component equal to kg.
    """
    cp, sp = np.cos(phi), np.sin(phi)
    r2 = radius ** 2
    # covariant acceleration D = (phi'' + sp cp theta'^2, theta'' - 2 tan(phi) phi' theta')
    # rows: g(D, v) = 0, g(D, n) = kg with n = (-cp theta', phi' / cp)
    a11, a12 = r2 * dphi, r2 * cp ** 2 * dtheta
    a21, a22 = -r2 * cp * dtheta, r2 * cp * dphi
    det = a11 * a22 - a12 * a21
    if abs(det) < 1e-10:
        raise IntegrationError(
            f"singular closure system (det={det:.3g}, phi={phi:.6g}): "
            "velocity or chart degenerated")
    d_phi = (-a12 * kg) / det
    d_theta = (a11 * kg) / det
    ddphi = d_phi - sp * cp * dtheta ** 2
    ddtheta = d_theta + 2.0 * (sp / cp) * dphi * dtheta
    return ddphi, ddtheta


def geodesic_curvature_profile(H, tau, phase=0.0, branch=1):
    """s -> branch |H| cot(tau s + phase), the analytic continuation of the root."""
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")

    def kg(s):
        arg = tau * s + phase
        return branch * abs(H) * np.cos(arg) / np.sin(arg)
    return kg


def synthesize_geodesic_sphere_s3(tau, s0=np.pi / 4, phi0=0.0, theta0=0.0,
                                  dphi0=1.0 / np.sqrt(3.0), dtheta0=1.0,
                                  s_range=None, ds=DEFAULT_DS, sigma=0.5,
                                  phase=0.0, branch=1, margin=DOMAIN_MARGIN,
                                  return_states=False):
    """Constant torsion curve on the sphere x4 = sigma of S^3.

    alpha = (R cos(phi) cos(theta), R cos(phi) sin(theta), R sin(phi), sigma) with
    R = sqrt(1 - sigma^2).  The state (phi, theta, phi', theta') is advanced by
    RK4 and (phi', theta') is rescaled after each step to keep
    phi'^2 + cos^2(phi) theta'^2 = 1/R^2.  ``branch`` picks the sign of the
    geodesic curvature; +1 yields torsion +tau under the frames orientation
    convention, -1 the mirror curve with torsion -tau.
    """
    if tau == 0:
        raise DomainError("tau must be nonzero")
    if not 0 < abs(sigma) < 1:
        raise InvalidSurfaceError("sigma must satisfy 0 < |sigma| < 1")
    radius = np.sqrt(1.0 - sigma ** 2)
    H = sigma / radius
    speed2 = sphere_speed_constant(sigma)
    ic = dphi0 ** 2 + np.cos(phi0) ** 2 * dtheta0 ** 2
    if abs(ic - speed2) > 1e-10:
        raise DomainError(
            f"initial conditions violate the speed constraint: "
            f"phi'^2 + cos^2(phi) theta'^2 = {ic:.12g}, expected {speed2:.12g}")
    if s_range is None:
        s_range = trimmed_window(tau, phase)
    _check_range(tau, phase, s_range, margin)
    grid, i0 = grid_through(s0, s_range, ds)
    # the (phi, theta) chart normal is opposite to the frames orientation when sigma > 0
    kg = geodesic_curvature_profile(H, tau, phase, -branch * int(np.sign(sigma)))

    def f(s, y):
        phi, _theta, dphi, dtheta = y
        ddphi, ddtheta = sphere_accelerations(phi, dphi, dtheta, kg(s), radius)
        return np.array([dphi, dtheta, ddphi, ddtheta])

    def renormalize(y):
        q = y[2] ** 2 + np.cos(y[0]) ** 2 * y[3] ** 2
        y[2:] *= np.sqrt(speed2 / q)
        return y

    states = _integrate_both_ways(
        f, grid, i0, np.array([phi0, theta0, dphi0, dtheta0], dtype=float),
        post=renormalize)
    phi, theta = states[:, 0], states[:, 1]
    pts = np.column_stack([radius * np.cos(phi) * np.cos(theta),
                           radius * np.cos(phi) * np.sin(theta),
                           radius * np.sin(phi),
                           np.full(len(grid), sigma)])
    curve = SampledCurve(1, grid, pts, ds)
    if return_states:
        return curve, states
    return curve


def speed_constraint_drift(states, sigma=0.5):
    phi, dphi, dtheta = states[:, 0], states[:, 2], states[:, 3]
    return float(np.max(np.abs(dphi ** 2 + np.cos(phi) ** 2 * dtheta ** 2
                               - sphere_speed_constant(sigma))))


# --------------------------------------------------------------------------
# arbitrary umbilical surface of H^3 or S^3


def point_on_surface(surface, start=(0.31, 0.17, 0.11), max_iter=100):
    """Some point of U(a, sigma) on the hyperquadric (upper sheet for c = -1)."""
    a, sigma, c = surface.a, surface.sigma, surface.c
    dim = len(a)
    if c == 1:
        e = np.zeros(dim)
        for axis in np.argsort(np.abs(a)):
            e = np.eye(dim)[axis] - a[axis] * a
            if np.linalg.norm(e) > 0.5:
                break
        e /= np.linalg.norm(e)
        return sigma * a + np.sqrt(1.0 - sigma ** 2) * e
    # hyperboloid graph x -> (x, sqrt(1 + |x|^2)), min-norm Newton on <p, a> = sigma
    x = np.zeros(dim - 1)
    x[:min(3, dim - 1)] = start[:min(3, dim - 1)]
    for _ in range(max_iter):
        w = np.sqrt(1.0 + x @ x)
        f = x @ a[:-1] - w * a[-1] - sigma
        if abs(f) < 1e-14 * max(1.0, abs(sigma)):
            break
        g = a[:-1] - a[-1] * x / w
        gg = g @ g
        if gg == 0:
            raise IntegrationError("could not locate a point on the surface")
        x = x - f * g / gg
    else:
        raise IntegrationError("could not locate a point on the surface")
    return np.append(x, np.sqrt(1.0 + x @ x))


def tangent_on_surface(surface, p):
    """A unit tangent of the surface at p."""
    c = surface.c
    xi = surface_normal(surface, p)
    for e in np.eye(len(p)):
        v = tangent_project(e, p, c)
        v = v - inner(v, xi, c) * xi
        q = inner(v, v, c)
        if q > 1e-6:
            return v / np.sqrt(q)
    raise IntegrationError("no tangent direction found")


def integrate_on_surface(surface, geodesic_curvature, grid, i0, p0=None, t0=None,
                         orientation=1):
    """Unit-speed curve on ``surface`` with prescribed geodesic curvature.

    Integrates alpha' = T, T' = k_g(s) J + H xi - c alpha, where xi is the unit
    normal of the surface and J = orientation * (unit vector orthogonal to
    alpha, xi, T).  ``grid[i0]`` is where (p0, t0) is imposed.
    """
    c = surface.c
    if surface.n != 2:
        raise InvalidSurfaceError("surface synthesis is implemented for 3-dimensional space forms")
    if p0 is None:
        p0 = point_on_surface(surface)
    p0 = np.asarray(p0, dtype=float)
    if t0 is None:
        t0 = tangent_on_surface(surface, p0)
    t0 = np.asarray(t0, dtype=float)
    surface_normal(surface, p0)  # raises if p0 is off the surface
    if abs(inner(t0, surface.a, c)) > 1e-9 or abs(inner(t0, p0, c)) > 1e-9:
        raise DomainError("t0 must be tangent to the surface at p0")
    H = surface.H
    dim = len(p0)

    def xi_of(p):
        if c == -1:
            return -surface.lam * (surface.a + surface.sigma * p)
        return (surface.a - surface.sigma * p) / np.sqrt(1.0 - surface.sigma ** 2)

    def f(s, y):
        p, t = y[:dim], y[dim:]
        xi = xi_of(p)
        j = orientation * complement(np.stack([p, xi, t]), c)
        return np.concatenate([t, geodesic_curvature(s) * j + H * xi - c * p])

    def renormalize(y):
        p = project_to_hyperquadric(y[:dim], c)
        t = tangent_project(y[dim:], p, c)
        t = t / np.sqrt(inner(t, t, c))
        return np.concatenate([p, t])

    states = _integrate_both_ways(f, grid, i0, np.concatenate([p0, t0]),
                                  post=renormalize)
    return states[:, :dim]


def synthesize_on_surface(surface, tau, s_range=None, ds=DEFAULT_DS, s0=None,
                          phase=0.0, branch=1, p0=None, t0=None,
                          margin=DOMAIN_MARGIN):
    """Constant torsion curve on any non-geodesic umbilical surface of H^3 or S^3.

    ``branch=+1`` gives recomputed torsion +tau, ``-1`` the mirror curve.
    """
    if tau == 0:
        raise DomainError("tau must be nonzero")
    if surface.kind.totally_geodesic:
        raise InvalidSurfaceError(
            "no canonical constant torsion curve on a totally geodesic surface")
    if s0 is None:
        s0 = (0.5 * np.pi - phase) / tau
    if s_range is None:
        s_range = trimmed_window(tau, phase)
    _check_range(tau, phase, s_range, margin)
    grid, i0 = grid_through(s0, s_range, ds)
    kg = geodesic_curvature_profile(surface.H, tau, phase,
                                    branch * int(np.sign(surface.H)))
    pts = integrate_on_surface(surface, kg, grid, i0, p0, t0)
    return SampledCurve(surface.c, grid, pts, ds)


# --------------------------------------------------------------------------
# oracle curves


def oracle_circle_s3(r, ds=DEFAULT_DS, length=None, rotation=None):
    """alpha(s) = (r cos(s/r), r sin(s/r), 0, sqrt(1 - r^2)), optionally rotated.

    kappa = sqrt(1 - r^2)/r and tau = 0; the curve lies on U((0,0,0,1), sqrt(1 - r^2)).
    """
    if not 0 < r <= 1:
        raise DomainError(f"radius must be in (0, 1], got {r}")
    if length is None:
        length = 2 * np.pi * r
    s = np.arange(int(np.floor(length / ds + 1e-9)) + 1) * ds
    pts = np.column_stack([r * np.cos(s / r), r * np.sin(s / r), np.zeros_like(s),
                           np.full_like(s, np.sqrt(1.0 - r * r))])
    if rotation is not None:
        pts = pts @ np.asarray(rotation).T
    return SampledCurve(1, s, pts, ds)


def oracle_equidistant_h3(sigma, geodesic_curvature=0.5, epsilon=1, length=2.0,
                          ds=DEFAULT_DS):
    """Constant geodesic curvature curve on U(a, sigma) in H^3.

    ``epsilon`` selects the canonical normal: (1,0,0,0) for +1, (0,0,-1,1) for 0
    and (0,0,0,-1) for -1 (so sigma > 1 gives a sphere around (0,0,0,1)).  The
    curve has constant kappa = sqrt(H^2 + k_g^2) and zero torsion.
    """
    normals = {1: [1.0, 0, 0, 0], 0: [0, 0, -1.0, 1.0], -1: [0, 0, 0, -1.0]}
    if epsilon not in normals:
        raise InvalidSurfaceError(f"epsilon must be -1, 0 or 1, got {epsilon}")
    surface = classify_surface(normals[epsilon], sigma, -1)
    count = int(np.floor(length / ds + 1e-9)) + 1
    grid = np.arange(count) * ds
    pts = integrate_on_surface(surface, lambda s: geodesic_curvature, grid, 0)
    return SampledCurve(-1, grid, pts, ds), surface


def oracle_helix(radius, pitch, ds=DEFAULT_DS, length=4.0):
    """Circular helix in R^3; kappa = r / w^2, tau = h / w^2 with w^2 = r^2 + h^2."""
    w = np.hypot(radius, pitch)
    s = np.arange(int(np.floor(length / ds + 1e-9)) + 1) * ds
    pts = np.column_stack([radius * np.cos(s / w), radius * np.sin(s / w), pitch * s / w])
    return SampledCurve(0, s, pts, ds)


def oracle_torus_knot_sphere(sigma=0.5, r1=0.6, p=2.0, q=3.0, dim=5,
                             ds=DEFAULT_DS, length=6.0):
    """Unit-speed curve on the geodesic hypersphere x_last = sigma of S^{dim-1}.

    The spherical part is the torus knot R (r1 e^{i p t}, r2 e^{i q t}) with
    R = sqrt(1 - sigma^2), r2 = sqrt(1 - r1^2); any remaining coordinates are 0.
    """
    if dim < 5:
        raise InvalidSurfaceError("the torus knot needs at least 5 ambient coordinates")
    R = np.sqrt(1.0 - sigma ** 2)
    r2 = np.sqrt(1.0 - r1 ** 2)
    speed = R * np.hypot(r1 * p, r2 * q)
    s = np.arange(int(np.floor(length / ds + 1e-9)) + 1) * ds
    t = s / speed
    pts = np.zeros((len(s), dim))
    pts[:, 0] = R * r1 * np.cos(p * t)
    pts[:, 1] = R * r1 * np.sin(p * t)
    pts[:, 2] = R * r2 * np.cos(q * t)
    pts[:, 3] = R * r2 * np.sin(q * t)
    pts[:, -1] = sigma
    return SampledCurve(1, s, pts, ds)

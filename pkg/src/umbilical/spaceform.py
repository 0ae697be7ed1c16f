"""Hyperquadric models of the space forms and their totally umbilical hypersurfaces.

Points of H^{n+1} (c = -1) and S^{n+1} (c = +1) are stored as ambient vectors of
R^{n+2} with the bilinear form

    <u, v> = u_1 v_1 + ... + u_{n+1} v_{n+1} + c u_{n+2} v_{n+2}

and the model is the hyperquadric <p, p> = c (upper sheet x_{n+2} > 0 when
c = -1).  A totally umbilical hypersurface is a section
U(a, sigma) = {p : <p, a> = sigma}.

All functions broadcast over leading axes; the coordinate axis is the last one.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    InvalidSurfaceError,
    ProjectionError,
)

TOL_CONSTRAINT = 1e-9
NULL_TOL = 1e-12


def metric_weights(c, dim):
    """Diagonal of the bilinear form on R^dim: (1, ..., 1, c)."""
    w = np.ones(dim)
    w[-1] = c
    return w


def inner(u, v, c):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise DimensionError(
            f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")
    prod = u * v
    return prod[..., :-1].sum(axis=-1) + c * prod[..., -1]


def norm(u, c):
    """sqrt(|<u, u>|); the natural length of spacelike tangents."""
    return np.sqrt(np.abs(inner(u, u, c)))


def is_on_hyperquadric(p, c, tol=TOL_CONSTRAINT):
    p = np.asarray(p, dtype=float)
    ok = np.abs(inner(p, p, c) - c) <= tol
    if c == -1:
        ok = ok & (p[..., -1] > 0)
    return ok


def project_to_hyperquadric(p, c):
    """Radially rescale ``p`` onto <q, q> = c (upper sheet for c = -1)."""
    if c not in (-1, 1):
        raise ProjectionError(f"no hyperquadric for c={c}")
    p = np.asarray(p, dtype=float)
    q2 = inner(p, p, c)
    if np.any(q2 == 0) or np.any(np.sign(q2) != c):
        raise ProjectionError("<p, p> must be nonzero with the sign of c")
    q = p / np.sqrt(np.abs(q2))[..., None]
    if c == -1:
        q = np.where((q[..., -1] < 0)[..., None], -q, q)
    return q


def tangent_project(x, p, c):
    """Remove the component of ``x`` along the position vector ``p``."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    return x - (inner(x, p, c) / inner(p, p, c))[..., None] * p


def complement(vectors, c):
    """Unit vector orthogonal to ``dim - 1`` given vectors.

    ``vectors`` has shape (..., dim - 1, dim).  The result B satisfies
    <B, x> proportional to det(v_1, ..., v_{dim-1}, x) with a positive factor, so
    det(v_1, ..., v_{dim-1}, B) > 0 whenever B is spacelike.
    """
    vectors = np.asarray(vectors, dtype=float)
    dim = vectors.shape[-1]
    if vectors.shape[-2] != dim - 1:
        raise DimensionError("complement needs dim - 1 vectors")
    lead = vectors.shape[:-2]
    w = np.empty(lead + (dim,))
    eye = np.eye(dim)
    for k in range(dim):
        e = np.broadcast_to(eye[k], lead + (1, dim))
        w[..., k] = np.linalg.det(np.concatenate([vectors, e], axis=-2))
    b = w / metric_weights(c if c != 0 else 1, dim)
    return b / norm(b, c if c != 0 else 1)[..., None]


class SurfaceKind(str, Enum):
    TOTALLY_GEODESIC_PLANE = "TotallyGeodesicPlane"
    EQUIDISTANT_SURFACE = "EquidistantSurface"
    HOROSPHERE = "Horosphere"
    GEODESIC_SPHERE_H3 = "GeodesicSphereH3"
    TOTALLY_GEODESIC_SPHERE = "TotallyGeodesicSphere"
    GEODESIC_SPHERE_S3 = "GeodesicSphereS3"
    # dimension > 3: only the geodesic / non-geodesic distinction is kept
    TOTALLY_GEODESIC_HYPERSURFACE = "TotallyGeodesicHypersurface"
    UMBILICAL_HYPERSURFACE = "UmbilicalHypersurface"

    @property
    def totally_geodesic(self):
        return self in (SurfaceKind.TOTALLY_GEODESIC_PLANE,
                        SurfaceKind.TOTALLY_GEODESIC_SPHERE,
                        SurfaceKind.TOTALLY_GEODESIC_HYPERSURFACE)


@dataclass(frozen=True)
class UmbilicalSurface:
    """Normalized hyperplane section U(a, sigma) with its curvature data.

    ``lam`` is the factor making the unit normal, ``K_ext`` the extrinsic and
    ``K`` the intrinsic (Gauss) curvature.
    """

    a: np.ndarray
    sigma: float
    c: int
    epsilon: int
    kind: SurfaceKind
    H: float
    lam: float
    K_ext: float
    K: float
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def n(self):
        return len(self.a) - 2

    def to_dict(self):
        return {
            "c": self.c,
            "a": [float(x) for x in self.a],
            "sigma": float(self.sigma),
            "kind": self.kind.value,
            "H": float(self.H),
            "epsilon": self.epsilon,
            "lambda": float(self.lam),
            "K_ext": float(self.K_ext),
            "K": float(self.K),
        }

    def radius(self):
        """Geodesic radius for geodesic spheres, otherwise None."""
        if self.kind == SurfaceKind.GEODESIC_SPHERE_S3:
            return float(np.sqrt(1.0 - self.sigma ** 2))
        if self.kind == SurfaceKind.GEODESIC_SPHERE_H3:
            return float(np.arccosh(abs(self.sigma)))
        return None


def classify_surface(a, sigma, c, null_tol=NULL_TOL, sigma_tol=1e-12):
    """Normalize (a, sigma) and return the classified :class:`UmbilicalSurface`.

    Non-null ``a`` is scaled to <a, a> = +-1 with sigma rescaled by the same
    factor.  When |<a, a>| < ``null_tol`` the vector is treated as null: its
    last coordinate is adjusted so <a, a> = 0 exactly and the pair is scaled so
    that sigma = -1.
    """
    if c not in (-1, 1):
        raise InvalidSurfaceError(f"umbilical sections need c = +-1, got {c}")
    a = np.array(a, dtype=float)
    sigma = float(sigma)
    if a.ndim != 1 or len(a) < 3:
        raise DimensionError("a must be a vector of length n + 2 >= 3")
    if not np.any(a):
        raise InvalidSurfaceError("a must be nonzero")
    q = float(inner(a, a, c))

    if abs(q) < null_tol:
        epsilon = 0
        spatial = np.linalg.norm(a[:-1])
        if c == 1 or spatial == 0:
            raise InvalidSurfaceError("null normal vector is not allowed here")
        a[-1] = np.copysign(spatial, a[-1])
        if abs(sigma) <= sigma_tol:
            raise InvalidSurfaceError("horospheres need sigma != 0")
        a = a * (-1.0 / sigma)
        sigma = -1.0
    else:
        epsilon = 1 if q > 0 else -1
        scale = 1.0 / np.sqrt(abs(q))
        a = a * scale
        sigma = sigma * scale
    if abs(sigma) <= sigma_tol:
        sigma = 0.0

    high_dim = len(a) > 4
    if c == 1:
        if epsilon != 1:
            raise InvalidSurfaceError("in the sphere the normal must be spacelike")
        if abs(sigma) >= 1:
            raise InvalidSurfaceError(f"|sigma| must be < 1 in the sphere, got {sigma}")
        lam = 1.0 / np.sqrt(1.0 - sigma ** 2)
        H = sigma * lam
        K = lam ** 2
        if sigma == 0:
            kind = SurfaceKind.TOTALLY_GEODESIC_SPHERE
        else:
            kind = SurfaceKind.GEODESIC_SPHERE_S3
    else:
        if epsilon == -1 and abs(sigma) <= 1:
            raise InvalidSurfaceError(
                f"timelike normal needs |sigma| > 1, got {sigma}")
        if epsilon <= 0 and np.sign(sigma) == np.sign(a[-1]):
            # <p, a> keeps the sign of -a_last on the upper sheet
            raise InvalidSurfaceError(
                f"U(a, sigma) misses the upper sheet: sigma={sigma} needs the sign of -a_last")
        lam = 1.0 / np.sqrt(epsilon + sigma ** 2)
        H = sigma * lam
        K = -epsilon * lam ** 2
        if epsilon == 1:
            kind = (SurfaceKind.TOTALLY_GEODESIC_PLANE if sigma == 0
                    else SurfaceKind.EQUIDISTANT_SURFACE)
        elif epsilon == 0:
            kind = SurfaceKind.HOROSPHERE
        else:
            kind = SurfaceKind.GEODESIC_SPHERE_H3
    if high_dim:
        kind = (SurfaceKind.TOTALLY_GEODESIC_HYPERSURFACE if sigma == 0
                else SurfaceKind.UMBILICAL_HYPERSURFACE)
    a.setflags(write=False)
    return UmbilicalSurface(a=a, sigma=sigma, c=c, epsilon=epsilon, kind=kind,
                            H=float(H), lam=float(lam), K_ext=float(H * H),
                            K=float(K))


def membership_residual(surface, p):
    return inner(p, surface.a, surface.c) - surface.sigma


def surface_normal(surface, p, tol=1e-8):
    p = np.asarray(p, dtype=float)
    res = np.abs(membership_residual(surface, p))
    if np.any(res > tol):
        raise DomainError(f"point is not on the surface (residual {np.max(res):.3g})")
    a, sigma = surface.a, surface.sigma
    if surface.c == -1:
        return -surface.lam * (a + sigma * p)
    return (a - sigma * p) / np.sqrt(1.0 - sigma ** 2)


def to_upper_halfspace(p):
    """Chart of H^3 onto {z > 0}: (x1, x2, 1) / (x3 + x4)."""
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 4:
        raise DimensionError("upper half-space chart is defined on R^4")
    d = p[..., 2] + p[..., 3]
    if np.any(d <= 0):
        raise DomainError("x3 + x4 must be positive for the upper half-space chart")
    return np.stack([p[..., 0] / d, p[..., 1] / d, 1.0 / d], axis=-1)


def from_upper_halfspace(x, y=None, z=None):
    """Inverse chart; accepts an (..., 3) array or three coordinates."""
    if y is None:
        xyz = np.asarray(x, dtype=float)
        x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    else:
        x, y, z = (np.asarray(t, dtype=float) for t in (x, y, z))
    if np.any(z <= 0):
        raise DomainError("z must be positive")
    x1 = x / z
    x2 = y / z
    r = (1.0 + x1 ** 2 + x2 ** 2) * z
    x3 = 0.5 * (1.0 / z - r)
    x4 = 0.5 * (1.0 / z + r)
    return np.stack([x1, x2, x3, x4], axis=-1)


def _plane_rotation(dim, i, j, angle):
    m = np.eye(dim)
    ca, sa = np.cos(angle), np.sin(angle)
    m[i, i] = m[j, j] = ca
    m[i, j], m[j, i] = -sa, sa
    return m


def _boost(dim, i, rapidity):
    m = np.eye(dim)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    m[i, i] = m[-1, -1] = ch
    m[i, -1] = m[-1, i] = sh
    return m


def random_isometry(c, seed=None, dim=4, max_rapidity=1.0):
    """Matrix M with <Mu, Mv> = <u, v>, deterministic in ``seed``.

    ``seed=None`` returns the identity.  For c = +1 the map is a product of
    rotations in every coordinate plane (so det M = 1); for c = -1 the spatial
    rotations are followed by boosts in each (x_i, x_last) plane, which keeps the
    upper sheet of the hyperboloid in place.
    """
    if seed is None:
        return np.eye(dim)
    rng = np.random.default_rng(seed)
    m = np.eye(dim)
    spatial = dim if c == 1 else dim - 1
    for i in range(spatial):
        for j in range(i + 1, spatial):
            m = _plane_rotation(dim, i, j, rng.uniform(-np.pi, np.pi)) @ m
    if c == -1:
        for i in range(dim - 1):
            m = _boost(dim, i, rng.uniform(-max_rapidity, max_rapidity)) @ m
    elif c != 1:
        raise InvalidSurfaceError(f"isometries are generated for c = +-1, got {c}")
    return m

"""Discrete Frenet and rotation-minimizing frames of sampled curves.

Curves live on the hyperquadric of R^{n+2} (c = +-1) or directly in R^{n+1}
(c = 0).  Derivatives are second-order finite differences on a uniform
arc-length grid; the two samples at each end use one-sided stencils and are
flagged as low confidence.

The Levi-Civita connection of the hyperquadric is the ambient derivative
followed by projection onto the tangent space, so for a unit-speed curve

    nabla_T T = alpha'' + c alpha.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .errors import (
    DegenerateInputError,
    DimensionError,
    GeodesicPointError,
    StencilError,
)
from .spaceform import (
    TOL_CONSTRAINT,
    complement,
    inner,
    is_on_hyperquadric,
    project_to_hyperquadric,
    tangent_project,
)

KAPPA_MIN = 1e-4
TOL_FRAME = 1e-6
EDGE = 2  # samples at each end computed with one-sided stencils


def _form(c):
    # Euclidean curves use the plain dot product on R^{n+1}
    return 1 if c == 0 else c


def _freeze(*arrays):
    for a in arrays:
        if isinstance(a, np.ndarray):
            a.setflags(write=False)


@dataclass(frozen=True)
class SampledCurve:
    """Arc-length sampled curve: ``points[i]`` is alpha(s[i]), s uniform with step ds."""

    c: int
    s: np.ndarray
    points: np.ndarray
    ds: float

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or len(s) != len(pts):
            raise DimensionError("points must be (m, dim) with one s per row")
        if self.c not in (-1, 0, 1):
            raise DimensionError(f"c must be -1, 0 or 1, got {self.c}")
        if len(s) > 1 and np.any(np.diff(s) <= 0):
            raise DegenerateInputError("s must be strictly increasing")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "ds", float(self.ds))
        _freeze(s, pts)

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def n(self):
        """Codimension-style parameter: the curve lives in M^{n+1}(c)."""
        return self.dim - 1 if self.c == 0 else self.dim - 2

    def __len__(self):
        return len(self.s)

    def transformed(self, matrix):
        """Image under a linear isometry of the ambient space."""
        return SampledCurve(self.c, self.s, self.points @ np.asarray(matrix).T, self.ds)

    def window(self, s_lo, s_hi):
        keep = (self.s >= s_lo - 1e-12) & (self.s <= s_hi + 1e-12)
        return SampledCurve(self.c, self.s[keep], self.points[keep], self.ds)

    def constraint_residual(self):
        if self.c == 0:
            return np.zeros(len(self))
        return inner(self.points, self.points, self.c) - self.c


@dataclass(frozen=True)
class FrenetData:
    s: np.ndarray
    alpha: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    kappa_prime: np.ndarray
    low_confidence: np.ndarray
    c: int
    ds: float

    def __post_init__(self):
        _freeze(self.s, self.alpha, self.T, self.N, self.B, self.kappa, self.tau,
                self.kappa_prime, self.low_confidence)

    @property
    def interior(self):
        return ~self.low_confidence

    def orthonormality_error(self):
        """Max deviation of the Gram matrix of {alpha, T, N, B} from its ideal."""
        c = self.c
        legs = [self.T, self.N, self.B]
        ideal = [1.0, 1.0, 1.0]
        if c != 0:
            legs = [self.alpha] + legs
            ideal = [float(c)] + ideal
        err = 0.0
        for i, u in enumerate(legs):
            for j, v in enumerate(legs[i:], start=i):
                target = ideal[i] if i == j else 0.0
                err = max(err, float(np.max(np.abs(inner(u, v, _form(c)) - target))))
        return err

    def as_columns(self):
        return {"s": self.s, "kappa": self.kappa, "tau": self.tau,
                "kappa_prime": self.kappa_prime}


@dataclass(frozen=True)
class RMData:
    s: np.ndarray
    alpha: np.ndarray
    T: np.ndarray
    normals: np.ndarray      # (m, n, dim)
    kappas: np.ndarray       # (m, n)
    low_confidence: np.ndarray
    c: int
    ds: float

    def __post_init__(self):
        _freeze(self.s, self.alpha, self.T, self.normals, self.kappas,
                self.low_confidence)

    @property
    def n(self):
        return self.normals.shape[1]

    def orthonormality_error(self):
        form = _form(self.c)
        legs = [self.T] + [self.normals[:, i] for i in range(self.n)]
        ideal = [1.0] * len(legs)
        if self.c != 0:
            legs = [self.alpha] + legs
            ideal = [float(self.c)] + ideal
        err = 0.0
        for i, u in enumerate(legs):
            for j in range(i, len(legs)):
                target = ideal[i] if i == j else 0.0
                err = max(err, float(np.max(np.abs(inner(u, legs[j], form) - target))))
        return err


def first_derivative(y, ds):
    """Second-order accurate derivative along axis 0 (one-sided at the ends)."""
    if len(y) < 3:
        raise StencilError("need at least 3 samples to differentiate")
    return np.gradient(y, ds, axis=0, edge_order=2)


def second_derivative(y, ds):
    if len(y) < 4:
        raise StencilError("need at least 4 samples for a second derivative")
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    out[1:-1] = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / ds ** 2
    out[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / ds ** 2
    out[-1] = (2.0 * y[-1] - 5.0 * y[-2] + 4.0 * y[-3] - y[-4]) / ds ** 2
    return out


def _edge_mask(m):
    mask = np.zeros(m, dtype=bool)
    mask[:EDGE] = True
    mask[-EDGE:] = True
    return mask


def _unit_tangents(curve):
    c, form = curve.c, _form(curve.c)
    alpha = curve.points
    T = first_derivative(alpha, curve.ds)
    if c != 0:
        T = tangent_project(T, alpha, c)
    return T / np.sqrt(inner(T, T, form))[:, None]


def _accelerations(curve, T):
    """nabla_T T at every sample, orthogonal to alpha and T."""
    c, form = curve.c, _form(curve.c)
    acc = second_derivative(curve.points, curve.ds)
    if c != 0:
        acc = tangent_project(acc, curve.points, c)
    return acc - inner(acc, T, form)[:, None] * T


def covariant_accel(curve, i):
    """nabla_T T at interior sample ``i`` from the central stencil.

    The ambient second difference is projected onto the tangent space of the
    hyperquadric, which for unit speed equals alpha'' + c alpha.
    """
    m = len(curve)
    if i < 0:
        i += m
    if not 1 <= i <= m - 2:
        raise StencilError(f"index {i} has no central stencil (curve has {m} samples)")
    p = curve.points
    second = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / curve.ds ** 2
    if curve.c == 0:
        return second
    return tangent_project(second, p[i], curve.c)


def frenet_apparatus(curve, kappa_min=KAPPA_MIN):
    """Frenet frame, curvature, torsion and kappa' at every sample.

    B is the metric-orthogonal completion of {alpha, T, N} (of {T, N} when
    c = 0) oriented so that det(alpha, T, N, B) > 0 (det(T, N, B) > 0 when
    c = 0); the torsion is tau = <N', B>.
    """
    if curve.n != 2:
        raise DimensionError(f"Frenet apparatus needs a 3-dimensional space form, got n={curve.n}")
    if len(curve) < 5:
        raise StencilError("need at least 5 samples")
    c, form, ds = curve.c, _form(curve.c), curve.ds
    alpha = curve.points
    T = _unit_tangents(curve)
    acc = _accelerations(curve, T)
    kappa = np.sqrt(np.maximum(inner(acc, acc, form), 0.0))
    low = np.flatnonzero(kappa < kappa_min)
    if len(low):
        raise GeodesicPointError(
            f"curvature below {kappa_min:g} at samples {low[0]}..{low[-1]} "
            f"(s in [{curve.s[low[0]]:.6g}, {curve.s[low[-1]]:.6g}])", low)
    N = acc / kappa[:, None]
    legs = [T, N] if c == 0 else [alpha, T, N]
    B = complement(np.stack(legs, axis=1), form)
    tau = inner(first_derivative(N, ds), B, form)
    kappa_prime = first_derivative(kappa, ds)
    return FrenetData(s=curve.s, alpha=alpha, T=T, N=N, B=B, kappa=kappa, tau=tau,
                      kappa_prime=kappa_prime, low_confidence=_edge_mask(len(curve)),
                      c=c, ds=ds)


def _orthonormalize(vectors, form):
    """Symmetric (Loewdin) orthonormalization: V (V^T G V)^{-1/2}.

    Unlike Gram-Schmidt this commutes with any constant rotation of the input
    frame.
    """
    gram = inner(vectors[:, None, :], vectors[None, :, :], form)
    w, u = np.linalg.eigh(gram)
    if np.min(w) <= 1e-12 * max(1.0, np.max(w)):
        raise DegenerateInputError("normal frame became degenerate")
    inv_sqrt = (u / np.sqrt(w)) @ u.T
    return inv_sqrt @ vectors


def _normal_projection(v, p, t, c):
    if c != 0:
        v = tangent_project(v, p, c)
    return v - inner(v, t, _form(c))[..., None] * t


def default_normal_frame(p, t, c):
    """Gram-Schmidt completion of {p, t} (of {t} when c = 0) by coordinate axes."""
    form = _form(c)
    dim = len(t)
    n = dim - 1 if c == 0 else dim - 2
    basis = []
    for e in np.eye(dim):
        v = _normal_projection(e, p, t, c)
        for b in basis:
            v = v - inner(v, b, form) * b
        q = inner(v, v, form)
        if q > 1e-8:
            basis.append(v / np.sqrt(q))
        if len(basis) == n:
            break
    return np.array(basis)


def rm_apparatus(curve, initial_frame=None):
    """Rotation-minimizing frame {T, N_1, ..., N_n} and its curvatures.

    The normals are carried from sample to sample by projecting onto the next
    normal space of {alpha, T} and re-orthonormalizing; kappa_i = <nabla_T T, N_i>.
    """
    c, form = curve.c, _form(curve.c)
    n = curve.n
    if len(curve) < 5:
        raise StencilError("need at least 5 samples")
    alpha = curve.points
    T = _unit_tangents(curve)
    acc = _accelerations(curve, T)
    if initial_frame is None:
        frame = default_normal_frame(alpha[0], T[0], c)
    else:
        frame = np.array(initial_frame, dtype=float)
        if frame.shape != (n, curve.dim):
            raise DegenerateInputError(f"initial frame must have shape {(n, curve.dim)}")
        frame = _normal_projection(frame, alpha[0], T[0], c)
        gram = inner(frame[:, None, :], frame[None, :, :], form)
        if np.max(np.abs(gram - np.eye(n))) > 1e-6:
            raise DegenerateInputError("initial frame is not orthonormal in the normal space")
    frame = _orthonormalize(frame, form)

    m = len(curve)
    normals = np.empty((m, n, curve.dim))
    normals[0] = frame
    for k in range(1, m):
        frame = _orthonormalize(_normal_projection(frame, alpha[k], T[k], c), form)
        normals[k] = frame
    kappas = inner(acc[:, None, :], normals, form)
    return RMData(s=curve.s, alpha=alpha, T=T, normals=normals, kappas=kappas,
                  low_confidence=_edge_mask(m), c=c, ds=curve.ds)


def arclength_reparametrize(points, c, ds=None, oversample=8):
    """Resample a curve at uniform arc-length spacing.

    The points are interpolated by a cubic spline in the cumulative chord
    parameter; arc length is the integral of the spline speed (Gauss-Legendre
    on each knot interval, refined ``oversample`` times), and the spline is
    evaluated at the inverted uniform grid and projected back onto the
    hyperquadric.  ``ds`` defaults to length / (len(points) - 1).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise DimensionError("points must be a 2-d array")
    if len(pts) < 4:
        raise DegenerateInputError(f"need at least 4 points, got {len(pts)}")
    form = _form(c)
    if c != 0:
        if not np.all(is_on_hyperquadric(pts, c, tol=1e-3)):
            raise DegenerateInputError("points are not on the hyperquadric")
        pts = project_to_hyperquadric(pts, c)
    chords = np.sqrt(np.abs(inner(np.diff(pts, axis=0), np.diff(pts, axis=0), form)))
    if np.any(chords <= 1e-14):
        raise DegenerateInputError("consecutive points coincide")
    t = np.concatenate([[0.0], np.cumsum(chords)])
    spline = CubicSpline(t, pts, axis=0)
    speed_fn = spline.derivative()

    # fine parameter grid with Gauss-Legendre arc length on each cell
    tf = np.linspace(t[0], t[-1], (len(t) - 1) * oversample + 1)
    xg, wg = np.polynomial.legendre.leggauss(5)
    a, b = tf[:-1], tf[1:]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * xg[None, :]
    v = speed_fn(nodes)
    speed = np.sqrt(np.abs(inner(v, v, form)))
    cell = half * (speed * wg).sum(axis=1)
    sf = np.concatenate([[0.0], np.cumsum(cell)])
    length = sf[-1]

    if ds is None:
        ds = length / (len(pts) - 1)
    count = int(np.floor(length / ds + 1e-9)) + 1
    s_new = np.arange(count) * ds
    # t(s) through Hermite interpolation using dt/ds = 1 / speed
    speed_f = np.sqrt(np.abs(inner(speed_fn(tf), speed_fn(tf), form)))
    t_of_s = CubicHermiteSpline(sf, tf, 1.0 / speed_f)
    t_new = t_of_s(s_new)
    # one Newton polish per sample on the arc-length equation
    for _ in range(2):
        t_new = np.clip(t_new, t[0], t[-1])
        idx = np.clip(np.searchsorted(tf, t_new) - 1, 0, len(tf) - 2)
        a0 = tf[idx]
        half0 = 0.5 * (t_new - a0)
        nodes = (0.5 * (a0 + t_new))[:, None] + half0[:, None] * xg[None, :]
        v = speed_fn(nodes)
        partial = half0 * (np.sqrt(np.abs(inner(v, v, form))) * wg).sum(axis=1)
        s_at = sf[idx] + partial
        vel = speed_fn(t_new)
        t_new = t_new - (s_at - s_new) / np.sqrt(np.abs(inner(vel, vel, form)))
    new_pts = spline(np.clip(t_new, t[0], t[-1]))
    if c != 0:
        new_pts = project_to_hyperquadric(new_pts, c)
    return SampledCurve(c, s_new, new_pts, ds)


def check_constraint(curve, tol=TOL_CONSTRAINT):
    return float(np.max(np.abs(curve.constraint_residual()))) <= tol

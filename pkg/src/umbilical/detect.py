"""Deciding from curvature and torsion whether a curve lies on an umbilical surface.

For a curve with tau != 0 the quantity

    C = 1/kappa^2 + kappa'^2 / (kappa^4 tau^2)

is constant (and equal to 1/H^2) exactly when the curve lies on a totally
umbilical surface of mean curvature H != 0, under the genericity assumption
kappa' != 0.  The surface itself is recovered from the constant vector

    beta = alpha + N/kappa - kappa' / (kappa^2 tau) B,

which satisfies <alpha, beta> = c and <beta, beta> = c + C.  In higher
dimensions the rotation-minimizing curvatures satisfy a linear relation
sum a_i kappa_i + sigma = 0 instead.
"""

from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DimensionError,
    RecoveryError,
    StencilError,
    UndefinedInvariantError,
)
from .frames import first_derivative, frenet_apparatus, rm_apparatus
from .spaceform import SurfaceKind, classify_surface, inner


class Verdict(str, Enum):
    TOTALLY_GEODESIC = "TotallyGeodesic"
    UMBILICAL_NON_GEODESIC = "UmbilicalNonGeodesic"
    NOT_UMBILICAL = "NotUmbilical"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Thresholds:
    tau_zero_tol: float = 1e-5
    C_spread_tol: float = 1e-2
    horosphere_band: float = 0.02
    kappa_prime_tol: float = 1e-6
    kappa_min: float = 1e-4
    beta_spread_tol: float = 1e-2
    fourth_order_tol: float = 1e-2
    rm_residual_tol: float = 1e-3
    rm_sigma_zero_tol: float = 1e-6

    def replace(self, **changes):
        values = asdict(self)
        values.update({k: v for k, v in changes.items() if v is not None})
        return Thresholds(**values)


DEFAULTS = Thresholds()


@dataclass(frozen=True)
class RMRelation:
    """Coefficients of sum a_i kappa_i + sigma = 0 with |a| = 1 and sigma >= 0."""

    a: np.ndarray
    sigma: float
    residual: float
    singular_values: np.ndarray
    ambiguous: bool = False
    null_space: np.ndarray = None

    def to_dict(self):
        out = {
            "a": [float(x) for x in self.a],
            "sigma": float(self.sigma),
            "residual": float(self.residual),
            "singular_values": [float(x) for x in self.singular_values],
            "ambiguous": bool(self.ambiguous),
        }
        if self.null_space is not None:
            out["null_space"] = [[float(x) for x in row] for row in self.null_space]
        return out


@dataclass(frozen=True)
class DetectionReport:
    verdict: Verdict
    c: int
    C_estimate: float
    C_spread: float
    H_estimate: float
    kind: SurfaceKind = None
    recovered_surface: object = None
    rm_relation: RMRelation = None
    residual_third_order: np.ndarray = None
    residual_fourth_order: np.ndarray = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        surface = self.recovered_surface
        return {
            "verdict": self.verdict.value,
            "c": self.c,
            "C_estimate": _num(self.C_estimate),
            "C_spread": _num(self.C_spread),
            "H_estimate": _num(self.H_estimate),
            "kind": None if self.kind is None else self.kind.value,
            "recovered_surface": None if surface is None else surface.to_dict(),
            "rm_relation": None if self.rm_relation is None else self.rm_relation.to_dict(),
            "residual_third_order": _array(self.residual_third_order),
            "residual_fourth_order": _array(self.residual_fourth_order),
            "diagnostics": _plain(self.diagnostics),
        }


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if np.isfinite(x) else None


def _array(a):
    if a is None:
        return None
    return [_num(x) for x in np.asarray(a, dtype=float)]


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, Enum):
        return obj.value
    return obj


def invariant_C(kappa, kappa_prime, tau):
    """1/kappa^2 + kappa'^2 / (kappa^4 tau^2); constant 1/H^2 on umbilical surfaces."""
    kappa = np.asarray(kappa, dtype=float)
    kappa_prime = np.asarray(kappa_prime, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if np.any(tau == 0):
        raise UndefinedInvariantError("invariant is undefined where tau = 0")
    return 1.0 / kappa ** 2 + kappa_prime ** 2 / (kappa ** 4 * tau ** 2)


def fourth_order_residual(kappa, kappa_prime, tau, ds):
    """tau/kappa - (kappa' / (kappa^2 tau))', differentiated by central differences."""
    kappa = np.asarray(kappa, dtype=float)
    if len(kappa) < 3:
        raise StencilError("window too short for the fourth order residual")
    tau = np.asarray(tau, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.asarray(kappa_prime, dtype=float) / (kappa ** 2 * tau)
        return tau / kappa - first_derivative(q, ds)


def invariant_C_derivative_factor(kappa, kappa_prime, tau):
    """-2 kappa' / (tau kappa^2): dC/ds equals this times the fourth order residual."""
    return -2.0 * np.asarray(kappa_prime) / (np.asarray(tau) * np.asarray(kappa) ** 2)


def _longest_run(mask):
    best = run = 0
    for v in mask:
        run = run + 1 if v else 0
        best = max(best, run)
    return best


def kind_from_C(C, c, band=DEFAULTS.horosphere_band):
    if c == 1:
        return SurfaceKind.GEODESIC_SPHERE_S3
    if c == -1:
        if abs(C - 1.0) < band:
            return SurfaceKind.HOROSPHERE
        return SurfaceKind.EQUIDISTANT_SURFACE if C > 1 else SurfaceKind.GEODESIC_SPHERE_H3
    return None


def _assess(kappa, kappa_prime, tau, s, usable, ds, th):
    """Shared constancy test; returns (verdict, C, spread, third, fourth, diagnostics)."""
    m = len(kappa)
    window = usable & (np.abs(tau) >= th.tau_zero_tol)
    diag = {
        "thresholds": asdict(th),
        "samples": m,
        "window_samples": int(window.sum()),
    }
    third = np.full(m, np.nan)
    fourth = np.full(m, np.nan)
    if not window.any():
        diag["reason"] = "every sample was trimmed"
        return Verdict.INCONCLUSIVE, np.nan, np.nan, third, fourth, diag
    idx = np.flatnonzero(window)
    diag["window_s"] = [float(s[idx[0]]), float(s[idx[-1]])]

    C = invariant_C(kappa[window], kappa_prime[window], tau[window])
    C_est = float(np.mean(C))
    C_med = float(np.median(C))
    spread = float(np.max(np.abs(C - C_med)) / abs(C_med))
    third[window] = C - C_est
    nonzero = np.where(np.abs(tau) >= th.tau_zero_tol, tau, np.nan)
    full_fourth = fourth_order_residual(kappa, kappa_prime, nonzero, ds)
    fourth[window] = full_fourth[window]

    kp_zero = np.abs(kappa_prime[window]) < th.kappa_prime_tol
    run = _longest_run(kp_zero)
    diag["kappa_prime_zero_samples"] = int(kp_zero.sum())
    diag["kappa_prime_zero_longest_run"] = run
    finite = np.isfinite(fourth[window]) & ~kp_zero
    if finite.any():
        diag["fourth_order_max_abs"] = float(np.max(np.abs(fourth[window][finite])))

    if spread > th.C_spread_tol:
        verdict = Verdict.NOT_UMBILICAL
        diag["reason"] = "invariant C is not constant"
    elif kp_zero.all():
        # constant curvature: C is constant for any tau, let the residual decide
        level = float(np.nanmedian(np.abs(fourth[window])))
        diag["fourth_order_median_abs"] = level
        if level > th.fourth_order_tol:
            verdict = Verdict.NOT_UMBILICAL
            diag["reason"] = "constant curvature with nonzero fourth order residual"
        else:
            verdict = Verdict.INCONCLUSIVE
            diag["reason"] = "constant curvature; fourth order residual too small to decide"
    elif run > max(3, int(0.01 * len(kp_zero))):
        verdict = Verdict.INCONCLUSIVE
        diag["reason"] = "kappa' vanishes on a sub-interval"
    else:
        verdict = Verdict.UMBILICAL_NON_GEODESIC
    return verdict, C_est, spread, third, fourth, diag


def _usable(frenet):
    return frenet.interior.copy()


def _totally_geodesic_report(frenet, usable, th, c):
    B = np.median(frenet.B[usable], axis=0)
    offsets = inner(frenet.alpha[usable], B, 1 if c == 0 else c)
    diag = {
        "thresholds": asdict(th),
        "max_abs_tau": float(np.max(np.abs(frenet.tau[usable]))),
        "binormal": B,
        "binormal_offset_max_abs": float(np.max(np.abs(offsets - (0 if c else np.median(offsets))))),
    }
    surface = None
    kind = None
    if c != 0:
        surface = classify_surface(B, 0.0, c)
        kind = surface.kind
    else:
        diag["plane_offset"] = float(np.median(offsets))
    return DetectionReport(verdict=Verdict.TOTALLY_GEODESIC, c=c, C_estimate=np.nan,
                           C_spread=np.nan, H_estimate=0.0, kind=kind,
                           recovered_surface=surface, diagnostics=diag)


def beta_vectors(frenet, mask=None):
    """alpha + N/kappa - kappa'/(kappa^2 tau) B per sample."""
    if mask is None:
        mask = np.ones(len(frenet.s), dtype=bool)
    k, kp, t = frenet.kappa[mask], frenet.kappa_prime[mask], frenet.tau[mask]
    if np.any(t == 0):
        raise UndefinedInvariantError("beta needs tau != 0")
    return (frenet.alpha[mask] + frenet.N[mask] / k[:, None]
            - (kp / (k ** 2 * t))[:, None] * frenet.B[mask])


def recover_surface(curve, frenet=None, C=None, thresholds=DEFAULTS, mask=None):
    """Explicit umbilical surface through a curve with tau != 0.

    b is the per-coordinate median of beta over ``mask``; for c = -1 the pair
    (b, <alpha, b>) = (b, -1) is normalized by sqrt|C - 1| (null when C is
    inside the horosphere band), for c = +1 by sqrt(1 + C).
    """
    th = thresholds
    if frenet is None:
        frenet = frenet_apparatus(curve, kappa_min=th.kappa_min)
    c = frenet.c
    if c not in (-1, 1):
        raise DimensionError("surface recovery is for c = +-1; use detect_euclidean for c = 0")
    if mask is None:
        mask = _usable(frenet)
    if np.any(np.abs(frenet.tau[mask]) < th.tau_zero_tol):
        raise UndefinedInvariantError("recover_surface needs tau != 0 on the window")
    beta = beta_vectors(frenet, mask)
    b = np.median(beta, axis=0)
    spread = float(np.max(np.linalg.norm(beta - b, axis=1)) / max(1.0, np.linalg.norm(b)))
    if spread > th.beta_spread_tol:
        raise RecoveryError(f"beta is not constant along the curve (relative spread {spread:.3g})")
    ab = inner(frenet.alpha[mask], b, c)
    bb = float(inner(b, b, c))
    if C is None:
        C = float(np.mean(invariant_C(frenet.kappa[mask], frenet.kappa_prime[mask],
                                      frenet.tau[mask])))
    sigma = float(np.median(ab))
    if c == -1:
        if abs(C - 1.0) < th.horosphere_band:
            surface = classify_surface(b, sigma, c, null_tol=abs(bb) + 1.0)
        else:
            if np.sign(bb) != np.sign(C - 1.0):
                raise RecoveryError(
                    f"<b, b> = {bb:.3g} is inconsistent with C - 1 = {C - 1:.3g}")
            surface = classify_surface(b, sigma, c)
    else:
        surface = classify_surface(b, sigma, c)
    extra = {
        "b": b,
        "alpha_b_deviation": float(np.max(np.abs(ab - c))),
        "b_norm_sq": bb,
        "beta_spread": spread,
    }
    return _with_extra(surface, extra)


def _with_extra(surface, extra):
    surface.extra.update(extra)
    return surface


def detect(curve, thresholds=DEFAULTS, frenet=None):
    """Frenet-based membership test for curves in H^3, S^3 (or R^3 when c = 0)."""
    th = thresholds
    if curve.n != 2:
        raise DimensionError("Frenet detection needs a 3-dimensional space form; use detect_rm")
    if frenet is None:
        frenet = frenet_apparatus(curve, kappa_min=th.kappa_min)
    if curve.c == 0:
        return detect_euclidean(frenet.kappa, frenet.kappa_prime, frenet.tau, curve.ds,
                                s=curve.s, thresholds=th, frenet=frenet)
    usable = _usable(frenet)
    if np.max(np.abs(frenet.tau[usable])) < th.tau_zero_tol:
        return _totally_geodesic_report(frenet, usable, th, curve.c)

    verdict, C_est, spread, third, fourth, diag = _assess(
        frenet.kappa, frenet.kappa_prime, frenet.tau, frenet.s, usable, curve.ds, th)
    H_est = 1.0 / np.sqrt(C_est) if np.isfinite(C_est) else np.nan
    kind = None
    surface = None
    if verdict == Verdict.UMBILICAL_NON_GEODESIC:
        kind = kind_from_C(C_est, curve.c, th.horosphere_band)
        window = usable & (np.abs(frenet.tau) >= th.tau_zero_tol)
        try:
            surface = recover_surface(curve, frenet, C=C_est, thresholds=th, mask=window)
        except RecoveryError as exc:
            verdict = Verdict.INCONCLUSIVE
            diag["reason"] = f"surface recovery failed: {exc}"
            kind = None
        else:
            diag["recovery"] = dict(surface.extra)
    return DetectionReport(verdict=verdict, c=curve.c, C_estimate=C_est, C_spread=spread,
                           H_estimate=H_est, kind=kind, recovered_surface=surface,
                           residual_third_order=third, residual_fourth_order=fourth,
                           diagnostics=diag)


def detect_euclidean(kappa, kappa_prime, tau, ds, s=None, thresholds=DEFAULTS, frenet=None):
    """Plane / sphere test in R^3 from curvature series.

    When ``frenet`` is supplied the sphere center (the constant beta) is reported
    as well.
    """
    th = thresholds
    kappa = np.asarray(kappa, dtype=float)
    kappa_prime = np.asarray(kappa_prime, dtype=float)
    tau = np.asarray(tau, dtype=float)
    m = len(kappa)
    if s is None:
        s = np.arange(m) * ds
    usable = frenet.interior.copy() if frenet is not None else np.ones(m, dtype=bool)
    if not usable.any():
        return DetectionReport(verdict=Verdict.INCONCLUSIVE, c=0, C_estimate=np.nan,
                               C_spread=np.nan, H_estimate=np.nan,
                               diagnostics={"thresholds": asdict(th),
                                            "reason": "every sample was trimmed"})
    if np.max(np.abs(tau[usable])) < th.tau_zero_tol:
        if frenet is not None:
            return _totally_geodesic_report(frenet, usable, th, 0)
        return DetectionReport(verdict=Verdict.TOTALLY_GEODESIC, c=0, C_estimate=np.nan,
                               C_spread=np.nan, H_estimate=0.0,
                               diagnostics={"thresholds": asdict(th), "surface": "plane"})
    verdict, C_est, spread, third, fourth, diag = _assess(
        kappa, kappa_prime, tau, s, usable, ds, th)
    H_est = 1.0 / np.sqrt(C_est) if np.isfinite(C_est) else np.nan
    if verdict == Verdict.UMBILICAL_NON_GEODESIC:
        diag["surface"] = "sphere"
        diag["radius"] = float(np.sqrt(C_est))
        if frenet is not None:
            window = usable & (np.abs(tau) >= th.tau_zero_tol)
            beta = beta_vectors(frenet, window)
            center = np.median(beta, axis=0)
            diag["center"] = center
            diag["center_spread"] = float(np.max(np.linalg.norm(beta - center, axis=1)))
    return DetectionReport(verdict=verdict, c=0, C_estimate=C_est, C_spread=spread,
                           H_estimate=H_est, residual_third_order=third,
                           residual_fourth_order=fourth, diagnostics=diag)


def detect_rm_linear_relation(rm, mask=None, ambiguity_tol=DEFAULTS.rm_residual_tol):
    """Least-squares linear relation sum a_i kappa_i + sigma = 0.

    Minimizes |K [a; sigma]| over unit vectors, K having rows (kappa_1 .. kappa_n, 1);
    the minimizer is the last right singular vector.  The result is rescaled
    to |a| = 1 with sigma >= 0, and ``residual`` is the smallest singular value
    divided by sqrt(samples).  Several singular values below ``ambiguity_tol``
    (after the same scaling) make the relation ambiguous.
    """
    if mask is None:
        mask = ~rm.low_confidence
    kap = rm.kappas[mask]
    m, n = kap.shape
    if m < n + 2:
        raise StencilError(f"need at least {n + 2} samples, got {m}")
    K = np.column_stack([kap, np.ones(m)])
    _, sv, vt = np.linalg.svd(K, full_matrices=False)
    scaled = sv / np.sqrt(m)
    v = vt[-1]
    small = scaled < ambiguity_tol
    ambiguous = bool(small.sum() > 1)
    a_norm = np.linalg.norm(v[:n])
    if a_norm < 1e-12:
        ambiguous = True
        a, sigma = v[:n], v[n]
    else:
        a, sigma = v[:n] / a_norm, v[n] / a_norm
        if sigma < 0:
            a, sigma = -a, -sigma
    null_space = vt[small] if ambiguous else None
    return RMRelation(a=a, sigma=float(sigma), residual=float(scaled[-1]),
                      singular_values=sv, ambiguous=ambiguous, null_space=null_space)


def detect_rm(curve, thresholds=DEFAULTS, initial_frame=None, rm=None):
    """Detection through the rotation-minimizing frame (any dimension, C^2 curves).

    When the relation holds, a = sum a_i N_i - sigma alpha is constant and the
    curve lies on U(a, -c sigma).
    """
    th = thresholds
    if rm is None:
        rm = rm_apparatus(curve, initial_frame)
    mask = ~rm.low_confidence
    rel = detect_rm_linear_relation(rm, mask, ambiguity_tol=th.rm_residual_tol)
    diag = {"thresholds": asdict(th), "samples": len(curve),
            "window_samples": int(mask.sum()),
            "rm_orthonormality_error": rm.orthonormality_error()}
    surface = None
    kind = None
    C_est = np.nan
    H_est = rel.sigma
    if rel.ambiguous:
        verdict = Verdict.INCONCLUSIVE
        diag["reason"] = "several independent linear relations"
    elif rel.residual >= th.rm_residual_tol:
        verdict = Verdict.NOT_UMBILICAL
        diag["reason"] = "no linear relation among the RM curvatures"
    else:
        verdict = (Verdict.TOTALLY_GEODESIC if rel.sigma < th.rm_sigma_zero_tol
                   else Verdict.UMBILICAL_NON_GEODESIC)
        if verdict == Verdict.UMBILICAL_NON_GEODESIC:
            C_est = 1.0 / rel.sigma ** 2
        combo = np.einsum("i,kid->kd", rel.a, rm.normals[mask])
        if curve.c == 0:
            if verdict == Verdict.UMBILICAL_NON_GEODESIC:
                centers = rm.alpha[mask] - combo / rel.sigma
                diag["center"] = np.median(centers, axis=0)
                diag["radius"] = 1.0 / rel.sigma
        else:
            beta = combo - rel.sigma * rm.alpha[mask]
            b = np.median(beta, axis=0)
            diag["beta_spread"] = float(np.max(np.linalg.norm(beta - b, axis=1)))
            sigma_surface = 0.0 if verdict == Verdict.TOTALLY_GEODESIC else -curve.c * rel.sigma
            try:
                surface = classify_surface(b, sigma_surface, curve.c)
                kind = surface.kind
            except ValueError as exc:
                diag["recovery_error"] = str(exc)
    return DetectionReport(verdict=verdict, c=curve.c, C_estimate=C_est, C_spread=np.nan,
                           H_estimate=H_est, kind=kind, recovered_surface=surface,
                           rm_relation=rel, diagnostics=diag)

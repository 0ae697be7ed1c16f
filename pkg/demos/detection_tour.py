"""A short tour of the detector on positive and negative cases.

Covers the three umbilical kinds in H^3, a perturbed circle in S^3 that should be
rejected, the Euclidean baseline and the rotation minimizing test in S^4.
"""

import numpy as np

from umbilical import classify_surface, detect, detect_rm
from umbilical.detect import detect_euclidean
from umbilical.frames import arclength_reparametrize
from umbilical.selftest import negative_control_s4
from umbilical.synth import oracle_torus_knot_sphere, synthesize_on_surface

cases = {
    "equidistant sigma=1.5": classify_surface([1.0, 0, 0, 0], 1.5, -1),
    "horosphere": classify_surface([0, 0, -1.0, 1.0], -1.0, -1),
    "geodesic sphere sigma=2": classify_surface([0, 0, 0, -1.0], 2.0, -1),
}
for name, surface in cases.items():
    rep = detect(synthesize_on_surface(surface, 1.0))
    print(f"{name:26s} -> {rep.kind.value:20s} H={rep.H_estimate:.6f} (exact {abs(surface.H):.6f})")

# a small circle with a wobble no longer sits on any umbilical surface
r = np.sqrt(3) / 2
t = np.linspace(0, 2 * np.pi * r, 3000)
pts = np.column_stack([r * np.cos(t / r), r * np.sin(t / r),
                       1e-2 * np.sin(3 * t / r), np.full_like(t, 0.5)])
pts /= np.linalg.norm(pts, axis=1)[:, None]
rep = detect(arclength_reparametrize(pts, 1, ds=1e-3))
print("perturbed circle ->", rep.verdict.value, f"(C spread {rep.C_spread:.3f})")

# Euclidean: spherical curves give C = R^2, a helix fails the fourth-order test
ds = 1e-3
s = np.arange(0.5, 2.6, ds)
rep = detect_euclidean(1 / (2 * np.sin(s)), -np.cos(s) / (2 * np.sin(s) ** 2), np.ones_like(s), ds)
print("R^3 sphere R=2  -> C =", round(rep.C_estimate, 9))
rep = detect_euclidean(np.full(4000, 0.8), np.zeros(4000), np.full(4000, 0.4), ds)
print("R^3 helix       ->", rep.verdict.value, "residual", np.nanmedian(rep.residual_fourth_order))

# S^4: curvatures in a rotation minimizing frame obey a linear relation
rel = detect_rm(oracle_torus_knot_sphere(sigma=0.5)).rm_relation
print(f"S^4 torus knot  -> residual {rel.residual:.1e}, sigma {rel.sigma:.6f}")
rel = detect_rm(negative_control_s4(1e-3)).rm_relation
print(f"S^4 control     -> residual {rel.residual:.3f}")

import numpy as np
import pytest
import sympy as sp

from umbilical.errors import DomainError, IntegrationError, InvalidSurfaceError
from umbilical.frames import first_derivative, frenet_apparatus
from umbilical.spaceform import classify_surface, inner, membership_residual
from umbilical.synth import (
    constant_torsion_curvature,
    horosphere_angle,
    horosphere_surface,
    ks2_lhs,
    ks2_rhs,
    maximal_domain,
    oracle_circle_s3,
    oracle_equidistant_h3,
    oracle_helix,
    oracle_torus_knot_sphere,
    speed_constraint_drift,
    sphere_accelerations,
    synthesize_geodesic_sphere_s3,
    synthesize_horosphere,
    synthesize_on_surface,
    trimmed_window,
)


def interior_median_tau(curve):
    fr = frenet_apparatus(curve)
    return float(np.median(fr.tau[fr.interior]))


# ---------------------------------------------------------------- curvature law

def test_constant_torsion_curvature_examples():
    assert constant_torsion_curvature(1.0, 1.0, 0.0, np.pi / 2) == pytest.approx(1.0)
    assert constant_torsion_curvature(1 / np.sqrt(3), 2.0, 0.0, np.pi / 4) == pytest.approx(
        1 / np.sqrt(3))
    with pytest.raises(DomainError):
        constant_torsion_curvature(1.0, 1.0, 0.0, 4.0)


def test_curvature_law_ode_symbolic():
    s, tau, H, a = sp.symbols("s tau H a", positive=True)
    w = sp.sin(tau * s + a) / H  # 1 / kappa
    assert sp.simplify(tau ** 2 * w ** 2 + sp.diff(w, s) ** 2 - tau ** 2 / H ** 2) == 0


@pytest.mark.parametrize("H,tau,a", [(1.0, 1.0, 0.0), (0.3, 2.0, 0.4), (2.5, -1.5, 0.0)])
def test_curvature_law_ode_numeric(H, tau, a):
    lo, hi = trimmed_window(tau, a)
    s = np.linspace(lo, hi, 101)
    w = 1 / constant_torsion_curvature(H, tau, a, s)
    dw = tau * np.cos(tau * s + a) / abs(H)
    np.testing.assert_allclose(tau ** 2 * w ** 2 + dw ** 2, tau ** 2 / H ** 2, rtol=1e-12)


def test_domains():
    assert maximal_domain(1.0) == (0.0, np.pi)
    lo, hi = trimmed_window(2.0)
    assert lo == pytest.approx(0.15 * np.pi / 2) and hi == pytest.approx(0.85 * np.pi / 2)
    lo, hi = maximal_domain(-1.0)
    assert lo == pytest.approx(-np.pi) and hi == 0.0


# ---------------------------------------------------------------- horosphere

def test_horosphere_membership_and_speed():
    curve = synthesize_horosphere(1.0)
    x1, x2, x3, x4 = curve.points.T
    assert np.max(np.abs(x3 + x4 - 1)) < 1e-14
    assert np.max(np.abs(x1 ** 2 + x2 ** 2 + 2 * x3)) < 1e-10
    th = horosphere_angle(curve.s, 1.0)
    r = x1 * np.cos(th) + x2 * np.sin(th)
    velocity = np.column_stack([np.cos(th), np.sin(th), -r, r])
    np.testing.assert_allclose(inner(velocity, velocity, -1), 1.0, atol=1e-8)
    assert np.max(np.abs(membership_residual(horosphere_surface(), curve.points))) < 1e-12


@pytest.mark.parametrize("tau,s0", [(1.0, np.pi / 2), (2.0, np.pi / 4)])
def test_horosphere_figure_parameters(tau, s0):
    curve = synthesize_horosphere(tau, s0=s0, x1_0=0, x2_0=0)
    i0 = np.argmin(np.abs(curve.s - s0))
    assert curve.s[i0] == pytest.approx(s0, abs=1e-12)
    np.testing.assert_allclose(curve.points[i0, :2], 0.0)
    assert curve.s[0] == pytest.approx(0.15 * np.pi / tau, abs=curve.ds)
    assert curve.s[-1] == pytest.approx(0.85 * np.pi / tau, abs=curve.ds)
    fr = frenet_apparatus(curve)
    m = fr.interior
    np.testing.assert_allclose(fr.kappa[m], 1 / np.sin(tau * fr.s[m]), rtol=1e-3)
    np.testing.assert_allclose(fr.tau[m], tau, atol=1e-3 * tau)


def test_horosphere_curvature_from_angle():
    curve = synthesize_horosphere(1.0)
    fr = frenet_apparatus(curve)
    m = fr.interior
    dtheta = 1 / np.tan(fr.s[m])
    np.testing.assert_allclose(fr.kappa[m], np.sqrt(1 + dtheta ** 2), atol=1e-6)


def test_horosphere_mirror_flips_torsion():
    assert interior_median_tau(synthesize_horosphere(1.0)) == pytest.approx(1.0, abs=1e-5)
    assert interior_median_tau(synthesize_horosphere(1.0, mirror=True)) == pytest.approx(
        -1.0, abs=1e-5)


def test_horosphere_endpoint_blow_up():
    tau = 1.0
    curve = synthesize_horosphere(tau, s_range=(np.pi / 2, np.pi - 0.01), ds=1e-4)
    fr = frenet_apparatus(curve)
    tail = fr.interior & (fr.s > np.pi - 0.15 / tau)
    assert np.max(fr.kappa[tail]) > 10.0


@pytest.mark.parametrize("kwargs", [
    {"s_range": (0.0, 1.0)},
    {"s_range": (1.0, np.pi)},
    {"s_range": (2.0, 1.0)},
    {"s0": 3.0},
])
def test_horosphere_domain_errors(kwargs):
    with pytest.raises(DomainError):
        synthesize_horosphere(1.0, **kwargs)
    with pytest.raises(DomainError):
        synthesize_horosphere(0.0)


# ---------------------------------------------------------------- S^3 sphere

def test_ks2_left_side_symbolic():
    phi, th, dphi, dth, ddphi, ddth = sp.symbols("phi theta dphi dtheta ddphi ddtheta")
    t = sp.symbols("t")
    P, Q = sp.Function("P")(t), sp.Function("Q")(t)
    u = sp.Matrix([sp.cos(P) * sp.cos(Q), sp.cos(P) * sp.sin(Q), sp.sin(P)])
    w = sp.diff(u, t, 2) + u
    expr = (w.T * w)[0]
    subs = {sp.diff(P, t, 2): ddphi, sp.diff(Q, t, 2): ddth,
            sp.diff(P, t): dphi, sp.diff(Q, t): dth}
    expr = expr.subs(subs).subs({P: phi, Q: th})
    vals = {phi: 0.3, th: 1.1, dphi: 0.7, dth: -0.4, ddphi: 0.25, ddth: 1.3}
    assert float(expr.subs(vals)) == pytest.approx(
        ks2_lhs(*[vals[k] for k in (phi, th, dphi, dth, ddphi, ddth)]), rel=1e-12)


def test_ks2_literal_and_corrected_differ_by_constant():
    s = np.linspace(0.5, 2.5, 7)
    literal = ks2_rhs(s, 1.0, literal=True)
    np.testing.assert_allclose(literal, 4 / (9 * np.sin(s) ** 2))
    np.testing.assert_allclose(literal - ks2_rhs(s, 1.0), 1 / 3)


def test_s3_curve_satisfies_corrected_curvature_equation():
    curve, states = synthesize_geodesic_sphere_s3(1.0, return_states=True)
    phi, theta, dphi, dtheta = states.T
    kg = np.cos(curve.s) / np.sin(curve.s) / np.sqrt(3)
    acc = np.array([sphere_accelerations(p, a, b, -k, np.sqrt(0.75))
                    for p, a, b, k in zip(phi, dphi, dtheta, kg)])
    lhs = ks2_lhs(phi, theta, dphi, dtheta, acc[:, 0], acc[:, 1])
    np.testing.assert_allclose(lhs, ks2_rhs(curve.s, 1.0), rtol=1e-9)
    assert np.min(np.abs(lhs - ks2_rhs(curve.s, 1.0, literal=True))) > 0.3


def test_s3_membership_and_drift():
    curve, states = synthesize_geodesic_sphere_s3(1.0, return_states=True)
    assert np.all(curve.points[:, 3] == 0.5)
    r2 = (curve.points[:, :3] ** 2).sum(axis=1)
    assert np.max(np.abs(r2 - 0.75)) < 1e-10
    assert speed_constraint_drift(states) < 1e-6
    speed = np.linalg.norm(first_derivative(curve.points, curve.ds), axis=1)
    np.testing.assert_allclose(speed[2:-2], 1.0, atol=1e-6)


def test_s3_initial_conditions_from_figure():
    assert (1 / np.sqrt(3)) ** 2 + 1.0 == pytest.approx(4 / 3)
    curve = synthesize_geodesic_sphere_s3(1.0, s0=np.pi / 4)
    i0 = np.argmin(np.abs(curve.s - np.pi / 4))
    np.testing.assert_allclose(curve.points[i0], [np.sqrt(3) / 2, 0, 0, 0.5], atol=1e-15)


@pytest.mark.parametrize("tau", [1.0, 2.0])
def test_s3_recomputed_torsion(tau):
    curve = synthesize_geodesic_sphere_s3(tau)
    fr = frenet_apparatus(curve)
    m = fr.interior
    np.testing.assert_allclose(fr.tau[m], tau, atol=1e-2)
    np.testing.assert_allclose(fr.kappa[m], 1 / (np.sqrt(3) * np.sin(tau * fr.s[m])), rtol=1e-3)


def test_s3_branch_and_sigma_generalization():
    for sigma in (0.5, -0.5, 0.3):
        for tau in (1.0, -1.0):
            speed = np.sqrt(1 / (1 - sigma ** 2) - 1.0)
            lo, hi = trimmed_window(tau)
            for branch in (1, -1):
                curve = synthesize_geodesic_sphere_s3(tau, s0=0.5 * (lo + hi), dphi0=speed,
                                                      sigma=sigma, branch=branch)
                assert interior_median_tau(curve) == pytest.approx(branch * tau, abs=1e-4)


def test_s3_errors():
    with pytest.raises(DomainError):
        synthesize_geodesic_sphere_s3(1.0, dphi0=0.5)
    with pytest.raises(DomainError):
        synthesize_geodesic_sphere_s3(1.0, s_range=(0.0, 1.0))
    with pytest.raises(InvalidSurfaceError):
        synthesize_geodesic_sphere_s3(1.0, sigma=1.0)
    with pytest.raises(IntegrationError):
        sphere_accelerations(0.0, 0.0, 0.0, 1.0, 1.0)


# ---------------------------------------------------------------- general surfaces

SURFACES = [
    ([1, 0, 0, 0], 1.5, -1), ([1, 0, 0, 0], -1.5, -1), ([0, 0, 0, -1], 2.0, -1),
    ([0, 0, 0, 1], -2.0, -1), ([0, 0, -1, 1], -1.0, -1), ([0, 0, 0, 1], 0.5, 1),
    ([0, 0, 0, 1], -0.5, 1),
]


@pytest.mark.parametrize("a,sigma,c", SURFACES)
def test_on_surface_torsion_sign_and_membership(a, sigma, c):
    surface = classify_surface(a, sigma, c)
    for tau in (1.0, -1.0):
        curve = synthesize_on_surface(surface, tau, ds=2e-3)
        assert np.max(np.abs(membership_residual(surface, curve.points))) < 1e-10
        assert np.max(np.abs(curve.constraint_residual())) < 1e-10
        assert interior_median_tau(curve) == pytest.approx(tau, abs=1e-4)
    mirrored = synthesize_on_surface(surface, 1.0, branch=-1, ds=2e-3)
    assert interior_median_tau(mirrored) == pytest.approx(-1.0, abs=1e-4)


def test_on_surface_rejects_totally_geodesic():
    with pytest.raises(InvalidSurfaceError):
        synthesize_on_surface(classify_surface([1, 0, 0, 0], 0, -1), 1.0)


# ---------------------------------------------------------------- oracles

def test_circle_oracle():
    curve = oracle_circle_s3(np.sqrt(3) / 2)
    S = classify_surface([0, 0, 0, 1], 0.5, 1)
    assert np.max(np.abs(membership_residual(S, curve.points))) < 1e-12
    fr = frenet_apparatus(oracle_circle_s3(1 / np.sqrt(2)))
    np.testing.assert_allclose(fr.kappa[fr.interior], 1.0, rtol=1e-6)
    great = oracle_circle_s3(1.0)
    assert np.max(np.abs(great.points[:, 3])) == 0
    with pytest.raises(DomainError):
        oracle_circle_s3(1.5)


def test_equidistant_oracle():
    curve, S = oracle_equidistant_h3(1.5)
    assert np.max(np.abs(membership_residual(S, curve.points))) < 1e-10
    fr = frenet_apparatus(curve)
    np.testing.assert_allclose(fr.kappa[fr.interior], np.hypot(S.H, 0.5), rtol=1e-6)
    assert np.max(np.abs(fr.tau[fr.interior])) < 1e-5
    with pytest.raises(InvalidSurfaceError):
        oracle_equidistant_h3(1.5, epsilon=2)


def test_helix_oracle():
    fr = frenet_apparatus(oracle_helix(1.0, 0.5))
    np.testing.assert_allclose(fr.kappa[fr.interior], 0.8, rtol=1e-6)
    np.testing.assert_allclose(fr.tau[fr.interior], 0.4, rtol=1e-5)


def test_torus_knot_oracle():
    curve = oracle_torus_knot_sphere(sigma=0.5)
    assert np.all(curve.points[:, -1] == 0.5)
    assert np.max(np.abs(curve.constraint_residual())) < 1e-14
    speed = np.linalg.norm(first_derivative(curve.points, curve.ds), axis=1)
    np.testing.assert_allclose(speed[1:-1], 1.0, atol=1e-6)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umbilical.errors import DimensionError, DomainError, InvalidSurfaceError, ProjectionError
from umbilical.spaceform import (
    SurfaceKind,
    classify_surface,
    complement,
    from_upper_halfspace,
    inner,
    is_on_hyperquadric,
    membership_residual,
    project_to_hyperquadric,
    random_isometry,
    surface_normal,
    to_upper_halfspace,
)

R2 = np.sqrt(2.0)
finite = st.floats(-3, 3, allow_nan=False)


def test_inner_signature():
    assert inner([0, 0, 0, 1], [0, 0, 0, 1], -1) == -1
    assert inner([1, 0, 0, 0], [1, 0, 0, 0], -1) == 1
    assert inner([0, 0, 1, R2], [0, 0, 1, R2], -1) == pytest.approx(-1, abs=1e-15)
    assert inner([0, 0, 0, 1], [0, 0, 0, 1], 1) == 1


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionError):
        inner([1, 0, 0], [1, 0, 0, 0], -1)


def test_inner_broadcasts():
    u = np.arange(12.0).reshape(3, 4)
    assert inner(u, u[0], 1).shape == (3,)


@given(st.lists(finite, min_size=4, max_size=4), st.lists(finite, min_size=4, max_size=4))
def test_inner_symmetric(u, v):
    assert inner(u, v, -1) == inner(v, u, -1)


def test_projection_examples():
    np.testing.assert_allclose(project_to_hyperquadric([0, 0, 0, 2], -1), [0, 0, 0, 1])
    np.testing.assert_allclose(project_to_hyperquadric([2, 0, 0, 0], 1), [1, 0, 0, 0])
    np.testing.assert_allclose(project_to_hyperquadric([0, 0, 1, R2], -1), [0, 0, 1, R2])


def test_projection_keeps_upper_sheet():
    assert project_to_hyperquadric([0.1, 0, 0, -2], -1)[-1] > 0


@pytest.mark.parametrize("p,c", [([1, 0, 0, 0], -1), ([1, 0, 0, 1], -1), ([0, 0, 0, 0], 1)])
def test_projection_rejects_wrong_sign(p, c):
    with pytest.raises(ProjectionError):
        project_to_hyperquadric(p, c)


@given(st.lists(finite, min_size=3, max_size=3))
def test_projection_idempotent(x):
    p = np.append(x, np.sqrt(1 + np.dot(x, x)) * 1.7)
    q = project_to_hyperquadric(p, -1)
    np.testing.assert_allclose(project_to_hyperquadric(q, -1), q, atol=1e-12)
    assert is_on_hyperquadric(q, -1)


def test_classify_reference_examples():
    horo = classify_surface([0, 0, 1, -1], 1, -1)
    assert horo.kind == SurfaceKind.HOROSPHERE
    assert horo.epsilon == 0 and abs(horo.H) == pytest.approx(1.0)
    # stored with the sigma = -1 convention
    assert horo.sigma == -1.0
    np.testing.assert_allclose(horo.a, [0, 0, -1, 1])

    s3 = classify_surface([0, 0, 0, 1], 0.5, 1)
    assert s3.kind == SurfaceKind.GEODESIC_SPHERE_S3
    assert s3.H == pytest.approx(1 / np.sqrt(3))
    assert s3.radius() == pytest.approx(np.sqrt(3) / 2)

    plane = classify_surface([1, 0, 0, 0], 0, -1)
    assert plane.kind == SurfaceKind.TOTALLY_GEODESIC_PLANE and plane.H == 0


@pytest.mark.parametrize("a,sigma,kind,H", [
    ([1, 0, 0, 0], 1.5, SurfaceKind.EQUIDISTANT_SURFACE, 1.5 / np.sqrt(1 + 2.25)),
    ([0, 0, 0, -1], 2.0, SurfaceKind.GEODESIC_SPHERE_H3, 2 / np.sqrt(3)),
    ([0, 0, 0, 2], -4.0, SurfaceKind.GEODESIC_SPHERE_H3, -2 / np.sqrt(3)),
    ([3, 0, 0, 0], 3.0, SurfaceKind.EQUIDISTANT_SURFACE, 1 / np.sqrt(2)),
])
def test_classify_h3(a, sigma, kind, H):
    S = classify_surface(a, sigma, -1)
    assert S.kind == kind
    assert S.H == pytest.approx(H)
    assert S.H ** 2 == pytest.approx(S.K_ext)
    assert S.K == pytest.approx(S.K_ext - 1)


def test_classify_s3_curvatures():
    S = classify_surface([0, 0, 0, 1], 0.5, 1)
    assert S.K == pytest.approx(1 / (1 - 0.25))
    assert S.H ** 2 == pytest.approx(S.K_ext)
    assert classify_surface([0, 0, 0, 1], 0, 1).kind == SurfaceKind.TOTALLY_GEODESIC_SPHERE


@pytest.mark.parametrize("a,sigma,c", [
    ([0, 0, 0, 1], 1.0, 1),         # |sigma| >= 1 in S^3
    ([0, 0, 0, 1], 0.5, -1),        # timelike, |sigma| <= 1
    ([0, 0, 1, 1], 0.0, -1),        # horosphere needs sigma != 0
    ([0, 0, 0, 0], 1.0, -1),
    ([1, 0, 0, 0], 0.5, 0),
])
def test_classify_rejects(a, sigma, c):
    with pytest.raises(InvalidSurfaceError):
        classify_surface(a, sigma, c)


def test_classify_high_dimension_kinds():
    assert classify_surface([0, 0, 0, 0, 1], 0.5, 1).kind == SurfaceKind.UMBILICAL_HYPERSURFACE
    assert (classify_surface([0, 0, 0, 0, 1], 0, 1).kind
            == SurfaceKind.TOTALLY_GEODESIC_HYPERSURFACE)


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6))
def test_classification_isometry_invariant(seed):
    M = random_isometry(-1, seed=seed)
    for a, sigma in (([1, 0, 0, 0], 1.5), ([0, 0, 0, -1], 2.0), ([0, 0, -1, 1], -1.0)):
        S = classify_surface(a, sigma, -1)
        T = classify_surface(M @ np.array(a, float), sigma, -1, null_tol=1e-9)
        assert T.kind == S.kind
        for attr in ("H", "K_ext", "K"):
            assert getattr(T, attr) == pytest.approx(getattr(S, attr), rel=1e-9)


def test_surface_normal_examples():
    horo = classify_surface([0, 0, 1, -1], 1, -1)
    p = np.array([0, 0, 0, 1.0])
    xi = surface_normal(horo, p)
    assert inner(xi, xi, -1) == pytest.approx(1)
    assert inner(xi, p, -1) == pytest.approx(0, abs=1e-14)

    great = classify_surface([0, 0, 0, 1], 0, 1)
    np.testing.assert_allclose(surface_normal(great, [1, 0, 0, 0]), [0, 0, 0, 1])

    s3 = classify_surface([0, 0, 0, 1], 0.5, 1)
    p = np.array([np.sqrt(3) / 2, 0, 0, 0.5])
    expected = (np.array([0, 0, 0, 1]) - 0.5 * p) / np.sqrt(0.75)
    np.testing.assert_allclose(surface_normal(s3, p), expected)


def test_surface_normal_off_surface():
    with pytest.raises(DomainError):
        surface_normal(classify_surface([0, 0, 0, 1], 0.5, 1), [1, 0, 0, 0])


def test_membership_residual_examples():
    horo = classify_surface([0, 0, 1, -1], 1, -1)
    assert inner([0, 0, 0, 1], [0, 0, 1, -1], -1) == 1
    assert membership_residual(horo, [0, 0, 0, 1]) == pytest.approx(0)
    assert membership_residual(classify_surface([0, 0, 0, 1], 0, 1), [1, 0, 0, 0]) == 0
    s3 = classify_surface([0, 0, 0, 1], 0.5, 1)
    assert membership_residual(s3, [1, 0, 0, 0]) == pytest.approx(-0.5)


def test_upper_halfspace_examples():
    np.testing.assert_allclose(to_upper_halfspace([0, 0, 0, 1]), [0, 0, 1])
    np.testing.assert_allclose(to_upper_halfspace([0, 0, 1, R2]), [0, 0, 1 / (1 + R2)])
    np.testing.assert_allclose(from_upper_halfspace([0, 0, 1]), [0, 0, 0, 1])
    p = from_upper_halfspace(1, 0, 1)
    np.testing.assert_allclose(p, [1, 0, -0.5, 1.5])
    assert inner(p, p, -1) == pytest.approx(-1)
    with pytest.raises(DomainError):
        to_upper_halfspace([0, 0, -2, 1])
    with pytest.raises(DomainError):
        from_upper_halfspace([0, 0, 0])


def test_horosphere_maps_to_height_one():
    x1, x2 = np.random.default_rng(0).normal(size=(2, 10))
    r2 = x1 ** 2 + x2 ** 2
    p = np.column_stack([x1, x2, -r2 / 2, 1 + r2 / 2])
    np.testing.assert_allclose(to_upper_halfspace(p)[:, 2], 1.0)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.05, 10))
def test_upper_halfspace_round_trip(x, y, z):
    q = to_upper_halfspace(from_upper_halfspace(x, y, z))
    np.testing.assert_allclose(q, [x, y, z], atol=1e-12, rtol=1e-12)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), st.sampled_from([-1, 1]))
def test_random_isometry_preserves_form(seed, c):
    M = random_isometry(c, seed=seed)
    rng = np.random.default_rng(seed)
    u, v = rng.normal(size=(2, 4))
    assert abs(inner(M @ u, M @ v, c) - inner(u, v, c)) < 1e-12 * max(1, abs(inner(u, v, c))) * 10
    if c == -1:
        p = project_to_hyperquadric(np.append(rng.normal(size=3), 5.0), -1)
        assert (M @ p)[-1] > 0


def test_random_isometry_identity_and_determinism():
    np.testing.assert_array_equal(random_isometry(-1), np.eye(4))
    np.testing.assert_array_equal(random_isometry(1, seed=3), random_isometry(1, seed=3))


def test_complement_orientation():
    b = complement(np.eye(4)[:3], 1)
    np.testing.assert_allclose(b, [0, 0, 0, 1])
    b = complement(np.eye(3)[:2], 0)
    np.testing.assert_allclose(b, [0, 0, 1])

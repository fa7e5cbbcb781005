import numpy as np
import pytest

from blevans import EigenvalueCollisionError, LayerParams, kato_continue, seed_frame
from blevans.eigensystem import endpoint_matrix
from blevans.kato import EndpointSource, MatrixFamilySource, transport


def _circle(center, radius, n):
    t = np.linspace(0.0, 2 * np.pi, n + 1)
    return center + radius * np.exp(1j * t)


@pytest.fixture
def minus_source():
    return EndpointSource(LayerParams.create(5 / 3, 0.1, 0.5), "minus")


def test_constant_family_gives_constant_vector():
    M = np.array([[2.0, 1.0, 0.0], [0.0, -1.0, 0.5], [0.3, 0.0, -2.0]])
    src = MatrixFamilySource(lambda lam: M)
    seed = seed_frame(src, 0.0)
    for fr in kato_continue(seed, [0.0, 1.0, 3 + 2j, 7 - 1j]):
        np.testing.assert_allclose(fr.vector, seed.vector, atol=1e-14)
        np.testing.assert_allclose(fr.dual, seed.dual, atol=1e-14)


def test_frames_are_eigenvectors(minus_source):
    seed = seed_frame(minus_source, 10.0)
    path = list(10 * np.exp(1j * np.linspace(0, np.pi / 2, 12)))
    for fr in kato_continue(seed, path):
        A = endpoint_matrix(fr.lam, minus_source.params, "minus").entries
        scale = np.linalg.norm(A) * np.linalg.norm(fr.vector)
        assert np.linalg.norm(A @ fr.vector - fr.mu * fr.vector) <= 1e-10 * scale
        assert np.linalg.norm(fr.left_row @ A - fr.mu * fr.left_row) <= 1e-10 * np.linalg.norm(A) * np.linalg.norm(fr.dual)


def test_monodromy_on_regular_circle(minus_source):
    path = _circle(5.0, 1.0, 40)
    seed = seed_frame(minus_source, path[0])
    frames = kato_continue(seed, path)
    assert np.linalg.norm(frames[-1].vector - seed.vector) <= 1e-6 * np.linalg.norm(seed.vector)
    assert np.linalg.norm(frames[-1].dual - seed.dual) <= 1e-6 * np.linalg.norm(seed.dual)


def test_pairing_is_conserved_along_semicircle():
    src = EndpointSource(LayerParams.create(5 / 3, 1e-3, 0.4), "plus")
    path = list(10 * np.exp(1j * np.linspace(0, np.pi / 2, 20))) + list(1j * np.linspace(10, 0.1, 20)[1:])
    seed = seed_frame(src, path[0], primary="left")
    frames = kato_continue(seed, path)
    p0 = seed.pairing
    assert max(abs(f.pairing - p0) for f in frames) <= 1e-6 * abs(p0)
    assert frames[0].left_row[1] == pytest.approx(-1.0)


def test_left_vector_annihilates_derivative(minus_source):
    seed = seed_frame(minus_source, 3.0)
    h = 1e-4
    for lam in (3.5 + 1j, 6 - 2j, 2 + 4j):
        mid = transport(seed, lam, tol=1e-12)
        up = transport(mid, lam + h, tol=1e-12)
        dn = transport(mid, lam - h, tol=1e-12)
        dv = (up.vector - dn.vector) / (2 * h)
        assert abs(mid.left_row @ dv) <= 1e-6 * np.linalg.norm(dv) * np.linalg.norm(mid.dual) + 1e-8


def test_analytic_in_lambda(minus_source):
    # transported vectors satisfy the Cauchy-Riemann equations
    seed = seed_frame(minus_source, 4.0)
    lam, h = 4.5 + 0.5j, 1e-4
    v = {d: transport(seed, lam + d, tol=1e-12).vector for d in (h, -h, 1j * h, -1j * h)}
    dx = (v[h] - v[-h]) / (2 * h)
    dy = (v[1j * h] - v[-1j * h]) / (2 * h)
    assert np.linalg.norm(dy - 1j * dx) <= 1e-6 * np.linalg.norm(dx)


def test_path_independence(minus_source):
    seed = seed_frame(minus_source, 2.0)
    a = kato_continue(seed, [2.0, 2 + 3j, 6 + 3j])[-1]
    b = kato_continue(seed, [2.0, 6.0, 6 + 3j])[-1]
    np.testing.assert_allclose(a.vector, b.vector, atol=1e-7)


def test_conjugate_frame(minus_source):
    seed = seed_frame(minus_source, 10.0)
    up = transport(seed, 3 + 4j)
    dn = transport(seed, 3 - 4j)
    np.testing.assert_allclose(up.conjugate().vector, dn.vector, atol=1e-8)


def test_collision_is_detected():
    # a Jordan block appears at lam = 0
    src = MatrixFamilySource(lambda lam: np.array([[0.0, 1.0, 0.0], [lam, 0.0, 0.0], [0.0, 0.0, -5.0]]))
    seed = seed_frame(src, 1.0)
    with pytest.raises(EigenvalueCollisionError):
        transport(seed, 0.0)

import numpy as np

from pxdg.quadrature import (
    composite_points,
    gauss_legendre,
    gauss_lobatto_nodes,
    trapezoid_rule,
)


def test_gauss_exactness():
    x, w = gauss_legendre(4)
    for deg in range(8):
        exact = (1.0 - (-1.0) ** (deg + 1)) / (deg + 1)
        assert abs(np.sum(w * x**deg) - exact) < 1e-14


def test_lobatto_nodes_include_endpoints():
    for n in (2, 3, 4, 5):
        t = gauss_lobatto_nodes(n)
        assert t[0] == -1.0 and t[-1] == 1.0
        assert np.all(np.diff(t) > 0)
    assert np.allclose(gauss_lobatto_nodes(3), [-1.0, 0.0, 1.0])
    assert np.allclose(gauss_lobatto_nodes(4), [-1.0, -1/np.sqrt(5), 1/np.sqrt(5), 1.0])


def test_trapezoid_rule():
    x, w = trapezoid_rule(4)
    assert np.allclose(x, np.linspace(-1, 1, 5))
    assert abs(np.sum(w) - 2.0) < 1e-15
    # exact for linears
    assert abs(np.sum(w * (2 * x + 1)) - 2.0) < 1e-15


def test_composite_points_cover_mesh():
    nodes = np.array([0.0, 0.25, 1.0])
    gx, gw = gauss_legendre(3)
    xq, wq = composite_points(nodes, gx, gw)
    assert xq.shape == (2, 3)
    assert abs(np.sum(wq) - 1.0) < 1e-15
    assert np.all(xq[0] < 0.25) and np.all(xq[1] > 0.25)

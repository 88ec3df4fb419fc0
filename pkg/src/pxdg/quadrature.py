"""Quadrature rules on the reference interval [-1, 1] and composite rules on meshes."""

import functools

import numpy as np

__all__ = [
    "gauss_legendre",
    "gauss_lobatto_nodes",
    "trapezoid_rule",
    "composite_points",
]


@functools.lru_cache(maxsize=None)
def gauss_legendre(n):
    """n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1."""
    if n < 1:
        raise ValueError("need at least one quadrature point")
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@functools.lru_cache(maxsize=None)
def gauss_lobatto_nodes(n):
    """n Gauss-Lobatto points on [-1, 1], endpoints included (n >= 2).

    Interior points are the roots of P'_{n-1}.
    """
    if n < 1:
        raise ValueError("need at least one node")
    if n == 1:
        return np.array([0.0])
    if n == 2:
        return np.array([-1.0, 1.0])
    # roots of the derivative of the (n-1)-th Legendre polynomial
    c = np.zeros(n)
    c[-1] = 1.0
    dc = np.polynomial.legendre.legder(c)
    interior = np.polynomial.legendre.legroots(dc)
    return np.concatenate(([-1.0], np.sort(interior), [1.0]))


@functools.lru_cache(maxsize=None)
def trapezoid_rule(m):
    """Composite trapezoid rule with m panels on [-1, 1]: m+1 equispaced points."""
    if m < 1:
        raise ValueError("need at least one panel")
    x = np.linspace(-1.0, 1.0, m + 1)
    w = np.full(m + 1, 2.0 / m)
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def reference_rule(kind, order):
    """Reference rule (points, weights) on [-1, 1] for ('gauss', g) or ('trapezoid', m)."""
    if kind == "gauss":
        return gauss_legendre(order)
    if kind == "trapezoid":
        return trapezoid_rule(order)
    raise ValueError(f"unknown quadrature kind {kind!r}")


def composite_points(nodes, ref_x, ref_w):
    """Map a reference rule onto every element of a partition.

    Returns (xq, wq) with shape (n_elements, len(ref_x)); weights carry the
    element Jacobian h/2.
    """
    nodes = np.asarray(nodes, dtype=float)
    left = nodes[:-1]
    h = np.diff(nodes)
    xq = left[:, None] + 0.5 * (ref_x[None, :] + 1.0) * h[:, None]
    wq = 0.5 * h[:, None] * ref_w[None, :]
    return xq, wq

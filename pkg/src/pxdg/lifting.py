"""The jump-lifting operator: broken functions -> degree-l broken polynomials.

Defined weakly by  integral(R(u) phi) = -sum_faces [u] {phi}  for all broken
test polynomials phi of degree l.  Because test functions live on single
elements, the operator is element-local: each element solves a small mass
system whose right-hand side reads the jumps at its own interior faces, with
the 1/2 of the average {phi} (the neighbor trace of phi vanishes).
"""

import functools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .broken import BrokenFunction, _eval_matrix, _face_weight_values, jumps, volume_samples
from .exponents import luxemburg_norm
from .quadrature import gauss_legendre

__all__ = [
    "LiftingConfig",
    "ZeroJumpsError",
    "lift",
    "lift_matrix",
    "verify_weak_identity",
    "lifting_bound_ratio",
    "degree0_closed_form",
]


class ZeroJumpsError(ValueError):
    """Ratio checks are undefined when every jump vanishes."""


@dataclass(frozen=True)
class LiftingConfig:
    """Image-space degree l >= 0."""

    degree: int = 1

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("lifting degree must be >= 0")


@functools.lru_cache(maxsize=None)
def _reference_mass_inverse(l):
    """Inverse mass matrix of the degree-l Gauss-Lobatto Lagrange basis on [-1, 1]."""
    gx, gw = gauss_legendre(l + 1)
    B = _eval_matrix(l, gx)
    M = B.T @ (gw[:, None] * B)
    return np.linalg.inv(M)


def lift_matrix(mesh, l):
    """Sparse map from the interior-face jump vector to the lifted coefficients."""
    ne = mesh.n_elements
    nf = ne - 1
    h = mesh.element_sizes
    Minv = _reference_mass_inverse(l)
    nk = l + 1
    rows, cols, vals = [], [], []
    for f in range(nf):
        # face f sits between elements f (its right face) and f+1 (its left face)
        for e, col_of_minv in ((f, nk - 1), (f + 1, 0)):
            coef = -(1.0 / h[e]) * Minv[:, col_of_minv]
            rows.extend(e * nk + np.arange(nk))
            cols.extend([f] * nk)
            vals.extend(coef)
    return sp.csr_matrix((vals, (rows, cols)), shape=(ne * nk, nf))


def lift(u, cfg=None):
    """R(u) as a broken function of degree cfg.degree (default: same degree as u)."""
    l = (cfg.degree if cfg is not None else u.degree)
    if u.mesh.n_elements < 2:
        raise ValueError("mesh has no interior face")
    K = lift_matrix(u.mesh, l)
    coeffs = (K @ jumps(u)).reshape(u.mesh.n_elements, l + 1)
    return BrokenFunction(u.mesh, l, coeffs)


def verify_weak_identity(u, R, cfg=None):
    """Max residual of the defining identity over every element-local test polynomial.

    For each basis function phi of the image space, computes
    |integral(R phi) + sum_faces [u] {phi}(x_e)| with the volume integral done by
    an independent Gauss rule (exact at this degree).
    """
    l = R.degree
    gx, gw = gauss_legendre(l + 1)
    B = _eval_matrix(l, gx)
    h = u.mesh.element_sizes
    J = jumps(u)
    ne = u.mesh.n_elements
    worst = 0.0
    for e in range(ne):
        vol = (B.T @ (gw * (B @ R.coeffs[e]))) * (0.5 * h[e])
        resid = vol.copy()
        if e >= 1:  # left face is interior; phi's one-sided average is phi(-1)/2
            resid[0] += 0.5 * J[e - 1]
        if e <= ne - 2:
            resid[-1] += 0.5 * J[e]
        worst = max(worst, float(np.max(np.abs(resid))))
    return worst


def lifting_bound_ratio(u, p, cfg=None, points_per_element=None):
    """||R(u)||_{p} divided by the weighted-jump face norm ||h^{-1/p'} [u]||_{p}."""
    J = jumps(u)
    if not np.any(J != 0.0):
        raise ZeroJumpsError("all jumps vanish; the bound ratio is undefined")
    R = lift(u, cfg)
    g = points_per_element or (R.degree + 2)
    vol, gx = volume_samples(u.mesh, g)
    num = luxemburg_norm(vol, R.values_at_ref(gx).ravel(), p)
    faces, fvals = _face_weight_values(u, p)
    den = luxemburg_norm(faces, fvals, p)
    return num / den


def degree0_closed_form(u):
    """l = 0 lifting in closed form: R|_k = -(sum of the element's face jumps)/(2 h_k)."""
    ne = u.mesh.n_elements
    h = u.mesh.element_sizes
    J = jumps(u)
    vals = np.zeros((ne, 1))
    for e in range(ne):
        s = 0.0
        if e >= 1:
            s += J[e - 1]
        if e <= ne - 2:
            s += J[e]
        vals[e, 0] = -s / (2.0 * h[e])
    return BrokenFunction(u.mesh, 0, vals)

"""Piecewise polynomial functions on a 1D mesh: traces, jumps, gradients, seminorms.

Element-local Lagrange bases sit on Gauss-Lobatto nodes, so endpoint traces are
direct coefficient reads and jumps come out exactly.  The 1D jump convention is
left-minus-right: [u](x_e) = u^-(x_e) - u^+(x_e).
"""

import functools
import io
from dataclasses import dataclass

import numpy as np

from .exponents import WeightedSampleSet, luxemburg_norm
from .meshes import refine
from .quadrature import composite_points, gauss_legendre, gauss_lobatto_nodes

__all__ = [
    "BrokenFunction",
    "interpolate",
    "elementwise_gradient",
    "jumps",
    "jump",
    "face_values",
    "broken_seminorm",
    "total_variation",
    "inverse_estimate_check",
    "embed_refine",
    "volume_samples",
    "function_samples",
    "gradient_samples",
]


@functools.lru_cache(maxsize=None)
def _basis(degree):
    """Lagrange basis data on the degree+1 Gauss-Lobatto nodes of [-1, 1]."""
    t = gauss_lobatto_nodes(degree + 1)
    n = t.size
    w = np.ones(n)
    for j in range(n):
        diff = t[j] - np.delete(t, j)
        w[j] = 1.0 / np.prod(diff)
    # differentiation matrix at the nodes
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                D[i, j] = (w[j] / w[i]) / (t[i] - t[j])
        D[i, i] = -np.sum(D[i, :])
    return t, w, D


def _eval_matrix(degree, ref_points):
    """Matrix B with B[q, j] = phi_j(ref_points[q]) for the Lagrange basis."""
    t, w, _ = _basis(degree)
    x = np.atleast_1d(np.asarray(ref_points, dtype=float))
    B = np.zeros((x.size, t.size))
    for q, xq in enumerate(x):
        diff = xq - t
        hit = np.where(np.abs(diff) < 1e-14)[0]
        if hit.size:
            B[q, hit[0]] = 1.0
        else:
            terms = w / diff
            B[q, :] = terms / np.sum(terms)
    return B


@dataclass(frozen=True)
class BrokenFunction:
    """coeffs[e, j] = value at the j-th local Gauss-Lobatto node of element e."""

    mesh: object
    degree: int
    coeffs: np.ndarray
    continuous: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        ne = self.mesh.n_elements
        if c.shape != (ne, self.degree + 1):
            raise ValueError(f"coeffs must have shape ({ne}, {self.degree + 1})")
        object.__setattr__(self, "coeffs", c)
        if self.continuous and self.degree >= 1:
            if np.any(c[:-1, -1] != c[1:, 0]):
                raise ValueError("continuous flag set but interior traces differ")

    @property
    def n_dofs(self):
        return self.coeffs.size

    def dof_vector(self):
        return self.coeffs.ravel().copy()

    @staticmethod
    def from_dofs(mesh, degree, dofs, continuous=False):
        ne = mesh.n_elements
        return BrokenFunction(mesh, degree, np.asarray(dofs, float).reshape(ne, degree + 1),
                              continuous)

    def values_at_ref(self, ref_points):
        """Values on every element at the given reference points; shape (ne, nq)."""
        B = _eval_matrix(self.degree, ref_points)
        return self.coeffs @ B.T

    def __call__(self, x, side="left"):
        return evaluate(self, x, side)

    def to_csv(self):
        t, _, _ = _basis(self.degree)
        nodes = self.mesh.nodes
        buf = io.StringIO()
        buf.write("element,local_node,x,value\n")
        for e in range(self.mesh.n_elements):
            mid = 0.5 * (nodes[e] + nodes[e + 1])
            half = 0.5 * (nodes[e + 1] - nodes[e])
            for j, tj in enumerate(t):
                buf.write(f"{e},{j},{mid + half * tj:.17g},{self.coeffs[e, j]:.17g}\n")
        return buf.getvalue()


def interpolate(mesh, degree, fn, continuous=False):
    """Nodal interpolant of a callable at the element-local Gauss-Lobatto nodes."""
    t, _, _ = _basis(degree)
    nodes = mesh.nodes
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    half = 0.5 * np.diff(nodes)
    x = mid[:, None] + half[:, None] * t[None, :]
    vals = np.asarray(fn(x), dtype=float)
    if continuous:
        vals[1:, 0] = vals[:-1, -1]
    return BrokenFunction(mesh, degree, vals, continuous)


def evaluate(u, x, side="left"):
    """Point value of the element-local polynomial; side resolves node ambiguity."""
    if isinstance(side, (int, np.integer)):
        e = int(side)
    else:
        e = u.mesh.element_of(x, side)
    nodes = u.mesh.nodes
    xi = 2.0 * (x - nodes[e]) / (nodes[e + 1] - nodes[e]) - 1.0
    B = _eval_matrix(u.degree, [xi])
    return float(B[0] @ u.coeffs[e])


def elementwise_gradient(u):
    """Derivative of the local polynomial per element; a degree k-1 broken function."""
    _, _, D = _basis(u.degree)
    h = u.mesh.element_sizes
    dvals = (u.coeffs @ D.T) * (2.0 / h)[:, None]
    if u.degree == 0:
        return BrokenFunction(u.mesh, 0, np.zeros((u.mesh.n_elements, 1)))
    newdeg = u.degree - 1
    tnew = gauss_lobatto_nodes(newdeg + 1)
    B = _eval_matrix(u.degree, tnew)  # derivative values live on the degree-k node set
    # dvals are samples of a degree k-1 polynomial at the k+1 old nodes; re-read
    # them at the new node set by interpolation through the old nodes
    return BrokenFunction(u.mesh, newdeg, dvals @ B.T)


def jumps(u):
    """[u] = u^- - u^+ at every interior face (face f sits at node f+1)."""
    return u.coeffs[:-1, -1] - u.coeffs[1:, 0]


def jump(u, face_index):
    j = jumps(u)
    if not 0 <= face_index < j.size:
        raise IndexError("not an interior face")
    return float(j[face_index])


@dataclass(frozen=True)
class FaceValues:
    xs: np.ndarray
    trace_left: np.ndarray
    trace_right: np.ndarray
    jumps: np.ndarray
    boundary_traces: tuple


def face_values(u):
    return FaceValues(
        u.mesh.interior_faces.copy(),
        u.coeffs[:-1, -1].copy(),
        u.coeffs[1:, 0].copy(),
        jumps(u),
        (float(u.coeffs[0, 0]), float(u.coeffs[-1, -1])),
    )


def volume_samples(mesh, points_per_element):
    gx, gw = gauss_legendre(points_per_element)
    xq, wq = composite_points(mesh.nodes, gx, gw)
    return WeightedSampleSet(xq.ravel(), wq.ravel()), gx


def function_samples(u, points_per_element=None):
    """(samples, values) of u itself on a composite Gauss rule."""
    g = points_per_element or (u.degree + 2)
    samples, gx = volume_samples(u.mesh, g)
    return samples, u.values_at_ref(gx).ravel()


def gradient_samples(u, points_per_element=None):
    g = points_per_element or (u.degree + 2)
    grad = elementwise_gradient(u)
    samples, gx = volume_samples(u.mesh, g)
    return samples, grad.values_at_ref(gx).ravel()


def _face_weight_values(u, p):
    """Per-face samples [u](x_e) * h(x_e)^{-1/p'(x_e)} under the counting measure."""
    xs = u.mesh.interior_faces
    hvals = u.mesh.interior_face_sizes
    expo = p.neg_inv_conjugate(xs)
    return WeightedSampleSet.counting(xs), jumps(u) * hvals**expo


def broken_seminorm(u, p, which="interior", u_D=None, points_per_element=None):
    """Luxemburg norm of the elementwise gradient plus the weighted-jump face norm.

    ``which="with_dirichlet"`` adds the boundary norm of (u - u_D) * h^{-1/p'}
    over the Dirichlet faces; u_D maps "left"/"right" to boundary data.
    """
    vol, gvals = gradient_samples(u, points_per_element)
    out = luxemburg_norm(vol, gvals, p)
    if u.mesh.n_elements > 1:
        faces, fvals = _face_weight_values(u, p)
        out += luxemburg_norm(faces, fvals, p)
    if which == "with_dirichlet":
        u_D = u_D or {}
        xs, vals = [], []
        hb = u.mesh.boundary_face_sizes
        if u.mesh.dirichlet_left:
            x = u.mesh.x_left
            vals.append((u.coeffs[0, 0] - u_D.get("left", 0.0))
                        * hb[0] ** p.neg_inv_conjugate(x))
            xs.append(x)
        if u.mesh.dirichlet_right:
            x = u.mesh.x_right
            vals.append((u.coeffs[-1, -1] - u_D.get("right", 0.0))
                        * hb[1] ** p.neg_inv_conjugate(x))
            xs.append(x)
        if xs:
            out += luxemburg_norm(WeightedSampleSet.counting(xs), np.asarray(vals), p)
    elif which != "interior":
        raise ValueError("which must be 'interior' or 'with_dirichlet'")
    return out


def total_variation(u, points_per_element=None):
    """|Du|(Omega) for the broken function: integral of |grad u| plus summed |jumps|."""
    vol, gvals = gradient_samples(u, points_per_element or (u.degree + 3))
    return float(np.sum(vol.weights * np.abs(gvals))) + float(np.sum(np.abs(jumps(u))))


def inverse_estimate_check(u, p, q, points_per_element=None):
    """Per-element ratios ||u||_p / (h^{1/p_+ - 1/q_-} ||u||_q); elements with u = 0 skipped."""
    g = points_per_element or (u.degree + 2)
    gx, gw = gauss_legendre(g)
    xq, wq = composite_points(u.mesh.nodes, gx, gw)
    vals = u.values_at_ref(gx)
    h = u.mesh.element_sizes
    ratios = []
    for e in range(u.mesh.n_elements):
        if not np.any(vals[e] != 0.0):
            continue
        s = WeightedSampleSet(xq[e], wq[e])
        pk = np.max(p(xq[e]))
        qk = np.min(q(xq[e]))
        np_norm = luxemburg_norm(s, vals[e], p)
        nq_norm = luxemburg_norm(s, vals[e], q)
        ratios.append(np_norm / (h[e] ** (1.0 / pk - 1.0 / qk) * nq_norm))
    if not ratios:
        raise ValueError("function vanishes on every element")
    return float(np.max(ratios)), ratios


def embed_refine(u):
    """The same function represented on the bisected mesh."""
    fine = refine(u.mesh)
    t, _, _ = _basis(u.degree)
    coeffs = np.empty((fine.n_elements, u.degree + 1))
    # children 2e, 2e+1 cover the left/right halves of parent e
    left = _eval_matrix(u.degree, 0.5 * (t + 1.0) - 1.0)
    right = _eval_matrix(u.degree, 0.5 * (t + 1.0))
    coeffs[0::2] = u.coeffs @ left.T
    coeffs[1::2] = u.coeffs @ right.T
    return BrokenFunction(fine, u.degree, coeffs, u.continuous)

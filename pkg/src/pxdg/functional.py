"""The penalized broken energy, its conforming counterpart, and exact DOF gradients.

The discrete energy of a broken function v with boundary data u_D is

    sum_q w_q |grad v + R(v)|^{p(x_q)}                  (volume, lifted gradient)
  + sum_q w_q |v - xi|^{q(x_q)}                         (optional fidelity)
  + sum_{Dirichlet faces} |v - u_D|^{p} h^{1-p}         (boundary penalty)
  + sum_{interior faces}  |[v]|^{p}  h^{1-p}            (jump penalty)
  + sum_{Neumann faces}   |v|^{r}                       (boundary term)

with the quadrature rule fixed by the problem setup (composite trapezoid by default,
Gauss on request).  Every term is a smooth convex function of affine maps of
the DOFs, so gradients follow from d|t|^s = s|t|^{s-2} t (zero at t = 0).
The conforming energy drops the lifting and both penalty terms; the
``normalize_by_exponent`` variant divides the volume integrands by p(x), q(x).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .broken import _basis, _eval_matrix, jumps
from .lifting import LiftingConfig, lift_matrix
from .quadrature import composite_points, reference_rule

__all__ = [
    "FunctionalSpec",
    "TermBreakdown",
    "eval_discrete",
    "grad_discrete",
    "eval_continuous",
    "grad_continuous",
    "discrete_assembly",
    "continuous_assembly",
]


@dataclass(frozen=True)
class TermBreakdown:
    gradient_term: float
    fidelity_term: float
    dirichlet_penalty: float
    interior_penalty: float
    neumann_term: float

    @property
    def total(self):
        return (self.gradient_term + self.fidelity_term + self.dirichlet_penalty
                + self.interior_penalty + self.neumann_term)

    @property
    def penalties(self):
        return self.dirichlet_penalty + self.interior_penalty

    @staticmethod
    def csv_header():
        return "grad_term,fidelity,dir_penalty,int_penalty,neumann,total"

    def csv_row(self):
        vals = (self.gradient_term, self.fidelity_term, self.dirichlet_penalty,
                self.interior_penalty, self.neumann_term, self.total)
        return ",".join(f"{v:.17g}" for v in vals)


@dataclass
class FunctionalSpec:
    """Everything needed to evaluate the energy on one mesh.

    u_D maps "left"/"right" to Dirichlet values; xi is a callable sampled at
    quadrature points when fidelity is on; quadrature is ("trapezoid", panels)
    or ("gauss", points).
    """

    mesh: object
    p: object
    q: object = None
    r: object = None
    xi: object = None
    fidelity_on: bool = False
    u_D: dict = field(default_factory=dict)
    quadrature: tuple = ("trapezoid", 1)
    lifting: LiftingConfig = None
    normalize_by_exponent: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.p.p1 <= 1.0:
            raise ValueError("the energy needs inf p > 1")
        if self.fidelity_on:
            if self.q is None or self.xi is None:
                raise ValueError("fidelity needs q and xi")
            if self.q.p1 <= 1.0:
                raise ValueError("fidelity exponent must satisfy inf q > 1")
        if self.mesh.neumann_left or self.mesh.neumann_right:
            if self.r is None:
                raise ValueError("Neumann faces need the exponent r")
            if self.r.p1 <= 1.0:
                raise ValueError("Neumann exponent must satisfy inf r > 1")
        if self.mesh.dirichlet_left and "left" not in self.u_D:
            raise ValueError("missing left Dirichlet value")
        if self.mesh.dirichlet_right and "right" not in self.u_D:
            raise ValueError("missing right Dirichlet value")
        kind, order = self.quadrature
        if kind not in ("trapezoid", "gauss") or order < 1:
            raise ValueError(f"bad quadrature {self.quadrature!r}")


def _power(t, s):
    """|t|^s with 0^s = 0 (s may vary per entry)."""
    return np.abs(t) ** s


def _dpower(t, s):
    """d/dt |t|^s = s |t|^{s-2} t, defined as 0 at t = 0 for s > 1."""
    return s * np.abs(t) ** (s - 1.0) * np.sign(t)


class _DiscreteAssembly:
    def __init__(self, spec, degree):
        mesh = spec.mesh
        self.spec = spec
        self.degree = degree
        ne = mesh.n_elements
        nk = degree + 1
        self.ndof = ne * nk
        rx, rw = reference_rule(*spec.quadrature)
        xq, wq = composite_points(mesh.nodes, rx, rw)
        self.xq = xq.ravel()
        self.wq = wq.ravel()
        self.pq = spec.p(self.xq)
        nq = rx.size

        _, _, D = _basis(degree)
        PHI = _eval_matrix(degree, rx)            # (nq, nk)
        DPHI = _eval_matrix(degree, rx) @ D       # derivative samples at rx
        h = mesh.element_sizes
        # block-diagonal volume operators
        self.Vv = sp.block_diag([PHI] * ne, format="csr")
        blocks = [DPHI * (2.0 / h[e]) for e in range(ne)]
        Gv = sp.block_diag(blocks, format="csr")

        nf = ne - 1
        rows = np.repeat(np.arange(nf), 2)
        cols = np.empty(2 * nf, dtype=int)
        cols[0::2] = np.arange(nf) * nk + (nk - 1)
        cols[1::2] = (np.arange(nf) + 1) * nk
        vals = np.tile([1.0, -1.0], nf)
        self.Jv = sp.csr_matrix((vals, (rows, cols)), shape=(nf, self.ndof))

        lcfg = spec.lifting if spec.lifting is not None else LiftingConfig(degree)
        self.lifting_degree = lcfg.degree
        K = lift_matrix(mesh, lcfg.degree)
        PHIl = _eval_matrix(lcfg.degree, rx)
        El = sp.block_diag([PHIl] * ne, format="csr")
        self.Rv = (El @ K @ self.Jv).tocsr()
        self.GRv = (Gv + self.Rv).tocsr()
        self.Gv = Gv

        self.xf = mesh.interior_faces
        self.hf = mesh.interior_face_sizes
        self.pf = spec.p(self.xf)
        self.face_scale = self.hf ** (1.0 - self.pf)

        self.bdry_dirichlet = []
        self.bdry_neumann = []
        hb = mesh.boundary_face_sizes
        ends = (("left", 0, mesh.x_left, hb[0]), ("right", self.ndof - 1, mesh.x_right, hb[1]))
        for name, dof, x, hbv in ends:
            if getattr(mesh, f"dirichlet_{name}"):
                pe = spec.p(x)
                self.bdry_dirichlet.append((dof, spec.u_D[name], pe, hbv ** (1.0 - pe)))
            else:
                self.bdry_neumann.append((dof, spec.r(x)))

        if spec.fidelity_on:
            self.qq = spec.q(self.xq)
            self.xiq = np.asarray(spec.xi(self.xq), dtype=float)
        self.vol_div = self.pq if spec.normalize_by_exponent else 1.0
        if spec.fidelity_on:
            self.fid_div = self.qq if spec.normalize_by_exponent else 1.0

    def terms(self, v):
        G = self.GRv @ v
        t1 = float(np.sum(self.wq * _power(G, self.pq) / self.vol_div))
        t2 = 0.0
        if self.spec.fidelity_on:
            F = self.Vv @ v - self.xiq
            t2 = float(np.sum(self.wq * _power(F, self.qq) / self.fid_div))
        t3 = 0.0
        for dof, ud, pe, scale in self.bdry_dirichlet:
            t3 += abs(v[dof] - ud) ** pe * scale
        J = self.Jv @ v
        t4 = float(np.sum(_power(J, self.pf) * self.face_scale))
        t5 = 0.0
        for dof, re in self.bdry_neumann:
            t5 += abs(v[dof]) ** re
        return TermBreakdown(t1, t2, float(t3), t4, float(t5))

    def value_and_grad(self, v):
        G = self.GRv @ v
        val = float(np.sum(self.wq * _power(G, self.pq) / self.vol_div))
        grad = self.GRv.T @ (self.wq * _dpower(G, self.pq) / self.vol_div)
        if self.spec.fidelity_on:
            F = self.Vv @ v - self.xiq
            val += float(np.sum(self.wq * _power(F, self.qq) / self.fid_div))
            grad += self.Vv.T @ (self.wq * _dpower(F, self.qq) / self.fid_div)
        for dof, ud, pe, scale in self.bdry_dirichlet:
            d = v[dof] - ud
            val += abs(d) ** pe * scale
            grad[dof] += _dpower(d, pe) * scale
        J = self.Jv @ v
        val += float(np.sum(_power(J, self.pf) * self.face_scale))
        grad += self.Jv.T @ (_dpower(J, self.pf) * self.face_scale)
        for dof, re in self.bdry_neumann:
            val += abs(v[dof]) ** re
            grad[dof] += _dpower(v[dof], re)
        return val, grad

    def gradient(self, v):
        return self.value_and_grad(v)[1]


class _ContinuousAssembly:
    """Same volume/Neumann terms without lifting; DOFs are the shared nodal values."""

    def __init__(self, spec, degree):
        mesh = spec.mesh
        self.spec = spec
        self.degree = degree
        ne = mesh.n_elements
        nk = degree + 1
        self.ndof_broken = ne * nk
        self.n_unique = ne * degree + 1
        rows = np.arange(self.ndof_broken)
        cols = (np.repeat(np.arange(ne), nk) * degree
                + np.tile(np.arange(nk), ne))
        self.U = sp.csr_matrix((np.ones(self.ndof_broken), (rows, cols)),
                               shape=(self.ndof_broken, self.n_unique))

        rx, rw = reference_rule(*spec.quadrature)
        xq, wq = composite_points(mesh.nodes, rx, rw)
        self.xq = xq.ravel()
        self.wq = wq.ravel()
        self.pq = spec.p(self.xq)
        t, _, D = _basis(degree)
        PHI = _eval_matrix(degree, rx)
        DPHI = PHI @ D
        h = mesh.element_sizes
        Gv = sp.block_diag([DPHI * (2.0 / h[e]) for e in range(ne)], format="csr")
        Vv = sp.block_diag([PHI] * ne, format="csr")
        self.Gu = (Gv @ self.U).tocsr()
        self.Vu = (Vv @ self.U).tocsr()

        self.bdry_neumann = []
        for name, unique_dof, x in (("left", 0, mesh.x_left),
                                    ("right", self.n_unique - 1, mesh.x_right)):
            if not getattr(mesh, f"dirichlet_{name}"):
                self.bdry_neumann.append((unique_dof, spec.r(x)))
        if spec.fidelity_on:
            self.qq = spec.q(self.xq)
            self.xiq = np.asarray(spec.xi(self.xq), dtype=float)
        self.vol_div = self.pq if spec.normalize_by_exponent else 1.0
        if spec.fidelity_on:
            self.fid_div = self.qq if spec.normalize_by_exponent else 1.0

        self.dirichlet_dofs = []
        if mesh.dirichlet_left:
            self.dirichlet_dofs.append((0, spec.u_D["left"]))
        if mesh.dirichlet_right:
            self.dirichlet_dofs.append((self.n_unique - 1, spec.u_D["right"]))

        mid = 0.5 * (mesh.nodes[:-1] + mesh.nodes[1:])
        half = 0.5 * h
        self.unique_x = np.empty(self.n_unique)
        for e in range(ne):
            self.unique_x[e * degree:e * degree + nk] = mid[e] + half[e] * t

    def terms(self, xu):
        G = self.Gu @ xu
        t1 = float(np.sum(self.wq * _power(G, self.pq) / self.vol_div))
        t2 = 0.0
        if self.spec.fidelity_on:
            F = self.Vu @ xu - self.xiq
            t2 = float(np.sum(self.wq * _power(F, self.qq) / self.fid_div))
        t5 = 0.0
        for dof, re in self.bdry_neumann:
            t5 += abs(xu[dof]) ** re
        return TermBreakdown(t1, t2, 0.0, 0.0, float(t5))

    def value_and_grad(self, xu):
        G = self.Gu @ xu
        val = float(np.sum(self.wq * _power(G, self.pq) / self.vol_div))
        grad = self.Gu.T @ (self.wq * _dpower(G, self.pq) / self.vol_div)
        if self.spec.fidelity_on:
            F = self.Vu @ xu - self.xiq
            val += float(np.sum(self.wq * _power(F, self.qq) / self.fid_div))
            grad += self.Vu.T @ (self.wq * _dpower(F, self.qq) / self.fid_div)
        for dof, re in self.bdry_neumann:
            val += abs(xu[dof]) ** re
            grad[dof] += _dpower(xu[dof], re)
        return val, grad

    def broken_to_unique(self, v):
        out = np.zeros(self.n_unique)
        counts = np.zeros(self.n_unique)
        np.add.at(out, self.U.indices, v)
        np.add.at(counts, self.U.indices, 1.0)
        return out / counts

    def unique_to_broken(self, xu):
        return self.U @ xu


def discrete_assembly(spec, degree):
    key = ("dg", degree)
    if key not in spec._cache:
        spec._cache[key] = _DiscreteAssembly(spec, degree)
    return spec._cache[key]


def continuous_assembly(spec, degree):
    key = ("cg", degree)
    if key not in spec._cache:
        spec._cache[key] = _ContinuousAssembly(spec, degree)
    return spec._cache[key]


def _check_mesh(v, spec):
    if v.mesh is not spec.mesh and not np.array_equal(v.mesh.nodes, spec.mesh.nodes):
        raise ValueError("function and spec live on different meshes")


def eval_discrete(v, spec):
    """Term-by-term value of the penalized broken energy at v."""
    _check_mesh(v, spec)
    return discrete_assembly(spec, v.degree).terms(v.dof_vector())


def grad_discrete(v, spec):
    """Exact gradient of the quadrature-discretized energy w.r.t. v's DOFs."""
    _check_mesh(v, spec)
    return discrete_assembly(spec, v.degree).gradient(v.dof_vector())


def _require_continuous(v):
    if v.mesh.n_elements > 1:
        scale = 1.0 + float(np.max(np.abs(v.coeffs)))
        if float(np.max(np.abs(jumps(v)))) > 1e-10 * scale:
            raise ValueError("conforming energy needs a continuous function")


def eval_continuous(v, spec):
    """Conforming energy (no lifting, no penalties); v must be continuous."""
    _check_mesh(v, spec)
    _require_continuous(v)
    asm = continuous_assembly(spec, v.degree)
    return asm.terms(asm.broken_to_unique(v.dof_vector()))


def grad_continuous(v, spec):
    _check_mesh(v, spec)
    _require_continuous(v)
    asm = continuous_assembly(spec, v.degree)
    return asm.value_and_grad(asm.broken_to_unique(v.dof_vector()))[1]


def coercivity_certificate(v, spec):
    """The explicit chain 2^{1-p2} * modular(grad v) <= energy + modular(R(v)).

    Returns (lhs, rhs); the inequality is exact for every v, which certifies
    that bounded energies bound the broken gradient.
    """
    _check_mesh(v, spec)
    asm = discrete_assembly(spec, v.degree)
    dof = v.dof_vector()
    gvals = asm.Gv @ dof
    rvals = asm.Rv @ dof
    grad_mod = float(np.sum(asm.wq * _power(gvals, asm.pq)))
    lift_mod = float(np.sum(asm.wq * _power(rvals, asm.pq)))
    lhs = 2.0 ** (1.0 - spec.p.p2) * grad_mod
    rhs = asm.terms(dof).total + lift_mod
    return lhs, rhs

"""1D meshes: sorted nodes, interior faces, face sizes, boundary tags, refinement."""

from dataclasses import dataclass

import numpy as np

__all__ = ["Mesh1D", "uniform_mesh", "refine", "face_neighborhoods"]

_TAGS = ("both", "left", "right", "none")


@dataclass(frozen=True)
class Mesh1D:
    """A partition x_0 < ... < x_n of an interval into n elements.

    Interior faces are the points x_1..x_{n-1}.  The face-size function assigns
    each interior face the average of its two neighbor element lengths and each
    boundary face the adjacent element length (a point has no diameter of its
    own, and this choice stays comparable to both neighbors).  Immutable;
    refinement returns a new mesh.
    """

    nodes: np.ndarray
    dirichlet: str = "both"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise ValueError("need at least 2 elements")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        if self.dirichlet not in _TAGS:
            raise ValueError(f"dirichlet tag must be one of {_TAGS}")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_elements(self):
        return self.nodes.size - 1

    @property
    def x_left(self):
        return float(self.nodes[0])

    @property
    def x_right(self):
        return float(self.nodes[-1])

    @property
    def element_sizes(self):
        return np.diff(self.nodes)

    @property
    def interior_faces(self):
        return self.nodes[1:-1]

    @property
    def interior_face_sizes(self):
        h = self.element_sizes
        return 0.5 * (h[:-1] + h[1:])

    @property
    def boundary_face_sizes(self):
        h = self.element_sizes
        return float(h[0]), float(h[-1])

    @property
    def dirichlet_left(self):
        return self.dirichlet in ("both", "left")

    @property
    def dirichlet_right(self):
        return self.dirichlet in ("both", "right")

    @property
    def neumann_left(self):
        return not self.dirichlet_left

    @property
    def neumann_right(self):
        return not self.dirichlet_right

    @property
    def max_h(self):
        return float(np.max(self.element_sizes))

    def element_of(self, x, side="left"):
        """Index of the element containing x; ties at a node resolved by side."""
        if x < self.x_left - 1e-12 or x > self.x_right + 1e-12:
            raise ValueError("point outside mesh")
        if side == "left":
            i = int(np.searchsorted(self.nodes, x, side="left")) - 1
        else:
            i = int(np.searchsorted(self.nodes, x, side="right")) - 1
        return min(max(i, 0), self.n_elements - 1)

    def to_text(self):
        coords = ",".join(f"{x:.17g}" for x in self.nodes)
        tags = {"both": "left,right", "left": "left", "right": "right", "none": ""}
        return f"nodes={coords} dirichlet={tags[self.dirichlet]}"

    @staticmethod
    def from_text(text):
        kv = dict(tok.split("=", 1) for tok in text.split())
        nodes = [float(t) for t in kv["nodes"].split(",")]
        tags = set(t for t in kv.get("dirichlet", "").split(",") if t)
        if tags == {"left", "right"}:
            tag = "both"
        elif tags == {"left"}:
            tag = "left"
        elif tags == {"right"}:
            tag = "right"
        elif not tags:
            tag = "none"
        else:
            raise ValueError(f"bad dirichlet tags {tags}")
        return Mesh1D(np.asarray(nodes), tag)


def uniform_mesh(x_left, x_right, n, dirichlet="both"):
    """Uniform partition of (x_left, x_right) into n >= 2 equal elements."""
    if n < 2:
        raise ValueError("need n >= 2 elements")
    if not x_left < x_right:
        raise ValueError("need x_left < x_right")
    return Mesh1D(np.linspace(x_left, x_right, n + 1), dirichlet)


def refine(mesh):
    """Bisect every element; boundary tags are preserved."""
    nodes = mesh.nodes
    mids = 0.5 * (nodes[:-1] + nodes[1:])
    out = np.empty(2 * mesh.n_elements + 1)
    out[0::2] = nodes
    out[1::2] = mids
    return Mesh1D(out, mesh.dirichlet)


@dataclass(frozen=True)
class Neighborhoods:
    """Element-index patches: node_patches[z] = T_z, element_patches[k] = T_kappa."""

    node_patches: tuple
    element_patches: tuple


def face_neighborhoods(mesh):
    """T_z per node (adjacent elements) and T_kappa per element (node-neighbors)."""
    ne = mesh.n_elements
    node_patches = []
    for z in range(ne + 1):
        patch = [i for i in (z - 1, z) if 0 <= i < ne]
        node_patches.append(tuple(patch))
    elem_patches = []
    for k in range(ne):
        patch = sorted({i for z in (k, k + 1) for i in node_patches[z]})
        elem_patches.append(tuple(patch))
    return Neighborhoods(tuple(node_patches), tuple(elem_patches))

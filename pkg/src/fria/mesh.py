"""Structured conforming triangulations of the unit square and L-shape.

Both builders lay a uniform grid of square cells of step ``h = 1/n`` and
split every cell along the diagonal from its lower-left to its upper-right
corner, giving counterclockwise triangles.  The L-shape is the unit square
with the closed lower-right quadrant removed; level ``L`` uses
``n = 16 * 2**L`` and therefore ``384 * 4**L`` triangles.

Edge orientation convention: the stored unit normal of an interior edge
points from the adjacent triangle with the lower index into the one with
the higher index; boundary normals point out of the domain.  This fixes
all signs of the lowest-order Raviart-Thomas degrees of freedom.
"""

from dataclasses import dataclass

import numpy as np

from .weights import DInterval

MAX_LEVEL = 8


class MeshError(ValueError):
    """Invalid mesh construction request."""


@dataclass
class TriMesh:
    """Conforming triangulation with full edge and adjacency structure.

    Parameters
    ----------
    vertices : (nv, 2) float array
    triangles : (nt, 3) int array, counterclockwise vertex triples
    edges : (ne, 2) int array, vertex pairs with the lower index first
    edge_tris : (ne, 2) int array, adjacent triangles (second entry -1 on
        boundary edges; first entry is always the lower triangle index)
    boundary_vertex : (nv,) bool array
    domain : 'square' or 'lshape'
    n : grid resolution (cells per unit length)
    level : refinement index (equals n for square meshes)

    Derived arrays (filled by the builder): per-triangle areas and P1
    basis gradients, per-edge lengths/normals, and the triangle-to-edge
    incidence ``tri_edges`` ordered so that edge ``j`` is opposite local
    vertex ``j``, with ``tri_edge_signs`` +1 where the stored edge normal
    points out of the triangle.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray
    edge_tris: np.ndarray
    boundary_vertex: np.ndarray
    domain: str
    n: int
    level: int
    areas: np.ndarray = None
    grads: np.ndarray = None
    edge_lengths: np.ndarray = None
    edge_normals: np.ndarray = None
    tri_edges: np.ndarray = None
    tri_edge_signs: np.ndarray = None

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_triangles(self):
        return len(self.triangles)

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def interior_vertices(self):
        return np.flatnonzero(~self.boundary_vertex)

    @property
    def boundary_edges(self):
        return np.flatnonzero(self.edge_tris[:, 1] < 0)

    def bounding_box(self):
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return DInterval(tuple(hi - lo))


def _triangle_geometry(vertices, triangles):
    p0 = vertices[triangles[:, 0]]
    p1 = vertices[triangles[:, 1]]
    p2 = vertices[triangles[:, 2]]
    d1 = p1 - p0
    d2 = p2 - p0
    twice_area = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    areas = 0.5 * twice_area
    # grad of basis j: rotated opposite edge over twice the signed area
    grads = np.empty((len(triangles), 3, 2))
    pts = (p0, p1, p2)
    for j in range(3):
        a = pts[(j + 1) % 3]
        b = pts[(j + 2) % 3]
        grads[:, j, 0] = a[:, 1] - b[:, 1]
        grads[:, j, 1] = b[:, 0] - a[:, 0]
    grads /= twice_area[:, None, None]
    return areas, grads


def _finalize(vertices, triangles, domain, n, level):
    vertices = np.asarray(vertices, dtype=float)
    triangles = np.asarray(triangles, dtype=np.int64)
    nt = len(triangles)

    # edge j of a triangle is opposite local vertex j
    local = triangles[:, [[1, 2], [2, 0], [0, 1]]].reshape(-1, 2)
    keys = np.sort(local, axis=1)
    edges, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(nt, 3)
    ne = len(edges)

    flat = inverse.ravel()
    counts = np.bincount(flat, minlength=ne)
    if counts.max() > 2:
        raise MeshError("edge shared by more than two triangles")
    edge_tris = np.full((ne, 2), -1, dtype=np.int64)
    # flat index k belongs to triangle k // 3; stable sort keeps triangle
    # indices ascending within each edge group, so the first adopter is
    # the lower-index triangle
    order = np.argsort(flat, kind="stable")
    tri_of = order // 3
    starts = np.searchsorted(flat[order], np.arange(ne))
    edge_tris[:, 0] = tri_of[starts]
    second = counts == 2
    edge_tris[second, 1] = tri_of[starts[second] + 1]

    areas, grads = _triangle_geometry(vertices, triangles)

    a = vertices[edges[:, 0]]
    b = vertices[edges[:, 1]]
    tangents = b - a
    edge_lengths = np.hypot(tangents[:, 0], tangents[:, 1])
    normals = np.column_stack((tangents[:, 1], -tangents[:, 0])) / edge_lengths[:, None]
    first = edge_tris[:, 0]
    centroids = vertices[triangles].mean(axis=1)
    mid = 0.5 * (a + b)
    outward = np.einsum("ij,ij->i", mid - centroids[first], normals)
    normals[outward < 0.0] *= -1.0

    signs = np.where(edge_tris[inverse, 0] == np.arange(nt)[:, None], 1.0, -1.0)

    boundary_vertex = np.zeros(len(vertices), dtype=bool)
    boundary_vertex[edges[counts == 1].ravel()] = True

    return TriMesh(
        vertices=vertices,
        triangles=triangles,
        edges=edges,
        edge_tris=edge_tris,
        boundary_vertex=boundary_vertex,
        domain=domain,
        n=n,
        level=level,
        areas=areas,
        grads=grads,
        edge_lengths=edge_lengths,
        edge_normals=normals,
        tri_edges=inverse,
        tri_edge_signs=signs,
    )


def _build_grid(n, keep_cell, domain, level):
    index = np.full((n + 1, n + 1), -1, dtype=np.int64)
    vertices = []
    for j in range(n + 1):
        for i in range(n + 1):
            adjacent = (
                (i > 0 and j > 0 and keep_cell(i - 1, j - 1))
                or (i < n and j > 0 and keep_cell(i, j - 1))
                or (i > 0 and j < n and keep_cell(i - 1, j))
                or (i < n and j < n and keep_cell(i, j))
            )
            if adjacent:
                index[i, j] = len(vertices)
                vertices.append((i / n, j / n))
    triangles = []
    for cj in range(n):
        for ci in range(n):
            if not keep_cell(ci, cj):
                continue
            a = index[ci, cj]
            b = index[ci + 1, cj]
            c = index[ci + 1, cj + 1]
            d = index[ci, cj + 1]
            triangles.append((a, b, c))
            triangles.append((a, c, d))
    return _finalize(vertices, triangles, domain, n, level)


def lshape_cell_kept(ci, cj, n):
    """Cell predicate for the unit square minus its lower-right quadrant."""
    return not (ci >= n // 2 and cj < n // 2)


def build_lshape(level):
    """Uniform L-shape triangulation with step 1/(16 * 2**level)."""
    if not 0 <= level <= MAX_LEVEL:
        raise MeshError(f"level must lie in 0..{MAX_LEVEL}, got {level}")
    n = 16 * 2**level
    return _build_grid(n, lambda ci, cj: lshape_cell_kept(ci, cj, n), "lshape", level)


def build_unit_square(n):
    """Uniform unit-square triangulation with n x n cells."""
    n = int(n)
    if n < 1:
        raise MeshError(f"n must be at least 1, got {n}")
    if n > 16 * 2**MAX_LEVEL:
        raise MeshError(f"n = {n} exceeds the refinement guard")
    return _build_grid(n, lambda ci, cj: True, "square", n)


def validate(m):
    """Check all mesh invariants; returns a list of violation messages."""
    problems = []

    p0 = m.vertices[m.triangles[:, 0]]
    p1 = m.vertices[m.triangles[:, 1]]
    p2 = m.vertices[m.triangles[:, 2]]
    signed = 0.5 * (
        (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1])
        - (p1[:, 1] - p0[:, 1]) * (p2[:, 0] - p0[:, 0])
    )
    for t in np.flatnonzero(signed <= 0.0):
        problems.append(f"triangle {t} has nonpositive signed area {signed[t]}")

    # recount adjacency from the triangle list itself
    local = m.triangles[:, [[1, 2], [2, 0], [0, 1]]].reshape(-1, 2)
    keys = np.sort(local, axis=1)
    found, counts = np.unique(keys, axis=0, return_counts=True)
    if len(found) != m.num_edges:
        problems.append(
            f"edge table has {m.num_edges} edges but triangles span {len(found)}"
        )
    bad = np.flatnonzero((counts < 1) | (counts > 2))
    for k in bad:
        problems.append(
            f"edge {tuple(found[k])} borders {counts[k]} triangles (want 1 or 2)"
        )

    euler = m.num_vertices - m.num_edges + m.num_triangles
    if euler != 1:
        problems.append(f"Euler relation violated: V - E + T = {euler}, want 1")

    for e in range(m.num_edges):
        v0, v1 = m.edges[e]
        for t in m.edge_tris[e]:
            if t < 0:
                continue
            tri = set(m.triangles[t])
            if v0 not in tri or v1 not in tri:
                problems.append(
                    f"conformity violated: edge {e} = ({v0},{v1}) not a "
                    f"vertex pair of its adjacent triangle {t}"
                )
    return problems


def dump_mesh(m):
    """Plain-text dump: $vertices / $triangles / $edges sections,
    one entity per line, 0-based indices."""
    lines = ["$vertices"]
    for x, y in m.vertices:
        lines.append(f"{x!r} {y!r}")
    lines.append("$triangles")
    for a, b, c in m.triangles:
        lines.append(f"{a} {b} {c}")
    lines.append("$edges")
    for (v0, v1), (t0, t1) in zip(m.edges, m.edge_tris):
        if t1 < 0:
            lines.append(f"{v0} {v1} {t0}")
        else:
            lines.append(f"{v0} {v1} {t0} {t1}")
    return "\n".join(lines) + "\n"

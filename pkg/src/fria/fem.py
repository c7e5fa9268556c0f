"""P1 Galerkin assembly and solve for the diffusion problem.

The stiffness integrand is constant per triangle, so assembly is exact.
Homogeneous Dirichlet conditions are imposed by eliminating boundary rows
and columns, which keeps the reduced system exactly symmetric positive
definite.  The solver is conjugate gradients with a Jacobi preconditioner
and a deterministic, fixed-order accumulation.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .weights import DiagonalWeight


class SolverError(RuntimeError):
    """Iterative solve failed (non-convergence or indefinite system)."""


@dataclass
class SparseSystem:
    """Symmetric sparse system in triplet form over the free vertices."""

    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    dim: int
    _csr: object = field(default=None, repr=False)

    def tocsr(self):
        if self._csr is None:
            self._csr = sp.coo_matrix(
                (self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim)
            ).tocsr()
        return self._csr


@dataclass
class P1Solution:
    """Nodal P1 field with its per-triangle constant gradient cache."""

    mesh: object
    values: np.ndarray
    gradients: np.ndarray
    iterations: int = 0
    residual: float = 0.0


def _weight_matrix(alpha):
    if isinstance(alpha, DiagonalWeight):
        return np.diag(alpha.entries)
    return np.asarray(alpha.matrix, dtype=float)


def nodal_gradients(mesh, values):
    """Per-triangle gradient of the P1 interpolant of nodal values."""
    return np.einsum("tj,tjx->tx", values[mesh.triangles], mesh.grads)


def assemble_stiffness(mesh, alpha):
    """Full (Neumann) stiffness with entries int_T (alpha grad phi_j) . grad phi_i."""
    a = _weight_matrix(alpha)
    if a.shape != (2, 2):
        raise ValueError("diffusion assembly needs a 2x2 weight")
    # local matrices |T| G alpha G^T, symmetrized to make the triplet
    # store exactly symmetric despite rounding
    g = mesh.grads
    local = np.einsum("tia,ab,tjb->tij", g, a, g) * mesh.areas[:, None, None]
    local = 0.5 * (local + np.transpose(local, (0, 2, 1)))
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    nv = mesh.num_vertices
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(nv, nv)).tocsr()


def assemble_mass(mesh):
    """Consistent P1 mass matrix (exact, not lumped)."""
    ref = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0
    local = ref[None, :, :] * mesh.areas[:, None, None]
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    nv = mesh.num_vertices
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(nv, nv)).tocsr()


def lumped_load(mesh, nodal_f):
    """Load vector sum_T |T|/3 f(v_i), exact for constant f."""
    out = np.zeros(mesh.num_vertices)
    np.add.at(out, mesh.triangles.ravel(), np.repeat(mesh.areas / 3.0, 3))
    return out * nodal_f


def reduce_system(matrix, mesh):
    """Eliminate boundary rows/columns; returns the triplet system."""
    free = mesh.interior_vertices
    reduced = matrix[free][:, free].tocoo()
    return SparseSystem(reduced.row, reduced.col, reduced.data, len(free))


def conjugate_gradients(system, b, rtol=1e-10, maxiter=None):
    """Jacobi-preconditioned CG to a relative residual of ``rtol``.

    Raises :class:`SolverError` on non-convergence or if a search
    direction sees nonpositive curvature (indefinite matrix).
    """
    a = system.tocsr()
    n = system.dim
    if maxiter is None:
        maxiter = 10 * n
    norm_b = np.linalg.norm(b)
    x = np.zeros(n)
    if norm_b == 0.0:
        return x, 0
    diag = a.diagonal()
    if np.any(diag <= 0.0):
        raise SolverError("system diagonal has nonpositive entries")
    r = b.copy()
    z = r / diag
    p = z.copy()
    rz = r @ z
    for k in range(1, maxiter + 1):
        ap = a @ p
        pap = p @ ap
        if pap <= 0.0:
            raise SolverError(f"nonpositive curvature at iteration {k}: system not PD")
        step = rz / pap
        x += step * p
        r -= step * ap
        if np.linalg.norm(r) <= rtol * norm_b:
            return x, k
        z = r / diag
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise SolverError(f"CG did not reach rtol={rtol} within {maxiter} iterations")


def solve_dirichlet(mesh, alpha, load, rtol=1e-10):
    """Solve the reduced Galerkin system for an arbitrary load vector."""
    stiffness = assemble_stiffness(mesh, alpha)
    system = reduce_system(stiffness, mesh)
    free = mesh.interior_vertices
    b = load[free]
    x, iters = conjugate_gradients(system, b, rtol=rtol)
    values = np.zeros(mesh.num_vertices)
    values[free] = x
    res = np.linalg.norm(b - system.tocsr() @ x)
    scale = np.linalg.norm(b)
    rel = res / scale if scale > 0.0 else 0.0
    return P1Solution(mesh, values, nodal_gradients(mesh, values), iters, rel)


def solve_diffusion(mesh, alpha, f):
    """Galerkin solution of the diffusion problem with constant source f."""
    f = float(f)
    load = lumped_load(mesh, f)
    return solve_dirichlet(mesh, alpha, load)


def energy_norm(solution, alpha):
    """Weighted energy norm sqrt(sum_T |T| g^T alpha g), exact for P1."""
    a = _weight_matrix(alpha)
    g = solution.gradients
    return float(np.sqrt(np.einsum("t,ta,ab,tb->", solution.mesh.areas, g, a, g)))

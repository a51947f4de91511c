"""Log-radial discretization and assembly of the symmetric operator pair.

The radial coordinate is s = log r.  After the substitution
u = r^{-(n-2)/2} v(s, omega) the operator -Delta - c_n |A|^2 acting on u turns,
per unit of the measure ds domega, into

    A0 - c_n P,   A0 = S_s + ((n-2)/2)^2 M + L_link,   P = diag(a^2) M,

with S_s the radial second-difference stiffness, L_link the link stiffness and
M the tensor mass.  All coefficients are independent of s, which makes the
discrete pair exactly invariant under scaling of the cone (a scaling is a pure
shift in s).  The eigenvalue weight |A|^2 and the regularized weight
(eps^2 + a^2)/r^2 likewise lose their 1/r^2 factor and become the diagonal
masses P and P + eps^2 M.

Assembly is pure; OperatorPair is immutable and safe to share across sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DegenerateWeightError
from .geometry import ConeSpec, LinkSpec

__all__ = [
    "DiscreteLink",
    "RadialGrid",
    "OperatorPair",
    "build_link_mesh",
    "radial_grid",
    "assemble_operator",
    "solve_dirichlet",
    "dump_coordinate",
]


@dataclass(frozen=True)
class DiscreteLink:
    """Discrete link: volume weights, stiffness form, sampled a^2.

    The stiffness is the quadratic form of the link gradient: f^T L f
    approximates the integral of |grad_link f|^2.  For product-of-spheres
    links the "vertices" are spectral modes and L is the diagonal of exact
    sphere-Laplacian eigenvalues.
    """

    kind: str
    dim: int
    volumes: np.ndarray
    stiffness: sp.csr_matrix
    a_sq: np.ndarray
    modes: Optional[tuple] = None   # ((k, l), eigenvalue) pairs for spheres

    @property
    def size(self) -> int:
        return len(self.volumes)


def build_link_mesh(link: LinkSpec, resolution: int = 64) -> DiscreteLink:
    """Discretize a link.

    constant -> one vertex with zero stiffness (single-mode reduction);
    circle   -> periodic second differences on `resolution` vertices;
    spheres  -> spectral modes (k, l) with k, l <= resolution and exact
                eigenvalues k(k+p-1)/r_p^2 + l(l+q-1)/r_q^2, sorted.
    """
    if link.kind == "constant":
        return DiscreteLink(
            kind="constant", dim=link.dim,
            volumes=np.array([1.0]),
            stiffness=sp.csr_matrix((1, 1)),
            a_sq=np.array([link.a_sq_const]),
        )
    if link.kind == "circle":
        if resolution < 3:
            raise ValueError("sampled links need resolution >= 3")
        n = int(resolution)
        h = 2.0 * np.pi / n
        omegas = np.arange(n) * h
        main = np.full(n, 2.0 / h)
        off = np.full(n - 1, -1.0 / h)
        stiff = sp.diags([off, main, off], [-1, 0, 1], format="lil")
        stiff[0, n - 1] = -1.0 / h
        stiff[n - 1, 0] = -1.0 / h
        return DiscreteLink(
            kind="circle", dim=1,
            volumes=np.full(n, h),
            stiffness=stiff.tocsr(),
            a_sq=link.a_sq(omegas),
        )
    if link.kind == "spheres":
        (p, rp), (q, rq) = link.factors
        kmax = max(int(resolution), 0)
        entries = []
        for k in range(kmax + 1):
            for l in range(kmax + 1):
                nu = k * (k + p - 1) / rp**2 + l * (l + q - 1) / rq**2
                entries.append(((k, l), nu))
        entries.sort(key=lambda e: (e[1], e[0]))
        nus = np.array([nu for _, nu in entries])
        m = len(entries)
        return DiscreteLink(
            kind="spheres", dim=link.dim,
            volumes=np.ones(m),
            stiffness=sp.diags(nus, format="csr"),
            a_sq=np.full(m, link.a_sq_const),
            modes=tuple(entries),
        )
    raise ValueError(f"unsupported link kind {link.kind!r}")


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid in s = log r with boundary-condition markers."""

    s: np.ndarray
    h: float
    r_in: float
    r_out: float
    bc: Tuple[str, str] = ("dirichlet", "dirichlet")

    @property
    def size(self) -> int:
        return len(self.s)

    @property
    def r(self) -> np.ndarray:
        return np.exp(self.s)


def radial_grid(r_in: float, r_out: float, N: int,
                bc: Tuple[str, str] = ("dirichlet", "dirichlet")) -> RadialGrid:
    """Uniform log-radial grid with exact endpoints; N is the point count."""
    if not (0.0 < r_in < r_out):
        raise ValueError("need 0 < r_in < r_out")
    if N < 3:
        raise ValueError("need at least 3 grid points")
    for side in bc:
        if side not in ("dirichlet", "free"):
            raise ValueError(f"unknown boundary marker {side!r}")
    s0, s1 = math.log(r_in), math.log(r_out)
    s = np.linspace(s0, s1, int(N))
    return RadialGrid(s=s, h=(s1 - s0) / (N - 1), r_in=float(r_in),
                      r_out=float(r_out), bc=tuple(bc))


def _radial_forms(grid: RadialGrid):
    """1D stiffness and trapezoid mass on the s grid (natural at free ends)."""
    n, h = grid.size, grid.h
    main = np.full(n, 2.0 / h)
    main[0] = main[-1] = 1.0 / h
    off = np.full(n - 1, -1.0 / h)
    stiff = sp.diags([off, main, off], [-1, 0, 1], format="csr")
    w = np.full(n, h)
    w[0] = w[-1] = h / 2.0
    return stiff, sp.diags(w, format="csr")


@dataclass(frozen=True)
class OperatorPair:
    """Assembled symmetric pair on the tensor grid (radial x link).

    a0 is the gradient-plus-Hardy form, p the a^2-weighted mass and m the
    plain mass, all on the full grid; nodes are ordered radial-major
    (node = i_s * n_link + j_link).  The eigenvalue equation reads
    (a0 - c_n p) v = lambda (p + eps^2 m) v on the free nodes, and a Dirichlet
    problem at a fixed lambda is (a0 - (c_n + lambda) p) v = boundary terms.
    """

    a0: sp.csr_matrix
    p: sp.csr_matrix
    m: sp.csr_matrix
    grid: RadialGrid
    link: DiscreteLink
    n: int
    lam: float

    @property
    def nodes(self) -> Tuple[int, int]:
        return self.grid.size, self.link.size

    @property
    def c_n(self) -> float:
        return (self.n - 2) / (4.0 * (self.n - 1))

    def free_mask(self) -> np.ndarray:
        """Boolean mask of nodes kept after Dirichlet elimination."""
        ns, nw = self.nodes
        keep_s = np.ones(ns, dtype=bool)
        if self.grid.bc[0] == "dirichlet":
            keep_s[0] = False
        if self.grid.bc[1] == "dirichlet":
            keep_s[-1] = False
        return np.repeat(keep_s, nw)

    def free_indices(self) -> np.ndarray:
        return np.flatnonzero(self.free_mask())

    def fixed_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.free_mask())

    def restricted(self, eps: float = 0.0):
        """(A, B) of the eigenvalue pencil on free nodes, weight p + eps^2 m."""
        idx = self.free_indices()
        a = self.a0 - self.c_n * self.p
        b = self.p + eps**2 * self.m if eps else self.p
        return a[np.ix_(idx, idx)].tocsr(), b[np.ix_(idx, idx)].tocsr()

    def dirichlet_matrix(self, lam: Optional[float] = None) -> sp.csr_matrix:
        """a0 - (c_n + lambda) p on the full grid."""
        lam = self.lam if lam is None else lam
        return (self.a0 - (self.c_n + lam) * self.p).tocsr()


def assemble_operator(cone: ConeSpec, mesh: DiscreteLink, grid: RadialGrid,
                      lam: float = 0.0, bc: Optional[Tuple[str, str]] = None
                      ) -> OperatorPair:
    """Assemble the symmetric pair for a cone on mesh x grid.

    lam is carried as metadata only: the split storage keeps a0 independent of
    lambda so one assembly serves a whole sweep.
    """
    if np.all(mesh.a_sq == 0.0):
        raise DegenerateWeightError("degenerate weight: a^2 vanishes on the grid")
    if bc is not None:
        grid = RadialGrid(s=grid.s, h=grid.h, r_in=grid.r_in, r_out=grid.r_out,
                          bc=tuple(bc))
    stiff_s, mass_s = _radial_forms(grid)
    w = sp.diags(mesh.volumes, format="csr")
    hardy = ((cone.n - 2) / 2.0) ** 2
    a0 = (sp.kron(stiff_s, w)
          + sp.kron(mass_s, mesh.stiffness)
          + hardy * sp.kron(mass_s, w)).tocsr()
    p = sp.kron(mass_s, sp.diags(mesh.a_sq) @ w).tocsr()
    m = sp.kron(mass_s, w).tocsr()
    return OperatorPair(a0=a0, p=p, m=m, grid=grid, link=mesh, n=cone.n,
                        lam=float(lam))


def boundary_values(pair: OperatorPair, inner, outer) -> np.ndarray:
    """Full-grid vector carrying Dirichlet data on eliminated nodes."""
    ns, nw = pair.nodes
    vals = np.zeros(ns * nw)
    if pair.grid.bc[0] == "dirichlet":
        vals[:nw] = np.broadcast_to(np.asarray(inner, dtype=float), (nw,))
    if pair.grid.bc[1] == "dirichlet":
        vals[-nw:] = np.broadcast_to(np.asarray(outer, dtype=float), (nw,))
    return vals


def solve_dirichlet(pair: OperatorPair, lam: float, inner, outer) -> np.ndarray:
    """Solve (a0 - (c_n+lam) p) v = 0 with Dirichlet data; returns (ns, nw).

    The data is given in the transformed variable v = r^{(n-2)/2} u; callers
    working with u must convert (see perron.py).
    """
    k = pair.dirichlet_matrix(lam)
    free = pair.free_indices()
    fixed = pair.fixed_indices()
    vals = boundary_values(pair, inner, outer)
    rhs = -k[np.ix_(free, fixed)] @ vals[fixed]
    sol = vals.copy()
    sol[free] = spla.spsolve(k[np.ix_(free, free)].tocsc(), rhs)
    ns, nw = pair.nodes
    return sol.reshape(ns, nw)


def dump_coordinate(mat, path) -> None:
    """Write a matrix in coordinate text form: `row col value` per line."""
    coo = sp.coo_matrix(mat)
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        for k in order:
            fh.write(f"{coo.row[k]} {coo.col[k]} {coo.data[k]:.17g}\n")

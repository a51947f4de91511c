"""Separated solutions on cones: link eigenvalue, radial exponents, fits.

Positive solutions on a cone separate as c(omega) * r^alpha where c > 0 solves
the link equation

    (alpha^2 + (n-2) alpha) c + (Delta_link + (c_n + lambda) a^2) c = 0,

i.e. c is the principal eigenfunction of Delta_link + (c_n + lambda) a^2 with
eigenvalue mu = -(alpha^2 + (n-2) alpha), and the exponents are the roots of

    alpha^2 + (n-2) alpha + mu = 0.

Sign convention: (Delta_link + pot) c = mu c, so a constant potential with the
constant eigenfunction gives mu = pot.  Real exponents require
mu <= ((n-2)/2)^2; the borderline value defines the critical lambda.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .geometry import ConeSpec
from .mesh import (DiscreteLink, OperatorPair, assemble_operator,
                   build_link_mesh, radial_grid)
from .spectral import smallest_eigenpair

__all__ = [
    "ExponentPair",
    "LinkSolution",
    "CwReport",
    "ExponentFit",
    "link_mu",
    "exponents",
    "critical_lambda",
    "cw_residual",
    "fit_radial_exponent",
    "theta_scan",
]


@dataclass(frozen=True)
class ExponentPair:
    """Roots of alpha^2 + (n-2) alpha + mu = 0, with discriminant status."""

    alpha_plus: Union[float, complex]
    alpha_minus: Union[float, complex]
    mu: float
    n: int
    discriminant: float

    @property
    def is_real(self) -> bool:
        return self.discriminant >= 0.0

    @property
    def gap(self):
        """alpha_plus - alpha_minus (= 2 sqrt(discriminant) when real)."""
        return self.alpha_plus - self.alpha_minus


def exponents(mu: float, n: int) -> ExponentPair:
    """Solve alpha^2 + (n-2) alpha + mu = 0; complex pair past the threshold."""
    if n < 3:
        raise ValueError("need cone dimension n >= 3")
    half = (n - 2) / 2.0
    disc = half * half - mu
    if disc >= 0.0:
        root = math.sqrt(disc)
        ap, am = -half + root, -half - root
    else:
        root = cmath.sqrt(complex(disc))
        ap, am = -half + root, -half - root
    return ExponentPair(alpha_plus=ap, alpha_minus=am, mu=float(mu), n=int(n),
                        discriminant=float(disc))


@dataclass(frozen=True)
class LinkSolution:
    """Principal link eigenfunction c > 0 with its eigenvalue."""

    c: np.ndarray           # full link vector, zero on Dirichlet vertices
    mu: float
    lam: float
    bc: str                 # "closed" or "dirichlet[k]"
    mesh: DiscreteLink


def link_mu(mesh: DiscreteLink, lam: float, bc="closed",
            n: Optional[int] = None):
    """Principal eigenvalue mu of Delta_link + (c_n + lambda) a^2.

    bc is "closed" or a boolean vertex mask selecting a Dirichlet subdomain
    (supported for vertex-based links).  Returns (mu, LinkSolution) with the
    eigenfunction positive and normalized in the link volume inner product.
    """
    n = mesh.dim + 1 if n is None else n
    c_n = (n - 2) / (4.0 * (n - 1))
    pot = (c_n + lam) * mesh.a_sq
    w = sp.diags(mesh.volumes, format="csr")
    k = (mesh.stiffness - sp.diags(pot) @ w).tocsr()
    if isinstance(bc, str) and bc == "closed":
        keep = np.arange(mesh.size)
        label = "closed"
    else:
        keep = np.flatnonzero(np.asarray(bc, dtype=bool))
        if len(keep) == 0:
            raise ValueError("empty Dirichlet domain on the link")
        if mesh.kind == "spheres":
            raise ValueError("Dirichlet subdomains need a vertex-based link")
        label = f"dirichlet[{len(keep)}]"
    ksub = k[np.ix_(keep, keep)]
    wsub = w[np.ix_(keep, keep)]
    val, vec, _ = smallest_eigenpair(ksub, wsub)
    mu = -val
    if vec.sum() < 0:
        vec = -vec
    c = np.zeros(mesh.size)
    c[keep] = vec / math.sqrt(float(vec @ (wsub @ vec)))
    return float(mu), LinkSolution(c=c, mu=float(mu), lam=float(lam), bc=label,
                                   mesh=mesh)


def critical_lambda(cone: ConeSpec, mesh: Optional[DiscreteLink] = None,
                    tol: float = 1e-12) -> float:
    """Largest lambda with real exponents: mu(lambda) = ((n-2)/2)^2.

    Closed form for constant-a links; bisection on the discriminant otherwise
    (mu is nondecreasing in lambda).
    """
    n = cone.n
    half_sq = ((n - 2) / 2.0) ** 2
    c_n = cone.conformal_constant
    if cone.link.kind in ("constant", "spheres"):
        return half_sq / cone.link.a_sq_const - c_n
    mesh = mesh or build_link_mesh(cone.link, 128)

    def disc(lam):
        mu, _ = link_mu(mesh, lam, n=n)
        return half_sq - mu

    lo, hi = -c_n + 1e-9, 1.0
    while disc(hi) > 0:
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError("no critical lambda below 1e6")
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if disc(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CwReport:
    """Residuals of a separated candidate c(omega) r^alpha."""

    link_residual: float      # algebraic identity on the link
    annulus_residual: float   # full 2D operator applied to the substitution
    alpha: float
    lam: float


def cw_residual(cone: ConeSpec, solution: LinkSolution, alpha: float,
                lam: float, *, grid_N: int = 256,
                annulus=(0.5, 2.0)) -> CwReport:
    """Residual norms of the separation identity.

    The link residual is ||(alpha^2 + (n-2) alpha) c + (Delta_link + pot) c||
    in the discrete link norm; it vanishes identically (machine precision)
    when (mu, alpha) match.  The annulus residual substitutes c(omega) r^alpha
    into the assembled operator on an annulus and decays at the discretization
    order O(h^2).
    """
    mesh = solution.mesh
    n = cone.n
    c_n = cone.conformal_constant
    quad = alpha * alpha + (n - 2) * alpha
    w = sp.diags(mesh.volumes, format="csr")
    k = (mesh.stiffness - sp.diags((c_n + lam) * mesh.a_sq) @ w).tocsr()
    c = solution.c
    resid_vec = quad * (w @ c) - (k @ c)
    norm_c = math.sqrt(float(c @ (w @ c)))
    link_residual = float(np.linalg.norm(resid_vec)) / norm_c

    grid = radial_grid(annulus[0], annulus[1], grid_N)
    pair = assemble_operator(cone, mesh, grid, lam)
    beta = alpha + (n - 2) / 2.0
    v = np.exp(beta * grid.s)[:, None] * c[None, :]
    kmat = pair.dirichlet_matrix(lam)
    resid = (kmat @ v.ravel()).reshape(pair.nodes)
    inner = resid[1:-1, :]
    # per unit mass: the matrices carry the cell measure h * vol
    scale = grid.h * float(np.linalg.norm(v[1:-1, :]))
    annulus_residual = float(np.linalg.norm(inner)) / scale
    return CwReport(link_residual=link_residual,
                    annulus_residual=annulus_residual,
                    alpha=float(alpha), lam=float(lam))


@dataclass(frozen=True)
class ExponentFit:
    alpha: float
    width: float              # standard error of the fitted slope
    window: tuple             # (r_lo, r_hi) actually used
    points: int


def fit_radial_exponent(r: np.ndarray, u: np.ndarray, window=None,
                        volumes: Optional[np.ndarray] = None) -> ExponentFit:
    """Least-squares slope of log u against log r.

    u may be 1D (radial profile) or 2D (radial x link); link columns are
    averaged in log after volume weighting.  The default window keeps the
    outer 30% of the annulus in log r, where the tame exponent dominates.
    """
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    if window is None:
        lo = math.exp(math.log(r[-1]) - 0.3 * (math.log(r[-1]) - math.log(r[0])))
        window = (lo, r[-1])
    mask = (r >= window[0]) & (r <= window[1])
    if mask.sum() < 3:
        raise ValueError("fit window holds fewer than 3 samples")
    uw = u[mask]
    if np.any(uw <= 0.0):
        raise ValueError("nonpositive samples in the fit window")
    if uw.ndim == 2:
        wgt = volumes if volumes is not None else np.ones(uw.shape[1])
        logu = (np.log(uw) @ wgt) / wgt.sum()
    else:
        logu = np.log(uw)
    logr = np.log(r[mask])
    slope, intercept = np.polyfit(logr, logu, 1)
    fitted = slope * logr + intercept
    dof = max(len(logr) - 2, 1)
    var = float(np.sum((logu - fitted) ** 2)) / dof
    denom = float(np.sum((logr - logr.mean()) ** 2))
    width = math.sqrt(var / denom) if denom > 0 else float("inf")
    return ExponentFit(alpha=float(slope), width=width,
                       window=(float(r[mask][0]), float(r[mask][-1])),
                       points=int(mask.sum()))


def theta_scan(cones: Sequence[ConeSpec], offset: float = 0.05):
    """Exponent scan at lambda = lambda_crit - offset over a cone family.

    Returns (rows, bounds): rows of (label, n, lam, mu, alpha_plus,
    alpha_minus) and per-dimension empirical bounds n -> (theta1, theta2)
    covering the observed alpha_plus values.
    """
    rows = []
    bounds = {}
    for cone in cones:
        lam = critical_lambda(cone) - offset
        mesh = build_link_mesh(cone.link, 64)
        mu, _ = link_mu(mesh, lam, n=cone.n)
        pair = exponents(mu, cone.n)
        rows.append((cone.label, cone.n, lam, mu,
                     pair.alpha_plus, pair.alpha_minus))
        t1, t2 = bounds.get(cone.n, (math.inf, -math.inf))
        bounds[cone.n] = (min(t1, pair.alpha_plus), max(t2, pair.alpha_plus))
    return rows, bounds

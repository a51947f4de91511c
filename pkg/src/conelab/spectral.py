"""Principal eigenpairs and the eigenvalue-by-exhaustion ladder.

The generalized principal eigenvalue of a cone is approached through nested
truncations K_m = {a_max/m <= r <= R0*m} with Dirichlet walls, optionally with
the regularized weight (eps^2 + a^2)/r^2.  Dirichlet eigenvalues decrease as
the truncation grows; the limit over m, then over eps -> 0, is the reported
eigenvalue.  Each eigenvector is certified strictly positive in the interior,
the discrete stand-in for the Harnack/ maximum-principle argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (ConvergenceError, DegenerateWeightError,
                     DiscretizationError)
from .geometry import ConeSpec, region_G
from .mesh import (DiscreteLink, OperatorPair, assemble_operator,
                   build_link_mesh, radial_grid)

__all__ = [
    "SpectralResult",
    "EpsWeight",
    "LambdaRun",
    "StabilityReport",
    "smallest_eigenpair",
    "principal_eigenpair",
    "eps_weight",
    "lambda_exhaustion",
    "stability_check",
]

POSITIVITY_FLOOR = 1e-12      # min interior value relative to the max
DENSE_CUTOFF = 400            # below this, use a dense solve outright


@dataclass(frozen=True)
class SpectralResult:
    """One certified eigenpair: value, grid eigenvector, diagnostics."""

    value: float
    vector: np.ndarray
    residual: float
    positivity: str               # "strictly-positive-interior" | "failed"
    domain: str
    eps: Optional[float] = None
    m: Optional[float] = None

    @property
    def positive(self) -> bool:
        return self.positivity == "strictly-positive-interior"


@dataclass(frozen=True)
class EpsWeight:
    """Regularized weight (eps^2 + a^2)/r^2; its log-radial mass is p + eps^2 m."""

    eps: float
    pair: OperatorPair

    def samples(self) -> np.ndarray:
        """Pointwise weight values on the (s, omega) grid."""
        r = self.pair.grid.r[:, None]
        return (self.eps**2 + self.pair.link.a_sq[None, :]) / r**2

    @property
    def mass(self) -> sp.csr_matrix:
        if self.eps == 0.0:
            return self.pair.p
        return (self.pair.p + self.eps**2 * self.pair.m).tocsr()


def eps_weight(pair: OperatorPair, eps: float) -> EpsWeight:
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return EpsWeight(eps=float(eps), pair=pair)


def smallest_eigenpair(a: sp.spmatrix, m_diag: sp.spmatrix, tol: float = 1e-9,
                       maxiter: int = 2000):
    """Smallest eigenpair of A v = kappa M v for symmetric A, diagonal M > 0.

    The pencil is reduced to a standard symmetric problem with M^{-1/2} and
    solved densely when small, otherwise by shift-invert Lanczos anchored
    below the spectrum with a Gershgorin bound.  Returns (kappa, v, residual)
    with the residual relative to the transformed operator scale.
    """
    d = np.asarray(m_diag.diagonal() if sp.issparse(m_diag) else np.diag(m_diag))
    if np.any(d <= 0):
        raise ValueError("weight mass must be positive definite (diagonal > 0)")
    t = 1.0 / np.sqrt(d)
    a = sp.csr_matrix(a)
    at = sp.diags(t) @ a @ sp.diags(t)
    at = (0.5 * (at + at.T)).tocsr()
    n = at.shape[0]
    if n <= DENSE_CUTOFF:
        vals, vecs = sla.eigh(at.toarray())
        kappa, w = vals[0], vecs[:, 0]
    else:
        row_abs = np.abs(at) @ np.ones(n)
        gersh = float((at.diagonal() - (row_abs - np.abs(at.diagonal()))).min())
        sigma = gersh - 0.1 * (1.0 + abs(gersh))
        try:
            vals, vecs = spla.eigsh(at, k=1, sigma=sigma, which="LM",
                                    maxiter=maxiter, tol=0)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError(
                f"eigensolver did not converge within {maxiter} iterations",
                residual=None) from exc
        kappa, w = float(vals[0]), vecs[:, 0]
    scale = max(abs(kappa), float(np.abs(at.diagonal()).max()))
    residual = float(np.linalg.norm(at @ w - kappa * w) / (scale * np.linalg.norm(w)))
    if residual > tol:
        raise ConvergenceError(
            f"eigen residual {residual:.2e} above tolerance {tol:.2e}",
            residual=residual)
    v = t * w
    return float(kappa), v, residual


def _certify(pair: OperatorPair, v_free: np.ndarray):
    """Sign-normalize and check strict interior positivity."""
    if v_free.sum() < 0:
        v_free = -v_free
    full = np.zeros(np.prod(pair.nodes))
    full[pair.free_indices()] = v_free
    ok = v_free.min() > POSITIVITY_FLOOR * v_free.max()
    return full.reshape(pair.nodes), ("strictly-positive-interior" if ok else "failed")


def principal_eigenpair(pair: OperatorPair, weight="p", tol: float = 1e-9,
                        domain: str = "", eps: Optional[float] = None,
                        m: Optional[float] = None) -> SpectralResult:
    """Smallest kappa with (a0 - c_n p) v = kappa M v on the free nodes.

    weight: "p" (curvature mass), "m" (plain mass), an EpsWeight, or any
    diagonal matrix on the full grid.
    """
    idx = pair.free_indices()
    a = (pair.a0 - pair.c_n * pair.p)[np.ix_(idx, idx)]
    if isinstance(weight, EpsWeight):
        wmat = weight.mass
        eps = weight.eps if eps is None else eps
    elif isinstance(weight, str):
        wmat = {"p": pair.p, "m": pair.m}[weight]
    else:
        wmat = sp.csr_matrix(weight)
    wr = wmat[np.ix_(idx, idx)]
    if sp.issparse(wr) and wr.diagonal().min() <= 0:
        raise DegenerateWeightError("weight mass not positive on interior nodes")
    kappa, v, residual = smallest_eigenpair(a, wr, tol=tol)
    vector, positivity = _certify(pair, v)
    return SpectralResult(value=kappa, vector=vector, residual=residual,
                          positivity=positivity, domain=domain, eps=eps, m=m)


@dataclass(frozen=True)
class LambdaRun:
    """Exhaustion ladder output: per-level results and extrapolated limits."""

    results: tuple
    lambda_eps: dict            # eps -> limit over the truncation ladder
    lambda_limit: float         # eps -> 0 limit

    def series(self, eps: float):
        return [r for r in self.results if r.eps == eps]


def _aitken_limit(values: Sequence[float]) -> float:
    """Aitken delta-squared limit of a monotone sequence; falls back to last."""
    v = list(values)
    if len(v) >= 3:
        d1, d2 = v[-1] - v[-2], v[-1] - 2 * v[-2] + v[-3]
        if abs(d2) > 1e-300:
            acc = v[-1] - d1 * d1 / d2
            # reject wild extrapolations; the ladder itself is the fallback
            if abs(acc - v[-1]) < abs(v[-1] - v[-2]):
                return float(acc)
    return float(v[-1])


def lambda_exhaustion(cone: ConeSpec, ms: Sequence[float],
                      eps_ladder: Sequence[float] = (0.0,), *,
                      N: int = 2048, R0: float = 1.0,
                      link_resolution: int = 0,
                      monotone_tol: float = 1e-10) -> LambdaRun:
    """Eigenvalue ladder over nested truncations K_m, per regularization eps.

    K_m keeps {r >= a_max/m} (the level-m sublevel region of |A|) and cuts at
    r = R0*m outside.  For each eps the per-m eigenvalues must be nonincreasing
    up to monotone_tol, else a DiscretizationError is raised.  The limit per
    eps is Aitken-extrapolated over the ladder; the eps -> 0 limit is read off
    directly when the ladder contains 0 and extrapolated linearly in eps^2
    otherwise.
    """
    ms = sorted(float(m) for m in ms)
    if len(ms) < 1:
        raise ValueError("need at least one truncation level")
    mesh = build_link_mesh(cone.link, link_resolution or 64)
    results = []
    lambda_eps = {}
    for eps in eps_ladder:
        series = []
        for m in ms:
            r_min = region_G(cone, m).r_min_max
            r_out = R0 * m
            if r_out <= r_min:
                raise ValueError(f"truncation level m={m} gives an empty domain")
            grid = radial_grid(r_min, r_out, N)
            pair = assemble_operator(cone, mesh, grid)
            res = principal_eigenpair(pair, eps_weight(pair, eps),
                                      domain=f"K_m[{r_min:.3e},{r_out:.3e}]",
                                      eps=eps, m=m)
            if series and res.value > series[-1].value + monotone_tol:
                raise DiscretizationError(
                    f"eigenvalue increased along the exhaustion at m={m}, "
                    f"eps={eps}: {series[-1].value:.12f} -> {res.value:.12f}")
            series.append(res)
            results.append(res)
        lambda_eps[eps] = _aitken_limit([r.value for r in series])
    eps_sorted = sorted(lambda_eps)
    if eps_sorted[0] == 0.0:
        limit = lambda_eps[0.0]
    elif len(eps_sorted) >= 2:
        e0, e1 = eps_sorted[0], eps_sorted[1]
        l0, l1 = lambda_eps[e0], lambda_eps[e1]
        limit = l0 - e0**2 * (l1 - l0) / (e1**2 - e0**2)
    else:
        limit = lambda_eps[eps_sorted[0]]
    return LambdaRun(results=tuple(results), lambda_eps=lambda_eps,
                     lambda_limit=float(limit))


@dataclass(frozen=True)
class StabilityReport:
    infimum: float        # variational bottom of grad-form / curvature mass
    margin: float         # min Rayleigh quotient over the random batch
    batch: int


def stability_check(cone: ConeSpec, batch: int = 16, seed: int = 0, *,
                    N: int = 2048, m: float = 1e4, R0: float = 1.0,
                    link_resolution: int = 0) -> StabilityReport:
    """Rayleigh-quotient floor of the gradient form against the curvature mass.

    The gradient form in log-radial variables is exactly a0, so the infimum is
    the principal eigenvalue of (a0, p); random interior test functions give
    an upper cloud above it.
    """
    mesh = build_link_mesh(cone.link, link_resolution or 64)
    if np.all(mesh.a_sq == 0.0):
        raise DegenerateWeightError("degenerate weight: a^2 vanishes identically")
    r_min = region_G(cone, m).r_min_max
    grid = radial_grid(r_min, R0 * m, N)
    pair = assemble_operator(cone, mesh, grid)
    idx = pair.free_indices()
    a0 = pair.a0[np.ix_(idx, idx)]
    p = pair.p[np.ix_(idx, idx)]
    kappa, _, _ = smallest_eigenpair(a0, p)
    rng = np.random.default_rng(seed)
    quotients = []
    for _ in range(batch):
        f = rng.standard_normal(len(idx))
        quotients.append(float(f @ (a0 @ f)) / float(f @ (p @ f)))
    return StabilityReport(infimum=float(kappa), margin=float(min(quotients)),
                           batch=batch)

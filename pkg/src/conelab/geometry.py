"""Analytic catalog of minimal cones and their geometric fields.

A cone of dimension n is described through its link (the cross-section on the
unit sphere) together with the curvature density a(omega): the norm of the
second fundamental form is |A|(omega, r) = a(omega)/r and, the ambient being
flat, scal(omega, r) = -a(omega)^2 / r^2 exactly.

Three link families are supported:

* ``constant``      -- closed link with constant a; radial problems reduce to
                       a single mode.
* ``circle``        -- one-dimensional link with a sampled positive a(omega).
* ``spheres``       -- product of two round spheres S^p(r_p) x S^q(r_q) with
                       the minimal-cone radii r_p = sqrt(p/(p+q)),
                       r_q = sqrt(q/(p+q)); a^2 = p + q and the link spectrum
                       is known in closed form.

Everything here is immutable and side-effect free, so catalog objects can be
shared freely across parameter sweeps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

__all__ = [
    "LinkSpec",
    "ConeSpec",
    "ProductCone",
    "RegionG",
    "constant_link",
    "circle_link",
    "lawson_link",
    "cone_over",
    "lawson_cone",
    "eval_geometry",
    "region_G",
    "catalog",
    "catalog_labels",
    "get_cone",
    "save_catalog",
    "load_catalog",
]


@dataclass(frozen=True)
class LinkSpec:
    """Geometry of a cone link: dimension, curvature density, metric data."""

    kind: str                      # "constant" | "circle" | "spheres"
    dim: int
    a_sq_const: Optional[float] = None
    a_sq_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    factors: Optional[Tuple[Tuple[int, float], ...]] = None
    samples: Optional[tuple] = None   # (omegas, a_sq values) for serialization

    def __post_init__(self):
        if self.kind not in ("constant", "circle", "spheres"):
            raise ValueError(f"unsupported link kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("link dimension must be >= 1")

    def a_sq(self, omega):
        """Curvature density a(omega)^2 >= 0, vectorized over omega."""
        if self.kind == "circle":
            return np.asarray(self.a_sq_fn(np.asarray(omega, dtype=float)), dtype=float)
        return np.full_like(np.asarray(omega, dtype=float), self.a_sq_const)

    def a_sq_bounds(self, n_probe: int = 720) -> Tuple[float, float]:
        """(min, max) of a^2, sampled for circle links, exact otherwise."""
        if self.kind == "circle":
            vals = self.a_sq(np.linspace(0.0, 2.0 * np.pi, n_probe, endpoint=False))
            return float(vals.min()), float(vals.max())
        return self.a_sq_const, self.a_sq_const

    def validate(self, n_probe: int = 720) -> None:
        """Reject links whose curvature density is negative or a.e. zero."""
        lo, hi = self.a_sq_bounds(n_probe)
        if lo < 0.0:
            raise ValueError("a_sq must be nonnegative on the link")
        if self.kind == "circle":
            vals = self.a_sq(np.linspace(0.0, 2.0 * np.pi, n_probe, endpoint=False))
            if np.mean(vals <= 0.0) > 0.5:
                raise ValueError("a_sq vanishes on a set of positive measure")


def constant_link(dim: int, a_sq: float) -> LinkSpec:
    """Closed link with constant curvature density (single-mode reduction)."""
    if a_sq < 0:
        raise ValueError("a_sq must be nonnegative")
    return LinkSpec(kind="constant", dim=dim, a_sq_const=float(a_sq))


def circle_link(a_sq_fn: Callable[[np.ndarray], np.ndarray]) -> LinkSpec:
    """One-dimensional link with sampled a(omega)^2, 2*pi periodic."""
    link = LinkSpec(kind="circle", dim=1, a_sq_fn=a_sq_fn)
    link.validate()
    return link


def lawson_link(p: int, q: int) -> LinkSpec:
    """Link of the cone over S^p(sqrt(p/(p+q))) x S^q(sqrt(q/(p+q))).

    The product is a minimal hypersurface of the unit sphere; its principal
    curvatures are sqrt(q/p) (p times) and -sqrt(p/q) (q times), hence
    a^2 = p*(q/p) + q*(p/q) = p + q, constant over the link.
    """
    if p < 1 or q < 1:
        raise ValueError("sphere factors need p, q >= 1")
    rx = math.sqrt(p / (p + q))
    ry = math.sqrt(q / (p + q))
    return LinkSpec(
        kind="spheres",
        dim=p + q,
        a_sq_const=float(p + q),
        factors=((p, rx), (q, ry)),
    )


@dataclass(frozen=True)
class ConeSpec:
    """A cone described by its link; n = link.dim + 1."""

    link: LinkSpec
    n: int
    label: str
    minimizing_flag: str = "abstract"   # metadata only

    def __post_init__(self):
        if self.n != self.link.dim + 1:
            raise ValueError("cone dimension must equal link dimension + 1")
        if self.n < 3:
            raise ValueError("cone dimension must be >= 3")
        if self.minimizing_flag not in ("known-minimizing", "abstract"):
            raise ValueError("minimizing_flag must be known-minimizing or abstract")

    @property
    def conformal_constant(self) -> float:
        """(n-2) / (4(n-1)), the zeroth-order constant of the operator."""
        return (self.n - 2) / (4.0 * (self.n - 1))


@dataclass(frozen=True)
class ProductCone:
    """Cone times a line factor; the curvature field ignores the line directions."""

    base: ConeSpec
    lines: int = 1

    def __post_init__(self):
        if self.lines < 1:
            raise ValueError("need at least one line factor")


def cone_over(link: LinkSpec, label: str, minimizing_flag: str = "abstract") -> ConeSpec:
    return ConeSpec(link=link, n=link.dim + 1, label=label, minimizing_flag=minimizing_flag)


def lawson_cone(p: int, q: int) -> ConeSpec:
    """Catalog cone over the product of spheres; minimizing for p + q >= 6."""
    flag = "known-minimizing" if p + q >= 6 else "abstract"
    return cone_over(lawson_link(p, q), label=f"C{p}{q}", minimizing_flag=flag)


def eval_geometry(cone: ConeSpec, r: float, omega=0.0):
    """(|A|, scal) at (r, omega): a(omega)/r and -a(omega)^2/r^2."""
    if r <= 0:
        raise ValueError("r must be positive")
    a_sq = cone.link.a_sq(omega)
    return np.sqrt(a_sq) / r, -a_sq / r**2


@dataclass(frozen=True)
class RegionG:
    """Sublevel region {|A| <= a}: on a cone, the set {r >= a(omega)/a}.

    Scaling is exact: the region at level tau*a is the level-a region shrunk
    by 1/tau.  For product cones the region is the base region times the line.
    """

    cone: ConeSpec
    a: float
    lines: int = 0

    def r_min(self, omega=0.0):
        """Radial lower bound per link point."""
        return np.sqrt(self.cone.link.a_sq(omega)) / self.a

    @property
    def r_min_max(self) -> float:
        """sup over the link of the radial lower bound."""
        _, hi = self.cone.link.a_sq_bounds()
        return math.sqrt(hi) / self.a

    @property
    def r_min_min(self) -> float:
        lo, _ = self.cone.link.a_sq_bounds()
        return math.sqrt(lo) / self.a


def region_G(cone, a: float) -> RegionG:
    """Region {|A| <= a}; accepts a ConeSpec or a ProductCone."""
    if a <= 0:
        raise ValueError("level a must be positive")
    if isinstance(cone, ProductCone):
        return RegionG(cone=cone.base, a=float(a), lines=cone.lines)
    return RegionG(cone=cone, a=float(a))


# ---------------------------------------------------------------------------
# catalog

def catalog(min_sum: int = 6, max_sum: int = 12) -> list:
    """Product-of-spheres cones C_{p,q} with 1 <= p <= q <= 9, p+q in range."""
    cones = []
    for total in range(min_sum, max_sum + 1):
        for p in range(1, total // 2 + 1):
            q = total - p
            if q <= 9:
                cones.append(lawson_cone(p, q))
    return cones


def catalog_labels(**kwargs) -> list:
    return [c.label for c in catalog(**kwargs)]


def get_cone(label: str) -> ConeSpec:
    for c in catalog():
        if c.label == label:
            return c
    raise KeyError(f"unknown catalog cone {label!r}")


# ---------------------------------------------------------------------------
# JSON serialization: {label, p, q | samples[], n, a_sq}

def cone_to_dict(cone: ConeSpec) -> dict:
    d = {"label": cone.label, "n": cone.n, "kind": cone.link.kind,
         "minimizing": cone.minimizing_flag}
    if cone.link.kind == "spheres":
        (p, _), (q, _) = cone.link.factors
        d["p"], d["q"] = p, q
    elif cone.link.kind == "constant":
        d["a_sq"] = cone.link.a_sq_const
    else:
        omegas = np.linspace(0.0, 2.0 * np.pi, 256, endpoint=False)
        d["samples"] = cone.link.a_sq(omegas).tolist()
    return d


def cone_from_dict(d: dict) -> ConeSpec:
    kind = d["kind"]
    if kind == "spheres":
        link = lawson_link(d["p"], d["q"])
    elif kind == "constant":
        link = constant_link(d["n"] - 1, d["a_sq"])
    elif kind == "circle":
        vals = np.asarray(d["samples"], dtype=float)
        omegas = np.linspace(0.0, 2.0 * np.pi, len(vals), endpoint=False)

        def a_sq_fn(om, _om=omegas, _v=vals):
            om = np.mod(om, 2.0 * np.pi)
            return np.interp(om, np.concatenate([_om, [2.0 * np.pi]]),
                             np.concatenate([_v, [_v[0]]]))

        link = circle_link(a_sq_fn)
    else:
        raise ValueError(f"unsupported link kind {kind!r}")
    return ConeSpec(link=link, n=d["n"], label=d["label"],
                    minimizing_flag=d.get("minimizing", "abstract"))


def save_catalog(path, cones) -> None:
    with open(path, "w") as fh:
        json.dump([cone_to_dict(c) for c in cones], fh, indent=2, sort_keys=True)


def load_catalog(path) -> list:
    with open(path) as fh:
        return [cone_from_dict(d) for d in json.load(fh)]

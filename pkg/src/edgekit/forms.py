"""Adapted coordinates, fundamental forms and the curvature parabola."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .germ import (Classification, GeometryError, SurfaceGerm, adapt, area_density, classify,
                   unit_normal)
from .jet import Jet2, Jet2Vec3

ADAPTED_TOL = 1e-9


@dataclass(frozen=True)
class AdaptedGerm:
    """A cuspidal-edge germ in coordinates where the u-axis is the singular
    curve and ``d/dv`` is null along it.

    ``coordinate_change = (p, q)`` expresses the original source coordinates
    in terms of the adapted ones.
    """

    germ: SurfaceGerm
    coordinate_change: tuple[Jet2, Jet2]
    normal: Jet2Vec3
    source: SurfaceGerm
    classification: Classification

    @property
    def f(self) -> Jet2Vec3:
        return self.germ.f

    @property
    def order(self) -> int:
        return self.germ.order

    @property
    def trusted(self) -> int:
        return self.germ.f.trusted


@dataclass(frozen=True)
class EdgeJet:
    """Derivative vectors of an adapted germ at one point of the edge."""

    fu: np.ndarray
    fv: np.ndarray
    fuv: np.ndarray
    fuu: np.ndarray
    fvv: np.ndarray
    fuuu: np.ndarray
    fuvv: np.ndarray
    fvvv: np.ndarray
    nu: np.ndarray
    lambda_v: float


def edge_jet(f: Jet2Vec3) -> EdgeJet:
    """Read the derivatives needed by the edge invariants at the origin of an
    adapted jet.  ``nu = (f_u x f_vv) / |f_u x f_vv|`` there."""
    d = f.derivative
    fu, fvv = d(1, 0), d(0, 2)
    n = np.cross(fu, fvv)
    nn = np.linalg.norm(n)
    if nn == 0.0:
        raise GeometryError("invariants undefined here")
    nu = n / nn
    return EdgeJet(fu=fu, fv=d(0, 1), fuv=d(1, 1), fuu=d(2, 0), fvv=fvv, fuuu=d(3, 0),
                   fuvv=d(1, 2), fvvv=d(0, 3), nu=nu, lambda_v=float(np.dot(n, nu)))


def jet_at(a: AdaptedGerm, u: float) -> Jet2Vec3:
    return a.f if u == 0 else a.f.shift(u, 0.0)


def to_adapted(g: SurfaceGerm) -> AdaptedGerm:
    """Precompose ``g`` so that its singular set is ``{v = 0}`` and ``d/dv`` is null."""
    cls = classify(g)
    if not cls.is_cuspidal_edge:
        raise GeometryError(f"not a cuspidal edge ({cls.kind})")
    ad = adapt(g.f)
    nu = unit_normal(ad.f)
    _check_adapted(ad.f, nu)
    adapted = SurfaceGerm.from_jets(ad.f, name=g.name)
    return AdaptedGerm(adapted, ad.change, nu, g, cls)


def _check_adapted(f: Jet2Vec3, nu: Jet2Vec3) -> None:
    lam = area_density(f, nu).restrict_u_axis()
    top = lam.trusted
    bad = [abs(c) for i, j, c in lam.terms() if i + j <= top]
    fv = f.partial("v").restrict_u_axis()
    fuv = f.partial("u").partial("v").restrict_u_axis()
    bad += [abs(c) for comp in (*fv, *fuv) for i, j, c in comp.terms() if i + j <= comp.trusted]
    scale = 1.0 + f.norm_inf()
    if max(bad) > ADAPTED_TOL * scale:
        raise GeometryError("adapted-coordinate construction failed to converge")


@dataclass(frozen=True)
class FormCoeffs:
    E: float
    F: float
    G: float
    l_nu: float
    m_nu: float
    n_nu: float
    fuu_perp: np.ndarray
    fvv_perp: np.ndarray
    nu: np.ndarray


def _perp(w: np.ndarray, t: np.ndarray) -> np.ndarray:
    return w - np.dot(w, t) * t


def fundamental_forms(a: AdaptedGerm, u: float = 0.0) -> FormCoeffs:
    """First and second fundamental forms at ``(u, 0)``.

    ``T_pM`` is spanned by ``f_u``; normal projections are ``w - <w, t> t``.
    Points away from ``u = 0`` are reached by shifting the jet, which is exact
    for polynomial germs and accurate to ``O(|u|**(N-1))`` otherwise.
    """
    return forms_of_jet(jet_at(a, u))


def forms_of_jet(f: Jet2Vec3) -> FormCoeffs:
    e = edge_jet(f)
    t = e.fu / np.linalg.norm(e.fu)
    fuu_p, fuv_p, fvv_p = _perp(e.fuu, t), _perp(e.fuv, t), _perp(e.fvv, t)
    return FormCoeffs(
        E=float(e.fu @ e.fu), F=float(e.fu @ e.fv), G=float(e.fv @ e.fv),
        l_nu=float(fuu_p @ e.nu), m_nu=float(fuv_p @ e.nu), n_nu=float(fvv_p @ e.nu),
        fuu_perp=fuu_p, fvv_perp=fvv_p, nu=e.nu,
    )


@dataclass(frozen=True)
class ParabolaDesc:
    vertex: np.ndarray
    direction: np.ndarray
    kappa_u: float


def curvature_parabola(a: AdaptedGerm, u: float = 0.0) -> ParabolaDesc:
    """The half-line ``alpha(s) = f_uu^perp / E + s**2 f_vv^perp`` and its
    distance from the surface point."""
    return parabola_of_jet(jet_at(a, u))


def parabola_of_jet(f: Jet2Vec3) -> ParabolaDesc:
    fc = forms_of_jet(f)
    fu = f.derivative(1, 0)
    vertex = fc.fuu_perp / fc.E
    direction = fc.fvv_perp
    if np.linalg.norm(direction) <= ADAPTED_TOL * (1.0 + np.linalg.norm(fu)):
        raise GeometryError("parabola degenerate (not a cuspidal edge)")
    s = 1.0
    alpha = vertex + s**2 * direction
    dalpha = 2 * s * direction
    kappa_u = abs(np.linalg.det(np.column_stack([alpha, dalpha, fu]))) / np.linalg.norm(np.cross(dalpha, fu))
    return ParabolaDesc(vertex=vertex, direction=direction, kappa_u=float(kappa_u))


def umbilic_from_second_form(a: AdaptedGerm, u: float = 0.0) -> float:
    """``|II_nu(X, X)| / I(X, X)`` with ``X = d/du``."""
    fc = fundamental_forms(a, u)
    return abs(fc.l_nu) / fc.E

"""
Normal form of cuspidal edges
=============================

Every cuspidal edge can be brought, by an orientation-preserving source
diffeomorphism and a rotation of R^3, to

    (u, a20 u^2/2 + a30 u^3/6 + v^2/2,
        b20 u^2/2 + b30 u^3/6 + b12 u v^2/2 + b03 v^3/6) + h(u, v)

with ``b03 != 0``, ``b20 >= 0`` and a tail ``h`` of order at least four
whose first component vanishes.  :func:`reduce` carries out the
reduction on jets and records each step so it can be replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .germ import (GeometryError, SurfaceGerm, _newton_curve, _scale, classify, curve_function,
                   identity_change, linear_change, normal_at_origin, null_alignment)
from .jet import Jet2, Jet2Vec3, JetError, compose, factor_out, sqrt_jet

COEFF_TOL = 1e-9
EQUIV_TOL = 1e-7
MIN_ORDER = 6
NAMES = ("a20", "a30", "b20", "b30", "b12", "b03")

# (u, v) -> (-u, -v) together with (x, y, z) -> (-x, y, -z)
_FLIP_TARGET = np.diag([-1.0, 1.0, -1.0])


@dataclass(frozen=True)
class NormalFormCoefficients:
    a20: float
    a30: float
    b20: float
    b30: float
    b12: float
    b03: float
    jet: Jet2Vec3 = field(repr=False)
    residual_jets: Jet2Vec3 = field(repr=False)
    transform_log: tuple = field(default=(), repr=False)
    trusted_degree: int = 0

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, n) for n in NAMES)

    def as_dict(self) -> dict:
        return {n: float(getattr(self, n)) for n in NAMES}

    def tail_terms(self) -> list[dict]:
        """Non-zero terms of ``h`` flagged by whether they lie within the
        trusted degree."""
        out = []
        for comp, jet in zip("xyz", self.residual_jets):
            for i, j, c in jet.terms():
                if abs(c) > 1e-14:
                    out.append({"component": comp, "u": i, "v": j, "coeff": float(c),
                                "trusted": i + j <= self.trusted_degree})
        return out

    def log_as_dicts(self) -> list[dict]:
        out = []
        for entry in self.transform_log:
            if entry[0] == "target":
                out.append({"kind": "target", "rotation": np.asarray(entry[1]).tolist()})
            else:
                out.append({"kind": "source",
                            "u": [[i, j, float(c)] for i, j, c in entry[1].terms() if abs(c) > 1e-14],
                            "v": [[i, j, float(c)] for i, j, c in entry[2].terms() if abs(c) > 1e-14]})
        return out


def normal_form_jet(coeffs: Sequence[float], order: int = MIN_ORDER) -> Jet2Vec3:
    """Polynomial normal form with ``h = 0``; ``coeffs`` in the order
    ``(a20, a30, b20, b30, b12, b03)``."""
    a20, a30, b20, b30, b12, b03 = (float(c) for c in coeffs)
    x = Jet2.var("u", order)
    y = Jet2.from_terms({(2, 0): a20 / 2, (3, 0): a30 / 6, (0, 2): 0.5}, order)
    z = Jet2.from_terms({(2, 0): b20 / 2, (3, 0): b30 / 6, (1, 2): b12 / 2, (0, 3): b03 / 6}, order)
    return Jet2Vec3(x, y, z)


def realize(values: Sequence[float], order: int = MIN_ORDER, name: str = "") -> SurfaceGerm:
    """Normal-form germ with prescribed invariants.

    ``values = (kappa_s, a30, kappa_n, kappa_i, kappa_t, kappa_c)``; these
    become ``a20, a30, b20, b30, b12, b03`` respectively.
    """
    ks, a30, kn, ki, kt, kc = (float(x) for x in values)
    if kc == 0.0:
        raise GeometryError("not a cuspidal edge")
    if kn < 0.0:
        raise GeometryError("normal form requires b20 >= 0")
    return SurfaceGerm.from_jets(normal_form_jet((ks, a30, kn, ki, kt, kc), order), name=name)


def realize_coefficients(coeffs: Sequence[float], order: int = MIN_ORDER, name: str = "") -> SurfaceGerm:
    a20, a30, b20, b30, b12, b03 = coeffs
    return realize((a20, a30, b20, b30, b12, b03), order, name)


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

def invert_source_map(p: Jet2, q: Jet2) -> tuple[Jet2, Jet2]:
    """Jet of the inverse of the origin-fixing map ``(p, q)``.

    Fixed-point iteration ``x = A^{-1}(y - N(x))`` with ``A`` the linear part
    and ``N`` the rest; each pass fixes one more degree.
    """
    order = p.order
    a = np.array([[p.coeff(1, 0), p.coeff(0, 1)], [q.coeff(1, 0), q.coeff(0, 1)]])
    if abs(np.linalg.det(a)) <= COEFF_TOL * (1.0 + np.max(np.abs(a))) ** 2:
        raise GeometryError("substitution not invertible")
    ainv = np.linalg.inv(a)
    u, v = identity_change(order)
    lin_p = u * a[0, 0] + v * a[0, 1]
    lin_q = u * a[1, 0] + v * a[1, 1]
    np_, nq = p - lin_p, q - lin_q
    x, y = u * ainv[0, 0] + v * ainv[0, 1], u * ainv[1, 0] + v * ainv[1, 1]
    for _ in range(order):
        rp, rq = u - compose(np_, x, y), v - compose(nq, x, y)
        x, y = rp * ainv[0, 0] + rq * ainv[0, 1], rp * ainv[1, 0] + rq * ainv[1, 1]
    return x, y


def _rotation_to_x(t: np.ndarray) -> np.ndarray:
    """Proper rotation sending the unit vector ``t`` to ``e1``."""
    t = t / np.linalg.norm(t)
    helper = np.eye(3)[int(np.argmin(np.abs(t)))]
    n1 = np.cross(t, helper)
    n1 /= np.linalg.norm(n1)
    n2 = np.cross(t, n1)
    return np.vstack([t, n1, n2])


class _Pipeline:
    def __init__(self, f: Jet2Vec3):
        self.f = f
        self.log: list = []

    def source(self, p: Jet2, q: Jet2) -> None:
        self.f = self.f.compose(p, q)
        self.log.append(("source", p, q))

    def target(self, rot: np.ndarray) -> None:
        self.f = self.f.rotate(rot)
        self.log.append(("target", np.asarray(rot, dtype=float)))


def _v_coefficient(f2: Jet2) -> Jet2:
    """``b`` with ``f2 = f2(u, 0) + v^2 b(u, v)``."""
    rest = f2 - f2.restrict_u_axis()
    return factor_out(rest, "v", 2)


def reduce(g: SurfaceGerm | Jet2Vec3) -> NormalFormCoefficients:
    """Normal-form coefficients of a cuspidal-edge germ."""
    f = g.f if isinstance(g, SurfaceGerm) else g
    if f.order < MIN_ORDER:
        raise GeometryError("increase jet order")
    cls = classify(f)
    if not cls.is_cuspidal_edge:
        raise GeometryError(f"not a cuspidal edge ({cls.kind})")
    order = f.order
    run = _Pipeline(f)
    u, v = identity_change(order)

    # kernel of df(0) onto the v-axis, then f_u(0) onto the x-axis
    run.source(*linear_change(null_alignment(run.f), order))
    run.target(_rotation_to_x(run.f.derivative(1, 0)))

    # first component becomes the coordinate u
    run.source(*invert_source_map(run.f.x, v))

    # singular curve onto v = 0
    nu0, _ = normal_at_origin(run.f)
    curve = _newton_curve(curve_function(run.f, nu0))
    run.source(u, v + curve)

    # rotate about the x-axis so that the v^2 coefficient points along +y
    try:
        b2 = _v_coefficient(run.f.y)
        b3 = _v_coefficient(run.f.z)
    except JetError as exc:
        raise GeometryError("null direction not adapted after straightening") from exc
    theta = math.atan2(-b3.value, b2.value)
    c, s = math.cos(theta), math.sin(theta)
    run.target(np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]))

    # v -> v sqrt(2 b2(u, v)) so that the second component is a(u) + v^2/2
    b2 = _v_coefficient(run.f.y)
    try:
        scale_v = v * sqrt_jet(b2 * 2.0)
    except JetError as exc:
        raise GeometryError("reduction degenerate: second-order null term vanishes") from exc
    run.source(*invert_source_map(u, scale_v))

    tol = COEFF_TOL * _scale(run.f)
    coeffs = _extract(run.f)
    if abs(coeffs[5]) <= tol:
        raise GeometryError("reduction degenerate: dlambda(eta) is approximately 0")
    if coeffs[2] < -tol or (abs(coeffs[2]) <= tol and coeffs[1] < -tol):
        run.source(-u, -v)
        run.target(_FLIP_TARGET)
        coeffs = _extract(run.f)

    coeffs = tuple(0.0 if abs(c) <= 1e-14 * _scale(run.f) else c for c in coeffs)
    nf = normal_form_jet(coeffs, order)
    # the jet bookkeeping is conservative; order-3 data is exact to roundoff
    trusted = order - 2
    return NormalFormCoefficients(*coeffs, jet=run.f, residual_jets=run.f - nf,
                                  transform_log=tuple(run.log), trusted_degree=trusted)


def _extract(f: Jet2Vec3) -> tuple[float, ...]:
    y, z = f.y, f.z
    return (2 * y.coeff(2, 0), 6 * y.coeff(3, 0), 2 * z.coeff(2, 0), 6 * z.coeff(3, 0),
            2 * z.coeff(1, 2), 6 * z.coeff(0, 3))


def replay(g: SurfaceGerm | Jet2Vec3, log: Sequence) -> Jet2Vec3:
    """Apply a transform log to ``g``'s jet."""
    f = g.f if isinstance(g, SurfaceGerm) else g
    for entry in log:
        if entry[0] == "source":
            f = f.compose(entry[1], entry[2])
        elif entry[0] == "target":
            f = f.rotate(entry[1])
        else:
            raise ValueError(f"unknown transform {entry[0]!r}")
    return f


# ---------------------------------------------------------------------------
# order-3 equivalence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    differences: tuple[float, ...]
    by_invariants: bool
    invariant_differences: dict

    def as_dict(self) -> dict:
        return {"equivalent": self.equivalent,
                "differences": dict(zip(NAMES, map(float, self.differences))),
                "by_invariants": self.by_invariants,
                "invariant_differences": self.invariant_differences}


def _invariant_profile(g: SurfaceGerm) -> dict:
    from .forms import to_adapted
    from .invariants import edge_derivatives, invariants_at

    a = to_adapted(g)
    s = invariants_at(a, 0.0)
    ks1, kn1, _ = edge_derivatives(a)
    return {"kappa_s": s.kappa_s, "kappa_n": s.kappa_n, "kappa_c": s.kappa_c,
            "kappa_t": s.kappa_t, "kappa_s_prime": ks1, "kappa_n_prime": kn1}


def equivalent_to_order3(f: SurfaceGerm, g: SurfaceGerm, tol: float = EQUIV_TOL,
                         derivative_tol: float = 1e-6) -> Equivalence:
    """Whether ``f`` and ``g`` agree up to order three after a source
    diffeomorphism and an isometry.

    Decided by comparing normal-form coefficients; the comparison of
    ``kappa_s, kappa_n, kappa_c, kappa_t, kappa_s', kappa_n'`` is reported
    alongside (derivatives are numeric, hence the looser tolerance).
    """
    cf, cg = reduce(f), reduce(g)
    diff = tuple(x - y for x, y in zip(cf.as_tuple(), cg.as_tuple()))
    pf, pg = _invariant_profile(f), _invariant_profile(g)
    idiff = {k: float(pf[k] - pg[k]) for k in pf}
    by_inv = all(abs(d) <= (derivative_tol if k.endswith("prime") else tol) for k, d in idiff.items())
    return Equivalence(all(abs(d) <= tol for d in diff), diff, by_inv, idiff)

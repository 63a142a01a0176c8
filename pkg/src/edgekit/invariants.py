"""
Edge invariants of cuspidal edges
=================================

Values at a point ``(u, 0)`` of an adapted germ:

* ``kappa_s``  singular curvature (limiting geodesic curvature of the edge)
* ``kappa_nu`` limiting normal curvature for the normal ``(f_u x f_vv)/|.|``
* ``kappa_n``  its absolute value, ``kappa_u`` the umbilic curvature
* ``kappa_c``  cuspidal curvature, ``kappa_t`` cusp-directional torsion,
  ``kappa_i`` edge inflectional curvature
* ``kappa``, ``tau`` Frenet curvature and torsion of the edge curve.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .forms import AdaptedGerm, edge_jet, jet_at, parabola_of_jet
from .germ import GeometryError, area_density
from .jet import Jet2, Jet2Vec3

CURVATURE_TOL = 1e-9
STENCIL_STEP = 1e-3


@dataclass(frozen=True)
class InvariantSet:
    kappa_s: float
    kappa_nu: float
    kappa_n: float
    kappa_u: float
    kappa_c: float
    kappa_t: float
    kappa_i: float
    kappa: float
    tau: Optional[float]
    kappa_s_prime: Optional[float] = None
    kappa_n_prime: Optional[float] = None
    kappa_prime: Optional[float] = None

    def as_dict(self) -> dict:
        return {k: ("undefined" if v is None else float(v)) for k, v in asdict(self).items()}

    def with_derivatives(self, ks: float, kn: float, k: Optional[float]) -> "InvariantSet":
        d = asdict(self)
        d.update(kappa_s_prime=ks, kappa_n_prime=kn, kappa_prime=k)
        return InvariantSet(**d)


def _det(a, b, c) -> float:
    return float(np.dot(a, np.cross(b, c)))


def invariants_of_jet(f: Jet2Vec3) -> InvariantSet:
    """All invariants at the origin of an adapted jet."""
    e = edge_jet(f)
    fu, fuu, fuuu, fvv, fvvv, fuvv, nu = e.fu, e.fuu, e.fuuu, e.fvv, e.fvvv, e.fuvv, e.nu
    speed = float(np.linalg.norm(fu))
    E = speed**2
    cross_uvv = float(np.linalg.norm(np.cross(fu, fvv)))
    scale = 1.0 + max(float(np.max(np.abs(w))) for w in (fu, fuu, fvv, fvvv))
    det_c = _det(fu, fvv, fvvv)
    if cross_uvv <= CURVATURE_TOL * scale or abs(det_c) <= CURVATURE_TOL * scale**3:
        raise GeometryError("invariants undefined here")
    sgn = 1.0 if e.lambda_v > 0 else -1.0

    det_n = _det(fu, fvv, fuu)
    kappa_s = sgn * _det(fu, fuu, nu) / speed**3
    kappa_nu = float(np.dot(fuu, nu)) / E
    kappa_n = abs(det_n) / (E * cross_uvv)
    kappa_c = speed**1.5 * det_c / cross_uvv**2.5
    kappa_t = (_det(fu, fvv, fuvv) / cross_uvv**2
               - det_n * float(np.dot(fu, fvv)) / (E * cross_uvv**2))
    kappa_i = (_det(fu, fvv, fuuu) / (speed**3 * cross_uvv)
               - 3 * float(np.dot(fu, fuu)) * det_n / (speed**5 * cross_uvv))

    b = np.cross(fu, fuu)
    bn = float(np.linalg.norm(b))
    kappa = bn / speed**3
    tau = _det(fu, fuu, fuuu) / bn**2 if kappa > CURVATURE_TOL else None
    kappa_u = parabola_of_jet(f).kappa_u
    return InvariantSet(kappa_s, kappa_nu, kappa_n, kappa_u, kappa_c, kappa_t, kappa_i, kappa, tau)


def invariants_at(a: AdaptedGerm, u: float = 0.0) -> InvariantSet:
    """Invariants at the adapted-coordinate point ``(u, 0)``."""
    return invariants_of_jet(jet_at(a, u))


def kappa_t_simple(f: Jet2Vec3) -> float:
    """Cusp-directional torsion without the ``<f_u, f_vv>`` correction; agrees
    with the full value when ``f_u`` and ``f_vv`` are orthogonal."""
    e = edge_jet(f)
    return _det(e.fu, e.fvv, e.fuvv) / float(np.linalg.norm(np.cross(e.fu, e.fvv))) ** 2


# ---------------------------------------------------------------------------
# invariants through an arbitrary adapted pair of vector fields
# ---------------------------------------------------------------------------

def _apply_field(field: tuple[Jet2, Jet2], f):
    p, q = field
    if isinstance(f, Jet2):
        return p * f.partial("u") + q * f.partial("v")
    return f.partial("u") * p + f.partial("v") * q


def frame_invariants(a: AdaptedGerm, xi: tuple[Jet2, Jet2], eta: tuple[Jet2, Jet2]) -> dict:
    """Invariants at the origin from the vector-field definitions.

    ``xi`` and ``eta`` are vector fields ``p d/du + q d/dv`` (given as jet
    pairs) forming an adapted pair: ``xi`` tangent to the edge and ``eta``
    null along it, positively oriented.
    """
    f = a.f
    xf = _apply_field(xi, f)
    xxf = _apply_field(xi, xf)
    xxxf = _apply_field(xi, xxf)
    ef = _apply_field(eta, f)
    eef = _apply_field(eta, ef)
    eeef = _apply_field(eta, eef)
    xeef = _apply_field(xi, eef)
    eta_lambda = _apply_field(eta, area_density(f, a.normal)).value

    X, XX, XXX = xf.value(), xxf.value(), xxxf.value()
    H, HHH, XHH = eef.value(), eeef.value(), xeef.value()
    nu = a.normal.value()
    nx = float(np.linalg.norm(X))
    cr = float(np.linalg.norm(np.cross(X, H)))
    dn = _det(X, H, XX)
    return {
        "kappa_s": math.copysign(1.0, eta_lambda) * _det(X, XX, nu) / nx**3,
        "kappa_n": abs(dn) / (nx**2 * cr),
        "kappa_c": nx**1.5 * _det(X, H, HHH) / cr**2.5,
        "kappa_t": _det(X, H, XHH) / cr**2 - dn * float(np.dot(X, H)) / (nx**2 * cr**2),
        "kappa_i": _det(X, H, XXX) / (nx**3 * cr) - 3 * float(np.dot(X, XX)) * dn / (nx**5 * cr),
    }


# ---------------------------------------------------------------------------
# derivatives along the edge
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivedInvariants:
    numeric: tuple[float, float, Optional[float]]
    from_coefficients: tuple[float, float, Optional[float]]

    @property
    def discrepancy(self) -> float:
        pairs = [(a, b) for a, b in zip(self.numeric, self.from_coefficients)
                 if a is not None and b is not None]
        return max(abs(a - b) for a, b in pairs)


def edge_derivatives(a: AdaptedGerm, h: float = STENCIL_STEP) -> tuple[float, float, Optional[float]]:
    """``(kappa_s', kappa_n', kappa')`` by a five-point stencil along the edge.

    Derivatives are per unit arc length, in the edge direction selected by the
    normal form (where the limiting normal curvature is non-negative, or, when
    it vanishes, where ``kappa_s'`` is non-negative).  ``kappa_n'`` is the
    derivative of the signed ``kappa_nu`` in that direction.
    """
    weights = (1.0, -8.0, 0.0, 8.0, -1.0)
    pts = [invariants_at(a, k * h) for k in (-2, -1, 0, 1, 2)]

    def d(attr):
        return sum(w * getattr(s, attr) for w, s in zip(weights, pts)) / (12 * h)

    speed = float(np.linalg.norm(a.f.derivative(1, 0)))
    ks, knu, k = d("kappa_s") / speed, d("kappa_nu") / speed, d("kappa") / speed
    base = pts[2]
    scale = 1.0 + abs(base.kappa_s)
    if abs(base.kappa_nu) > 1e-9 * scale:
        sigma = math.copysign(1.0, base.kappa_nu)
    else:
        sigma = -1.0 if ks < 0 else 1.0
    kprime = sigma * k if base.kappa > 1e-6 else None
    return sigma * ks, knu, kprime


def coefficient_derivatives(coeffs) -> tuple[float, float, Optional[float]]:
    """``(kappa_s', kappa_n', kappa')`` from normal-form coefficients."""
    a20, a30, b20, b30, b12 = coeffs.a20, coeffs.a30, coeffs.b20, coeffs.b30, coeffs.b12
    kappa = math.hypot(a20, b20)
    kp = (a20 * a30 + b20 * b30) / kappa if kappa > 1e-6 else None
    return a30 + b12 * b20, b30 - a20 * b12, kp


def derived_invariants(a: AdaptedGerm) -> DerivedInvariants:
    from .normal_form import reduce

    return DerivedInvariants(edge_derivatives(a), coefficient_derivatives(reduce(a.source)))


# ---------------------------------------------------------------------------
# identities, contact sphere, winding
# ---------------------------------------------------------------------------

def relation_residuals(s: InvariantSet) -> dict:
    pyth = abs(s.kappa**2 - s.kappa_s**2 - s.kappa_n**2)
    umb = abs(s.kappa_u - s.kappa_n)
    return {
        "pythagorean": pyth,
        "pythagorean_normalized": pyth / (1.0 + s.kappa**2),
        "umbilic_normal": umb,
        "umbilic_normal_normalized": umb / (1.0 + s.kappa_n),
    }


@dataclass(frozen=True)
class ContactDescriptor:
    kind: str
    point: np.ndarray
    normal: np.ndarray
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    epsilon: Optional[int] = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "point": self.point.tolist(), "normal": self.normal.tolist()}
        out["center"] = self.center.tolist() if self.center is not None else "undefined"
        out["radius"] = self.radius if self.radius is not None else "undefined"
        out["epsilon"] = self.epsilon if self.epsilon is not None else "undefined"
        return out


def sphere_center(a: AdaptedGerm, u: float = 0.0, tol: float = CURVATURE_TOL) -> ContactDescriptor:
    """The plane (``kappa_n = 0``) or sphere with highest-order contact at ``(u, 0)``.

    The sphere has radius ``1/kappa_n`` and centre ``p + eps * nu / kappa_n``
    with ``eps`` the sign of the second form along ``nu`` on the edge tangent.
    """
    f = jet_at(a, u)
    e = edge_jet(f)
    p = np.asarray(a.f(u, 0.0), dtype=float)
    inv = invariants_of_jet(f)
    if inv.kappa_n <= tol:
        return ContactDescriptor("plane", p, e.nu)
    eps = 1 if inv.kappa_nu > 0 else -1
    return ContactDescriptor("sphere", p, e.nu, p + eps * e.nu / inv.kappa_n, 1.0 / inv.kappa_n, eps)


@dataclass(frozen=True)
class WindingResult:
    ratio: float
    n: int
    gap: float


def kt_winding(kappa_t: Sequence[float], c3: Sequence[float], du, min_samples: int = 1000) -> WindingResult:
    """Intersection number from samples over one traversal of a closed edge.

    ``(int c3 - int kappa_t) / 2 pi`` by the periodic trapezoidal rule; ``du``
    is the arc-length spacing (scalar or per-sample, spacing to the next
    sample).
    """
    kt = np.asarray(kappa_t, dtype=float)
    c = np.asarray(c3, dtype=float)
    if kt.shape != c.shape or kt.ndim != 1:
        raise ValueError("kappa_t and c3 must be 1-d arrays of equal length")
    if len(kt) < min_samples:
        raise GeometryError("insufficient sampling or non-closed curve")
    step = np.broadcast_to(np.asarray(du, dtype=float), kt.shape)
    diff = c - kt
    integral = float(np.sum(0.5 * (diff + np.roll(diff, -1)) * step))
    ratio = integral / (2 * math.pi)
    n = int(round(ratio))
    gap = abs(ratio - n)
    if gap > 0.1:
        raise GeometryError("insufficient sampling or non-closed curve")
    return WindingResult(ratio, n, gap)

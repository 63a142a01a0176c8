"""Surface map-germs (R^2, 0) -> (R^3, 0), their normals and singularities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import expr as _expr
from .jet import DEFAULT_ORDER, Jet2, Jet2Vec3, JetError, compose, det3, reciprocal, sqrt_jet

RANK_TOL = 1e-9
FRONT_TOL = 1e-8


class GeometryError(ValueError):
    """A germ does not satisfy the hypotheses of a geometric construction."""


@dataclass(frozen=True)
class SurfaceGerm:
    """Jet of a surface germ at a source point, translated so ``f(0, 0) = 0``.

    ``evaluator`` (when present) is the closed form in the same local
    coordinates: ``evaluator(u, v) = F(u0 + u, v0 + v) - F(u0, v0)``.
    """

    f: Jet2Vec3
    evaluator: Optional[Callable] = None
    exprs: Optional[tuple] = None
    basepoint: tuple[float, float] = (0.0, 0.0)
    name: str = ""

    @property
    def order(self) -> int:
        return self.f.order

    @classmethod
    def from_jets(cls, f: Jet2Vec3, name: str = "") -> "SurfaceGerm":
        f = f - Jet2Vec3.constant(f.value(), f.order)
        return cls(f, evaluator=_polynomial_evaluator(f), name=name)

    @classmethod
    def from_expressions(cls, source, order: int = DEFAULT_ORDER,
                         basepoint: tuple[float, float] = (0.0, 0.0), name: str = "") -> "SurfaceGerm":
        nodes = _expr.parse_map(source) if isinstance(source, str) else tuple(source)
        u0, v0 = basepoint
        f = _expr.elevate_map(nodes, order, (u0, v0))
        origin = f.value()
        f = f - Jet2Vec3.constant(origin, order)

        def evaluator(u, v, _nodes=nodes, _o=origin):
            pts = [np.asarray(_expr.evaluate(n, u0 + np.asarray(u, float), v0 + np.asarray(v, float), np), float)
                   for n in _nodes]
            pts = np.broadcast_arrays(*pts)
            return np.stack(pts, axis=-1) - _o

        return cls(f, evaluator=evaluator, exprs=nodes, basepoint=(u0, v0), name=name)

    @classmethod
    def from_table(cls, data, name: str = "") -> "SurfaceGerm":
        return cls.from_jets(_expr.load_table(data), name=name)

    def at(self, u0: float, v0: float = 0.0) -> "SurfaceGerm":
        """The germ re-expanded about the local source point ``(u0, v0)``.

        Expression germs are re-elevated exactly; jet germs are shifted as
        polynomials.
        """
        if self.exprs is not None:
            bu, bv = self.basepoint
            return SurfaceGerm.from_expressions(self.exprs, self.order, (bu + u0, bv + v0), self.name)
        return SurfaceGerm.from_jets(self.f.shift(u0, v0), self.name)


def _polynomial_evaluator(f: Jet2Vec3):
    return lambda u, v: f(np.asarray(u, float), np.asarray(v, float))


@dataclass(frozen=True)
class Classification:
    kind: str
    rank: int
    dlambda: Optional[tuple[float, float]] = None
    dlambda_eta: Optional[float] = None
    front_sigma: Optional[float] = None
    witnesses: dict = field(default_factory=dict)

    @property
    def is_cuspidal_edge(self) -> bool:
        return self.kind == "cuspidal_edge"

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "rank": self.rank,
            "dlambda": list(self.dlambda) if self.dlambda is not None else "undefined",
            "dlambda_eta": self.dlambda_eta if self.dlambda_eta is not None else "undefined",
            "front_sigma": self.front_sigma if self.front_sigma is not None else "undefined",
        }


def _scale(f: Jet2Vec3) -> float:
    vals = [abs(c.coeff(i, j)) for c in f for i in range(4) for j in range(4 - i) if i + j <= f.order]
    return 1.0 + max(vals)


def _jacobian(f: Jet2Vec3) -> np.ndarray:
    return np.column_stack([f.derivative(1, 0), f.derivative(0, 1)])


def differential_rank(g: SurfaceGerm | Jet2Vec3) -> int:
    f = g.f if isinstance(g, SurfaceGerm) else g
    sv = np.linalg.svd(_jacobian(f), compute_uv=False)
    return int(np.sum(sv > RANK_TOL * _scale(f)))


# ---------------------------------------------------------------------------
# adaptation machinery (shared with forms / normal_form)
# ---------------------------------------------------------------------------

def identity_change(order: int) -> tuple[Jet2, Jet2]:
    return Jet2.var("u", order), Jet2.var("v", order)


def chain(change: tuple[Jet2, Jet2], p: Jet2, q: Jet2) -> tuple[Jet2, Jet2]:
    """Cumulative source change after additionally substituting ``(p, q)``."""
    return compose(change[0], p, q), compose(change[1], p, q)


def null_alignment(f: Jet2Vec3) -> np.ndarray:
    """Orientation-preserving rotation ``L`` of the source such that, in the
    coordinates ``x = L y``, the v-axis is the kernel of ``df(0)``."""
    _, _, vt = np.linalg.svd(_jacobian(f))
    k = vt[-1]
    if k[1] < 0 or (k[1] == 0 and k[0] < 0):
        k = -k
    a = np.array([k[1], -k[0]])
    return np.column_stack([a, k])


def linear_change(mat: np.ndarray, order: int) -> tuple[Jet2, Jet2]:
    u, v = identity_change(order)
    return u * mat[0, 0] + v * mat[0, 1], u * mat[1, 0] + v * mat[1, 1]


def normal_at_origin(f: Jet2Vec3) -> tuple[Optional[np.ndarray], bool]:
    """Limit normal at a corank-one point whose null direction is ``d/dv``.

    ``d(f_u x f_v)(0)`` has both columns parallel to the normal of a frontal;
    returns ``(nu0, frontal)``, ``nu0 = None`` when both columns vanish.
    """
    fu = f.derivative(1, 0)
    w1 = np.cross(fu, f.derivative(1, 1))
    w2 = np.cross(fu, f.derivative(0, 2))
    scale = _scale(f) ** 2
    n1, n2 = np.linalg.norm(w1), np.linalg.norm(w2)
    if max(n1, n2) <= RANK_TOL * scale:
        return None, True
    frontal = np.linalg.norm(np.cross(w1, w2)) <= 1e-8 * scale * max(n1, n2)
    w = w2 if n2 >= n1 else w1
    return w / np.linalg.norm(w), frontal


def _newton_curve(psi: Jet2) -> Jet2:
    """Solve ``psi(u, g(u)) = 0`` for the jet ``g``.

    Chord iteration with the scalar slope ``psi_v(0)``: the error factor is
    nilpotent, so every pass fixes at least one more degree, and no jet
    reciprocal is needed (steep curves have fast-growing coefficients).
    """
    order = psi.order
    u = Jet2.var("u", order)
    g = Jet2.zero(order)
    slope = psi.coeff(0, 1)
    for _ in range(order + 2):
        step = compose(psi, u, g) * (1.0 / slope)
        g = (g - step).restrict_u_axis()
        if step.norm() <= 1e-15 * (1.0 + g.norm()):
            break
    return g


def curve_function(f: Jet2Vec3, nu0: np.ndarray) -> Jet2:
    """Scalar jet ``<f_u x f_v, nu0>``; same zero set and differential at 0 as
    the signed area density."""
    n = f.partial("u").cross(f.partial("v"))
    return n.x * nu0[0] + n.y * nu0[1] + n.z * nu0[2]


def null_correction(f: Jet2Vec3) -> Jet2:
    """``e(u)`` such that ``e(u) d/du + d/dv`` is null along ``v = 0``."""
    fu = f.partial("u").restrict_u_axis()
    fv = f.partial("v").restrict_u_axis()
    return -(fv.dot(fu)) * reciprocal(fu.dot(fu))


@dataclass
class _Adapted:
    f: Jet2Vec3
    change: tuple[Jet2, Jet2]
    nu0: np.ndarray
    dlambda: tuple[float, float]
    dlambda_eta: float


def adapt(f: Jet2Vec3) -> _Adapted:
    """Bring a non-degenerate corank-one germ to adapted coordinates.

    Raises :class:`GeometryError` for degenerate points and for points where
    the singular curve is tangent to the null direction.
    """
    order = f.order
    mat = null_alignment(f)
    p, q = linear_change(mat, order)
    f1 = f.compose(p, q)
    change = (p, q)
    nu0, frontal = normal_at_origin(f1)
    if nu0 is None:
        raise GeometryError("degenerate singular point")
    if not frontal:
        raise GeometryError("not a frontal: the limit normal is undefined")
    psi = curve_function(f1, nu0)
    grad = np.array([psi.coeff(1, 0), psi.coeff(0, 1)])
    dl_eta = float(grad[1])
    if abs(dl_eta) <= RANK_TOL * _scale(f1) ** 2:
        raise GeometryError("transversality failure: singular curve tangent to the null direction")
    g = _newton_curve(psi)
    u, v = identity_change(order)
    straighten = (u, v + g)
    f2 = f1.compose(*straighten)
    change = chain(change, *straighten)
    e = null_correction(f2)
    fix = (u + v * e, v)
    f3 = f2.compose(*fix)
    change = chain(change, *fix)
    return _Adapted(f3, change, nu0, tuple(mat @ grad), dl_eta)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def unit_normal(g: SurfaceGerm | Jet2Vec3) -> Jet2Vec3:
    """Unit normal ``(f_u x h) / |f_u x h|`` where ``f_v = v h``.

    Requires adapted coordinates.  The frame ``(f_u, h, nu)`` is positively
    oriented, so the signed area density has ``lambda_v > 0``.
    """
    f = g.f if isinstance(g, SurfaceGerm) else g
    fu = f.partial("u")
    try:
        h = f.partial("v").factor_out("v", 1)
    except JetError as exc:
        raise GeometryError("not a frontal along the singular curve: f_v does not vanish on v=0 in adapted coordinates") from exc
    n = fu.cross(h)
    if np.linalg.norm(n.value()) <= RANK_TOL * _scale(f) ** 2:
        raise GeometryError("normal undefined (degenerate germ)")
    return n.normalized()


def area_density(g: SurfaceGerm | Jet2Vec3, nu: Jet2Vec3) -> Jet2:
    """Signed area density ``det(f_u, f_v, nu)``."""
    f = g.f if isinstance(g, SurfaceGerm) else g
    return det3(f.partial("u"), f.partial("v"), nu)


def _front_sigma(f: Jet2Vec3, nu: Jet2Vec3) -> float:
    m = np.column_stack([
        np.concatenate([f.derivative(1, 0), nu.derivative(1, 0)]),
        np.concatenate([f.derivative(0, 1), nu.derivative(0, 1)]),
    ])
    return float(np.linalg.svd(m, compute_uv=False)[1])


def classify(g: SurfaceGerm | Jet2Vec3) -> Classification:
    """Total classification of the origin of a germ."""
    f = g.f if isinstance(g, SurfaceGerm) else g
    rank = differential_rank(f)
    if rank == 2:
        return Classification("regular", rank)
    if rank == 0:
        return Classification("corank2", rank)
    try:
        ad = adapt(f)
        nu = unit_normal(ad.f)
    except GeometryError as exc:
        msg = str(exc)
        frontal = "not a frontal" not in msg
        dl, dl_eta = _first_order_witness(f)
        return Classification("degenerate_singularity", rank, dlambda=dl, dlambda_eta=dl_eta,
                              witnesses={"reason": msg, "frontal": frontal})
    sigma = _front_sigma(ad.f, nu)
    kind = "cuspidal_edge" if sigma > FRONT_TOL * _scale(f) else "frontal_not_front"
    return Classification(kind, rank, dlambda=ad.dlambda, dlambda_eta=ad.dlambda_eta,
                          front_sigma=sigma, witnesses={"frontal": True})


def _first_order_witness(f: Jet2Vec3):
    """``(dlambda, dlambda(eta))`` at 0 when the limit normal exists."""
    mat = null_alignment(f)
    f1 = f.compose(*linear_change(mat, f.order))
    nu0, frontal = normal_at_origin(f1)
    if nu0 is None or not frontal:
        return None, None
    psi = curve_function(f1, nu0)
    grad = np.array([psi.coeff(1, 0), psi.coeff(0, 1)])
    return tuple(mat @ grad), float(grad[1])


def singular_curve(g: SurfaceGerm | Jet2Vec3) -> tuple[Jet2, tuple[Jet2, Jet2]]:
    """Graph ``v = g(u)`` of the singular curve and a unit null field along it.

    The null field ``eta(u) = (eta_u, eta_v)`` (jets in ``u``) is positively
    oriented against the curve tangent ``(1, g'(u))``.
    """
    f = g.f if isinstance(g, SurfaceGerm) else g
    if differential_rank(f) != 1:
        raise GeometryError("degenerate singular point")
    mat = null_alignment(f)
    nu0, frontal = normal_at_origin(f.compose(*linear_change(mat, f.order)))
    if nu0 is None or not frontal:
        raise GeometryError("degenerate singular point")
    psi = curve_function(f, nu0)
    tol = RANK_TOL * _scale(f) ** 2
    if abs(psi.coeff(0, 1)) <= tol:
        if abs(psi.coeff(1, 0)) <= tol:
            raise GeometryError("degenerate singular point")
        raise GeometryError("transversality failure, swap coordinates")
    curve = _newton_curve(psi)
    u = Jet2.var("u", f.order)
    fu = f.partial("u").compose(u, curve)
    fv = f.partial("v").compose(u, curve)
    try:
        if np.linalg.norm(fu.value()) >= np.linalg.norm(fv.value()):
            a, b = -(fv.dot(fu)) * reciprocal(fu.dot(fu)), Jet2.constant(1.0, f.order)
        else:
            a, b = Jet2.constant(1.0, f.order), -(fu.dot(fv)) * reciprocal(fv.dot(fv))
        length = reciprocal(sqrt_jet(a * a + b * b))
    except JetError as exc:
        raise GeometryError("singular curve too steep over the u-axis "
                            "(transversality failure, swap coordinates)") from exc
    a, b = a * length, b * length
    slope = curve.partial("u")
    if b.value - slope.value * a.value < 0:
        a, b = -a, -b
    return curve, (a, b)

"""JSON reports and the identity suite used by ``edgekit verify``."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .forms import AdaptedGerm, to_adapted
from .germ import SurfaceGerm
from .invariants import (coefficient_derivatives, edge_derivatives, frame_invariants, invariants_at,
                         relation_residuals, sphere_center)
from .normal_form import reduce, replay

SCHEMA = "edgekit/1"
UNDEFINED = "undefined"
_NEWTON_STEPS = 8


def clean(obj):
    """Plain JSON types; non-finite or missing numbers become ``"undefined"``."""
    if obj is None:
        return UNDEFINED
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else UNDEFINED
    return obj


def dumps(report: dict) -> str:
    return json.dumps(clean(report), indent=2, sort_keys=True)


def _local(a: AdaptedGerm, u: float) -> SurfaceGerm:
    """The germ re-expanded at the edge point with adapted parameter ``(u, 0)``.

    Expression germs are re-elevated exactly at the matching source point,
    which is first pulled onto the singular set by Newton steps on
    ``<f_u x f_v, nu>``; jet germs fall back to a polynomial shift.
    """
    if u == 0.0:
        return a.germ
    g = a.source
    if g.exprs is None:
        return SurfaceGerm.from_jets(a.f.shift(u, 0.0), name=a.germ.name)
    p, q = a.coordinate_change
    pt = np.array([p(u, 0.0), q(u, 0.0)], dtype=float)
    nu0 = np.asarray(a.normal(u, 0.0), dtype=float)
    for _ in range(_NEWTON_STEPS):
        h = g.at(*pt)
        n = h.f.partial("u").cross(h.f.partial("v"))
        lam = n.x * nu0[0] + n.y * nu0[1] + n.z * nu0[2]
        grad = np.array([lam.derivative(1, 0), lam.derivative(0, 1)])
        step = lam.value * grad / grad.dot(grad)
        pt = pt - step
        if np.linalg.norm(step) <= 1e-15 * (1.0 + np.linalg.norm(pt)):
            break
    return g.at(*pt)


def build_report(g: SurfaceGerm, at: float = 0.0) -> dict:
    """Full report at the adapted-coordinate point ``(at, 0)``.

    Raises :class:`GeometryError` when the point is not a cuspidal edge.
    """
    from . import __version__

    a = to_adapted(g)
    if at != 0.0:
        a = to_adapted(_local(a, at))
    inv = invariants_at(a, 0.0)
    ks1, kn1, k1 = edge_derivatives(a)
    inv = inv.with_derivatives(ks1, kn1, k1)
    nf = reduce(a.source)
    return clean({
        "schema": SCHEMA,
        "version": __version__,
        "name": g.name,
        "at": at,
        "jet_order": g.order,
        "trusted_degree": nf.trusted_degree,
        "classification": a.classification.as_dict(),
        "invariants": inv.as_dict(),
        "normal_form": nf.as_dict(),
        "residuals": relation_residuals(inv),
        "contact": sphere_center(a, 0.0).as_dict(),
    })


def normal_form_report(g: SurfaceGerm) -> dict:
    nf = reduce(g)
    return clean({
        "schema": SCHEMA,
        "name": g.name,
        "jet_order": g.order,
        "trusted_degree": nf.trusted_degree,
        "coefficients": nf.as_dict(),
        "tail": nf.tail_terms(),
        "transform_log": nf.log_as_dicts(),
    })


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    germ: str
    identity: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.value) and self.value <= self.tol

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.germ} {self.identity} {self.value:.3e} (tol {self.tol:.0e})"


def verify_germ(g: SurfaceGerm, rng: np.random.Generator, pairs: int = 3) -> list[Check]:
    """Identities that must hold at a cuspidal edge."""
    from .sampling import random_adapted_pair

    name = g.name or "germ"
    a = to_adapted(g)
    s = invariants_at(a, 0.0)
    res = relation_residuals(s)
    nf = reduce(g)
    coeff_map = {"kappa_s": nf.a20, "kappa_n": nf.b20, "kappa_c": nf.b03,
                 "kappa_t": nf.b12, "kappa_i": nf.b30}
    corr = max(abs(getattr(s, k) - v) for k, v in coeff_map.items())
    num = edge_derivatives(a)
    ref = coefficient_derivatives(nf)
    deriv = max(abs(x - y) for x, y in zip(num[:2], ref[:2]))
    frame = 0.0
    for _ in range(pairs):
        xi, eta = random_adapted_pair(rng, a.order)
        fi = frame_invariants(a, xi, eta)
        frame = max(frame, *(abs(fi[k] - getattr(s, k)) for k in ("kappa_n", "kappa_c", "kappa_t", "kappa_i")))
    scale = 1.0 + max(abs(c) for c in nf.as_tuple())
    return [
        Check(name, "pythagorean", res["pythagorean_normalized"], 1e-8),
        Check(name, "umbilic_equals_normal", res["umbilic_normal"], 1e-8),
        Check(name, "coefficient_correspondence", corr / scale, 1e-8),
        Check(name, "edge_derivatives", deriv / scale, 1e-6),
        Check(name, "frame_invariance", frame / scale, 1e-8),
        Check(name, "replay", replay(g, nf.transform_log).max_difference(nf.jet), 1e-9),
        Check(name, "null_normalization", float(np.max(np.abs(nf.jet.derivative(0, 2) - [0, 1, 0]))), 1e-9),
    ]

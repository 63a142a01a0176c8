"""Seeded random germs, coordinate changes and adapted frames for sweeps and tests."""

from __future__ import annotations

import numpy as np

from .germ import SurfaceGerm
from .jet import DEFAULT_ORDER, Jet2, Jet2Vec3
from .normal_form import normal_form_jet


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def _random_poly(rng, order: int, lo: int, hi: int, scale: float) -> Jet2:
    terms = {(i, d - i): rng.uniform(-scale, scale) for d in range(lo, hi + 1) for i in range(d + 1)}
    return Jet2.from_terms(terms, order)


def random_diffeo(rng: np.random.Generator, order: int = DEFAULT_ORDER,
                  scale: float = 0.4) -> tuple[Jet2, Jet2]:
    """Orientation-preserving source diffeomorphism jet fixing the origin.

    The linear part has singular values in ``[0.6, 1.4]``; higher terms go
    up to degree three.
    """
    r1 = _plane_rotation(rng.uniform(0, 2 * np.pi))
    r2 = _plane_rotation(rng.uniform(0, 2 * np.pi))
    lin = r1 @ np.diag(rng.uniform(0.6, 1.4, size=2)) @ r2
    u, v = Jet2.var("u", order), Jet2.var("v", order)
    p = u * lin[0, 0] + v * lin[0, 1] + _random_poly(rng, order, 2, 3, scale)
    q = u * lin[1, 0] + v * lin[1, 1] + _random_poly(rng, order, 2, 3, scale)
    return p, q


def _plane_rotation(t: float) -> np.ndarray:
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]])


def random_coefficients(rng: np.random.Generator, spread: float = 2.0) -> tuple[float, ...]:
    """Admissible ``(a20, a30, b20, b30, b12, b03)``: ``b20 >= 0``, ``|b03| >= 0.5``."""
    a20, a30, b30, b12 = rng.uniform(-spread, spread, size=4)
    b20 = rng.uniform(0.0, spread)
    b03 = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, spread)
    return tuple(float(x) for x in (a20, a30, b20, b30, b12, b03))


def random_tail(rng: np.random.Generator, order: int = DEFAULT_ORDER, scale: float = 0.5) -> Jet2Vec3:
    """Random tail ``(0, u^4 h1(u), u^4 h2(u) + u^2 v^2 h3(u) + u v^3 h4(u) + v^4 h5(u, v))``
    through degree five; it keeps the germ a frontal along ``v = 0``."""
    hi = min(order, 5)
    y = {(d, 0): rng.uniform(-scale, scale) for d in range(4, hi + 1)}
    z = {(i, d - i): rng.uniform(-scale, scale) for d in range(4, hi + 1) for i in range(d + 1)
         if d - i != 1}
    return Jet2Vec3(Jet2.zero(order), Jet2.from_terms(y, order), Jet2.from_terms(z, order))


def random_cuspidal_germ(rng: np.random.Generator, order: int = DEFAULT_ORDER, tail: bool = True,
                         coeffs=None) -> tuple[SurfaceGerm, tuple[float, ...]]:
    """A cuspidal edge presented as ``R (n + h)(phi)`` with known coefficients.

    ``n`` is the normal form for ``coeffs``, ``h`` a tail of order four,
    ``phi`` a random diffeomorphism jet and ``R`` a random rotation.
    """
    if coeffs is None:
        coeffs = random_coefficients(rng)
    f = normal_form_jet(coeffs, order)
    if tail:
        f = f + random_tail(rng, order)
    f = f.compose(*random_diffeo(rng, order)).rotate(random_rotation(rng))
    return SurfaceGerm.from_jets(f, name="random"), tuple(coeffs)


def random_adapted_pair(rng: np.random.Generator, order: int = DEFAULT_ORDER, scale: float = 0.5):
    """Vector fields ``xi = a d/du + b d/dv``, ``eta = c d/du + d d/dv`` with
    ``b = c = 0`` on ``v = 0`` and ``a d > 0``."""
    sign = rng.choice([-1.0, 1.0])
    v = Jet2.var("v", order)

    def unit(c0):
        return Jet2.constant(c0, order) + _random_poly(rng, order, 1, 2, scale)

    a = unit(sign * rng.uniform(0.5, 2.0))
    d = unit(sign * rng.uniform(0.5, 2.0))
    b = v * unit(rng.uniform(-1.0, 1.0))
    c = v * unit(rng.uniform(-1.0, 1.0))
    return (a, b), (c, d)

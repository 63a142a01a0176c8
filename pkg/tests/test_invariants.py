import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from edgekit.forms import to_adapted
from edgekit.germ import GeometryError, SurfaceGerm
from edgekit.invariants import (InvariantSet, coefficient_derivatives, derived_invariants, edge_derivatives,
                                frame_invariants, invariants_at, invariants_of_jet, kappa_t_simple, kt_winding,
                                relation_residuals, sphere_center)
from edgekit.normal_form import realize_coefficients
from edgekit.presets import HELIX_TD
from edgekit.sampling import (random_adapted_pair, random_coefficients, random_cuspidal_germ, random_diffeo,
                              random_rotation)

SQ2 = math.sqrt(2.0)


def G(text, order=6):
    return SurfaceGerm.from_expressions(text, order)


def at0(g):
    return invariants_at(to_adapted(g), 0.0)


def test_normal_form_correspondence(rng):
    for _ in range(10):
        c = random_coefficients(rng)
        s = at0(realize_coefficients(c))
        assert (s.kappa_s, s.kappa_n, s.kappa_c, s.kappa_t, s.kappa_i) == pytest.approx(
            (c[0], c[2], c[5], c[4], c[3]), abs=1e-12)


def test_standard_forms():
    s = at0(G("map(u, v^2/2, v^3/6)"))
    assert (s.kappa_s, s.kappa_n, s.kappa_c, s.kappa_t, s.kappa_i) == (0.0, 0.0, 1.0, 0.0, 0.0)
    assert s.tau is None and s.kappa == 0.0
    # xi f = (1,0,0), eta eta f = (0,2,0), eta eta eta f = (0,0,6): 12 / 2^(5/2)
    assert at0(G("map(u, v^2, v^3)")).kappa_c == pytest.approx(3 / SQ2, abs=1e-14)


def test_tangent_developable_of_helix():
    s = at0(G(HELIX_TD))
    got = (s.kappa_s, s.kappa_n, s.kappa_c, s.kappa_t, s.kappa_i, s.kappa, s.tau)
    assert got == pytest.approx((-0.5, 0.0, -SQ2, 0.5, -0.25, 0.5, 0.5), abs=1e-12)


def test_undefined_away_from_edges():
    from edgekit.jet import Jet2, Jet2Vec3
    u, v = Jet2.var("u"), Jet2.var("v")
    with pytest.raises(GeometryError, match="invariants undefined here"):
        invariants_of_jet(Jet2Vec3(u, v * v / 2, u * v * v))


def test_derivatives_of_normal_forms(rng):
    for _ in range(5):
        c = random_coefficients(rng)
        a20, a30, b20, b30, b12, b03 = c
        ks, kn, kp = edge_derivatives(to_adapted(realize_coefficients(c)))
        assert ks == pytest.approx(a30 + b12 * b20, abs=1e-7)
        assert kn == pytest.approx(b30 - a20 * b12, abs=1e-7)
        assert kp == pytest.approx((a20 * a30 + b20 * b30) / math.hypot(a20, b20), abs=1e-7)


def test_helix_derivatives_vanish():
    d = derived_invariants(to_adapted(G(HELIX_TD)))
    assert max(abs(x) for x in d.numeric) < 1e-8
    assert d.discrepancy < 1e-8


def test_derived_paths_agree(rng):
    for _ in range(10):
        g, _ = random_cuspidal_germ(rng)
        d = derived_invariants(to_adapted(g))
        assert d.discrepancy <= 1e-7


def test_residual_examples():
    s = InvariantSet(3.0, 4.0, 4.0, 4.0, 1.0, 0.0, 0.0, 5.0, None)
    r = relation_residuals(s)
    assert r["pythagorean"] == 0.0 and r["umbilic_normal"] == 0.0


def test_residuals_on_normal_forms(rng):
    for _ in range(10):
        r = relation_residuals(at0(realize_coefficients(random_coefficients(rng))))
        assert r["pythagorean"] <= 1e-10 and r["umbilic_normal"] <= 1e-10


def test_sphere_center_examples():
    d = sphere_center(to_adapted(realize_coefficients((0, 0, 3, 0, 0, 1))))
    assert d.kind == "sphere" and d.epsilon == 1
    assert np.allclose(d.center, [0, 0, 1 / 3], atol=1e-14)
    d = sphere_center(to_adapted(realize_coefficients((2, 0, 0, 0, 0, 1))))
    assert d.kind == "plane" and np.allclose(d.normal, [0, 0, 1])


def test_sphere_distance(rng):
    for _ in range(10):
        g, _ = random_cuspidal_germ(rng)
        a = to_adapted(g)
        d = sphere_center(a)
        assert np.linalg.norm(d.center - d.point) == pytest.approx(1 / invariants_at(a).kappa_n, rel=1e-10)


def test_frame_invariance(rng):
    for _ in range(5):
        g, _ = random_cuspidal_germ(rng)
        a = to_adapted(g)
        s = invariants_at(a)
        for _ in range(5):
            fi = frame_invariants(a, *random_adapted_pair(rng))
            for k in ("kappa_s", "kappa_n", "kappa_c", "kappa_t", "kappa_i"):
                assert fi[k] == pytest.approx(getattr(s, k), abs=1e-8)


def test_simplified_torsion(rng):
    for _ in range(10):
        g = realize_coefficients(random_coefficients(rng))
        a = to_adapted(g)
        assert abs(kappa_t_simple(a.f) - invariants_at(a).kappa_t) <= 1e-10


def test_singular_curvature_sign():
    for a20 in (-2.0, -0.3, 0.4, 1.5):
        assert np.sign(at0(realize_coefficients((a20, 0.2, 1.0, 0.3, -0.4, 1.0))).kappa_s) == np.sign(a20)


@pytest.mark.parametrize("text", [
    "map(u, sin(u)^2 + v^2/2, u^2 - u^3 + v^3*(1 + u + v^2))",
    "map(u, -u^2 + v^2/2, 2*u^3 + v^3)",
    "map(u, u^3 + v^2/2, exp(u) - 1 - u + v^3*cos(u*v))",
])
def test_bijective_projection_has_no_torsion(text):
    # no v^2 term in the third component: the projection along nu(0) is one-to-one
    assert abs(at0(G(text)).kappa_t) <= 1e-10


@given(st.integers(0, 10_000))
def test_invariance_under_equivalence(seed):
    rng = np.random.default_rng(seed)
    g, _ = random_cuspidal_germ(rng)
    h = SurfaceGerm.from_jets(g.f.compose(*random_diffeo(rng)).rotate(random_rotation(rng)))
    s, t = at0(g), at0(h)
    for k in ("kappa_s", "kappa_n", "kappa_u", "kappa_c", "kappa_t", "kappa_i", "kappa"):
        assert getattr(s, k) == pytest.approx(getattr(t, k), abs=1e-8)
    if s.tau is not None and s.kappa > 1e-3:
        assert s.tau == pytest.approx(t.tau, abs=1e-7)


def test_winding_examples():
    n = 2000
    w = kt_winding(np.zeros(n), np.zeros(n), 0.01)
    assert w.n == 0 and w.gap == 0.0
    length = 5.0
    u = np.arange(n) * length / n
    for k in (-2, 1, 3):
        c3 = np.sin(2 * np.pi * u / length)
        kt = c3 - 2 * np.pi * k / length
        w = kt_winding(kt, c3, length / n)
        assert w.n == k and w.gap < 1e-9


def test_winding_errors():
    with pytest.raises(GeometryError, match="insufficient sampling"):
        kt_winding(np.zeros(10), np.zeros(10), 0.1)
    n = 1000
    with pytest.raises(GeometryError, match="non-closed curve"):
        kt_winding(np.zeros(n), np.full(n, 0.5 * 2 * np.pi / n), 1.0)


def test_coefficient_derivative_formula():
    class C:
        a20, a30, b20, b30, b12 = 3.0, 1.0, 4.0, 2.0, 0.5
    ks, kn, kp = coefficient_derivatives(C)
    assert (ks, kn, kp) == (1.0 + 0.5 * 4.0, 2.0 - 3.0 * 0.5, (3.0 + 8.0) / 5.0)

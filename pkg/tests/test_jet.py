import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import poly_compose, poly_mul
from edgekit.jet import (Jet2, Jet2Vec3, JetError, compose, factor_out, partial, reciprocal, ring_ops,
                         sqrt_jet)

N = 6
coef = st.floats(-3, 3, allow_nan=False)


def jets(order=N, constant=None):
    size = (order + 1) * (order + 2) // 2

    def build(vals):
        keys = [(i, d - i) for d in range(order + 1) for i in range(d + 1)]
        terms = dict(zip(keys, vals))
        if constant is not None:
            terms[(0, 0)] = constant
        return Jet2.from_terms(terms, order)

    return st.lists(coef, min_size=size, max_size=size).map(build)


def substitutions(order=N):
    return jets(order, constant=0.0)


def as_dict(f: Jet2) -> dict:
    return {(i, j): c for i, j, c in f.terms() if c != 0.0}


def close(a: Jet2, b: Jet2, tol=1e-10):
    return np.max(np.abs(a.c - b.c)) <= tol * (1.0 + max(a.norm(), b.norm()))


def test_table_size_and_upper_band():
    f = Jet2(np.ones((7, 7)))
    assert len(list(f.terms())) == 28
    assert f.c[6, 1] == 0.0 and f.c[3, 3] == 1.0


def test_simple_product():
    u, v = Jet2.var("u"), Jet2.var("v")
    assert as_dict((1 + u) * (1 + v)) == {(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0, (1, 1): 1.0}


def test_order_mismatch():
    with pytest.raises(JetError, match="incompatible jet orders"):
        Jet2.var("u", 3) + Jet2.var("u", 4)
    with pytest.raises(JetError, match="incompatible jet orders"):
        ring_ops(Jet2.var("u", 3), Jet2.var("u", 4), "mul")


@given(jets(), jets())
def test_mul_matches_schoolbook(a, b):
    ref = Jet2.from_terms(poly_mul(as_dict(a), as_dict(b), N), N)
    assert close(a * b, ref, 1e-12)


@given(jets(), jets(), jets())
def test_ring_axioms(a, b, c):
    assert close(a + b, b + a, 1e-12)
    assert close(a * b, b * a, 1e-12)
    assert close((a * b) * c, a * (b * c), 1e-12)
    assert close(a * (b + c), a * b + a * c, 1e-12)
    assert close(ring_ops(a, Jet2.zero(N), "add"), a, 0.0)
    assert close(ring_ops(a, None, "scale", 2.0), a + a, 0.0)


@given(jets(), jets())
def test_leibniz(a, b):
    for axis in "uv":
        lhs = partial(a * b, axis)
        rhs = a * partial(b, axis) + b * partial(a, axis)
        # agreement below the top band, which partial zero-fills
        assert all(abs(lhs.c[i, j] - rhs.c[i, j]) <= 1e-10 * (1 + a.norm() * b.norm()) * 10
                   for i in range(N) for j in range(N - i))


@given(jets())
def test_mixed_partials_commute(f):
    assert close(f.partial("u").partial("v"), f.partial("v").partial("u"), 0.0)


def test_partial_examples():
    u, v = Jet2.var("u"), Jet2.var("v")
    assert as_dict((u * v * v).partial("v")) == {(1, 1): 2.0}
    assert as_dict(Jet2.constant(5.0).partial("u")) == {}
    d = Jet2.var("u").partial("u")
    assert d.order == N and d.trusted == N - 1


def test_compose_examples():
    u, v = Jet2.var("u"), Jet2.var("v")
    sq = compose(u * u, u + v, Jet2.zero(N))
    assert as_dict(sq) == {(2, 0): 1.0, (1, 1): 2.0, (0, 2): 1.0}
    f = Jet2.from_terms({(1, 2): 3.0, (0, 0): 1.0, (4, 1): -2.0})
    assert close(compose(f, u, v), f, 0.0)
    with pytest.raises(JetError, match="substitution not origin-preserving"):
        compose(f, u + 1.0, v)


def test_compose_series_oracle():
    u = Jet2.var("u")
    sin_jet = Jet2.from_terms({(1, 0): 1.0, (3, 0): -1 / 6, (5, 0): 1 / 120})
    got = compose(sin_jet, u * u, Jet2.zero(N))
    assert close(got, Jet2.from_terms({(2, 0): 1.0, (6, 0): -1 / 6}), 1e-15)


@given(jets(), substitutions(), substitutions())
def test_compose_matches_brute_force(f, p, q):
    ref = poly_compose(as_dict(f), as_dict(p), as_dict(q), N)
    got = compose(f, p, q)
    scale = 1 + max(abs(x) for x in ref.values()) if ref else 1.0
    assert np.max(np.abs(got.c - Jet2.from_terms(ref, N).c)) <= 1e-10 * scale


@given(jets(), substitutions(), substitutions(), substitutions(), substitutions())
def test_compose_associative(f, p, q, r, s):
    lhs = compose(compose(f, p, q), r, s)
    rhs = compose(f, compose(p, r, s), compose(q, r, s))
    scale = 1 + max(lhs.norm(), rhs.norm())
    assert np.max(np.abs(lhs.c - rhs.c)) <= 1e-10 * scale


def test_reciprocal_examples():
    u = Jet2.var("u")
    geo = reciprocal(1 - u)
    assert close(geo, Jet2.from_terms({(k, 0): 1.0 for k in range(N + 1)}), 1e-15)
    assert reciprocal(Jet2.constant(2.0)).value == 0.5
    with pytest.raises(JetError, match="division by non-unit jet"):
        reciprocal(u)


@given(jets(constant=1.7), st.sampled_from([-1.0, 1.0]))
def test_reciprocal_self_check(f, sign):
    f = f * sign
    assert close(f * reciprocal(f), Jet2.constant(1.0), 1e-9)


def test_sqrt_examples():
    u = Jet2.var("u")
    ref = {(k, 0): math.comb(2 * k, k) * (-1) ** (k + 1) / ((2 * k - 1) * 4 ** k) for k in range(N + 1)}
    assert close(sqrt_jet(1 + u), Jet2.from_terms(ref), 1e-15)
    assert sqrt_jet(Jet2.constant(4.0)).value == 2.0
    with pytest.raises(JetError, match="sqrt of non-positive-unit jet"):
        sqrt_jet(Jet2.constant(-1.0) + u)


@given(jets(constant=2.5))
def test_sqrt_squares_back(f):
    g = sqrt_jet(f)
    assert g.value > 0
    assert np.max(np.abs((g * g - f).c)) < 1e-10 * (1 + f.norm())


def test_factor_out_examples():
    u, v = Jet2.var("u"), Jet2.var("v")
    assert close(factor_out(u * v + v * v, "v", 1), u + v, 0.0)
    got = factor_out(v ** 3, "v", 2)
    assert close(got, v, 0.0) and got.trusted == N - 2
    with pytest.raises(JetError, match="not divisible"):
        factor_out(u + v * v, "v", 1)


@given(jets(), st.integers(1, 3), st.sampled_from("uv"))
def test_factor_out_multiply_back(g, k, axis):
    x = Jet2.var(axis)
    f = x ** k * g
    h = factor_out(f, axis, k)
    assert close(x ** k * h, f, 1e-12)
    # agrees with g through the trusted degree
    assert all(abs(h.c[i, j] - g.c[i, j]) <= 1e-12 * (1 + g.norm())
               for i in range(N + 1) for j in range(N + 1 - i) if i + j <= h.trusted)


@given(jets(), st.floats(-0.7, 0.7), st.floats(-0.7, 0.7))
def test_shift_is_exact_for_polynomials(f, u0, v0):
    g = f.shift(u0, v0)
    pts = np.array([[0.1, -0.2], [0.3, 0.05], [-0.25, 0.2]])
    for x, y in pts:
        assert abs(g(x, y) - f(u0 + x, v0 + y)) <= 1e-10 * (1 + f.norm())


def test_vector_jets():
    u, v = Jet2.var("u"), Jet2.var("v")
    f = Jet2Vec3(u, v * v / 2, v ** 3 / 6)
    assert np.allclose(f.derivative(0, 3), [0, 0, 1])
    n = f.partial("u").cross(f.partial("v"))
    assert np.allclose(n.derivative(0, 1), [0, 0, 1])
    assert np.allclose(n.derivative(0, 2), [0, -1, 0])
    r = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    assert np.allclose(f.rotate(r).derivative(1, 0), [0, 1, 0])
    with pytest.raises(JetError):
        Jet2Vec3(Jet2.var("u", 3), v, v)

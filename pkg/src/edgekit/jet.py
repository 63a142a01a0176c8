"""
Truncated bivariate Taylor jets
===============================

A :class:`Jet2` of order ``N`` stores the monomial coefficients ``c[i, j]`` of
``u**i * v**j`` for ``i + j <= N``.  Derivative values are recovered as
``c[i, j] * i! * j!``.  All arithmetic truncates at total degree ``N``.

Every jet also carries a *trusted degree*: the highest total degree whose
coefficients are still exact (up to roundoff) after operations that shift
information out of the top band (differentiation, division by ``v**k``).
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

DEFAULT_ORDER = 6
ZERO_TOL = 1e-9


class JetError(ValueError):
    """Raised for invalid jet arithmetic (mismatched orders, non-units, ...)."""


@lru_cache(maxsize=None)
def _tables(order: int):
    idx = np.arange(order + 1)
    mask = np.add.outer(idx, idx) <= order
    ii, jj = np.nonzero(mask)
    m = len(ii)
    flat = np.full((order + 1, order + 1), m)
    flat[ii, jj] = np.arange(m)
    si = ii[:, None] + ii[None, :]
    sj = jj[:, None] + jj[None, :]
    ok = si + sj <= order
    target = np.where(ok, flat[np.minimum(si, order), np.minimum(sj, order)], m)
    return ii, jj, target.ravel(), mask


def _mul_arrays(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    ii, jj, target, _ = _tables(order)
    m = len(ii)
    prod = np.outer(a[ii, jj], b[ii, jj]).ravel()
    flat = np.bincount(target, weights=prod, minlength=m + 1)[:m]
    out = np.zeros((order + 1, order + 1))
    out[ii, jj] = flat
    return out


def _tol(scale: float) -> float:
    return ZERO_TOL * (1.0 + scale)


class Jet2:
    """Immutable truncated Taylor expansion of a scalar germ at the origin."""

    __slots__ = ("order", "c", "trusted")

    def __init__(self, coeffs, order: int | None = None, trusted: int | None = None):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise JetError("coefficient table must be square (order+1)x(order+1)")
        if order is None:
            order = c.shape[0] - 1
        if c.shape[0] != order + 1:
            raise JetError("coefficient table does not match order")
        c[~_tables(order)[3]] = 0.0
        c.flags.writeable = False
        self.order = order
        self.c = c
        self.trusted = order if trusted is None else min(trusted, order)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "Jet2":
        return cls(np.zeros((order + 1, order + 1)), order)

    @classmethod
    def constant(cls, value: float, order: int = DEFAULT_ORDER) -> "Jet2":
        c = np.zeros((order + 1, order + 1))
        c[0, 0] = value
        return cls(c, order)

    @classmethod
    def var(cls, name: str, order: int = DEFAULT_ORDER) -> "Jet2":
        c = np.zeros((order + 1, order + 1))
        if order >= 1:
            if name == "u":
                c[1, 0] = 1.0
            elif name == "v":
                c[0, 1] = 1.0
            else:
                raise JetError(f"unknown variable {name!r}")
        return cls(c, order)

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], float], order: int = DEFAULT_ORDER) -> "Jet2":
        c = np.zeros((order + 1, order + 1))
        for (i, j), val in terms.items():
            if i + j <= order:
                c[i, j] += val
        return cls(c, order)

    @classmethod
    def from_derivatives(cls, derivs: dict[tuple[int, int], float], order: int = DEFAULT_ORDER) -> "Jet2":
        """Build a jet from partial derivative values ``d^(i+j) f / du^i dv^j (0)``."""
        return cls.from_terms(
            {(i, j): d / (math.factorial(i) * math.factorial(j)) for (i, j), d in derivs.items()},
            order,
        )

    # -- inspection -------------------------------------------------------
    def terms(self) -> Iterator[tuple[int, int, float]]:
        """All ``(i, j, c_ij)`` with ``i + j <= order``; (N+1)(N+2)/2 entries."""
        ii, jj, _, _ = _tables(self.order)
        for i, j in zip(ii, jj):
            yield int(i), int(j), float(self.c[i, j])

    def coeff(self, i: int, j: int) -> float:
        if i + j > self.order:
            raise JetError(f"coefficient ({i},{j}) beyond jet order {self.order}")
        return float(self.c[i, j])

    def derivative(self, i: int, j: int) -> float:
        return self.coeff(i, j) * math.factorial(i) * math.factorial(j)

    @property
    def value(self) -> float:
        return float(self.c[0, 0])

    def norm(self) -> float:
        return float(np.max(np.abs(self.c)))

    def __repr__(self) -> str:
        parts = [f"{c:+.6g}*u^{i}v^{j}" for i, j, c in self.terms() if c != 0.0]
        return f"Jet2(order={self.order}, {' '.join(parts) or '0'})"

    def __call__(self, u, v):
        """Evaluate the truncated polynomial (scalars or numpy arrays)."""
        return np.polynomial.polynomial.polyval2d(u, v, self.c)

    # -- ring structure ---------------------------------------------------
    def _check(self, other: "Jet2") -> None:
        if self.order != other.order:
            raise JetError("incompatible jet orders")

    def _lift(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            self._check(other)
            return other
        return Jet2.constant(float(other), self.order)

    def __add__(self, other) -> "Jet2":
        other = self._lift(other)
        return Jet2(self.c + other.c, self.order, min(self.trusted, other.trusted))

    __radd__ = __add__

    def __neg__(self) -> "Jet2":
        return Jet2(-self.c, self.order, self.trusted)

    def __sub__(self, other) -> "Jet2":
        other = self._lift(other)
        return Jet2(self.c - other.c, self.order, min(self.trusted, other.trusted))

    def __rsub__(self, other) -> "Jet2":
        return self._lift(other) - self

    def __mul__(self, other) -> "Jet2":
        if not isinstance(other, Jet2):
            return Jet2(self.c * float(other), self.order, self.trusted)
        self._check(other)
        return Jet2(_mul_arrays(self.c, other.c, self.order), self.order,
                    min(self.trusted, other.trusted))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet2":
        if not isinstance(other, Jet2):
            return Jet2(self.c / float(other), self.order, self.trusted)
        return self * reciprocal(other)

    def __rtruediv__(self, other) -> "Jet2":
        return self._lift(other) * reciprocal(self)

    def __pow__(self, n: int) -> "Jet2":
        if not isinstance(n, (int, np.integer)):
            raise JetError("jets only support integer powers")
        if n < 0:
            return reciprocal(self) ** (-n)
        result = Jet2.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus ---------------------------------------------------------
    def partial(self, axis: str) -> "Jet2":
        """Partial derivative.  The order is kept; the top band becomes zero and
        the trusted degree drops by one."""
        n = self.order
        out = np.zeros_like(self.c)
        k = np.arange(1, n + 1, dtype=float)
        if axis == "u":
            out[:n, :] = self.c[1:, :] * k[:, None]
        elif axis == "v":
            out[:, :n] = self.c[:, 1:] * k[None, :]
        else:
            raise JetError(f"unknown axis {axis!r}")
        return Jet2(out, n, self.trusted - 1)

    def integrate_u(self) -> "Jet2":
        """Antiderivative in ``u`` vanishing on ``u = 0`` (top band dropped)."""
        n = self.order
        out = np.zeros_like(self.c)
        out[1:, :] = self.c[:n, :] / np.arange(1, n + 1, dtype=float)[:, None]
        return Jet2(out, n, self.trusted)

    def restrict_u_axis(self) -> "Jet2":
        """The jet of ``u -> f(u, 0)``."""
        out = np.zeros_like(self.c)
        out[:, 0] = self.c[:, 0]
        return Jet2(out, self.order, self.trusted)

    def shift(self, u0: float, v0: float = 0.0) -> "Jet2":
        """Re-expand the truncated polynomial about ``(u0, v0)``.

        Exact for polynomial germs; for truncations of analytic germs the
        degree-d coefficients carry an error of order ``|(u0, v0)|**(N+1-d)``.
        """
        n = self.order
        bu = _shift_matrix(n, u0)
        bv = _shift_matrix(n, v0)
        return Jet2(bu @ self.c @ bv.T, n, self.trusted)

    def with_trusted(self, trusted: int) -> "Jet2":
        return Jet2(self.c, self.order, trusted)

    def cleaned(self, tol: float = 1e-14) -> "Jet2":
        """Copy with coefficients below ``tol * (1 + |f|)`` set to exactly zero."""
        c = np.array(self.c)
        c[np.abs(c) <= tol * (1.0 + self.norm())] = 0.0
        return Jet2(c, self.order, self.trusted)


def _shift_matrix(n: int, t: float) -> np.ndarray:
    b = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        for i in range(k, n + 1):
            b[k, i] = math.comb(i, k) * t ** (i - k)
    return b


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def ring_ops(a: Jet2, b: Jet2 | None, op: str, r: float | None = None) -> Jet2:
    """Dispatch ``add``, ``sub``, ``mul`` or ``scale`` (by ``r``; ``b`` ignored)."""
    if op == "scale":
        return a * float(r)
    if b is None or a.order != b.order:
        raise JetError("incompatible jet orders")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise JetError(f"unknown ring operation {op!r}")


def apply_series(coeffs: Sequence[float], nilpotent: Jet2) -> Jet2:
    """Evaluate ``sum_k coeffs[k] * n**k`` for a jet ``n`` with zero constant term."""
    order = nilpotent.order
    result = Jet2.constant(0.0, order)
    for a in reversed(list(coeffs)[: order + 1]):
        result = result * nilpotent + a
    return result.with_trusted(nilpotent.trusted)


def _split_unit(f: Jet2) -> tuple[float, Jet2]:
    c0 = f.value
    c = np.array(f.c)
    c[0, 0] = 0.0
    return c0, Jet2(c, f.order, f.trusted)


def reciprocal(f: Jet2) -> Jet2:
    """Multiplicative inverse of a unit jet."""
    c0, n = _split_unit(f)
    if abs(c0) <= _tol(f.norm()):
        raise JetError("division by non-unit jet")
    coeffs = [(-1.0) ** k / c0 ** (k + 1) for k in range(f.order + 1)]
    return apply_series(coeffs, n)


def sqrt_jet(f: Jet2) -> Jet2:
    """Square root with positive constant term."""
    c0, n = _split_unit(f)
    if c0 <= _tol(f.norm()):
        raise JetError("sqrt of non-positive-unit jet")
    root = math.sqrt(c0)
    coeffs = [root * _binom_half(k) / c0 ** k for k in range(f.order + 1)]
    return apply_series(coeffs, n)


def _binom_half(k: int) -> float:
    out = 1.0
    for m in range(k):
        out *= (0.5 - m) / (m + 1)
    return out


def partial(f: Jet2, axis: str) -> Jet2:
    return f.partial(axis)


def factor_out(f: Jet2, axis: str, k: int) -> Jet2:
    """Return ``g`` with ``f = axis**k * g``.

    The order is kept, vacated top-degree entries are zero-filled and the
    trusted degree drops by ``k``.
    """
    if k < 1:
        raise JetError("factor_out needs a positive power")
    n = f.order
    c = f.c
    low = c[:, :k] if axis == "v" else c[:k, :] if axis == "u" else None
    if low is None:
        raise JetError(f"unknown axis {axis!r}")
    if np.max(np.abs(low), initial=0.0) > _tol(f.norm()):
        raise JetError("not divisible")
    out = np.zeros_like(c)
    if axis == "v":
        out[:, : n + 1 - k] = c[:, k:]
    else:
        out[: n + 1 - k, :] = c[k:, :]
    return Jet2(out, n, f.trusted - k)


def _powers(x: Jet2) -> list[np.ndarray]:
    out = [Jet2.constant(1.0, x.order).c, x.c]
    for _ in range(2, x.order + 1):
        out.append(_mul_arrays(out[-1], x.c, x.order))
    return out[: x.order + 1]


def _check_substitution(p: Jet2, q: Jet2) -> tuple[Jet2, Jet2]:
    if p.order != q.order:
        raise JetError("incompatible jet orders")
    for s in (p, q):
        if abs(s.value) > _tol(s.norm()):
            raise JetError("substitution not origin-preserving")
    # roundoff-level constants are dropped so powers stay nilpotent
    return _split_unit(p)[1], _split_unit(q)[1]


def _compose_many(fs: Sequence[Jet2], p: Jet2, q: Jet2) -> list[Jet2]:
    p, q = _check_substitution(p, q)
    n = p.order
    pp = _powers(p)
    qp = np.stack(_powers(q))
    trust = min(p.trusted, q.trusted)
    out = []
    for f in fs:
        if f.order != n:
            raise JetError("incompatible jet orders")
        acc = np.zeros((n + 1, n + 1))
        for i in range(n + 1):
            row = f.c[i, : n + 1 - i]
            if not np.any(row):
                continue
            inner = np.tensordot(row, qp[: n + 1 - i], axes=1)
            acc += inner if i == 0 else _mul_arrays(pp[i], inner, n)
        out.append(Jet2(acc, n, min(f.trusted, trust)))
    return out


def compose(f: Jet2, p: Jet2, q: Jet2) -> Jet2:
    """Jet of ``f(p(u, v), q(u, v))`` for origin-preserving ``p``, ``q``."""
    return _compose_many([f], p, q)[0]


# ---------------------------------------------------------------------------
# vector-valued jets
# ---------------------------------------------------------------------------

class Jet2Vec3:
    """Three jets of equal order: a map-germ into R^3."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x: Jet2, y: Jet2, z: Jet2):
        if not (x.order == y.order == z.order):
            raise JetError("incompatible jet orders")
        self.x, self.y, self.z = x, y, z

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "Jet2Vec3":
        return cls(Jet2.zero(order), Jet2.zero(order), Jet2.zero(order))

    @classmethod
    def constant(cls, vec, order: int = DEFAULT_ORDER) -> "Jet2Vec3":
        return cls(*(Jet2.constant(float(a), order) for a in vec))

    @property
    def components(self) -> tuple[Jet2, Jet2, Jet2]:
        return (self.x, self.y, self.z)

    @property
    def order(self) -> int:
        return self.x.order

    @property
    def trusted(self) -> int:
        return min(c.trusted for c in self.components)

    def __iter__(self):
        return iter(self.components)

    def __repr__(self) -> str:
        return f"Jet2Vec3({self.x!r}, {self.y!r}, {self.z!r})"

    def _map(self, fn) -> "Jet2Vec3":
        return Jet2Vec3(*(fn(c) for c in self.components))

    def __add__(self, other: "Jet2Vec3") -> "Jet2Vec3":
        return Jet2Vec3(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "Jet2Vec3") -> "Jet2Vec3":
        return Jet2Vec3(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> "Jet2Vec3":
        return self._map(lambda c: -c)

    def __mul__(self, s) -> "Jet2Vec3":
        """Multiply by a scalar or a scalar jet."""
        return self._map(lambda c: c * s)

    __rmul__ = __mul__

    def dot(self, other: "Jet2Vec3") -> Jet2:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Jet2Vec3") -> "Jet2Vec3":
        a, b = self, other
        return Jet2Vec3(a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x)

    def norm(self) -> Jet2:
        return sqrt_jet(self.dot(self))

    def normalized(self) -> "Jet2Vec3":
        return self * reciprocal(self.norm())

    def partial(self, axis: str) -> "Jet2Vec3":
        return self._map(lambda c: c.partial(axis))

    def factor_out(self, axis: str, k: int) -> "Jet2Vec3":
        return self._map(lambda c: factor_out(c, axis, k))

    def shift(self, u0: float, v0: float = 0.0) -> "Jet2Vec3":
        return self._map(lambda c: c.shift(u0, v0))

    def restrict_u_axis(self) -> "Jet2Vec3":
        return self._map(Jet2.restrict_u_axis)

    def compose(self, p: Jet2, q: Jet2) -> "Jet2Vec3":
        return Jet2Vec3(*_compose_many(self.components, p, q))

    def rotate(self, matrix) -> "Jet2Vec3":
        """Apply a constant linear map of R^3 (e.g. a rotation)."""
        m = np.asarray(matrix, dtype=float)
        cs = self.components
        rows = []
        for r in range(3):
            acc = cs[0] * m[r, 0] + cs[1] * m[r, 1] + cs[2] * m[r, 2]
            rows.append(acc)
        return Jet2Vec3(*rows)

    def value(self) -> np.ndarray:
        return np.array([c.value for c in self.components])

    def derivative(self, i: int, j: int) -> np.ndarray:
        return np.array([c.derivative(i, j) for c in self.components])

    def norm_inf(self) -> float:
        return max(c.norm() for c in self.components)

    def max_difference(self, other: "Jet2Vec3") -> float:
        return max(float(np.max(np.abs(a.c - b.c))) for a, b in zip(self, other))

    def with_trusted(self, trusted: int) -> "Jet2Vec3":
        return self._map(lambda c: c.with_trusted(trusted))

    def __call__(self, u, v):
        return np.stack([c(u, v) for c in self.components], axis=-1)


def det3(a: Jet2Vec3, b: Jet2Vec3, c: Jet2Vec3) -> Jet2:
    return a.dot(b.cross(c))

"""Wavefront OBJ export of a germ sampled on a (u, v) grid."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .germ import GeometryError, SurfaceGerm, singular_curve


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    umin: float
    umax: float
    vmin: float
    vmax: float
    nu: int
    nv: int

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise MeshError("grid needs at least 2 samples per direction")
        if not (self.umin < self.umax and self.vmin < self.vmax):
            raise MeshError("empty parameter range")

    @property
    def us(self) -> np.ndarray:
        return np.linspace(self.umin, self.umax, self.nu)

    @property
    def vs(self) -> np.ndarray:
        return np.linspace(self.vmin, self.vmax, self.nv)


def parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise MeshError(f"bad grid {text!r}, expected NUxNV") from None


def parse_range(text: str) -> tuple[float, float, float, float]:
    parts = text.split(":")
    if len(parts) != 4:
        raise MeshError(f"bad range {text!r}, expected umin:umax:vmin:vmax")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise MeshError(f"bad range {text!r}") from None


def _fmt(x: float) -> str:
    return repr(float(x))


def sample_grid(evaluator: Callable, grid: Grid) -> np.ndarray:
    """Vertices row-major: index ``i * nv + j`` holds ``(us[i], vs[j])``."""
    uu, vv = np.meshgrid(grid.us, grid.vs, indexing="ij")
    with np.errstate(all="ignore"):
        pts = np.asarray(evaluator(uu.ravel(), vv.ravel()), dtype=float).reshape(-1, 3)
    bad = np.flatnonzero(~np.all(np.isfinite(pts), axis=1))
    if bad.size:
        i, j = divmod(int(bad[0]), grid.nv)
        raise MeshError(f"non-finite vertex at grid index ({i}, {j}), (u, v) = ({uu.ravel()[bad[0]]}, {vv.ravel()[bad[0]]})")
    return pts


def triangles(nu: int, nv: int) -> list[tuple[int, int, int]]:
    """Zero-based triangles, two per grid cell."""
    out = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            a, b = i * nv + j, (i + 1) * nv + j
            out.append((a, b, b + 1))
            out.append((a, b + 1, a + 1))
    return out


def export_mesh(g: SurfaceGerm | Callable, grid: Grid) -> str:
    """OBJ text of the surface over ``grid``."""
    evaluator = g.evaluator if isinstance(g, SurfaceGerm) else g
    if evaluator is None:
        raise MeshError("germ has no evaluator")
    pts = sample_grid(evaluator, grid)
    lines = [f"# edgekit mesh {grid.nu}x{grid.nv}"]
    lines += [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in pts]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in triangles(grid.nu, grid.nv)]
    return "\n".join(lines) + "\n"


def singular_polyline(g: SurfaceGerm, grid: Grid, samples: Optional[int] = None) -> str:
    """OBJ polyline of the image of the singular curve ``v = c(u)`` over the
    u-range, with ``c`` the jet of the curve; points leaving the v-range are
    dropped.  Empty (comment only) when the origin has no such curve."""
    n = samples or max(grid.nu, 2)
    header = "# edgekit singular curve"
    try:
        curve, _ = singular_curve(g)
    except GeometryError as exc:
        return f"{header}: none ({exc})\n"
    us = np.linspace(grid.umin, grid.umax, n)
    vs = np.array([curve(u, 0.0) for u in us], dtype=float)
    keep = (vs >= grid.vmin) & (vs <= grid.vmax)
    if keep.sum() < 2:
        return f"{header}: none (outside the parameter range)\n"
    pts = np.asarray(g.evaluator(us[keep], vs[keep]), dtype=float).reshape(-1, 3)
    lines = [header]
    lines += [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in pts]
    lines.append("l " + " ".join(str(k + 1) for k in range(len(pts))))
    return "\n".join(lines) + "\n"


def read_obj(text: str) -> tuple[np.ndarray, list[tuple[int, ...]], list[list[int]]]:
    """Vertices, faces and polylines of an OBJ text (1-based indices kept)."""
    verts, faces, polys = [], [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append(tuple(int(x) for x in parts[1:]))
        elif parts[0] == "l":
            polys.append([int(x) for x in parts[1:]])
    return np.array(verts, dtype=float).reshape(-1, 3), faces, polys

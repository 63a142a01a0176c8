from pathlib import Path

import numpy as np
import pytest

from edgekit.germ import SurfaceGerm
from edgekit.mesh import Grid, MeshError, export_mesh, parse_grid, parse_range, read_obj, singular_polyline
from edgekit.normal_form import realize
from edgekit.presets import NORMAL_FORM_PRESETS, preset

GOLDEN = Path(__file__).parent / "golden"


def test_two_by_two():
    text = export_mesh(realize((0, 0, 0, 0, 0, 1)), Grid(-1, 1, -1, 1, 2, 2))
    verts, faces, _ = read_obj(text)
    assert verts.tolist() == [[-1, 0.5, -1 / 6], [-1, 0.5, 1 / 6], [1, 0.5, -1 / 6], [1, 0.5, 1 / 6]]
    assert faces == [(1, 3, 4), (1, 4, 2)]


def test_vertices_bitwise():
    g = preset("tangent-developable-helix")
    grid = Grid(-0.7, 1.3, -0.5, 0.25, 5, 4)
    verts, faces, _ = read_obj(export_mesh(g, grid))
    uu, vv = np.meshgrid(grid.us, grid.vs, indexing="ij")
    ref = np.asarray(g.evaluator(uu.ravel(), vv.ravel()))
    assert np.array_equal(verts, ref)
    assert len(faces) == 2 * 4 * 3


@pytest.mark.parametrize("name", sorted(NORMAL_FORM_PRESETS))
def test_golden(name):
    got, faces, _ = read_obj(export_mesh(preset(name), Grid(-1, 1, -1, 1, 9, 7)))
    ref, ref_faces, _ = read_obj((GOLDEN / f"{name}.obj").read_text())
    assert faces == ref_faces
    assert np.max(np.abs(got - ref)) <= 1e-9


def test_non_finite_vertex():
    g = SurfaceGerm.from_expressions("map(u, v^2, v^3/(u - 0.5))")
    with pytest.raises(MeshError, match=r"grid index \(3, 0\)"):
        export_mesh(g, Grid(-1, 1, -1, 1, 5, 3))


def test_grid_parsing():
    assert parse_grid("41x21") == (41, 21)
    assert parse_range("-1:2:-0.5:0.5") == (-1, 2, -0.5, 0.5)
    for bad in ("41", "ax3"):
        with pytest.raises(MeshError):
            parse_grid(bad)
    with pytest.raises(MeshError):
        parse_range("1:2:3")
    with pytest.raises(MeshError):
        Grid(1, -1, -1, 1, 3, 3)


def test_singular_polyline():
    g = SurfaceGerm.from_expressions("map(u, (v - u^2)^2, (v - u^2)^3)")
    verts, _, polys = read_obj(singular_polyline(g, Grid(-0.5, 0.5, -1, 1, 11, 3)))
    assert len(polys) == 1 and len(polys[0]) == 11
    # the curve v = u^2 maps to (u, 0, 0)
    assert np.allclose(verts[:, 1:], 0.0, atol=1e-12)
    assert np.allclose(verts[:, 0], np.linspace(-0.5, 0.5, 11))
    text = singular_polyline(SurfaceGerm.from_expressions("map(u, v, 0)"), Grid(-1, 1, -1, 1, 3, 3))
    assert text.startswith("#") and read_obj(text)[0].size == 0

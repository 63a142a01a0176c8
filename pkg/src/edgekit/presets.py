"""Built-in named germs: the six single-coefficient normal forms, the standard
cusp and the tangent developable of a helix."""

from __future__ import annotations

import math

from .germ import SurfaceGerm
from .jet import DEFAULT_ORDER

NORMAL_FORM_PRESETS = {
    "normal-form-a20": (3.0, 0.0, 0.0, 0.0, 0.0, 1.0),
    "normal-form-a30": (0.0, 3.0, 0.0, 0.0, 0.0, 1.0),
    "normal-form-b20": (0.0, 0.0, 3.0, 0.0, 0.0, 1.0),
    "normal-form-b12": (0.0, 0.0, 0.0, 0.0, 3.0, 1.0),
    "normal-form-b30": (0.0, 0.0, 0.0, 3.0, 0.0, 1.0),
    "normal-form-b03": (0.0, 0.0, 0.0, 0.0, 0.0, 3.0),
}

# unit-speed helix with curvature and torsion 1/2
_R = repr(math.sqrt(2.0))
HELIX_TD = (f"map(cos(u/{_R}) - v*sin(u/{_R})/{_R}, "
            f"sin(u/{_R}) + v*cos(u/{_R})/{_R}, u/{_R} + v/{_R})")


def normal_form_expression(coeffs) -> str:
    """Expression text of the polynomial normal form for
    ``(a20, a30, b20, b30, b12, b03)``."""
    a20, a30, b20, b30, b12, b03 = (repr(float(c)) for c in coeffs)
    return (f"map(u, {a20}*u^2/2 + {a30}*u^3/6 + v^2/2, "
            f"{b20}*u^2/2 + {b30}*u^3/6 + {b12}*u*v^2/2 + {b03}*v^3/6)")


PRESETS = {name: normal_form_expression(c) for name, c in NORMAL_FORM_PRESETS.items()}
PRESETS["standard-cusp"] = "map(u, v^2, v^3)"
PRESETS["tangent-developable-helix"] = HELIX_TD


def preset_names() -> list[str]:
    return list(PRESETS)


def preset(name: str, order: int = DEFAULT_ORDER) -> SurfaceGerm:
    try:
        text = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return SurfaceGerm.from_expressions(text, order, name=name)

"""Regenerate the golden normal-form meshes from the polynomial directly.

Run from the repository root: ``python3 tests/golden/make_golden.py``.
The coordinates are computed here with plain numpy, independently of the
package evaluator.
"""

from pathlib import Path

import numpy as np

TUPLES = {
    "normal-form-a20": (3.0, 0.0, 0.0, 0.0, 0.0, 1.0),
    "normal-form-a30": (0.0, 3.0, 0.0, 0.0, 0.0, 1.0),
    "normal-form-b20": (0.0, 0.0, 3.0, 0.0, 0.0, 1.0),
    "normal-form-b12": (0.0, 0.0, 0.0, 0.0, 3.0, 1.0),
    "normal-form-b30": (0.0, 0.0, 0.0, 3.0, 0.0, 1.0),
    "normal-form-b03": (0.0, 0.0, 0.0, 0.0, 0.0, 3.0),
}
NU, NV = 9, 7
RANGE = (-1.0, 1.0, -1.0, 1.0)


def vertices(c):
    a20, a30, b20, b30, b12, b03 = c
    u, v = np.meshgrid(np.linspace(*RANGE[:2], NU), np.linspace(*RANGE[2:], NV), indexing="ij")
    u, v = u.ravel(), v.ravel()
    y = a20 * u**2 / 2 + a30 * u**3 / 6 + v**2 / 2
    z = b20 * u**2 / 2 + b30 * u**3 / 6 + b12 * u * v**2 / 2 + b03 * v**3 / 6
    return np.stack([u, y, z], axis=1)


def main():
    here = Path(__file__).parent
    for name, c in TUPLES.items():
        lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in vertices(c).tolist()]
        for i in range(NU - 1):
            for j in range(NV - 1):
                a, b = i * NV + j + 1, (i + 1) * NV + j + 1
                lines += [f"f {a} {b} {b + 1}", f"f {a} {b + 1} {a + 1}"]
        (here / f"{name}.obj").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

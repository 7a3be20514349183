"""Fixed-parameter figure builders shared by the golden-file regression.

Run ``python3 tests/figures.py`` to rewrite the golden SVGs after an
intentional change to the rendering.
"""
import os

from atf import bidisk, revolution
from atf.diagram import apply_map, preset, render

GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")
SAMPLES = 256


def _ellipsoid(c):
    return revolution.boundary_curve(revolution.ProfileCurve.ellipsoid(c), SAMPLES)


def builders():
    return {
        "fig1a_c1.svg": lambda: _ellipsoid(1.0),
        "fig1b_c10.svg": lambda: _ellipsoid(10.0),
        "fig1c_c0.001.svg": lambda: _ellipsoid(0.001),
        "fig2_c2_mutated.svg": lambda: apply_map(_ellipsoid(2.0), preset("fig2")),
        "fig4_bidisk.svg": lambda: bidisk.base_diagram(SAMPLES),
    }


def render_all():
    return {name: render(build(), "svg") for name, build in builders().items()}


if __name__ == "__main__":
    os.makedirs(GOLDEN_DIR, exist_ok=True)
    for name, text in render_all().items():
        with open(os.path.join(GOLDEN_DIR, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print("wrote", name)

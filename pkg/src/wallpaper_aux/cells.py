"""Parametric unit cells and the bundled cell files."""

from __future__ import annotations

import math
from importlib import resources

from .homogenize import Element, FrameUnitCell, load_cell
from .lattice import Lattice

SQRT3 = math.sqrt(3.0)


def square_grid(EA: float = 1.0, EI: float | None = 1e-3) -> FrameUnitCell:
    """Square grid of bars, one node per cell.  ``EI=None`` gives pin joints."""
    kind = "truss" if EI is None else "frame"
    EI = 0.0 if EI is None else EI
    elements = (Element(0, 0, (1, 0), EA, EI, kind), Element(0, 0, (0, 1), EA, EI, kind))
    name = "square truss" if kind == "truss" else "square frame"
    return FrameUnitCell(Lattice((1, 0), (0, 1)), ((0.0, 0.0),), elements, name=name)


def triangular_truss(EA: float = 1.0) -> FrameUnitCell:
    lattice = Lattice((1, 0), (0.5, SQRT3 / 2))
    elements = tuple(Element(0, 0, off, EA) for off in ((1, 0), (0, 1), (-1, 1)))
    return FrameUnitCell(lattice, ((0.0, 0.0),), elements, name="triangular truss")


def honeycomb(h: float = 1.0, l: float = 1.0, theta_deg: float = 30.0,
              EA: float = 1.0, EI: float = 1e-3) -> FrameUnitCell:
    """Hexagonal honeycomb with vertical ribs ``h`` and inclined ribs ``l`` at ``theta``.

    ``theta_deg > 0`` is the convex honeycomb (regular for h = l, 30 deg);
    ``theta_deg < 0`` turns the inclined ribs inward, giving the re-entrant
    (bow-tie) honeycomb.
    """
    t = math.radians(theta_deg)
    a1 = (2 * l * math.cos(t), 0.0)
    a2 = (l * math.cos(t), h + l * math.sin(t))
    lattice = Lattice(a1, a2)
    # node B sits at (0, h) above node A at the origin
    fb = lattice.to_fractional((0.0, h))
    nodes = ((0.0, 0.0), tuple(fb))
    elements = (
        Element(0, 1, (0, 0), EA, EI, "frame"),
        Element(1, 0, (0, 1), EA, EI, "frame"),
        Element(1, 0, (-1, 1), EA, EI, "frame"),
    )
    name = "re-entrant honeycomb" if theta_deg < 0 else "honeycomb"
    return FrameUnitCell(lattice, nodes, elements, name=name)


def reentrant(EA: float = 1.0, EI: float = 1e-3) -> FrameUnitCell:
    return honeycomb(h=2.0, l=1.0, theta_deg=-30.0, EA=EA, EI=EI)


def kagome(EA: float = 1.0, EI: float = 1e-3) -> FrameUnitCell:
    lattice = Lattice((1, 0), (0.5, SQRT3 / 2))
    nodes = ((0.5, 0.0), (0.0, 0.5), (0.5, 0.5))
    pairs = [
        (0, 1, (0, 0)), (0, 2, (0, 0)), (1, 2, (0, 0)),
        (0, 1, (1, -1)), (0, 2, (0, -1)), (1, 2, (-1, 0)),
    ]
    elements = tuple(Element(i, j, off, EA, EI, "frame") for i, j, off in pairs)
    return FrameUnitCell(lattice, nodes, elements, name="kagome frame")


BUILDERS = {
    "square_frame": square_grid,
    "square_truss": lambda: square_grid(EI=None),
    "triangular_truss": triangular_truss,
    "honeycomb_frame": honeycomb,
    "reentrant_frame": reentrant,
    "kagome_frame": kagome,
}


def bundled_cell_names() -> list[str]:
    folder = resources.files("wallpaper_aux") / "data" / "cells"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def bundled_cell(name: str) -> FrameUnitCell:
    path = resources.files("wallpaper_aux") / "data" / "cells" / f"{name}.json"
    with resources.as_file(path) as p:
        return load_cell(p)

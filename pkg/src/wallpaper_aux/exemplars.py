"""Hand-built patterns, one per wallpaper group, plus a few named classics.

Group exemplars are orbits of a scalene triangle in general position
under the coset representatives of each group, written as coordinate
triplets in the conventional cell.  The two centred groups (``*x`` and
``2*22``) are given on their conventional rectangular cell with the
centring translation, so they also exercise primitive-cell detection.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

import numpy as np

from .lattice import Lattice
from .orbifold import WallpaperGroup as W
from .orbifold import as_group
from .pattern import LabeledPoint, PeriodicPattern, Polygon, Segment

SQRT3 = math.sqrt(3.0)

OBLIQUE = Lattice((1.0, 0.0), (0.31, 1.17))
RECTANGULAR = Lattice((1.0, 0.0), (0.0, 1.37))
CENTERED = Lattice((1.0, 0.0), (0.0, 1.63))
SQUARE = Lattice((1.0, 0.0), (0.0, 1.0))
HEXAGONAL = Lattice((1.0, 0.0), (-0.5, SQRT3 / 2))

_P3 = ["x,y", "-y,x-y", "-x+y,-x"]
_P4 = ["x,y", "-x,-y", "-y,x", "y,-x"]
_P6 = _P3 + ["-x,-y", "y,-x+y", "x-y,x"]

# (lattice, coordinate triplets, centring translations)
_TABLE = {
    W.O: (OBLIQUE, ["x,y"], []),
    W.C2222: (OBLIQUE, ["x,y", "-x,-y"], []),
    W.STAR_STAR: (RECTANGULAR, ["x,y", "-x,y"], []),
    W.XX: (RECTANGULAR, ["x,y", "-x,y+1/2"], []),
    W.STAR_X: (CENTERED, ["x,y", "-x,y"], [(0.5, 0.5)]),
    W.STAR2222: (RECTANGULAR, ["x,y", "-x,-y", "-x,y", "x,-y"], []),
    W.C22STAR: (RECTANGULAR, ["x,y", "-x,-y", "-x+1/2,y", "x+1/2,-y"], []),
    W.C22X: (RECTANGULAR, ["x,y", "-x,-y", "-x+1/2,y+1/2", "x+1/2,-y+1/2"], []),
    W.C2STAR22: (CENTERED, ["x,y", "-x,-y", "-x,y", "x,-y"], [(0.5, 0.5)]),
    W.C442: (SQUARE, _P4, []),
    W.STAR442: (SQUARE, _P4 + ["-x,y", "x,-y", "y,x", "-y,-x"], []),
    W.C4STAR2: (
        SQUARE,
        _P4 + ["-x+1/2,y+1/2", "x+1/2,-y+1/2", "y+1/2,x+1/2", "-y+1/2,-x+1/2"],
        [],
    ),
    W.C333: (HEXAGONAL, _P3, []),
    W.STAR333: (HEXAGONAL, _P3 + ["-y,-x", "-x+y,y", "x,x-y"], []),
    W.C3STAR3: (HEXAGONAL, _P3 + ["y,x", "x-y,-y", "-x,-x+y"], []),
    W.C632: (HEXAGONAL, _P6, []),
    W.STAR632: (
        HEXAGONAL,
        _P6 + ["-y,-x", "-x+y,y", "x,x-y", "y,x", "x-y,-y", "-x,-x+y"],
        [],
    ),
}

GENERIC_TRIANGLE = ((0.11, 0.06), (0.29, 0.10), (0.17, 0.23))

_TERM = re.compile(r"([+-]?)(\d+/\d+|\d+|x|y)")


def parse_triplet(text: str) -> tuple[np.ndarray, np.ndarray]:
    """``"-x+1/2,y"`` -> (linear matrix, translation) acting on fractional coords."""
    M = np.zeros((2, 2))
    tau = np.zeros(2)
    for row, expr in enumerate(text.replace(" ", "").split(",")):
        pos = 0
        for m in _TERM.finditer(expr):
            if m.start() != pos:
                raise ValueError(f"bad coordinate triplet {text!r}")
            pos = m.end()
            sign = -1.0 if m.group(1) == "-" else 1.0
            tok = m.group(2)
            if tok == "x":
                M[row, 0] += sign
            elif tok == "y":
                M[row, 1] += sign
            else:
                tau[row] += sign * float(Fraction(tok))
        if pos != len(expr):
            raise ValueError(f"bad coordinate triplet {text!r}")
    return M, tau


def orbit_pattern(lattice: Lattice, triplets, centring=(), motif=GENERIC_TRIANGLE,
                  label: str | None = None) -> PeriodicPattern:
    verts = np.array(motif, dtype=float)
    prims = []
    shifts = [np.zeros(2)] + [np.asarray(c, dtype=float) for c in centring]
    for trip in triplets:
        M, tau = parse_triplet(trip)
        image = verts @ M.T + tau
        for shift in shifts:
            prims.append(Polygon(tuple(map(tuple, image + shift)), label))
    return PeriodicPattern(lattice, tuple(prims))


def exemplar(group) -> PeriodicPattern:
    g = as_group(group)
    lattice, triplets, centring = _TABLE[g]
    return orbit_pattern(lattice, triplets, centring)


def rotating_squares(theta: float = 0.0, spacing: float = 1.0) -> PeriodicPattern:
    """Rigid squares hinged at their corners, alternately rotated by +/-theta.

    ``theta = 0`` is the closed state (a plain square tiling).  The cell
    holds 2 x 2 squares; squares on the same checkerboard colour turn the
    same way.
    """
    side = spacing / (math.cos(theta) + math.sin(theta))
    cell = 2.0 * spacing
    lattice = Lattice((cell, 0.0), (0.0, cell))
    half = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=float) * side / 2
    prims = []
    for i in range(2):
        for j in range(2):
            angle = theta if (i + j) % 2 == 0 else -theta
            c, s = math.cos(angle), math.sin(angle)
            R = np.array([[c, -s], [s, c]])
            verts = half @ R.T + np.array([i, j]) * spacing
            prims.append(Polygon(tuple(map(tuple, verts / cell))))
    return PeriodicPattern(lattice, tuple(prims))


def honeycomb() -> PeriodicPattern:
    """Regular hexagonal honeycomb drawn as its three bond segments."""
    lattice = Lattice((1.0, 0.0), (0.5, SQRT3 / 2))
    a, b = (1 / 3, 1 / 3), (2 / 3, 2 / 3)
    segs = (
        Segment(a, b),
        Segment(a, (b[0] - 1, b[1])),
        Segment(a, (b[0], b[1] - 1)),
    )
    return PeriodicPattern(lattice, segs)


def square_grid() -> PeriodicPattern:
    lattice = SQUARE
    return PeriodicPattern(lattice, (Segment((0, 0), (1, 0)), Segment((0, 0), (0, 1))))


def scalene_triangle() -> PeriodicPattern:
    return PeriodicPattern(OBLIQUE, (Polygon(GENERIC_TRIANGLE),))


def labeled_points(points, lattice=SQUARE) -> PeriodicPattern:
    return PeriodicPattern(lattice, tuple(LabeledPoint(p, lab) for p, lab in points))


NAMED = {
    "rotating_squares_closed": lambda: rotating_squares(0.0),
    "rotating_squares_open": lambda: rotating_squares(math.radians(15.0)),
    "honeycomb": honeycomb,
    "square_grid": square_grid,
    "scalene_triangle": scalene_triangle,
}

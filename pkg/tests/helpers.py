"""Pattern transformations shared by the classification tests."""

import math

import numpy as np

from wallpaper_aux.lattice import Lattice
from wallpaper_aux.pattern import PeriodicPattern, _with_points


def random_unimodular(rng, steps: int = 4) -> np.ndarray:
    U = np.eye(2, dtype=np.int64)
    for _ in range(steps):
        k = int(rng.integers(-2, 3))
        E = np.array([[1, k], [0, 1]]) if rng.random() < 0.5 else np.array([[1, 0], [k, 1]])
        U = U @ E
    if rng.random() < 0.5:
        U = U @ np.array([[0, 1], [1, 0]])  # orientation flip is still unimodular
    return U


def rigid_motion(pat: PeriodicPattern, angle: float, shift) -> PeriodicPattern:
    """Rotate the whole pattern by ``angle`` and translate it by ``shift`` (cartesian)."""
    c, s = math.cos(angle), math.sin(angle)
    R = np.array([[c, -s], [s, c]])
    lattice = Lattice.from_matrix(R @ pat.lattice.matrix)
    df = np.linalg.solve(lattice.matrix, np.asarray(shift, float))
    prims = [_with_points(p, np.array(p.points) + df) for p in pat.motif]
    return PeriodicPattern(lattice, tuple(prims), pat.tolerance)


def rebased(pat: PeriodicPattern, U) -> PeriodicPattern:
    return pat.with_lattice(pat.lattice.transformed(U))


def scaled(pat: PeriodicPattern, k: float) -> PeriodicPattern:
    lattice = Lattice.from_matrix(k * pat.lattice.matrix)
    return PeriodicPattern(lattice, pat.motif, pat.tolerance)


def scramble(pat: PeriodicPattern, rng) -> PeriodicPattern:
    """Random rigid motion, random unimodular basis change and a random scale."""
    out = rigid_motion(pat, rng.uniform(0, 2 * math.pi), rng.uniform(-3, 3, size=2))
    out = rebased(out, random_unimodular(rng))
    return scaled(out, rng.uniform(0.5, 3.0))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []

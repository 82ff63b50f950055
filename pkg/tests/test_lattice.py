import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import shortest_basis_bruteforce
from wallpaper_aux.errors import DegenerateLattice
from wallpaper_aux.lattice import Lattice, automorphisms, reduce_lattice, reduce_with_transform


def test_reduction_example():
    red = reduce_lattice(Lattice((1, 0), (5, 1)))
    assert np.allclose(red.a1, (1, 0))
    assert np.allclose(np.abs(red.a2), (0, 1))


def test_reduced_square_is_fixed():
    red = reduce_lattice(Lattice((1, 0), (0, 1)))
    assert red == Lattice((1, 0), (0, 1))


def test_degenerate():
    with pytest.raises(DegenerateLattice):
        reduce_lattice(Lattice((1, 0), (2, 0)))
    with pytest.raises(DegenerateLattice):
        Lattice((0, 0), (0, 1)).check()


coord = st.floats(-4, 4, allow_nan=False).map(lambda v: round(v, 3))


@given(coord, coord, coord, coord)
def test_reduction_matches_bruteforce(x1, y1, x2, y2):
    det = x1 * y2 - y1 * x2
    scale = np.hypot(x1, y1) * np.hypot(x2, y2)
    assume(abs(det) > 0.05 and abs(det) > 0.1 * scale)
    lat = Lattice((x1, y1), (x2, y2))
    red, U = reduce_with_transform(lat)
    b1, b2 = np.array(red.a1), np.array(red.a2)
    o1, o2 = shortest_basis_bruteforce(lat.a1, lat.a2, radius=30)
    assert b1 @ b1 == pytest.approx(o1 @ o1, rel=1e-9)
    assert b2 @ b2 == pytest.approx(o2 @ o2, rel=1e-9)
    # same lattice: integer, unimodular transform
    assert abs(round(np.linalg.det(U))) == 1
    assert np.allclose(lat.matrix @ U, red.matrix)
    # reduction conditions and orientation
    assert b1 @ b1 <= b2 @ b2 * (1 + 1e-12)
    assert abs(2 * b1 @ b2) <= b1 @ b1 * (1 + 1e-9)
    assert red.det > 0


@pytest.mark.parametrize("lat,count", [
    (Lattice((1, 0), (0.31, 1.17)), 2),
    (Lattice((1, 0), (0, 1.37)), 4),
    (Lattice((1, 0), (0.5, 1.4)), 4),
    (Lattice((1, 0), (0, 1)), 8),
    (Lattice((1, 0), (-0.5, np.sqrt(3) / 2)), 12),
])
def test_automorphism_counts(lat, count):
    auts = automorphisms(reduce_lattice(lat))
    assert len(auts) == count
    G = reduce_lattice(lat).gram
    for M in auts:
        assert np.allclose(M.T @ G @ M, G)


def test_fractional_round_trip():
    lat = Lattice((1, 0.2), (0.3, 1.1))
    f = np.array([[0.25, 0.75], [0.1, -0.4]])
    assert np.allclose(lat.to_fractional(lat.to_cartesian(f)), f)


def test_hexagonal_near_tie_terminates():
    # rotated hexagonal basis whose rounding sits on a half-integer tie
    lat = Lattice((0.9223056141998929, 0.38646132279357315), (-1.0487730981804668, -1.3784320761404767))
    red, U = reduce_with_transform(lat)
    assert abs(round(np.linalg.det(U))) == 1
    assert np.hypot(*red.a1) == pytest.approx(np.hypot(*red.a2), rel=1e-9)
    assert len(automorphisms(red)) == 12

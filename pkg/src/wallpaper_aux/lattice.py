"""2D lattices and Lagrange (Gauss) reduction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLattice


@dataclass(frozen=True)
class Lattice:
    """Translation lattice spanned by ``a1`` and ``a2`` (cartesian)."""

    a1: tuple[float, float]
    a2: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "a1", tuple(float(v) for v in self.a1))
        object.__setattr__(self, "a2", tuple(float(v) for v in self.a2))

    @classmethod
    def from_matrix(cls, A) -> "Lattice":
        A = np.asarray(A, dtype=float)
        return cls(tuple(A[:, 0]), tuple(A[:, 1]))

    @property
    def matrix(self) -> np.ndarray:
        """Basis vectors as columns."""
        return np.array([self.a1, self.a2], dtype=float).T

    @property
    def gram(self) -> np.ndarray:
        A = self.matrix
        return A.T @ A

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def area(self) -> float:
        return abs(self.det)

    @property
    def shortest_length(self) -> float:
        """Length of the shortest nonzero lattice vector."""
        red, _ = reduce_with_transform(self)
        return float(np.hypot(*red.a1))

    def to_cartesian(self, frac) -> np.ndarray:
        return np.asarray(frac, dtype=float) @ self.matrix.T

    def to_fractional(self, xy) -> np.ndarray:
        return np.linalg.solve(self.matrix, np.asarray(xy, dtype=float).T).T

    def transformed(self, U) -> "Lattice":
        """New basis ``A @ U`` for an integer matrix ``U``."""
        return Lattice.from_matrix(self.matrix @ np.asarray(U, dtype=float))

    def check(self, rel_tol: float = 1e-12) -> None:
        A = self.matrix
        scale = float(np.linalg.norm(A[:, 0]) * np.linalg.norm(A[:, 1]))
        if not np.all(np.isfinite(A)) or scale == 0.0 or abs(self.det) <= rel_tol * scale:
            raise DegenerateLattice(f"basis {self.a1}, {self.a2} is linearly dependent")


def reduce_with_transform(lat: Lattice) -> tuple[Lattice, np.ndarray]:
    """Lagrange-reduce ``lat``; also return integer ``U`` with ``reduced = A @ U``.

    The reduced basis satisfies |b1| <= |b2| and |2 b1.b2| <= |b1|^2 and
    is right-handed.
    """
    lat.check()
    A = lat.matrix
    U = np.eye(2, dtype=np.int64)
    b1, b2 = A[:, 0].copy(), A[:, 1].copy()
    u1, u2 = U[:, 0].copy(), U[:, 1].copy()
    if b2 @ b2 < b1 @ b1:
        b1, b2, u1, u2 = b2, b1, u2, u1
    # swap only on a strict decrease, so near-ties (hexagonal lattices) cannot cycle
    for _ in range(10_000):
        mu = int(np.rint((b1 @ b2) / (b1 @ b1)))
        b2 = b2 - mu * b1
        u2 = u2 - mu * u1
        if b2 @ b2 >= (b1 @ b1) * (1 - 1e-12):
            break
        b1, b2, u1, u2 = b2, b1, u2, u1
    else:  # pragma: no cover
        raise DegenerateLattice("lattice reduction did not terminate")
    if b1[0] * b2[1] - b1[1] * b2[0] < 0:
        b2, u2 = -b2, -u2
    U = np.column_stack([u1, u2])
    # recompute from the integer transform so the basis is exactly a lattice basis
    return Lattice.from_matrix(A @ U), U


def reduce_lattice(lat: Lattice) -> Lattice:
    return reduce_with_transform(lat)[0]


def automorphisms(lat: Lattice, rel_tol: float = 1e-6) -> list[np.ndarray]:
    """Integer matrices ``M`` with ``M^T G M = G``: the lattice's point symmetries.

    ``lat`` should already be reduced; then every automorphism has entries
    in {-1, 0, 1}.  The cartesian form is ``A M A^-1``.
    """
    G = lat.gram
    scale = float(np.max(np.abs(G)))
    found = []
    for entries in itertools.product((-1, 0, 1), repeat=4):
        M = np.array(entries, dtype=np.int64).reshape(2, 2)
        if abs(round(np.linalg.det(M))) != 1:
            continue
        if np.max(np.abs(M.T @ G @ M - G)) <= rel_tol * scale:
            found.append(M)
    return found


def small_vectors(radius: int = 2) -> np.ndarray:
    """Integer coefficient vectors with entries in [-radius, radius]."""
    r = range(-radius, radius + 1)
    return np.array(list(itertools.product(r, r)), dtype=np.int64)

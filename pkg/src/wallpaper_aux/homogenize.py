"""Effective plane elasticity of periodic truss and frame unit cells.

Conventions
-----------
Strains and stresses use the engineering (Voigt) order ``(xx, zz, xz)``
with the engineering shear ``gamma_xz = 2 eps_xz``, plane stress, unit
depth.  Poisson's ratios are taken under uniaxial *stress*:
``nu_xz = -S[1, 0] / S[0, 0]`` is the transverse z contraction for a
pull along x.

Periodicity is imposed by master-slave elimination: every element end
that reaches into a neighbouring cell is written in terms of the master
node's fluctuation plus the macroscopic strain times the lattice offset,
``u(x + a_k) = u(x) + E a_k``.  Only the rigid translation is pinned;
any other zero-energy mode is reported as :class:`SingularSystem` rather
than regularized, because a mechanism has no finite linear stiffness.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import CellFormatError, NonInvertibleC, SingularElement, SingularSystem
from .lattice import Lattice
from .pattern import LabeledPoint, PeriodicPattern, Segment

MECHANISM_TOL = 1e-10
ISOTROPY_TOL = 1e-6
MAX_INFINITESIMAL = 1e-3


@dataclass(frozen=True)
class Element:
    i: int
    j: int
    offset: tuple[int, int] = (0, 0)
    EA: float = 1.0
    EI: float = 0.0
    kind: str = "truss"

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(int(v) for v in self.offset))
        if self.kind not in ("truss", "frame"):
            raise CellFormatError(f"unknown element kind {self.kind!r}")
        if not self.EA > 0:
            raise CellFormatError("axial stiffness EA must be positive")
        if self.kind == "frame" and not self.EI > 0:
            raise CellFormatError("frame elements need a positive bending stiffness EI")


@dataclass(frozen=True)
class FrameUnitCell:
    lattice: Lattice
    nodes: tuple[tuple[float, float], ...]
    elements: tuple[Element, ...]
    thickness: float = 1.0
    name: str = ""

    def __post_init__(self):
        self.lattice.check()
        nodes = np.array(self.nodes, dtype=float).reshape(-1, 2)
        if len(nodes) == 0:
            raise CellFormatError("cell has no nodes")
        if not self.elements:
            raise CellFormatError("cell has no elements")
        shift = np.floor(nodes + 1e-12).astype(int)
        elements = []
        for e in self.elements:
            if not (0 <= e.i < len(nodes) and 0 <= e.j < len(nodes)):
                raise CellFormatError(f"element {e} references a missing node")
            off = np.asarray(e.offset) + shift[e.j] - shift[e.i]
            elements.append(Element(e.i, e.j, tuple(int(v) for v in off), e.EA, e.EI, e.kind))
        object.__setattr__(self, "nodes", tuple(map(tuple, (nodes - shift).tolist())))
        object.__setattr__(self, "elements", tuple(elements))

    @property
    def area(self) -> float:
        return self.lattice.area * self.thickness

    @property
    def positions(self) -> np.ndarray:
        return self.lattice.to_cartesian(np.array(self.nodes))

    def element_vector(self, e: Element) -> np.ndarray:
        A = self.lattice.matrix
        fi = np.asarray(self.nodes[e.i])
        fj = np.asarray(self.nodes[e.j]) + np.asarray(e.offset)
        return A @ (fj - fi)

    @cached_property
    def frame_nodes(self) -> frozenset:
        return frozenset(n for e in self.elements if e.kind == "frame" for n in (e.i, e.j))

    # geometric transformations (all return equivalent cells)

    def supercell(self, n1: int, n2: int) -> "FrameUnitCell":
        N = len(self.nodes)
        nodes, elements = [], []
        for p in range(n1):
            for q in range(n2):
                for f in self.nodes:
                    nodes.append(((f[0] + p) / n1, (f[1] + q) / n2))
        for p in range(n1):
            for q in range(n2):
                base = (p * n2 + q) * N
                for e in self.elements:
                    tp, tq = p + e.offset[0], q + e.offset[1]
                    target = ((tp % n1) * n2 + (tq % n2)) * N + e.j
                    off = (tp // n1, tq // n2)
                    elements.append(Element(base + e.i, target, off, e.EA, e.EI, e.kind))
        lattice = self.lattice.transformed(np.diag([n1, n2]))
        return FrameUnitCell(lattice, tuple(nodes), tuple(elements), self.thickness,
                             f"{self.name} {n1}x{n2}".strip())

    def rebased(self, U) -> "FrameUnitCell":
        """Same cell on the basis ``A @ U`` (``U`` unimodular integer)."""
        U = np.asarray(U, dtype=float)
        if abs(abs(round(np.linalg.det(U))) - 1) > 0 or np.any(U != np.rint(U)):
            raise CellFormatError("basis change must be a unimodular integer matrix")
        Uinv = np.rint(np.linalg.inv(U))
        nodes = [tuple(Uinv @ np.asarray(f)) for f in self.nodes]
        elements = [
            Element(e.i, e.j, tuple(int(v) for v in Uinv @ np.asarray(e.offset)), e.EA, e.EI, e.kind)
            for e in self.elements
        ]
        return FrameUnitCell(self.lattice.transformed(U), tuple(nodes), tuple(elements),
                             self.thickness, self.name)

    def translated(self, shift) -> "FrameUnitCell":
        """Move all nodes by ``shift`` (fractional); the structure is unchanged."""
        shift = np.asarray(shift, dtype=float)
        nodes = [tuple(np.asarray(f) + shift) for f in self.nodes]
        return FrameUnitCell(self.lattice, tuple(nodes), self.elements, self.thickness, self.name)

    def rotated(self, angle: float) -> "FrameUnitCell":
        c, s = math.cos(angle), math.sin(angle)
        lattice = Lattice.from_matrix(np.array([[c, -s], [s, c]]) @ self.lattice.matrix)
        return FrameUnitCell(lattice, self.nodes, self.elements, self.thickness, self.name)

    def scaled_stiffness(self, k: float) -> "FrameUnitCell":
        elements = [Element(e.i, e.j, e.offset, k * e.EA, k * e.EI, e.kind) for e in self.elements]
        return FrameUnitCell(self.lattice, self.nodes, tuple(elements), self.thickness, self.name)

    def to_pattern(self, tolerance: float = 1e-9) -> PeriodicPattern:
        """Geometry of the cell as a pattern: members as labelled segments, nodes as points."""
        prims = [LabeledPoint(f, "node") for f in self.nodes]
        for e in self.elements:
            fi = self.nodes[e.i]
            fj = np.asarray(self.nodes[e.j]) + np.asarray(e.offset)
            label = f"{e.kind}:EA={e.EA:.12g}:EI={e.EI:.12g}"
            prims.append(Segment(fi, tuple(fj), label))
        return PeriodicPattern(self.lattice, tuple(prims), tolerance)

    def to_dict(self) -> dict:
        elements = []
        for e in self.elements:
            d = {"i": e.i, "j": e.j, "offset": list(e.offset), "EA": e.EA, "kind": e.kind}
            if e.kind == "frame" or e.EI:
                d["EI"] = e.EI
            elements.append(d)
        out = {
            "lattice": {"a1": list(self.lattice.a1), "a2": list(self.lattice.a2)},
            "nodes": [list(f) for f in self.nodes],
            "elements": elements,
        }
        if self.thickness != 1.0:
            out["thickness"] = self.thickness
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FrameUnitCell":
        try:
            lat = data["lattice"]
            lattice = Lattice(tuple(lat["a1"]), tuple(lat["a2"]))
            nodes = tuple(tuple(map(float, f)) for f in data["nodes"])
            elements = tuple(
                Element(
                    int(e["i"]), int(e["j"]), tuple(e.get("offset", (0, 0))),
                    float(e["EA"]), float(e.get("EI", 0.0)), e.get("kind", "truss"),
                )
                for e in data["elements"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CellFormatError(f"malformed cell description: {exc}") from exc
        return cls(lattice, nodes, elements, float(data.get("thickness", 1.0)), data.get("name", ""))


def load_cell(path) -> FrameUnitCell:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CellFormatError(f"{path}: {exc}") from exc
    return FrameUnitCell.from_dict(data)


def dump_cell(cell: FrameUnitCell, path) -> None:
    Path(path).write_text(json.dumps(cell.to_dict(), indent=2) + "\n")


@dataclass(frozen=True)
class MacroStrain:
    eps_xx: float = 0.0
    eps_zz: float = 0.0
    gamma_xz: float = 0.0

    def __post_init__(self):
        if max(abs(self.eps_xx), abs(self.eps_zz), abs(self.gamma_xz)) > MAX_INFINITESIMAL:
            raise ValueError(f"strain components must stay below {MAX_INFINITESIMAL} (infinitesimal regime)")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.eps_xx, self.eps_zz, self.gamma_xz], dtype=float)


def _strain_map(dx: np.ndarray) -> np.ndarray:
    """Displacement of a point at ``dx`` under unit Voigt strains, as a 2x3 matrix."""
    x, z = dx
    return np.array([[x, 0.0, 0.5 * z], [0.0, z, 0.5 * x]])


def element_stiffness(e: Element, dx: np.ndarray) -> np.ndarray:
    """Global-frame stiffness of one member with end separation ``dx``.

    4x4 (truss: u_i, u_j) or 6x6 (frame: u_i, theta_i, u_j, theta_j).
    """
    L = float(np.hypot(*dx))
    if L <= 1e-12:
        raise SingularElement(f"element {e.i}->{e.j} offset {e.offset} has zero length")
    c, s = dx / L
    if e.kind == "truss":
        k = e.EA / L
        b = np.array([-c, -s, c, s])
        return k * np.outer(b, b)
    a = e.EA / L
    b = 12 * e.EI / L**3
    m = 6 * e.EI / L**2
    d = 4 * e.EI / L
    h = 2 * e.EI / L
    local = np.array([
        [a, 0, 0, -a, 0, 0],
        [0, b, m, 0, -b, m],
        [0, m, d, 0, -m, h],
        [-a, 0, 0, a, 0, 0],
        [0, -b, -m, 0, b, -m],
        [0, m, h, 0, -m, d],
    ])
    r = np.array([[c, s, 0], [-s, c, 0], [0, 0, 1.0]])
    T = scipy.linalg.block_diag(r, r)
    return T.T @ local @ T


@dataclass
class StiffnessSystem:
    """Quadratic energy ``E(q, e) = q.K.q/2 + q.G.e + e.H.e/2`` per unit cell.

    ``q`` are the periodic fluctuation DOFs, ``e`` the Voigt macro strain.
    """

    cell: FrameUnitCell
    K: sp.csr_matrix
    G: np.ndarray
    H: np.ndarray
    dofs: list  # per node: [ux, uz] or [ux, uz, theta]
    element_dofs: list = field(repr=False)
    element_K: list = field(repr=False)
    element_Q: list = field(repr=False)

    @property
    def n_dof(self) -> int:
        return self.K.shape[0]

    @property
    def area(self) -> float:
        return self.cell.area

    @cached_property
    def free(self) -> np.ndarray:
        pinned = set(self.dofs[0][:2])
        return np.array([k for k in range(self.n_dof) if k not in pinned], dtype=int)

    @cached_property
    def _factor(self):
        free = self.free
        if len(free) == 0:
            return None
        Kff = self.K[free][:, free].toarray()
        ev = np.linalg.eigvalsh(Kff)
        scale = max(float(np.max(np.abs(ev))), float(np.trace(self.H)), 1e-300)
        if ev[0] <= MECHANISM_TOL * scale:
            n_zero = int(np.sum(ev <= MECHANISM_TOL * scale))
            raise SingularSystem(
                f"cell {self.cell.name or '<unnamed>'} has {n_zero} zero-energy mode(s) "
                "beyond rigid translation"
            )
        return scipy.linalg.cho_factor(Kff)

    def fluctuation(self, e: np.ndarray) -> np.ndarray:
        q = np.zeros(self.n_dof)
        fac = self._factor
        if fac is not None:
            q[self.free] = -scipy.linalg.cho_solve(fac, self.G[self.free] @ e)
        return q

    def energy(self, q: np.ndarray, e: np.ndarray) -> float:
        return float(0.5 * q @ (self.K @ q) + q @ self.G @ e + 0.5 * e @ self.H @ e)

    def element_energy(self, q: np.ndarray, e: np.ndarray) -> float:
        """Sum of member energies from element-level displacements."""
        total = 0.0
        for idx, ke, Qe in zip(self.element_dofs, self.element_K, self.element_Q):
            d = q[idx] + Qe @ e
            total += 0.5 * d @ ke @ d
        return total

    def gradient(self, q: np.ndarray, e: np.ndarray) -> np.ndarray:
        return self.K @ q + self.G @ e

    @cached_property
    def voigt_scale(self) -> float:
        return float(np.trace(self.H)) / self.area


def assemble(cell: FrameUnitCell) -> StiffnessSystem:
    dofs = []
    n = 0
    for i in range(len(cell.nodes)):
        k = 3 if i in cell.frame_nodes else 2
        dofs.append(list(range(n, n + k)))
        n += k
    rows, cols, vals = [], [], []
    G = np.zeros((n, 3))
    H = np.zeros((3, 3))
    element_dofs, element_K, element_Q = [], [], []
    for e in cell.elements:
        dx = cell.element_vector(e)
        ke = element_stiffness(e, dx)
        if e.kind == "truss":
            idx = dofs[e.i][:2] + dofs[e.j][:2]
            Qe = np.zeros((4, 3))
            Qe[2:4] = _strain_map(dx)
        else:
            idx = dofs[e.i] + dofs[e.j]
            Qe = np.zeros((6, 3))
            Qe[3:5] = _strain_map(dx)
        idx = np.array(idx)
        r, c = np.meshgrid(idx, idx, indexing="ij")
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(ke.ravel())
        np.add.at(G, idx, ke @ Qe)
        H += Qe.T @ ke @ Qe
        element_dofs.append(idx)
        element_K.append(ke)
        element_Q.append(Qe)
    K = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()
    return StiffnessSystem(cell, K, G, H, dofs, element_dofs, element_K, element_Q)


@dataclass
class CaseResult:
    strain: np.ndarray
    q: np.ndarray
    energy: float  # per unit cell
    energy_density: float  # per unit area
    stress: np.ndarray  # cell-averaged Voigt stress
    dofs: list = field(repr=False)

    @property
    def displacements(self) -> np.ndarray:
        """Periodic fluctuation displacement of every node (n_nodes x 2)."""
        return np.array([self.q[d[:2]] for d in self.dofs])

    @property
    def rotations(self) -> np.ndarray:
        return np.array([self.q[d[2]] if len(d) == 3 else 0.0 for d in self.dofs])


def _as_system(cell_or_system) -> StiffnessSystem:
    if isinstance(cell_or_system, StiffnessSystem):
        return cell_or_system
    return assemble(cell_or_system)


def _solve(system: StiffnessSystem, e: np.ndarray) -> CaseResult:
    q = system.fluctuation(e)
    energy = system.energy(q, e)
    density = energy / system.area
    norm2 = float(e @ e)
    if norm2 > 0 and density <= MECHANISM_TOL * system.voigt_scale * norm2:
        raise SingularSystem(
            f"macro strain {e.tolist()} deforms cell {system.cell.name or '<unnamed>'} "
            "through a zero-energy mechanism"
        )
    stress = (system.H @ e + system.G.T @ q) / system.area
    return CaseResult(e, q, energy, density, stress, system.dofs)


def solve_case(cell_or_system, strain) -> CaseResult:
    if not isinstance(strain, MacroStrain):
        strain = MacroStrain(*strain)
    return _solve(_as_system(cell_or_system), strain.vector)


@dataclass(frozen=True)
class EffectiveElasticity:
    C: np.ndarray
    S: np.ndarray
    cell_area: float

    @classmethod
    def from_stiffness(cls, C, cell_area: float = 1.0) -> "EffectiveElasticity":
        C = np.asarray(C, dtype=float)
        return cls(C, _invert(C), cell_area)

    @classmethod
    def from_compliance(cls, S, cell_area: float = 1.0) -> "EffectiveElasticity":
        S = np.asarray(S, dtype=float)
        return cls(_invert(S), S, cell_area)

    def to_dict(self) -> dict:
        return {"C": self.C.tolist(), "S": self.S.tolist(), "cell_area": self.cell_area}


def _invert(M: np.ndarray) -> np.ndarray:
    M = 0.5 * (M + M.T)
    ev = np.linalg.eigvalsh(M)
    if ev[0] <= MECHANISM_TOL * max(abs(ev[-1]), 1e-300):
        raise NonInvertibleC(f"tensor is singular or indefinite (eigenvalues {ev.tolist()})")
    return np.linalg.inv(M)


def effective_tensor(cell_or_system) -> EffectiveElasticity:
    system = _as_system(cell_or_system)
    cols = [_solve(system, unit).stress for unit in np.eye(3)]
    C = np.column_stack(cols)
    C = 0.5 * (C + C.T)
    return EffectiveElasticity.from_stiffness(C, system.area)


@dataclass(frozen=True)
class PoissonReport:
    nu_xz: float
    nu_zx: float
    effective: float
    auxetic_xz: bool
    auxetic_zx: bool
    isotropic: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def isotropy_defect(C: np.ndarray) -> float:
    """Largest violation of planar isotropy, relative to the largest entry of ``C``."""
    C = np.asarray(C, dtype=float)
    scale = float(np.max(np.abs(C)))
    defects = [
        C[0, 0] - C[1, 1],
        C[0, 2],
        C[1, 2],
        C[0, 0] - C[0, 1] - 2 * C[2, 2],
    ]
    return float(np.max(np.abs(defects)) / scale)


def poisson(eff: EffectiveElasticity) -> PoissonReport:
    S = eff.S
    nu_xz = float(-S[1, 0] / S[0, 0]) + 0.0  # no negative zero
    nu_zx = float(-S[0, 1] / S[1, 1]) + 0.0
    return PoissonReport(
        nu_xz=nu_xz,
        nu_zx=nu_zx,
        effective=0.5 * (nu_xz + nu_zx),
        auxetic_xz=nu_xz < 0,
        auxetic_zx=nu_zx < 0,
        isotropic=isotropy_defect(eff.C) <= ISOTROPY_TOL,
    )


def directional_poisson(eff: EffectiveElasticity, theta: float) -> float:
    """Poisson's ratio for uniaxial stress along direction ``theta`` (radians)."""
    c, s = math.cos(theta), math.sin(theta)
    sigma = np.array([c * c, s * s, c * s])
    exx, ezz, gxz = eff.S @ sigma
    axial = exx * c * c + ezz * s * s + gxz * c * s
    transverse = exx * s * s + ezz * c * c - gxz * c * s
    return float(-transverse / axial)


def poisson_sweep(eff: EffectiveElasticity, n: int) -> list[tuple[float, float]]:
    """``n`` samples of nu(theta) over [0, 180) degrees, as (degrees, nu)."""
    return [(180.0 * k / n, directional_poisson(eff, math.pi * k / n)) for k in range(n)]

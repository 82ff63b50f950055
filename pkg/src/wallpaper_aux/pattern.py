"""Symmetry detection and wallpaper-group classification of periodic patterns.

A pattern is a lattice plus a motif of geometric primitives given in
fractional cell coordinates.  Detection works on the primitive, reduced
cell: any extra translational symmetry found in the motif is folded into
a finer lattice first.  For every point symmetry ``M`` of that lattice the
matching translation is found by anchoring one primitive of the motif
(its image must land on a congruent primitive), and each candidate is
confirmed with :func:`invariant_under`.  Rotation centres and mirror and
glide axes are then solved from those coset representatives, and
:func:`classify` walks the usual decision tree (highest rotation,
reflections, centres on mirrors, mirror directions, glides).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .errors import IncompatibleLinearPart, PatternFormatError
from .lattice import Lattice, automorphisms, reduce_with_transform, small_vectors
from .orbifold import WallpaperGroup

DEFAULT_TOLERANCE = 1e-9


def _pt(p) -> tuple[float, float]:
    x, y = p
    return (float(x), float(y))


@dataclass(frozen=True)
class LabeledPoint:
    position: tuple[float, float]
    label: str | None = None
    kind = "point"

    def __post_init__(self):
        object.__setattr__(self, "position", _pt(self.position))

    @property
    def points(self):
        return (self.position,)


@dataclass(frozen=True)
class Segment:
    p: tuple[float, float]
    q: tuple[float, float]
    label: str | None = None
    kind = "segment"

    def __post_init__(self):
        object.__setattr__(self, "p", _pt(self.p))
        object.__setattr__(self, "q", _pt(self.q))

    @property
    def points(self):
        return (self.p, self.q)


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[tuple[float, float], ...]
    label: str | None = None
    kind = "polygon"

    def __post_init__(self):
        verts = tuple(_pt(v) for v in self.vertices)
        if len(verts) < 3:
            raise PatternFormatError("a polygon needs at least 3 vertices")
        object.__setattr__(self, "vertices", verts)

    @property
    def points(self):
        return self.vertices


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float
    label: str | None = None
    kind = "circle"

    def __post_init__(self):
        object.__setattr__(self, "center", _pt(self.center))
        if not self.radius > 0:
            raise PatternFormatError("circle radius must be positive")

    @property
    def points(self):
        return (self.center,)


Primitive = Union[LabeledPoint, Segment, Polygon, Circle]


def _with_points(prim: Primitive, pts) -> Primitive:
    pts = [tuple(map(float, p)) for p in pts]
    if prim.kind == "point":
        return LabeledPoint(pts[0], prim.label)
    if prim.kind == "segment":
        return Segment(pts[0], pts[1], prim.label)
    if prim.kind == "polygon":
        return Polygon(tuple(pts), prim.label)
    return Circle(pts[0], prim.radius, prim.label)


def _wrap(prim: Primitive) -> Primitive:
    # positions are wrapped by the primitive's centroid so shapes stay rigid
    pts = np.array(prim.points, dtype=float)
    shift = np.floor(pts.mean(axis=0) + 1e-12)
    if not shift.any():
        return prim
    return _with_points(prim, pts - shift)


@dataclass
class _Shape:
    kind: str
    label: str | None
    pts: np.ndarray  # cartesian, k x 2
    radius: float = 0.0

    @property
    def key(self):
        return (self.kind, self.label, len(self.pts))

    @property
    def centroid(self) -> np.ndarray:
        return self.pts.mean(axis=0)


def _same_points(a: np.ndarray, b: np.ndarray, kind: str, tol: float) -> bool:
    if kind in ("point", "circle"):
        return bool(np.max(np.abs(a - b)) <= tol)
    if kind == "segment":
        return bool(
            np.max(np.abs(a - b)) <= tol or np.max(np.abs(a - b[::-1])) <= tol
        )
    n = len(a)
    for seq in (b, b[::-1]):
        for k in range(n):
            if np.max(np.abs(a - np.roll(seq, k, axis=0))) <= tol:
                return True
    return False


@dataclass(frozen=True)
class Isometry:
    """``x -> linear @ x + translation`` in cartesian coordinates."""

    linear: tuple[tuple[float, float], tuple[float, float]]
    translation: tuple[float, float]

    @classmethod
    def make(cls, R, t) -> "Isometry":
        R = np.asarray(R, dtype=float)
        return cls((tuple(R[0]), tuple(R[1])), _pt(t))

    @classmethod
    def rotation(cls, angle: float, center=(0.0, 0.0)) -> "Isometry":
        c, s = math.cos(angle), math.sin(angle)
        R = np.array([[c, -s], [s, c]])
        center = np.asarray(center, dtype=float)
        return cls.make(R, center - R @ center)

    @classmethod
    def reflection(cls, angle: float, point=(0.0, 0.0), glide: float = 0.0) -> "Isometry":
        """Reflection in the line through ``point`` at ``angle``, plus a glide along it."""
        c, s = math.cos(2 * angle), math.sin(2 * angle)
        R = np.array([[c, s], [s, -c]])
        point = np.asarray(point, dtype=float)
        d = np.array([math.cos(angle), math.sin(angle)])
        return cls.make(R, point - R @ point + glide * d)

    @property
    def R(self) -> np.ndarray:
        return np.array(self.linear, dtype=float)

    @property
    def t(self) -> np.ndarray:
        return np.array(self.translation, dtype=float)

    def apply(self, xy) -> np.ndarray:
        return np.asarray(xy, dtype=float) @ self.R.T + self.t

    def compose(self, other: "Isometry") -> "Isometry":
        """``self`` after ``other``."""
        return Isometry.make(self.R @ other.R, self.R @ other.t + self.t)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.R))

    @property
    def kind(self) -> str:
        R, t = self.R, self.t
        if self.det > 0:
            if np.allclose(R, np.eye(2), atol=1e-12):
                return "translation" if np.any(np.abs(t) > 1e-12) else "identity"
            return "rotation"
        angle = 0.5 * math.atan2(R[1, 0], R[0, 0])
        along = t @ np.array([math.cos(angle), math.sin(angle)])
        return "glide" if abs(along) > 1e-12 else "mirror"

    @property
    def order(self) -> int:
        """Order of the linear part (1 for translations, 2 for reflections)."""
        if self.det < 0:
            return 2
        angle = abs(math.atan2(self.R[1, 0], self.R[0, 0]))
        if angle < 1e-9:
            return 1
        return int(round(2 * math.pi / angle))


@dataclass(frozen=True)
class PeriodicPattern:
    lattice: Lattice
    motif: tuple
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        self.lattice.check()
        if not 0 < self.tolerance < 0.01:
            raise PatternFormatError(f"tolerance {self.tolerance} outside (0, 0.01)")
        motif = tuple(_wrap(p) for p in self.motif)
        if not motif:
            raise PatternFormatError("motif is empty")
        object.__setattr__(self, "motif", motif)

    @cached_property
    def abs_tol(self) -> float:
        return self.tolerance * self.lattice.shortest_length

    @cached_property
    def shapes(self) -> list[_Shape]:
        A = self.lattice.matrix
        out = []
        for prim in self.motif:
            pts = np.array(prim.points, dtype=float) @ A.T
            out.append(_Shape(prim.kind, prim.label, pts, getattr(prim, "radius", 0.0)))
        return out

    @cached_property
    def buckets(self) -> dict:
        b: dict = {}
        for s in self.shapes:
            b.setdefault(s.key, []).append(s)
        return b

    def with_lattice(self, lattice: Lattice, dedupe: bool = False) -> "PeriodicPattern":
        """Same cartesian motif expressed in another basis (same or finer lattice)."""
        Ainv = np.linalg.inv(lattice.matrix)
        prims = []
        for prim, shape in zip(self.motif, self.shapes):
            prims.append(_with_points(prim, shape.pts @ Ainv.T))
        new = PeriodicPattern(lattice, tuple(prims), self.tolerance)
        if not dedupe:
            return new
        kept: list[int] = []
        shapes = new.shapes
        for i, s in enumerate(shapes):
            if not any(_match_mod_lattice(s, shapes[j], lattice.matrix, new.abs_tol) for j in kept):
                kept.append(i)
        return PeriodicPattern(lattice, tuple(new.motif[i] for i in kept), self.tolerance)

    def reduced(self) -> "PeriodicPattern":
        red, _ = reduce_with_transform(self.lattice)
        return self.with_lattice(red)


def _match_mod_lattice(s: _Shape, q: _Shape, A: np.ndarray, tol: float, pts=None) -> bool:
    if s.key != q.key or abs(s.radius - q.radius) > tol:
        return False
    pts = s.pts if pts is None else pts
    delta = q.centroid - pts.mean(axis=0)
    f = np.linalg.solve(A, delta)
    k = np.rint(f)
    if np.max(np.abs(A @ (f - k))) > tol:
        return False
    return _same_points(pts + A @ k, q.pts, s.kind, tol)


def _check_compatible(pat: PeriodicPattern, R: np.ndarray) -> None:
    if np.max(np.abs(R.T @ R - np.eye(2))) > 1e-6:
        raise IncompatibleLinearPart("linear part is not orthogonal")
    A = pat.lattice.matrix
    M = np.linalg.solve(A, R @ A)
    if np.max(np.abs(M - np.rint(M))) > max(1e-6, 100 * pat.tolerance):
        raise IncompatibleLinearPart("linear part does not preserve the lattice")


def _invariant(pat: PeriodicPattern, R: np.ndarray, t: np.ndarray) -> bool:
    A = pat.lattice.matrix
    tol = pat.abs_tol
    buckets = pat.buckets
    for s in pat.shapes:
        image = s.pts @ R.T + t
        if not any(_match_mod_lattice(s, q, A, tol, pts=image) for q in buckets[s.key]):
            return False
    return True


def invariant_under(pat: PeriodicPattern, iso: Isometry) -> bool:
    """Does ``iso`` map the periodically extended motif onto itself?"""
    R = iso.R
    _check_compatible(pat, R)
    return _invariant(pat, R, iso.t)


def _anchor(pat: PeriodicPattern) -> _Shape:
    key = min(pat.buckets, key=lambda k: (len(pat.buckets[k]), str(k)))
    return pat.buckets[key][0]


def _candidate_translations(pat: PeriodicPattern, R: np.ndarray):
    s0 = _anchor(pat)
    c0 = R @ s0.centroid
    for q in pat.buckets[s0.key]:
        yield q.centroid - c0


def _frac_close(f, g, A, tol) -> bool:
    d = np.asarray(f) - np.asarray(g)
    d = d - np.rint(d)
    return bool(np.linalg.norm(A @ d) <= tol)


def _wrap_frac(f) -> tuple[float, float]:
    f = np.asarray(f, dtype=float) % 1.0
    f[np.abs(f - 1.0) < 1e-9] = 0.0
    f[np.abs(f) < 1e-12] = 0.0
    return (float(f[0]), float(f[1]))


def extra_translations(pat: PeriodicPattern) -> list[tuple[float, float]]:
    """Fractional translations (mod 1, nonzero) that leave the pattern invariant."""
    A = pat.lattice.matrix
    found: list[tuple[float, float]] = []
    for t in _candidate_translations(pat, np.eye(2)):
        f = np.linalg.solve(A, t)
        if _frac_close(f, (0.0, 0.0), A, pat.abs_tol):
            continue
        if any(_frac_close(f, g, A, pat.abs_tol) for g in found):
            continue
        if _invariant(pat, np.eye(2), t):
            found.append(_wrap_frac(f))
    return found


def primitive_pattern(pat: PeriodicPattern) -> PeriodicPattern:
    """Reduced cell of the pattern's full translation lattice."""
    pat = pat.reduced()
    for _ in range(16):
        extra = extra_translations(pat)
        if not extra:
            return pat
        A = pat.lattice.matrix
        index = len(extra) + 1
        target = pat.lattice.area / index
        fracs = [np.zeros(2)] + [np.array(f) for f in extra]
        vecs = []
        for f in fracs:
            for lam in small_vectors(2):
                v = A @ (f + lam)
                if np.linalg.norm(v) > pat.abs_tol:
                    vecs.append(v)
        vecs.sort(key=lambda v: (round(float(v @ v), 12), tuple(np.round(v, 12))))
        v1 = vecs[0]
        v2 = next(
            v for v in vecs
            if abs(abs(v1[0] * v[1] - v1[1] * v[0]) - target) <= 1e-6 * target
        )
        finer = Lattice.from_matrix(np.column_stack([v1, v2]))
        pat = pat.with_lattice(finer, dedupe=True).reduced()
    raise PatternFormatError("could not find a primitive cell")  # pragma: no cover


@dataclass(frozen=True)
class Line:
    """Symmetry axis: passes through ``point`` (fractional) along lattice vector ``direction``."""

    point: tuple[float, float]
    direction: tuple[int, int]
    period: float  # length of the shortest lattice translation along the axis
    glide: float = 0.0  # glide length; 0 for mirror lines

    def to_dict(self) -> dict:
        return {
            "point": list(self.point),
            "direction": list(self.direction),
            "period": self.period,
            "glide": self.glide,
        }


@dataclass(frozen=True)
class SymmetryInventory:
    lattice: Lattice  # primitive reduced lattice all coordinates refer to
    operations: tuple[Isometry, ...]  # one representative per point-group element
    rotation_centers: tuple[tuple[tuple[float, float], int], ...]
    mirror_lines: tuple[Line, ...]
    glide_lines: tuple[Line, ...]
    highest_rotation_order: int
    primitive: PeriodicPattern = field(repr=False, compare=False, default=None)

    @property
    def has_reflection(self) -> bool:
        return bool(self.mirror_lines)

    @property
    def has_glide(self) -> bool:
        return bool(self.glide_lines)

    @property
    def mirror_directions(self) -> int:
        return len({ln.direction for ln in self.mirror_lines})

    def centers_on_mirrors(self) -> bool:
        A = self.lattice.matrix
        for f, _ in self.rotation_centers:
            c = A @ np.asarray(f)
            if not any(_on_line(c, ln, A) for ln in self.mirror_lines):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "lattice": {"a1": list(self.lattice.a1), "a2": list(self.lattice.a2)},
            "highest_rotation_order": self.highest_rotation_order,
            "rotation_centers": [
                {"center": list(c), "order": n} for c, n in self.rotation_centers
            ],
            "mirror_lines": [ln.to_dict() for ln in self.mirror_lines],
            "glide_lines": [ln.to_dict() for ln in self.glide_lines],
            "point_group_order": len(self.operations),
        }


def _on_line(c: np.ndarray, ln: Line, A: np.ndarray, tol: float = 1e-7) -> bool:
    d = A @ np.asarray(ln.direction, dtype=float)
    d = d / np.linalg.norm(d)
    n = np.array([-d[1], d[0]])
    p = A @ np.asarray(ln.point)
    spacing = _normal_spacing(A, n)
    off = ((c - p) @ n) % spacing
    scale = float(np.linalg.norm(A[:, 0]))
    return min(off, spacing - off) <= tol * scale


def _normal_spacing(A: np.ndarray, n: np.ndarray) -> float:
    proj = np.abs(small_vectors(3) @ (A.T @ n))
    scale = float(np.linalg.norm(A[:, 0]))
    return float(np.min(proj[proj > 1e-9 * scale]))


def _rotation_centers(op: Isometry, A: np.ndarray, tol: float):
    R, t = op.R, op.t
    n = op.order
    out = []
    for lam in small_vectors(2):
        c = np.linalg.solve(np.eye(2) - R, t + A @ lam)
        f = _wrap_frac(np.linalg.solve(A, c))
        if not any(_frac_close(f, g, A, tol) for g, _ in out):
            out.append((f, n))
    return out


def _axes(op: Isometry, A: np.ndarray, tol: float):
    """Mirror and glide axes of one reflection coset, deduplicated mod the lattice."""
    R, t = op.R, op.t
    phi = 0.5 * math.atan2(R[1, 0], R[0, 0])
    d = np.array([math.cos(phi), math.sin(phi)])
    n = np.array([-d[1], d[0]])
    lams = small_vectors(3)
    scale = float(np.linalg.norm(A[:, 0]))
    p_n = _normal_spacing(A, n)
    along = lams @ (A.T @ d)
    across = lams @ (A.T @ n)
    mask = (np.abs(across) <= 1e-9 * scale) & (along > 1e-9 * scale)
    i = int(np.argmin(np.where(mask, along, np.inf)))
    p_d = float(along[i])
    direction = tuple(int(v) for v in lams[i])

    classes: list[list] = []  # [offset, set of glide values]
    for lam in lams:
        s = t + A @ lam
        off = (0.5 * (s @ n)) % p_n
        if p_n - off <= tol:
            off = 0.0
        g = (s @ d) % p_d
        if p_d - g <= tol:
            g = 0.0
        for cls in classes:
            delta = abs(cls[0] - off)
            if min(delta, p_n - delta) <= tol:
                cls[1].append(g)
                break
        else:
            classes.append([off, [g]])

    mirrors, glides = [], []
    for off, gs in sorted(classes, key=lambda c: c[0]):
        point = _wrap_frac(np.linalg.solve(A, off * n))
        if any(g <= tol for g in gs):
            mirrors.append(Line(point, direction, p_d, 0.0))
        else:
            glides.append(Line(point, direction, p_d, float(min(gs))))
    return mirrors, glides


def detect_symmetries(pat: PeriodicPattern) -> SymmetryInventory:
    prim = primitive_pattern(pat)
    A = prim.lattice.matrix
    Ainv = np.linalg.inv(A)
    tol = prim.abs_tol
    ops: list[Isometry] = []
    for M in automorphisms(prim.lattice, rel_tol=max(4 * prim.tolerance, 1e-12)):
        R = A @ M @ Ainv
        for t in _candidate_translations(prim, R):
            if _invariant(prim, R, t):
                ops.append(Isometry.make(R, t))
                break

    center_tol = max(10 * tol, 1e-9 * prim.lattice.shortest_length)
    centers: list[list] = []
    mirrors: list[Line] = []
    glides: list[Line] = []
    for op in ops:
        if op.det > 0 and op.order > 1:
            if op.order not in (2, 3, 4, 6):  # pragma: no cover - lattice forbids it
                raise AssertionError(f"rotation of order {op.order}")
            for f, n in _rotation_centers(op, A, center_tol):
                for entry in centers:
                    if _frac_close(f, entry[0], A, center_tol):
                        entry[1] = max(entry[1], n)
                        break
                else:
                    centers.append([f, n])
        elif op.det < 0:
            m, g = _axes(op, A, center_tol)
            mirrors.extend(m)
            glides.extend(g)

    centers.sort(key=lambda e: (-e[1], e[0]))
    return SymmetryInventory(
        lattice=prim.lattice,
        operations=tuple(ops),
        rotation_centers=tuple((tuple(f), n) for f, n in centers),
        mirror_lines=tuple(mirrors),
        glide_lines=tuple(glides),
        highest_rotation_order=max((n for _, n in centers), default=1),
        primitive=prim,
    )


def classify_inventory(inv: SymmetryInventory) -> WallpaperGroup:
    W = WallpaperGroup
    order = inv.highest_rotation_order
    refl = inv.has_reflection
    if order == 6:
        return W.STAR632 if refl else W.C632
    if order == 4:
        if not refl:
            return W.C442
        return W.STAR442 if inv.centers_on_mirrors() else W.C4STAR2
    if order == 3:
        if not refl:
            return W.C333
        return W.STAR333 if inv.centers_on_mirrors() else W.C3STAR3
    if order == 2:
        if refl:
            if inv.mirror_directions < 2:
                return W.C22STAR
            return W.STAR2222 if inv.centers_on_mirrors() else W.C2STAR22
        return W.C22X if inv.has_glide else W.C2222
    if refl:
        return W.STAR_X if inv.has_glide else W.STAR_STAR
    return W.XX if inv.has_glide else W.O


def classify(pat: PeriodicPattern) -> WallpaperGroup:
    return classify_inventory(detect_symmetries(pat))

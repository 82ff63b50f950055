"""The "more symmetric than" order on wallpaper groups.

Groups that embed in each other abstractly are merged into one class,
leaving 14 classes.  The cover edges below are read off the Hasse-style
diagram of those classes, including the dotted 632 -> 2222 arrow, which
is treated as an ordinary edge (nothing distinguishes it semantically).
Queries use reachability, so a redundant or missing transitive edge
never changes an answer.

``is_more_symmetric(g, h)`` is true when ``h <= g``: there is a downward
path from the class of ``g`` to the class of ``h``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .orbifold import WallpaperGroup as W
from .orbifold import as_group, features


@dataclass(frozen=True)
class SymmetryClass:
    members: frozenset
    # member order used for display, as the diagram writes it
    order: tuple = field(default=(), compare=False)

    @property
    def label(self) -> str:
        names = self.order or tuple(sorted(self.members, key=_canonical_index))
        return "/".join(g.value for g in names)

    def __contains__(self, group) -> bool:
        return as_group(group) in self.members

    def __str__(self) -> str:
        return self.label


def _canonical_index(g: W) -> int:
    return list(W).index(g)


_CLASS_MEMBERS = [
    (W.STAR632,),
    (W.C632,),
    (W.C3STAR3, W.STAR333),
    (W.C333,),
    (W.STAR442,),
    (W.C4STAR2,),
    (W.C442,),
    (W.C2STAR22, W.STAR2222),
    (W.C22STAR,),
    (W.C22X,),
    (W.C2222,),
    (W.STAR_STAR, W.STAR_X),
    (W.XX,),
    (W.O,),
]

CLASSES: tuple[SymmetryClass, ...] = tuple(SymmetryClass(frozenset(m), m) for m in _CLASS_MEMBERS)
_INDEX = {g: i for i, cls in enumerate(CLASSES) for g in cls.members}

_EDGES = [
    (W.STAR632, W.C632),
    (W.STAR632, W.C2STAR22),
    (W.STAR632, W.C3STAR3),
    (W.C632, W.C333),
    (W.C632, W.C2222),  # dotted in the source diagram
    (W.C3STAR3, W.C333),
    (W.C3STAR3, W.STAR_STAR),
    (W.STAR442, W.C4STAR2),
    (W.C4STAR2, W.C442),
    (W.C4STAR2, W.C22STAR),
    (W.C4STAR2, W.C2STAR22),
    (W.C442, W.C2222),
    (W.C2STAR22, W.C22STAR),
    (W.C2STAR22, W.STAR_STAR),
    (W.C22STAR, W.C22X),
    (W.C22STAR, W.STAR_STAR),
    (W.C22X, W.C2222),
    (W.C22X, W.XX),
    (W.C2222, W.O),
    (W.STAR_STAR, W.XX),
    (W.XX, W.O),
    (W.C333, W.O),
]


class RotationCategory(enum.Enum):
    SIX_AND_THREE_FOLD = "6 & 3 fold"
    FOUR_FOLD = "4 fold"
    TWO_FOLD = "2 fold"
    NO_ROTATION = "no rotation"


def class_of(group) -> SymmetryClass:
    return CLASSES[_INDEX[as_group(group)]]


def covers() -> list[tuple[SymmetryClass, SymmetryClass]]:
    return [(class_of(a), class_of(b)) for a, b in _EDGES]


@lru_cache(maxsize=None)
def _reachability() -> np.ndarray:
    n = len(CLASSES)
    reach = np.eye(n, dtype=bool)
    for a, b in _EDGES:
        reach[_INDEX[a], _INDEX[b]] = True
    # Warshall
    for k in range(n):
        reach |= reach[:, [k]] & reach[[k], :]
    reach.setflags(write=False)
    return reach


def reachability_matrix() -> np.ndarray:
    """14x14 boolean matrix; entry [i, j] means CLASSES[j] <= CLASSES[i]."""
    return _reachability()


def is_more_symmetric(g, h) -> bool:
    """True when ``g`` is at least as symmetric as ``h`` (i.e. ``h <= g``)."""
    return bool(_reachability()[_INDEX[as_group(g)], _INDEX[as_group(h)]])


def leq(h, g) -> bool:
    return is_more_symmetric(g, h)


def rotation_category(group) -> RotationCategory:
    order = features(as_group(group)).highest_rotation_order
    if order in (3, 6):
        return RotationCategory.SIX_AND_THREE_FOLD
    if order == 4:
        return RotationCategory.FOUR_FOLD
    if order == 2:
        return RotationCategory.TWO_FOLD
    return RotationCategory.NO_ROTATION


def minimal_classes() -> list[SymmetryClass]:
    reach = _reachability()
    n = len(CLASSES)
    return [CLASSES[i] for i in range(n) if not any(reach[i, j] for j in range(n) if j != i)]


def maximal_classes() -> list[SymmetryClass]:
    reach = _reachability()
    n = len(CLASSES)
    return [CLASSES[j] for j in range(n) if not any(reach[i, j] for i in range(n) if i != j)]


@dataclass(frozen=True)
class AxiomReport:
    reflexive: bool
    antisymmetric: bool
    transitive: bool
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return self.reflexive and self.antisymmetric and self.transitive


def poset_axioms_check() -> AxiomReport:
    reach = _reachability()
    n = len(CLASSES)
    reflexive = all(reach[i, i] for i in range(n))
    antisymmetric = all(
        not (reach[i, j] and reach[j, i]) for i in range(n) for j in range(n) if i != j
    )
    transitive = all(
        reach[i, k]
        for i in range(n)
        for j in range(n)
        for k in range(n)
        if reach[i, j] and reach[j, k]
    )
    return AxiomReport(reflexive, antisymmetric, transitive, pairs_checked=n * n)


_COLORS = {6: "orange", 4: "red", 3: "blue", 2: "violet", 1: "green"}


def to_dot() -> str:
    """Graphviz description of the diagram, colored by highest rotation order."""
    lines = ["digraph wallpaper_poset {", "  node [shape=box, style=rounded];"]
    for i, cls in enumerate(CLASSES):
        order = max(features(g).highest_rotation_order for g in cls.members)
        lines.append(f'  n{i} [label="{cls.label}", color={_COLORS[order]}];')
    for a, b in _EDGES:
        style = " [style=dotted]" if (a, b) == (W.C632, W.C2222) else ""
        lines.append(f"  n{_INDEX[a]} -> n{_INDEX[b]}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""The 17 wallpaper groups in Conway's orbifold notation.

Symbols are written in ASCII: ``*`` for a mirror boundary, ``x`` for a
cross-cap, ``o`` for the handle and the digits 2, 3, 4, 6 for cone and
corner points.  Unicode spellings (``×``, ``∗``, ``∘``) are accepted on
input and normalized away.

>>> parse_symbol("4*2")
OrbifoldSymbol(cones=(4,), kaleidoscopes=((2,),), cross_caps=0, handle=False)
>>> format_symbol(parse_symbol("236"))
'632'
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DigitOutOfRestriction, NotAWallpaperGroup, UnknownCharacter

ALLOWED_ORDERS = (2, 3, 4, 6)

_REPLACEMENTS = {
    "×": "x", "✕": "x", "X": "x",
    "∗": "*", "⁎": "*", "﹡": "*", "＊": "*",
    "∘": "o", "○": "o", "◦": "o", "ο": "o", "O": "o",
}
_DROP = set(" \t\n$^{}")


class WallpaperGroup(enum.Enum):
    """The 17 wallpaper groups, in canonical order.  Values are ASCII symbols."""

    O = "o"
    XX = "xx"
    STAR_X = "*x"
    STAR_STAR = "**"
    C2222 = "2222"
    C22X = "22x"
    C22STAR = "22*"
    STAR2222 = "*2222"
    C2STAR22 = "2*22"
    C442 = "442"
    C4STAR2 = "4*2"
    STAR442 = "*442"
    C333 = "333"
    C3STAR3 = "3*3"
    STAR333 = "*333"
    C632 = "632"
    STAR632 = "*632"

    @property
    def symbol(self) -> str:
        return self.value

    @property
    def unicode(self) -> str:
        return self.value.replace("x", "×")

    @classmethod
    def from_symbol(cls, text: str) -> "WallpaperGroup":
        return group_of(parse_symbol(text))

    def __str__(self) -> str:
        return self.value


class Chirality(enum.Enum):
    CHIRAL = "chiral"
    ACHIRAL = "achiral"


@dataclass(frozen=True)
class OrbifoldSymbol:
    cones: tuple[int, ...] = ()
    kaleidoscopes: tuple[tuple[int, ...], ...] = ()
    cross_caps: int = 0
    handle: bool = False

    def __str__(self) -> str:
        return format_symbol(self)

    @property
    def orders(self) -> tuple[int, ...]:
        return self.cones + tuple(n for k in self.kaleidoscopes for n in k)


@dataclass(frozen=True)
class GroupFeatures:
    highest_rotation_order: int
    has_reflection: bool
    has_cross_cap: bool
    has_cone_points: bool
    has_corner_points: bool
    chirality: Chirality


def _normalize(text: str) -> str:
    text = unicodedata.normalize("NFKC", text)
    text = text.replace("\\times", "x").replace("\\circ", "o").replace("\\ast", "*")
    out = []
    for ch in text:
        if ch in _DROP:
            continue
        out.append(_REPLACEMENTS.get(ch, ch))
    return "".join(out)


def _canonical_corners(corners: tuple[int, ...]) -> tuple[int, ...]:
    # corner sequences are cyclic and may be read in either direction
    if not corners:
        return corners
    variants = []
    for seq in (corners, corners[::-1]):
        for i in range(len(seq)):
            variants.append(seq[i:] + seq[:i])
    return max(variants)


def canonical(sym: OrbifoldSymbol) -> OrbifoldSymbol:
    return OrbifoldSymbol(
        cones=tuple(sorted(sym.cones, reverse=True)),
        kaleidoscopes=tuple(
            sorted((_canonical_corners(tuple(k)) for k in sym.kaleidoscopes), reverse=True)
        ),
        cross_caps=sym.cross_caps,
        handle=sym.handle,
    )


def euler_cost(sym: OrbifoldSymbol) -> Fraction:
    """Conway's cost of an orbifold symbol, as an exact rational.

    Wallpaper groups are exactly the symbols that cost 2.
    """
    cost = Fraction(0)
    if sym.handle:
        cost += 2
    cost += sym.cross_caps
    for n in sym.cones:
        cost += Fraction(n - 1, n)
    for corners in sym.kaleidoscopes:
        cost += 1
        for n in corners:
            cost += Fraction(n - 1, 2 * n)
    return cost


def format_symbol(sym: OrbifoldSymbol) -> str:
    sym = canonical(sym)
    parts = ["o" if sym.handle else ""]
    parts.append("".join(str(n) for n in sym.cones))
    for corners in sym.kaleidoscopes:
        parts.append("*" + "".join(str(n) for n in corners))
    parts.append("x" * sym.cross_caps)
    return "".join(parts)


def _parse_structure(text: str) -> OrbifoldSymbol:
    s = _normalize(text)
    if not s:
        raise NotAWallpaperGroup(f"empty orbifold symbol {text!r}")
    handles = 0
    cones: list[int] = []
    kaleidoscopes: list[list[int]] = []
    crosses = 0
    phase = 0  # 0 handle, 1 cones, 2 kaleidoscopes, 3 cross-caps
    for ch in s:
        if ch == "o":
            if phase > 0:
                raise NotAWallpaperGroup(f"misplaced 'o' in {text!r}")
            handles += 1
        elif ch.isdigit():
            n = int(ch)
            if n not in ALLOWED_ORDERS:
                raise DigitOutOfRestriction(
                    f"rotation order {n} in {text!r} violates the crystallographic restriction"
                )
            if phase == 3:
                raise NotAWallpaperGroup(f"digit after cross-cap in {text!r}")
            if phase == 2:
                kaleidoscopes[-1].append(n)
            else:
                phase = 1
                cones.append(n)
        elif ch == "*":
            if phase == 3:
                raise NotAWallpaperGroup(f"mirror after cross-cap in {text!r}")
            phase = 2
            kaleidoscopes.append([])
        elif ch == "x":
            phase = 3
            crosses += 1
        else:
            raise UnknownCharacter(f"unknown character {ch!r} in orbifold symbol {text!r}")
    if handles > 1:
        raise NotAWallpaperGroup(f"{text!r} has {handles} handles")
    return OrbifoldSymbol(
        cones=tuple(cones),
        kaleidoscopes=tuple(tuple(k) for k in kaleidoscopes),
        cross_caps=crosses,
        handle=bool(handles),
    )


def parse_symbol(text: str) -> OrbifoldSymbol:
    """Parse an orbifold symbol and check it names a wallpaper group.

    Returns the canonical structured form; raises UnknownCharacter,
    DigitOutOfRestriction or NotAWallpaperGroup.
    """
    sym = canonical(_parse_structure(text))
    cost = euler_cost(sym)
    if cost != 2:
        raise NotAWallpaperGroup(f"{text!r} has orbifold cost {cost}, not 2")
    if format_symbol(sym) not in _BY_SYMBOL:
        raise NotAWallpaperGroup(f"{text!r} is not one of the 17 wallpaper groups")
    return sym


_BY_SYMBOL = {g.value: g for g in WallpaperGroup}


def group_of(sym: OrbifoldSymbol) -> WallpaperGroup:
    try:
        return _BY_SYMBOL[format_symbol(sym)]
    except KeyError:
        raise NotAWallpaperGroup(f"{format_symbol(sym)!r} is not a wallpaper group") from None


def as_group(value: "WallpaperGroup | OrbifoldSymbol | str") -> WallpaperGroup:
    if isinstance(value, WallpaperGroup):
        return value
    if isinstance(value, OrbifoldSymbol):
        return group_of(value)
    return WallpaperGroup.from_symbol(value)


@lru_cache(maxsize=None)
def symbol_of(group: WallpaperGroup) -> OrbifoldSymbol:
    return canonical(_parse_structure(group.value))


def enumerate_groups() -> list[tuple[WallpaperGroup, OrbifoldSymbol]]:
    return [(g, symbol_of(g)) for g in WallpaperGroup]


@lru_cache(maxsize=None)
def features(group: WallpaperGroup) -> GroupFeatures:
    sym = symbol_of(as_group(group))
    has_reflection = len(sym.kaleidoscopes) > 0
    return GroupFeatures(
        highest_rotation_order=max(sym.orders, default=1),
        has_reflection=has_reflection,
        has_cross_cap=sym.cross_caps > 0,
        has_cone_points=len(sym.cones) > 0,
        has_corner_points=any(sym.kaleidoscopes),
        # reflection presence only; glide-only groups count as chiral
        chirality=Chirality.ACHIRAL if has_reflection else Chirality.CHIRAL,
    )

"""JSON pattern files.

::

    {"lattice": {"a1": [1, 0], "a2": [0, 1]},
     "motif": [{"type": "polygon", "vertices": [[0.1, 0.1], [0.3, 0.1], [0.2, 0.3]]},
               {"type": "segment", "p": [0, 0], "q": [1, 0], "label": "bar"},
               {"type": "point", "position": [0.5, 0.5]},
               {"type": "circle", "center": [0.5, 0], "radius": 0.1}],
     "tolerance": 1e-9}

Geometry is in fractional coordinates of the given lattice; ``radius`` is
cartesian.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import PatternFormatError
from .lattice import Lattice
from .pattern import DEFAULT_TOLERANCE, Circle, LabeledPoint, PeriodicPattern, Polygon, Segment


def _vec(obj, name: str) -> tuple[float, float]:
    try:
        x, y = obj
        return (float(x), float(y))
    except (TypeError, ValueError):
        raise PatternFormatError(f"{name} must be a pair of numbers, got {obj!r}") from None


def _primitive(item, k: int):
    if not isinstance(item, dict) or "type" not in item:
        raise PatternFormatError(f"motif[{k}] needs a 'type'")
    kind, label = item["type"], item.get("label")
    try:
        if kind == "point":
            return LabeledPoint(_vec(item["position"], "position"), label)
        if kind == "segment":
            return Segment(_vec(item["p"], "p"), _vec(item["q"], "q"), label)
        if kind == "polygon":
            return Polygon(tuple(_vec(v, "vertex") for v in item["vertices"]), label)
        if kind == "circle":
            return Circle(_vec(item["center"], "center"), float(item["radius"]), label)
    except KeyError as exc:
        raise PatternFormatError(f"motif[{k}] ({kind}) lacks {exc.args[0]!r}") from None
    raise PatternFormatError(f"motif[{k}] has unknown type {kind!r}")


def pattern_from_dict(data: dict) -> PeriodicPattern:
    if not isinstance(data, dict) or "lattice" not in data or "motif" not in data:
        raise PatternFormatError("pattern needs 'lattice' and 'motif'")
    lat = data["lattice"]
    try:
        lattice = Lattice(_vec(lat["a1"], "a1"), _vec(lat["a2"], "a2"))
    except (KeyError, TypeError):
        raise PatternFormatError("lattice needs 'a1' and 'a2'") from None
    motif = tuple(_primitive(item, k) for k, item in enumerate(data["motif"]))
    return PeriodicPattern(lattice, motif, float(data.get("tolerance", DEFAULT_TOLERANCE)))


def _prim_dict(prim) -> dict:
    if prim.kind == "point":
        d = {"type": "point", "position": list(prim.position)}
    elif prim.kind == "segment":
        d = {"type": "segment", "p": list(prim.p), "q": list(prim.q)}
    elif prim.kind == "polygon":
        d = {"type": "polygon", "vertices": [list(v) for v in prim.vertices]}
    else:
        d = {"type": "circle", "center": list(prim.center), "radius": prim.radius}
    if prim.label is not None:
        d["label"] = prim.label
    return d


def pattern_to_dict(pat: PeriodicPattern) -> dict:
    return {
        "lattice": {"a1": list(pat.lattice.a1), "a2": list(pat.lattice.a2)},
        "motif": [_prim_dict(p) for p in pat.motif],
        "tolerance": pat.tolerance,
    }


def load_pattern(path) -> PeriodicPattern:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise PatternFormatError(f"{path}: invalid JSON ({exc.msg}, line {exc.lineno})") from None
    return pattern_from_dict(data)


def dump_pattern(pat: PeriodicPattern, path) -> None:
    Path(path).write_text(json.dumps(pattern_to_dict(pat), indent=2) + "\n")


def bundled_pattern_names() -> list[str]:
    folder = resources.files("wallpaper_aux") / "data" / "patterns"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def bundled_pattern(name: str) -> PeriodicPattern:
    path = resources.files("wallpaper_aux") / "data" / "patterns" / f"{name}.json"
    return pattern_from_dict(json.loads(path.read_text()))

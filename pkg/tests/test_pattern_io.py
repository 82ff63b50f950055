import json

import pytest

from wallpaper_aux.errors import PatternFormatError
from wallpaper_aux.exemplars import exemplar
from wallpaper_aux.orbifold import WallpaperGroup
from wallpaper_aux.pattern import classify
from wallpaper_aux.pattern_io import (
    bundled_pattern,
    bundled_pattern_names,
    dump_pattern,
    load_pattern,
    pattern_from_dict,
    pattern_to_dict,
)

NAMED = {
    "honeycomb": "*632",
    "rotating_squares_closed": "*442",
    "scalene_triangle": "o",
    "square_grid": "*442",
}


def test_round_trip(tmp_path):
    for g in ("*632", "22x", "4*2"):
        pat = exemplar(g)
        p = tmp_path / "p.json"
        dump_pattern(pat, p)
        back = load_pattern(p)
        assert pattern_to_dict(back) == pattern_to_dict(pat)
        assert classify(back) is WallpaperGroup.from_symbol(g)


def test_bundled_exemplar_files():
    names = bundled_pattern_names()
    for g in WallpaperGroup:
        name = "group_" + g.value.replace("*", "star").replace("x", "x")
        assert name in names, name
        assert classify(bundled_pattern(name)) is g


@pytest.mark.parametrize("name,group", NAMED.items())
def test_bundled_named_patterns(name, group):
    assert classify(bundled_pattern(name)).value == group


def test_all_primitive_kinds_survive():
    data = {
        "lattice": {"a1": [1, 0], "a2": [0, 1]},
        "motif": [
            {"type": "point", "position": [0.5, 0.5], "label": "p"},
            {"type": "segment", "p": [0, 0], "q": [0.2, 0]},
            {"type": "polygon", "vertices": [[0.1, 0.1], [0.3, 0.1], [0.2, 0.3]]},
            {"type": "circle", "center": [0.5, 0], "radius": 0.1},
        ],
        "tolerance": 1e-8,
    }
    assert pattern_to_dict(pattern_from_dict(data)) == data


@pytest.mark.parametrize("data", [
    {},
    {"lattice": {"a1": [1, 0]}, "motif": []},
    {"lattice": {"a1": [1, 0], "a2": [0, 1]}, "motif": [{"type": "blob"}]},
    {"lattice": {"a1": [1, 0], "a2": [0, 1]}, "motif": [{"position": [0, 0]}]},
    {"lattice": {"a1": [1, 0], "a2": [0, 1]}, "motif": [{"type": "point"}]},
    {"lattice": {"a1": [1, 0], "a2": [0, 1]}, "motif": [{"type": "point", "position": "here"}]},
])
def test_format_errors(data):
    with pytest.raises(PatternFormatError):
        pattern_from_dict(data)


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    with pytest.raises(PatternFormatError):
        load_pattern(p)
    p.write_text(json.dumps({"lattice": {"a1": [1, 0], "a2": [2, 0]}, "motif": [
        {"type": "point", "position": [0, 0]}]}))
    with pytest.raises(Exception):
        load_pattern(p)

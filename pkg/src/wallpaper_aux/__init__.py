"""Wallpaper-group symmetry and effective Poisson's ratio of planar lattices."""

from .orbifold import WallpaperGroup, euler_cost, parse_symbol
from .pattern import PeriodicPattern, classify, detect_symmetries

__version__ = "0.1.0"

__all__ = [
    "WallpaperGroup",
    "PeriodicPattern",
    "classify",
    "detect_symmetries",
    "euler_cost",
    "parse_symbol",
    "__version__",
]

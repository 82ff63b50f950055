"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`WallpaperAuxError`; the CLI maps those to exit code 1.
"""


class WallpaperAuxError(Exception):
    """Base class for domain errors."""


# orbifold symbols

class SymbolError(WallpaperAuxError, ValueError):
    pass


class UnknownCharacter(SymbolError):
    pass


class DigitOutOfRestriction(SymbolError):
    pass


class NotAWallpaperGroup(SymbolError):
    pass


# lattices and patterns

class DegenerateLattice(WallpaperAuxError, ValueError):
    pass


class IncompatibleLinearPart(WallpaperAuxError, ValueError):
    pass


class PatternFormatError(WallpaperAuxError, ValueError):
    pass


# homogenization

class SingularElement(WallpaperAuxError, ValueError):
    pass


class SingularSystem(WallpaperAuxError, ArithmeticError):
    pass


class NonInvertibleC(WallpaperAuxError, ArithmeticError):
    pass


class CellFormatError(WallpaperAuxError, ValueError):
    pass


# datasets

class DatasetError(WallpaperAuxError, ValueError):
    pass


class ParseError(DatasetError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class UnknownGroup(ParseError):
    pass

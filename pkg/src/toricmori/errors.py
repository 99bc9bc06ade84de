"""Exception hierarchy.

Every error raised on purpose by the library derives from ``ToricError`` so
callers (and the CLI) can tell input problems apart from bugs.
"""


class ToricError(ValueError):
    """Base class for all library errors."""


class NotStronglyConvex(ToricError):
    pass


class Unbounded(ToricError):
    pass


class NotSimplicial(ToricError):
    pass


class NotInSupport(ToricError):
    pass


class AlreadyARay(ToricError):
    pass


class ConeNotInFan(ToricError):
    pass


class NotAFinerLattice(ToricError):
    pass


class NotARefinement(ToricError):
    pass


class NotQCartier(ToricError):
    pass


class NotCartier(ToricError):
    pass


class NotComplete(ToricError):
    pass


class NotProjective(ToricError):
    pass


class NotNef(ToricError):
    pass


class NotAmple(ToricError):
    pass


class BoundaryWall(ToricError):
    pass


class NotFakeWPS(ToricError):
    pass


class WrongProfile(ToricError):
    pass


class MergeNotAFan(ToricError):
    def __init__(self, message, cones=()):
        super().__init__(message)
        self.cones = tuple(cones)


class BadParameters(ToricError):
    pass

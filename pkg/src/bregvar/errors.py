"""Exception types shared across the library."""


class BregvarError(Exception):
    """Base class for library-specific failures."""


class ConvexityError(BregvarError, ValueError):
    """A function violated a convexity requirement beyond numerical slack."""


class ConjugateUnresolvedError(BregvarError, RuntimeError):
    """Bracket expansion for the convex conjugate exceeded its cap."""


class NotModerateError(BregvarError, ValueError):
    """Simonenko indices fail 1 < d <= D < inf."""


class DegenerateFunctionError(BregvarError, ValueError):
    """phi vanished on a positive grid point (not a Young function)."""


class HartmanWintnerError(BregvarError, RuntimeError):
    """Symbol fails the growth heuristic needed for density inversion."""


class ResolutionError(BregvarError, RuntimeError):
    """Spectral grid cannot resolve the requested transform."""


class CheckFailure(BregvarError, RuntimeError):
    """A verification run ended with a failing verdict."""

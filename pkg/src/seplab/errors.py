"""Exception types shared across the library.

Every failure the library distinguishes deliberately gets its own class so
callers (and the CLI exit-code logic) can branch on type instead of parsing
messages.
"""


class SepLabError(Exception):
    """Base class for all library errors."""


class InputError(SepLabError):
    """Malformed arguments: bad vertex ids, overlapping sets, bad parameters."""


class DomainError(SepLabError):
    """Structurally valid input outside an operation's domain (e.g. a vertex
    closer to the root than the requested projection radius)."""


class GenerationError(SepLabError):
    """A random generator could not produce a graph: parity obstruction or
    rejection budget exhausted."""


class ResourceError(SepLabError):
    """A construction exceeded its vertex/memory budget.

    `layer_reached` records the last fully completed BFS layer so the caller
    knows how far the build got.
    """

    def __init__(self, message, layer_reached=None):
        super().__init__(message)
        self.layer_reached = layer_reached


class GeodesicError(SepLabError):
    """A candidate gluing line failed geodesic verification."""

    def __init__(self, message, line_id=None):
        super().__init__(message)
        self.line_id = line_id


class DeltaConnectivityError(SepLabError):
    """A sphere neighborhood was disconnected at the configured thickness.

    This is a diagnostic, not a bug: it means the thickness parameter is too
    small for the graph at hand and must be raised (or the graph is simply
    not hyperbolic-like at this scale).
    """

    def __init__(self, message, radius=None, delta=None):
        super().__init__(message)
        self.radius = radius
        self.delta = delta


class BudgetExceeded(SepLabError):
    """An exact search ran out of its node budget.  Carries the best bound
    found so far so callers can degrade to an interval."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConfigError(SepLabError):
    """Invalid experiment configuration (CLI exit code 2)."""


class VerificationError(SepLabError):
    """A certificate failed re-verification; names the offending certificate."""

    def __init__(self, message, certificate_id=None):
        super().__init__(message)
        self.certificate_id = certificate_id

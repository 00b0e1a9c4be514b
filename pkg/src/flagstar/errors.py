"""Exception hierarchy for flagstar."""


class FlagstarError(Exception):
    """Base class for all flagstar errors."""


class FormatError(FlagstarError):
    """Complex file could not be parsed."""


class EmptyInputError(FlagstarError):
    """No facets were given."""


class NonPureError(FlagstarError):
    """Facet tuples of unequal length where a pure complex is required."""


class UnknownVertexError(FlagstarError):
    """Vertex id or label not present in the complex."""


class DisconnectedError(FlagstarError):
    """Operation requires a connected graph."""


class NotPseudomanifoldError(FlagstarError):
    """Some ridge is not contained in exactly two facets."""


class NonOrientableError(FlagstarError):
    """Coherent orientation propagation reached a contradiction."""


class SizeLimitError(FlagstarError):
    """Input exceeds the configured search bound."""


class LinkMismatchError(FlagstarError):
    """Given bijection does not induce a link isomorphism."""


class OrientationNotReversedError(FlagstarError):
    """Gluing map is orientation preserving but reversal was enforced."""


class SharedVerticesError(FlagstarError):
    """Star connected sum requires two distinct complex objects."""


class TooCloseError(FlagstarError):
    """Star handle sites are at graph distance below five."""


class FnsDistanceViolatedError(FlagstarError):
    """Star handle sites are at distance below seven with fns enforcement on."""


class IdentityViolatedError(FlagstarError):
    """Euler characteristic identity failed after a surgery."""


class ParameterOutOfRangeError(FlagstarError):
    """Generator or construction parameter outside its legal range."""


class RoleLinkNotFoundError(FlagstarError):
    """No vertex with a base-isomorphic link near the requested position."""


class DistanceAssertionFailedError(FlagstarError):
    """Two glue sites of the encoding scheme are closer than required."""


class TargetUnreachableError(FlagstarError):
    """Euler characteristic target below the scheme threshold."""


class StructureNotRecognizedError(FlagstarError):
    """Decoder input does not look like an encoder output."""


class NoSeparationError(FlagstarError):
    """Calibration found overlapping threshold ranges."""


class WrongDimensionError(FlagstarError):
    """Operation requires a complex of a specific dimension."""


class ChainPreconditionError(FlagstarError):
    """Counting-bound chain requires x >= 50."""

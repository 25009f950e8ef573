"""Exception hierarchy shared by all modules."""


class DdvvError(Exception):
    """Base class for every error raised by ddvv_forge."""


class ExprSyntaxError(SyntaxError, DdvvError):
    """Malformed expression text.

    ``offset`` is 1-based (same convention as :class:`SyntaxError`),
    ``expected`` describes the token the parser wanted.
    """

    def __init__(self, message, text, offset, expected):
        super().__init__(f"{message} at offset {offset}: expected {expected}")
        self.text = text
        self.offset = offset
        self.expected = expected


class SingularEvaluation(DdvvError, ArithmeticError):
    """Expression evaluated at (or numerically at) a singularity."""


class SingularJet(DdvvError, ArithmeticError):
    """Jet division, reciprocal, sqrt or norm at a near-zero value."""


class NotSymmetric(DdvvError, ValueError):
    pass


class DependentProtected(DdvvError, ValueError):
    pass


class DegenerateMetric(DdvvError, ArithmeticError):
    pass


class DegeneratePoint(DdvvError):
    """The normal part of the conjugate surface vanishes here."""


class NullConjugate(DdvvError):
    """The conjugate surface passes through the origin here."""


class RankDeficiency(DdvvError):
    pass


class NearVanishingA(DdvvError):
    pass


class EmptyGrid(DdvvError, ValueError):
    pass


class SingularPoint(DdvvError):
    """Immersion rank drops below the regularity threshold."""


class MinimalPoint(DdvvError):
    pass


class NotEqualityForm(DdvvError):
    pass


class NotTraceless(DdvvError, ValueError):
    pass


class MapSingularity(DdvvError, ArithmeticError):
    pass


class FrameMismatch(DdvvError):
    pass


class NullQuadricCurve(DdvvError, ValueError):
    pass


class ConfigError(DdvvError, ValueError):
    pass

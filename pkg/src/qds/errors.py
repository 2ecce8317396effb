"""Exception types raised by the public API."""


class QdsError(Exception):
    """Base class for all package-specific errors."""


class NotHermitian(QdsError):
    pass


class NotPositive(QdsError):
    pass


class TraceNotOne(QdsError):
    pass


class InvalidP(QdsError):
    pass


class InvalidQ(QdsError):
    pass


class LengthMismatch(QdsError):
    pass


class DimensionMismatch(QdsError):
    pass


class NotUnital(QdsError):
    pass


class NotTracePreserving(QdsError):
    pass


class NotBistochastic(QdsError):
    pass


class InconsistentSpec(QdsError):
    pass


class EvolutionLeftStateSpace(QdsError):
    pass


class NotAdjointPreserving(QdsError):
    pass


class NonUniqueStationaryState(QdsError):
    pass


class NotUnitary(QdsError):
    pass


class WeightsNotProbability(QdsError):
    pass


class WeightsNotNormalized(QdsError):
    pass


class NotOrthonormal(QdsError):
    pass


class NotSelfadjoint(QdsError):
    pass


class NotIdempotent(QdsError):
    pass


class NotCPTP(QdsError):
    pass


class InvalidGenerator(QdsError):
    pass


class ConfigError(QdsError):
    pass

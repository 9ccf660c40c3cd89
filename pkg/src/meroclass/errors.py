"""Exception hierarchy. Every error raised by the library derives from
:class:`MeroclassError` so the CLI can map them to exit codes."""


class MeroclassError(Exception):
    pass


class ZeroConstantTerm(MeroclassError, ZeroDivisionError):
    pass


class ConstantNotOne(MeroclassError, ValueError):
    pass


class InnerConstantNonzero(MeroclassError, ValueError):
    pass


class EvaluatorFailure(MeroclassError, RuntimeError):
    pass


class OutsideDisk(MeroclassError, ValueError):
    pass


class ParameterOutOfRange(MeroclassError, ValueError):
    pass


class InvalidClassParams(ParameterOutOfRange):
    pass


class BadNormalization(MeroclassError, ValueError):
    pass


class SeriesSingularity(MeroclassError, ZeroDivisionError):
    pass


class NoWitness(MeroclassError, ValueError):
    pass


class CoincidentPoints(MeroclassError, ValueError):
    pass


class CenterMismatch(MeroclassError, ValueError):
    pass


class RadiusTooLarge(MeroclassError, ValueError):
    pass


class ConfigError(MeroclassError, ValueError):
    """Invalid CLI configuration (exit code 2)."""

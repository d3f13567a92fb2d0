class CQFFError(Exception):
    """Base class for errors raised by this package."""


class PauliParseError(CQFFError, ValueError):
    pass


class DimensionError(CQFFError, ValueError):
    pass


class ContractError(CQFFError, ValueError):
    """An input or intermediate violates a numerical contract."""


class DegenerateMetricError(ContractError):
    """The overlap (metric) matrix has no direction above the rank cutoff."""


class ConfigError(CQFFError, ValueError):
    pass

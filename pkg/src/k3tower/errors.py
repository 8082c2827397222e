"""Exception hierarchy shared by every module.

Each class carries ``exit_code`` so the CLI can map failures without a
lookup table: 2 for configuration problems, 3 for size guards, 4 for
internal inconsistencies.
"""


class K3TowerError(Exception):
    exit_code = 1


class ConfigError(K3TowerError, ValueError):
    exit_code = 2


class InvalidEll(ConfigError):
    pass


class NotOdd(ConfigError):
    pass


class NotPrime(ConfigError):
    pass


class LevelMismatch(ConfigError):
    pass


class NotAUnit(K3TowerError, ArithmeticError):
    exit_code = 2


class NotPrimitive(K3TowerError, ValueError):
    exit_code = 2


class BottomLevel(K3TowerError, ValueError):
    exit_code = 2


class KernelTooLarge(K3TowerError, ValueError):
    exit_code = 2


class NotIntegralizable(K3TowerError, ValueError):
    exit_code = 2


class TooLarge(K3TowerError):
    exit_code = 3


class InternalInconsistency(K3TowerError):
    exit_code = 4


class ConventionSearchFailed(InternalInconsistency):
    pass


class NotClosed(InternalInconsistency):
    pass


class InconsistentRamification(InternalInconsistency):
    pass


class MissingCertificate(K3TowerError):
    """No strong-supersingularity certificate is available for ``p``."""
    exit_code = 0

"""Exception hierarchy.

Validation errors describe bad inputs (CLI exit code 2); numerical errors
describe computations that could not meet their accuracy contract (exit 3).
"""


class SSNMError(Exception):
    """Base class for all ssnmbounds errors"""

    exit_code = 1


class ValidationError(SSNMError, ValueError):
    exit_code = 2


class NumericalError(SSNMError, ArithmeticError):
    exit_code = 3


# Validation family
class ConfigError(ValidationError):
    """Malformed run configuration or out-of-range scalar argument"""


class DimensionMismatch(ValidationError):
    pass


class SparsityViolation(ValidationError):
    """Parameter has more than S nonzero entries"""


class NotOrthonormal(ValidationError):
    pass


class MaxSupportRequired(ValidationError):
    """Operation needs ||x||_0 = S"""


class IndexOnSupport(ValidationError):
    pass


class ScopeError(ValidationError):
    """Estimator is only defined for S < N"""


class DimensionGuard(ValidationError):
    """Problem size exceeds an enumeration or memory guard"""


# Numerical family
class QuadratureFailure(NumericalError):
    pass


class ScaleError(NumericalError):
    """Test points too large relative to sigma (exp overflow)"""


class DegenerateGram(NumericalError):
    pass


class SingularStructure(NumericalError):
    pass


class NumericalFailure(NumericalError):
    pass


class DegenerateAlpha(NumericalError):
    pass

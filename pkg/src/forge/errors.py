"""Exception hierarchy.

Two families matter to callers: :class:`DataError` means the input does not
describe a valid surface (the CLI exits with status 2), :class:`NumericalError`
means a computation could not reach its stated tolerance (status 3).
"""


class ForgeError(Exception):
    pass


class DataError(ForgeError, ValueError):
    pass


class NumericalError(ForgeError, ArithmeticError):
    pass


class ConfigError(DataError):
    def __init__(self, msg, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}"
            if col is not None:
                where += f", column {col}"
            where += ": "
        super().__init__(where + msg)


class ParseError(ConfigError):
    pass


# holo
class DomainError(DataError):
    pass


class MultivaluedError(DataError):
    pass


class DegenerateMap(DataError):
    pass


class QuadratureNonConvergence(NumericalError):
    pass


class RadiusDependence(NumericalError):
    pass


class InconclusiveFit(NumericalError):
    pass


# metric
class MetricDegenerate(DataError):
    pass


DegenerateMetric = MetricDegenerate


class QuadratureFailure(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


# surfaces
class ExactnessViolation(DataError):
    def __init__(self, period):
        self.period = period
        super().__init__(
            f"Re-period of F dG around the puncture is {period.real:.12g}, not 0")


class DegenerateData(DataError):
    pass


class NullityViolation(DataError):
    def __init__(self, residual, worst_point):
        self.residual = residual
        self.worst_point = worst_point
        super().__init__(
            f"nullity residual {residual:.3e} at z = {worst_point:.6g}")


class NotSpacelike(DataError):
    pass


class DegenerateGaussMap(DataError):
    pass


class SingularOnDomain(DataError):
    pass


class RangeViolation(DataError):
    pass


class ModelDomainTooSmall(NumericalError):
    pass


class IntegrationBlowup(NumericalError):
    pass


class CompatibilityResidual(NumericalError):
    pass


class GridTooCoarse(NumericalError):
    pass


# ends
class InconclusiveInput(NumericalError):
    pass

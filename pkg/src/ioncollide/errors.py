class RegimeWarning(UserWarning):
    """An approximation is being used outside the regime where it holds."""


class OscillatoryIntegrandWarning(UserWarning):
    pass


class RegimeError(ValueError):
    """Inputs fall outside the regime a formula is defined for."""


class DegenerateOverlapError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ResourceLimitError(RuntimeError):
    pass


class ZeroCouplingError(ValueError):
    pass


class StructureError(ValueError):
    """A matrix does not have the collision-gate block structure."""


class ScheduleError(ValueError):
    pass


class UnknownQubitError(ScheduleError, KeyError):
    def __str__(self):
        return ScheduleError.__str__(self)


class SameTrapError(ScheduleError):
    pass

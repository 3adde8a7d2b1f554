"""Exception hierarchy shared by the simulation and CLI layers."""


class SimulationError(Exception):
    """Base class for all errors raised by qwoptomech."""


class ScenarioError(SimulationError, ValueError):
    """Invalid scenario: unknown key, bad value, or cross-field violation."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class UnknownPresetError(SimulationError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown preset {self.name!r}"


class UnsupportedModelError(SimulationError):
    """Backend or operation called with a model variant it cannot handle."""


class IntegrationDivergedError(SimulationError, ArithmeticError):
    def __init__(self, t, message="non-finite state"):
        super().__init__(f"{message} at t={t:.6g}")
        self.t = t


class StiffnessError(SimulationError, ArithmeticError):
    def __init__(self, t, h, state_norm):
        super().__init__(
            f"step size {h:.3g} fell below h_min at t={t:.6g} "
            f"(state norm {state_norm:.6g})"
        )
        self.t = t
        self.h = h
        self.state_norm = state_norm


class PhysicalityError(SimulationError):
    """A quantity that must be non-negative came out clearly negative."""


class InsufficientDataError(SimulationError, ValueError):
    pass


class InsufficientOscillationError(SimulationError, ValueError):
    pass


class TrajectoryError(SimulationError):
    def __init__(self, index, cause):
        super().__init__(f"trajectory {index} failed: {cause}")
        self.index = index
        self.cause = cause

"""Custom exception hierarchy for the phase-space lab."""


class PhaseSpaceError(Exception):
    """Base exception for all phase-space lab errors."""


class GridMismatchError(PhaseSpaceError):
    """Operands live on different grids."""

    def __init__(self, operation: str, detail: str = ""):
        self.operation = operation
        suffix = f": {detail}" if detail else ""
        super().__init__(f"[{operation}] grid mismatch{suffix}")


class GuardViolationError(PhaseSpaceError):
    """Signal mass reaches the periodic boundary of the grid."""

    def __init__(self, operation: str, tail_fraction: float, limit: float):
        self.operation = operation
        self.tail_fraction = tail_fraction
        self.limit = limit
        super().__init__(
            f"[{operation}] tail energy fraction {tail_fraction:.3e} exceeds guard {limit:.1e}"
        )


class ParameterError(PhaseSpaceError):
    """A parameter lies outside the operation's domain."""

    def __init__(self, parameter: str, message: str):
        self.parameter = parameter
        super().__init__(f"{parameter}: {message}")


class ZeroSignalError(ParameterError):
    """The operation needs a nonzero signal."""

    def __init__(self, operation: str):
        super().__init__("f", f"{operation} is undefined for the zero signal")


class QuadratureError(PhaseSpaceError):
    """Node doubling did not certify the τ-quadrature."""

    def __init__(self, nodes: int, change: float, tol: float):
        self.nodes = nodes
        self.change = change
        super().__init__(
            f"quadrature with {nodes} nodes changed by {change:.3e} on doubling (tol {tol:.1e})"
        )


class NonSmoothPointError(PhaseSpaceError):
    """Gradient requested where |Wf|^p is not differentiable."""


class StagnationError(PhaseSpaceError):
    """An iteration stopped making progress."""

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")


class TrajectoryError(PhaseSpaceError):
    """Center trajectories violate the separation hypothesis."""

    def __init__(self, pairs: list[tuple[int, int]]):
        self.pairs = pairs
        listed = ", ".join(f"({j},{k})" for j, k in pairs)
        super().__init__(f"trajectories do not separate: {listed}")


class PairGraphInvariantError(PhaseSpaceError):
    """A surviving-pair graph broke the chain structure."""


class ConfigError(PhaseSpaceError):
    """Scenario configuration failed validation."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid config: " + "; ".join(violations))


class ScenarioError(PhaseSpaceError):
    """A scenario failed inside one of the numerical modules."""

    def __init__(self, scenario: str, message: str):
        self.scenario = scenario
        super().__init__(f"[{scenario}] {message}")


class SerializationError(PhaseSpaceError):
    """A file does not hold the expected format."""

    def __init__(self, path, detail: str):
        self.path = path
        super().__init__(f"{path}: {detail}")

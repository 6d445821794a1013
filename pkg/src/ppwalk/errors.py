"""Exception types shared across the package.

Each maps to a named failure mode in a module contract; the CLI translates
them to exit codes (ConfigError -> 2, resource-type errors -> 3).
"""


class PPWalkError(Exception):
    """Base class for package errors."""


class ConfigError(PPWalkError):
    """Invalid or inconsistent configuration (bad kind, pmf, pattern, file)."""


class ScanExceeded(PPWalkError):
    """A gap scan ran past max_scan sites without finding an occupied one."""

    def __init__(self, point, direction, max_scan):
        self.point = tuple(point)
        self.direction = direction
        self.max_scan = max_scan
        super().__init__(
            f"no occupied site within {max_scan} steps of {self.point} "
            f"along {direction}"
        )


class MassLeak(PPWalkError):
    """Probability mass drifted away from 1 beyond tolerance during evolution."""

    def __init__(self, step, mass):
        self.step = step
        self.mass = mass
        super().__init__(f"mass {mass!r} at step {step} (|mass-1| > 1e-12)")


class MemoryBudgetExceeded(PPWalkError):
    """Support of the evolved distribution outgrew the configured site budget."""

    def __init__(self, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"support needs >= {needed} sites, budget is {budget}")


class WindowTooSmall(PPWalkError):
    """Requested cutsets do not fit inside the built network window."""


class NoConvergence(PPWalkError):
    """Iterative solver failed to reach the residual tolerance."""

    def __init__(self, iterations, residual, tol):
        self.iterations = iterations
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"residual {residual:.3e} after {iterations} iterations (tol {tol:.1e})"
        )


class LeftWindow(PPWalkError):
    """A trajectory left the fundamental domain of a finite-volume field."""


class DomainError(PPWalkError):
    """Scalar argument outside its mathematical domain."""


class DegenerateSample(PPWalkError):
    """Sample has no variation where the statistic requires some."""


class ReportFailure(PPWalkError):
    """A check report was converted to an exception; lists violated indices."""

    def __init__(self, failures):
        # failures: list of (check_name, first_violated_index)
        self.failures = list(failures)
        detail = ", ".join(f"{name} at n={idx}" for name, idx in self.failures)
        super().__init__(f"checks failed: {detail}")

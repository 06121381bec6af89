class WermerSetError(Exception):
    """The base class for everything the kernel raises on purpose"""

    pass


class ConfigError(WermerSetError):
    """A configuration value that can't be used"""

    def __init__(self, key: str, value, reason: str):
        self.key = key
        self.value = value
        self.reason = reason

    def __str__(self):
        return f"The config value `{self.key}={self.value!r}` is invalid - {self.reason}."


class CommandUsageError(WermerSetError):
    """A command line argument that couldn't be understood"""

    def __init__(self, argument: str, value: str, expected: str, usage: str = None):
        self.argument = argument
        self.value = value
        self.expected = expected
        self.usage = usage

    def __str__(self):
        return f"The value `{self.value}` for {self.argument} could not be read - expected {self.expected}."


class NonPolynomialResidue(WermerSetError):
    """The radical-adjoined product kept a term with an odd power of the square root"""

    def __init__(self, residue: float, tolerance: float):
        self.residue = residue
        self.tolerance = tolerance

    def __str__(self):
        return f"Odd radical terms failed to cancel (residue {self.residue:.3e} > {self.tolerance:.1e})."


class Degenerate(WermerSetError):
    """The leading coefficient in w vanished, so the fibre has lost roots"""

    def __init__(self, z0: complex, leading: float):
        self.z0 = z0
        self.leading = leading

    def __str__(self):
        return f"The leading coefficient in w vanishes at z={self.z0} (|lead|={self.leading:.3e})."


class ClusterAmbiguity(WermerSetError):
    """Two root clusters are too close to be told apart at the working tolerance"""

    def __init__(self, first: complex, second: complex, cluster_tol: float):
        self.first = first
        self.second = second
        self.cluster_tol = cluster_tol

    def __str__(self):
        return (
            f"Root clusters {self.first} and {self.second} lie within "
            f"10x the cluster tolerance {self.cluster_tol:.1e}."
        )


class BranchPointOnLoop(WermerSetError):
    """A loop passes through (or too close to) a branch point"""

    def __init__(self, index: int, point: complex, distance: float):
        self.index = index
        self.point = point
        self.distance = distance

    def __str__(self):
        return f"Branch point a_{self.index}={self.point} is {self.distance:.3e} away from the loop."


class OrderEstimateUnstable(WermerSetError):
    """The vanishing-order slopes at two radius pairs disagree"""

    def __init__(self, point: complex, slopes: tuple):
        self.point = point
        self.slopes = slopes

    def __str__(self):
        return f"Vanishing order at {self.point} is unstable (slopes {self.slopes[0]:.3f}, {self.slopes[1]:.3f})."


class SearchExhausted(WermerSetError):
    """A dyadic parameter search ran out of halvings"""

    def __init__(self, parameter: str, stage: int, halvings: int):
        self.parameter = parameter
        self.stage = stage
        self.halvings = halvings

    def __str__(self):
        return f"No admissible {self.parameter} for stage {self.stage} after {self.halvings} halvings."


class EmptyExterior(WermerSetError):
    """The sample grid found no point outside the previous sublevel set"""

    def __init__(self, stage: int):
        self.stage = stage

    def __str__(self):
        return f"No exterior samples found while choosing m for stage {self.stage} - the grid is too coarse."


class ProbeInvalid(WermerSetError):
    """A circle probe runs into one of the excluded points"""

    def __init__(self, point: complex, distance: float, required: float):
        self.point = point
        self.distance = distance
        self.required = required

    def __str__(self):
        return (
            f"The probe circle comes within {self.distance:.3e} of the excluded point "
            f"{self.point} (needs {self.required:.3e})."
        )


class SchemaMismatch(WermerSetError):
    """A construction file written with another schema version"""

    def __init__(self, found, expected: int):
        self.found = found
        self.expected = expected

    def __str__(self):
        return f"Construction file has schema version {self.found}, expected {self.expected}."


class InvariantViolation(WermerSetError):
    """A loaded construction breaks one of its stage invariants"""

    def __init__(self, predicate: str, detail: str = ""):
        self.predicate = predicate
        self.detail = detail

    def __str__(self):
        if self.detail:
            return f"InvariantViolation({self.predicate}): {self.detail}"
        return f"InvariantViolation({self.predicate})"


class PredicateFailure(WermerSetError):
    """A freshly built stage failed some of its checks"""

    def __init__(self, stage: int, reports: list):
        self.stage = stage
        self.reports = reports

    def __str__(self):
        names = ", ".join(report.predicate.value for report in self.reports)
        return f"Stage {self.stage} failed {names}."

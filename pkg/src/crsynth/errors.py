class CrsError(Exception):
    """Base class for errors raised by crsynth."""


class ResourceCapExceeded(CrsError):
    """A configured cap (rules, irreducibles, search nodes, retries) was hit."""

    def __init__(self, stage: str, message: str, **details):
        self.stage = stage
        self.details = details
        extra = ", ".join(f"{k}={v}" for k, v in details.items())
        super().__init__(f"[{stage}] {message}" + (f" ({extra})" if extra else ""))


class VerificationFailed(CrsError):
    """A constructed system did not pass verification."""

    def __init__(self, stage: str, report):
        self.stage = stage
        self.report = report
        super().__init__(f"[{stage}] verification failed: {report.summary()}")


class GcdObstruction(CrsError):
    """Representatives of one common weight do not exist.

    The weights of kernel words share the factor ``prime`` that the letter
    weights do not all share, so Z/prime is a quotient of the image group
    through which the weight map factors.
    """

    def __init__(self, kernel_gcd: int, prime: int):
        self.kernel_gcd = kernel_gcd
        self.prime = prime
        super().__init__(f"kernel weight gcd is {kernel_gcd}; obstruction Z/{prime}Z")


class ConstructionError(CrsError):
    """An internal invariant of a construction failed; carries a witness."""

    def __init__(self, stage: str, message: str, witness=None):
        self.stage = stage
        self.witness = witness
        super().__init__(f"[{stage}] {message}" + (f": {witness!r}" if witness is not None else ""))

"""
Domain Exceptions
=================
Every error raised by the spectral modules derives from QueenSpectraError so
callers (and the CLI exit-code mapping) can catch the family at once.
"""

from typing import Optional, Sequence


class QueenSpectraError(Exception):
    """Base class for all queen-spectra errors"""
    pass


class InvalidModulus(QueenSpectraError):
    """Raised when n is not a positive integer (or below an operation's minimum)"""

    def __init__(self, n: int, minimum: int = 1):
        self.n = n
        self.minimum = minimum
        super().__init__(f"Modulus must be an integer >= {minimum}, got {n!r}")


class NonGenericModulus(QueenSpectraError):
    """Raised when a formula-based operation is asked for n outside the generic odd regime"""

    def __init__(self, n: int, operation: Optional[str] = None):
        self.n = n
        self.operation = operation
        what = f"{operation}: " if operation else ""
        super().__init__(
            f"{what}n={n} is not in the generic odd regime "
            f"(requires n odd, 3 does not divide n, n >= 5)"
        )


class UnsupportedMuValue(QueenSpectraError):
    """Raised when a multiplicity polynomial is requested for an orthogonality count that cannot occur"""

    def __init__(self, k: int):
        self.k = k
        super().__init__(f"No multiplicity polynomial for mu={k}; supported values are 0, 1, 2, 3, 4, 13")


class BudgetExceeded(QueenSpectraError):
    """Raised when an enumeration or oracle run would exceed its configured size cap"""

    def __init__(self, requested: int, budget: int, what: str = "enumeration"):
        self.requested = requested
        self.budget = budget
        self.what = what
        super().__init__(f"{what} needs {requested} units, budget is {budget}")


class DegenerateKernel(QueenSpectraError):
    """Raised when two directions have a zero cross product (they are not distinct)"""

    def __init__(self, u: Sequence[int], v: Sequence[int]):
        self.u = tuple(u)
        self.v = tuple(v)
        super().__init__(f"Directions {self.u} and {self.v} span no plane; kernel is not a line")


class ClassificationViolation(QueenSpectraError):
    """
    Raised when a point or line contradicts the prototype-line classification.

    This is never expected in the generic odd regime; it signals either a
    counterexample or an implementation bug.
    """

    def __init__(self, detail: str, point: Optional[Sequence[int]] = None, n: Optional[int] = None):
        self.detail = detail
        self.point = tuple(point) if point is not None else None
        self.n = n
        where = f" at a={self.point}, n={n}" if self.point is not None else (f" at n={n}" if n else "")
        super().__init__(f"Classification violated{where}: {detail}")

"""
Spectrum - Eigenvalue Formula, Multiplicity Polynomials, Enumeration
====================================================================
The adjacency eigenvalue of the character chi_a is n*mu(a) - 13. In the
generic odd regime mu only takes the values 0, 1, 2, 3, 4, 13 and each
multiplicity M_k(n) is a polynomial in n. This module evaluates those
polynomials, recomputes the same table by brute-force enumeration of all n^3
frequencies, and checks the global counting identities on either table.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core_lattice import (
    REGIME_GENERIC,
    check_modulus,
    mu,
    mu_array,
    regime_of,
    require_generic,
)
from src.exceptions import BudgetExceeded, UnsupportedMuValue
from src.reporting import IdentityCheck

logger = logging.getLogger(__name__)

METHOD_FORMULA = "formula"
METHOD_ENUMERATION = "enumeration"

DEFAULT_ENUMERATION_BUDGET = 200_000_000
MU_VALUES = (13, 4, 3, 2, 1, 0)
MAX_MU = 13

# Smallest slice handed to a worker; smaller ranges run in one piece
MIN_SLICE = 1 << 16


# ============================================================================
# TYPES
# ============================================================================

@dataclass(frozen=True)
class SpectrumRow:
    mu_value: int
    eigenvalue: int
    multiplicity: int

    def to_dict(self) -> Dict[str, int]:
        return {"mu": self.mu_value, "lambda": self.eigenvalue, "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class SpectrumTable:
    """Rows sorted by mu descending, plus method and regime metadata."""

    n: int
    method: str
    rows: Tuple[SpectrumRow, ...]
    regime: str

    @property
    def total(self) -> int:
        return sum(r.multiplicity for r in self.rows)

    def nonzero_rows(self) -> List[SpectrumRow]:
        return [r for r in self.rows if r.multiplicity > 0]

    def multiplicity_of(self, k: int) -> int:
        return next((r.multiplicity for r in self.rows if r.mu_value == k), 0)

    def pairs(self) -> List[Tuple[int, int]]:
        """(eigenvalue, multiplicity) for nonzero rows."""
        return [(r.eigenvalue, r.multiplicity) for r in self.nonzero_rows()]

    def to_dict(self, identities: Optional[Sequence[IdentityCheck]] = None) -> Dict[str, Any]:
        return {
            "n": self.n,
            "regime": self.regime,
            "method": self.method,
            "rows": [r.to_dict() for r in self.rows],
            "identities": [c.to_dict() for c in (identities or [])],
        }


@dataclass
class IdentityReport:
    n: int
    regime: str
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)


# ============================================================================
# EIGENVALUES AND MULTIPLICITY POLYNOMIALS
# ============================================================================

def eigenvalue_of_mu(k: int, n: int) -> int:
    return n * k - 13


def eigenvalue(a: Sequence[int], n: int) -> int:
    """lambda(a) = n*mu(a) - 13; proved in the generic odd regime only."""
    n = require_generic(n, "eigenvalue")
    return eigenvalue_of_mu(mu(a, n), n)


def spectrum_support(n: int) -> List[int]:
    """The 14 admissible eigenvalues k*n - 13, k = 0..13."""
    n = check_modulus(n)
    return [eigenvalue_of_mu(k, n) for k in range(MAX_MU + 1)]


_POLYNOMIALS: Dict[int, Callable[[int], int]] = {
    13: lambda n: 1,
    4: lambda n: 9 * (n - 1),
    3: lambda n: 4 * (n - 1),
    2: lambda n: 12 * (n - 1),
    1: lambda n: 13 * n ** 2 - 72 * n + 59,
    0: lambda n: n ** 3 - 13 * n ** 2 + 47 * n - 35,
}


def multiplicity_formula(k: int, n: int) -> int:
    """M_k(n), the number of frequencies with mu = k."""
    n = require_generic(n, "multiplicity_formula")
    if k not in _POLYNOMIALS:
        raise UnsupportedMuValue(k)
    return _POLYNOMIALS[k](n)


def all_multiplicities_positive(n: int) -> bool:
    return all(multiplicity_formula(k, n) > 0 for k in MU_VALUES)


def spectrum_by_formula(n: int) -> SpectrumTable:
    """All six rows, including M_0 = 0 at n = 5 and 7."""
    n = require_generic(n, "spectrum_by_formula")
    rows = tuple(SpectrumRow(k, eigenvalue_of_mu(k, n), multiplicity_formula(k, n)) for k in MU_VALUES)
    return SpectrumTable(n, METHOD_FORMULA, rows, REGIME_GENERIC)


# ============================================================================
# ENUMERATION
# ============================================================================

def slice_bounds(total: int, workers: int) -> List[Tuple[int, int]]:
    """Split [0, total) into contiguous slices, in order."""
    parts = max(1, min(workers, total // MIN_SLICE or 1))
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def check_budget(requested: int, budget: Optional[int], what: str, default: int) -> None:
    budget = default if budget is None else budget
    if requested > budget:
        logger.warning(f"{what} of {requested} exceeds budget {budget}")
        raise BudgetExceeded(requested, budget, what)


def mu_histogram(n: int, workers: int = 1) -> np.ndarray:
    """
    Counts of each mu value over all n^3 frequencies.

    Slices are reduced in slice order, so the result does not depend on the
    number of workers.
    """
    total = n ** 3
    bounds = slice_bounds(total, workers)

    def count(bound: Tuple[int, int]) -> np.ndarray:
        lo, hi = bound
        logger.debug(f"n={n}: mu histogram slice [{lo}, {hi})")
        return np.bincount(mu_array(n, lo, hi), minlength=MAX_MU + 1)

    if len(bounds) == 1:
        partials = [count(bounds[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            partials = list(executor.map(count, bounds))

    histogram = np.zeros(MAX_MU + 1, dtype=np.int64)
    for partial in partials:
        histogram += partial
    return histogram


def spectrum_by_enumeration(n: int, budget: Optional[int] = None, workers: int = 1) -> SpectrumTable:
    """Histogram mu over every frequency; only observed classes become rows."""
    n = check_modulus(n)
    check_budget(n ** 3, budget, "enumeration", DEFAULT_ENUMERATION_BUDGET)
    histogram = mu_histogram(n, workers)
    rows = tuple(
        SpectrumRow(k, eigenvalue_of_mu(k, n), int(histogram[k]))
        for k in range(MAX_MU, -1, -1)
        if histogram[k] > 0
    )
    logger.info(f"n={n}: enumerated {n ** 3} frequencies into {len(rows)} mu classes")
    return SpectrumTable(n, METHOD_ENUMERATION, rows, regime_of(n))


def tables_match(first: SpectrumTable, second: SpectrumTable) -> bool:
    """Row-for-row equality after dropping zero-multiplicity rows."""
    if first.n != second.n:
        return False
    return [(r.mu_value, r.eigenvalue, r.multiplicity) for r in first.nonzero_rows()] == \
        [(r.mu_value, r.eigenvalue, r.multiplicity) for r in second.nonzero_rows()]


# ============================================================================
# MOMENTS AND IDENTITIES
# ============================================================================

def trace_moment(table: SpectrumTable, k: int) -> int:
    """sum of lambda^k * M over the table (= trace(A^k) if the table is right)."""
    return sum(r.eigenvalue ** k * r.multiplicity for r in table.rows)


def min_eigenvalue(table: SpectrumTable) -> int:
    return min(r.eigenvalue for r in table.nonzero_rows())


def distinct_eigenvalues(table: SpectrumTable) -> List[int]:
    return [r.eigenvalue for r in table.nonzero_rows()]


def verify_identities(table: SpectrumTable) -> IdentityReport:
    """
    Global counting identities on a spectrum table.

    The frequency count and the mu-weighted sum hold for every n; the
    eigenvalue sum and the trace of A^2 depend on lambda = n*mu - 13 and are
    reported as skipped outside the generic odd regime.
    """
    n = table.n
    report = IdentityReport(n, table.regime)
    report.checks.append(IdentityCheck.equal("sum M = n^3", table.total, n ** 3))
    report.checks.append(IdentityCheck.equal(
        "sum mu*M = 13n^2",
        sum(r.mu_value * r.multiplicity for r in table.rows),
        13 * n ** 2,
    ))
    distinct = len(table.nonzero_rows())
    report.checks.append(IdentityCheck.below("distinct eigenvalues <= 14", distinct, MAX_MU + 2))

    if table.regime == REGIME_GENERIC:
        report.checks.append(IdentityCheck.equal("sum lambda*M = 0", trace_moment(table, 1), 0))
        report.checks.append(IdentityCheck.equal(
            "sum lambda^2*M = 13(n-1)n^3", trace_moment(table, 2), 13 * (n - 1) * n ** 3,
        ))
    else:
        reason = "eigenvalue formula only established in the generic odd regime"
        report.checks.append(IdentityCheck.skipped("sum lambda*M = 0", reason))
        report.checks.append(IdentityCheck.skipped("sum lambda^2*M = 13(n-1)n^3", reason))

    failed = [c.name for c in report.checks if c.passed is False]
    if failed:
        logger.error(f"n={n}: identity checks failed: {failed}")
    return report


def extremes_checks(n: int) -> List[IdentityCheck]:
    """Positivity of M_0 (minimum eigenvalue -13) and the top eigenvalue 13(n-1)."""
    table = spectrum_by_formula(n)
    checks = [IdentityCheck.equal("lambda(0) = 13(n-1)", eigenvalue((0, 0, 0), n), 13 * (n - 1))]
    m0 = table.multiplicity_of(0)
    if n in (5, 7):
        checks.append(IdentityCheck.equal("M_0 = 0", m0, 0))
    else:
        checks.append(IdentityCheck.equal("min lambda = -13", min_eigenvalue(table), -13))
        checks.append(IdentityCheck.equal(
            "all six multiplicities positive", all_multiplicities_positive(n), True,
        ))
    return checks

"""
Orbits - Direction Pairs, Kernel Lines and Point Classification
===============================================================
Two queen directions u != v cut out a line {a : a.u = a.v = 0 (mod n)}.
Up to signed coordinate permutations these lines fall into four prototype
families (axis, face-diagonal, space-diagonal, skew), 25 lines in all, and
every nonzero frequency with mu >= 2 lies on exactly one of them.

This module enumerates the pair orbits, solves each kernel, lists the 25
prototype lines and checks the classification against full enumeration.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from src.core_lattice import (
    MU_BLOCK_SIZE,
    Direction,
    FrequencyPoint,
    Vector,
    act_on_direction,
    coords_index,
    direction,
    direction_set,
    dot_mod,
    index_coords,
    mu,
    mu_array,
    normalize_direction,
    require_generic,
    signed_permutation_group,
)
from src.exceptions import ClassificationViolation, DegenerateKernel
from src.reporting import IdentityCheck
from src.spectrum import DEFAULT_ENUMERATION_BUDGET, check_budget, slice_bounds

logger = logging.getLogger(__name__)

AXIS = "Axis"
FACE_DIAGONAL = "FaceDiagonal"
SPACE_DIAGONAL = "SpaceDiagonal"
SKEW = "Skew"
FAMILIES = (AXIS, FACE_DIAGONAL, SPACE_DIAGONAL, SKEW)

# Constant orthogonality count carried by every nonzero point of a family
FAMILY_MU: Dict[str, int] = {AXIS: 4, FACE_DIAGONAL: 4, SPACE_DIAGONAL: 3, SKEW: 2}
FAMILY_SIZES: Dict[str, int] = {AXIS: 3, FACE_DIAGONAL: 6, SPACE_DIAGONAL: 4, SKEW: 12}
PROTOTYPE_SEEDS: Dict[str, Vector] = {
    AXIS: (1, 0, 0),
    FACE_DIAGONAL: (1, 1, 0),
    SPACE_DIAGONAL: (1, 1, 1),
    SKEW: (1, 1, 2),
}

KIND_ZERO = "Zero"
KIND_ON_LINE = "OnLine"
KIND_SINGLE_HYPERPLANE = "SingleHyperplane"
KIND_GENERIC = "Generic"

# Reference representative pairs (u, v) with the kernel generator listed for each
REFERENCE_PAIRS: List[Tuple[Vector, Vector, Vector]] = [
    ((1, 1, 1), (1, 1, 0), (1, -1, 0)),
    ((1, 1, 1), (1, 1, -1), (1, -1, 0)),
    ((1, 1, 1), (1, 0, 0), (0, 1, -1)),
    ((1, 1, 1), (1, 0, -1), (1, -2, 1)),
    ((1, 1, 1), (1, -1, -1), (0, 1, -1)),
    ((1, 1, 1), (0, 0, -1), (1, -1, 0)),
    ((1, 1, 1), (0, -1, -1), (0, 1, -1)),
    ((1, 1, 0), (1, 0, 1), (1, -1, -1)),
    ((1, 1, 0), (1, 0, 0), (0, 0, 1)),
    ((1, 1, 0), (1, -1, 0), (0, 0, 1)),
    ((1, 1, 0), (0, 0, 1), (1, -1, 0)),
    ((1, 1, 0), (0, -1, 1), (1, -1, -1)),
    ((1, 1, 0), (0, -1, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
]


# ============================================================================
# DIRECTION PAIRS AND ORBITS
# ============================================================================

@dataclass(frozen=True)
class DirectionPair:
    """Unordered pair of distinct directions, stored with first.index < second.index."""

    first: Direction
    second: Direction

    @classmethod
    def of(cls, u: Direction, v: Direction) -> "DirectionPair":
        if u == v:
            raise ValueError(f"A direction pair needs two distinct directions, got {u} twice")
        return cls(u, v) if u.index < v.index else cls(v, u)

    @property
    def key(self) -> Tuple[int, int]:
        return (self.first.index, self.second.index)

    def __repr__(self) -> str:
        return f"{{{self.first.components}, {self.second.components}}}"


@dataclass(frozen=True)
class PairOrbit:
    representative: DirectionPair
    members: FrozenSet[DirectionPair]

    @property
    def size(self) -> int:
        return len(self.members)


def all_pairs() -> List[DirectionPair]:
    """The C(13,2) = 78 unordered pairs in lexicographic U-index order."""
    return [DirectionPair(u, v) for u, v in itertools.combinations(direction_set(), 2)]


def pair_orbits() -> List[PairOrbit]:
    """
    Orbits of the 78 pairs under B3 combined with swapping the two directions.

    The swap is absorbed by the unordered representation; each orbit's
    representative is its lexicographically smallest pair by U-index.
    """
    group = signed_permutation_group()
    seen = set()
    orbits = []
    for pair in all_pairs():
        if pair.key in seen:
            continue
        members = frozenset(
            DirectionPair.of(act_on_direction(g, pair.first), act_on_direction(g, pair.second))
            for g in group
        )
        seen.update(m.key for m in members)
        orbits.append(PairOrbit(min(members, key=lambda m: m.key), members))
    logger.debug(f"{len(orbits)} pair orbits over {len(seen)} pairs")
    return orbits


def reference_pairs() -> List[Tuple[DirectionPair, Vector]]:
    """Reference representative pairs, normalized, with their listed kernel generators."""
    return [
        (DirectionPair.of(direction(u), direction(v)), normalize_direction(w))
        for u, v, w in REFERENCE_PAIRS
    ]


def orbit_of(pair: DirectionPair, orbits: Sequence[PairOrbit]) -> int:
    """Position of the orbit containing pair."""
    for i, orbit in enumerate(orbits):
        if pair in orbit.members:
            return i
    raise ValueError(f"{pair} is in no orbit")


# ============================================================================
# LINES
# ============================================================================

def line_family(generator: Sequence[int]) -> str:
    """Family from the coordinate pattern of a canonical generator."""
    g = tuple(generator)
    zeros = g.count(0)
    magnitudes = sorted(abs(c) for c in g)
    if zeros == 2 and magnitudes == [0, 0, 1]:
        return AXIS
    if zeros == 1 and magnitudes == [0, 1, 1]:
        return FACE_DIAGONAL
    if zeros == 0 and magnitudes == [1, 1, 1]:
        return SPACE_DIAGONAL
    if zeros == 0 and magnitudes == [1, 1, 2]:
        return SKEW
    raise ClassificationViolation(f"generator {g} matches no prototype family")


@dataclass(frozen=True)
class Line:
    """The cyclic submodule {t * generator : t in Z_n}."""

    generator: Vector
    family: str

    @classmethod
    def from_generator(cls, generator: Sequence[int]) -> "Line":
        g = tuple(int(c) for c in generator)
        divisor = math.gcd(*g)
        if divisor == 0:
            raise ValueError("The zero vector generates no line")
        g = normalize_direction(tuple(c // divisor for c in g))
        return cls(g, line_family(g))

    @property
    def unit_axis(self) -> int:
        """First coordinate where the generator is +-1; it fixes the parameter t."""
        return next(i for i, c in enumerate(self.generator) if abs(c) == 1)

    def parameter(self, a: Sequence[int], n: int) -> int:
        i = self.unit_axis
        return (self.generator[i] * int(a[i])) % n

    def contains(self, a: Sequence[int], n: int) -> bool:
        t = self.parameter(a, n)
        return all((int(a[j]) - t * self.generator[j]) % n == 0 for j in range(3))

    def __repr__(self) -> str:
        return f"{self.family}<{self.generator}>"


def family_mu(family: str) -> int:
    return FAMILY_MU[family]


def line_points(line: Line, n: int) -> List[FrequencyPoint]:
    """The points t * generator for t = 0..n-1."""
    return [FrequencyPoint.of([t * c for c in line.generator], n) for t in range(n)]


def line_indices(line: Line, n: int) -> np.ndarray:
    t = np.arange(n, dtype=np.int64)[:, None]
    return coords_index((t * np.array(line.generator, dtype=np.int64)) % n, n)


def _family_order(line: Line) -> Tuple[int, Tuple[int, ...]]:
    return (FAMILIES.index(line.family), tuple(-c for c in line.generator))


def prototype_lines() -> List[Line]:
    """The 25 lines: B3 images of the four seeds, grouped by family."""
    group = signed_permutation_group()
    lines = {
        Line.from_generator(g.act(seed))
        for seed in PROTOTYPE_SEEDS.values()
        for g in group
    }
    return sorted(lines, key=_family_order)


_PROTOTYPES: Tuple[Line, ...] = tuple(prototype_lines())


def cross(u: Sequence[int], v: Sequence[int]) -> Vector:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def solve_pair_kernel(
    u: Direction, v: Direction, n: int, validate: bool = False, budget: Optional[int] = None,
) -> Line:
    """
    The line of common solutions of a.u = a.v = 0 (mod n).

    The generator is the integer cross product u x v divided by the gcd of its
    components. With validate=True the full solution set over Z_n is also
    enumerated block by block and compared with the line; that enumeration is
    bounded by the enumeration budget.
    """
    n = require_generic(n, "solve_pair_kernel")
    w = cross(u.components, v.components)
    if w == (0, 0, 0):
        raise DegenerateKernel(u.components, v.components)
    line = Line.from_generator(w)
    g = line.generator
    if dot_mod(g, u.components, n) != 0 or dot_mod(g, v.components, n) != 0:
        raise ClassificationViolation(f"kernel generator {g} does not annihilate {u} and {v}", n=n)
    if validate:
        total = n ** 3
        check_budget(total, budget, "kernel validation", DEFAULT_ENUMERATION_BUDGET)
        pair = np.array([u.components, v.components], dtype=np.int64).T
        found = []
        for lo in range(0, total, MU_BLOCK_SIZE):
            hi = min(lo + MU_BLOCK_SIZE, total)
            dots = index_coords(n, lo, hi) @ pair
            found.append(lo + np.flatnonzero(np.all(dots % n == 0, axis=1)))
        solutions = np.concatenate(found)
        expected = np.unique(line_indices(line, n))
        if not np.array_equal(solutions, expected):
            raise ClassificationViolation(
                f"kernel of {u}, {v} has {solutions.size} solutions, line {line} has {expected.size}", n=n,
            )
    return line


# ============================================================================
# POINT CLASSIFICATION
# ============================================================================

@dataclass(frozen=True)
class Classification:
    kind: str
    mu: int
    line: Optional[Line] = None


def classify(a: Sequence[int], n: int) -> Classification:
    """Zero, OnLine (mu 2..4), SingleHyperplane (mu 1) or Generic (mu 0)."""
    n = require_generic(n, "classify")
    a = FrequencyPoint.of(a, n)
    m = mu(a, n)
    if a.is_zero():
        return Classification(KIND_ZERO, m)
    if m >= 2:
        hits = [line for line in _PROTOTYPES if line.contains(a, n)]
        if len(hits) != 1:
            raise ClassificationViolation(f"mu={m} but point lies on {len(hits)} prototype lines", a, n)
        line = hits[0]
        if m != FAMILY_MU[line.family]:
            raise ClassificationViolation(f"mu={m} on {line}, expected {FAMILY_MU[line.family]}", a, n)
        return Classification(KIND_ON_LINE, m, line)
    return Classification(KIND_SINGLE_HYPERPLANE if m == 1 else KIND_GENERIC, m)


# ============================================================================
# COVERAGE
# ============================================================================

@dataclass
class CoverageReport:
    n: int
    union_size: int = 0
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)


def _full_mu(n: int, workers: int) -> np.ndarray:
    bounds = slice_bounds(n ** 3, workers)
    if len(bounds) == 1:
        return mu_array(n)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        parts = list(executor.map(lambda b: mu_array(n, *b), bounds))
    return np.concatenate(parts)


def coverage_check(n: int, budget: Optional[int] = None, workers: int = 1) -> CoverageReport:
    """
    Check the 25-line classification against every frequency of (Z_n)^3.

    (i) nonzero points with mu >= 2 are exactly the union of the lines minus 0;
    (ii) distinct lines meet only at 0; (iii) mu is constant per family on
    nonzero line points; (iv) every line has exactly n points.
    """
    n = require_generic(n, "coverage_check")
    check_budget(n ** 3, budget, "coverage enumeration", DEFAULT_ENUMERATION_BUDGET)
    mu_values = _full_mu(n, workers)
    report = CoverageReport(n)

    sizes = []
    family_violations = 0
    incidence = np.zeros(n ** 3, dtype=np.int64)
    for line in _PROTOTYPES:
        points = np.unique(line_indices(line, n))
        sizes.append(int(points.size))
        nonzero = points[points != 0]
        incidence[nonzero] += 1
        family_violations += int(np.count_nonzero(mu_values[nonzero] != FAMILY_MU[line.family]))

    union = np.flatnonzero(incidence)
    high_mu = np.flatnonzero(mu_values >= 2)
    high_mu = high_mu[high_mu != 0]
    report.union_size = int(union.size)

    same_points = bool(np.array_equal(union, high_mu))
    report.checks.append(IdentityCheck(
        "{a != 0 : mu >= 2} = union of lines", int(high_mu.size), report.union_size, same_points,
        "" if same_points else "point sets differ",
    ))
    report.checks.append(IdentityCheck.equal(
        "lines meet only at 0", int(np.count_nonzero(incidence > 1)), 0,
    ))
    report.checks.append(IdentityCheck.equal("family mu constant on lines", family_violations, 0))
    report.checks.append(IdentityCheck.equal("points per line", sorted(set(sizes)), [n]))
    report.checks.append(IdentityCheck.equal("union size = 25(n-1)", report.union_size, 25 * (n - 1)))

    if not report.passed:
        logger.error(f"n={n}: coverage failed: {[c.name for c in report.checks if c.passed is False]}")
    return report


def kernel_checks(n: int) -> List[IdentityCheck]:
    """Pair-level checks: orbits partition the pairs, kernels land on the 25 lines."""
    orbits = pair_orbits()
    pairs = all_pairs()
    kernels = [solve_pair_kernel(p.first, p.second, n) for p in pairs]
    prototype_set = set(_PROTOTYPES)
    covered = {orbit_of(pair, orbits) for pair, _ in reference_pairs()}
    reference_kernels_ok = sum(
        1 for pair, w in reference_pairs()
        if solve_pair_kernel(pair.first, pair.second, n) == Line.from_generator(w)
    )
    family_counts = [sum(1 for line in _PROTOTYPES if line.family == f) for f in FAMILIES]
    return [
        IdentityCheck.equal("orbit sizes sum to 78", sum(o.size for o in orbits), len(pairs)),
        IdentityCheck.equal("reference pairs cover every orbit", len(covered), len(orbits)),
        IdentityCheck.equal("reference kernels reproduced", reference_kernels_ok, len(REFERENCE_PAIRS)),
        IdentityCheck.equal("pair kernels on prototype lines", sum(1 for k in kernels if k in prototype_set), len(pairs)),
        IdentityCheck.equal("prototype lines hit by kernels", len(set(kernels)), len(_PROTOTYPES)),
        IdentityCheck.equal("family counts", family_counts, [FAMILY_SIZES[f] for f in FAMILIES]),
    ]

"""
Graph Oracle - Independent Checks on the Literal Cayley Graph
=============================================================
Builds G_n = Cay((Z_n)^3, S) for small n and checks the spectral claims
without an eigensolver:

- trace(A^k) by exact closed-walk counting from the origin
- per-character residuals |A chi_a - lambda(a) chi_a| in complex floating point
- the geometric sums S_u(a) behind the eigenvalue formula

Vertex x has index idx(x) = x1 + n*x2 + n^2*x3.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from src.core_lattice import (
    FrequencyPoint,
    check_modulus,
    coords_index,
    direction_set,
    index_coords,
    is_generic_odd,
    require_generic,
)
from src.exceptions import ClassificationViolation
from src.orbits import line_points, prototype_lines
from src.spectrum import check_budget, eigenvalue

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_BUDGET = 100_000
MAX_TRACE_POWER = 4
RESIDUAL_TOLERANCE = 1e-8
GEOMETRIC_TOLERANCE = 1e-9

# Rows of the neighbour table gathered per block during propagation
PROPAGATION_BLOCK = 4096


# ============================================================================
# CONNECTION SET
# ============================================================================

@dataclass(frozen=True)
class GeneratorSet:
    """The connection set S = {t*u mod n : u in U, 1 <= t <= n-1}, deduplicated."""

    n: int
    elements: FrozenSet[FrequencyPoint]

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def expected_size(self) -> int:
        return 13 * (self.n - 1)

    @property
    def matches_expected(self) -> bool:
        return self.size == self.expected_size

    @property
    def closed_under_negation(self) -> bool:
        return all(FrequencyPoint.of([-c for c in s], self.n) in self.elements for s in self.elements)

    @property
    def contains_zero(self) -> bool:
        return FrequencyPoint(0, 0, 0) in self.elements

    def as_array(self) -> np.ndarray:
        """Elements sorted by vertex index, shape (|S|, 3)."""
        ordered = sorted(self.elements, key=lambda s: s.index(self.n))
        return np.array(ordered, dtype=np.int64).reshape(-1, 3)


def generator_set(n: int) -> GeneratorSet:
    n = check_modulus(n, minimum=2)
    elements = frozenset(
        FrequencyPoint.of([t * c for c in u], n)
        for u in direction_set()
        for t in range(1, n)
    )
    s = GeneratorSet(n, elements)
    if s.size != s.expected_size:
        level = logging.ERROR if is_generic_odd(n) else logging.INFO
        logger.log(level, f"n={n}: |S| = {s.size}, 13(n-1) = {s.expected_size}")
    if is_generic_odd(n) and not s.matches_expected:
        raise ClassificationViolation(f"connection set has {s.size} elements, expected {s.expected_size}", n=n)
    return s


# ============================================================================
# ADJACENCY
# ============================================================================

@dataclass
class AdjacencyStructure:
    """Neighbour table: row x holds idx(x + s) for every s in S, in the order of S."""

    n: int
    neighbors: np.ndarray
    connection_set: GeneratorSet

    @property
    def vertex_count(self) -> int:
        return self.n ** 3

    @property
    def degree(self) -> int:
        return self.neighbors.shape[1]

    @property
    def edge_count(self) -> int:
        return self.vertex_count * self.degree // 2

    def neighbor_set(self, x: int) -> FrozenSet[int]:
        return frozenset(int(y) for y in self.neighbors[x])

    def is_loop_free(self) -> bool:
        return not np.any(self.neighbors == np.arange(self.vertex_count)[:, None])

    def is_regular(self) -> bool:
        """No repeated neighbours in any row, so every degree equals |S|."""
        rows = np.sort(self.neighbors, axis=1)
        return not np.any(rows[:, 1:] == rows[:, :-1])

    def is_symmetric(self) -> bool:
        count = self.vertex_count
        sources = np.repeat(np.arange(count, dtype=np.int64), self.degree)
        targets = self.neighbors.reshape(-1).astype(np.int64)
        forward = np.sort(sources * count + targets)
        backward = np.sort(targets * count + sources)
        return bool(np.array_equal(forward, backward))

    def check(self) -> None:
        """Raise ClassificationViolation unless symmetric, loop-free and regular."""
        for name, ok in (("symmetric", self.is_symmetric()),
                         ("loop-free", self.is_loop_free()),
                         ("regular", self.is_regular())):
            if not ok:
                raise ClassificationViolation(f"adjacency structure is not {name}", n=self.n)


def build_adjacency(n: int, budget: Optional[int] = None) -> AdjacencyStructure:
    n = check_modulus(n, minimum=2)
    check_budget(n ** 3, budget, "adjacency vertices", DEFAULT_ORACLE_BUDGET)
    s = generator_set(n)
    offsets = s.as_array()
    coords = index_coords(n)
    neighbors = np.empty((n ** 3, len(offsets)), dtype=np.int32)
    for j, offset in enumerate(offsets):
        neighbors[:, j] = coords_index((coords + offset) % n, n)
    adjacency = AdjacencyStructure(n, neighbors, s)
    adjacency.check()
    logger.info(f"n={n}: built adjacency with {adjacency.vertex_count} vertices, degree {adjacency.degree}")
    return adjacency


def edge_count(n: int) -> int:
    """Handshake count n^3 * |S| / 2."""
    return n ** 3 * generator_set(n).size // 2


def translation_invariant(adjacency: AdjacencyStructure, samples: Iterable[int]) -> bool:
    """neighbours(x) == x + neighbours(0) for every sampled vertex x."""
    n = adjacency.n
    base = index_coords(n)[adjacency.neighbors[0]]
    for x in samples:
        shifted = coords_index((base + np.array(FrequencyPoint.from_index(int(x), n))) % n, n)
        if frozenset(int(y) for y in shifted) != adjacency.neighbor_set(int(x)):
            return False
    return True


def edge_list_header(n: int, degree: int) -> str:
    return f"# queen3d-torus n={n} vertices={n ** 3} degree={degree}"


def write_edge_list(adjacency: AdjacencyStructure, stream: TextIO) -> int:
    """One "i j" line per edge with i < j, sorted; returns the edge count."""
    stream.write(edge_list_header(adjacency.n, adjacency.degree) + "\n")
    written = 0
    for i in range(adjacency.vertex_count):
        row = np.sort(adjacency.neighbors[i])
        upper = row[row > i]
        if upper.size:
            stream.write("".join(f"{i} {j}\n" for j in upper))
            written += int(upper.size)
    return written


# ============================================================================
# CLOSED WALKS
# ============================================================================

def _propagate(adjacency: AdjacencyStructure, vector: np.ndarray, workers: int) -> np.ndarray:
    """One round of A @ vector; blocks are independent and reassembled in order."""
    count = adjacency.vertex_count
    blocks = [(lo, min(lo + PROPAGATION_BLOCK, count)) for lo in range(0, count, PROPAGATION_BLOCK)]
    out = np.empty_like(vector)

    def fill(block):
        lo, hi = block
        out[lo:hi] = vector[adjacency.neighbors[lo:hi]].sum(axis=1)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            list(executor.map(fill, blocks))
    else:
        for block in blocks:
            fill(block)
    return out


def closed_walks(adjacency: AdjacencyStructure, k: int, workers: int = 1) -> int:
    """Number of closed k-walks at the origin, in exact integers."""
    vector = np.zeros(adjacency.vertex_count, dtype=np.int64)
    vector[0] = 1
    for _ in range(k):
        vector = _propagate(adjacency, vector, workers)
    return int(vector[0])


def trace_power(k: int, n: int, budget: Optional[int] = None, workers: int = 1,
                adjacency: Optional[AdjacencyStructure] = None) -> int:
    """
    trace(A^k) = n^3 * (closed k-walks at the origin), by vertex transitivity.

    Args:
        k: walk length, 1..4 (entries stay below (13(n-1))^4, inside int64)
        n: modulus
        budget: vertex cap for the adjacency build
        adjacency: prebuilt structure to reuse across k
    """
    if not 1 <= k <= MAX_TRACE_POWER:
        raise ValueError(f"trace_power supports 1 <= k <= {MAX_TRACE_POWER}, got {k}")
    n = check_modulus(n, minimum=2)
    if adjacency is None:
        adjacency = build_adjacency(n, budget)
    return n ** 3 * closed_walks(adjacency, k, workers)


# ============================================================================
# CHARACTERS
# ============================================================================

@dataclass(frozen=True)
class Character:
    """chi_a(x) = exp(2 pi i (a.x) / n)."""

    a: FrequencyPoint
    n: int

    def phase(self, x: Sequence[int]) -> int:
        return sum(int(ai) * int(xi) for ai, xi in zip(self.a, x)) % self.n

    def __call__(self, x: Sequence[int]) -> complex:
        return complex(np.exp(2j * np.pi * self.phase(x) / self.n))

    def values(self) -> np.ndarray:
        """chi_a over all vertices in idx order; phases reduced mod n first."""
        phases = (index_coords(self.n) @ np.array(self.a, dtype=np.int64)) % self.n
        return np.exp(2j * np.pi * phases / self.n)


def character_residual(a: Sequence[int], n: int, budget: Optional[int] = None,
                       adjacency: Optional[AdjacencyStructure] = None) -> float:
    """max over x of |(A chi_a)(x) - lambda(a) chi_a(x)|."""
    n = require_generic(n, "character_residual")
    if adjacency is None:
        adjacency = build_adjacency(n, budget)
    elif adjacency.n != n:
        raise ValueError(f"adjacency is for n={adjacency.n}, not {n}")
    chi = Character(FrequencyPoint.of(a, n), n).values()
    image = chi[adjacency.neighbors].sum(axis=1)
    return float(np.max(np.abs(image - eigenvalue(a, n) * chi)))


def residual_bound(n: int) -> float:
    return RESIDUAL_TOLERANCE * 13 * (n - 1)


def residual_sample(n: int, count: int, seed: int) -> List[FrequencyPoint]:
    """All points with mu >= 2 (line points and 0) plus count seeded random others."""
    structured = sorted({p for line in prototype_lines() for p in line_points(line, n)}, key=lambda p: p.index(n))
    chosen = set(structured)
    rng = np.random.default_rng(seed)
    extra: List[FrequencyPoint] = []
    remaining = n ** 3 - len(chosen)
    while len(extra) < min(count, remaining):
        p = FrequencyPoint.from_index(int(rng.integers(n ** 3)), n)
        if p not in chosen:
            chosen.add(p)
            extra.append(p)
    return structured + extra


# ============================================================================
# GEOMETRIC SUMS
# ============================================================================

@dataclass(frozen=True)
class GeometricSum:
    """S = sum_{t=1}^{n-1} omega^(t*e): exact value and its float evaluation."""

    exponent: int
    n: int
    exact: int
    numeric: complex
    agrees: bool


def geometric_sum_check(exponent: int, n: int) -> GeometricSum:
    """Exact value n-1 when e = 0 (mod n), else -1; the float sum must agree."""
    n = check_modulus(n)
    e = exponent % n
    exact = n - 1 if e == 0 else -1
    t = np.arange(1, n, dtype=np.int64)
    numeric = complex(np.exp(2j * np.pi * ((t * e) % n) / n).sum()) if n > 1 else 0j
    agrees = abs(numeric - exact) < GEOMETRIC_TOLERANCE * n
    if not agrees:
        logger.error(f"geometric sum e={exponent}, n={n}: float {numeric} vs exact {exact}")
    return GeometricSum(exponent, n, exact, numeric, agrees)

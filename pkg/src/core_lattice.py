"""
Core Lattice - Frequency Points, Queen Directions and the B3 Action
====================================================================
Canonical representations shared by every other module:

- FrequencyPoint: an element of (Z_n)^3 stored as canonical residues in [0, n)
- Direction: one of the 13 queen directions (first nonzero component +1),
  which doubles as the normal of the hyperplane H_u = {a : a.u = 0 mod n}
- SignedPermutation: an element of the hyperoctahedral group B3 (order 48)

Points are indexed as idx(a) = a1 + n*a2 + n^2*a3 everywhere in the package.
All functions here are pure; nothing holds mutable state.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from src.exceptions import InvalidModulus, NonGenericModulus

logger = logging.getLogger(__name__)

Vector = Tuple[int, int, int]

REGIME_GENERIC = "generic_odd"
REGIME_NON_GENERIC = "non_generic"

# Rows of the mu kernel processed per numpy block
MU_BLOCK_SIZE = 1 << 18


# ============================================================================
# MODULUS
# ============================================================================

def check_modulus(n: int, minimum: int = 1) -> int:
    """Validate n and return it as a plain int."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < minimum:
        raise InvalidModulus(n, minimum)
    return int(n)


def is_generic_odd(n: int) -> bool:
    """n odd, 3 does not divide n, n >= 5."""
    return n >= 5 and n % 2 == 1 and n % 3 != 0


def require_generic(n: int, operation: str = None) -> int:
    """Return n if it is in the generic odd regime, else raise NonGenericModulus."""
    n = check_modulus(n)
    if not is_generic_odd(n):
        raise NonGenericModulus(n, operation)
    return n


def regime_of(n: int) -> str:
    return REGIME_GENERIC if is_generic_odd(n) else REGIME_NON_GENERIC


@dataclass(frozen=True)
class Modulus:
    """A validated modulus n >= 1 with its regime flag."""

    n: int

    def __post_init__(self):
        check_modulus(self.n)

    @property
    def is_generic_odd(self) -> bool:
        return is_generic_odd(self.n)

    @property
    def regime(self) -> str:
        return regime_of(self.n)


# ============================================================================
# FREQUENCY POINTS
# ============================================================================

class FrequencyPoint(NamedTuple):
    """A point of (Z_n)^3; compares equal to the plain coordinate tuple."""

    x: int
    y: int
    z: int

    @classmethod
    def of(cls, coords: Sequence[int], n: int) -> "FrequencyPoint":
        """Reduce an arbitrary integer triple to canonical residues."""
        if len(coords) != 3:
            raise ValueError(f"Frequency points have 3 coordinates, got {len(coords)}")
        return cls(*(int(c) % n for c in coords))

    @classmethod
    def from_index(cls, idx: int, n: int) -> "FrequencyPoint":
        return cls(idx % n, (idx // n) % n, idx // (n * n))

    def index(self, n: int) -> int:
        return self.x + n * self.y + n * n * self.z

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0


def negate(a: Sequence[int], n: int) -> FrequencyPoint:
    """-a as canonical residues."""
    return FrequencyPoint.of([-c for c in a], n)


def balanced(a: Sequence[int], n: int) -> Vector:
    """Balanced representative of a: each coordinate in (-n/2, n/2]."""
    return tuple(c - n if c > n // 2 else c for c in FrequencyPoint.of(a, n))


def iter_points(n: int) -> Iterator[FrequencyPoint]:
    """All n^3 points in idx order (first coordinate fastest)."""
    n = check_modulus(n)
    for z in range(n):
        for y in range(n):
            for x in range(n):
                yield FrequencyPoint(x, y, z)


def index_coords(n: int, start: int = 0, stop: int = None) -> np.ndarray:
    """Coordinates of the idx slice [start, stop) as an (m, 3) int64 array."""
    stop = n ** 3 if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    return np.stack([idx % n, (idx // n) % n, idx // (n * n)], axis=1)


def coords_index(coords: np.ndarray, n: int) -> np.ndarray:
    """Inverse of index_coords for reduced coordinates."""
    coords = np.asarray(coords, dtype=np.int64)
    return coords[..., 0] + n * coords[..., 1] + n * n * coords[..., 2]


# ============================================================================
# DIRECTIONS
# ============================================================================

def normalize_direction(v: Sequence[int]) -> Vector:
    """Flip the sign of v so that its first nonzero component is positive."""
    v = tuple(int(c) for c in v)
    for c in v:
        if c != 0:
            return v if c > 0 else tuple(-x for x in v)
    raise ValueError("The zero vector has no canonical direction")


@dataclass(frozen=True)
class Direction:
    """One queen direction u in {-1,0,1}^3, canonical representative of +-u."""

    components: Vector

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        if len(comps) != 3 or any(c not in (-1, 0, 1) for c in comps):
            raise ValueError(f"Direction components must lie in {{-1,0,1}}^3, got {self.components}")
        if comps == (0, 0, 0):
            raise ValueError("Direction must be nonzero")
        if normalize_direction(comps) != comps:
            raise ValueError(f"Direction {comps} is not canonical (first nonzero component must be +1)")
        object.__setattr__(self, "components", comps)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> int:
        return self.components[i]

    def __len__(self) -> int:
        return 3

    def __repr__(self) -> str:
        return f"Direction{self.components}"

    @property
    def index(self) -> int:
        """Position in the canonical listing of U."""
        return _DIRECTION_INDEX[self.components]


# The listing order below is the canonical iteration order of U
_DIRECTION_COMPONENTS: List[Vector] = [
    (1, 0, 0), (0, 1, 0), (0, 0, 1),
    (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1),
    (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
]
_DIRECTION_INDEX = {c: i for i, c in enumerate(_DIRECTION_COMPONENTS)}
_DIRECTIONS: Tuple[Direction, ...] = tuple(Direction(c) for c in _DIRECTION_COMPONENTS)
DIRECTION_MATRIX = np.array(_DIRECTION_COMPONENTS, dtype=np.int64)


def direction_set() -> List[Direction]:
    """The 13 queen directions U in canonical order."""
    return list(_DIRECTIONS)


def direction(components: Sequence[int]) -> Direction:
    """Look up the member of U representing +-components."""
    key = normalize_direction(components)
    if key not in _DIRECTION_INDEX:
        raise ValueError(f"{tuple(components)} is not a queen direction")
    return _DIRECTIONS[_DIRECTION_INDEX[key]]


# ============================================================================
# ORTHOGONALITY
# ============================================================================

def dot_mod(a: Sequence[int], u: Sequence[int], n: int) -> int:
    """(a . u) mod n, summed over unbounded integers and reduced once."""
    return sum(int(ai) * int(ui) for ai, ui in zip(a, u)) % n


def mu(a: Sequence[int], n: int) -> int:
    """Orthogonality count: number of u in U with a.u = 0 (mod n)."""
    n = check_modulus(n)
    return sum(1 for u in _DIRECTIONS if dot_mod(a, u.components, n) == 0)


def mu_array(n: int, start: int = 0, stop: int = None) -> np.ndarray:
    """
    Vectorized mu over the idx slice [start, stop).

    Returns:
        int64 array of length stop - start
    """
    n = check_modulus(n)
    stop = n ** 3 if stop is None else stop
    out = np.empty(stop - start, dtype=np.int64)
    for lo in range(start, stop, MU_BLOCK_SIZE):
        hi = min(lo + MU_BLOCK_SIZE, stop)
        dots = index_coords(n, lo, hi) @ DIRECTION_MATRIX.T
        out[lo - start:hi - start] = np.count_nonzero(dots % n == 0, axis=1)
    return out


# ============================================================================
# HYPEROCTAHEDRAL GROUP B3
# ============================================================================

@dataclass(frozen=True)
class SignedPermutation:
    """
    Signed coordinate permutation.

    perm[j] is the target slot of source coordinate j; signs[i] multiplies
    target slot i. So coordinate i of g(a) is signs[i] * a[perm^-1(i)].
    """

    perm: Vector
    signs: Vector

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2]:
            raise ValueError(f"perm must be a bijection of {{0,1,2}}, got {self.perm}")
        if any(s not in (-1, 1) for s in self.signs) or len(self.signs) != 3:
            raise ValueError(f"signs must be a triple of +-1, got {self.signs}")

    @property
    def inverse_perm(self) -> Vector:
        inv = [0, 0, 0]
        for j, target in enumerate(self.perm):
            inv[target] = j
        return tuple(inv)

    def act(self, v: Sequence[int]) -> Vector:
        """Action on an integer vector (no reduction)."""
        inv = self.inverse_perm
        return tuple(self.signs[i] * int(v[inv[i]]) for i in range(3))

    def __matmul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return compose(self, other)


def identity() -> SignedPermutation:
    return SignedPermutation((0, 1, 2), (1, 1, 1))


def compose(g: SignedPermutation, h: SignedPermutation) -> SignedPermutation:
    """The element gh, acting as g after h."""
    perm = tuple(g.perm[h.perm[j]] for j in range(3))
    g_inv = g.inverse_perm
    signs = tuple(g.signs[i] * h.signs[g_inv[i]] for i in range(3))
    return SignedPermutation(perm, signs)


def inverse(g: SignedPermutation) -> SignedPermutation:
    inv = g.inverse_perm
    signs = tuple(g.signs[g.perm[j]] for j in range(3))
    return SignedPermutation(inv, signs)


_GROUP: Tuple[SignedPermutation, ...] = tuple(
    SignedPermutation(perm, signs)
    for perm in itertools.permutations(range(3))
    for signs in itertools.product((1, -1), repeat=3)
)


def signed_permutation_group() -> List[SignedPermutation]:
    """All 48 elements of B3, identity first."""
    return list(_GROUP)


def apply(g: SignedPermutation, a: Sequence[int], n: int) -> FrequencyPoint:
    """g acting on a point of (Z_n)^3."""
    return FrequencyPoint.of(g.act(a), n)


def act_on_direction(g: SignedPermutation, u: Direction) -> Direction:
    """g acting on U, normalized back to the canonical representative."""
    return direction(g.act(u.components))

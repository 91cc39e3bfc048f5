"""Torus geometry and particle/point configurations.

Discrete side: occupation vectors on the ring of N sites, cyclic closed
intervals [a, b], multiclass label encodings.  Continuous side: finite sets
of exact-rational points on the unit torus.  Everything here is an immutable
value and every function is pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

# Exhaustive enumeration guards (oracles stay tractable).
MAX_ENUM_N = 12
MAX_ENUM_STATES = 10**7

# Denominator of the sampling grid for random points on the torus.
POINT_GRID = 2**53


class EnumerationLimitError(ValueError):
    """Raised when an exhaustive helper would enumerate too many states."""


@dataclass(frozen=True)
class TorusInterval:
    """Cyclic closed interval [a, b] on Z_N, traversed rightward.

    Length is between 1 (a == b) and N (b is the left neighbour of a).
    """

    n: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise ValueError("ring size must be positive")
        if not (0 <= self.a < self.n and 0 <= self.b < self.n):
            raise ValueError("interval endpoints must be sites of Z_N")

    @property
    def length(self) -> int:
        return (self.b - self.a) % self.n + 1

    @property
    def wraps(self) -> bool:
        return self.b < self.a

    def sites(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.a + i) % self.n

    def __contains__(self, site: int) -> bool:
        return (site - self.a) % self.n <= (self.b - self.a) % self.n


class TorusConfig:
    """Occupation vector on Z_N with a cached particle count."""

    __slots__ = ("n", "occupied", "count")

    def __init__(self, occupied: Sequence[int]):
        bits = tuple(int(b) for b in occupied)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("occupation values must be 0 or 1")
        if not bits:
            raise ValueError("ring must have at least one site")
        object.__setattr__(self, "n", len(bits))
        object.__setattr__(self, "occupied", bits)
        object.__setattr__(self, "count", sum(bits))

    def __setattr__(self, name, value):  # immutability
        raise AttributeError("TorusConfig is immutable")

    @classmethod
    def from_sites(cls, n: int, sites: Sequence[int]) -> "TorusConfig":
        bits = [0] * n
        for x in sites:
            bits[x % n] = 1
        return cls(bits)

    def sites(self) -> tuple[int, ...]:
        return tuple(x for x, b in enumerate(self.occupied) if b)

    def __getitem__(self, x: int) -> int:
        return self.occupied[x % self.n]

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusConfig) and self.occupied == other.occupied

    def __hash__(self) -> int:
        return hash(self.occupied)

    def __repr__(self) -> str:
        return f"TorusConfig({list(self.occupied)})"

    def leq(self, other: "TorusConfig") -> bool:
        """Componentwise partial order: self(x) <= other(x) everywhere."""
        if self.n != other.n:
            raise ValueError("ring sizes differ")
        return all(a <= b for a, b in zip(self.occupied, other.occupied))


class PointConfig:
    """Finite set of distinct rational points on the unit torus [0, 1)."""

    __slots__ = ("points",)

    def __init__(self, points: Sequence[Fraction]):
        pts = tuple(sorted(Fraction(p) for p in points))
        for p in pts:
            if not (0 <= p < 1):
                raise ValueError("points must lie in [0, 1)")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        object.__setattr__(self, "points", pts)

    def __setattr__(self, name, value):
        raise AttributeError("PointConfig is immutable")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return Fraction(p) in set(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointConfig) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"PointConfig({[str(p) for p in self.points]})"

    def issubset(self, other: "PointConfig") -> bool:
        return set(self.points) <= set(other.points)


def discrete_excess(eta1: TorusConfig, eta2: TorusConfig, interval: TorusInterval) -> int:
    """Excess of eta1 particles over eta2 particles on a cyclic interval."""
    if eta1.n != eta2.n:
        raise ValueError("ring sizes differ")
    if interval.n != eta1.n:
        raise ValueError("interval ring size differs from configuration")
    return sum(eta1[x] - eta2[x] for x in interval.sites())


def class_label_encode(parts: Sequence[TorusConfig]) -> tuple[int, ...]:
    """Encode an ordered k-tuple of configurations as a label vector.

    Label 0 marks a hole; label j marks a site whose first occupied layer is
    layer j.  Requires eta_1 <= eta_2 <= ... <= eta_k componentwise.
    """
    ok, violation = validate_ordered(parts)
    if not ok:
        raise ValueError(f"tuple is not ordered: {violation}")
    n = parts[0].n
    labels = []
    for x in range(n):
        lab = 0
        for j, eta in enumerate(parts, start=1):
            if eta[x]:
                lab = j
                break
        labels.append(lab)
    return tuple(labels)


def class_label_decode(labels: Sequence[int], k: int) -> tuple[TorusConfig, ...]:
    """Inverse of class_label_encode for a k-class label vector."""
    labels = tuple(labels)
    if any(not (0 <= l <= k) for l in labels):
        raise ValueError(f"labels must be in 0..{k}")
    return tuple(
        TorusConfig([1 if 1 <= l <= j else 0 for l in labels]) for j in range(1, k + 1)
    )


def validate_ordered(parts: Sequence) -> tuple[bool, str | None]:
    """Check that consecutive tuple entries satisfy the partial order.

    Configurations are compared componentwise, point sets by inclusion and
    torus measures by measure domination.  Returns (ok, first_violation).
    """
    from . import measures  # local import; measures depends on nothing here

    if len(parts) == 0:
        return True, None
    for i in range(len(parts) - 1):
        a, b = parts[i], parts[i + 1]
        if isinstance(a, TorusConfig):
            if a.n != b.n:
                return False, f"parts {i},{i+1}: ring sizes differ"
            for x in range(a.n):
                if a[x] > b[x]:
                    return False, f"parts {i},{i+1}: site {x}"
        elif isinstance(a, PointConfig):
            missing = set(a.points) - set(b.points)
            if missing:
                return False, f"parts {i},{i+1}: point {min(missing)} not included"
        elif isinstance(a, measures.TorusMeasure):
            ok, where = measures.measure_leq_witness(a, b)
            if not ok:
                return False, f"parts {i},{i+1}: {where}"
        else:
            raise TypeError(f"unsupported part type {type(a)!r}")
    return True, None


class OrderedTuple:
    """k-tuple of configurations / point sets / measures satisfying the order."""

    __slots__ = ("parts",)

    def __init__(self, parts: Sequence):
        parts = tuple(parts)
        ok, violation = validate_ordered(parts)
        if not ok:
            raise ValueError(f"ordering violated: {violation}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("OrderedTuple is immutable")

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, OrderedTuple) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"OrderedTuple({list(self.parts)})"


def enumerate_configs(n: int, m: int) -> Iterator[TorusConfig]:
    """All configurations with m particles on n sites (exhaustive helper)."""
    if n > MAX_ENUM_N:
        raise EnumerationLimitError(f"refusing exhaustive enumeration for N={n} > {MAX_ENUM_N}")
    for sites in itertools.combinations(range(n), m):
        yield TorusConfig.from_sites(n, sites)


def enumerate_label_vectors(n: int, counts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All label vectors on n sites with counts[j] sites of label j+1.

    The number of states is capped so oracles stay tractable.
    """
    k = len(counts)
    if n > MAX_ENUM_N:
        raise EnumerationLimitError(f"refusing exhaustive enumeration for N={n} > {MAX_ENUM_N}")
    if (k + 1) ** n > MAX_ENUM_STATES:
        raise EnumerationLimitError("state space too large to enumerate")
    holes = n - sum(counts)
    if holes < 0:
        raise ValueError("class counts exceed ring size")
    remaining = {0: holes}
    for j, c in enumerate(counts, start=1):
        remaining[j] = c
    prefix: list[int] = []

    def walk():
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for sym in sorted(remaining):
            if remaining[sym] == 0:
                continue
            remaining[sym] -= 1
            prefix.append(sym)
            yield from walk()
            prefix.pop()
            remaining[sym] += 1

    yield from walk()


def random_points(count: int, rng) -> PointConfig:
    """Draw `count` distinct points from the fine rational grid on [0, 1)."""
    chosen: set[Fraction] = set()
    while len(chosen) < count:
        chosen.add(Fraction(rng.getrandbits(53), POINT_GRID))
    return PointConfig(sorted(chosen))


def random_config(n: int, m: int, rng) -> TorusConfig:
    """Uniform random configuration with m particles on n sites."""
    return TorusConfig.from_sites(n, rng.sample(range(n), m))

"""Multiclass exclusion and Hammersley dynamics, exact stationary laws and
invariant-measure samplers.

Events are scheduled with a single global exponential clock (rate N for the
ring walk, rate 1 for the continuous mark process) followed by a uniform
site or position mark; this is equivalent in law to independent local
clocks and keeps the code auditable.  All randomness flows through an
explicitly seeded generator.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .collapse import atomic_measure, collapse_k
from .lattice import (
    OrderedTuple,
    PointConfig,
    TorusConfig,
    class_label_encode,
    enumerate_configs,
    random_config,
    random_points,
)
from .measures import TorusMeasure

MAX_STATES = 10**7
MAX_SOLVE_STATES = 4000


@dataclass(frozen=True)
class ProcessSpec:
    """Model instance: class counts Delta_i, plus the ring size for the
    exclusion process.  Cumulative counts give the per-layer masses."""

    model: str
    class_counts: tuple[int, ...]
    n: int | None = None

    def __post_init__(self):
        if self.model not in ("tasep", "had"):
            raise ValueError("model must be 'tasep' or 'had'")
        if any(c < 0 for c in self.class_counts):
            raise ValueError("class counts must be nonnegative")
        if self.model == "tasep":
            if self.n is None or self.n < 2:
                raise ValueError("ring size n >= 2 required")
            if sum(self.class_counts) > self.n:
                raise ValueError("class counts exceed ring size")

    @property
    def k(self) -> int:
        return len(self.class_counts)

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        out = []
        acc = 0
        for c in self.class_counts:
            acc += c
            out.append(acc)
        return tuple(out)


class StationaryTable:
    """Exact distribution over multiclass states, keyed by label vector in
    lexicographic order."""

    __slots__ = ("states", "probs")

    def __init__(self, entries: Iterable[tuple[tuple[int, ...], Fraction]]):
        items = sorted(entries)
        states = tuple(s for s, _ in items)
        probs = tuple(Fraction(p) for _, p in items)
        if any(p < 0 for p in probs):
            raise ValueError("negative probability")
        if sum(probs) != 1:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)

    def __setattr__(self, name, value):
        raise AttributeError("StationaryTable is immutable")

    def __len__(self) -> int:
        return len(self.states)

    def items(self):
        return zip(self.states, self.probs)

    def prob(self, labels: Sequence[int]) -> Fraction:
        labels = tuple(labels)
        i = bisect.bisect_left(self.states, labels)
        if i < len(self.states) and self.states[i] == labels:
            return self.probs[i]
        return Fraction(0)

    def tv_distance(self, other: "StationaryTable") -> Fraction:
        keys = set(self.states) | set(other.states)
        return sum(abs(self.prob(k) - other.prob(k)) for k in keys) / 2

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StationaryTable)
            and self.states == other.states
            and self.probs == other.probs
        )

    def to_json_dict(self) -> dict:
        return {
            "states": ["".join(map(str, s)) for s in self.states],
            "probabilities": [str(p) for p in self.probs],
        }


# ---------------------------------------------------------------------------
# exclusion dynamics on label vectors
# ---------------------------------------------------------------------------


def _label_key(label: int, k: int) -> int:
    # class order 1 < 2 < ... < k < hole
    return label if label >= 1 else k + 1


def bond_update(labels: tuple[int, ...], x: int, k: int) -> tuple[int, ...]:
    """Joint sorted update on bond (x, x+1): the lower class ends up at x.

    Applying the two-site decreasing rearrangement in every layer at once
    amounts to sorting the pair of labels with holes ranked last.
    """
    n = len(labels)
    y = (x + 1) % n
    a, b = labels[x], labels[y]
    if _label_key(a, k) <= _label_key(b, k):
        return labels
    out = list(labels)
    out[x], out[y] = b, a
    return tuple(out)


def tasep_simulate(
    initial: Sequence[int],
    k: int,
    horizon: float,
    rng,
    record: bool = False,
):
    """Continuous-time run up to the horizon; one exponential clock of rate
    N, then a uniform bond.  Returns (final_labels, events); events are
    (time, bond, labels-after) triples when record is set."""
    labels = tuple(initial)
    n = len(labels)
    t = 0.0
    events = []
    while True:
        t += rng.expovariate(n)
        if t >= horizon:
            return labels, events
        x = rng.randrange(n)
        labels = bond_update(labels, x, k)
        if record:
            events.append((t, x, labels))


def tasep_state_frequencies(
    initial: Sequence[int], k: int, steps: int, rng
) -> dict[tuple[int, ...], float]:
    """Visit frequencies of the uniformized chain (one uniform bond per
    step, self-loops counted); converges to the stationary law."""
    labels = tuple(initial)
    n = len(labels)
    counts: dict[tuple[int, ...], int] = {}
    for _ in range(steps):
        x = rng.randrange(n)
        labels = bond_update(labels, x, k)
        counts[labels] = counts.get(labels, 0) + 1
    return {s: c / steps for s, c in counts.items()}


def _multiset_states(n: int, counts: Sequence[int]) -> list[tuple[int, ...]]:
    from .lattice import enumerate_label_vectors

    states = list(enumerate_label_vectors(n, counts))
    if len(states) > MAX_STATES:
        raise ValueError("state space exceeds the enumeration cap")
    return states


def _solve_stationary_int(rates: list[list[int]]) -> list[Fraction]:
    """Stationary row vector of an integer rate matrix, exactly.

    Solves pi Q = 0 with the normalization row appended, by fraction-free
    (Bareiss) elimination followed by rational back-substitution.
    """
    n = len(rates)
    # A = Q^T with the last equation replaced by sum(pi) = 1
    A = [[rates[s][t] for s in range(n)] for t in range(n)]
    b = [0] * n
    A[n - 1] = [1] * n
    b[n - 1] = 1
    M = [row[:] + [bi] for row, bi in zip(A, b)]
    prev = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular stationary system; chain not irreducible?")
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
        for i in range(col + 1, n):
            Mi, Mc = M[i], M[col]
            f1, f2 = Mc[col], Mi[col]
            for j in range(col + 1, n + 1):
                Mi[j] = (Mi[j] * f1 - f2 * Mc[j]) // prev
            Mi[col] = 0
        prev = M[col][col]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(M[i][n])
        for j in range(i + 1, n):
            s -= M[i][j] * x[j]
        x[i] = s / M[i][i]
    return x


def exact_stationary(spec: ProcessSpec) -> StationaryTable:
    """Exact stationary distribution of the multiclass exclusion process by
    rational linear solve of the balance equations."""
    if spec.model != "tasep":
        raise ValueError("exact stationary tables exist only for the ring model")
    n, k = spec.n, spec.k
    states = _multiset_states(n, spec.class_counts)
    if len(states) > MAX_SOLVE_STATES:
        raise ValueError("state space too large for an exact solve")
    index = {s: i for i, s in enumerate(states)}
    size = len(states)
    rates = [[0] * size for _ in range(size)]
    for s in states:
        i = index[s]
        for x in range(n):
            t = bond_update(s, x, k)
            if t != s:
                j = index[t]
                rates[i][j] += 1
                rates[i][i] -= 1
    probs = _solve_stationary_int(rates)
    return StationaryTable(zip(states, probs))


def pushforward_distribution(spec: ProcessSpec) -> StationaryTable:
    """Exact law of the k-fold collapse of independent uniform layers.

    Enumerates the product of uniform ensembles, collapses every tuple and
    accumulates rational probabilities on the resulting label vectors.
    """
    if spec.model != "tasep":
        raise ValueError("exact pushforward tables exist only for the ring model")
    n = spec.n
    sizes = spec.layer_sizes
    weight = Fraction(1)
    for m in sizes:
        weight /= math.comb(n, m)
    acc: dict[tuple[int, ...], Fraction] = {}
    layers = [list(enumerate_configs(n, m)) for m in sizes]

    def rec(i: int, chosen: list[TorusConfig]):
        if i == len(layers):
            labels = class_label_encode(list(collapse_k(chosen)))
            acc[labels] = acc.get(labels, Fraction(0)) + weight
            return
        for cfg in layers[i]:
            chosen.append(cfg)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return StationaryTable(acc.items())


def sample_invariant(spec: ProcessSpec, rng) -> OrderedTuple:
    """One draw from the invariant law: independent uniform layers, then
    the k-fold collapse."""
    if spec.model == "tasep":
        layers = [random_config(spec.n, m, rng) for m in spec.layer_sizes]
    else:
        layers = [random_points(m, rng) for m in spec.layer_sizes]
    return collapse_k(layers)


# ---------------------------------------------------------------------------
# Hammersley dynamics
# ---------------------------------------------------------------------------


def _had_apply_mark(layers: list[list[Fraction]], u: Fraction) -> None:
    """Move, in every layer, the nearest point strictly left of u onto u."""
    for pts in layers:
        if not pts:
            continue
        i = bisect.bisect_left(pts, u) - 1  # cyclic left neighbour
        pts.pop(i if i >= 0 else len(pts) - 1)
        bisect.insort(pts, u)


def had_simulate(
    initial: Sequence[PointConfig],
    horizon: float,
    rng,
    record: bool = False,
    check_inclusion: bool = False,
):
    """Continuous-time run of the coupled mark process up to the horizon.

    Marks arrive at rate one, uniform on the torus, and act on all layers
    at once; marks colliding with an existing point are redrawn.  Returns
    (final OrderedTuple, events) with (time, u) pairs when record is set.
    """
    layers = [list(x.points) for x in initial]
    t = 0.0
    events = []
    while True:
        t += rng.expovariate(1)
        if t >= horizon:
            return OrderedTuple([PointConfig(pts) for pts in layers]), events
        occupied = set().union(*(set(p) for p in layers)) if layers else set()
        while True:
            u = Fraction(rng.getrandbits(53), 2**53)
            if u not in occupied:
                break
        _had_apply_mark(layers, u)
        if record:
            events.append((t, u))
        if check_inclusion:
            for a, b in zip(layers, layers[1:]):
                if not set(a) <= set(b):
                    raise RuntimeError("mark broke the inclusion ordering")


def had_sample_chain(
    initial: Sequence[PointConfig],
    rng,
    n_samples: int,
    sample_gap: float,
    burn_in: float = 0.0,
):
    """Sample the coupled state every `sample_gap` time units after an
    initial burn-in; returns a list of OrderedTuples."""
    state = OrderedTuple(initial)
    if burn_in > 0:
        state, _ = had_simulate(state, burn_in, rng)
    out = []
    for _ in range(n_samples):
        state, _ = had_simulate(state, sample_gap, rng)
        out.append(state)
    return out


# ---------------------------------------------------------------------------
# empirical measures
# ---------------------------------------------------------------------------


def empirical(obj, scale_n: int, mode: str = "atomic"):
    """Empirical measure of a configuration, point set, or tuple of them.

    Atomic mode puts mass 1/N on each occupied position; binned mode (ring
    configurations only) spreads each particle over the density cell
    [x/N - 1/2N, x/N + 1/2N)."""
    if isinstance(obj, (OrderedTuple, list, tuple)):
        return tuple(empirical(p, scale_n, mode) for p in obj)
    if mode == "atomic":
        return atomic_measure(obj, scale_n)
    if mode == "binned":
        if not isinstance(obj, TorusConfig):
            raise ValueError("binned empirical measures are for ring configurations")
        if scale_n != obj.n:
            raise ValueError("binned mode uses the configuration's own ring size")
        n = obj.n
        half = Fraction(1, 2 * n)
        cells = [
            (Fraction(x, n) - half, Fraction(x, n) + half, 1) for x in obj.sites()
        ]
        return TorusMeasure.from_cells(cells)
    raise ValueError("mode must be 'atomic' or 'binned'")

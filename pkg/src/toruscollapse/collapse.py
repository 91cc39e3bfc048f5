"""The collapsing operator: particles, points and positive measures.

A smaller configuration collapses onto a larger one by moving mass to the
right until domination holds.  Equivalently, the result charges every
half-open interval (a, b] with the original mass plus the net flux
J(a) - J(b), where J(v) is the largest positive excess of first-layer mass
over second-layer mass among closed intervals ending at v.

The flux at every refined-grid position is computed two ways: an O(B^2)
candidate enumeration (the defining supremum) and an O(B) cyclic
prefix/suffix-minimum pass; the test suite holds them equal.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import OrderedTuple, PointConfig, TorusConfig
from .measures import ONE, ZERO, TorusMeasure, cyc_len, frac


class CollapseError(ValueError):
    """Raised when the first argument carries more mass than the second."""


# ---------------------------------------------------------------------------
# discrete configurations
# ---------------------------------------------------------------------------


def collapse_discrete_algorithmic(
    eta1: TorusConfig, eta2: TorusConfig, order: Sequence[int] | None = None
) -> TorusConfig:
    """Move particles of eta1 rightward onto free eta2 sites.

    `order` lists eta1's particle sites in processing order (default:
    ascending from site 0).  At every step the first particle in that order
    sitting on an eta2-empty site moves to the first site to its right that
    is eta2-occupied and currently eta1-empty.  The result does not depend
    on the order; the test suite checks that.
    """
    if eta1.n != eta2.n:
        raise ValueError("ring sizes differ")
    if eta1.count > eta2.count:
        raise CollapseError("first configuration has more particles")
    n = eta1.n
    positions = list(eta1.sites()) if order is None else list(order)
    if sorted(positions) != sorted(eta1.sites()):
        raise ValueError("order must be a permutation of eta1's particle sites")
    occupied = set(positions)
    while True:
        moved = False
        for idx, p in enumerate(positions):
            if eta2[p]:
                continue
            q = (p + 1) % n
            while not (eta2[q] and q not in occupied):
                q = (q + 1) % n
                if q == p:
                    raise RuntimeError("no destination site found")
            occupied.remove(p)
            occupied.add(q)
            positions[idx] = q
            moved = True
            break
        if not moved:
            return TorusConfig.from_sites(n, occupied)


def discrete_flux(eta1: TorusConfig, eta2: TorusConfig) -> tuple[int, ...]:
    """Net rightward particle flux across each bond (x, x+1).

    J(x) is the largest positive excess of eta1 over eta2 among cyclic
    closed intervals ending at x; one prefix/suffix-minimum pass.
    """
    if eta1.n != eta2.n:
        raise ValueError("ring sizes differ")
    n = eta1.n
    d = [eta1[x] - eta2[x] for x in range(n)]
    total = sum(d)
    s = []
    acc = 0
    for x in range(n):
        acc += d[x]
        s.append(acc)
    pot = [0] + s[:-1]  # prefix sum just before each candidate left end
    pref = []
    m = pot[0]
    for x in range(n):
        m = min(m, pot[x])
        pref.append(m)
    suf: list[int | None] = [None] * n
    m = None
    for x in range(n - 1, -1, -1):
        suf[x] = m
        m = pot[x] if m is None else min(m, pot[x])
    out = []
    for x in range(n):
        best = s[x] - pref[x]
        if suf[x] is not None:
            best = max(best, s[x] + total - suf[x])
        out.append(max(0, best))
    return tuple(out)


def discrete_flux_direct(eta1: TorusConfig, eta2: TorusConfig) -> tuple[int, ...]:
    """Defining O(N^2) supremum over all interval left ends (test oracle)."""
    n = eta1.n
    d = [eta1[x] - eta2[x] for x in range(n)]
    out = []
    for x in range(n):
        best = 0
        acc = 0
        for back in range(n):
            acc += d[(x - back) % n]
            best = max(best, acc)
        out.append(best)
    return tuple(out)


def collapse_discrete_flux(
    eta1: TorusConfig, eta2: TorusConfig
) -> tuple[TorusConfig, "FluxProfile"]:
    """Collapse via the flux ledger: count(x) = eta1(x) + J(x-1) - J(x)."""
    if eta1.count > eta2.count:
        raise CollapseError("first configuration has more particles")
    n = eta1.n
    J = discrete_flux(eta1, eta2)
    bits = []
    for x in range(n):
        v = eta1[x] + J[(x - 1) % n] - J[x]
        if v not in (0, 1):
            raise RuntimeError("flux ledger produced a non-binary occupancy")
        bits.append(v)
    result = TorusConfig(bits)
    profile = FluxProfile(
        domain="discrete",
        positions=tuple(range(n)),
        values=tuple(Fraction(j) for j in J),
        slopes=None,
        intervals=_discrete_positive_runs(J),
        full_torus=all(j > 0 for j in J),
    )
    return result, profile


def _discrete_positive_runs(J: Sequence[int]) -> tuple["JInterval", ...]:
    n = len(J)
    if all(j > 0 for j in J) or not any(j > 0 for j in J):
        return ()
    start = next(i for i in range(n) if J[i] == 0)
    runs = []
    i = 0
    while i < n:
        j = (start + i) % n
        if J[j] == 0:
            i += 1
            continue
        length = 0
        while J[(j + length) % n] > 0:
            length += 1
        runs.append(
            JInterval(
                lo=Fraction(j),
                hi=Fraction((j + length) % n),
                left_closed=True,
                mass_delta=ZERO,
            )
        )
        i += length
    runs.sort(key=lambda r: r.lo)
    return tuple(runs)


def collapse_discrete(eta1: TorusConfig, eta2: TorusConfig) -> TorusConfig:
    """Default discrete collapse (flux route; equal to the algorithmic one)."""
    return collapse_discrete_flux(eta1, eta2)[0]


# ---------------------------------------------------------------------------
# point configurations
# ---------------------------------------------------------------------------


def collapse_points(x: PointConfig, y: PointConfig) -> PointConfig:
    """Move points of x rightward onto free points of y.

    Points of x already sitting on y stay put; a moving point lands on the
    nearest y-point to its right that is not currently occupied by x.
    """
    if len(x) > len(y):
        raise CollapseError("first point set is larger")
    ypts = list(y.points)
    yset = set(ypts)
    current = list(x.points)
    occupied = set(current)
    while True:
        moved = False
        for idx, p in enumerate(current):
            if p in yset:
                continue
            j = bisect.bisect_right(ypts, p)
            for step in range(len(ypts)):
                q = ypts[(j + step) % len(ypts)]
                if q not in occupied:
                    break
            else:
                raise RuntimeError("no destination point found")
            occupied.remove(p)
            occupied.add(q)
            current[idx] = q
            moved = True
            break
        if not moved:
            return PointConfig(sorted(occupied))


def point_flux(x: PointConfig, y: PointConfig) -> "FluxProfile":
    """Flux profile of the pair of unit-atom encodings of x and y."""
    mu = TorusMeasure.from_atoms(x.points, 1)
    nu = TorusMeasure.from_atoms(y.points, 1)
    return flux_profile(mu, nu)


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JInterval:
    """Maximal interval of positive flux: [lo, hi) when left_closed, else
    (lo, hi); hi == lo encodes the almost-full interval (lo, lo + 1).
    mass_delta is the first-layer mass excess the interval deposits at hi."""

    lo: Fraction
    hi: Fraction
    left_closed: bool
    mass_delta: Fraction

    def span(self) -> Fraction:
        L = cyc_len(self.lo, self.hi)
        return L if L > 0 else ONE

    def contains(self, u) -> bool:
        u = frac(u) % 1
        t = cyc_len(self.lo, u)
        if t == 0:
            return self.left_closed
        return t < self.span()


@dataclass(frozen=True)
class FluxProfile:
    """Flux J over a refined grid, with its positive set and increments.

    For measures, J is affine with slope slopes[j] on the open cell right of
    positions[j], clipped at zero; values[j] = J(positions[j]) and J is
    right-continuous.  The signed difference measure gamma is determined by
    J through gamma((a, b]) = J(b) - J(a) and has total mass zero.
    """

    domain: str
    positions: tuple
    values: tuple
    slopes: tuple | None
    intervals: tuple[JInterval, ...]
    full_torus: bool = False

    def at(self, v) -> Fraction:
        """Exact J(v) at any point of the torus."""
        if self.domain == "discrete":
            return self.values[int(v) % len(self.positions)]
        v = frac(v) % 1
        j = bisect.bisect_right(self.positions, v) - 1
        if self.positions[j] == v:
            return self.values[j]
        slope = self.slopes[j] if self.slopes else ZERO
        return max(ZERO, self.values[j] + slope * (v - self.positions[j]))

    def left_limit(self, v) -> Fraction:
        """Exact J(v-) at any point of the torus."""
        if self.domain == "discrete":
            return self.values[(int(v) - 1) % len(self.positions)]
        v = frac(v) % 1
        j = bisect.bisect_right(self.positions, v) - 1
        if self.positions[j] == v:
            j = (j - 1) % len(self.positions)
            end = ONE if j == len(self.positions) - 1 else self.positions[j + 1]
            seg = end - self.positions[j]
        else:
            seg = v - self.positions[j]
        slope = self.slopes[j] if self.slopes else ZERO
        return max(ZERO, self.values[j] + slope * seg)

    def gamma_interval(self, a, b) -> Fraction:
        """gamma((a, b]) = J(b) - J(a)."""
        return self.at(b) - self.at(a)

    def gamma_total(self) -> Fraction:
        """Total mass of gamma as the cyclic sum of continuous increments
        and jumps; zero for any flux profile."""
        total = ZERO
        n = len(self.positions)
        for j in range(n):
            nxt = self.positions[(j + 1) % n]
            total += self.left_limit(nxt) - self.values[j]
            total += self.values[(j + 1) % n] - self.left_limit(nxt)
        return total


def _refined_grid(rho1: TorusMeasure, rho2: TorusMeasure) -> list[Fraction]:
    grid = set(rho1.breakpoints) | set(rho2.breakpoints)
    grid |= {a.at for a in rho1.atoms} | {a.at for a in rho2.atoms}
    return sorted(grid)


def _sigma_data(rho1, rho2, grid):
    """Cellwise density difference, atom difference, cell lengths, prefix
    masses s[j] = sigma((grid[0], grid[j]]) and the total signed mass."""
    n = len(grid)
    dens = [rho1.density_at(p) - rho2.density_at(p) for p in grid]
    atom = [rho1.atom_at(p) - rho2.atom_at(p) for p in grid]
    lens = [(grid[j + 1] if j + 1 < n else ONE) - grid[j] for j in range(n)]
    s = [ZERO] * n
    acc = ZERO
    for j in range(1, n):
        acc += dens[j - 1] * lens[j - 1] + atom[j]
        s[j] = acc
    total = acc + dens[n - 1] * lens[n - 1] + atom[0]
    return dens, atom, lens, s, total


def flux_values_direct(rho1: TorusMeasure, rho2: TorusMeasure) -> tuple[Fraction, ...]:
    """J at every refined-grid position by full candidate enumeration.

    The supremum over interval left ends is attained among closed and
    left-open starts at grid positions; interior starts are dominated.
    """
    grid = _refined_grid(rho1, rho2)
    n = len(grid)
    _, atom, _, s, total = _sigma_data(rho1, rho2, grid)
    out = []
    for j in range(n):
        best = ZERO
        for i in range(n):
            wrap = total if i > j else ZERO
            e_closed = s[j] - s[i] + atom[i] + wrap
            if e_closed > best:
                best = e_closed
            if i != j and e_closed - atom[i] > best:
                best = e_closed - atom[i]
        out.append(best)
    return tuple(out)


def flux_values_fast(rho1: TorusMeasure, rho2: TorusMeasure) -> tuple[Fraction, ...]:
    """Same values as flux_values_direct in one prefix/suffix-minimum pass."""
    grid = _refined_grid(rho1, rho2)
    n = len(grid)
    _, atom, _, s, total = _sigma_data(rho1, rho2, grid)
    pots = [min(s[i], s[i] - atom[i]) for i in range(n)]
    pref = []
    m = pots[0]
    for i in range(n):
        m = min(m, pots[i])
        pref.append(m)
    suf: list[Fraction | None] = [None] * n
    m = None
    for i in range(n - 1, -1, -1):
        suf[i] = m
        m = pots[i] if m is None else min(m, pots[i])
    out = []
    for j in range(n):
        best = s[j] - pref[j]
        if suf[j] is not None:
            best = max(best, s[j] + total - suf[j])
        out.append(max(ZERO, best))
    return tuple(out)


def _assemble_intervals(grid, values, slopes, lens):
    """Maximal intervals of {J > 0} from grid values and cell slopes.

    Returns (components, full_torus); components are (lo, hi, left_closed)
    with hi exclusive (a grid position or an exact in-cell root of J).
    """
    n = len(grid)
    covers_right = [False] * n  # J > 0 just right of grid[j]
    reaches_end = [False] * n  # J > 0 just left of the next grid position
    root_of: dict[int, Fraction] = {}
    for j in range(n):
        end = grid[j] + lens[j]
        if values[j] > 0:
            covers_right[j] = True
            if slopes[j] < 0:
                root = grid[j] + values[j] / (-slopes[j])
                if root < end:
                    root_of[j] = root % 1
                else:
                    reaches_end[j] = True
            else:
                reaches_end[j] = True
        elif slopes[j] > 0:
            covers_right[j] = True
            reaches_end[j] = True
    if not any(covers_right):
        return (), False
    if all(v > 0 for v in values) and all(reaches_end):
        return (), True
    j0 = next(
        j for j in range(n) if not (reaches_end[(j - 1) % n] and values[j] > 0)
    )
    comps = []
    open_comp = None  # (lo, left_closed)
    for idx in range(n):
        j = (j0 + idx) % n
        if open_comp is not None and not values[j] > 0:
            comps.append((open_comp[0], grid[j], open_comp[1]))
            open_comp = None
        if open_comp is None and covers_right[j]:
            open_comp = (grid[j], values[j] > 0)
        if open_comp is not None and not reaches_end[j]:
            comps.append((open_comp[0], root_of[j], open_comp[1]))
            open_comp = None
    if open_comp is not None:
        comps.append((open_comp[0], grid[j0], open_comp[1]))
    return tuple(comps), False


def flux_profile(
    rho1: TorusMeasure, rho2: TorusMeasure, method: str = "fast"
) -> FluxProfile:
    """Flux profile of a pair of measures with nondecreasing masses.

    Interval left boundaries sit on the refined grid; right boundaries are
    grid positions or exact in-cell roots of the affine flux.  An interval
    is left-closed exactly when J is positive at its left boundary.  The
    positive set can be the full torus only when the masses are equal.
    """
    if rho1.total_mass > rho2.total_mass:
        raise CollapseError("first measure has more mass")
    grid = _refined_grid(rho1, rho2)
    dens, _, lens, _, _ = _sigma_data(rho1, rho2, grid)
    values = (
        flux_values_direct(rho1, rho2)
        if method == "direct"
        else flux_values_fast(rho1, rho2)
    )
    comps, full = _assemble_intervals(grid, values, dens, lens)
    if full and rho1.total_mass < rho2.total_mass:
        raise RuntimeError(
            "positive-flux set covers the torus despite strictly smaller "
            "first mass; flux computation is inconsistent"
        )
    intervals = []
    for lo, hi, left_closed in comps:
        d1 = _interval_mass_typed(rho1, lo, hi, left_closed)
        d2 = _interval_mass_typed(rho2, lo, hi, left_closed)
        intervals.append(JInterval(lo, hi, left_closed, d1 - d2))
    intervals.sort(key=lambda r: r.lo)
    return FluxProfile(
        domain="measure",
        positions=tuple(grid),
        values=tuple(values),
        slopes=tuple(dens),
        intervals=tuple(intervals),
        full_torus=full,
    )


def _interval_mass_typed(rho: TorusMeasure, lo, hi, left_closed: bool) -> Fraction:
    """Mass of [lo, hi) or (lo, hi); hi == lo encodes (lo, lo + 1)."""
    mass = rho.interval_mass(lo, hi) - rho.atom_at(hi)
    if left_closed:
        mass += rho.atom_at(lo)
    return mass


def collapse_measure(
    rho1: TorusMeasure, rho2: TorusMeasure, method: str = "fast"
) -> tuple[TorusMeasure, FluxProfile]:
    """Collapse rho1 onto rho2: the unique measure charging every (a, b]
    with rho1's mass plus J(a) - J(b).

    Where the flux is positive the result carries rho2's density, elsewhere
    rho1's; flux jumps down deposit atoms.  The result is positive, keeps
    rho1's total mass and is dominated by rho2.
    """
    profile = flux_profile(rho1, rho2, method=method)
    grid = list(profile.positions)
    n = len(grid)
    values = profile.values
    slopes = profile.slopes

    bps: list[Fraction] = []
    dens: list[Fraction] = []
    for j in range(n):
        start = grid[j]
        end = grid[j + 1] if j + 1 < n else ONE
        d1 = rho1.density_at(start)
        d2 = rho2.density_at(start)
        if values[j] > 0 and slopes[j] < 0:
            root = start + values[j] / (-slopes[j])
            if root < end:
                bps.extend([start, root])
                dens.extend([d2, d1])
                continue
        bps.append(start)
        dens.append(d2 if values[j] > 0 or slopes[j] > 0 else d1)

    atoms: dict[Fraction, Fraction] = {}
    for j in range(n):
        jump = values[j] - profile.left_limit(grid[j])
        mass = rho1.atom_at(grid[j]) - jump
        if mass < 0:
            raise RuntimeError("collapse produced a negative atom")
        if mass > 0:
            atoms[grid[j]] = mass

    result = TorusMeasure(bps, dens, atoms.items())
    if result.total_mass != rho1.total_mass:
        raise RuntimeError("collapse failed to conserve mass")
    return result, profile


def collapse_measure_representation(
    rho1: TorusMeasure, rho2: TorusMeasure, profile: FluxProfile
) -> TorusMeasure:
    """Independent assembly of the collapse from the positive-flux set:
    rho1 off it, rho2 on it, plus one atom per interval at its right end.

    Defined only when the positive-flux set is not the whole torus.
    """
    if profile.full_torus:
        raise ValueError("representation requires a nonfull positive-flux set")
    cuts = {ZERO} | set(rho1.breakpoints) | set(rho2.breakpoints)
    for iv in profile.intervals:
        cuts.add(iv.lo)
        cuts.add(iv.hi)
    grid = sorted(cuts)
    dens = []
    for j, b in enumerate(grid):
        nxt = grid[j + 1] if j + 1 < len(grid) else ONE
        mid = (b + nxt) / 2
        inside = any(cyc_len(iv.lo, mid) < iv.span() for iv in profile.intervals)
        src = rho2 if inside else rho1
        dens.append(src.density_at(mid))
    atoms: dict[Fraction, Fraction] = {}
    for a in rho1.atoms:
        if not any(iv.contains(a.at) for iv in profile.intervals):
            atoms[a.at] = atoms.get(a.at, ZERO) + a.mass
    for a in rho2.atoms:
        if any(iv.contains(a.at) for iv in profile.intervals):
            atoms[a.at] = atoms.get(a.at, ZERO) + a.mass
    for iv in profile.intervals:
        if iv.mass_delta < 0:
            raise RuntimeError("interval mass excess must be nonnegative")
        if iv.mass_delta > 0:
            atoms[iv.hi] = atoms.get(iv.hi, ZERO) + iv.mass_delta
    return TorusMeasure(grid, dens, atoms.items())


# ---------------------------------------------------------------------------
# k-fold composition and commutation
# ---------------------------------------------------------------------------


def _mass_of(part):
    if isinstance(part, TorusConfig):
        return part.count
    if isinstance(part, PointConfig):
        return len(part)
    if isinstance(part, TorusMeasure):
        return part.total_mass
    raise TypeError(f"unsupported part type {type(part)!r}")


def _collapse_binary(a, b):
    if isinstance(a, TorusConfig):
        return collapse_discrete(a, b)
    if isinstance(a, PointConfig):
        return collapse_points(a, b)
    if isinstance(a, TorusMeasure):
        return collapse_measure(a, b)[0]
    raise TypeError(f"unsupported part type {type(a)!r}")


def collapse_k(parts: Sequence) -> OrderedTuple:
    """k-fold collapse: the last layer is kept, and layer i is pushed
    through layers i+1, ..., k in turn.  Masses must be nondecreasing."""
    parts = list(parts)
    masses = [_mass_of(p) for p in parts]
    if any(m1 > m2 for m1, m2 in zip(masses, masses[1:])):
        raise CollapseError("masses must be nondecreasing")
    out = []
    for i, part in enumerate(parts):
        theta = part
        for j in range(i + 1, len(parts)):
            theta = _collapse_binary(theta, parts[j])
        out.append(theta)
    return OrderedTuple(out)


def atomic_measure(obj, scale_n: int) -> TorusMeasure:
    """Empirical atomic encoding: mass 1/N at x/N for configurations, at
    each point for point sets."""
    if scale_n <= 0:
        raise ValueError("scale must be positive")
    w = Fraction(1, scale_n)
    if isinstance(obj, TorusConfig):
        return TorusMeasure.from_atoms([Fraction(x, obj.n) for x in obj.sites()], w)
    if isinstance(obj, PointConfig):
        return TorusMeasure.from_atoms(obj.points, w)
    raise TypeError(f"unsupported type {type(obj)!r}")


def commutation_check(parts: Sequence, scale_n: int) -> bool:
    """Whether collapsing then embedding equals embedding then collapsing,
    exactly, for a tuple of configurations or point sets."""
    collapsed = collapse_k(parts)
    lhs = [atomic_measure(p, scale_n) for p in collapsed]
    rhs = list(collapse_k([atomic_measure(p, scale_n) for p in parts]))
    return lhs == rhs

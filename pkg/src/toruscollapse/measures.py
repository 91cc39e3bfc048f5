"""Positive measures on the unit torus with exact rational arithmetic.

A measure is a piecewise-constant density plus finitely many atoms.  This
family is closed under every operation needed here (collapse, restriction,
convex combination) and all masses, breakpoints and hull computations stay
exact.  Floating point enters only in the rate module, through log.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**15) if x != int(x) else Fraction(int(x))
    return Fraction(x)


def cyc_len(a: Fraction, b: Fraction) -> Fraction:
    """Length of the cyclic segment from a rightward to b; 0 when a == b."""
    return (b - a) % 1


class Atom(NamedTuple):
    at: Fraction
    mass: Fraction


@dataclass(frozen=True)
class ClosedArc:
    """Closed cyclic interval [lo, hi]; wraps through 0 when hi < lo."""

    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return cyc_len(self.lo, self.hi)

    @property
    def wraps(self) -> bool:
        return self.hi < self.lo

    def __contains__(self, u) -> bool:
        u = frac(u) % 1
        return cyc_len(self.lo, u) <= cyc_len(self.lo, self.hi)


class TorusMeasure:
    """Piecewise-constant density plus atoms, in canonical form.

    Cells are [bp[i], bp[i+1]) with bp[0] == 0 and an implicit final edge at
    1; adjacent cells with equal density are merged (0 stays a breakpoint),
    so equality of canonical forms is equality of measures.
    """

    __slots__ = ("breakpoints", "densities", "atoms", "total_mass")

    def __init__(self, breakpoints: Sequence, densities: Sequence, atoms: Iterable = ()):
        bps = [frac(b) % 1 for b in breakpoints]
        dens = [frac(d) for d in densities]
        if len(bps) != len(dens):
            raise ValueError("need one density per cell")
        if len(bps) == 0:
            bps, dens = [ZERO], [ZERO]
        if sorted(set(bps)) != bps:
            raise ValueError("breakpoints must be sorted and distinct")
        if any(d < 0 for d in dens):
            raise ValueError("densities must be nonnegative")
        if bps[0] != 0:
            # split the wrapping cell at 0 so no cell crosses the origin
            bps = [ZERO] + bps
            dens = [dens[-1]] + dens
        # merge adjacent equal-density cells (keep the origin breakpoint)
        cbps, cdens = [bps[0]], [dens[0]]
        for b, d in zip(bps[1:], dens[1:]):
            if d == cdens[-1]:
                continue
            cbps.append(b)
            cdens.append(d)
        ats = sorted((Atom(frac(p) % 1, frac(m)) for p, m in atoms), key=lambda a: a.at)
        if any(a.mass <= 0 for a in ats):
            raise ValueError("atom masses must be positive")
        if len({a.at for a in ats}) != len(ats):
            raise ValueError("atom locations must be distinct")
        object.__setattr__(self, "breakpoints", tuple(cbps))
        object.__setattr__(self, "densities", tuple(cdens))
        object.__setattr__(self, "atoms", tuple(ats))
        edges = list(self.breakpoints) + [ONE]
        ac = sum((edges[i + 1] - edges[i]) * d for i, d in enumerate(self.densities))
        object.__setattr__(self, "total_mass", ac + sum(a.mass for a in ats))

    def __setattr__(self, name, value):
        raise AttributeError("TorusMeasure is immutable")

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "TorusMeasure":
        return cls([0], [0])

    @classmethod
    def constant(cls, c) -> "TorusMeasure":
        return cls([0], [frac(c)])

    @classmethod
    def lebesgue(cls) -> "TorusMeasure":
        return cls.constant(1)

    @classmethod
    def from_cells(cls, cells: Iterable, atoms: Iterable = ()) -> "TorusMeasure":
        """Build from (lo, hi, density) pieces; unspecified regions get 0.

        Pieces are half-open [lo, hi) and may wrap through 0; overlapping
        pieces add their densities.
        """
        cuts = {ZERO}
        pieces = []
        for lo, hi, d in cells:
            lo, hi, d = frac(lo) % 1, frac(hi) % 1, frac(d)
            cuts.add(lo)
            cuts.add(hi)
            pieces.append((lo, hi, d))
        grid = sorted(cuts)
        dens = []
        for i, b in enumerate(grid):
            nxt = grid[i + 1] if i + 1 < len(grid) else ONE
            mid = (b + nxt) / 2
            val = ZERO
            for lo, hi, d in pieces:
                if lo == hi:
                    continue
                if cyc_len(lo, mid) < cyc_len(lo, hi):
                    val += d
            dens.append(val)
        return cls(grid, dens, atoms)

    @classmethod
    def indicator(cls, lo, hi, height=1) -> "TorusMeasure":
        return cls.from_cells([(lo, hi, height)])

    @classmethod
    def from_atoms(cls, positions: Iterable, mass_each=1) -> "TorusMeasure":
        m = frac(mass_each)
        return cls([0], [0], [(p, m) for p in positions])

    # ---- basic queries -------------------------------------------------

    @property
    def is_absolutely_continuous(self) -> bool:
        return not self.atoms

    @property
    def is_bounded_density(self) -> bool:
        return self.is_absolutely_continuous and all(d <= 1 for d in self.densities)

    def density_at(self, u) -> Fraction:
        """Density of the cell containing u (the a.e. value near u)."""
        u = frac(u) % 1
        i = bisect.bisect_right(self.breakpoints, u) - 1
        return self.densities[i]

    def atom_at(self, u) -> Fraction:
        u = frac(u) % 1
        for a in self.atoms:
            if a.at == u:
                return a.mass
        return ZERO

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TorusMeasure)
            and self.breakpoints == other.breakpoints
            and self.densities == other.densities
            and self.atoms == other.atoms
        )

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.densities, self.atoms))

    def __repr__(self) -> str:
        cells = ", ".join(
            f"[{b},·)={d}" for b, d in zip(self.breakpoints, self.densities)
        )
        ats = ", ".join(f"{a.mass}@{a.at}" for a in self.atoms)
        return f"TorusMeasure({cells}{'; ' + ats if ats else ''})"

    # ---- integration ---------------------------------------------------

    def _ac_linear_mass(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Density mass of [lo, hi] for 0 <= lo <= hi <= 1 (no wrapping)."""
        if hi <= lo:
            return ZERO
        edges = list(self.breakpoints) + [ONE]
        total = ZERO
        i = bisect.bisect_right(self.breakpoints, lo) - 1
        pos = lo
        while pos < hi:
            cell_end = edges[i + 1]
            seg_end = min(cell_end, hi)
            total += (seg_end - pos) * self.densities[i]
            pos = seg_end
            i += 1
        return total

    def ac_mass(self, a, b) -> Fraction:
        """Density mass of the cyclic segment from a to b; full mass if a == b."""
        a, b = frac(a) % 1, frac(b) % 1
        if a == b:
            return self.total_mass - sum(x.mass for x in self.atoms)
        if a < b:
            return self._ac_linear_mass(a, b)
        return self._ac_linear_mass(a, ONE) + self._ac_linear_mass(ZERO, b)

    def interval_mass(self, a, b) -> Fraction:
        """Exact mass of the half-open cyclic interval (a, b]; (a, a] is the
        whole torus."""
        a, b = frac(a) % 1, frac(b) % 1
        if a == b:
            return self.total_mass
        mass = self.ac_mass(a, b)
        for at, m in self.atoms:
            if cyc_len(a, at) <= cyc_len(a, b) and at != a:
                mass += m
        return mass

    def closed_mass(self, a, b) -> Fraction:
        """Exact mass of the closed cyclic interval [a, b]; [a, a] = {a}."""
        a, b = frac(a) % 1, frac(b) % 1
        if a == b:
            return self.atom_at(a)
        return self.interval_mass(a, b) + self.atom_at(a)

    def arc_mass(self, arc: ClosedArc) -> Fraction:
        return self.closed_mass(arc.lo, arc.hi)

    # ---- arithmetic ------------------------------------------------------

    def scale(self, c) -> "TorusMeasure":
        c = frac(c)
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        if c == 0:
            return TorusMeasure.zero()
        return TorusMeasure(
            self.breakpoints,
            [d * c for d in self.densities],
            [(a.at, a.mass * c) for a in self.atoms],
        )

    def add(self, other: "TorusMeasure") -> "TorusMeasure":
        grid = sorted(set(self.breakpoints) | set(other.breakpoints))
        dens = [self.density_at(b) + other.density_at(b) for b in grid]
        masses: dict[Fraction, Fraction] = {}
        for a in list(self.atoms) + list(other.atoms):
            masses[a.at] = masses.get(a.at, ZERO) + a.mass
        return TorusMeasure(grid, dens, masses.items())

    def __add__(self, other):
        return self.add(other)

    # ---- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "breakpoints": [str(b) for b in self.breakpoints],
            "densities": [str(d) for d in self.densities],
            "atoms": [{"at": str(a.at), "mass": str(a.mass)} for a in self.atoms],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "TorusMeasure":
        return cls(
            [frac(b) for b in d["breakpoints"]],
            [frac(x) for x in d["densities"]],
            [(frac(a["at"]), frac(a["mass"])) for a in d.get("atoms", [])],
        )


def common_refinement(*rhos: TorusMeasure) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Shared breakpoint grid and per-measure density per refined cell."""
    grid = sorted(set().union(*(r.breakpoints for r in rhos)))
    dens = [[r.density_at(b) for b in grid] for r in rhos]
    return grid, dens


def measure_leq_witness(a: TorusMeasure, b: TorusMeasure) -> tuple[bool, str | None]:
    """Whether a(A) <= b(A) for every measurable A, with a witness if not.

    For this representation that is cellwise density domination on the common
    refinement plus pointwise atom domination.
    """
    grid, (da, db) = common_refinement(a, b)
    for bp, x, y in zip(grid, da, db):
        if x > y:
            return False, f"density {x} > {y} on cell starting at {bp}"
    batoms = {at: m for at, m in b.atoms}
    for at, m in a.atoms:
        if m > batoms.get(at, ZERO):
            return False, f"atom at {at}: {m} > {batoms.get(at, ZERO)}"
    return True, None


def measure_leq(a: TorusMeasure, b: TorusMeasure) -> bool:
    return measure_leq_witness(a, b)[0]


# ---- plateau decomposition ------------------------------------------------


@dataclass(frozen=True)
class PlateauDecomposition:
    """Maximal closed cyclic intervals where two densities agree.

    `full_torus` marks the degenerate case of measures equal a.e.; the
    complement of the intervals is recoverable via complement_arcs().
    """

    intervals: tuple[ClosedArc, ...]
    full_torus: bool = False

    def complement_arcs(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Open cyclic gaps (hi_i, lo_{i+1}) between consecutive intervals."""
        if self.full_torus:
            return ()
        if not self.intervals:
            return ((ZERO, ZERO),)  # the whole torus, as one cyclic gap
        out = []
        ivs = self.intervals
        for i, arc in enumerate(ivs):
            nxt = ivs[(i + 1) % len(ivs)]
            out.append((arc.hi, nxt.lo))
        return tuple(out)

    def covers(self, u) -> bool:
        if self.full_torus:
            return True
        return any(u in arc for arc in self.intervals)


def plateau_set(rho1: TorusMeasure, rho2: TorusMeasure, eq_tol: Fraction = ZERO) -> PlateauDecomposition:
    """Decompose {u : rho1(u) = rho2(u)} into maximal closed cyclic intervals.

    Densities are compared cell-by-cell on the common refinement, exactly by
    default; a positive eq_tol enables relative-tolerance comparison for
    float-imported data.  Atoms are rejected: plateaus are defined only for
    densities.
    """
    if rho1.atoms or rho2.atoms:
        raise ValueError("plateau decomposition requires absolutely continuous measures")
    grid, (d1, d2) = common_refinement(rho1, rho2)
    eq_tol = frac(eq_tol)

    def close(x: Fraction, y: Fraction) -> bool:
        if eq_tol == 0:
            return x == y
        return abs(x - y) <= eq_tol * max(abs(x), abs(y), ONE)

    mask = [close(x, y) for x, y in zip(d1, d2)]
    ncells = len(grid)
    if all(mask):
        return PlateauDecomposition((), full_torus=True)
    if not any(mask):
        return PlateauDecomposition(())
    edges = grid + [ONE]
    # find maximal cyclic runs of equal cells
    start = next(i for i in range(ncells) if not mask[i])
    arcs = []
    i = 0
    while i < ncells:
        j = (start + i) % ncells
        if not mask[j]:
            i += 1
            continue
        run_lo = grid[j]
        length = 0
        while length < ncells and mask[(j + length) % ncells]:
            length += 1
        run_hi = edges[((j + length - 1) % ncells) + 1] % 1
        arcs.append(ClosedArc(run_lo, run_hi))
        i += length
    arcs.sort(key=lambda a: a.lo)
    return PlateauDecomposition(tuple(arcs))


# ---- cumulative functions and concave envelopes -----------------------------


class CumulativeFunction:
    """Piecewise-linear cumulative mass along a closed arc of the torus.

    Knots are (offset, value) pairs with offset measured rightward from the
    arc's left endpoint; F(0) = 0 and F(L) is the arc mass.
    """

    __slots__ = ("base", "knots")

    def __init__(self, base: ClosedArc, knots: Sequence[tuple[Fraction, Fraction]]):
        knots = tuple((frac(t), frac(v)) for t, v in knots)
        if len(knots) < 2:
            raise ValueError("need at least two knots")
        if knots[0] != (ZERO, ZERO):
            raise ValueError("cumulative must start at (0, 0)")
        for (t0, _), (t1, _) in zip(knots, knots[1:]):
            if t1 <= t0:
                raise ValueError("knot offsets must increase")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "knots", knots)

    def __setattr__(self, name, value):
        raise AttributeError("CumulativeFunction is immutable")

    @property
    def length(self) -> Fraction:
        return self.knots[-1][0]

    @property
    def final_value(self) -> Fraction:
        return self.knots[-1][1]

    def is_nondecreasing(self) -> bool:
        return all(v1 >= v0 for (_, v0), (_, v1) in zip(self.knots, self.knots[1:]))

    def value_at(self, t) -> Fraction:
        """Exact value at offset t in [0, L], by linear interpolation."""
        t = frac(t)
        if not (0 <= t <= self.length):
            raise ValueError("offset outside the base interval")
        offs = [k[0] for k in self.knots]
        i = bisect.bisect_right(offs, t) - 1
        if i == len(self.knots) - 1:
            return self.knots[-1][1]
        (t0, v0), (t1, v1) = self.knots[i], self.knots[i + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    def value_at_point(self, u) -> Fraction:
        return self.value_at(cyc_len(self.base.lo, frac(u) % 1))

    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(
            (v1 - v0) / (t1 - t0)
            for (t0, v0), (t1, v1) in zip(self.knots, self.knots[1:])
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CumulativeFunction)
            and self.base == other.base
            and self.knots == other.knots
        )

    def __repr__(self) -> str:
        return f"CumulativeFunction({self.base}, {list(self.knots)})"


def cumulative(rho: TorusMeasure, arc: ClosedArc) -> CumulativeFunction:
    """Cumulative mass of rho along the arc, with a knot at every density
    breakpoint inside it.  Requires rho to carry no atoms on the arc."""
    if arc.length == 0:
        raise ValueError("arc must have positive length")
    for a in rho.atoms:
        if a.at in arc:
            raise ValueError("cumulative requires no atoms on the arc")
    knots = [(ZERO, ZERO)]
    L = arc.length
    # density breakpoints strictly inside the arc, in cyclic order from lo
    offsets = sorted(
        cyc_len(arc.lo, bp)
        for bp in rho.breakpoints
        if 0 < cyc_len(arc.lo, bp) < L
    )
    acc = ZERO
    pos = ZERO
    for t in offsets + [L]:
        seg = t - pos
        d = rho.density_at((arc.lo + pos) % 1)
        acc += seg * d
        knots.append((t, acc))
        pos = t
    return CumulativeFunction(arc, knots)


def concave_envelope(F: CumulativeFunction) -> CumulativeFunction:
    """Smallest concave majorant of a nondecreasing piecewise-linear function.

    Computed as the upper hull of the knot set; the result has nonincreasing
    slopes and agrees with F at both endpoints.
    """
    if not F.is_nondecreasing():
        raise ValueError("envelope requires a nondecreasing function")
    hull: list[tuple[Fraction, Fraction]] = []
    for p in F.knots:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            # keep only clockwise turns: slopes must strictly decrease
            if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return CumulativeFunction(F.base, hull)


def envelope_density(rho: TorusMeasure, arc: ClosedArc) -> TorusMeasure:
    """Density on the torus whose cumulative on the arc is the concave
    envelope of rho's cumulative, and which vanishes off the arc."""
    env = concave_envelope(cumulative(rho, arc))
    cells = []
    for (t0, v0), (t1, v1) in zip(env.knots, env.knots[1:]):
        lo = (arc.lo + t0) % 1
        hi = (arc.lo + t1) % 1
        cells.append((lo, hi, (v1 - v0) / (t1 - t0)))
    return TorusMeasure.from_cells(cells)

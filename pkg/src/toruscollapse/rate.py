"""Large-deviation rate functionals of the multiclass invariant measures.

The one-layer functional integrates a relative-entropy kernel over the
density profile.  The two-layer functional has a closed form: off the
plateaus (where the two profiles differ) it charges the first profile
directly; on every plateau interval the first profile is replaced by the
slope sequence of the concave envelope of its cumulative; the second
profile is charged everywhere.  A dynamic program over discretized
monotone cumulatives provides an independent variational oracle, and for
three or more layers only such oracles exist here.

All cell data stays rational; floating point enters through log only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .collapse import collapse_measure
from .measures import (
    ONE,
    ZERO,
    CumulativeFunction,
    PlateauDecomposition,
    TorusMeasure,
    cumulative,
    cyc_len,
    envelope_density,
    frac,
    measure_leq,
    plateau_set,
)

INF = math.inf


@dataclass(frozen=True)
class EntropyKernel:
    """Relative-entropy integrand for one family of dynamics.

    Exclusion ("tasep"): x log(x/m) + (1-x) log((1-x)/(1-m)) on [0, 1],
    nonnegative with a unique zero at m.  Continuous points ("had"):
    x log(x/m) on [0, inf), negative on (0, m); its integral over a
    mass-m profile is still nonnegative with equality only at the
    constant profile.
    """

    family: str
    m: Fraction

    def __post_init__(self):
        m = frac(self.m)
        object.__setattr__(self, "m", m)
        if self.family == "tasep":
            if not (0 < m < 1):
                raise ValueError("exclusion kernel needs 0 < m < 1")
        elif self.family == "had":
            if not m > 0:
                raise ValueError("point kernel needs m > 0")
        else:
            raise ValueError("family must be 'tasep' or 'had'")

    def __call__(self, x) -> float:
        x = frac(x)
        m = self.m
        if self.family == "tasep":
            if x < 0 or x > 1:
                return INF
            out = 0.0
            if x > 0:
                out += float(x) * math.log(x / m)
            if x < 1:
                out += float(1 - x) * math.log((1 - x) / (1 - m))
            return out
        if x < 0:
            return INF
        if x == 0:
            return 0.0
        return float(x) * math.log(x / m)

    def finite_at(self, x) -> bool:
        x = frac(x)
        if self.family == "tasep":
            return 0 <= x <= 1
        return x >= 0

    def is_zero_at(self, x) -> bool:
        """Exact pointwise zero of the kernel."""
        x = frac(x)
        if self.family == "tasep":
            return x == self.m
        return x == self.m or x == 0


def _domain_ok(rho: TorusMeasure, m: Fraction, family: str) -> bool:
    if not rho.is_absolutely_continuous:
        return False
    if rho.total_mass != m:
        return False
    if family == "tasep" and not all(d <= 1 for d in rho.densities):
        return False
    return True


def _integrate_kernel(
    rho: TorusMeasure,
    kernel: EntropyKernel,
    cuts: Sequence[Fraction] = (),
    predicate: Callable[[Fraction], bool] | None = None,
) -> float:
    """Sum of cell_length * kernel(cell_density) over refined cells whose
    midpoint satisfies the predicate."""
    grid = sorted(set(rho.breakpoints) | {frac(c) % 1 for c in cuts})
    total = 0.0
    for j, b in enumerate(grid):
        nxt = grid[j + 1] if j + 1 < len(grid) else ONE
        mid = (b + nxt) / 2
        if predicate is not None and not predicate(mid):
            continue
        total += float(nxt - b) * kernel(rho.density_at(mid))
    return total


def s1(rho: TorusMeasure, kernel: EntropyKernel) -> float:
    """One-layer rate: integral of the kernel over the density, infinite
    off the admissible class (wrong mass, atoms, or excluded density)."""
    if not _domain_ok(rho, kernel.m, kernel.family):
        return INF
    return _integrate_kernel(rho, kernel)


@dataclass(frozen=True)
class RateResult:
    """Two-layer rate value with the certificates used to compute it."""

    value: float
    finite: bool
    exact_zero: bool
    diagonal: bool
    plateau: PlateauDecomposition | None
    envelope_densities: tuple[TorusMeasure, ...]
    complement_integral: float
    plateau_integrals: tuple[float, ...]
    second_layer_integral: float

    @classmethod
    def infinite(cls) -> "RateResult":
        return cls(INF, False, False, False, None, (), 0.0, (), 0.0)


def s2(
    rho1: TorusMeasure,
    rho2: TorusMeasure,
    m1,
    m2,
    family: str = "tasep",
    eq_tol=ZERO,
) -> RateResult:
    """Closed-form two-layer rate functional.

    Infinite off ordered admissible pairs.  For equal masses only the
    diagonal is admissible and the rate is the one-layer integral.
    """
    m1, m2 = frac(m1), frac(m2)
    if not (_domain_ok(rho1, m1, family) and _domain_ok(rho2, m2, family)):
        return RateResult.infinite()
    if not measure_leq(rho1, rho2):
        return RateResult.infinite()
    if m1 == m2:
        if rho1 != rho2:
            return RateResult.infinite()
        kernel = EntropyKernel(family, m1)
        val = _integrate_kernel(rho1, kernel)
        return RateResult(
            value=val,
            finite=True,
            exact_zero=rho1 == TorusMeasure.constant(m1),
            diagonal=True,
            plateau=PlateauDecomposition((), full_torus=True),
            envelope_densities=(),
            complement_integral=0.0,
            plateau_integrals=(),
            second_layer_integral=val,
        )
    k1 = EntropyKernel(family, m1)
    k2 = EntropyKernel(family, m2)
    plateau = plateau_set(rho1, rho2, eq_tol=eq_tol)
    if plateau.full_torus:
        raise RuntimeError("equal densities a.e. with distinct masses")
    cuts = [p for arc in plateau.intervals for p in (arc.lo, arc.hi)]
    complement = _integrate_kernel(
        rho1, k1, cuts, predicate=lambda mid: not plateau.covers(mid)
    )
    env_measures = []
    plateau_terms = []
    zero_cert = all(
        k1.is_zero_at(rho1.density_at(mid))
        for mid in _cell_mids(rho1, cuts)
        if not plateau.covers(mid)
    )
    for arc in plateau.intervals:
        env = envelope_density(rho1, arc)
        env_measures.append(env)
        term = _integrate_kernel(
            env, k1, (arc.lo, arc.hi), predicate=lambda mid, a=arc: mid in a
        )
        plateau_terms.append(term)
        zero_cert = zero_cert and all(
            env.density_at(mid) == m1
            for mid in _cell_mids(env, (arc.lo, arc.hi))
            if mid in arc
        )
    second = _integrate_kernel(rho2, k2)
    zero_cert = zero_cert and rho2 == TorusMeasure.constant(m2)
    value = complement + sum(plateau_terms) + second
    return RateResult(
        value=value,
        finite=True,
        exact_zero=zero_cert,
        diagonal=False,
        plateau=plateau,
        envelope_densities=tuple(env_measures),
        complement_integral=complement,
        plateau_integrals=tuple(plateau_terms),
        second_layer_integral=second,
    )


def _cell_mids(rho: TorusMeasure, cuts: Sequence[Fraction] = ()):
    grid = sorted(set(rho.breakpoints) | {frac(c) % 1 for c in cuts})
    for j, b in enumerate(grid):
        nxt = grid[j + 1] if j + 1 < len(grid) else ONE
        yield (b + nxt) / 2


# ---------------------------------------------------------------------------
# preimage characterization and the variational oracle
# ---------------------------------------------------------------------------


def preimage_conditions(
    psi1: TorusMeasure, rho1: TorusMeasure, rho2: TorusMeasure
) -> bool:
    """Whether collapsing (psi1, rho2) yields exactly (rho1, rho2).

    Checked structurally: psi1 matches rho1 off the plateaus; on every
    plateau interval the cumulatives agree at the right endpoint and
    psi1's cumulative dominates rho2's throughout.
    """
    if not (
        psi1.is_absolutely_continuous
        and rho1.is_absolutely_continuous
        and rho2.is_absolutely_continuous
    ):
        raise ValueError("preimage conditions are defined for densities")
    if psi1.total_mass != rho1.total_mass:
        return False
    plateau = plateau_set(rho1, rho2)
    if plateau.full_torus:
        return psi1 == rho1
    cuts = [p for arc in plateau.intervals for p in (arc.lo, arc.hi)]
    grid = sorted(set(psi1.breakpoints) | set(rho1.breakpoints) | set(cuts))
    for j, b in enumerate(grid):
        nxt = grid[j + 1] if j + 1 < len(grid) else ONE
        mid = (b + nxt) / 2
        if not plateau.covers(mid) and psi1.density_at(mid) != rho1.density_at(mid):
            return False
    for arc in plateau.intervals:
        F_psi = cumulative(psi1, arc)
        F_rho2 = cumulative(rho2, arc)
        if F_psi.final_value != F_rho2.final_value:
            return False
        offs = sorted({t for t, _ in F_psi.knots} | {t for t, _ in F_rho2.knots})
        if any(F_psi.value_at(t) < F_rho2.value_at(t) for t in offs):
            return False
    return True


def _plateau_dp_min(
    F: CumulativeFunction, kernel: EntropyKernel, bounded: bool, extra_levels: int = 16
) -> float:
    """Minimal kernel integral over monotone piecewise-linear cumulatives
    that dominate F, start at 0 and end at F's final value.

    Value levels per position are all chords of F's knots plus a uniform
    grid, so the set is closed under the optimum; slopes outside the
    admissible range are priced at infinity.
    """
    knots = F.knots
    n = len(knots) - 1
    T = F.final_value
    positions = [t for t, _ in knots]
    fvals = [v for _, v in knots]
    levels: list[list[Fraction]] = []
    for j in range(n + 1):
        vals = {fvals[j]}
        for a in range(j + 1):
            for b in range(j, n + 1):
                if positions[a] == positions[b]:
                    continue
                chord = fvals[a] + (fvals[b] - fvals[a]) * (
                    positions[j] - positions[a]
                ) / (positions[b] - positions[a])
                if fvals[j] <= chord <= T:
                    vals.add(chord)
        if T > fvals[j]:
            step = (T - fvals[j]) / extra_levels
            for l in range(extra_levels + 1):
                vals.add(fvals[j] + step * l)
        levels.append(sorted(vals))
    levels[0] = [ZERO]
    levels[n] = [T]
    dp = {ZERO: 0.0}
    for j in range(n):
        seg = positions[j + 1] - positions[j]
        nxt: dict[Fraction, float] = {}
        for v, cost in dp.items():
            for w in levels[j + 1]:
                if w < v:
                    continue
                slope = (w - v) / seg
                if bounded and slope > 1:
                    continue
                c = cost + float(seg) * kernel(slope)
                if c < nxt.get(w, INF):
                    nxt[w] = c
        dp = nxt
    return dp.get(T, INF)


def s2_oracle(
    rho1: TorusMeasure,
    rho2: TorusMeasure,
    m1,
    m2,
    family: str = "tasep",
    extra_levels: int = 16,
) -> float:
    """Variational two-layer rate: minimize the product-law integral over
    the preimage of the pair, parameterized by the plateau cumulatives.

    Independent of the closed form: the per-plateau minimum is found by
    dynamic programming, not by an envelope construction.
    """
    m1, m2 = frac(m1), frac(m2)
    if not (_domain_ok(rho1, m1, family) and _domain_ok(rho2, m2, family)):
        return INF
    if not measure_leq(rho1, rho2):
        return INF
    k1 = EntropyKernel(family, m1)
    k2 = EntropyKernel(family, m2)
    if m1 == m2:
        return _integrate_kernel(rho1, k1) if rho1 == rho2 else INF
    plateau = plateau_set(rho1, rho2)
    cuts = [p for arc in plateau.intervals for p in (arc.lo, arc.hi)]
    total = _integrate_kernel(rho2, k2)
    total += _integrate_kernel(
        rho1, k1, cuts, predicate=lambda mid: not plateau.covers(mid)
    )
    for arc in plateau.intervals:
        F = cumulative(rho2, arc)
        total += _plateau_dp_min(F, k1, bounded=(family == "tasep"), extra_levels=extra_levels)
    return total


# ---------------------------------------------------------------------------
# explicit minimizers of the contraction identities
# ---------------------------------------------------------------------------


def minimizer_rho1(rho2: TorusMeasure, m1, family: str = "tasep") -> TorusMeasure:
    """First-layer profile of least two-layer rate at a given total profile:
    the collapse of the constant profile of mass m1 onto rho2."""
    m1 = frac(m1)
    if not rho2.is_absolutely_continuous:
        raise ValueError("total profile must be a density")
    if m1 > rho2.total_mass:
        raise ValueError("first-layer mass exceeds the total mass")
    result, _ = collapse_measure(TorusMeasure.constant(m1), rho2)
    return result


def minimizer_rho2(rho1: TorusMeasure, m2) -> TorusMeasure:
    """Total profile of least two-layer rate at a given first-layer profile.

    Equal to the first-layer profile on certain intervals stretching left
    from each excursion of the profile above m2, and to the constant m2
    elsewhere; each interval's left end makes the signed area of
    (m2 - profile) up to the excursion's right end vanish.
    """
    m2 = frac(m2)
    if not rho1.is_absolutely_continuous:
        raise ValueError("first-layer profile must be a density")
    m1 = rho1.total_mass
    if not m1 < m2:
        raise ValueError("total mass must strictly exceed the first-layer mass")
    grid = list(rho1.breakpoints)
    ncells = len(grid)
    edges = grid + [ONE]
    over = [rho1.densities[j] > m2 for j in range(ncells)]
    if not any(over):
        return TorusMeasure.constant(m2)

    # maximal cyclic runs of cells above m2
    excursions: list[tuple[int, int]] = []  # (first cell, cell count)
    if all(over):
        raise RuntimeError("profile above m2 everywhere contradicts the masses")
    start = next(j for j in range(ncells) if not over[j])
    i = 0
    while i < ncells:
        j = (start + i) % ncells
        if not over[j]:
            i += 1
            continue
        length = 0
        while over[(j + length) % ncells]:
            length += 1
        excursions.append((j, length))
        i += length

    stretches: list[tuple[Fraction, Fraction]] = []  # [w, right end]
    for first, length in excursions:
        right = edges[(first + length - 1) % ncells + 1] % 1
        g = ZERO
        for off in range(length):
            c = (first + off) % ncells
            g += (m2 - rho1.densities[c]) * (edges[c + 1] - edges[c])
        # walk leftward until the signed area vanishes
        c = (first - 1) % ncells
        steps = 0
        w = grid[first]
        while g < 0:
            steps += 1
            if steps > 2 * ncells + 2:
                raise RuntimeError("left endpoint search failed to terminate")
            d = rho1.densities[c]
            seg = edges[c + 1] - edges[c]
            gain = (m2 - d) * seg
            if g + gain >= 0 and gain > 0:
                w = edges[c + 1] - (-g) / (m2 - d)
                g = ZERO
            else:
                g += gain
                w = grid[c]
                c = (c - 1) % ncells
        stretches.append((w % 1, right))

    cuts = set(grid)
    for w, r in stretches:
        cuts.add(w)
        cuts.add(r)
    allg = sorted(cuts)

    def in_stretch(u: Fraction) -> bool:
        return any(cyc_len(w, u) < cyc_len(w, r) for w, r in stretches)

    dens = []
    for j, b in enumerate(allg):
        nxt = allg[j + 1] if j + 1 < len(allg) else ONE
        mid = (b + nxt) / 2
        dens.append(rho1.density_at(mid) if in_stretch(mid) else m2)
    out = TorusMeasure(allg, dens)
    if out.total_mass != m2:
        raise RuntimeError("constructed total profile has the wrong mass")
    return out


def contraction_identity_check(
    rho: TorusMeasure,
    family: str = "tasep",
    m_first=None,
    m_total=None,
) -> dict[str, float]:
    """Residuals of the two contraction identities at a fixed profile.

    With rho as the total profile and a smaller mass m_first, the optimal
    first layer achieves the one-layer rate of rho; with rho as the first
    layer and a larger mass m_total, the optimal total profile achieves
    the one-layer rate of rho.
    """
    out: dict[str, float] = {}
    mass = rho.total_mass
    if m_first is not None:
        best1 = minimizer_rho1(rho, m_first, family)
        r = s2(best1, rho, m_first, mass, family)
        out["first_layer_residual"] = abs(r.value - s1(rho, EntropyKernel(family, mass)))
    if m_total is not None:
        best2 = minimizer_rho2(rho, m_total)
        r = s2(rho, best2, mass, m_total, family)
        out["total_layer_residual"] = abs(r.value - s1(rho, EntropyKernel(family, mass)))
    return out


# ---------------------------------------------------------------------------
# the non-convexity certificate
# ---------------------------------------------------------------------------


def nonconvexity_certificate(cs: Sequence = (Fraction(9, 10), Fraction(99, 100), Fraction(999, 1000))):
    """Signed convexity margins of the two-layer rate along a segment where
    it fails to be convex (first profiles an indicator vs a half-density,
    common total profile), with the exact limiting defect.
    """
    m1, m2 = Fraction(1, 4), Fraction(3, 4)
    rho1 = TorusMeasure.indicator(Fraction(1, 4), Fraction(1, 2))
    rho1s = TorusMeasure.indicator(Fraction(1, 2), ONE, Fraction(1, 2))
    rho2 = TorusMeasure.indicator(Fraction(1, 4), ONE)
    a = s2(rho1, rho2, m1, m2, "tasep").value
    b = s2(rho1s, rho2, m1, m2, "tasep").value
    margins = {}
    for c in cs:
        c = frac(c)
        mix1 = rho1.scale(c).add(rho1s.scale(1 - c))
        mix = s2(mix1, rho2, m1, m2, "tasep").value
        margins[c] = float(c) * a + float(1 - c) * b - mix
    k1 = EntropyKernel("tasep", m1)
    limit = Fraction(1, 2) * Fraction(k1(Fraction(1, 2))) - (
        Fraction(1, 4) * Fraction(k1(1)) + Fraction(1, 4) * Fraction(k1(0))
    )
    return {
        "margins": margins,
        "most_negative": min(margins.values()),
        "limit_defect": float(limit),
        "profiles": (rho1, rho1s, rho2),
    }


# ---------------------------------------------------------------------------
# multilayer oracle on a quantized grid
# ---------------------------------------------------------------------------


def lattice_measures(cells: int, units: int, quantum: Fraction, family: str):
    """All piecewise-constant measures on `cells` uniform cells whose cell
    masses are multiples of the quantum summing to units * quantum; the
    exclusion family caps densities at one."""
    quantum = frac(quantum)
    cell_len = Fraction(1, cells)
    cap = None
    if family == "tasep":
        cap = int(cell_len / quantum)  # densities at most 1
    bps = [Fraction(i, cells) for i in range(cells)]

    def compositions(total: int, parts: int):
        if parts == 1:
            if cap is None or total <= cap:
                yield (total,)
            return
        top = total if cap is None else min(total, cap)
        for first in range(top + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for combo in compositions(units, cells):
        dens = [c * quantum / cell_len for c in combo]
        yield TorusMeasure(bps, dens)


def sk_oracle(
    rhos: Sequence[TorusMeasure],
    family: str,
    quantum,
    cells: int,
    tie_tol: float = 1e-9,
) -> dict:
    """Brute-force multilayer rate: minimize the product-law integral over
    quantized tuples whose k-fold collapse reproduces the target tuple.

    Exhaustive for up to three layers on coarse grids; reports the best
    value, the witness tuple and how many near-minimizers were seen (the
    preimage set need not be convex, so uniqueness is never claimed).
    """
    k = len(rhos)
    if k not in (2, 3):
        raise ValueError("oracle supports two or three layers")
    if cells > 12:
        raise ValueError("oracle grids are capped at 12 cells")
    quantum = frac(quantum)
    masses = [r.total_mass for r in rhos]
    units = []
    for m in masses:
        u = m / quantum
        if u.denominator != 1:
            raise ValueError("layer masses must be multiples of the quantum")
        units.append(int(u))
    kernels = [EntropyKernel(family, m) for m in masses]

    def layer_cost(psi: TorusMeasure, kern: EntropyKernel) -> float:
        return _integrate_kernel(psi, kern)

    best = INF
    best_tuple = None
    near = 0
    feasible = 0
    if k == 2:
        for psi1 in lattice_measures(cells, units[0], quantum, family):
            if collapse_measure(psi1, rhos[1])[0] != rhos[0]:
                continue
            feasible += 1
            val = layer_cost(psi1, kernels[0]) + layer_cost(rhos[1], kernels[1])
            best, best_tuple, near = _track(best, best_tuple, near, val, (psi1, rhos[1]), tie_tol)
    else:
        base = layer_cost(rhos[2], kernels[2])
        psi1_pool = list(lattice_measures(cells, units[0], quantum, family))
        for psi2 in lattice_measures(cells, units[1], quantum, family):
            if collapse_measure(psi2, rhos[2])[0] != rhos[1]:
                continue
            mid_cost = layer_cost(psi2, kernels[1])
            for psi1 in psi1_pool:
                inner = collapse_measure(psi1, psi2)[0]
                if collapse_measure(inner, rhos[2])[0] != rhos[0]:
                    continue
                feasible += 1
                val = base + mid_cost + layer_cost(psi1, kernels[0])
                best, best_tuple, near = _track(
                    best, best_tuple, near, val, (psi1, psi2, rhos[2]), tie_tol
                )
    return {
        "value": best,
        "witness": best_tuple,
        "near_minimizers": near,
        "feasible_count": feasible,
    }


def _track(best, best_tuple, near, val, tup, tol):
    if val < best - tol:
        return val, tup, 1
    if abs(val - best) <= tol:
        return min(best, val), best_tuple if val >= best else tup, near + 1
    return best, best_tuple, near


def s3_recursive(
    rhos: Sequence[TorusMeasure], family: str, quantum, cells: int
) -> dict:
    """Three-layer rate through the recursion: charge the last layer
    directly, then minimize the closed-form two-layer rate over quantized
    pairs that collapse onto the first two layers under the last."""
    if len(rhos) != 3:
        raise ValueError("recursion route needs exactly three layers")
    quantum = frac(quantum)
    masses = [r.total_mass for r in rhos]
    units = []
    for m in masses:
        u = m / quantum
        if u.denominator != 1:
            raise ValueError("layer masses must be multiples of the quantum")
        units.append(int(u))
    base = _integrate_kernel(rhos[2], EntropyKernel(family, masses[2]))
    phi1_pool = [
        p
        for p in lattice_measures(cells, units[0], quantum, family)
        if collapse_measure(p, rhos[2])[0] == rhos[0]
    ]
    best = INF
    feasible = 0
    for phi2 in lattice_measures(cells, units[1], quantum, family):
        if collapse_measure(phi2, rhos[2])[0] != rhos[1]:
            continue
        for phi1 in phi1_pool:
            if not measure_leq(phi1, phi2):
                continue
            feasible += 1
            val = base + s2(phi1, phi2, masses[0], masses[1], family).value
            if val < best:
                best = val
    return {"value": best, "feasible_count": feasible}


# ---------------------------------------------------------------------------
# exact combinatorial decay rates
# ---------------------------------------------------------------------------


def _log_big(n: int) -> float:
    return math.log(n)


def ldp_decay_exact(
    bin_densities: Sequence, m, sizes: Sequence[int]
) -> list[dict]:
    """Exact decay of the probability that uniform sampling produces a
    coarse profile, against the one-layer rate.

    The profile is constant on B equal bins; at ring size N the bin counts
    must be integers.  Probabilities are exact binomial ratios; the decay
    is -log(P)/N and the reported bound dominates the Stirling error.
    """
    dens = [frac(d) for d in bin_densities]
    m = frac(m)
    B = len(dens)
    if sum(dens) / B != m:
        raise ValueError("bin densities must average to the mass parameter")
    if any(d < 0 or d > 1 for d in dens):
        raise ValueError("bin densities must lie in [0, 1]")
    kern = EntropyKernel("tasep", m)
    s1_val = sum(float(Fraction(1, B)) * kern(d) for d in dens)
    rows = []
    for n in sizes:
        if n % B:
            raise ValueError(f"bin count {B} must divide the ring size {n}")
        nb = n // B
        counts = []
        for d in dens:
            j = d * nb
            if j.denominator != 1:
                raise ValueError(f"profile not realizable at size {n}")
            counts.append(int(j))
        mm = sum(counts)
        log_p = sum(_log_big(math.comb(nb, j)) for j in counts) - _log_big(
            math.comb(n, mm)
        )
        decay = -log_p / n
        gap = decay - s1_val
        rows.append(
            {
                "n": n,
                "decay": decay,
                "rate": s1_val,
                "gap": gap,
                "bound": B * (1 + math.log(n + 1)) / n,
            }
        )
    return rows

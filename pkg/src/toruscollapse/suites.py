"""Batch verification suites: every checkable claim, re-runnable from a
seeded config with byte-identical results (modulo platform log evaluation).

Suites continue past failures and aggregate; the report says which checks
failed and by how much.  Heavy suites fan independent units out to a
process pool when threads > 1; the fold back into a report is ordered by
check id, so parallelism never changes the output.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .collapse import (
    collapse_discrete_algorithmic,
    collapse_discrete_flux,
    collapse_k,
    collapse_measure,
    collapse_measure_representation,
    commutation_check,
    discrete_flux,
    discrete_flux_direct,
    flux_profile,
)
from .dynamics import (
    ProcessSpec,
    exact_stationary,
    had_sample_chain,
    pushforward_distribution,
    sample_invariant,
)
from .lattice import random_config, random_points
from .measures import TorusMeasure, measure_leq, measure_leq_witness
from .rate import (
    contraction_identity_check,
    ldp_decay_exact,
    lattice_measures,
    nonconvexity_certificate,
    s2,
    s2_oracle,
    s3_recursive,
    sk_oracle,
)
from .stats import ks_two_sample


@dataclass(frozen=True)
class SuiteConfig:
    """Everything that determines a suite run, byte for byte."""

    suite: str
    seed: int = 0
    threads: int = 1
    out_dir: str | None = None
    overrides: dict = field(default_factory=dict)

    def get(self, key, default):
        return self.overrides.get(key, default)

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "threads": self.threads,
            "overrides": dict(self.overrides),
            "version": __version__,
        }


@dataclass
class CheckResult:
    check_id: str
    passed: bool
    statistic: str
    threshold: str
    runtime: float
    details: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    config: dict
    checks: list[CheckResult]
    runtime: float
    invocation: str
    content_hash: str

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "config": self.config,
            "invocation": self.invocation,
            "content_hash": self.content_hash,
            "runtime_seconds": round(self.runtime, 3),
            "checks": [
                {
                    "id": c.check_id,
                    "passed": c.passed,
                    "statistic": c.statistic,
                    "threshold": c.threshold,
                    "runtime_seconds": round(c.runtime, 3),
                    "details": c.details,
                }
                for c in self.checks
            ],
        }


def derive_seed(base: int, tag: str) -> int:
    digest = hashlib.sha256(f"{base}:{tag}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _timed(check_id, threshold, fn) -> CheckResult:
    t0 = time.time()
    try:
        passed, statistic, details = fn()
    except Exception as exc:  # a crashed check is a failed check
        return CheckResult(
            check_id, False, f"exception: {exc!r}", threshold, time.time() - t0
        )
    return CheckResult(
        check_id, passed, statistic, threshold, time.time() - t0, details
    )


# ---------------------------------------------------------------------------
# random generators shared by suites
# ---------------------------------------------------------------------------


def random_measure(rng, max_cells=6, max_atoms=2, denom=24, dmax=3) -> TorusMeasure:
    ncells = rng.randint(1, max_cells)
    bps = sorted(rng.sample([Fraction(i, denom) for i in range(denom)], ncells))
    dens = [Fraction(rng.randint(0, dmax * 4), 4) for _ in range(ncells)]
    atoms = {}
    for _ in range(rng.randint(0, max_atoms)):
        at = Fraction(rng.randint(0, 2 * denom - 1), 2 * denom)
        if at not in atoms:
            atoms[at] = Fraction(rng.randint(1, 8), 8)
    return TorusMeasure(bps, dens, atoms.items())


def random_ordered_pair(rng, cells=8, denom=16, family="tasep"):
    """Ordered absolutely continuous pair with plateau cells forced in."""
    bps = [Fraction(i, cells) for i in range(cells)]
    d1, d2 = [], []
    for _ in range(cells):
        a = rng.randint(0, 12) if family == "tasep" else rng.randint(0, 24)
        if rng.random() < 0.45:
            b = a
        else:
            cap = denom - a if family == "tasep" else 12
            b = a + rng.randint(1, max(1, cap))
        d1.append(Fraction(a, denom))
        d2.append(Fraction(b, denom))
    r1, r2 = TorusMeasure(bps, d1), TorusMeasure(bps, d2)
    if r1.total_mass >= r2.total_mass:
        return None
    return r1, r2


def random_lattice_triple(rng, cells=4, denom=16):
    """Ordered triple on a uniform grid with quantized masses and plateaus."""
    while True:
        u1, u2, u3 = [], [], []
        for _ in range(cells):
            a = rng.randint(0, 2)
            b = a if rng.random() < 0.5 else min(4, a + rng.randint(0, 2))
            c = b if rng.random() < 0.5 else min(4, b + rng.randint(0, 2))
            u1.append(a)
            u2.append(b)
            u3.append(c)
        if sum(u1) < sum(u2) < sum(u3):
            bps = [Fraction(i, cells) for i in range(cells)]
            quantum = Fraction(1, denom)
            mk = lambda us: TorusMeasure(
                bps, [Fraction(u, 4) for u in us]
            )  # density u/4 = u * quantum / (1/cells) with denom = 16, cells = 4
            return mk(u1), mk(u2), mk(u3), quantum


# ---------------------------------------------------------------------------
# suite bodies
# ---------------------------------------------------------------------------


def _stationarity_unit(args):
    n, counts = args
    spec = ProcessSpec("tasep", tuple(counts), n=n)
    tv = exact_stationary(spec).tv_distance(pushforward_distribution(spec))
    return (n, counts, str(tv), tv == 0)


def suite_stationarity(cfg: SuiteConfig) -> list[CheckResult]:
    ns = cfg.get("ns", (3, 4, 5, 6))
    ks = cfg.get("ks", (2, 3))
    units = []
    for n in ns:
        for k in ks:
            for counts in _class_vectors(n, k):
                units.append((n, counts))
    t0 = time.time()
    results = _map_units(_stationarity_unit, units, cfg.threads)
    worst = max((Fraction(r[2]) for r in results), default=Fraction(0))
    bad = [r for r in results if not r[3]]
    return [
        CheckResult(
            "stationarity.pushforward_equals_linear_solve",
            not bad,
            f"max TV = {worst} over {len(results)} instances",
            "TV == 0 exactly",
            time.time() - t0,
            {"instances": len(results), "failures": [r[:2] for r in bad][:10]},
        )
    ]


def _class_vectors(n: int, k: int):
    out = []

    def rec(prefix, remaining):
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        for c in range(remaining + 1):
            rec(prefix + [c], remaining - c)

    rec([], n)
    return out


def suite_flux_equivalence(cfg: SuiteConfig) -> list[CheckResult]:
    pairs = cfg.get("pairs", 10**4)
    nmax = cfg.get("nmax", 64)
    direct_pairs = cfg.get("direct_pairs", 500)
    rng = random.Random(derive_seed(cfg.seed, "flux"))

    def body():
        mismatches = 0
        ledger_bad = 0
        direct_bad = 0
        for t in range(pairs):
            n = rng.randint(2, nmax)
            m2 = rng.randint(0, n)
            m1 = rng.randint(0, m2)
            e1 = random_config(n, m1, rng)
            e2 = random_config(n, m2, rng)
            res_a = collapse_discrete_algorithmic(e1, e2)
            res_f, prof = collapse_discrete_flux(e1, e2)
            if res_a != res_f:
                mismatches += 1
            J = [int(v) for v in prof.values]
            for x in range(n):
                if res_f[x] != e1[x] + J[(x - 1) % n] - J[x]:
                    ledger_bad += 1
                    break
            for _ in range(5):
                a, b = rng.randrange(n), rng.randrange(n)
                iv_sum = sum(res_f[(a + i) % n] for i in range((b - a) % n + 1))
                e1_sum = sum(e1[(a + i) % n] for i in range((b - a) % n + 1))
                if iv_sum != e1_sum + J[(a - 1) % n] - J[b]:
                    ledger_bad += 1
                    break
            if t < direct_pairs and discrete_flux(e1, e2) != discrete_flux_direct(e1, e2):
                direct_bad += 1
        ok = mismatches == 0 and ledger_bad == 0 and direct_bad == 0
        return ok, (
            f"{pairs} pairs: {mismatches} route mismatches, "
            f"{ledger_bad} ledger violations, {direct_bad} supremum mismatches"
        ), {}

    return [_timed("flux.algorithmic_vs_formula_vs_ledger", "0 mismatches", body)]


def suite_order_independence(cfg: SuiteConfig) -> list[CheckResult]:
    pairs = cfg.get("pairs", 10**3)
    orders = cfg.get("orders", 10)
    nmax = cfg.get("nmax", 32)
    rng = random.Random(derive_seed(cfg.seed, "order"))

    def body():
        bad = 0
        for _ in range(pairs):
            n = rng.randint(2, nmax)
            m2 = rng.randint(0, n)
            m1 = rng.randint(0, m2)
            e1 = random_config(n, m1, rng)
            e2 = random_config(n, m2, rng)
            ref = collapse_discrete_algorithmic(e1, e2)
            for _ in range(orders):
                order = list(e1.sites())
                rng.shuffle(order)
                if collapse_discrete_algorithmic(e1, e2, order) != ref:
                    bad += 1
                    break
        return bad == 0, f"{pairs} pairs x {orders} orders: {bad} mismatches", {}

    return [_timed("order.permutation_invariance", "identical outputs", body)]


def suite_commutation(cfg: SuiteConfig) -> list[CheckResult]:
    per_regime = cfg.get("inputs", 10**3)
    rng = random.Random(derive_seed(cfg.seed, "commutation"))
    checks = []

    def discrete_body():
        bad = 0
        for _ in range(per_regime):
            n = rng.randint(2, cfg.get("nmax", 32))
            k = rng.choice((2, 3))
            ms = sorted(rng.randint(0, n) for _ in range(k))
            parts = [random_config(n, m, rng) for m in ms]
            if not commutation_check(parts, n):
                bad += 1
        return bad == 0, f"{per_regime} inputs: {bad} failures", {}

    def points_body():
        bad = 0
        for _ in range(per_regime):
            k = rng.choice((2, 3))
            sizes = sorted(rng.randint(0, 8) for _ in range(k))
            parts = [random_points(s, rng) for s in sizes]
            if not commutation_check(parts, 7):
                bad += 1
        return bad == 0, f"{per_regime} inputs: {bad} failures", {}

    checks.append(_timed("commutation.discrete", "exact equality", discrete_body))
    checks.append(_timed("commutation.points", "exact equality", points_body))
    return checks


def suite_measure_collapse(cfg: SuiteConfig) -> list[CheckResult]:
    n_pairs = cfg.get("pairs", 10**3)
    rng = random.Random(derive_seed(cfg.seed, "measure"))

    def body():
        bad = []
        for t in range(n_pairs):
            r1 = random_measure(rng)
            r2 = random_measure(rng)
            if r1.total_mass > r2.total_mass:
                r1, r2 = r2, r1
            c, prof = collapse_measure(r1, r2)
            if prof.values != flux_profile(r1, r2, method="direct").values:
                bad.append((t, "flux paths differ"))
                continue
            grid = list(prof.positions)
            ok = True
            for a in grid:
                for b in grid:
                    if c.interval_mass(a, b) != r1.interval_mass(a, b) + prof.at(a) - prof.at(b):
                        ok = False
            if not ok:
                bad.append((t, "ledger identity"))
                continue
            if prof.gamma_total() != 0:
                bad.append((t, "gamma mass"))
                continue
            if c.total_mass != r1.total_mass:
                bad.append((t, "mass"))
                continue
            dom, wit = measure_leq_witness(c, r2)
            if not dom:
                bad.append((t, f"domination: {wit}"))
                continue
            if any(
                c.interval_mass(a, b) > r2.interval_mass(a, b)
                for a in grid
                for b in grid
            ):
                bad.append((t, "interval domination"))
                continue
            if not prof.full_torus:
                if collapse_measure_representation(r1, r2, prof) != c:
                    bad.append((t, "representation"))
                if any(iv.mass_delta < 0 for iv in prof.intervals):
                    bad.append((t, "negative interval excess"))
        return not bad, f"{n_pairs} pairs: {len(bad)} failures", {"failures": bad[:10]}

    return [_timed("measure.ledger_representation_domination", "exact", body)]


def suite_s2_oracle(cfg: SuiteConfig) -> list[CheckResult]:
    per_family = cfg.get("instances", 50)
    tol = cfg.get("tol", 1e-3)
    rng = random.Random(derive_seed(cfg.seed, "s2"))
    checks = []
    for family in ("tasep", "had"):

        def body(family=family):
            worst = 0.0
            done = 0
            slow = 0.0
            while done < per_family:
                pair = random_ordered_pair(rng, family=family)
                if pair is None:
                    continue
                r1, r2 = pair
                t0 = time.time()
                closed = s2(r1, r2, r1.total_mass, r2.total_mass, family).value
                oracle = s2_oracle(r1, r2, r1.total_mass, r2.total_mass, family)
                slow = max(slow, time.time() - t0)
                worst = max(worst, abs(closed - oracle))
                done += 1
            return worst <= tol and slow < 10.0, (
                f"{per_family} instances: worst |closed - oracle| = {worst:.2e}, "
                f"slowest {slow:.2f}s"
            ), {}

        checks.append(
            _timed(f"s2.closed_vs_variational.{family}", f"<= {tol}", body)
        )
    return checks


def suite_minimizers(cfg: SuiteConfig) -> list[CheckResult]:
    per_family = cfg.get("instances", 20)
    tol = cfg.get("tol", 1e-12)
    rng = random.Random(derive_seed(cfg.seed, "minimizers"))
    checks = []
    for family in ("tasep", "had"):

        def body(family=family):
            worst = 0.0
            done = 0
            while done < per_family:
                pair = random_ordered_pair(rng, cells=6, family=family)
                if pair is None:
                    continue
                rho, _ = pair
                mass = rho.total_mass
                if mass == 0:
                    continue
                res = contraction_identity_check(
                    rho,
                    family,
                    m_first=mass / 2,
                    m_total=(mass + 1) / 2 if family == "tasep" else mass * 2,
                )
                worst = max(worst, *res.values())
                done += 1
            return worst <= tol, f"{per_family} instances: worst residual {worst:.2e}", {}

        checks.append(_timed(f"minimizers.contraction.{family}", f"<= {tol}", body))

    def nested_body():
        rho1 = TorusMeasure.from_cells(
            [(Fraction(3, 10), Fraction(9, 20), 1), (Fraction(1, 2), Fraction(3, 5), 1)]
        )
        res = contraction_identity_check(rho1, "tasep", m_total=Fraction(11, 20))
        worst = res["total_layer_residual"]
        return worst <= tol, f"nested stretches residual {worst:.2e}", {}

    checks.append(_timed("minimizers.nested_stretches", f"<= {tol}", nested_body))

    def contrall_body():
        # three-layer contraction: minimizing out the middle layer recovers
        # the two-layer rate of the outer pair
        cells, denom = 4, 8
        bps = [Fraction(i, cells) for i in range(cells)]
        rho1 = TorusMeasure(bps, [Fraction(1, 2), Fraction(1, 2), 0, 0])
        rho3 = TorusMeasure(bps, [Fraction(1, 2), 1, Fraction(1, 2), 1])
        quantum = Fraction(1, denom)
        m1, m3 = rho1.total_mass, rho3.total_mass
        m2 = Fraction(1, 2)
        best = math.inf
        for rho2 in lattice_measures(cells, int(m2 / quantum), quantum, "tasep"):
            if not (measure_leq(rho1, rho2) and measure_leq(rho2, rho3)):
                continue
            val = sk_oracle([rho1, rho2, rho3], "tasep", quantum, cells)["value"]
            best = min(best, val)
        target = s2(rho1, rho3, m1, m3, "tasep").value
        gap = abs(best - target)
        return gap <= cfg.get("contrall_tol", 1e-2), f"|min_rho2 S3 - S2| = {gap:.2e}", {}

    checks.append(_timed("minimizers.three_layer_contraction", "<= 1e-2", contrall_body))
    return checks


def suite_nonconvexity(cfg: SuiteConfig) -> list[CheckResult]:
    checks = []

    def margin_body():
        cert = nonconvexity_certificate()
        margin = cert["margins"][Fraction(999, 1000)]
        return margin < 0, f"margin at c=0.999: {margin:.6f} (limit {cert['limit_defect']:.6f})", {}

    checks.append(_timed("nonconvexity.two_layer_margin", "< 0", margin_body))

    def triple_body():
        eps = Fraction(1, 10)
        psi = [
            TorusMeasure.indicator(Fraction(1, 8), Fraction(1, 8) + eps, 2),
            TorusMeasure.indicator(0, eps, 4).add(
                TorusMeasure.indicator(Fraction(7, 8), Fraction(7, 8) + eps, 4)
            ),
            TorusMeasure.indicator(Fraction(1, 4), Fraction(1, 4) + eps, 4).add(
                TorusMeasure.indicator(Fraction(1, 2), Fraction(1, 2) + eps, 8)
            ),
        ]
        tpsi = [
            TorusMeasure.indicator(Fraction(5, 8), Fraction(5, 8) + eps, 2),
            TorusMeasure.indicator(Fraction(3, 8), Fraction(3, 8) + eps, 4).add(
                TorusMeasure.indicator(Fraction(3, 4), Fraction(3, 4) + eps, 4)
            ),
            psi[2],
        ]
        rho = [
            TorusMeasure.indicator(Fraction(1, 4), Fraction(1, 4) + eps / 2, 4),
            TorusMeasure.indicator(Fraction(1, 4), Fraction(1, 4) + eps, 4).add(
                TorusMeasure.indicator(Fraction(1, 2), Fraction(1, 2) + eps / 2, 8)
            ),
            psi[2],
        ]
        a = list(collapse_k(psi)) == rho
        b = list(collapse_k(tpsi)) == rho
        mid = [p.scale(Fraction(1, 2)).add(q.scale(Fraction(1, 2))) for p, q in zip(psi, tpsi)]
        c = list(collapse_k(mid)) != rho
        return a and b and c, f"triples reproduce: {a}, {b}; midpoint differs: {c}", {}

    checks.append(_timed("nonconvexity.preimage_set", "exact", triple_body))
    return checks


def suite_ldp_decay(cfg: SuiteConfig) -> list[CheckResult]:
    sizes = cfg.get("sizes", (100, 1000, 10000))
    profiles = cfg.get(
        "profiles",
        (
            ((Fraction(1, 2), Fraction(0)), Fraction(1, 4)),
            (
                (Fraction(3, 5), Fraction(2, 5), Fraction(1, 5), Fraction(4, 5)),
                Fraction(1, 2),
            ),
        ),
    )
    checks = []
    artifacts = []
    for dens, m in profiles:
        b = len(dens)

        def body(dens=dens, m=m, b=b):
            rows = ldp_decay_exact(dens, m, sizes)
            artifacts.extend(rows)
            gaps = [abs(r["gap"]) for r in rows]
            bounded = all(abs(r["gap"]) <= r["bound"] for r in rows)
            decreasing = all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))
            stat = ", ".join(f"N={r['n']}: gap {r['gap']:.2e}" for r in rows)
            return bounded and decreasing, stat, {"rows": rows}

        checks.append(
            _timed(f"ldp.decay_b{b}", "|gap| <= B(1+log(N+1))/N, decreasing", body)
        )
    return checks


def _had_statistics(state) -> tuple[float, float]:
    """Per-draw scalar statistics of a two-layer point state: the largest
    gap of the full layer, and the total length of full-layer gaps lying
    immediately to the right of a first-layer point."""
    first, full = state[0], state[1]
    pts = list(full.points)
    n = len(pts)
    gaps = [float((pts[(i + 1) % n] - pts[i]) % 1) for i in range(n)]
    in_first = set(first.points)
    owned = sum(g for p, g in zip(pts, gaps) if p in in_first)
    return max(gaps), owned


def _had_unit(args):
    seed, n1, n2, samples, gap, burn = args
    rng = random.Random(seed)
    spec = ProcessSpec("had", (n1, n2 - n1))
    direct = [
        _had_statistics(sample_invariant(spec, rng)) for _ in range(samples)
    ]
    start = sample_invariant(spec, rng)
    chain = had_sample_chain(list(start), rng, samples, gap, burn)
    simulated = [_had_statistics(s) for s in chain]
    _, p_max = ks_two_sample([d[0] for d in direct], [s[0] for s in simulated])
    _, p_owned = ks_two_sample([d[1] for d in direct], [s[1] for s in simulated])
    return seed, p_max, p_owned


def suite_had_invariance(cfg: SuiteConfig) -> list[CheckResult]:
    n1, n2 = cfg.get("n1", 8), cfg.get("n2", 16)
    samples = cfg.get("samples", 10**3)
    gap = cfg.get("sample_gap", 40.0)
    burn = cfg.get("burn_in", 100.0)
    seeds = cfg.get("seeds", tuple(range(1, 9)))
    need = cfg.get("min_passing", 7)
    threshold = cfg.get("p_threshold", 0.01)
    units = [
        (derive_seed(cfg.seed, f"had:{s}"), n1, n2, samples, gap, burn) for s in seeds
    ]
    t0 = time.time()
    results = _map_units(_had_unit, units, cfg.threads)
    passing = sum(1 for _, p1, p2 in results if min(p1, p2) > threshold)
    detail = {
        f"seed_{s}": {"p_max_gap": round(p1, 4), "p_owned_gap": round(p2, 4)}
        for s, (_, p1, p2) in zip(seeds, results)
    }
    return [
        CheckResult(
            "had.sampler_vs_simulation_ks",
            passing >= need,
            f"{passing}/{len(seeds)} seeds with both p > {threshold}",
            f">= {need} of {len(seeds)} seeds",
            time.time() - t0,
            detail,
        )
    ]


def suite_recursion(cfg: SuiteConfig) -> list[CheckResult]:
    instances = cfg.get("instances", 10)
    tol = cfg.get("tol", 1e-2)
    rng = random.Random(derive_seed(cfg.seed, "recursion"))

    def body():
        worst = 0.0
        rows = []
        for i in range(instances):
            r1, r2, r3, quantum = random_lattice_triple(rng)
            direct = sk_oracle([r1, r2, r3], "tasep", quantum, 4)
            rec = s3_recursive([r1, r2, r3], "tasep", quantum, 4)
            gap = abs(direct["value"] - rec["value"])
            worst = max(worst, gap)
            rows.append(
                {
                    "instance": i,
                    "direct": direct["value"],
                    "recursive": rec["value"],
                    "gap": gap,
                    "near_minimizers": direct["near_minimizers"],
                }
            )
        return worst <= tol, f"{instances} instances: worst gap {worst:.2e}", {"rows": rows}

    return [_timed("recursion.direct_vs_two_layer", f"<= {tol}", body)]


# ---------------------------------------------------------------------------
# registry and runner
# ---------------------------------------------------------------------------

SUITES = {
    "stationarity": suite_stationarity,
    "flux-equivalence": suite_flux_equivalence,
    "order-independence": suite_order_independence,
    "commutation": suite_commutation,
    "measure-collapse": suite_measure_collapse,
    "s2-oracle": suite_s2_oracle,
    "minimizers": suite_minimizers,
    "nonconvexity": suite_nonconvexity,
    "ldp-decay": suite_ldp_decay,
    "had-invariance": suite_had_invariance,
    "recursion": suite_recursion,
}


def _map_units(fn, units, threads):
    if threads > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, units))
    return [fn(u) for u in units]


def run_suite(config: SuiteConfig) -> SuiteReport:
    if config.suite not in SUITES:
        raise ValueError(f"unknown suite {config.suite!r}; known: {sorted(SUITES)}")
    t0 = time.time()
    checks = SUITES[config.suite](config)
    cfg_json = config.to_json_dict()
    content_hash = hashlib.sha256(
        json.dumps(cfg_json, sort_keys=True, default=str).encode()
    ).hexdigest()[:16]
    report = SuiteReport(
        suite=config.suite,
        config=cfg_json,
        checks=sorted(checks, key=lambda c: c.check_id),
        runtime=time.time() - t0,
        invocation=" ".join(sys.argv),
        content_hash=content_hash,
    )
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        path = os.path.join(config.out_dir, f"{config.suite}.report.json")
        with open(path, "w") as fh:
            json.dump(report.to_json_dict(), fh, indent=2, default=str)
            fh.write("\n")
        for check in report.checks:
            rows = check.details.get("rows")
            if rows:
                from .serialize import rows_to_csv

                csv_path = os.path.join(config.out_dir, f"{check.check_id}.csv")
                with open(csv_path, "w") as fh:
                    fh.write(rows_to_csv(rows))
    return report


def run_all(seed=0, threads=1, out_dir=None, overrides=None) -> list[SuiteReport]:
    reports = []
    for name in SUITES:
        cfg = SuiteConfig(
            suite=name,
            seed=seed,
            threads=threads,
            out_dir=out_dir,
            overrides=dict(overrides or {}),
        )
        reports.append(run_suite(cfg))
    return reports

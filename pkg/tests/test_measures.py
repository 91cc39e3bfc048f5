import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toruscollapse.measures import (
    ClosedArc,
    TorusMeasure,
    concave_envelope,
    cumulative,
    envelope_density,
    measure_leq,
    plateau_set,
)

F = Fraction


class TestConstruction:
    def test_canonical_merges_cells(self):
        a = TorusMeasure([0, F(1, 4), F(1, 2)], [1, 1, 0])
        b = TorusMeasure([0, F(1, 2)], [1, 0])
        assert a == b

    def test_origin_always_breakpoint(self):
        a = TorusMeasure([F(1, 4), F(1, 2)], [1, 0])  # wrap cell [1/2, 1/4)
        assert a.breakpoints[0] == 0
        assert a.density_at(F(7, 8)) == 0
        assert a.density_at(F(3, 8)) == 1

    def test_total_mass(self):
        rho = TorusMeasure([0, F(1, 2)], [2, 0], [(F(3, 4), F(1, 2))])
        assert rho.total_mass == F(3, 2)

    def test_membership_flags(self):
        assert TorusMeasure.lebesgue().is_bounded_density
        assert not TorusMeasure.constant(2).is_bounded_density
        assert not TorusMeasure.from_atoms([F(1, 2)], 1).is_absolutely_continuous

    def test_rejects_negative_density(self):
        with pytest.raises(ValueError):
            TorusMeasure([0], [-1])

    def test_json_roundtrip(self):
        rho = TorusMeasure([0, F(1, 3)], [F(1, 2), F(3, 2)], [(F(1, 7), F(2, 5))])
        assert TorusMeasure.from_json_dict(rho.to_json_dict()) == rho


class TestIntervalMass:
    def test_lebesgue_half(self):
        assert TorusMeasure.lebesgue().interval_mass(0, F(1, 2)) == F(1, 2)

    def test_atom_boundary_right_closed(self):
        delta = TorusMeasure.from_atoms([F(1, 2)], 1)
        assert delta.interval_mass(F(1, 4), F(1, 2)) == 1
        assert delta.interval_mass(F(1, 2), F(3, 4)) == 0

    def test_density_piece(self):
        rho = TorusMeasure.indicator(F(1, 4), F(1, 2), 2)
        assert rho.interval_mass(0, F(3, 8)) == F(1, 4)

    def test_wrap_interval(self):
        rho = TorusMeasure.indicator(F(3, 4), F(1, 4))  # wraps through 0
        assert rho.total_mass == F(1, 2)
        assert rho.interval_mass(F(7, 8), F(1, 8)) == F(1, 4)

    def test_full_circle_convention(self):
        rho = TorusMeasure.constant(F(2, 3))
        assert rho.interval_mass(F(1, 3), F(1, 3)) == F(2, 3)

    def test_closed_mass_single_point(self):
        delta = TorusMeasure.from_atoms([F(1, 2)], F(1, 3))
        assert delta.closed_mass(F(1, 2), F(1, 2)) == F(1, 3)
        assert delta.closed_mass(F(1, 4), F(1, 4)) == 0


class TestOrder:
    def test_constant_ordering(self):
        assert measure_leq(TorusMeasure.constant(F(1, 2)), TorusMeasure.lebesgue())
        assert not measure_leq(TorusMeasure.lebesgue(), TorusMeasure.constant(F(1, 2)))

    def test_atom_ordering(self):
        small = TorusMeasure.from_atoms([F(1, 2)], 1)
        big = TorusMeasure.from_atoms([F(1, 2), F(3, 4)], 1)
        assert measure_leq(small, big)
        shifted = TorusMeasure.from_atoms([F(1, 3)], 1)
        assert not measure_leq(shifted, big)


class TestPlateau:
    def test_indicator_example(self):
        r1 = TorusMeasure.indicator(F(1, 4), F(1, 2))
        r2 = TorusMeasure.indicator(F(1, 4), 1)
        dec = plateau_set(r1, r2)
        assert not dec.full_torus
        assert dec.intervals == (ClosedArc(F(0), F(1, 2)),)

    def test_equal_measures_full_torus(self):
        r = TorusMeasure.indicator(F(1, 8), F(5, 8), F(1, 3))
        assert plateau_set(r, r).full_torus

    def test_distinct_constants_empty(self):
        dec = plateau_set(TorusMeasure.constant(F(1, 3)), TorusMeasure.constant(F(2, 3)))
        assert dec.intervals == () and not dec.full_torus

    def test_wrapping_plateau(self):
        r1 = TorusMeasure.indicator(F(1, 4), F(1, 2), 1)
        r2 = TorusMeasure.indicator(F(5, 8), F(3, 4), 1).add(r1)
        dec = plateau_set(r1, r2)
        # equal everywhere except [5/8, 3/4): one interval wrapping through 0
        assert len(dec.intervals) == 1
        arc = dec.intervals[0]
        assert arc.lo == F(3, 4) and arc.hi == F(5, 8) and arc.wraps

    def test_rejects_atoms(self):
        with pytest.raises(ValueError):
            plateau_set(TorusMeasure.from_atoms([0], 1), TorusMeasure.lebesgue())

    def test_symmetry_and_refinement_invariance(self):
        rng = random.Random(3)
        for _ in range(30):
            bps = sorted(rng.sample([F(i, 12) for i in range(12)], rng.randint(1, 5)))
            d1 = [F(rng.randint(0, 3), 3) for _ in bps]
            d2 = [d if rng.random() < 0.5 else F(rng.randint(0, 3), 3) for d in d1]
            r1, r2 = TorusMeasure(bps, d1), TorusMeasure(bps, d2)
            a = plateau_set(r1, r2)
            b = plateau_set(r2, r1)
            assert a == b
            # refining r1's grid must not change the decomposition
            refined = TorusMeasure(
                sorted(set(bps) | {F(1, 24)}),
                [r1.density_at(b_) for b_ in sorted(set(bps) | {F(1, 24)})],
            )
            assert plateau_set(refined, r2) == a

    def test_eq_tol(self):
        r1 = TorusMeasure.constant(F(1, 2))
        r2 = TorusMeasure.constant(F(1, 2) + F(1, 10**9))
        assert plateau_set(r1, r2).intervals == ()
        assert plateau_set(r1, r2, eq_tol=F(1, 10**6)).full_torus

    def test_complement_arcs(self):
        quarters = [F(i, 4) for i in range(4)]
        r1 = TorusMeasure(quarters, [1, 0, 1, 0])
        r2 = TorusMeasure(quarters, [1, F(1, 2), 1, F(1, 2)])
        dec = plateau_set(r1, r2)
        assert {(a.lo, a.hi) for a in dec.intervals} == {
            (F(0), F(1, 4)),
            (F(1, 2), F(3, 4)),
        }
        gaps = set(dec.complement_arcs())
        assert gaps == {(F(1, 4), F(1, 2)), (F(3, 4), F(0))}
        assert dec.covers(F(1, 8)) and not dec.covers(F(3, 8))


class TestCumulative:
    def test_constant_density_single_segment(self):
        rho = TorusMeasure.constant(F(2, 3))
        Fc = cumulative(rho, ClosedArc(F(0), F(1, 2)))
        assert Fc.knots == ((F(0), F(0)), (F(1, 2), F(1, 3)))

    def test_indicator_knots(self):
        rho = TorusMeasure.indicator(F(1, 4), F(1, 2))
        Fc = cumulative(rho, ClosedArc(F(0), F(1, 2)))
        assert Fc.knots == ((F(0), F(0)), (F(1, 4), F(0)), (F(1, 2), F(1, 4)))

    def test_knots_match_interval_mass(self):
        rng = random.Random(5)
        for _ in range(20):
            bps = sorted(rng.sample([F(i, 16) for i in range(16)], 3))
            dens = [F(rng.randint(0, 8), 4) for _ in bps]
            rho = TorusMeasure(bps, dens)
            arc = ClosedArc(F(1, 16), F(13, 16))
            Fc = cumulative(rho, arc)
            for t, v in Fc.knots:
                if t == 0:
                    assert v == 0
                else:
                    assert v == rho.interval_mass(arc.lo, (arc.lo + t) % 1)

    def test_wrap_arc(self):
        rho = TorusMeasure.indicator(F(3, 4), F(1, 4))
        Fc = cumulative(rho, ClosedArc(F(1, 2), F(3, 8)))
        assert Fc.final_value == rho.interval_mass(F(1, 2), F(3, 8))

    def test_rejects_atoms_on_arc(self):
        rho = TorusMeasure([0], [1], [(F(1, 4), 1)])
        with pytest.raises(ValueError):
            cumulative(rho, ClosedArc(F(0), F(1, 2)))


def chord_sup(knots, t):
    """Independent chord-supremum oracle for the concave envelope."""
    best = None
    for i, (ta, va) in enumerate(knots):
        for tb, vb in knots[i:]:
            if ta <= t <= tb and ta < tb:
                val = va + (vb - va) * (t - ta) / (tb - ta)
                best = val if best is None or val > best else best
            elif ta == tb == t:
                val = va
                best = val if best is None or val > best else best
    return best


class TestEnvelope:
    def test_concave_input_fixed_point(self):
        rho = TorusMeasure.from_cells([(0, F(1, 2), 1), (F(1, 2), 1, F(1, 4))])
        Fc = cumulative(rho, ClosedArc(F(0), F(0) + F(1, 2)))
        assert concave_envelope(Fc) == Fc

    def test_indicator_straightens(self):
        rho = TorusMeasure.indicator(F(1, 4), F(1, 2))
        env = envelope_density(rho, ClosedArc(F(0), F(1, 2)))
        assert env == TorusMeasure.indicator(0, F(1, 2), F(1, 2))

    def test_chord_supremum_oracle(self):
        rng = random.Random(9)
        bps = sorted(rng.sample([F(i, 40) for i in range(40)], 20))
        dens = [F(rng.randint(0, 16), 16) for _ in bps]
        rho = TorusMeasure(bps, dens)
        arc = ClosedArc(F(0), F(39, 40))
        Fc = cumulative(rho, arc)
        env = concave_envelope(Fc)
        for i in range(1000):
            t = Fc.length * F(i, 1000)
            assert env.value_at(t) == chord_sup(Fc.knots, t)

    def test_idempotent_and_slopes_nonincreasing(self):
        rng = random.Random(13)
        for _ in range(25):
            bps = sorted(rng.sample([F(i, 24) for i in range(24)], rng.randint(2, 8)))
            dens = [F(rng.randint(0, 12), 12) for _ in bps]
            rho = TorusMeasure(bps, dens)
            arc = ClosedArc(F(1, 48), F(47, 48))
            env = concave_envelope(cumulative(rho, arc))
            assert concave_envelope(env) == env
            slopes = env.slopes()
            assert all(a >= b for a, b in zip(slopes, slopes[1:]))
            assert env.final_value == cumulative(rho, arc).final_value
            # bounded inputs stay bounded
            if all(d <= 1 for d in dens):
                assert all(0 <= s <= 1 for s in slopes)

    def test_rejects_decreasing(self):
        from toruscollapse.measures import CumulativeFunction

        bad = CumulativeFunction(
            ClosedArc(F(0), F(1, 2)), [(F(0), F(0)), (F(1, 4), F(1, 4)), (F(1, 2), F(1, 8))]
        )
        with pytest.raises(ValueError):
            concave_envelope(bad)


class TestArithmetic:
    @given(st.data())
    @settings(max_examples=50, deadline=None)
    def test_add_masses(self, data):
        denom = 12
        nc = data.draw(st.integers(1, 4))
        bps = sorted(data.draw(st.sets(st.integers(0, denom - 1), min_size=nc, max_size=nc)))
        dens = data.draw(st.lists(st.integers(0, 5), min_size=nc, max_size=nc))
        a = TorusMeasure([F(b, denom) for b in bps], dens)
        b = TorusMeasure.constant(F(1, 3))
        assert a.add(b).total_mass == a.total_mass + b.total_mass
        assert a.scale(F(3, 2)).total_mass == a.total_mass * F(3, 2)

#include <doctest.h>

#include <cmath>
#include <random>

#include "orlicz/errors.hpp"
#include "orlicz/measure_space.hpp"

using namespace orlicz;

TEST_SUITE("measure_space") {
    TEST_CASE("construction and validation") {
        const auto one = MeasureSpace::create({{"a", 1.0}});
        CHECK(one->total_mass() == 1.0);
        const auto seg = MeasureSpace::create({}, Segment{1.0, 3});
        CHECK(seg->segment()->cell_count() == 8);
        CHECK(seg->segment()->cell_mass() == 0.125);
        CHECK_THROWS_AS(MeasureSpace::create({{"a", -1.0}}), DomainError);
        CHECK_THROWS_AS(MeasureSpace::create({{"a", 1.0}, {"a", 2.0}}), DomainError);
        CHECK_THROWS_AS(MeasureSpace::create({}, std::nullopt, CountableAtomFamily{MassRule::geometric(1.0, 1.5)}),
                        DomainError);
    }

    TEST_CASE("measures of piece sets") {
        const auto seg = MeasureSpace::create({}, Segment{1.0, 3});
        CHECK(measure(PieceSet::none(seg)) == 0.0);
        CHECK(measure(PieceSet(seg, {}, IntervalSet::range(2, 5))) == 0.375);

        const auto fam = MeasureSpace::create({}, std::nullopt, CountableAtomFamily{MassRule::geometric(0.5, 0.5)});
        CHECK(measure(PieceSet::whole(fam)) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(measure(PieceSet(fam, {}, {}, IntervalSet::range(2, 4))) == doctest::Approx(0.25 + 0.125));

        // Hurwitz-zeta sums against direct summation plus an integral tail estimate.
        const MassRule p = MassRule::power(1.0, 2.0);
        CHECK(p.sum({1, kUnbounded}) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
        double direct = 0.0;
        for (Index i = 5000; i < 20000; ++i) direct += 1.0 / (static_cast<double>(i) * static_cast<double>(i));
        CHECK(p.sum({5000, 20000}) == doctest::Approx(direct).epsilon(1e-10));

        const auto inf = MeasureSpace::create({}, std::nullopt, CountableAtomFamily{MassRule::constant(1.0)});
        CHECK(std::isinf(inf->total_mass()));
        CHECK_FALSE(inf->finite_measure());
    }

    TEST_CASE("foreign pieces are rejected") {
        const auto seg = MeasureSpace::create({}, Segment{1.0, 3});
        CHECK_THROWS_AS(PieceSet(seg, {}, IntervalSet::range(0, 9)), DomainError);
        CHECK_THROWS_AS(PieceSet(seg, IntervalSet::single(0)), DomainError);
    }

    TEST_CASE("additivity and decomposition") {
        const auto sp = MeasureSpace::create({{"a", 0.3}, {"b", 0.7}}, Segment{2.0, 4},
                                             CountableAtomFamily{MassRule::power(1.0, 3.0)});
        const auto [non, at] = decompose(sp);
        CHECK(non.intersect(at).empty());
        CHECK(non.unite(at) == PieceSet::whole(sp));
        CHECK(measure(non) + measure(at) == doctest::Approx(sp->total_mass()).epsilon(1e-15));

        std::mt19937_64 rng(3);
        for (int t = 0; t < 100; ++t) {
            const Index c = rng() % 16;
            const Index k = 1 + rng() % 50;
            const PieceSet a(sp, IntervalSet::single(rng() % 2), IntervalSet::range(0, c), IntervalSet::range(1, k));
            const PieceSet b = a.complement();
            CHECK(measure(a.unite(b)) == doctest::Approx(measure(a) + measure(b)).epsilon(1e-14));
        }
    }

    TEST_CASE("shrinking sequences halve the measure") {
        const auto seg = MeasureSpace::create({}, Segment{1.0, 2});
        const auto full = shrinking_sequence(PieceSet::all_cells(seg), 4);
        REQUIRE(full.sets.size() == 4);
        const double expected[] = {1.0, 0.5, 0.25, 0.125};
        for (int k = 0; k < 4; ++k) CHECK(measure(full.sets[k]) == expected[k]);
        for (int k = 0; k + 1 < 4; ++k) CHECK(full.sets[k + 1].subset_of(full.sets[k]));

        CHECK(shrinking_sequence(PieceSet::all_cells(seg), 1).sets.size() == 1);

        const auto half = shrinking_sequence(PieceSet(seg, {}, IntervalSet::range(0, 2)), 3);
        CHECK(measure(half.sets[0]) == 0.5);
        CHECK(measure(half.sets[1]) == 0.25);
        CHECK(measure(half.sets[2]) == 0.125);

        const auto long_run = shrinking_sequence(PieceSet::all_cells(seg), 30);
        for (std::size_t k = 1; k < long_run.sets.size(); ++k) {
            CHECK(measure(long_run.sets[k]) < measure(long_run.sets[k - 1]));
            if (k >= 5) CHECK(measure(long_run.sets[k]) < 1.0 / static_cast<double>(k));
        }

        const auto atoms = MeasureSpace::create({{"a", 1.0}}, Segment{1.0, 2});
        CHECK_THROWS_AS(shrinking_sequence(PieceSet(atoms, IntervalSet::single(0)), 2), NotNonatomicError);
        CHECK_THROWS_AS(shrinking_sequence(PieceSet::all_cells(seg), 60), DepthExhaustedError);
    }

    TEST_CASE("simple functions") {
        const auto sp = MeasureSpace::create({{"a", 0.5}, {"b", 0.5}}, std::nullopt,
                                             CountableAtomFamily{MassRule::geometric(0.5, 0.5)});
        CHECK(indicator(PieceSet::none(sp)).is_zero());
        const double u[] = {2.0, 5.0};
        const auto f = SimpleFunction::on_atoms(sp, u);
        CHECK(ess_sup(f) == 5.0);
        const SimpleFunction h(sp, LineFunction(sp->atom_universe()), LineFunction(sp->cell_universe()),
                               LineFunction(sp->family_universe(), ValueRule::harmonic(3.0)));
        CHECK(ess_sup(h) == doctest::Approx(3.0));
        CHECK(ess_inf_abs(h) == 0.0);
        CHECK(f.times(h) == h.times(f));
        CHECK(integral(indicator(PieceSet::whole(sp))) == doctest::Approx(2.0));
        const auto other = MeasureSpace::create({{"z", 1.0}});
        CHECK_THROWS_AS((void)f.times(SimpleFunction::zero(other)), DomainError);
        CHECK(f.where_abs(3.0) == PieceSet(sp, IntervalSet::single(1)));
    }
}

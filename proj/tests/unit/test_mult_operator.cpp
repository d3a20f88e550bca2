#include <doctest.h>

#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"
#include "orlicz/mult_operator.hpp"

using namespace orlicz;

namespace {

SpacePtr two_atoms() {
    return MeasureSpace::create({{"a1", 0.5}, {"a2", 0.5}});
}

SimpleFunction on_family(const SpacePtr& sp, ValueRule rule) {
    return SimpleFunction(sp, LineFunction(sp->atom_universe()), LineFunction(sp->cell_universe()),
                          LineFunction(sp->family_universe(), rule));
}

}  // namespace

TEST_SUITE("mult_operator") {
    TEST_CASE("apply") {
        const auto sp = two_atoms();
        const double u[] = {2.0, 5.0};
        const double one[] = {1.0, 1.0};
        const auto f = SimpleFunction::on_atoms(sp, one);
        CHECK(apply(SimpleFunction::constant(sp, 1.0), f) == f);
        CHECK(apply(SimpleFunction::zero(sp), f).is_zero());
        CHECK(apply(SimpleFunction::on_atoms(sp, u), f) == SimpleFunction::on_atoms(sp, u));
        CHECK_THROWS_AS(apply(f, SimpleFunction::zero(MeasureSpace::create({{"z", 1.0}}))), DomainError);
    }

    TEST_CASE("operator norm and witness") {
        const auto sp = two_atoms();
        const double u[] = {2.0, 5.0};
        const auto phi = OrliczFunction::power(2.0);
        const auto r = operator_norm(SimpleFunction::on_atoms(sp, u), phi);
        CHECK(r.value == 5.0);
        CHECK(r.witness == PieceSet(sp, IntervalSet::single(1)));
        CHECK(r.witness_ratio == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(operator_norm(SimpleFunction::constant(sp, -3.0), phi).value == 3.0);

        Rng rng(4);
        const auto probes = make_probes(sp, rng);
        const auto rep = analyze(SimpleFunction::on_atoms(sp, u), phi, nullptr, probes);
        CHECK(rep.probe_max_ratio <= 5.0 + 1e-8);
        CHECK(rep.probe_max_ratio >= 5.0 - 1e-4);

        for (double c : {-2.0, 0.5, 3.0})
            CHECK(operator_norm(SimpleFunction::on_atoms(sp, u).scaled(c), phi).value == std::abs(c) * 5.0);
    }

    TEST_CASE("seminorm case when omega vanishes on the maximum") {
        const auto sp = two_atoms();
        PieceMap collapse;
        collapse.atoms = {1, 1};
        const auto w = derive_weight(sp, collapse);
        const double u[] = {5.0, 2.0};
        const auto r = operator_norm(SimpleFunction::on_atoms(sp, u), OrliczFunction::power(2.0), &w);
        CHECK(r.value == 5.0);
        CHECK(r.seminorm_only);
        CHECK(r.weighted_value == 2.0);
        CHECK(r.witness_ratio == doctest::Approx(2.0).epsilon(1e-9));
    }

    TEST_CASE("N sets") {
        const auto sp = two_atoms();
        const double u[] = {2.0, 5.0};
        const auto f = SimpleFunction::on_atoms(sp, u);
        CHECK(n_set(f, 3.0) == PieceSet(sp, IntervalSet::single(1)));
        CHECK(n_set(f, 6.0).empty());
        const auto fam = MeasureSpace::create({}, std::nullopt, CountableAtomFamily{MassRule::geometric(0.5, 0.5)});
        CHECK(n_set(on_family(fam, ValueRule::harmonic(1.0)), 0.1).family() == IntervalSet::range(1, 11));

        Rng rng(8);
        for (int t = 0; t < 100; ++t) {
            const auto g = random_function(rng, MeasureSpace::create({{"a", 1.0}, {"b", 0.3}}, Segment{1.0, 3}, CountableAtomFamily{MassRule::geometric(0.5, 0.5)}));
            const double e1 = rng.uniform(0.01, 3.0);
            const double e2 = e1 + rng.uniform(0.0, 3.0);
            CHECK(n_set(g, e2).subset_of(n_set(g, e1)));
        }
    }

    TEST_CASE("compactness verdicts") {
        const auto phi = OrliczFunction::power(2.0);
        const auto seg = MeasureSpace::create({{"a", 1.0}}, Segment{1.0, 4});
        const auto zero = classify_compact(SimpleFunction::zero(seg), phi);
        CHECK(zero.verdict == Compactness::compact);
        CHECK(zero.reason == CompactReason::zero_operator);

        const auto one = classify_compact(indicator(PieceSet::all_cells(seg)), phi);
        CHECK(one.verdict == Compactness::not_compact);
        CHECK(one.reason == CompactReason::nonatomic_mass_in_n_set);
        CHECK(one.dims.front().dimension == kUnbounded);

        const auto fam = MeasureSpace::create({}, std::nullopt, CountableAtomFamily{MassRule::geometric(0.5, 0.5)});
        const auto h = classify_compact(on_family(fam, ValueRule::harmonic(1.0)), phi);
        CHECK(h.verdict == Compactness::compact);
        CHECK(h.reason == CompactReason::n_sets_finite_atoms);
        CHECK(h.completely_continuous == ContinuityVerdict::compact);
        for (const auto& d : h.dims) CHECK(d.dimension == static_cast<Index>(std::floor(1.0 / d.eps)));

        const auto c = classify_compact(on_family(fam, ValueRule::constant(0.5)), phi);
        CHECK(c.verdict == Compactness::not_compact);
        CHECK(c.reason == CompactReason::infinitely_many_family_atoms);

        const auto g = classify_compact(on_family(fam, ValueRule::geometric(3.0, 0.5)), OrliczFunction::exp_minus());
        CHECK(g.verdict == Compactness::compact);
        CHECK(g.completely_continuous == ContinuityVerdict::conditional);
        CHECK_FALSE(g.notes.empty());

        // omega = 0 on the segment hides it from the weighted space.
        PieceMap to_first;
        to_first.cells.kind = CellMap::Kind::constant;
        to_first.cells.target = 0;
        const auto w = derive_weight(seg, to_first);
        const auto masked = PieceSet(seg, {}, IntervalSet::range(1, 16));
        CHECK(classify_compact(indicator(masked), phi, &w).reason == CompactReason::zero_operator);
    }

    TEST_CASE("classifier agrees with brute-force dimension counting") {
        std::vector<Atom> atoms;
        for (int i = 0; i < 12; ++i) atoms.push_back({"a" + std::to_string(i), 0.1 + 0.05 * i});
        const auto sp = MeasureSpace::create(atoms);
        const auto phi = OrliczFunction::power(2.0);
        for (unsigned mask = 0; mask < (1u << 12); ++mask) {
            std::vector<double> u(12, 0.0);
            for (int i = 0; i < 12; ++i)
                if (mask & (1u << i)) u[i] = (i % 2 ? -1.0 : 1.0) * (0.25 + 0.5 * i);
            const auto report = classify_compact(SimpleFunction::on_atoms(sp, u), phi);
            bool finite = true;
            for (const auto& d : report.dims) {
                Index count = 0;
                for (double v : u)
                    if (std::abs(v) >= d.eps) ++count;
                CHECK(d.dimension == count);
                finite = finite && d.dimension != kUnbounded;
            }
            CHECK((report.verdict == Compactness::compact) == finite);
            CHECK((report.reason == CompactReason::zero_operator) == (mask == 0));
        }
    }

    TEST_CASE("invertibility") {
        const auto sp = two_atoms();
        const double u[] = {2.0, 5.0};
        const auto inv = check_invertible(SimpleFunction::on_atoms(sp, u));
        REQUIRE(inv.invertible);
        const double expected[] = {0.5, 0.2};
        CHECK(*inv.inverse == SimpleFunction::on_atoms(sp, expected));
        const double z[] = {2.0, 0.0};
        CHECK_FALSE(check_invertible(SimpleFunction::on_atoms(sp, z)).invertible);
        const auto fam = MeasureSpace::create({}, std::nullopt, CountableAtomFamily{MassRule::geometric(0.5, 0.5)});
        CHECK_FALSE(check_invertible(on_family(fam, ValueRule::harmonic(1.0))).invertible);

        Rng rng(2);
        const double f_vals[] = {3.5, -1.25};
        const auto f = SimpleFunction::on_atoms(sp, f_vals);
        CHECK(apply(*inv.inverse, apply(SimpleFunction::on_atoms(sp, u), f)) == f);
    }

    TEST_CASE("truncation") {
        const auto sp = two_atoms();
        const double u[] = {0.3, 2.0};
        const auto un = truncation(SimpleFunction::on_atoms(sp, u), 2);
        const double cut[] = {0.0, 2.0};
        CHECK(un == SimpleFunction::on_atoms(sp, cut));
        CHECK(truncation(SimpleFunction::on_atoms(sp, u), 4) == SimpleFunction::on_atoms(sp, u));

        Rng rng(12);
        const auto probes = make_probes(sp, rng);
        const auto phi = OrliczFunction::power(2.0);
        CHECK(truncation_gap(SimpleFunction::on_atoms(sp, u), 4, phi, nullptr, probes) == 0.0);
        CHECK(truncation_gap(SimpleFunction::on_atoms(sp, u), 2, phi, nullptr, probes) <= 0.5);

        const auto fam = MeasureSpace::create({{"a", 0.5}}, Segment{1.0, 3}, CountableAtomFamily{MassRule::geometric(0.5, 0.5)});
        const auto probes2 = make_probes(fam, rng);
        const auto h = on_family(fam, ValueRule::harmonic(1.0));
        double prev = std::numeric_limits<double>::infinity();
        for (Index n = 1; n <= 64; n *= 2) {
            const double g = truncation_gap(h, n, phi, nullptr, probes2);
            CHECK(g <= 1.0 / static_cast<double>(n) + 1e-9);
            CHECK(g <= prev);
            prev = g;
        }
    }

    TEST_CASE("commutation") {
        const auto sp = MeasureSpace::create({{"a", 0.5}, {"b", 1.5}}, Segment{1.0, 3}, CountableAtomFamily{MassRule::geometric(0.5, 0.5)});
        Rng rng(31);
        const auto probes = make_probes(sp, rng, 20);
        for (int t = 0; t < 20; ++t) {
            const auto u = random_function(rng, sp);
            const auto v = random_function(rng, sp);
            const auto r = commute_check(u, v, probes);
            CHECK(r.commute);
            CHECK(r.generator_pattern);
            CHECK(u.times(v) == v.times(u));
        }
    }
}

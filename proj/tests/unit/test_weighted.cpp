#include <doctest.h>

#include <random>

#include "orlicz/errors.hpp"
#include "orlicz/weighted.hpp"

using namespace orlicz;

TEST_SUITE("weighted") {
    TEST_CASE("weights from preimage masses") {
        const auto sp = MeasureSpace::create({{"a1", 0.5}, {"a2", 0.5}});
        PieceMap collapse;
        collapse.atoms = {1, 1};
        const auto w = derive_weight(sp, collapse);
        CHECK(w.atom_weight(0) == 0.0);
        CHECK(w.atom_weight(1) == 2.0);
        CHECK(preimage(w, PieceSet(sp, IntervalSet::single(1))) == PieceSet::whole(sp));
        CHECK(w.null_set() == PieceSet(sp, IntervalSet::single(0)));
        CHECK(w.nonsingular());

        const auto id = derive_weight(sp, PieceMap{});
        CHECK(id.atom_weight(0) == 1.0);
        CHECK(id.atom_weight(1) == 1.0);

        PieceMap swap;
        swap.atoms = {1, 0};
        const auto ws = derive_weight(sp, swap);
        CHECK(ws.atom_weight(0) == 1.0);
        CHECK(ws.atom_weight(1) == 1.0);
        CHECK_FALSE(ws.expansion_violation());
        CHECK(w.expansion_violation().has_value());
    }

    TEST_CASE("constant cell map") {
        const auto sp = MeasureSpace::create({}, Segment{1.0, 3});
        PieceMap m;
        m.cells.kind = CellMap::Kind::constant;
        m.cells.target = 5;
        const auto w = derive_weight(sp, m);
        CHECK(preimage(w, PieceSet(sp, {}, IntervalSet::single(5))) == PieceSet::all_cells(sp));
        CHECK(w.cell_weight(5) == 8.0);
        CHECK(w.cell_weight(0) == 0.0);
    }

    TEST_CASE("pushforward consistency on random maps") {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 1 + rng() % 6;
            std::vector<Atom> atoms;
            for (std::size_t i = 0; i < n; ++i)
                atoms.push_back({"a" + std::to_string(i), 0.1 + static_cast<double>(rng() % 100) / 50.0});
            const int depth = 1 + static_cast<int>(rng() % 4);
            const auto sp = MeasureSpace::create(atoms, Segment{1.5, depth},
                                                 CountableAtomFamily{MassRule::geometric(0.5, 0.5)});
            PieceMap m;
            for (std::size_t i = 0; i < n; ++i) m.atoms.push_back(rng() % n);
            m.cells.kind = CellMap::Kind::table;
            for (Index c = 0; c < (Index{1} << depth); ++c) m.cells.table.push_back(rng() % (Index{1} << depth));
            m.family_shift = rng() % 3;
            const auto w = derive_weight(sp, m);

            std::vector<Index> picked_atoms, picked_cells;
            for (Index i = 0; i < n; ++i)
                if (rng() % 2) picked_atoms.push_back(i);
            for (Index c = 0; c < (Index{1} << depth); ++c)
                if (rng() % 2) picked_cells.push_back(c);
            const Index k = 1 + rng() % 10;
            const PieceSet a(sp, IntervalSet::of(picked_atoms), IntervalSet::of(picked_cells), IntervalSet::range(1, k));
            CHECK(measure(preimage(w, a)) == doctest::Approx(weighted_mass(w, a)).epsilon(1e-12));
            CHECK(PieceMeasure(w).of(a) == doctest::Approx(weighted_mass(w, a)).epsilon(1e-12));
        }
    }

    TEST_CASE("invalid maps") {
        const auto sp = MeasureSpace::create({{"a", 1.0}}, Segment{1.0, 2});
        PieceMap bad;
        bad.atoms = {3};
        CHECK_THROWS_AS(derive_weight(sp, bad), DomainError);
        PieceMap short_table;
        short_table.cells.kind = CellMap::Kind::table;
        short_table.cells.table = {0, 1};
        CHECK_THROWS_AS(derive_weight(sp, short_table), DomainError);
    }
}

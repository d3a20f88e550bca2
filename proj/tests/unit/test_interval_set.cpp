#include <doctest.h>

#include "orlicz/interval_set.hpp"

using namespace orlicz;

TEST_SUITE("interval_set") {
    TEST_CASE("runs are normalized") {
        IntervalSet s({{5, 7}, {0, 2}, {2, 3}, {6, 9}, {4, 4}});
        REQUIRE(s.runs().size() == 2);
        CHECK(s.runs()[0] == Interval{0, 3});
        CHECK(s.runs()[1] == Interval{5, 9});
        CHECK(s.count() == 7);
        CHECK(s.contains(8));
        CHECK_FALSE(s.contains(4));
        CHECK(s.last() == 8);
    }

    TEST_CASE("set algebra against a brute-force bitset") {
        // Small universe so every operation can be checked index by index.
        std::uint64_t state = 12345;
        auto next = [&] {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            return state >> 33;
        };
        auto random_set = [&](std::vector<bool>& bits) {
            std::vector<Interval> runs;
            for (int k = 0; k < 4; ++k) {
                Index b = next() % 40;
                Index e = b + next() % 8;
                runs.push_back({b, e});
                for (Index i = b; i < e; ++i) bits[i] = true;
            }
            return IntervalSet(runs);
        };
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<bool> ba(64, false), bb(64, false);
            const auto a = random_set(ba);
            const auto b = random_set(bb);
            const auto u = a.unite(b), n = a.intersect(b), d = a.minus(b);
            for (Index i = 0; i < 64; ++i) {
                CHECK(u.contains(i) == (ba[i] || bb[i]));
                CHECK(n.contains(i) == (ba[i] && bb[i]));
                CHECK(d.contains(i) == (ba[i] && !bb[i]));
                CHECK(a.complement().contains(i) == !ba[i]);
            }
            CHECK(n.subset_of(a));
            CHECK(d.disjoint(b));
        }
    }

    TEST_CASE("unbounded tails") {
        const auto tail = IntervalSet::range(10, kUnbounded);
        CHECK_FALSE(tail.bounded());
        CHECK(tail.count() == kUnbounded);
        CHECK(tail.complement() == IntervalSet::range(0, 10));
        CHECK(tail.shifted_down(3) == IntervalSet::range(7, kUnbounded));
        CHECK(tail.shifted_up(2) == IntervalSet::range(12, kUnbounded));
        CHECK(IntervalSet::range(1, 4).shifted_down(2) == IntervalSet::range(0, 2));
    }

    TEST_CASE("dyadic scaling") {
        CHECK(IntervalSet::range(1, 3).scaled(4) == IntervalSet::range(4, 12));
    }
}

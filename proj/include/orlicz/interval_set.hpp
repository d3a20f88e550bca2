#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace orlicz {

using Index = std::uint64_t;

/// End marker of an infinite tail [begin, inf).
inline constexpr Index kUnbounded = std::numeric_limits<Index>::max();

/// Half-open index range [begin, end).
struct Interval {
    Index begin = 0;
    Index end = 0;

    bool unbounded() const noexcept { return end == kUnbounded; }
    bool empty() const noexcept { return end <= begin; }
    /// Number of indices, kUnbounded for an infinite tail.
    Index length() const noexcept { return unbounded() ? kUnbounded : end - begin; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint, non-adjacent, sorted intervals over the index line.
/// Used for explicit atoms, dyadic cells and the countable atom family alike.
class IntervalSet {
public:
    IntervalSet() = default;
    /// Normalizes: sorts, drops empty runs and merges overlapping or adjacent runs.
    explicit IntervalSet(std::vector<Interval> runs);

    static IntervalSet range(Index begin, Index end);
    static IntervalSet single(Index i) { return range(i, i + 1); }
    static IntervalSet of(std::span<const Index> indices);

    bool empty() const noexcept { return runs_.empty(); }
    bool bounded() const noexcept { return runs_.empty() || !runs_.back().unbounded(); }
    /// Cardinality, kUnbounded when the set has an infinite tail.
    Index count() const noexcept;
    bool contains(Index i) const noexcept;
    /// Largest member of a bounded nonempty set.
    std::optional<Index> last() const noexcept;

    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet minus(const IntervalSet& other) const;
    /// Complement within [0, inf).
    IntervalSet complement() const;
    bool subset_of(const IntervalSet& other) const;
    bool disjoint(const IntervalSet& other) const { return intersect(other).empty(); }

    /// {i - k : i in *this, i >= k}.
    IntervalSet shifted_down(Index k) const;
    /// {i + k : i in *this}.
    IntervalSet shifted_up(Index k) const;
    /// Dyadic refinement: [b, e) -> [b*factor, e*factor).
    IntervalSet scaled(Index factor) const;

    const std::vector<Interval>& runs() const noexcept { return runs_; }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> runs_;
};

}  // namespace orlicz

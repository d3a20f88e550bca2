#include "orlicz/interval_set.hpp"

#include <algorithm>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

Index saturating_mul(Index a, Index factor) {
    if (a == kUnbounded) return kUnbounded;
    if (factor != 0 && a > (kUnbounded - 1) / factor)
        throw DomainError("index overflow while refining an interval set");
    return a * factor;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> runs) {
    std::erase_if(runs, [](const Interval& r) { return r.empty(); });
    std::sort(runs.begin(), runs.end(),
              [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
    for (const auto& r : runs) {
        if (!runs_.empty() && r.begin <= runs_.back().end) {
            runs_.back().end = std::max(runs_.back().end, r.end);
        } else {
            runs_.push_back(r);
        }
    }
}

IntervalSet IntervalSet::range(Index begin, Index end) {
    return IntervalSet(std::vector<Interval>{{begin, end}});
}

IntervalSet IntervalSet::of(std::span<const Index> indices) {
    std::vector<Interval> runs;
    runs.reserve(indices.size());
    for (Index i : indices) runs.push_back({i, i + 1});
    return IntervalSet(std::move(runs));
}

Index IntervalSet::count() const noexcept {
    Index n = 0;
    for (const auto& r : runs_) {
        if (r.unbounded()) return kUnbounded;
        n += r.length();
    }
    return n;
}

bool IntervalSet::contains(Index i) const noexcept {
    auto it = std::upper_bound(runs_.begin(), runs_.end(), i,
                               [](Index v, const Interval& r) { return v < r.begin; });
    if (it == runs_.begin()) return false;
    --it;
    return i < it->end;
}

std::optional<Index> IntervalSet::last() const noexcept {
    if (runs_.empty() || runs_.back().unbounded()) return std::nullopt;
    return runs_.back().end - 1;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> all = runs_;
    all.insert(all.end(), other.runs_.begin(), other.runs_.end());
    return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < runs_.size() && j < other.runs_.size()) {
        const auto& a = runs_[i];
        const auto& b = other.runs_[j];
        const Index lo = std::max(a.begin, b.begin);
        const Index hi = std::min(a.end, b.end);
        if (lo < hi) out.push_back({lo, hi});
        if (a.end < b.end) {
            ++i;
        } else {
            ++j;
        }
    }
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement() const {
    std::vector<Interval> out;
    Index cursor = 0;
    for (const auto& r : runs_) {
        if (r.begin > cursor) out.push_back({cursor, r.begin});
        cursor = r.end;
    }
    if (cursor != kUnbounded) out.push_back({cursor, kUnbounded});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::minus(const IntervalSet& other) const {
    return intersect(other.complement());
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
    return minus(other).empty();
}

IntervalSet IntervalSet::shifted_down(Index k) const {
    std::vector<Interval> out;
    for (const auto& r : runs_) {
        if (r.end <= k) continue;
        const Index b = r.begin > k ? r.begin - k : 0;
        const Index e = r.unbounded() ? kUnbounded : r.end - k;
        out.push_back({b, e});
    }
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::shifted_up(Index k) const {
    std::vector<Interval> out;
    for (const auto& r : runs_) {
        if (r.begin > kUnbounded - 1 - k) continue;
        const Index e = (r.unbounded() || r.end > kUnbounded - 1 - k) ? kUnbounded : r.end + k;
        out.push_back({r.begin + k, e});
    }
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::scaled(Index factor) const {
    std::vector<Interval> out;
    out.reserve(runs_.size());
    for (const auto& r : runs_) out.push_back({saturating_mul(r.begin, factor), saturating_mul(r.end, factor)});
    return IntervalSet(std::move(out));
}

}  // namespace orlicz

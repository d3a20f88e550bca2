#include "orlicz/line_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Threshold sets are cut off here; nothing in the toolkit needs indices beyond 2^62.
constexpr Index kSaturation = Index{1} << 62;

// |v| along a stretch of consecutive indices.
enum class Trend { constant, nonincreasing, nondecreasing };

struct MonotonePiece {
    Interval span;
    Trend trend;
};

std::vector<MonotonePiece> monotone_pieces(const ValueRule& r, Interval s) {
    if (s.empty()) return {};
    if (r.is_constant()) return {{s, Trend::constant}};
    if (r.ratio == 0.0) return {{s, Trend::nonincreasing}};

    // log|v(x)| = log|c| - d log x + (x - 1) L, derivative L (1 - x*/x) with x* = d / L.
    const double L = std::log(std::abs(r.ratio));
    const double d = r.decay;
    if (L == 0.0) return {{s, d > 0.0 ? Trend::nonincreasing : Trend::nondecreasing}};

    const Trend late = L > 0.0 ? Trend::nondecreasing : Trend::nonincreasing;
    const Trend early = L > 0.0 ? Trend::nonincreasing : Trend::nondecreasing;
    const double turn = d / L;
    if (!(turn > static_cast<double>(s.begin))) return {{s, late}};

    const double split_f = std::floor(turn) + 1.0;
    const Index split = split_f >= 1.8e19 ? kUnbounded : static_cast<Index>(split_f);
    if (split >= s.end) return {{s, early}};
    return {{{s.begin, split}, early}, {{split, s.end}, late}};
}

// Smallest i in [lo, hi) with pred(i), pred monotone false -> true. Returns hi when none.
template <typename Pred>
Index first_true(Index lo, Index hi, Pred pred) {
    if (hi == kUnbounded) {
        Index step = 1;
        Index probe = lo;
        Index known_false_end = lo;
        while (!pred(probe)) {
            known_false_end = probe + 1;
            if (probe >= kSaturation) return kSaturation;
            probe = lo + step;
            step *= 2;
        }
        hi = probe + 1;
        lo = known_false_end;
        if (lo > probe) return probe;
    }
    while (lo < hi) {
        const Index mid = lo + (hi - lo) / 2;
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

double piece_sup(const ValueRule& r, const MonotonePiece& p) {
    switch (p.trend) {
        case Trend::constant:
        case Trend::nonincreasing:
            return std::abs(r.at(p.span.begin));
        case Trend::nondecreasing:
            return p.span.unbounded() ? r.limit_abs() : std::abs(r.at(p.span.end - 1));
    }
    return 0.0;
}

double piece_inf(const ValueRule& r, const MonotonePiece& p) {
    switch (p.trend) {
        case Trend::constant:
        case Trend::nondecreasing:
            return std::abs(r.at(p.span.begin));
        case Trend::nonincreasing:
            return p.span.unbounded() ? r.limit_abs() : std::abs(r.at(p.span.end - 1));
    }
    return 0.0;
}

Interval clip(Interval a, Interval b) {
    return {std::max(a.begin, b.begin), std::min(a.end, b.end)};
}

}  // namespace

double ValueRule::at(Index i) const {
    if (is_constant()) return coeff;
    if (ratio == 0.0) return i == 1 ? coeff : 0.0;
    const double x = static_cast<double>(i);
    const double geo = std::pow(ratio, x - 1.0);
    const double poly = std::pow(x, decay);
    const double v = coeff * geo / poly;
    if (std::isfinite(v) && (v != 0.0 || (std::isfinite(geo) && geo != 0.0 && std::isfinite(poly)))) return v;
    // Intermediate over/underflow: redo the magnitude in the log domain.
    const double log_mag = std::log(std::abs(coeff)) - decay * std::log(x) + (x - 1.0) * std::log(std::abs(ratio));
    const bool negative = (coeff < 0.0) != (ratio < 0.0 && std::fmod(x - 1.0, 2.0) == 1.0);
    const double mag = std::exp(log_mag);
    return negative ? -mag : mag;
}

ValueRule ValueRule::abs() const {
    return ValueRule{std::abs(coeff), decay, std::abs(ratio)}.normalized();
}

ValueRule ValueRule::times(const ValueRule& o) const {
    if (is_zero() || o.is_zero()) return {};
    return ValueRule{coeff * o.coeff, decay + o.decay, ratio * o.ratio}.normalized();
}

ValueRule ValueRule::reciprocal() const {
    if (is_zero() || ratio == 0.0) throw DomainError("value rule vanishes; no reciprocal");
    return ValueRule{1.0 / coeff, -decay, 1.0 / ratio};
}

double ValueRule::limit_abs() const {
    if (is_zero()) return 0.0;
    if (is_constant()) return std::abs(coeff);
    if (ratio == 0.0) return 0.0;
    const double L = std::log(std::abs(ratio));
    if (L < 0.0) return 0.0;
    if (L > 0.0) return kInf;
    return decay > 0.0 ? 0.0 : kInf;
}

double sup_abs(const ValueRule& rule, Interval span) {
    double best = 0.0;
    for (const auto& p : monotone_pieces(rule, span)) best = std::max(best, piece_sup(rule, p));
    return best;
}

double inf_abs(const ValueRule& rule, Interval span) {
    double best = kInf;
    for (const auto& p : monotone_pieces(rule, span)) best = std::min(best, piece_inf(rule, p));
    return best;
}

IntervalSet where_abs(const ValueRule& rule, Interval span, double eps, bool strict) {
    const auto holds = [&](double a) { return strict ? a > eps : a >= eps; };
    std::vector<Interval> out;
    for (const auto& p : monotone_pieces(rule, span)) {
        const Interval s = p.span;
        switch (p.trend) {
            case Trend::constant:
                if (holds(std::abs(rule.at(s.begin)))) out.push_back(s);
                break;
            case Trend::nonincreasing: {
                if (s.unbounded() && holds(rule.limit_abs())) {
                    out.push_back(s);
                    break;
                }
                const Index k = first_true(s.begin, s.end, [&](Index i) { return !holds(std::abs(rule.at(i))); });
                out.push_back({s.begin, k});
                break;
            }
            case Trend::nondecreasing: {
                if (s.unbounded() && !holds(rule.limit_abs())) break;
                const Index k = first_true(s.begin, s.end, [&](Index i) { return holds(std::abs(rule.at(i))); });
                if (k < s.end) out.push_back({k, s.end});
                break;
            }
        }
    }
    return IntervalSet(std::move(out));
}

LineFunction::LineFunction(Interval universe, ValueRule rule) : universe_(universe) {
    if (!universe.empty()) runs_.push_back({universe, rule.normalized()});
}

LineFunction LineFunction::from_runs(Interval universe, std::vector<RuleRun> runs) {
    std::sort(runs.begin(), runs.end(), [](const RuleRun& a, const RuleRun& b) { return a.span.begin < b.span.begin; });
    LineFunction f;
    f.universe_ = universe;
    Index cursor = universe.begin;
    for (auto& r : runs) {
        if (r.span.empty()) continue;
        if (r.span.begin < cursor || r.span.end > universe.end)
            throw DomainError("rule runs overlap or leave the universe");
        if (r.span.begin > cursor) f.runs_.push_back({{cursor, r.span.begin}, {}});
        f.runs_.push_back({r.span, r.rule.normalized()});
        cursor = r.span.end;
    }
    if (cursor < universe.end) f.runs_.push_back({{cursor, universe.end}, {}});
    f.coalesce();
    return f;
}

LineFunction LineFunction::from_values(Interval universe, std::span<const double> values) {
    if (universe.unbounded() || universe.length() != values.size())
        throw DomainError("value count does not match the universe");
    std::vector<RuleRun> runs;
    runs.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        const Index i = universe.begin + k;
        runs.push_back({{i, i + 1}, ValueRule::constant(values[k])});
    }
    return from_runs(universe, std::move(runs));
}

LineFunction LineFunction::indicator(Interval universe, const IntervalSet& set) {
    std::vector<RuleRun> runs;
    const auto inside = set.intersect(IntervalSet::range(universe.begin, universe.end));
    for (const auto& r : inside.runs())
        runs.push_back({r, ValueRule::constant(1.0)});
    return from_runs(universe, std::move(runs));
}

void LineFunction::coalesce() {
    std::vector<RuleRun> merged;
    merged.reserve(runs_.size());
    for (auto& r : runs_) {
        r.rule = r.rule.normalized();
        if (!merged.empty() && merged.back().rule == r.rule && merged.back().span.end == r.span.begin) {
            merged.back().span.end = r.span.end;
        } else {
            merged.push_back(r);
        }
    }
    runs_ = std::move(merged);
}

double LineFunction::at(Index i) const {
    if (i < universe_.begin || i >= universe_.end) throw DomainError("index outside the line");
    auto it = std::upper_bound(runs_.begin(), runs_.end(), i,
                               [](Index v, const RuleRun& r) { return v < r.span.begin; });
    return std::prev(it)->rule.at(i);
}

bool LineFunction::is_zero() const noexcept {
    return std::all_of(runs_.begin(), runs_.end(), [](const RuleRun& r) { return r.rule.is_zero(); });
}

LineFunction LineFunction::scaled(double c) const {
    LineFunction f = *this;
    for (auto& r : f.runs_) r.rule = r.rule.scaled(c);
    f.coalesce();
    return f;
}

LineFunction LineFunction::abs() const {
    LineFunction f = *this;
    for (auto& r : f.runs_) r.rule = r.rule.abs();
    f.coalesce();
    return f;
}

namespace {

template <typename Op>
LineFunction zip(const LineFunction& a, const LineFunction& b, Op op) {
    if (!(a.universe() == b.universe())) throw DomainError("line functions live on different universes");
    std::vector<RuleRun> out;
    const auto& ra = a.runs();
    const auto& rb = b.runs();
    std::size_t i = 0, j = 0;
    Index cursor = a.universe().begin;
    while (i < ra.size() && j < rb.size()) {
        const Index end = std::min(ra[i].span.end, rb[j].span.end);
        out.push_back({{cursor, end}, op(ra[i].rule, rb[j].rule)});
        cursor = end;
        if (ra[i].span.end == end) ++i;
        if (rb[j].span.end == end) ++j;
    }
    return LineFunction::from_runs(a.universe(), std::move(out));
}

}  // namespace

LineFunction LineFunction::times(const LineFunction& other) const {
    return zip(*this, other, [](const ValueRule& x, const ValueRule& y) { return x.times(y); });
}

LineFunction LineFunction::plus(const LineFunction& other) const {
    return zip(*this, other, [](const ValueRule& x, const ValueRule& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        if (x.is_constant() && y.is_constant()) return ValueRule::constant(x.coeff + y.coeff);
        if (!x.same_shape(y))
            throw UnsupportedRuleError("sum of family value rules with different decay/ratio is not representable");
        return ValueRule{x.coeff + y.coeff, x.decay, x.ratio}.normalized();
    });
}

LineFunction LineFunction::restricted(const IntervalSet& set) const {
    return times(indicator(universe_, set));
}

LineFunction LineFunction::reciprocal() const {
    LineFunction f = *this;
    for (auto& r : f.runs_) r.rule = r.rule.reciprocal();
    return f;
}

LineFunction LineFunction::refined(Index factor) const {
    LineFunction f;
    const auto scale = [factor](Interval s) {
        const auto set = IntervalSet::range(s.begin, s.end).scaled(factor);
        return set.empty() ? Interval{} : set.runs().front();
    };
    f.universe_ = scale(universe_);
    for (const auto& r : runs_) {
        if (!r.rule.is_constant()) throw DomainError("only constant-valued lines can be refined");
        f.runs_.push_back({scale(r.span), r.rule});
    }
    return f;
}

IntervalSet LineFunction::where_abs(double eps, bool strict) const {
    IntervalSet out;
    for (const auto& r : runs_) out = out.unite(orlicz::where_abs(r.rule, r.span, eps, strict));
    return out;
}

double LineFunction::sup_abs(const IntervalSet& within) const {
    double best = 0.0;
    for (const auto& r : runs_)
        for (const auto& w : within.runs()) {
            const Interval s = clip(r.span, w);
            if (!s.empty()) best = std::max(best, orlicz::sup_abs(r.rule, s));
        }
    return best;
}

double LineFunction::inf_abs(const IntervalSet& within) const {
    double best = kInf;
    for (const auto& r : runs_)
        for (const auto& w : within.runs()) {
            const Interval s = clip(r.span, w);
            if (!s.empty()) best = std::min(best, orlicz::inf_abs(r.rule, s));
        }
    return best;
}

double LineFunction::sup_abs() const {
    return sup_abs(IntervalSet::range(universe_.begin, universe_.end));
}

double LineFunction::inf_abs() const {
    return inf_abs(IntervalSet::range(universe_.begin, universe_.end));
}

}  // namespace orlicz

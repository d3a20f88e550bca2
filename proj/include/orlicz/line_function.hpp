#pragma once

#include <span>
#include <vector>

#include "orlicz/interval_set.hpp"

namespace orlicz {

/// Closed-form value rule v(i) = coeff * i^(-decay) * ratio^(i-1).
///
/// Constants (decay 0, ratio 1), harmonic decay c/i and geometric c*rho^(i-1) are special cases.
/// The family is closed under products, absolute values, scaling and reciprocals, which is what
/// multiplication operators need. On explicit atoms and cells only constant rules appear.
struct ValueRule {
    double coeff = 0.0;
    double decay = 0.0;
    double ratio = 1.0;

    static ValueRule constant(double c) { return ValueRule{c, 0.0, 1.0}.normalized(); }
    static ValueRule harmonic(double c) { return ValueRule{c, 1.0, 1.0}.normalized(); }
    static ValueRule geometric(double c, double rho) { return ValueRule{c, 0.0, rho}.normalized(); }

    double at(Index i) const;

    bool is_zero() const noexcept { return coeff == 0.0; }
    bool is_constant() const noexcept { return is_zero() || (decay == 0.0 && ratio == 1.0); }
    bool same_shape(const ValueRule& o) const noexcept { return decay == o.decay && ratio == o.ratio; }

    ValueRule normalized() const noexcept { return is_zero() ? ValueRule{} : *this; }
    ValueRule abs() const;
    ValueRule times(const ValueRule& o) const;
    ValueRule scaled(double c) const { return ValueRule{coeff * c, decay, ratio}.normalized(); }
    /// Pointwise 1/v. Throws DomainError for the zero rule or a vanishing ratio.
    ValueRule reciprocal() const;
    /// Limit of |v(i)| as i grows: 0, |coeff| or +inf.
    double limit_abs() const;

    friend bool operator==(const ValueRule&, const ValueRule&) = default;
};

/// sup / inf of |rule| over the indices of `span` (span may be unbounded).
double sup_abs(const ValueRule& rule, Interval span);
double inf_abs(const ValueRule& rule, Interval span);
/// {i in span : |rule(i)| >= eps} (or > eps when strict). Sets larger than 2^62 saturate there.
IntervalSet where_abs(const ValueRule& rule, Interval span, double eps, bool strict);

struct RuleRun {
    Interval span;
    ValueRule rule;

    friend bool operator==(const RuleRun&, const RuleRun&) = default;
};

/// Piecewise value-rule function on one index line (atoms, cells or the atom family).
/// The runs partition the universe; adjacent runs with equal rules are merged.
class LineFunction {
public:
    LineFunction() = default;
    explicit LineFunction(Interval universe, ValueRule rule = {});
    /// Runs need not cover the universe; gaps are zero.
    static LineFunction from_runs(Interval universe, std::vector<RuleRun> runs);
    /// One constant value per index, starting at universe.begin.
    static LineFunction from_values(Interval universe, std::span<const double> values);
    /// 1 on `set`, 0 elsewhere in the universe.
    static LineFunction indicator(Interval universe, const IntervalSet& set);

    Interval universe() const noexcept { return universe_; }
    const std::vector<RuleRun>& runs() const noexcept { return runs_; }
    double at(Index i) const;
    bool is_zero() const noexcept;

    LineFunction scaled(double c) const;
    LineFunction abs() const;
    LineFunction times(const LineFunction& other) const;
    /// Throws UnsupportedRuleError when two overlapping non-constant rules differ in shape.
    LineFunction plus(const LineFunction& other) const;
    LineFunction restricted(const IntervalSet& set) const;
    /// Pointwise reciprocal; throws DomainError if the function vanishes somewhere.
    LineFunction reciprocal() const;
    /// Dyadic refinement of a constant-valued line.
    LineFunction refined(Index factor) const;

    IntervalSet where_abs(double eps, bool strict) const;
    IntervalSet support() const { return where_abs(0.0, true); }
    /// Suprema/infima of |f| over `within` (whole universe by default). Empty set: sup 0, inf +inf.
    double sup_abs(const IntervalSet& within) const;
    double inf_abs(const IntervalSet& within) const;
    double sup_abs() const;
    double inf_abs() const;

    friend bool operator==(const LineFunction&, const LineFunction&) = default;

private:
    void coalesce();

    Interval universe_{};
    std::vector<RuleRun> runs_;
};

}  // namespace orlicz

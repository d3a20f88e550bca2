#include "orlicz/mult_operator.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PieceSet positive_part(const SpacePtr& space, const WeightedStructure* w) {
    return w != nullptr ? w->null_set().complement() : PieceSet::whole(space);
}

IntervalSet first_indices(const IntervalSet& set, Index count) {
    std::vector<Interval> out;
    for (const auto& r : set.runs()) {
        if (count == 0) break;
        const Index take = std::min(count, r.length());
        out.push_back({r.begin, r.begin + take});
        count -= take;
    }
    return IntervalSet(std::move(out));
}

/// chi_E must have a finite norm; cut an infinite family part down to its first N atoms.
PieceSet finite_witness(const PieceSet& e, const WeightedStructure* w) {
    const auto& space = e.space();
    if (std::isfinite(PieceMeasure::of(*space, w).of(e))) return e;
    const Index n = space->family() ? space->family()->truncation : 0;
    return PieceSet(space, e.atoms(), e.cells(), first_indices(e.family(), n));
}

double weighted_norm(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w) {
    return luxemburg_norm(f, phi, w).value;
}

double relative_gap(double a, double b) {
    if (a == b) return 0.0;
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) / scale;
}

/// Largest relative difference between the rules of two lines over their common refinement.
double line_deviation(const LineFunction& a, const LineFunction& b) {
    if (!(a.universe() == b.universe())) return kInf;
    double worst = 0.0;
    std::size_t i = 0, j = 0;
    const auto& ra = a.runs();
    const auto& rb = b.runs();
    while (i < ra.size() && j < rb.size()) {
        const auto& x = ra[i].rule;
        const auto& y = rb[j].rule;
        worst = std::max({worst, relative_gap(x.coeff, y.coeff), relative_gap(x.ratio, y.ratio),
                          relative_gap(x.decay, y.decay)});
        const Index end = std::min(ra[i].span.end, rb[j].span.end);
        if (ra[i].span.end == end) ++i;
        if (rb[j].span.end == end) ++j;
    }
    return worst;
}

double deviation(const SimpleFunction& a, const SimpleFunction& b) {
    return std::max({line_deviation(a.atoms(), b.atoms()), line_deviation(a.cells(), b.cells()),
                     line_deviation(a.family(), b.family())});
}

}  // namespace

SimpleFunction apply(const SimpleFunction& u, const SimpleFunction& f) {
    return u.times(f);
}

OperatorNorm operator_norm(const SimpleFunction& u, const OrliczFunction& phi, const WeightedStructure* w) {
    const auto& space = u.space();
    OperatorNorm out{.witness = PieceSet::none(space)};
    out.value = ess_sup(u);
    out.weighted_value = w != nullptr ? ess_sup(u, positive_part(space, w)) : out.value;
    if (out.value == 0.0 || !std::isfinite(out.value)) return out;

    const PieceMeasure nu = PieceMeasure::of(*space, w);
    out.delta = 1e-6 * out.value;
    PieceSet e = u.where_abs(out.value - out.delta);
    if (nu.of(e) == 0.0) {
        // Shrinking delta only shrinks E, so look at the largest values omega can see instead.
        out.seminorm_only = true;
        if (out.weighted_value == 0.0) return out;
        out.delta = 1e-6 * out.weighted_value;
        e = u.where_abs(out.weighted_value - out.delta).intersect(positive_part(space, w));
    }
    out.witness = finite_witness(e, w);
    const SimpleFunction chi = indicator(out.witness);
    const double denom = weighted_norm(chi, phi, w);
    if (denom > 0.0) out.witness_ratio = weighted_norm(apply(u, chi), phi, w) / denom;
    return out;
}

PieceSet n_set(const SimpleFunction& u, double eps) {
    if (!(eps > 0.0)) throw DomainError("N(u, eps) needs eps > 0");
    return u.where_abs(eps);
}

std::string to_string(Compactness c) {
    return c == Compactness::compact ? "compact" : "not_compact";
}

std::string to_string(CompactReason r) {
    switch (r) {
        case CompactReason::zero_operator:
            return "zero_operator";
        case CompactReason::n_sets_finite_atoms:
            return "n_sets_finite_atoms";
        case CompactReason::nonatomic_mass_in_n_set:
            return "nonatomic_mass_in_n_set";
        case CompactReason::infinitely_many_family_atoms:
            return "infinitely_many_family_atoms";
    }
    return "unknown";
}

std::string to_string(ContinuityVerdict v) {
    switch (v) {
        case ContinuityVerdict::compact:
            return "compact";
        case ContinuityVerdict::not_compact:
            return "not_compact";
        case ContinuityVerdict::conditional:
            return "conditional";
    }
    return "unknown";
}

Index n_set_dimension(const SimpleFunction& u, double eps, const WeightedStructure* w) {
    const PieceSet n = n_set(u, eps).intersect(positive_part(u.space(), w));
    if (!n.cells().empty()) return kUnbounded;
    return n.piece_count();
}

CompactReport classify_compact(const SimpleFunction& u, const OrliczFunction& phi, const WeightedStructure* w) {
    const auto& space = u.space();
    const PieceSet seen = positive_part(space, w);
    const SimpleFunction v = u.restricted(seen);
    CompactReport report;

    if (v.is_zero()) {
        report.verdict = Compactness::compact;
        report.reason = CompactReason::zero_operator;
    } else if (!v.cells().is_zero()) {
        report.verdict = Compactness::not_compact;
        report.reason = CompactReason::nonatomic_mass_in_n_set;
    } else {
        bool infinite = false;
        for (const auto& r : v.family().runs())
            if (r.span.unbounded() && !r.rule.is_zero() && r.rule.limit_abs() > 0.0) infinite = true;
        report.verdict = infinite ? Compactness::not_compact : Compactness::compact;
        report.reason = infinite ? CompactReason::infinitely_many_family_atoms : CompactReason::n_sets_finite_atoms;
    }

    for (int k = 0; k <= 20; ++k) {
        const double eps = std::ldexp(1.0, -k);
        report.dims.push_back({eps, n_set_dimension(u, eps, w)});
    }

    const bool d2 = satisfies_delta2(phi);
    const bool sl = phi.superlinear();
    if (d2 && sl) {
        report.completely_continuous =
            report.verdict == Compactness::compact ? ContinuityVerdict::compact : ContinuityVerdict::not_compact;
    } else {
        report.completely_continuous = ContinuityVerdict::conditional;
        if (!d2) report.notes.push_back("phi fails Delta2; complete continuity is not tied to compactness");
        if (!sl) report.notes.push_back("phi is not superlinear; complete continuity is not tied to compactness");
    }
    if (!space->finite_measure())
        report.notes.push_back("mu(Omega) is infinite; the finite-measure characterization is applied at model scale");
    return report;
}

Invertibility check_invertible(const SimpleFunction& u, double tol) {
    Invertibility out;
    out.ess_inf = ess_inf_abs(u);
    out.invertible = out.ess_inf > tol;
    if (out.invertible) out.inverse = u.reciprocal();
    return out;
}

SimpleFunction truncation(const SimpleFunction& u, Index n) {
    if (n == 0) throw DomainError("truncation index must be at least 1");
    return u.restricted(u.where_abs(1.0 / static_cast<double>(n), true));
}

double truncation_gap(const SimpleFunction& u, Index n, const OrliczFunction& phi, const WeightedStructure* w,
                      const std::vector<SimpleFunction>& probes) {
    if (n == 0) throw DomainError("truncation index must be at least 1");
    // u_n - u = -u on {|u| <= 1/n}; the sign does not affect norms.
    const SimpleFunction rest = u.restricted(u.where_abs(1.0 / static_cast<double>(n), true).complement());
    double gap = 0.0;
    for (const auto& f : probes) {
        const double nf = weighted_norm(f, phi, w);
        if (nf == 0.0) continue;
        gap = std::max(gap, weighted_norm(apply(rest, f), phi, w) / nf);
    }
    return gap;
}

CommuteReport commute_check(const SimpleFunction& u, const SimpleFunction& v, const std::vector<SimpleFunction>& probes) {
    CommuteReport out;
    const double tol = 4.0 * DBL_EPSILON;
    const SimpleFunction uv = u.times(v);
    out.max_deviation = deviation(uv, v.times(u));
    const SimpleFunction e = SimpleFunction::constant(u.space(), 1.0);
    const SimpleFunction v_of_e = apply(v, e);
    for (const auto& f : probes) {
        const SimpleFunction a = apply(u, apply(v, f));
        const SimpleFunction b = apply(v, apply(u, f));
        const SimpleFunction c = apply(uv, f);
        out.max_deviation = std::max({out.max_deviation, deviation(a, b), deviation(a, c), deviation(b, c)});

        const SimpleFunction chi = indicator(f.support());
        if (!(apply(v, chi) == apply(v_of_e, chi))) out.generator_pattern = false;
    }
    out.commute = out.max_deviation <= tol;
    return out;
}

std::vector<SimpleFunction> make_probes(const SpacePtr& space, Rng& rng, std::size_t random_count, std::size_t max_single) {
    std::vector<SimpleFunction> probes;
    for (Index i = 0; i < space->atoms().size(); ++i) probes.push_back(indicator(PieceSet(space, IntervalSet::single(i))));
    const Index cells = std::min<Index>(space->cell_universe().end, max_single);
    for (Index c = 0; c < cells; ++c) probes.push_back(indicator(PieceSet(space, {}, IntervalSet::single(c))));
    if (space->family()) {
        const Index n = std::min<Index>(space->family()->truncation, max_single);
        for (Index i = 1; i <= n; ++i) probes.push_back(indicator(PieceSet(space, {}, {}, IntervalSet::single(i))));
    }
    for (std::size_t k = 0; k < random_count; ++k) probes.push_back(random_function(rng, space));
    return probes;
}

OperatorReport analyze(const SimpleFunction& u, const OrliczFunction& phi, const WeightedStructure* w,
                       const std::vector<SimpleFunction>& probes) {
    OperatorReport report{.bounded = false, .norm = operator_norm(u, phi, w), .compact = {}, .invertible = {}};
    report.bounded = std::isfinite(report.norm.value);
    report.delta2 = satisfies_delta2(phi);
    report.superlinear = phi.superlinear();
    report.finite_measure = u.space()->finite_measure();
    if (report.bounded) {
        for (const auto& f : probes) {
            const double nf = weighted_norm(f, phi, w);
            if (nf == 0.0) continue;
            report.probe_max_ratio = std::max(report.probe_max_ratio, weighted_norm(apply(u, f), phi, w) / nf);
        }
    }
    report.compact = classify_compact(u, phi, w);
    report.invertible = check_invertible(u);
    return report;
}

}  // namespace orlicz

#include "orlicz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// The modular as a finite list of (|value|, mass) terms, so I(f/k) is cheap to re-evaluate.
struct ModularTerms {
    std::vector<std::pair<double, double>> exact;
    /// (sup |value| over the tail, mass of the tail) for truncated non-constant family runs.
    std::vector<std::pair<double, double>> tail;
    bool divergent = false;

    bool zero() const {
        const auto vanishes = [](const auto& t) { return t.first == 0.0 || t.second == 0.0; };
        return !divergent && std::all_of(exact.begin(), exact.end(), vanishes) &&
               std::all_of(tail.begin(), tail.end(), vanishes);
    }

    double scale() const {
        double s = 0.0;
        for (const auto& [a, m] : exact)
            if (m > 0.0) s = std::max(s, a);
        for (const auto& [a, m] : tail)
            if (m > 0.0) s = std::max(s, a);
        return s;
    }
};

void add_term(std::vector<std::pair<double, double>>& out, bool& divergent, double a, double m) {
    if (a == 0.0 || m == 0.0) return;
    if (std::isinf(m)) divergent = true;
    out.emplace_back(a, m);
}

ModularTerms collect(const SimpleFunction& f, const WeightedStructure* w) {
    const auto& space = *f.space();
    if (w != nullptr) require_same_space(space, *w->space());
    const PieceMeasure nu = PieceMeasure::of(space, w);
    ModularTerms t;

    for (const auto& r : f.atoms().runs()) {
        if (r.rule.is_zero()) continue;
        // Atom masses differ piece by piece, but one term per run keeps the sum exact.
        add_term(t.exact, t.divergent, std::abs(r.rule.coeff), nu.atoms(r.span));
    }
    for (const auto& r : f.cells().runs()) {
        if (r.rule.is_zero()) continue;
        add_term(t.exact, t.divergent, std::abs(r.rule.coeff), nu.cells(r.span));
    }

    const Index n = space.family() ? space.family()->truncation : 0;
    for (const auto& r : f.family().runs()) {
        if (r.rule.is_zero()) continue;
        if (r.rule.is_constant()) {
            add_term(t.exact, t.divergent, std::abs(r.rule.coeff), nu.family(r.span));
            continue;
        }
        const Index cut = r.span.length() <= n ? r.span.end : r.span.begin + n;
        for (Index i = r.span.begin; i < cut; ++i)
            add_term(t.exact, t.divergent, std::abs(r.rule.at(i)), nu.family({i, i + 1}));
        if (cut < r.span.end) {
            const Interval rest{cut, r.span.end};
            const double mass = nu.family(rest);
            if (mass == 0.0) continue;
            if (std::isinf(mass) && inf_abs(r.rule, rest) > 0.0) t.divergent = true;
            const double sup = sup_abs(r.rule, rest);
            if (sup > 0.0) t.tail.emplace_back(sup, mass);
        }
    }
    return t;
}

double sum_terms(const std::vector<std::pair<double, double>>& terms, const OrliczFunction& phi, double k) {
    double s = 0.0;
    for (const auto& [a, m] : terms) {
        const double v = phi(a / k);
        if (v == 0.0) continue;
        s += v * m;
    }
    return s;
}

double modular_at(const ModularTerms& t, const OrliczFunction& phi, double k, bool with_tail) {
    if (t.divergent) return kInf;
    double s = sum_terms(t.exact, phi, k);
    if (with_tail) s += sum_terms(t.tail, phi, k);
    return s;
}

struct Root {
    double k = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool found = false;
};

template <class Modular>
Root luxemburg_root(Modular&& mod, double start, const NormOptions& options) {
    Root root;
    double hi = start;
    while (!(mod(hi) <= 1.0)) {
        hi *= 2.0;
        if (!std::isfinite(hi)) return root;
    }
    double lo = hi * 0.5;
    while (mod(lo) <= 1.0) {
        hi = lo;
        lo *= 0.5;
        if (lo == 0.0) return root;
    }
    int it = 0;
    while (it < options.max_iterations && hi / lo - 1.0 > options.tol) {
        const double mid = std::sqrt(lo) * std::sqrt(hi);
        if (mid <= lo || mid >= hi) break;
        if (mod(mid) <= 1.0) {
            hi = mid;
        } else {
            lo = mid;
        }
        ++it;
    }
    root.k = hi;
    root.residual = mod(hi) - 1.0;
    root.iterations = it;
    root.found = true;
    return root;
}

}  // namespace

std::string to_string(NormMethod m) {
    switch (m) {
        case NormMethod::closed_form:
            return "closed_form";
        case NormMethod::bisection:
            return "bisection";
        case NormMethod::minimization:
            return "minimization";
    }
    return "unknown";
}

ModularValue modular(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w) {
    const ModularTerms t = collect(f, w);
    ModularValue out;
    if (t.divergent) {
        out.value = kInf;
        out.divergent = true;
        return out;
    }
    out.value = sum_terms(t.exact, phi, 1.0);
    out.tail_bound = sum_terms(t.tail, phi, 1.0);
    return out;
}

NormResult luxemburg_norm(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w,
                          const NormOptions& options) {
    const ModularTerms t = collect(f, w);
    NormResult result;
    result.method = NormMethod::bisection;
    if (t.divergent) throw NotInSpaceError("the modular of f is infinite at every scale");
    if (t.zero()) return result;

    const double start = t.scale();
    const Root exact = luxemburg_root([&](double k) { return modular_at(t, phi, k, false); }, start, options);
    if (!exact.found) throw NotInSpaceError("no k > 0 brings the modular of f/k below 1");
    result.value = exact.k;
    result.residual = exact.residual;
    result.iterations = exact.iterations;
    if (t.tail.empty()) {
        result.upper = exact.k;
    } else {
        const Root up = luxemburg_root([&](double k) { return modular_at(t, phi, k, true); }, start, options);
        result.upper = up.found ? up.k : kInf;
    }
    return result;
}

NormResult amemiya_norm(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w,
                        const AmemiyaOptions& options) {
    const ModularTerms t = collect(f, w);
    NormResult result;
    result.method = NormMethod::minimization;
    if (t.divergent) throw NotInSpaceError("the modular of f is infinite at every scale");
    if (t.zero()) return result;

    const double lux = luxemburg_norm(f, phi, w).value;
    const auto g = [&](double s) { return s * (1.0 + modular_at(t, phi, s, false)); };

    // Bracket a minimum of the convex map s -> s (1 + I(f/s)) around the Luxemburg norm.
    double a = lux * 0.5;
    double b = lux;
    double c = lux * 2.0;
    double ga = g(a), gb = g(b), gc = g(c);
    double best = std::min({ga, gb, gc});
    int it = 0;
    while (ga < gb && a > lux * 1e-12) {
        c = b, gc = gb;
        b = a, gb = ga;
        a *= 0.5, ga = g(a);
        best = std::min(best, ga);
        ++it;
    }
    while (gc < gb && it < options.max_iterations) {
        a = b, ga = gb;
        b = c, gb = gc;
        c *= 2.0, gc = g(c);
        best = std::min(best, gc);
        ++it;
    }

    const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c - inv_gr * (c - a);
    double x2 = a + inv_gr * (c - a);
    double g1 = g(x1), g2 = g(x2);
    while (it < options.max_iterations && (c - a) > options.tol * b) {
        if (g1 <= g2) {
            c = x2;
            x2 = x1, g2 = g1;
            x1 = c - inv_gr * (c - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2, g1 = g2;
            x2 = a + inv_gr * (c - a);
            g2 = g(x2);
        }
        best = std::min({best, g1, g2});
        ++it;
    }
    result.value = best;
    result.iterations = it;
    result.upper = best;
    if (!t.tail.empty()) {
        const auto gu = [&](double s) { return s * (1.0 + modular_at(t, phi, s, true)); };
        result.upper = std::max(best, gu(0.5 * (a + c)));
    }
    return result;
}

double amemiya_scan(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w,
                    std::size_t points) {
    const ModularTerms t = collect(f, w);
    if (t.divergent) throw NotInSpaceError("the modular of f is infinite at every scale");
    if (t.zero()) return 0.0;
    const double lux = luxemburg_norm(f, phi, w).value;
    const double lo = std::log(lux * 1e-6);
    const double hi = std::log(lux * 2.0);
    double best = kInf;
    for (std::size_t i = 0; i < points; ++i) {
        const double s = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
        best = std::min(best, s * (1.0 + modular_at(t, phi, s, false)));
    }
    return best;
}

NormResult indicator_norm(const PieceSet& set, const OrliczFunction& phi) {
    const double m = measure(set);
    if (std::isinf(m)) throw NotInSpaceError("indicator of a set of infinite measure");
    NormResult r;
    if (m > 0.0) r.value = 1.0 / right_inverse(phi, 1.0 / m);
    r.upper = r.value;
    return r;
}

NormResult weighted_indicator_norm(const PieceSet& set, const OrliczFunction& phi, const WeightedStructure& w) {
    require_same_space(*set.space(), *w.space());
    const double m = measure(preimage(w, set));
    if (std::isinf(m)) throw NotInSpaceError("indicator of a set whose preimage has infinite measure");
    NormResult r;
    if (m > 0.0) r.value = 1.0 / right_inverse(phi, 1.0 / m);
    r.upper = r.value;
    return r;
}

ModularAtNorm modular_at_norm(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w,
                              const NormOptions& options) {
    ModularAtNorm out;
    out.delta2_warning = !satisfies_delta2(phi);
    out.norm = luxemburg_norm(f, phi, w, options).value;
    if (out.norm == 0.0) return out;
    out.value = modular(f.scaled(1.0 / out.norm), phi, w).value;
    return out;
}

}  // namespace orlicz

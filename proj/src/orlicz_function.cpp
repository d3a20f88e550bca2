#include "orlicz/orlicz_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Knots = std::vector<std::pair<double, double>>;

double slope(const Knots& k, std::size_t seg) {
    return (k[seg + 1].second - k[seg].second) / (k[seg + 1].first - k[seg].first);
}

// Index of the segment [x_i, x_{i+1}) containing x; the last segment extends to infinity.
std::size_t segment_of(const Knots& k, double x) {
    auto it = std::upper_bound(k.begin(), k.end(), x, [](double v, const auto& kn) { return v < kn.first; });
    const auto i = static_cast<std::size_t>(std::distance(k.begin(), it));
    return std::min(i == 0 ? 0 : i - 1, k.size() - 2);
}

double exp_minus_value(double x) {
    if (x < 1e-3) {
        // e^x - x - 1 loses all digits to cancellation near 0.
        const double x2 = x * x;
        return x2 * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0))));
    }
    return std::expm1(x) - x;
}

void validate_parameters(const OrliczFunction::Family& family) {
    std::visit(Overloaded{
                   [](const OrliczFunction::Power& f) {
                       if (!(f.p > 1.0) || !std::isfinite(f.p)) throw DomainError("power family needs p > 1");
                       if (!(f.c > 0.0) || !std::isfinite(f.c)) throw DomainError("power family needs c > 0");
                   },
                   [](const OrliczFunction::ExpMinus&) {},
                   [](const OrliczFunction::PowerLog& f) {
                       if (!(f.p >= 1.0) || !std::isfinite(f.p)) throw DomainError("power_log family needs p >= 1");
                   },
                   [](const OrliczFunction::Tabulated& f) {
                       const auto& k = f.knots;
                       if (k.size() < 2) throw DomainError("tabulated function needs at least two knots");
                       if (k.front().first != 0.0 || k.front().second != 0.0)
                           throw DomainError("tabulated function must start at (0, 0)");
                       for (std::size_t i = 0; i + 1 < k.size(); ++i) {
                           if (!std::isfinite(k[i + 1].first) || !std::isfinite(k[i + 1].second))
                               throw DomainError("tabulated knots must be finite");
                           if (!(k[i + 1].first > k[i].first))
                               throw DomainError("tabulated knots must have strictly increasing x");
                           if (!(k[i + 1].second > k[i].second))
                               throw DomainError("tabulated values must be strictly increasing");
                       }
                       for (std::size_t i = 0; i + 2 < k.size(); ++i) {
                           const double s0 = slope(k, i);
                           const double s1 = slope(k, i + 1);
                           if (s1 < s0 - 1e-9 * std::max(1.0, std::abs(s0)))
                               throw DomainError("tabulated knots are not convex at x = " +
                                                 std::to_string(k[i + 1].first));
                       }
                   },
               },
               family);
}

// Young-function axioms on a probe grid.
void audit_axioms(const OrliczFunction& phi) {
    if (phi(0.0) != 0.0) throw DomainError("phi(0) must be 0");
    std::vector<double> grid{0.0};
    for (int k = -16; k <= 16; ++k) grid.push_back(std::pow(10.0, k / 2.0));
    double prev = 0.0;
    for (double x : grid) {
        const double v = phi(x);
        if (std::isnan(v) || v < 0.0) throw DomainError("phi must be nonnegative");
        if (x >= 1e-4 && !(v > 0.0)) throw DomainError("phi(x) must be positive for x > 0");
        if (v < prev) throw DomainError("phi must be nondecreasing");
        prev = v;
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < std::min(grid.size(), i + 4); ++j) {
            const double a = grid[i];
            const double b = grid[j];
            const double fa = phi(a);
            const double fb = phi(b);
            if (!std::isfinite(fb)) continue;
            const double mid = phi(0.5 * (a + b));
            const double chord = 0.5 * (fa + fb);
            if (mid > chord + 1e-12 * (1.0 + chord)) throw DomainError("phi fails midpoint convexity");
        }
    }
    // phi(x)/x shrinks toward 0 and grows toward infinity (non-strictly, to admit tabulated input).
    double last_small = kInf;
    double last_large = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const double xs = std::pow(10.0, -k);
        const double xl = std::pow(10.0, k);
        const double rs = phi(xs) / xs;
        const double rl = phi(xl) / xl;
        if (rs > last_small * (1.0 + 1e-12)) throw DomainError("phi(x)/x must decrease as x -> 0");
        if (rl < last_large * (1.0 - 1e-12)) throw DomainError("phi(x)/x must increase as x -> infinity");
        last_small = rs;
        last_large = rl;
    }
}

double bisect_inverse(const OrliczFunction& phi, double t, double tol) {
    double lo = 0.0;
    double hi = 1.0;
    while (!(phi(hi) > t)) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw DomainError("right inverse bracket overflow");
    }
    for (int iter = 0; iter < 4000; ++iter) {
        if (!(hi - lo > std::min(tol, 1e-15 * hi))) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (phi(mid) > t) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

OrliczFunction::OrliczFunction(Family family) : family_(std::move(family)) {
    validate_parameters(family_);
    audit_axioms(*this);
    std::visit(Overloaded{
                   [this](const Power& f) {
                       delta2_ = Delta2Status::holds;
                       delta2_k_ = std::pow(2.0, f.p);
                   },
                   [this](const ExpMinus&) { delta2_ = Delta2Status::fails; },
                   [this](const PowerLog& f) {
                       // phi(2x)/phi(x) = 2^p ln(1+2x)/ln(1+x) decreases from 2^(p+1) to 2^p.
                       delta2_ = Delta2Status::holds;
                       delta2_k_ = std::pow(2.0, f.p + 1.0);
                   },
                   [](const Tabulated&) {},
               },
               family_);
    superlinear_ = check_superlinear(*this);
}

double OrliczFunction::operator()(double x) const {
    if (!(x >= 0.0)) throw DomainError("phi is defined on [0, inf); got x = " + std::to_string(x));
    return std::visit(Overloaded{
                          [x](const Power& f) { return f.c * std::pow(x, f.p); },
                          [x](const ExpMinus&) { return exp_minus_value(x); },
                          [x](const PowerLog& f) { return x == 0.0 ? 0.0 : std::pow(x, f.p) * std::log1p(x); },
                          [x](const Tabulated& f) {
                              const auto& k = f.knots;
                              const std::size_t i = segment_of(k, x);
                              return k[i].second + slope(k, i) * (x - k[i].first);
                          },
                      },
                      family_);
}

double OrliczFunction::derivative(double x) const {
    if (!(x >= 0.0)) throw DomainError("phi' is defined on [0, inf)");
    return std::visit(Overloaded{
                          [x](const Power& f) { return f.c * f.p * std::pow(x, f.p - 1.0); },
                          [x](const ExpMinus&) { return std::expm1(x); },
                          [x](const PowerLog& f) {
                              if (x == 0.0) return 0.0;
                              return f.p * std::pow(x, f.p - 1.0) * std::log1p(x) + std::pow(x, f.p) / (1.0 + x);
                          },
                          [x](const Tabulated& f) { return slope(f.knots, segment_of(f.knots, x)); },
                      },
                      family_);
}

std::string OrliczFunction::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(Overloaded{
                   [&os](const Power& f) { os << "power(p=" << f.p << ", c=" << f.c << ")"; },
                   [&os](const ExpMinus&) { os << "exp_minus"; },
                   [&os](const PowerLog& f) { os << "power_log(p=" << f.p << ")"; },
                   [&os](const Tabulated& f) { os << "tabulated(" << f.knots.size() << " knots)"; },
               },
               family_);
    return os.str();
}

double evaluate(const OrliczFunction& phi, double x) {
    return phi(x);
}

double right_inverse(const OrliczFunction& phi, double t, double tol) {
    if (!(t >= 0.0)) throw DomainError("right inverse needs t >= 0");
    if (t == 0.0) return 0.0;
    if (t == kInf) return kInf;
    if (const auto* f = std::get_if<OrliczFunction::Power>(&phi.family())) return std::pow(t / f->c, 1.0 / f->p);
    if (const auto* f = std::get_if<OrliczFunction::Tabulated>(&phi.family())) {
        const auto& k = f->knots;
        auto it = std::upper_bound(k.begin(), k.end(), t, [](double v, const auto& kn) { return v < kn.second; });
        const auto idx = static_cast<std::size_t>(std::distance(k.begin(), it));
        const std::size_t seg = std::min(idx == 0 ? 0 : idx - 1, k.size() - 2);
        return k[seg].first + (t - k[seg].second) / slope(k, seg);
    }
    return bisect_inverse(phi, t, tol);
}

double conjugate_exponent(double p) {
    if (!(p > 1.0)) throw DomainError("conjugate exponent needs p > 1");
    return p / (p - 1.0);
}

double conjugate_value(const OrliczFunction& phi, double y, const ConjugateOptions& options) {
    y = std::abs(y);
    if (y == 0.0) return 0.0;

    // Bracket the maximizer: phi'(lo) < y <= phi'(hi).
    double lo = 0.0;
    double hi = 1.0;
    while (phi.derivative(hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (hi > options.bracket_cap) throw UnboundedConjugateError(y);
    }

    const auto objective = [&](double x) { return x * y - phi(x); };
    const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_gr * (b - a);
    double d = a + inv_gr * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int iter = 0; iter < 400 && (b - a) > 1e-15 * hi; ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_gr * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_gr * (b - a);
            fd = objective(d);
        }
    }
    return std::max({0.0, fc, fd, objective(0.5 * (a + b))});
}

OrliczFunction conjugate(const OrliczFunction& phi, const ConjugateOptions& options) {
    if (const auto* f = std::get_if<OrliczFunction::Power>(&phi.family())) {
        const double q = conjugate_exponent(f->p);
        return OrliczFunction::power(q, std::pow(f->c * f->p, 1.0 - q) / q);
    }
    if (std::holds_alternative<OrliczFunction::Tabulated>(phi.family()))
        throw DomainError("the conjugate of a piecewise-linear function is not a Young function");
    if (options.knots < 2 || !(options.y_max > 0.0)) throw DomainError("conjugate grid needs knots >= 2 and y_max > 0");
    std::vector<std::pair<double, double>> knots;
    knots.reserve(options.knots + 1);
    knots.emplace_back(0.0, 0.0);
    for (std::size_t k = 1; k <= options.knots; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(options.knots);
        const double y = options.y_max * s * s;
        knots.emplace_back(y, conjugate_value(phi, y, options));
    }
    return OrliczFunction::tabulated(std::move(knots));
}

Delta2Report check_delta2(const OrliczFunction& phi, const Delta2Options& options) {
    Delta2Report report;
    report.probe_min = options.probe_min;
    report.probe_max = options.probe_max;
    const double log_lo = std::log(options.probe_min);
    const double log_hi = std::log(options.probe_max);
    const std::size_t n = std::max<std::size_t>(options.points, 2);

    std::vector<double> xs;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        const double r = phi(2.0 * x) / phi(x);
        if (!std::isfinite(r) || r > options.ratio_cap) {
            report.holds = false;
            report.k_estimate = std::isfinite(r) ? std::max(report.k_estimate, r) : kInf;
            report.counterexample_x = x;
            return report;
        }
        report.k_estimate = std::max(report.k_estimate, r);
        xs.push_back(x);
        ratios.push_back(r);
    }

    // Least-squares slope of log r against log x over the top decade.
    const double top = options.probe_max / 10.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < top) continue;
        const double lx = std::log(xs[i]);
        const double ly = std::log(ratios[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        m += 1.0;
    }
    const double denom = m * sxx - sx * sx;
    const double trend = denom > 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    report.holds = trend <= options.slope_tol;
    if (!report.holds) report.counterexample_x = xs.back();
    return report;
}

bool check_superlinear(const OrliczFunction& phi) {
    double previous = kInf;
    double last = kInf;
    for (int k = 1; k <= 8; ++k) {
        const double x = std::pow(10.0, k);
        const double r = right_inverse(phi, x) / x;
        if (!(r < previous)) return false;
        previous = r;
        last = r;
    }
    return last < 1e-2;
}

bool satisfies_delta2(const OrliczFunction& phi) {
    switch (phi.delta2()) {
        case Delta2Status::holds:
            return true;
        case Delta2Status::fails:
            return false;
        case Delta2Status::unknown:
            return check_delta2(phi).holds;
    }
    return false;
}

}  // namespace orlicz

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace orlicz {

enum class Delta2Status { holds, fails, unknown };

/// A validated Young (Orlicz) function phi: [0, inf) -> [0, inf).
///
/// Closed forms cover c*x^p, e^x - x - 1 and x^p*ln(1+x); anything else can be given as a convex
/// piecewise-linear interpolant through knots starting at (0, 0), extended linearly past the last
/// knot. Values are immutable after construction.
class OrliczFunction {
public:
    struct Power {
        double p = 2.0;
        double c = 1.0;
    };
    struct ExpMinus {};
    struct PowerLog {
        double p = 2.0;
    };
    struct Tabulated {
        std::vector<std::pair<double, double>> knots;
    };
    using Family = std::variant<Power, ExpMinus, PowerLog, Tabulated>;

    /// Validates the family parameters and the Young-function axioms on a probe grid.
    /// Throws DomainError when any check fails; non-convex knots are rejected.
    explicit OrliczFunction(Family family);

    static OrliczFunction power(double p, double c = 1.0) { return OrliczFunction(Power{p, c}); }
    static OrliczFunction exp_minus() { return OrliczFunction(ExpMinus{}); }
    static OrliczFunction power_log(double p) { return OrliczFunction(PowerLog{p}); }
    static OrliczFunction tabulated(std::vector<std::pair<double, double>> knots) {
        return OrliczFunction(Tabulated{std::move(knots)});
    }

    const Family& family() const noexcept { return family_; }
    bool is_power() const noexcept { return std::holds_alternative<Power>(family_); }

    /// Analytic Delta2 verdict; unknown for tabulated functions (use check_delta2).
    Delta2Status delta2() const noexcept { return delta2_; }
    std::optional<double> delta2_constant() const noexcept { return delta2_k_; }
    /// phi >> x on the sampled range (see check_superlinear).
    bool superlinear() const noexcept { return superlinear_; }

    /// phi(x). Throws DomainError for negative x.
    double operator()(double x) const;
    /// Right derivative phi'(x+).
    double derivative(double x) const;

    std::string describe() const;

private:
    Family family_;
    Delta2Status delta2_ = Delta2Status::unknown;
    std::optional<double> delta2_k_;
    bool superlinear_ = false;
};

double evaluate(const OrliczFunction& phi, double x);

/// inf{s > 0 : phi(s) > t}. Closed form for powers and tabulated functions, bisection otherwise
/// on [0, B] with B doubling from 1, to absolute tolerance `tol` (and relative 1e-15).
double right_inverse(const OrliczFunction& phi, double t, double tol = 1e-12);

struct ConjugateOptions {
    /// Largest x tried while bracketing the maximizer of x*y - phi(x).
    double bracket_cap = 1e300;
    /// Knot grid of a tabulated conjugate: y_k = y_max (k / knots)^2.
    double y_max = 100.0;
    std::size_t knots = 512;
};

/// psi(y) = sup_{x >= 0} (x|y| - phi(x)) by golden-section search on the bracket where the
/// derivative of the objective changes sign. Throws UnboundedConjugateError past the cap.
double conjugate_value(const OrliczFunction& phi, double y, const ConjugateOptions& options = {});

/// Complementary function psi. Closed form for powers: c x^p -> (1/q)(c p)^(1-q) y^q.
/// Other closed forms give a tabulated psi on [0, y_max]. Tabulated input is rejected because
/// its conjugate vanishes near 0 and is infinite past the last slope.
OrliczFunction conjugate(const OrliczFunction& phi, const ConjugateOptions& options = {});

/// Conjugate exponent q with 1/p + 1/q = 1.
double conjugate_exponent(double p);

struct Delta2Report {
    bool holds = false;
    /// Largest phi(2x)/phi(x) seen on the probe grid.
    double k_estimate = 0.0;
    /// Where the ratio blew up (or grew over the top decade); present iff !holds.
    std::optional<double> counterexample_x;
    double probe_min = 1e-6;
    double probe_max = 1e6;
};

struct Delta2Options {
    double probe_min = 1e-6;
    double probe_max = 1e6;
    std::size_t points = 400;
    /// Ratios above this count as unbounded.
    double ratio_cap = 1e6;
    /// Largest tolerated slope of log ratio against log x over the top decade.
    double slope_tol = 1e-3;
};

/// Probes phi(2x) <= K phi(x) on a log-spaced grid.
Delta2Report check_delta2(const OrliczFunction& phi, const Delta2Options& options = {});

/// phi^-1(x)/x at x = 10^k, k = 1..8, strictly decreasing with the last sample below 1e-2.
bool check_superlinear(const OrliczFunction& phi);

/// Delta2 verdict from the analytic flag, falling back to check_delta2 when unknown.
bool satisfies_delta2(const OrliczFunction& phi);

}  // namespace orlicz

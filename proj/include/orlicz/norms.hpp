#pragma once

#include <string>

#include "orlicz/measure_space.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/weighted.hpp"

namespace orlicz {

enum class NormMethod { closed_form, bisection, minimization };

std::string to_string(NormMethod m);

struct NormResult {
    double value = 0.0;
    NormMethod method = NormMethod::closed_form;
    /// Modular at the returned norm minus 1 (0 for closed forms and the zero function).
    double residual = 0.0;
    int iterations = 0;
    /// Same norm computed with the analytic family-tail bound added to the modular.
    double upper = 0.0;
};

struct ModularValue {
    /// Exact sum over pieces, with non-constant family runs summed over their first N indices.
    double value = 0.0;
    /// Upper bound for the part of those runs past the truncation.
    double tail_bound = 0.0;
    /// The modular is infinite for every scaling of f (constant nonzero values on a family part
    /// of infinite measure).
    bool divergent = false;

    double upper() const { return value + tail_bound; }
};

/// I(f) = sum over pieces of phi(|f(p)|) omega(p) mu(p); omega = 1 when `w` is null.
ModularValue modular(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w = nullptr);

struct NormOptions {
    /// Relative width of the final bisection bracket.
    double tol = 1e-10;
    int max_iterations = 200;
};

/// inf{k > 0 : I(f/k) <= 1} by bisection on log k. The returned k is the upper end of the final
/// bracket, so I(f/k) <= 1 always. Throws NotInSpaceError when the modular diverges.
NormResult luxemburg_norm(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w = nullptr,
                          const NormOptions& options = {});

struct AmemiyaOptions {
    /// Relative width of the final golden-section bracket in k.
    double tol = 1e-9;
    int max_iterations = 400;
};

/// inf_{k > 0} (1 + I(k f)) / k by golden-section search in t = 1/k, where t (1 + I(f/t)) is convex.
NormResult amemiya_norm(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w = nullptr,
                        const AmemiyaOptions& options = {});

/// Minimum of the Amemiya objective over `points` log-spaced t in [1e-6 L, 2 L] (L the Luxemburg
/// norm). Used to cross-check the golden-section result.
double amemiya_scan(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w = nullptr,
                    std::size_t points = 1024);

/// 1 / phi^-1(1 / mu(A)); 0 for a null set. Throws NotInSpaceError when mu(A) is infinite.
NormResult indicator_norm(const PieceSet& set, const OrliczFunction& phi);

/// 1 / phi^-1(1 / mu(tau^-1 F)); 0 when mu(tau^-1 F) = 0, i.e. omega vanishes on F.
NormResult weighted_indicator_norm(const PieceSet& set, const OrliczFunction& phi, const WeightedStructure& w);

struct ModularAtNorm {
    double value = 0.0;
    /// Set when phi is not known to satisfy Delta2, so the value need not be 1.
    bool delta2_warning = false;
    double norm = 0.0;
};

/// Weighted modular evaluated at f / ||f||_{phi,omega}.
ModularAtNorm modular_at_norm(const SimpleFunction& f, const OrliczFunction& phi, const WeightedStructure* w = nullptr,
                              const NormOptions& options = {});

}  // namespace orlicz

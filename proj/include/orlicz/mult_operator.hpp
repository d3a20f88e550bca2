#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orlicz/measure_space.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/random.hpp"
#include "orlicz/weighted.hpp"

namespace orlicz {

/// M_u f = u f, piece by piece.
SimpleFunction apply(const SimpleFunction& u, const SimpleFunction& f);

struct OperatorNorm {
    /// ||M_u|| = ess sup |u|.
    double value = 0.0;
    /// E = {|u| >= value - delta}, trimmed to finitely many family atoms when needed.
    PieceSet witness;
    double delta = 0.0;
    /// ||u chi_E|| / ||chi_E||; 0 when chi_E has norm 0.
    double witness_ratio = 0.0;
    /// omega vanishes on every near-maximal piece, so the norm is only reached as a seminorm.
    bool seminorm_only = false;
    /// ess sup of |u| over pieces with omega > 0 (equals `value` without a weight).
    double weighted_value = 0.0;
};

/// ess sup |u| with the near-maximal witness set of the boundedness proof, delta = 1e-6 ess sup.
OperatorNorm operator_norm(const SimpleFunction& u, const OrliczFunction& phi, const WeightedStructure* w = nullptr);

/// N(u, eps) = {|u| >= eps}.
PieceSet n_set(const SimpleFunction& u, double eps);

enum class Compactness { compact, not_compact };
enum class CompactReason { zero_operator, n_sets_finite_atoms, nonatomic_mass_in_n_set, infinitely_many_family_atoms };
enum class ContinuityVerdict { compact, not_compact, conditional };

std::string to_string(Compactness c);
std::string to_string(CompactReason r);
std::string to_string(ContinuityVerdict v);

struct DimensionEntry {
    double eps = 0.0;
    /// Positive-mass pieces in N(u, eps); kUnbounded for nonatomic mass or infinitely many atoms.
    Index dimension = 0;
};

struct CompactReport {
    Compactness verdict = Compactness::compact;
    CompactReason reason = CompactReason::zero_operator;
    /// Equal to the compact verdict when phi satisfies Delta2 and grows superlinearly.
    ContinuityVerdict completely_continuous = ContinuityVerdict::conditional;
    std::vector<DimensionEntry> dims;
    std::vector<std::string> notes;
};

/// Dimension of L^phi(N(u, eps)) at model scale, restricted to pieces where omega > 0.
Index n_set_dimension(const SimpleFunction& u, double eps, const WeightedStructure* w = nullptr);

/// Compactness decided from the value rules: nonzero values on cells, or a family rule whose
/// modulus does not tend to 0, give non-compact operators. Dimensions for eps = 2^-k, k = 0..20.
CompactReport classify_compact(const SimpleFunction& u, const OrliczFunction& phi, const WeightedStructure* w = nullptr);

struct Invertibility {
    bool invertible = false;
    double ess_inf = 0.0;
    std::optional<SimpleFunction> inverse;
};

Invertibility check_invertible(const SimpleFunction& u, double tol = 1e-12);

/// u_n = u on {|u| > 1/n}, 0 elsewhere.
SimpleFunction truncation(const SimpleFunction& u, Index n);

/// max over probes f with ||f|| > 0 of ||(u_n - u) f|| / ||f||.
double truncation_gap(const SimpleFunction& u, Index n, const OrliczFunction& phi, const WeightedStructure* w,
                      const std::vector<SimpleFunction>& probes);

struct CommuteReport {
    bool commute = true;
    /// Largest relative difference between u(vf), v(uf) and (uv)f over all pieces and probes.
    double max_deviation = 0.0;
    /// M_v chi_E = M_{M_v e} chi_E for every probe set E.
    bool generator_pattern = true;
};

/// Products commute bit for bit; re-association (uv)f vs u(vf) is allowed 4 ulp of rounding.
CommuteReport commute_check(const SimpleFunction& u, const SimpleFunction& v, const std::vector<SimpleFunction>& probes);

/// Indicators of single pieces (at most `max_single` cells and the first truncation-many family
/// atoms) followed by `random_count` random simple functions.
std::vector<SimpleFunction> make_probes(const SpacePtr& space, Rng& rng, std::size_t random_count = 100,
                                        std::size_t max_single = 256);

struct OperatorReport {
    bool bounded = false;
    OperatorNorm norm;
    /// Largest ||u f|| / ||f|| over the probes.
    double probe_max_ratio = 0.0;
    CompactReport compact;
    Invertibility invertible;
    bool finite_measure = true;
    bool delta2 = false;
    bool superlinear = false;
};

OperatorReport analyze(const SimpleFunction& u, const OrliczFunction& phi, const WeightedStructure* w,
                       const std::vector<SimpleFunction>& probes);

}  // namespace orlicz

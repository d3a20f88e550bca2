#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/measure_space.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/weighted.hpp"

namespace orlicz {

/// Unit-norm spikes h_n = phi^-1(1/mu(E_n)) chi_{E_n} on a decreasing sequence E_0 > E_1 > ...
struct SpikeSequence {
    SpacePtr space;  ///< the (possibly refined) space the sets live on
    std::vector<PieceSet> sets;
    std::vector<double> heights;
    std::vector<SimpleFunction> spikes;
    std::vector<double> norms;
};

/// Spikes on E_0, E_1, ..., E_{n_max - 1} with mu(E_n) = mu(E_0) 2^-n. E_0 must be a union of cells.
/// Throws NotNonatomicError for sets with an atomic part and DepthExhaustedError when the
/// required refinement exceeds the depth limit.
SpikeSequence build_spikes(const PieceSet& e0, const OrliczFunction& phi, std::size_t n_max);

/// Spikes on n_max distinct family atoms of E_0, in index order (E_n disjoint, not nested).
SpikeSequence build_atom_spikes(const PieceSet& e0, const OrliczFunction& phi, std::size_t n_max);

struct PairingDecay {
    /// p_n = integral of h_n chi_F.
    std::vector<double> pairings;
    /// b_n = phi^-1(1/mu(E_n)) mu(E_n).
    std::vector<double> bounds;
    bool bounds_strictly_decreasing = false;
    /// Set when phi is not superlinear, so the bounds need not tend to 0.
    bool superlinear_warning = false;
};

PairingDecay pairing_decay(const SpikeSequence& seq, const PieceSet& f, const OrliczFunction& phi);

struct SpikeLowerBound {
    bool passed = false;
    std::vector<double> norms;  ///< ||u h_n||
};

/// Checks ||u h_n|| >= eps0 - 1e-8 for all n. Throws HypothesisError naming a piece of E_0
/// where |u| < eps0.
SpikeLowerBound spike_lower_bound(const SimpleFunction& u, const SpikeSequence& seq, const OrliczFunction& phi,
                                  double eps0);

struct ConvergencePoint {
    /// mu{|f_n - f| >= eps}.
    double measured = 0.0;
    /// ||f_n - f||_{phi,omega} / phi(eps).
    double bound = 0.0;
    /// ||f_n - f||_{phi,omega} <= 1, the range where the bound is claimed.
    bool applicable = false;
};

/// Norm-to-measure bound under mu(tau^-1 E) >= mu(E) for all E. The hypothesis is checked piece by
/// piece (omega >= 1 everywhere) and a HypothesisError names the first failing piece.
std::vector<ConvergencePoint> measure_convergence_bound(const std::vector<SimpleFunction>& f_seq,
                                                        const SimpleFunction& f, const OrliczFunction& phi,
                                                        const WeightedStructure& w, double eps);

enum class CheckStatus { pass, fail, skipped };

std::string to_string(CheckStatus s);

struct CheckResult {
    std::string theorem_id;
    CheckStatus status = CheckStatus::skipped;
    /// Worst observed violation (positive) or slack (negative) of the checked inequality, or the
    /// worst absolute error for equalities.
    double residual = 0.0;
    std::string hypothesis_notes;
};

struct SuiteReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
};

struct SuiteInput {
    SpacePtr space;
    OrliczFunction phi;
    SimpleFunction u;
    std::optional<WeightedStructure> weight;
};

/// Runs every model-scale invariant with seeded randomness; identical inputs and seed give
/// identical reports.
SuiteReport run_suite(const SuiteInput& input, std::uint64_t seed);

}  // namespace orlicz

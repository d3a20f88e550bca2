#pragma once

#include <cstdint>
#include <random>

#include "orlicz/measure_space.hpp"
#include "orlicz/weighted.hpp"

namespace orlicz {

/// Seeded generator with a platform-independent double conversion (std::uniform_real_distribution
/// is not specified bit for bit, so reports would differ between standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform on {0, ..., n - 1}; n > 0.
    Index below(Index n) { return engine_() % n; }
    bool coin(double p = 0.5) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// Atoms a0, a1, ... with masses uniform in [lo, hi].
SpacePtr random_atom_space(Rng& rng, std::size_t atoms, double lo = 0.05, double hi = 1.0);

struct RandomFunctionOptions {
    double lo = -5.0;
    double hi = 5.0;
    /// Chance that a piece (or run of cells) is exactly zero.
    double zero_probability = 0.2;
    /// Largest number of distinct runs laid over the cells.
    std::size_t cell_runs = 6;
    /// Restrict the family to rules with a zero limit (harmonic, geometric, zero).
    bool decaying_family = true;
};

/// Random simple function: independent values per atom, random runs over the cells and a random
/// value rule on the family.
SimpleFunction random_function(Rng& rng, const SpacePtr& space, const RandomFunctionOptions& options = {});

/// Random set: each atom with probability 1/2, random cell runs, a random family prefix.
PieceSet random_set(Rng& rng, const SpacePtr& space);

/// Random piece map. With `bijective` atoms and cells are permuted and the family is not shifted,
/// so omega > 0 everywhere; otherwise every image is drawn independently and the family shift is
/// 0, 1 or 2.
PieceMap random_map(Rng& rng, const MeasureSpace& space, bool bijective);

}  // namespace orlicz

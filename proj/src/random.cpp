#include "orlicz/random.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace orlicz {

namespace {

// Fisher-Yates with our own index draw; std::shuffle is not reproducible across libraries.
std::vector<Index> permutation(Rng& rng, Index n) {
    std::vector<Index> p(n);
    for (Index i = 0; i < n; ++i) p[i] = i;
    for (Index i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    return p;
}

double draw_value(Rng& rng, const RandomFunctionOptions& o) {
    return rng.coin(o.zero_probability) ? 0.0 : rng.uniform(o.lo, o.hi);
}

}  // namespace

SpacePtr random_atom_space(Rng& rng, std::size_t atoms, double lo, double hi) {
    std::vector<Atom> list;
    list.reserve(atoms);
    for (std::size_t i = 0; i < atoms; ++i) list.push_back({"a" + std::to_string(i), rng.uniform(lo, hi)});
    return MeasureSpace::create(std::move(list));
}

SimpleFunction random_function(Rng& rng, const SpacePtr& space, const RandomFunctionOptions& options) {
    std::vector<double> atom_values(space->atoms().size());
    for (auto& v : atom_values) v = draw_value(rng, options);
    auto atoms = LineFunction::from_values(space->atom_universe(), atom_values);

    LineFunction cells(space->cell_universe());
    const Index n_cells = space->cell_universe().end;
    if (n_cells > 0) {
        std::vector<Index> cuts{0, n_cells};
        const std::size_t extra = rng.below(options.cell_runs);
        for (std::size_t k = 0; k < extra; ++k) cuts.push_back(rng.below(n_cells));
        std::sort(cuts.begin(), cuts.end());
        std::vector<RuleRun> runs;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            if (cuts[k] < cuts[k + 1]) runs.push_back({{cuts[k], cuts[k + 1]}, ValueRule::constant(draw_value(rng, options))});
        cells = LineFunction::from_runs(space->cell_universe(), std::move(runs));
    }

    LineFunction family(space->family_universe());
    if (space->family()) {
        const double c = rng.uniform(options.lo, options.hi);
        const Index kinds = options.decaying_family ? 3 : 4;
        switch (rng.below(kinds)) {
            case 0:
                break;
            case 1:
                family = LineFunction(space->family_universe(), ValueRule::harmonic(c));
                break;
            case 2:
                family = LineFunction(space->family_universe(), ValueRule::geometric(c, rng.uniform(0.1, 0.9)));
                break;
            default:
                family = LineFunction(space->family_universe(), ValueRule::constant(c));
                break;
        }
    }
    return SimpleFunction(space, std::move(atoms), std::move(cells), std::move(family));
}

PieceSet random_set(Rng& rng, const SpacePtr& space) {
    std::vector<Index> atoms;
    for (Index i = 0; i < space->atoms().size(); ++i)
        if (rng.coin()) atoms.push_back(i);
    std::vector<Interval> cells;
    const Index n_cells = space->cell_universe().end;
    if (n_cells > 0) {
        for (int k = 0; k < 3; ++k) {
            const Index b = rng.below(n_cells);
            cells.push_back({b, b + 1 + rng.below(n_cells - b)});
        }
    }
    IntervalSet family;
    if (space->family() && rng.coin()) family = IntervalSet::range(1, 2 + rng.below(16));
    return PieceSet(space, IntervalSet::of(atoms), IntervalSet(std::move(cells)), std::move(family));
}

PieceMap random_map(Rng& rng, const MeasureSpace& space, bool bijective) {
    PieceMap map;
    const Index n_atoms = space.atoms().size();
    const Index n_cells = space.cell_universe().end;
    if (bijective) {
        map.atoms = permutation(rng, n_atoms);
        if (n_cells > 0) {
            map.cells.kind = CellMap::Kind::table;
            map.cells.table = permutation(rng, n_cells);
        }
        return map;
    }
    for (Index i = 0; i < n_atoms; ++i) map.atoms.push_back(rng.below(n_atoms));
    if (n_cells > 0) {
        map.cells.kind = CellMap::Kind::table;
        for (Index c = 0; c < n_cells; ++c) map.cells.table.push_back(rng.below(n_cells));
    }
    if (space.family()) map.family_shift = rng.below(3);
    return map;
}

}  // namespace orlicz

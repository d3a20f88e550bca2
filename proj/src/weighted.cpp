#include "orlicz/weighted.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

Index atom_image(const PieceMap& map, Index i) {
    return map.atoms.empty() ? i : map.atoms[i];
}

}  // namespace

WeightedStructure derive_weight(const SpacePtr& space, PieceMap map) {
    const Index n_atoms = space->atoms().size();
    if (!map.atoms.empty() && map.atoms.size() != n_atoms)
        throw DomainError("atom map must assign an image to every atom");
    for (Index t : map.atoms)
        if (t >= n_atoms) throw DomainError("atom map points outside the space");

    const Index n_cells = space->cell_universe().end;
    switch (map.cells.kind) {
        case CellMap::Kind::identity:
            break;
        case CellMap::Kind::constant:
            if (map.cells.target >= n_cells) throw DomainError("constant cell map points outside the segment");
            break;
        case CellMap::Kind::table:
            if (!space->segment() || space->segment()->depth > CellMap::kMaxTableDepth)
                throw DomainError("cell tables are limited to depth " + std::to_string(CellMap::kMaxTableDepth));
            if (map.cells.table.size() != n_cells) throw DomainError("cell table must cover every cell");
            for (Index t : map.cells.table)
                if (t >= n_cells) throw DomainError("cell table points outside the segment");
            break;
    }
    if (map.family_shift != 0 && !space->family()) throw DomainError("family shift on a space without family");

    WeightedStructure w;
    w.space_ = space;

    w.atom_weights_.assign(n_atoms, 0.0);
    for (Index i = 0; i < n_atoms; ++i) w.atom_weights_[atom_image(map, i)] += space->atoms()[i].mass;
    for (Index i = 0; i < n_atoms; ++i) w.atom_weights_[i] /= space->atoms()[i].mass;

    // Cells share one mass, so omega on a cell is the number of cells mapped onto it.
    const Interval cu = space->cell_universe();
    switch (map.cells.kind) {
        case CellMap::Kind::identity:
            w.cell_weights_ = LineFunction(cu, ValueRule::constant(1.0));
            break;
        case CellMap::Kind::constant:
            w.cell_weights_ = LineFunction::from_runs(
                cu, {{{map.cells.target, map.cells.target + 1}, ValueRule::constant(static_cast<double>(n_cells))}});
            break;
        case CellMap::Kind::table: {
            std::vector<double> counts(n_cells, 0.0);
            for (Index t : map.cells.table) counts[t] += 1.0;
            w.cell_weights_ = LineFunction::from_values(cu, counts);
            break;
        }
    }
    w.map_ = std::move(map);
    return w;
}

double WeightedStructure::family_weight(Index i) const {
    if (!space_->family() || i == 0) throw DomainError("family index outside the space");
    const Index k = map_.family_shift;
    if (i <= k) return 0.0;
    const auto& rule = space_->family()->mass;
    return rule.at(i - k) / rule.at(i);
}

PieceSet WeightedStructure::null_set() const {
    std::vector<Index> atoms;
    for (Index i = 0; i < atom_weights_.size(); ++i)
        if (atom_weights_[i] == 0.0) atoms.push_back(i);
    const IntervalSet cells = IntervalSet::range(0, space_->cell_universe().end).minus(cell_weights_.support());
    IntervalSet family;
    if (space_->family() && map_.family_shift > 0) family = IntervalSet::range(1, map_.family_shift + 1);
    return PieceSet(space_, IntervalSet::of(atoms), cells, family);
}

bool WeightedStructure::nonsingular() const {
    // Null piece-sets are exactly the empty ones when every piece has positive mass, and the
    // preimage of the empty set is empty.
    for (const auto& a : space_->atoms())
        if (!(a.mass > 0.0)) return false;
    if (space_->segment() && !(space_->segment()->cell_mass() > 0.0)) return false;
    return measure(preimage(*this, PieceSet::none(space_))) == 0.0;
}

std::optional<std::string> WeightedStructure::expansion_violation() const {
    for (Index i = 0; i < atom_weights_.size(); ++i)
        if (atom_weights_[i] < 1.0) return space_->atom_name(i);
    for (const auto& r : cell_weights_.runs())
        if (r.rule.coeff < 1.0) return "cell " + std::to_string(r.span.begin);
    if (space_->family()) {
        if (map_.family_shift > 0) return "family atom 1";
        // Identity on the family: omega is exactly 1.
    }
    return std::nullopt;
}

PieceSet preimage(const WeightedStructure& w, const PieceSet& set) {
    require_same_space(*w.space(), *set.space());
    const auto& map = w.map();
    const auto& space = w.space();

    std::vector<Index> atoms;
    for (Index i = 0; i < space->atoms().size(); ++i)
        if (set.atoms().contains(atom_image(map, i))) atoms.push_back(i);

    IntervalSet cells;
    switch (map.cells.kind) {
        case CellMap::Kind::identity:
            cells = set.cells();
            break;
        case CellMap::Kind::constant:
            if (set.cells().contains(map.cells.target)) cells = IntervalSet::range(0, space->cell_universe().end);
            break;
        case CellMap::Kind::table: {
            std::vector<Interval> runs;
            for (Index c = 0; c < map.cells.table.size(); ++c)
                if (set.cells().contains(map.cells.table[c])) runs.push_back({c, c + 1});
            cells = IntervalSet(std::move(runs));
            break;
        }
    }

    IntervalSet family = set.family().shifted_down(map.family_shift).intersect(IntervalSet::range(1, kUnbounded));
    if (!space->family()) family = {};
    return PieceSet(space, IntervalSet::of(atoms), std::move(cells), std::move(family));
}

double weighted_mass(const WeightedStructure& w, const PieceSet& set) {
    require_same_space(*w.space(), *set.space());
    return PieceMeasure(w).of(set);
}

double PieceMeasure::atoms(Interval span) const {
    if (weight_ == nullptr) return space_->atom_mass(span);
    double total = 0.0;
    const Index end = std::min<Index>(span.end, space_->atoms().size());
    for (Index i = span.begin; i < end; ++i) total += weight_->atom_weight(i) * space_->atoms()[i].mass;
    return total;
}

double PieceMeasure::cells(Interval span) const {
    if (weight_ == nullptr) return space_->cell_mass(span);
    double count = 0.0;
    for (const auto& r : weight_->cell_weights().runs()) {
        const Index lo = std::max(r.span.begin, span.begin);
        const Index hi = std::min(r.span.end, span.end);
        if (lo < hi) count += r.rule.coeff * static_cast<double>(hi - lo);
    }
    return count * (space_->segment() ? space_->segment()->cell_mass() : 0.0);
}

double PieceMeasure::family(Interval span) const {
    if (weight_ == nullptr || span.empty()) return space_->family_mass(span);
    // omega_i mu_i = mu_{i - k}: the family part of mu o tau^-1 is mu shifted by k.
    const Index k = weight_->map().family_shift;
    const auto shifted = IntervalSet::range(span.begin, span.end).shifted_down(k).intersect(IntervalSet::range(1, kUnbounded));
    double total = 0.0;
    for (const auto& r : shifted.runs()) total += space_->family_mass(r);
    return total;
}

double PieceMeasure::of(const PieceSet& set) const {
    double total = 0.0;
    for (const auto& r : set.atoms().runs()) total += atoms(r);
    for (const auto& r : set.cells().runs()) total += cells(r);
    for (const auto& r : set.family().runs()) total += family(r);
    return total;
}

}  // namespace orlicz

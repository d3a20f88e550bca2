#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orlicz/measure_space.hpp"

namespace orlicz {

/// Transformation of the segment cells onto cells of the same depth.
struct CellMap {
    enum class Kind { identity, constant, table };

    Kind kind = Kind::identity;
    Index target = 0;          ///< image of every cell for Kind::constant
    std::vector<Index> table;  ///< image of each cell for Kind::table

    /// Largest depth for which an explicit table is accepted (2^20 entries).
    static constexpr int kMaxTableDepth = 20;
};

/// Piece-to-piece transformation tau: atoms to atoms, cells to cells, family index i to i + shift.
struct PieceMap {
    std::vector<Index> atoms;  ///< image of each atom; empty means identity
    CellMap cells;
    Index family_shift = 0;
};

/// tau together with its Radon-Nikodym weight omega = d(mu o tau^-1)/d mu per piece.
class WeightedStructure {
public:
    const SpacePtr& space() const noexcept { return space_; }
    const PieceMap& map() const noexcept { return map_; }

    double atom_weight(Index i) const { return atom_weights_.at(i); }
    double cell_weight(Index c) const { return cell_weights_.at(c); }
    double family_weight(Index i) const;
    const std::vector<double>& atom_weights() const noexcept { return atom_weights_; }
    const LineFunction& cell_weights() const noexcept { return cell_weights_; }

    /// Pieces where omega vanishes; on them the weighted norm is only a seminorm.
    PieceSet null_set() const;
    /// mu(A) = 0 implies mu(tau^-1 A) = 0. Every piece has positive mass, so this always holds
    /// on the model; it is still evaluated piece by piece.
    bool nonsingular() const;
    /// First piece with omega < 1, i.e. where mu(tau^-1 E) >= mu(E) fails; nullopt if none.
    std::optional<std::string> expansion_violation() const;

private:
    friend WeightedStructure derive_weight(const SpacePtr& space, PieceMap map);

    SpacePtr space_;
    PieceMap map_;
    std::vector<double> atom_weights_;
    LineFunction cell_weights_;
};

/// Builds omega(p) = mu(tau^-1 {p}) / mu(p). Throws DomainError for maps that are not total.
WeightedStructure derive_weight(const SpacePtr& space, PieceMap map);

/// Exact preimage tau^-1(A).
PieceSet preimage(const WeightedStructure& w, const PieceSet& set);

/// sum over pieces p in A of omega(p) mu(p), computed from the weights (not from the preimage).
double weighted_mass(const WeightedStructure& w, const PieceSet& set);

/// Integrating measure for modulars: mu itself, or omega d mu = mu o tau^-1.
class PieceMeasure {
public:
    explicit PieceMeasure(const MeasureSpace& space) : space_(&space) {}
    explicit PieceMeasure(const WeightedStructure& w) : space_(w.space().get()), weight_(&w) {}
    /// mu, or omega d mu when `w` is non-null.
    static PieceMeasure of(const MeasureSpace& space, const WeightedStructure* w) {
        return w != nullptr ? PieceMeasure(*w) : PieceMeasure(space);
    }

    const MeasureSpace& space() const noexcept { return *space_; }
    bool weighted() const noexcept { return weight_ != nullptr; }

    double atoms(Interval span) const;
    double cells(Interval span) const;
    double family(Interval span) const;
    double of(const PieceSet& set) const;

private:
    const MeasureSpace* space_;
    const WeightedStructure* weight_ = nullptr;
};

}  // namespace orlicz

#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orlicz/interval_set.hpp"
#include "orlicz/line_function.hpp"

namespace orlicz {

struct Atom {
    std::string id;
    double mass = 0.0;
};

/// Nonatomic interval split into 2^depth dyadic cells of equal mass.
struct Segment {
    double length = 0.0;
    int depth = 0;

    Index cell_count() const noexcept { return Index{1} << depth; }
    double cell_mass() const noexcept;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Masses of the countable atom family, indexed i = 1, 2, ...
struct MassRule {
    enum class Kind { constant, geometric, power };

    Kind kind = Kind::constant;
    double m = 1.0;
    /// geometric: ratio r in (0, 1); power: exponent s > 1; unused for constant.
    double param = 0.0;

    static MassRule constant(double m) { return {Kind::constant, m, 0.0}; }
    static MassRule geometric(double m, double r) { return {Kind::geometric, m, r}; }
    static MassRule power(double m, double s) { return {Kind::power, m, s}; }

    double at(Index i) const;
    /// Closed-form sum over [begin, end); +inf for a divergent tail.
    double sum(Interval span) const;

    friend bool operator==(const MassRule&, const MassRule&) = default;
};

struct CountableAtomFamily {
    MassRule mass;
    /// Number of family atoms summed explicitly in modulars; the rest is bounded analytically.
    Index truncation = 64;

    friend bool operator==(const CountableAtomFamily&, const CountableAtomFamily&) = default;
};

class MeasureSpace;
using SpacePtr = std::shared_ptr<const MeasureSpace>;

/// Desk-scale sigma-finite measure space: explicit atoms, an optional dyadic segment (the
/// nonatomic part) and an optional countable atom family. Immutable once created.
class MeasureSpace {
public:
    /// Depth limit for descriptors; refinement may go further, up to kMaxDepth.
    static constexpr int kMaxDescriptorDepth = 24;
    static constexpr int kMaxDepth = 48;

    /// Validates and builds a space. Throws DomainError on nonpositive masses, duplicate ids,
    /// or an out-of-range depth.
    static SpacePtr create(std::vector<Atom> atoms, std::optional<Segment> segment = std::nullopt,
                           std::optional<CountableAtomFamily> family = std::nullopt);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::optional<Segment>& segment() const noexcept { return segment_; }
    const std::optional<CountableAtomFamily>& family() const noexcept { return family_; }
    std::optional<Index> atom_index(std::string_view id) const;

    Interval atom_universe() const noexcept { return {0, atoms_.size()}; }
    Interval cell_universe() const noexcept { return {0, segment_ ? segment_->cell_count() : 0}; }
    Interval family_universe() const noexcept { return family_ ? Interval{1, kUnbounded} : Interval{}; }

    double atom_mass(Interval span) const;
    double cell_mass(Interval span) const;
    double family_mass(Interval span) const;
    double total_mass() const;
    bool finite_measure() const { return total_mass() < std::numeric_limits<double>::infinity(); }

    /// Same space with the segment split to `depth` (>= current depth).
    SpacePtr refined(int depth) const;
    bool same_layout(const MeasureSpace& other) const;

    /// Human-readable piece name used in diagnostics, e.g. "atom a", "cell 3", "family atom 7".
    std::string atom_name(Index i) const;

private:
    MeasureSpace() = default;

    std::vector<Atom> atoms_;
    std::optional<Segment> segment_;
    std::optional<CountableAtomFamily> family_;
};

/// Measurable set representable on the model: atom ids, dyadic cells and family indices.
class PieceSet {
public:
    /// Throws DomainError if a member lies outside the space.
    PieceSet(SpacePtr space, IntervalSet atoms = {}, IntervalSet cells = {}, IntervalSet family = {});

    static PieceSet none(SpacePtr space) { return PieceSet(std::move(space)); }
    static PieceSet whole(SpacePtr space);
    static PieceSet all_cells(SpacePtr space);

    const SpacePtr& space() const noexcept { return space_; }
    const IntervalSet& atoms() const noexcept { return atoms_; }
    const IntervalSet& cells() const noexcept { return cells_; }
    const IntervalSet& family() const noexcept { return family_; }

    bool empty() const noexcept { return atoms_.empty() && cells_.empty() && family_.empty(); }
    bool has_atomic_part() const noexcept { return !atoms_.empty() || !family_.empty(); }
    /// Number of pieces, kUnbounded if it contains infinitely many family atoms.
    Index piece_count() const noexcept;

    PieceSet unite(const PieceSet& other) const;
    PieceSet intersect(const PieceSet& other) const;
    PieceSet minus(const PieceSet& other) const;
    PieceSet complement() const;
    bool subset_of(const PieceSet& other) const;

    PieceSet refined(const SpacePtr& finer) const;

    friend bool operator==(const PieceSet& a, const PieceSet& b);

private:
    SpacePtr space_;
    IntervalSet atoms_;
    IntervalSet cells_;
    IntervalSet family_;
};

/// Piecewise-constant function on atoms and cells, with a value-rule description on the family.
class SimpleFunction {
public:
    SimpleFunction(SpacePtr space, LineFunction atoms, LineFunction cells, LineFunction family);

    static SimpleFunction zero(SpacePtr space) { return constant(std::move(space), 0.0); }
    static SimpleFunction constant(SpacePtr space, double c);
    /// Values per explicit atom; zero on the segment and family.
    static SimpleFunction on_atoms(SpacePtr space, std::span<const double> values);

    const SpacePtr& space() const noexcept { return space_; }
    const LineFunction& atoms() const noexcept { return atoms_; }
    const LineFunction& cells() const noexcept { return cells_; }
    const LineFunction& family() const noexcept { return family_; }

    bool is_zero() const noexcept { return atoms_.is_zero() && cells_.is_zero() && family_.is_zero(); }

    SimpleFunction times(const SimpleFunction& other) const;
    SimpleFunction plus(const SimpleFunction& other) const;
    SimpleFunction minus(const SimpleFunction& other) const { return plus(other.scaled(-1.0)); }
    SimpleFunction scaled(double c) const;
    SimpleFunction abs() const;
    SimpleFunction restricted(const PieceSet& set) const;
    /// Pointwise 1/f; throws DomainError when f vanishes on some piece.
    SimpleFunction reciprocal() const;
    SimpleFunction refined(const SpacePtr& finer) const;

    /// {|f| >= eps}, or {|f| > eps} when strict.
    PieceSet where_abs(double eps, bool strict = false) const;
    PieceSet support() const { return where_abs(0.0, true); }

    friend bool operator==(const SimpleFunction& a, const SimpleFunction& b);

private:
    SpacePtr space_;
    LineFunction atoms_;
    LineFunction cells_;
    LineFunction family_;
};

/// Throws DomainError unless both objects live on the same space layout.
void require_same_space(const MeasureSpace& a, const MeasureSpace& b);

double measure(const PieceSet& set);
/// Measure of `set`, checking that it belongs to `space`.
double measure(const MeasureSpace& space, const PieceSet& set);

struct Decomposition {
    PieceSet nonatomic;
    PieceSet atomic;
};
Decomposition decompose(const SpacePtr& space);

struct ShrinkingSequence {
    SpacePtr space;  ///< possibly refined copy of the input space
    std::vector<PieceSet> sets;
};
/// A = A_1 > A_2 > ... > A_n with mu(A_k) = mu(A) 2^(1-k), refining the segment when needed.
ShrinkingSequence shrinking_sequence(const PieceSet& set, std::size_t n);

SimpleFunction indicator(const PieceSet& set);
/// Essential supremum of |f| (all pieces have positive mass). +inf for unbounded family rules.
double ess_sup(const SimpleFunction& f);
double ess_sup(const SimpleFunction& f, const PieceSet& within);
/// Essential infimum of |f|, taking the family limit into account.
double ess_inf_abs(const SimpleFunction& f);
double ess_inf_abs(const SimpleFunction& f, const PieceSet& within);
/// Integral of f with respect to mu; family handled by closed form for constant rules on
/// bounded sets and by summation up to the truncation otherwise.
double integral(const SimpleFunction& f);

}  // namespace orlicz

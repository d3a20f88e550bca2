#include "orlicz/measure_space.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Power-rule sums shorter than this are added term by term.
constexpr Index kDirectSumLimit = 4096;

double hurwitz_zeta(double s, double q) {
    static const bool handler_off = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)handler_off;
    gsl_sf_result result;
    if (gsl_sf_hzeta_e(s, q, &result) != GSL_SUCCESS) throw DomainError("Hurwitz zeta evaluation failed");
    return result.val;
}

bool is_same_space(const MeasureSpace& a, const MeasureSpace& b) {
    return &a == &b || a.same_layout(b);
}

PieceSet first_cells(const PieceSet& set, Index count) {
    std::vector<Interval> out;
    for (const auto& r : set.cells().runs()) {
        if (count == 0) break;
        const Index take = std::min(count, r.length());
        out.push_back({r.begin, r.begin + take});
        count -= take;
    }
    return PieceSet(set.space(), {}, IntervalSet(std::move(out)), {});
}

int trailing_zero_bits(Index v) {
    int n = 0;
    while (v != 0 && (v & 1U) == 0) {
        v >>= 1;
        ++n;
    }
    return n;
}

}  // namespace

double Segment::cell_mass() const noexcept {
    return std::ldexp(length, -depth);
}

double MassRule::at(Index i) const {
    const double x = static_cast<double>(i);
    switch (kind) {
        case Kind::constant:
            return m;
        case Kind::geometric:
            return m * std::pow(param, x - 1.0);
        case Kind::power:
            return m * std::pow(x, -param);
    }
    return 0.0;
}

double MassRule::sum(Interval span) const {
    if (span.empty()) return 0.0;
    const double b = static_cast<double>(span.begin);
    switch (kind) {
        case Kind::constant:
            return span.unbounded() ? kInf : m * static_cast<double>(span.length());
        case Kind::geometric: {
            const double head = m * std::pow(param, b - 1.0) / (1.0 - param);
            if (span.unbounded()) return head;
            return head * -std::expm1(static_cast<double>(span.length()) * std::log(param));
        }
        case Kind::power: {
            if (!span.unbounded() && span.length() <= kDirectSumLimit) {
                double total = 0.0;
                for (Index i = span.end; i-- > span.begin;) total += at(i);
                return total;
            }
            const double tail = hurwitz_zeta(param, b);
            if (span.unbounded()) return m * tail;
            return m * (tail - hurwitz_zeta(param, static_cast<double>(span.end)));
        }
    }
    return 0.0;
}

SpacePtr MeasureSpace::create(std::vector<Atom> atoms, std::optional<Segment> segment,
                              std::optional<CountableAtomFamily> family) {
    std::set<std::string> seen;
    for (const auto& a : atoms) {
        if (!(a.mass > 0.0) || !std::isfinite(a.mass))
            throw DomainError("atom '" + a.id + "' must have positive finite mass");
        if (!seen.insert(a.id).second) throw DomainError("duplicate atom id '" + a.id + "'");
    }
    if (segment) {
        if (!(segment->length > 0.0) || !std::isfinite(segment->length))
            throw DomainError("segment length must be positive and finite");
        if (segment->depth < 0 || segment->depth > kMaxDepth)
            throw DomainError("segment depth must lie in [0, " + std::to_string(kMaxDepth) + "]");
    }
    if (family) {
        const auto& rule = family->mass;
        if (!(rule.m > 0.0) || !std::isfinite(rule.m)) throw DomainError("family mass m must be positive");
        if (rule.kind == MassRule::Kind::geometric && !(rule.param > 0.0 && rule.param < 1.0))
            throw DomainError("geometric family ratio must lie in (0, 1)");
        if (rule.kind == MassRule::Kind::power && !(rule.param > 1.0))
            throw DomainError("power family exponent must exceed 1");
        if (family->truncation < 1) throw DomainError("family truncation must be at least 1");
    }
    auto space = std::shared_ptr<MeasureSpace>(new MeasureSpace());
    space->atoms_ = std::move(atoms);
    space->segment_ = segment;
    space->family_ = family;
    return space;
}

std::optional<Index> MeasureSpace::atom_index(std::string_view id) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].id == id) return i;
    return std::nullopt;
}

double MeasureSpace::atom_mass(Interval span) const {
    double total = 0.0;
    const Index end = std::min<Index>(span.end, atoms_.size());
    for (Index i = span.begin; i < end; ++i) total += atoms_[i].mass;
    return total;
}

double MeasureSpace::cell_mass(Interval span) const {
    if (!segment_ || span.empty()) return 0.0;
    return static_cast<double>(span.length()) * segment_->cell_mass();
}

double MeasureSpace::family_mass(Interval span) const {
    if (!family_ || span.empty()) return 0.0;
    return family_->mass.sum({std::max<Index>(span.begin, 1), span.end});
}

double MeasureSpace::total_mass() const {
    double total = atom_mass(atom_universe());
    if (segment_) total += segment_->length;
    if (family_) total += family_mass(family_universe());
    return total;
}

SpacePtr MeasureSpace::refined(int depth) const {
    if (!segment_) throw DomainError("space has no segment to refine");
    if (depth < segment_->depth) throw DomainError("refinement cannot decrease the depth");
    if (depth > kMaxDepth) throw DepthExhaustedError(depth, kMaxDepth);
    return create(atoms_, Segment{segment_->length, depth}, family_);
}

bool MeasureSpace::same_layout(const MeasureSpace& other) const {
    if (atoms_.size() != other.atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].id != other.atoms_[i].id || atoms_[i].mass != other.atoms_[i].mass) return false;
    return segment_ == other.segment_ && family_ == other.family_;
}

std::string MeasureSpace::atom_name(Index i) const {
    return i < atoms_.size() ? "atom '" + atoms_[i].id + "'" : "atom #" + std::to_string(i);
}

void require_same_space(const MeasureSpace& a, const MeasureSpace& b) {
    if (!is_same_space(a, b)) throw DomainError("objects belong to different measure spaces");
}

// ---------------------------------------------------------------------------------------------

PieceSet::PieceSet(SpacePtr space, IntervalSet atoms, IntervalSet cells, IntervalSet family)
    : space_(std::move(space)), atoms_(std::move(atoms)), cells_(std::move(cells)), family_(std::move(family)) {
    if (!space_) throw DomainError("piece set needs a space");
    const auto check = [](const IntervalSet& s, Interval u, const char* what) {
        if (!s.subset_of(IntervalSet::range(u.begin, u.end)))
            throw DomainError(std::string("piece set refers to ") + what + " outside the space");
    };
    check(atoms_, space_->atom_universe(), "atoms");
    check(cells_, space_->cell_universe(), "cells");
    check(family_, space_->family_universe(), "family atoms");
}

PieceSet PieceSet::whole(SpacePtr space) {
    const auto a = space->atom_universe();
    const auto c = space->cell_universe();
    const auto f = space->family_universe();
    return PieceSet(space, IntervalSet::range(a.begin, a.end), IntervalSet::range(c.begin, c.end),
                    IntervalSet::range(f.begin, f.end));
}

PieceSet PieceSet::all_cells(SpacePtr space) {
    const auto c = space->cell_universe();
    return PieceSet(space, {}, IntervalSet::range(c.begin, c.end), {});
}

Index PieceSet::piece_count() const noexcept {
    const Index f = family_.count();
    if (f == kUnbounded) return kUnbounded;
    return atoms_.count() + cells_.count() + f;
}

PieceSet PieceSet::unite(const PieceSet& other) const {
    require_same_space(*space_, *other.space_);
    return PieceSet(space_, atoms_.unite(other.atoms_), cells_.unite(other.cells_), family_.unite(other.family_));
}

PieceSet PieceSet::intersect(const PieceSet& other) const {
    require_same_space(*space_, *other.space_);
    return PieceSet(space_, atoms_.intersect(other.atoms_), cells_.intersect(other.cells_),
                    family_.intersect(other.family_));
}

PieceSet PieceSet::minus(const PieceSet& other) const {
    require_same_space(*space_, *other.space_);
    return PieceSet(space_, atoms_.minus(other.atoms_), cells_.minus(other.cells_), family_.minus(other.family_));
}

PieceSet PieceSet::complement() const {
    return whole(space_).minus(*this);
}

bool PieceSet::subset_of(const PieceSet& other) const {
    return minus(other).empty();
}

PieceSet PieceSet::refined(const SpacePtr& finer) const {
    const auto& from = space_->segment();
    const auto& to = finer->segment();
    if (!from || !to || from->length != to->length || to->depth < from->depth)
        throw DomainError("target space is not a refinement");
    require_same_space(*MeasureSpace::create(space_->atoms(), to, space_->family()), *finer);
    const Index factor = Index{1} << (to->depth - from->depth);
    return PieceSet(finer, atoms_, cells_.scaled(factor), family_);
}

bool operator==(const PieceSet& a, const PieceSet& b) {
    return is_same_space(*a.space_, *b.space_) && a.atoms_ == b.atoms_ && a.cells_ == b.cells_ &&
           a.family_ == b.family_;
}

// ---------------------------------------------------------------------------------------------

SimpleFunction::SimpleFunction(SpacePtr space, LineFunction atoms, LineFunction cells, LineFunction family)
    : space_(std::move(space)), atoms_(std::move(atoms)), cells_(std::move(cells)), family_(std::move(family)) {
    if (!space_) throw DomainError("simple function needs a space");
    if (!(atoms_.universe() == space_->atom_universe()) || !(cells_.universe() == space_->cell_universe()) ||
        !(family_.universe() == space_->family_universe()))
        throw DomainError("simple function does not match the space layout");
    for (const auto* line : {&atoms_, &cells_})
        for (const auto& r : line->runs())
            if (!r.rule.is_constant()) throw DomainError("atoms and cells carry constant values only");
}

SimpleFunction SimpleFunction::constant(SpacePtr space, double c) {
    const auto rule = ValueRule::constant(c);
    auto a = LineFunction(space->atom_universe(), rule);
    auto s = LineFunction(space->cell_universe(), rule);
    auto f = LineFunction(space->family_universe(), rule);
    return SimpleFunction(std::move(space), std::move(a), std::move(s), std::move(f));
}

SimpleFunction SimpleFunction::on_atoms(SpacePtr space, std::span<const double> values) {
    auto a = LineFunction::from_values(space->atom_universe(), values);
    auto s = LineFunction(space->cell_universe());
    auto f = LineFunction(space->family_universe());
    return SimpleFunction(std::move(space), std::move(a), std::move(s), std::move(f));
}

SimpleFunction SimpleFunction::times(const SimpleFunction& other) const {
    require_same_space(*space_, *other.space_);
    return SimpleFunction(space_, atoms_.times(other.atoms_), cells_.times(other.cells_), family_.times(other.family_));
}

SimpleFunction SimpleFunction::plus(const SimpleFunction& other) const {
    require_same_space(*space_, *other.space_);
    return SimpleFunction(space_, atoms_.plus(other.atoms_), cells_.plus(other.cells_), family_.plus(other.family_));
}

SimpleFunction SimpleFunction::scaled(double c) const {
    return SimpleFunction(space_, atoms_.scaled(c), cells_.scaled(c), family_.scaled(c));
}

SimpleFunction SimpleFunction::abs() const {
    return SimpleFunction(space_, atoms_.abs(), cells_.abs(), family_.abs());
}

SimpleFunction SimpleFunction::restricted(const PieceSet& set) const {
    require_same_space(*space_, *set.space());
    return SimpleFunction(space_, atoms_.restricted(set.atoms()), cells_.restricted(set.cells()),
                          family_.restricted(set.family()));
}

SimpleFunction SimpleFunction::reciprocal() const {
    return SimpleFunction(space_, atoms_.reciprocal(), cells_.reciprocal(), family_.reciprocal());
}

SimpleFunction SimpleFunction::refined(const SpacePtr& finer) const {
    const auto& from = space_->segment();
    const auto& to = finer->segment();
    if (!from || !to || to->depth < from->depth) throw DomainError("target space is not a refinement");
    (void)PieceSet::whole(space_).refined(finer);
    const Index factor = Index{1} << (to->depth - from->depth);
    return SimpleFunction(finer, atoms_, cells_.refined(factor), family_);
}

PieceSet SimpleFunction::where_abs(double eps, bool strict) const {
    return PieceSet(space_, atoms_.where_abs(eps, strict), cells_.where_abs(eps, strict),
                    family_.where_abs(eps, strict));
}

bool operator==(const SimpleFunction& a, const SimpleFunction& b) {
    return is_same_space(*a.space_, *b.space_) && a.atoms_ == b.atoms_ && a.cells_ == b.cells_ &&
           a.family_ == b.family_;
}

// ---------------------------------------------------------------------------------------------

double measure(const PieceSet& set) {
    const auto& space = *set.space();
    double total = 0.0;
    for (const auto& r : set.atoms().runs()) total += space.atom_mass(r);
    for (const auto& r : set.cells().runs()) total += space.cell_mass(r);
    for (const auto& r : set.family().runs()) total += space.family_mass(r);
    return total;
}

double measure(const MeasureSpace& space, const PieceSet& set) {
    if (!is_same_space(space, *set.space())) throw DomainError("piece set does not belong to this space");
    return measure(set);
}

Decomposition decompose(const SpacePtr& space) {
    const auto nonatomic = PieceSet::all_cells(space);
    return {nonatomic, PieceSet::whole(space).minus(nonatomic)};
}

ShrinkingSequence shrinking_sequence(const PieceSet& set, std::size_t n) {
    if (n == 0) throw DomainError("shrinking sequence needs n >= 1");
    if (set.has_atomic_part() || set.cells().empty())
        throw NotNonatomicError("shrinking sequences need a set of positive measure inside the segment");
    const Index cells = set.cells().count();
    const int needed = static_cast<int>(n) - 1 - trailing_zero_bits(cells);
    const int depth = set.space()->segment()->depth + std::max(0, needed);
    if (depth > MeasureSpace::kMaxDepth) throw DepthExhaustedError(depth, MeasureSpace::kMaxDepth);

    ShrinkingSequence out;
    out.space = depth == set.space()->segment()->depth ? set.space() : set.space()->refined(depth);
    const PieceSet base = out.space == set.space() ? set : set.refined(out.space);
    const Index total = base.cells().count();
    for (std::size_t k = 0; k < n; ++k) out.sets.push_back(first_cells(base, total >> k));
    return out;
}

SimpleFunction indicator(const PieceSet& set) {
    const auto& space = set.space();
    return SimpleFunction(space, LineFunction::indicator(space->atom_universe(), set.atoms()),
                          LineFunction::indicator(space->cell_universe(), set.cells()),
                          LineFunction::indicator(space->family_universe(), set.family()));
}

double ess_sup(const SimpleFunction& f, const PieceSet& within) {
    require_same_space(*f.space(), *within.space());
    return std::max({f.atoms().sup_abs(within.atoms()), f.cells().sup_abs(within.cells()),
                     f.family().sup_abs(within.family())});
}

double ess_sup(const SimpleFunction& f) {
    return ess_sup(f, PieceSet::whole(f.space()));
}

double ess_inf_abs(const SimpleFunction& f, const PieceSet& within) {
    require_same_space(*f.space(), *within.space());
    return std::min({f.atoms().inf_abs(within.atoms()), f.cells().inf_abs(within.cells()),
                     f.family().inf_abs(within.family())});
}

double ess_inf_abs(const SimpleFunction& f) {
    return ess_inf_abs(f, PieceSet::whole(f.space()));
}

double integral(const SimpleFunction& f) {
    const auto& space = *f.space();
    double total = 0.0;
    for (const auto& r : f.atoms().runs())
        if (!r.rule.is_zero()) total += r.rule.coeff * space.atom_mass(r.span);
    for (const auto& r : f.cells().runs())
        if (!r.rule.is_zero()) total += r.rule.coeff * space.cell_mass(r.span);
    for (const auto& r : f.family().runs()) {
        if (r.rule.is_zero()) continue;
        if (r.rule.is_constant()) {
            total += r.rule.coeff * space.family_mass(r.span);
        } else if (!r.span.unbounded() && r.span.length() <= kDirectSumLimit) {
            for (Index i = r.span.begin; i < r.span.end; ++i) total += r.rule.at(i) * space.family_mass({i, i + 1});
        } else {
            throw UnsupportedRuleError("integral over an unbounded non-constant family rule");
        }
    }
    return total;
}

}  // namespace orlicz

#include "orlicz/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "orlicz/errors.hpp"

namespace orlicz::io {

namespace {

std::string child(const std::string& at, const std::string& key) {
    std::string escaped;
    for (char ch : key) {
        if (ch == '~')
            escaped += "~0";
        else if (ch == '/')
            escaped += "~1";
        else
            escaped += ch;
    }
    return at + "/" + escaped;
}

std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

const std::string& pointer(const std::string& at) {
    static const std::string root = "/";
    return at.empty() ? root : at;
}

[[noreturn]] void fail(const std::string& at, const std::string& what) { throw ConfigError(pointer(at), what); }

void expect_object(const Json& j, const std::string& at, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(at, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) fail(child(at, key), "unknown field");
}

const Json& field(const Json& j, const char* key, const std::string& at) {
    const auto it = j.find(key);
    if (it == j.end()) fail(child(at, key), "missing field");
    return *it;
}

double as_number(const Json& j, const std::string& at) {
    if (!j.is_number()) fail(at, "expected a number");
    return j.get<double>();
}

double number_field(const Json& j, const char* key, const std::string& at) {
    return as_number(field(j, key, at), child(at, key));
}

double number_field(const Json& j, const char* key, const std::string& at, double fallback) {
    return j.contains(key) ? number_field(j, key, at) : fallback;
}

Index as_index(const Json& j, const std::string& at) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail(at, "expected a nonnegative integer");
    return static_cast<Index>(j.get<std::int64_t>());
}

/// Bound that may be null for "unbounded".
Index as_end(const Json& j, const std::string& at) { return j.is_null() ? kUnbounded : as_index(j, at); }

const std::string& as_string(const Json& j, const std::string& at) {
    if (!j.is_string()) fail(at, "expected a string");
    return j.get_ref<const std::string&>();
}

Index atom_index(const MeasureSpace& space, const Json& id, const std::string& at) {
    const auto i = space.atom_index(as_string(id, at));
    if (!i) fail(at, "unknown atom id '" + id.get<std::string>() + "'");
    return *i;
}

Interval checked_span(Index from, Index to, Interval universe, const std::string& at) {
    if (from < universe.begin || to > universe.end || from >= to)
        fail(at, "range [" + std::to_string(from) + ", " + (to == kUnbounded ? std::string("inf") : std::to_string(to)) +
                     ") is empty or outside [" + std::to_string(universe.begin) + ", " +
                     (universe.end == kUnbounded ? std::string("inf") : std::to_string(universe.end)) + ")");
    return {from, to};
}

ValueRule parse_rule(const Json& j, const std::string& at, std::initializer_list<const char*> extra = {}) {
    std::vector<const char*> allowed{"rule", "c", "rho", "decay"};
    allowed.insert(allowed.end(), extra.begin(), extra.end());
    if (!j.is_object()) fail(at, "expected an object");
    for (const auto& [key, value] : j.items())
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
            fail(child(at, key), "unknown field");
    const std::string& kind = as_string(field(j, "rule", at), child(at, "rule"));
    const double c = number_field(j, "c", at);
    if (!std::isfinite(c)) fail(child(at, "c"), "must be finite");
    if (kind == "constant") return ValueRule::constant(c);
    if (kind == "harmonic") return ValueRule::harmonic(c);
    if (kind == "geometric") {
        const double rho = number_field(j, "rho", at);
        if (!(rho > 0.0) || !std::isfinite(rho)) fail(child(at, "rho"), "must be positive");
        return ValueRule::geometric(c, rho);
    }
    if (kind == "general") {
        const double rho = number_field(j, "rho", at, 1.0);
        const double decay = number_field(j, "decay", at, 0.0);
        if (!(rho > 0.0) || !std::isfinite(rho)) fail(child(at, "rho"), "must be positive");
        if (!std::isfinite(decay)) fail(child(at, "decay"), "must be finite");
        return ValueRule{c, decay, rho}.normalized();
    }
    fail(child(at, "rule"), "unknown rule '" + kind + "'");
}

/// Sums disjoint runs into a line function; overlapping runs are rejected.
LineFunction add_run(const LineFunction& acc, Interval span, ValueRule rule, const std::string& at) {
    const Interval u = acc.universe();
    std::vector<RuleRun> runs;
    if (span.begin > u.begin) runs.push_back({{u.begin, span.begin}, {}});
    runs.push_back({span, rule});
    if (span.end < u.end) runs.push_back({{span.end, u.end}, {}});
    const LineFunction piece = LineFunction::from_runs(u, std::move(runs));
    for (const auto& r : acc.runs())
        if (!r.rule.is_zero() && r.span.begin < span.end && span.begin < r.span.end) fail(at, "overlaps an earlier range");
    return acc.plus(piece);
}

IntervalSet parse_ranges(const Json& j, Interval universe, const std::string& at) {
    if (!j.is_array()) fail(at, "expected an array of [from, to] pairs");
    IntervalSet out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string here = child(at, k);
        if (!j[k].is_array() || j[k].size() != 2) fail(here, "expected [from, to]");
        const Interval span = checked_span(as_index(j[k][0], child(here, 0)), as_end(j[k][1], child(here, 1)), universe, here);
        out = out.unite(IntervalSet::range(span.begin, span.end));
    }
    return out;
}

template <typename F>
auto wrap_domain(const std::string& at, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        fail(at, e.what());
    }
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("", path.string() + ": malformed JSON (" + e.what() + ")");
    }
}

OrliczFunction parse_phi(const Json& j, const std::string& at) {
    if (!j.is_object()) fail(at, "expected an object");
    const std::string& family = as_string(field(j, "family", at), child(at, "family"));
    if (family == "power") {
        expect_object(j, at, {"family", "p", "c"});
        const double p = number_field(j, "p", at);
        const double c = number_field(j, "c", at, 1.0);
        if (!(p > 1.0) || !std::isfinite(p)) fail(child(at, "p"), "power family needs finite p > 1");
        if (!(c > 0.0) || !std::isfinite(c)) fail(child(at, "c"), "power family needs c > 0");
        return wrap_domain(at, [&] { return OrliczFunction::power(p, c); });
    }
    if (family == "exp_minus") {
        expect_object(j, at, {"family"});
        return OrliczFunction::exp_minus();
    }
    if (family == "power_log") {
        expect_object(j, at, {"family", "p"});
        const double p = number_field(j, "p", at);
        if (!(p >= 1.0) || !std::isfinite(p)) fail(child(at, "p"), "power_log family needs finite p >= 1");
        return wrap_domain(at, [&] { return OrliczFunction::power_log(p); });
    }
    if (family == "tabulated") {
        expect_object(j, at, {"family", "knots"});
        const Json& k = field(j, "knots", at);
        const std::string kat = child(at, "knots");
        if (!k.is_array()) fail(kat, "expected an array of [x, y] pairs");
        std::vector<std::pair<double, double>> knots;
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (!k[i].is_array() || k[i].size() != 2) fail(child(kat, i), "expected [x, y]");
            knots.emplace_back(as_number(k[i][0], child(child(kat, i), 0)), as_number(k[i][1], child(child(kat, i), 1)));
        }
        return wrap_domain(kat, [&] { return OrliczFunction::tabulated(std::move(knots)); });
    }
    fail(child(at, "family"), "unknown family '" + family + "'");
}

SpacePtr parse_space(const Json& j, const std::string& at) {
    expect_object(j, at, {"atoms", "segment", "family"});
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        const Json& a = j["atoms"];
        const std::string aat = child(at, "atoms");
        if (!a.is_array()) fail(aat, "expected an array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string here = child(aat, i);
            expect_object(a[i], here, {"id", "mass"});
            const std::string id = as_string(field(a[i], "id", here), child(here, "id"));
            const double mass = number_field(a[i], "mass", here);
            if (!(mass > 0.0) || !std::isfinite(mass)) fail(child(here, "mass"), "mass must be positive and finite");
            if (!seen.insert(id).second) fail(child(here, "id"), "duplicate atom id '" + id + "'");
            atoms.push_back({id, mass});
        }
    }
    std::optional<Segment> segment;
    if (j.contains("segment")) {
        const std::string sat = child(at, "segment");
        expect_object(j["segment"], sat, {"length", "depth"});
        const double length = number_field(j["segment"], "length", sat);
        if (!(length > 0.0) || !std::isfinite(length)) fail(child(sat, "length"), "length must be positive and finite");
        const Json& d = field(j["segment"], "depth", sat);
        const Index depth = as_index(d, child(sat, "depth"));
        if (depth > static_cast<Index>(MeasureSpace::kMaxDescriptorDepth))
            fail(child(sat, "depth"), "depth must not exceed " + std::to_string(MeasureSpace::kMaxDescriptorDepth));
        segment = Segment{length, static_cast<int>(depth)};
    }
    std::optional<CountableAtomFamily> family;
    if (j.contains("family")) {
        const std::string fat = child(at, "family");
        expect_object(j["family"], fat, {"mass", "truncation"});
        const std::string mat = child(fat, "mass");
        const Json& m = field(j["family"], "mass", fat);
        if (!m.is_object()) fail(mat, "expected an object");
        const std::string& rule = as_string(field(m, "rule", mat), child(mat, "rule"));
        CountableAtomFamily fam;
        if (rule == "constant") {
            expect_object(m, mat, {"rule", "m"});
            fam.mass = MassRule::constant(number_field(m, "m", mat));
        } else if (rule == "geometric") {
            expect_object(m, mat, {"rule", "m", "r"});
            fam.mass = MassRule::geometric(number_field(m, "m", mat), number_field(m, "r", mat));
        } else if (rule == "power") {
            expect_object(m, mat, {"rule", "m", "s"});
            fam.mass = MassRule::power(number_field(m, "m", mat), number_field(m, "s", mat));
        } else {
            fail(child(mat, "rule"), "unknown mass rule '" + rule + "'");
        }
        if (j["family"].contains("truncation")) {
            fam.truncation = as_index(j["family"]["truncation"], child(fat, "truncation"));
            if (fam.truncation < 1) fail(child(fat, "truncation"), "truncation must be at least 1");
        }
        family = fam;
    }
    return wrap_domain(at, [&] { return MeasureSpace::create(std::move(atoms), segment, family); });
}

SimpleFunction parse_function(const Json& j, const SpacePtr& space, const std::string& at) {
    expect_object(j, at, {"constant", "atoms", "cells", "family"});
    if (j.contains("constant")) {
        if (j.size() != 1) fail(at, "\"constant\" cannot be combined with other fields");
        const double c = as_number(j["constant"], child(at, "constant"));
        if (!std::isfinite(c)) fail(child(at, "constant"), "must be finite");
        return SimpleFunction::constant(space, c);
    }
    const auto& sp = *space;
    std::vector<double> atom_values(sp.atoms().size(), 0.0);
    if (j.contains("atoms")) {
        const std::string aat = child(at, "atoms");
        if (!j["atoms"].is_object()) fail(aat, "expected an object keyed by atom id");
        for (const auto& [id, value] : j["atoms"].items()) {
            const auto i = sp.atom_index(id);
            if (!i) fail(child(aat, id), "unknown atom id '" + id + "'");
            atom_values[*i] = as_number(value, child(aat, id));
            if (!std::isfinite(atom_values[*i])) fail(child(aat, id), "must be finite");
        }
    }
    LineFunction cells(sp.cell_universe());
    if (j.contains("cells")) {
        const std::string cat = child(at, "cells");
        if (!j["cells"].is_array()) fail(cat, "expected an array of {from, to, value}");
        if (!sp.segment()) fail(cat, "space has no segment");
        for (std::size_t k = 0; k < j["cells"].size(); ++k) {
            const Json& r = j["cells"][k];
            const std::string here = child(cat, k);
            expect_object(r, here, {"from", "to", "value"});
            const Interval span = checked_span(as_index(field(r, "from", here), child(here, "from")),
                                               as_index(field(r, "to", here), child(here, "to")), sp.cell_universe(), here);
            const double v = number_field(r, "value", here);
            if (!std::isfinite(v)) fail(child(here, "value"), "must be finite");
            cells = add_run(cells, span, ValueRule::constant(v), here);
        }
    }
    LineFunction family(sp.family_universe());
    if (j.contains("family")) {
        const std::string fat = child(at, "family");
        if (!sp.family()) fail(fat, "space has no atom family");
        const Json& f = j["family"];
        if (f.is_object()) {
            family = LineFunction(sp.family_universe(), parse_rule(f, fat));
        } else if (f.is_array()) {
            for (std::size_t k = 0; k < f.size(); ++k) {
                const std::string here = child(fat, k);
                const ValueRule rule = parse_rule(f[k], here, {"from", "to"});
                const Interval span = checked_span(as_index(field(f[k], "from", here), child(here, "from")),
                                                   as_end(field(f[k], "to", here), child(here, "to")),
                                                   sp.family_universe(), here);
                family = wrap_domain(here, [&] { return add_run(family, span, rule, here); });
            }
        } else {
            fail(fat, "expected a rule object or an array of ranged rules");
        }
    }
    return SimpleFunction(space, LineFunction::from_values(sp.atom_universe(), atom_values), cells, family);
}

PieceSet parse_set(const Json& j, const SpacePtr& space, const std::string& at) {
    expect_object(j, at, {"all", "atoms", "cells", "family"});
    if (j.contains("all")) {
        if (!j["all"].is_boolean()) fail(child(at, "all"), "expected a boolean");
        if (j.size() != 1) fail(at, "\"all\" cannot be combined with other fields");
        return j["all"].get<bool>() ? PieceSet::whole(space) : PieceSet::none(space);
    }
    const auto& sp = *space;
    IntervalSet atoms, cells, family;
    if (j.contains("atoms")) {
        const std::string aat = child(at, "atoms");
        if (!j["atoms"].is_array()) fail(aat, "expected an array of atom ids");
        for (std::size_t k = 0; k < j["atoms"].size(); ++k)
            atoms = atoms.unite(IntervalSet::single(atom_index(sp, j["atoms"][k], child(aat, k))));
    }
    if (j.contains("cells")) {
        if (!sp.segment()) fail(child(at, "cells"), "space has no segment");
        cells = parse_ranges(j["cells"], sp.cell_universe(), child(at, "cells"));
    }
    if (j.contains("family")) {
        if (!sp.family()) fail(child(at, "family"), "space has no atom family");
        family = parse_ranges(j["family"], sp.family_universe(), child(at, "family"));
    }
    return PieceSet(space, atoms, cells, family);
}

WeightedStructure parse_tau(const Json& j, const SpacePtr& space, const std::string& at) {
    expect_object(j, at, {"atoms", "cells", "family_shift"});
    const auto& sp = *space;
    PieceMap map;
    if (j.contains("atoms")) {
        const std::string aat = child(at, "atoms");
        if (!j["atoms"].is_object()) fail(aat, "expected an object mapping atom id to atom id");
        map.atoms.resize(sp.atoms().size());
        for (Index i = 0; i < map.atoms.size(); ++i) map.atoms[i] = i;
        for (const auto& [id, target] : j["atoms"].items()) {
            const auto i = sp.atom_index(id);
            if (!i) fail(child(aat, id), "unknown atom id '" + id + "'");
            map.atoms[*i] = atom_index(sp, target, child(aat, id));
        }
    }
    if (j.contains("cells")) {
        const Json& c = j["cells"];
        const std::string cat = child(at, "cells");
        if (!sp.segment()) fail(cat, "space has no segment");
        if (c.is_string()) {
            if (c.get<std::string>() != "identity") fail(cat, "expected \"identity\", {\"constant\": k} or a table");
        } else if (c.is_object()) {
            expect_object(c, cat, {"constant"});
            map.cells.kind = CellMap::Kind::constant;
            map.cells.target = as_index(field(c, "constant", cat), child(cat, "constant"));
        } else if (c.is_array()) {
            if (sp.segment()->depth > CellMap::kMaxTableDepth)
                fail(cat, "cell tables are limited to depth " + std::to_string(CellMap::kMaxTableDepth));
            map.cells.kind = CellMap::Kind::table;
            for (std::size_t k = 0; k < c.size(); ++k) map.cells.table.push_back(as_index(c[k], child(cat, k)));
        } else {
            fail(cat, "expected \"identity\", {\"constant\": k} or a table");
        }
    }
    if (j.contains("family_shift")) {
        if (!sp.family()) fail(child(at, "family_shift"), "space has no atom family");
        map.family_shift = as_index(j["family_shift"], child(at, "family_shift"));
    }
    return wrap_domain(at, [&] { return derive_weight(space, std::move(map)); });
}

// ---------------------------------------------------------------------------------------------

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

namespace {

Json ranges(const IntervalSet& s) {
    Json out = Json::array();
    for (const auto& r : s.runs()) out.push_back({r.begin, r.end == kUnbounded ? Json(nullptr) : Json(r.end)});
    return out;
}

}  // namespace

Json to_json(const PieceSet& set) {
    Json atoms = Json::array();
    for (const auto& r : set.atoms().runs())
        for (Index i = r.begin; i < r.end; ++i) atoms.push_back(set.space()->atoms()[i].id);
    return {{"atoms", atoms}, {"cells", ranges(set.cells())}, {"family", ranges(set.family())}};
}

Json to_json(const OrliczFunction& phi) {
    return std::visit(
        [](const auto& f) -> Json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, OrliczFunction::Power>)
                return {{"family", "power"}, {"p", number(f.p)}, {"c", number(f.c)}};
            else if constexpr (std::is_same_v<T, OrliczFunction::ExpMinus>)
                return {{"family", "exp_minus"}};
            else if constexpr (std::is_same_v<T, OrliczFunction::PowerLog>)
                return {{"family", "power_log"}, {"p", number(f.p)}};
            else {
                Json knots = Json::array();
                for (const auto& [x, y] : f.knots) knots.push_back({number(x), number(y)});
                return {{"family", "tabulated"}, {"knots", knots}};
            }
        },
        phi.family());
}

Json to_json(const NormResult& r) {
    return {{"value", number(r.value)},
            {"method", to_string(r.method)},
            {"residual", number(r.residual)},
            {"iterations", r.iterations},
            {"upper", number(r.upper)}};
}

Json to_json(const Delta2Report& r) {
    return {{"holds", r.holds},
            {"k_estimate", number(r.k_estimate)},
            {"counterexample_x", r.counterexample_x ? number(*r.counterexample_x) : Json(nullptr)},
            {"probe_range", {number(r.probe_min), number(r.probe_max)}}};
}

Json to_json(const CompactReport& r) {
    Json dims = Json::array();
    for (const auto& d : r.dims)
        dims.push_back({{"eps", number(d.eps)}, {"dimension", d.dimension == kUnbounded ? Json("inf") : Json(d.dimension)}});
    return {{"verdict", to_string(r.verdict)},
            {"reason", to_string(r.reason)},
            {"completely_continuous", to_string(r.completely_continuous)},
            {"dims", dims},
            {"notes", r.notes}};
}

Json to_json(const OperatorReport& r) {
    Json inv = {{"invertible", r.invertible.invertible}, {"ess_inf", number(r.invertible.ess_inf)}};
    if (r.invertible.inverse) inv["inverse_norm"] = number(1.0 / r.invertible.ess_inf);
    return {{"bounded", r.bounded},
            {"norm",
             {{"value", number(r.norm.value)},
              {"witness", to_json(r.norm.witness)},
              {"delta", number(r.norm.delta)},
              {"witness_ratio", number(r.norm.witness_ratio)},
              {"seminorm_only", r.norm.seminorm_only},
              {"weighted_value", number(r.norm.weighted_value)}}},
            {"probe_max_ratio", number(r.probe_max_ratio)},
            {"compact", to_string(r.compact.verdict)},
            {"compactness", to_json(r.compact)},
            {"invertibility", inv},
            {"finite_measure", r.finite_measure},
            {"delta2", r.delta2},
            {"superlinear", r.superlinear}};
}

Json to_json(const SpikeSequence& s) {
    Json spikes = Json::array();
    for (std::size_t n = 0; n < s.sets.size(); ++n)
        spikes.push_back({{"n", n},
                          {"measure", number(measure(s.sets[n]))},
                          {"height", number(s.heights[n])},
                          {"norm", number(s.norms[n])}});
    return spikes;
}

Json to_json(const PairingDecay& p) {
    Json rows = Json::array();
    for (std::size_t n = 0; n < p.bounds.size(); ++n)
        rows.push_back({{"n", n}, {"pairing", number(p.pairings[n])}, {"bound", number(p.bounds[n])}});
    return {{"terms", rows},
            {"bounds_strictly_decreasing", p.bounds_strictly_decreasing},
            {"superlinear_warning", p.superlinear_warning}};
}

Json to_json(const SuiteReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"theorem_id", c.theorem_id},
                          {"status", to_string(c.status)},
                          {"residual", number(c.residual)},
                          {"hypothesis_notes", c.hypothesis_notes}});
    return {{"schema_version", kSchemaVersion}, {"seed", r.seed}, {"all_passed", r.all_passed()}, {"checks", checks}};
}

namespace {

void write(std::ostringstream& out, const Json& j, int indent) {
    const std::string pad(2 * (indent + 1), ' ');
    const std::string close(2 * indent, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out << ",\n";
                first = false;
                out << pad << Json(key).dump() << ": ";
                write(out, value, indent + 1);
            }
            out << "\n" << close << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) out << ",\n";
                out << pad;
                write(out, j[i], indent + 1);
            }
            out << "\n" << close << "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) {
                out << number(x).dump();
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            std::string s(buf);
            // Keep floats recognizable as floats when they print as integers.
            if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
            out << s;
            return;
        }
        default:
            out << j.dump();
    }
}

}  // namespace

std::string dump(const Json& j) {
    std::ostringstream out;
    write(out, j, 0);
    out << "\n";
    return out.str();
}

}  // namespace orlicz::io

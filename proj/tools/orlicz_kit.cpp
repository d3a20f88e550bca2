// orlicz_kit: JSON front end for the Orlicz space toolkit.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/io.hpp"

using namespace orlicz;
using io::Json;

namespace {

enum class Exit { ok = 0, computation = 1, hypothesis = 2, config = 3 };

enum class Level { quiet, info, debug };

Level log_level() {
    const char* v = std::getenv("ORLICZ_KIT_LOG");
    if (v == nullptr) return Level::quiet;
    const std::string s(v);
    if (s == "debug") return Level::debug;
    if (s == "info") return Level::info;
    return Level::quiet;
}

void log(Level at, const std::string& msg) {
    if (log_level() >= at) std::cerr << "[orlicz_kit] " << msg << "\n";
}

struct Options {
    std::string config, space, phi, tau, u, f, set, pairing_set, out, op = "spikes";
    std::vector<double> eps, at;
    std::optional<std::size_t> nmax;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
};

/// A descriptor from a flag (file path or inline JSON) or from the config object.
struct Source {
    Json json;
    std::string name;
};

class Inputs {
public:
    explicit Inputs(const Options& o) : o_(o) {
        if (!o.config.empty()) {
            config_ = io::load_json(o.config);
            if (!config_.is_object()) throw ConfigError("/", o.config + ": expected an object");
            static const std::set<std::string> known{"schema_version", "space", "phi", "tau", "u", "f", "set",
                                                     "pairing_set", "f_seq", "eps", "nmax", "tol", "seed"};
            for (const auto& [key, value] : config_.items())
                if (!known.count(key)) throw ConfigError("/" + key, o.config + ": unknown field");
            if (config_.contains("schema_version") && config_["schema_version"] != io::kSchemaVersion)
                throw ConfigError("/schema_version", o.config + ": unsupported schema version");
        }
    }

    std::optional<Source> find(const std::string& flag, const char* key) const {
        if (!flag.empty()) {
            if (flag.front() == '{' || flag.front() == '[') {
                try {
                    return Source{Json::parse(flag), "inline " + std::string(key)};
                } catch (const Json::parse_error& e) {
                    throw ConfigError("", "inline " + std::string(key) + ": malformed JSON (" + e.what() + ")");
                }
            }
            return Source{io::load_json(flag), flag};
        }
        if (config_.contains(key)) return Source{config_[key], o_.config + " at /" + key};
        return std::nullopt;
    }

    Source need(const std::string& flag, const char* key) const {
        auto s = find(flag, key);
        if (!s) throw ConfigError("", std::string("missing ") + key + " (flag --" + key + " or config field)");
        return *s;
    }

    template <typename T>
    T scalar(const std::optional<T>& flag, const char* key, T fallback) const {
        if (flag) return *flag;
        if (!config_.contains(key)) return fallback;
        const Json& v = config_[key];
        if (!v.is_number() || (std::is_integral_v<T> && !v.is_number_unsigned()))
            throw ConfigError("/" + std::string(key), o_.config + ": expected a " +
                                                          (std::is_integral_v<T> ? "nonnegative integer" : "number"));
        return v.get<T>();
    }

    std::vector<double> eps() const {
        if (!o_.eps.empty()) return o_.eps;
        if (!config_.contains("eps")) return {};
        const Json& v = config_["eps"];
        if (v.is_number()) return {v.get<double>()};
        std::vector<double> out;
        if (!v.is_array()) throw ConfigError("/eps", o_.config + ": expected a number or an array");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError("/eps/" + std::to_string(i), o_.config + ": expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    const Json& config() const { return config_; }

private:
    const Options& o_;
    Json config_ = Json::object();
};

/// Parses with the source name folded into the error so the pointer is unambiguous.
template <typename F>
auto parse(const Source& s, F&& f) {
    try {
        return f(s.json);
    } catch (const ConfigError& e) {
        const std::string msg = std::string(e.what()).substr(e.field().empty() ? 0 : e.field().size() + 2);
        throw ConfigError("", s.name + (e.field().empty() ? "" : " at " + e.field()) + ": " + msg);
    }
}

SpacePtr load_space(const Inputs& in, const Options& o) {
    return parse(in.need(o.space, "space"), [](const Json& j) { return io::parse_space(j); });
}

OrliczFunction load_phi(const Inputs& in, const Options& o) {
    return parse(in.need(o.phi, "phi"), [](const Json& j) { return io::parse_phi(j); });
}

std::optional<WeightedStructure> load_tau(const Inputs& in, const Options& o, const SpacePtr& sp) {
    const auto s = in.find(o.tau, "tau");
    if (!s) return std::nullopt;
    return parse(*s, [&](const Json& j) { return io::parse_tau(j, sp); });
}

SimpleFunction load_function(const Inputs& in, const std::string& flag, const char* key, const SpacePtr& sp) {
    return parse(in.need(flag, key), [&](const Json& j) { return io::parse_function(j, sp); });
}

std::optional<PieceSet> load_set(const Inputs& in, const std::string& flag, const char* key, const SpacePtr& sp) {
    const auto s = in.find(flag, key);
    if (!s) return std::nullopt;
    return parse(*s, [&](const Json& j) { return io::parse_set(j, sp); });
}

void emit(const Options& o, Json report, const std::string& command) {
    report["schema_version"] = io::kSchemaVersion;
    report["command"] = command;
    const std::string text = io::dump(report);
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ConfigError("", "cannot write " + o.out);
    f << text;
}

Exit run_norm(const Options& o) {
    const Inputs in(o);
    const auto sp = load_space(in, o);
    const auto phi = load_phi(in, o);
    const auto tau = load_tau(in, o, sp);
    const auto f = load_function(in, o.f, "f", sp);
    const WeightedStructure* w = tau ? &*tau : nullptr;
    NormOptions opts;
    opts.tol = in.scalar(o.tol, "tol", opts.tol);
    if (!(opts.tol > 0.0)) throw ConfigError("/tol", "tolerance must be positive");
    const auto lux = luxemburg_norm(f, phi, w, opts);
    const auto am = amemiya_norm(f, phi, w);
    const auto mod = modular(f, phi, w);
    log(Level::info, "luxemburg " + std::to_string(lux.value) + ", amemiya " + std::to_string(am.value));
    emit(o,
         {{"luxemburg", io::number(lux.value)},
          {"amemiya", io::number(am.value)},
          {"residual", io::number(lux.residual)},
          {"method", to_string(lux.method)},
          {"luxemburg_detail", io::to_json(lux)},
          {"amemiya_detail", io::to_json(am)},
          {"modular", {{"value", io::number(mod.value)}, {"tail_bound", io::number(mod.tail_bound)}}},
          {"weighted", w != nullptr}},
         "norm");
    return Exit::ok;
}

Exit run_conjugate(const Options& o) {
    const Inputs in(o);
    const auto phi = load_phi(in, o);
    Json out = {{"phi", io::to_json(phi)}};
    if (!std::holds_alternative<OrliczFunction::Tabulated>(phi.family())) {
        const auto psi = conjugate(phi);
        out["psi"] = psi.is_power() ? io::to_json(psi) : Json{{"family", "tabulated"}, {"knot_count", std::get<OrliczFunction::Tabulated>(psi.family()).knots.size()}};
    }
    Json values = Json::array();
    for (double y : o.at) {
        double v;
        try {
            v = conjugate_value(phi, y);
        } catch (const UnboundedConjugateError&) {
            v = std::numeric_limits<double>::infinity();
        }
        values.push_back({{"y", io::number(y)}, {"psi", io::number(v)}});
    }
    out["values"] = values;
    emit(o, out, "conjugate");
    return Exit::ok;
}

Exit run_delta2(const Options& o) {
    const Inputs in(o);
    const auto phi = load_phi(in, o);
    const auto rep = check_delta2(phi);
    Json out = {{"phi", io::to_json(phi)}, {"probe", io::to_json(rep)}, {"superlinear", phi.superlinear()}};
    switch (phi.delta2()) {
        case Delta2Status::holds:
            out["analytic"] = "holds";
            break;
        case Delta2Status::fails:
            out["analytic"] = "fails";
            break;
        case Delta2Status::unknown:
            out["analytic"] = "unknown";
            break;
    }
    out["analytic_k"] = phi.delta2_constant() ? io::number(*phi.delta2_constant()) : Json(nullptr);
    log(Level::info, std::string("Delta2 ") + (rep.holds ? "holds" : "fails") + " on the probe grid");
    emit(o, out, "delta2");
    return Exit::ok;
}

Exit run_analyze(const Options& o) {
    const Inputs in(o);
    const auto sp = load_space(in, o);
    const auto phi = load_phi(in, o);
    const auto tau = load_tau(in, o, sp);
    const auto u = load_function(in, o.u, "u", sp);
    Rng rng(in.scalar<std::uint64_t>(o.seed, "seed", 0));
    const auto probes = make_probes(sp, rng);
    const auto rep = analyze(u, phi, tau ? &*tau : nullptr, probes);
    emit(o, io::to_json(rep), "analyze");
    log(Level::info, "operator norm " + std::to_string(rep.norm.value) + ", " + to_string(rep.compact.verdict));
    if (!rep.delta2) {
        std::cerr << "hypothesis: phi fails Delta2; commutation and inverse-norm conclusions do not apply\n";
        return Exit::hypothesis;
    }
    return Exit::ok;
}

Exit run_harness(const Options& o) {
    const Inputs in(o);
    const auto sp = load_space(in, o);
    const auto phi = load_phi(in, o);
    const std::size_t nmax = in.scalar<std::size_t>(o.nmax, "nmax", 21);
    if (nmax == 0) throw ConfigError("/nmax", "nmax must be at least 1");
    const auto e0 = load_set(in, o.set, "set", sp);
    Json out = {{"op", o.op}};

    if (o.op == "convergence") {
        const auto tau = load_tau(in, o, sp);
        const WeightedStructure w = tau ? *tau : derive_weight(sp, PieceMap{});
        const auto f = load_function(in, o.f, "f", sp);
        const auto eps = in.eps();
        if (eps.size() != 1) throw ConfigError("/eps", "convergence needs exactly one eps");
        std::vector<SimpleFunction> seq;
        if (in.config().contains("f_seq")) {
            const Json& fs = in.config()["f_seq"];
            if (!fs.is_array()) throw ConfigError("/f_seq", "expected an array of function descriptors");
            for (std::size_t k = 0; k < fs.size(); ++k)
                seq.push_back(parse(Source{fs[k], o.config}, [&](const Json& j) { return io::parse_function(j, sp, "/f_seq/" + std::to_string(k)); }));
        } else {
            if (!e0) throw ConfigError("", "convergence needs f_seq in the config or --set to build f + c_n chi_A");
            for (std::size_t n = 0; n < nmax; ++n)
                seq.push_back(f.plus(indicator(*e0).scaled(2.0 * eps[0] * std::ldexp(1.0, -static_cast<int>(n)))));
        }
        Json rows = Json::array();
        for (const auto& p : measure_convergence_bound(seq, f, phi, w, eps[0]))
            rows.push_back({{"measured", io::number(p.measured)}, {"bound", io::number(p.bound)}, {"applicable", p.applicable}});
        out["terms"] = rows;
        emit(o, out, "harness");
        return Exit::ok;
    }

    SpikeSequence seq;
    if (o.op == "atom_spikes") {
        seq = build_atom_spikes(e0 ? *e0 : PieceSet(sp, {}, {}, IntervalSet::range(1, kUnbounded)), phi, nmax);
    } else if (o.op == "spikes" || o.op == "pairing" || o.op == "lower_bound") {
        seq = build_spikes(e0 ? *e0 : PieceSet::all_cells(sp), phi, nmax);
    } else {
        throw ConfigError("", "unknown harness op '" + o.op + "' (spikes, atom_spikes, pairing, lower_bound, convergence)");
    }
    out["spikes"] = io::to_json(seq);
    if (o.op == "pairing") {
        const auto f = load_set(in, o.pairing_set, "pairing_set", sp);
        if (!f) throw ConfigError("", "pairing needs --pairing-set");
        out["pairing"] = io::to_json(pairing_decay(seq, *f, phi));
    }
    if (o.op == "lower_bound") {
        const auto u = load_function(in, o.u, "u", sp);
        const auto eps = in.eps();
        if (eps.size() != 1) throw ConfigError("/eps", "lower_bound needs exactly one eps0");
        const auto lb = spike_lower_bound(u, seq, phi, eps[0]);
        Json norms = Json::array();
        for (double n : lb.norms) norms.push_back(io::number(n));
        out["lower_bound"] = {{"passed", lb.passed}, {"eps0", io::number(eps[0])}, {"norms", norms}};
    }
    emit(o, out, "harness");
    return Exit::ok;
}

Exit run_verify(const Options& o) {
    const Inputs in(o);
    const auto sp = load_space(in, o);
    const auto phi = load_phi(in, o);
    const auto tau = load_tau(in, o, sp);
    const auto u = load_function(in, o.u, "u", sp);
    const auto seed = in.scalar<std::uint64_t>(o.seed, "seed", 0);
    const auto start = std::chrono::steady_clock::now();
    const auto rep = run_suite({sp, phi, u, tau}, seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(o, io::to_json(rep), "verify");
    std::size_t fails = 0, skips = 0;
    for (const auto& c : rep.checks) {
        fails += c.status == CheckStatus::fail;
        skips += c.status == CheckStatus::skipped;
        if (c.status == CheckStatus::fail) std::cerr << "FAIL " << c.theorem_id << " residual " << c.residual << "\n";
        log(Level::debug, to_string(c.status) + " " + c.theorem_id + " " + c.hypothesis_notes);
    }
    log(Level::info, std::to_string(rep.checks.size()) + " checks, " + std::to_string(fails) + " failed, " +
                         std::to_string(skips) + " skipped in " + std::to_string(secs) + " s");
    return fails == 0 ? Exit::ok : Exit::computation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orlicz space toolkit: norms, conjugates, multiplication operators and invariant checks"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON config holding any of the inputs below");
        sub->add_option("--out", o.out, "write the JSON report here instead of stdout");
    };
    auto model = [&](CLI::App* sub) {
        sub->add_option("--space", o.space, "space descriptor (file or inline JSON)");
        sub->add_option("--tau", o.tau, "transformation descriptor (file or inline JSON)");
    };
    auto phi_opt = [&](CLI::App* sub) { sub->add_option("--phi", o.phi, "Orlicz function descriptor"); };

    auto* norm = app.add_subcommand("norm", "Luxemburg and Amemiya norms of f");
    common(norm), model(norm), phi_opt(norm);
    norm->add_option("--f", o.f, "function descriptor");
    norm->add_option("--tol", o.tol, "relative tolerance of the Luxemburg bisection");

    auto* conj = app.add_subcommand("conjugate", "complementary function psi");
    common(conj), phi_opt(conj);
    conj->add_option("--at", o.at, "evaluate psi at these y")->delimiter(',');

    auto* d2 = app.add_subcommand("delta2", "Delta2 probe and superlinearity");
    common(d2), phi_opt(d2);

    auto* an = app.add_subcommand("analyze", "multiplication operator report for u");
    common(an), model(an), phi_opt(an);
    an->add_option("--u", o.u, "symbol descriptor");
    an->add_option("--seed", o.seed, "seed for the random probes");

    auto* hz = app.add_subcommand("harness", "spike sequences, pairings and measure convergence");
    common(hz), model(hz), phi_opt(hz);
    hz->add_option("--op", o.op, "spikes | atom_spikes | pairing | lower_bound | convergence");
    hz->add_option("--set", o.set, "E_0 (or A for convergence)");
    hz->add_option("--pairing-set", o.pairing_set, "F for the pairing");
    hz->add_option("--u", o.u, "symbol for lower_bound");
    hz->add_option("--f", o.f, "limit function for convergence");
    hz->add_option("--eps", o.eps, "eps0 for lower_bound, eps for convergence")->delimiter(',');
    hz->add_option("--nmax", o.nmax, "sequence length");

    auto* vf = app.add_subcommand("verify", "run every invariant check");
    common(vf), model(vf), phi_opt(vf);
    vf->add_option("--u", o.u, "symbol descriptor");
    vf->add_option("--seed", o.seed, "suite seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(Exit::config);
    }

    try {
        Exit code = Exit::ok;
        if (norm->parsed()) code = run_norm(o);
        if (conj->parsed()) code = run_conjugate(o);
        if (d2->parsed()) code = run_delta2(o);
        if (an->parsed()) code = run_analyze(o);
        if (hz->parsed()) code = run_harness(o);
        if (vf->parsed()) code = run_verify(o);
        return static_cast<int>(code);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return static_cast<int>(Exit::config);
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return static_cast<int>(Exit::hypothesis);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(Exit::computation);
    }
}

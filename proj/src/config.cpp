#include "rsmdp/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json_io.hpp"

namespace rsmdp {

using nlohmann::json;

namespace {

void allow_keys(const json& j, const std::string& field, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw SchemaViolation(field, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw SchemaViolation(field.empty() ? it.key() : field + "." + it.key(), "unknown key");
    }
}

std::string join(const std::string& field, const char* key) { return field.empty() ? key : field + "." + key; }

double get_real(const json& j, const std::string& field) {
    if (!j.is_number()) throw SchemaViolation(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaViolation(field, "expected a finite number");
    return v;
}

std::uint64_t get_count(const json& j, const std::string& field) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) throw SchemaViolation(field, "expected a nonnegative integer");
        return std::uint64_t(j.get<std::int64_t>());
    }
    throw SchemaViolation(field, "expected a nonnegative integer");
}

std::string get_string(const json& j, const std::string& field) {
    if (!j.is_string()) throw SchemaViolation(field, "expected a string");
    return j.get<std::string>();
}

lp::Sense sense_from(const std::string& s, const std::string& field) {
    if (s == "<=") return lp::Sense::LessEqual;
    if (s == "=" || s == "==") return lp::Sense::Equal;
    if (s == ">=") return lp::Sense::GreaterEqual;
    throw SchemaViolation(field, "sense must be one of <=, =, >=");
}

const char* sense_name(lp::Sense s) {
    switch (s) {
    case lp::Sense::LessEqual: return "<=";
    case lp::Sense::Equal: return "=";
    case lp::Sense::GreaterEqual: return ">=";
    }
    return "<=";
}

std::vector<double> get_reals(const json& j, const std::string& field) {
    if (!j.is_array()) throw SchemaViolation(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_real(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

PolyhedralEnvelope::Row row_from(const json& j, const std::string& field, const PolyhedralEnvelope& env) {
    allow_keys(j, field, {"xi", "atom_aux", "shared_aux", "sense", "rhs"});
    PolyhedralEnvelope::Row r;
    if (j.contains("xi")) r.xi = get_real(j["xi"], join(field, "xi"));
    r.atom_aux = j.contains("atom_aux") ? get_reals(j["atom_aux"], join(field, "atom_aux"))
                                        : std::vector<double>(env.atom_aux, 0.0);
    r.shared_aux = j.contains("shared_aux") ? get_reals(j["shared_aux"], join(field, "shared_aux"))
                                            : std::vector<double>(env.shared_aux, 0.0);
    if (r.atom_aux.size() != env.atom_aux) throw SchemaViolation(join(field, "atom_aux"), "length must equal atom_aux");
    if (r.shared_aux.size() != env.shared_aux)
        throw SchemaViolation(join(field, "shared_aux"), "length must equal shared_aux");
    if (!j.contains("sense")) throw SchemaViolation(join(field, "sense"), "missing");
    r.sense = sense_from(get_string(j["sense"], join(field, "sense")), join(field, "sense"));
    if (!j.contains("rhs")) throw SchemaViolation(join(field, "rhs"), "missing");
    r.rhs = get_real(j["rhs"], join(field, "rhs"));
    return r;
}

json row_to(const PolyhedralEnvelope::Row& r) {
    return json{{"xi", r.xi}, {"atom_aux", r.atom_aux}, {"shared_aux", r.shared_aux}, {"sense", sense_name(r.sense)},
                {"rhs", r.rhs}};
}

EnvSpec env_from(const json& j) {
    allow_keys(j, "env", {"preset", "p_head", "n", "k", "h", "p", "tilt"});
    if (!j.contains("preset")) throw SchemaViolation("env.preset", "missing");
    const std::string preset = get_string(j["preset"], "env.preset");
    EnvSpec env;
    if (preset == "coin_toss") {
        env.preset = EnvPreset::CoinToss;
        for (const char* k : {"n", "k", "h", "p", "tilt"})
            if (j.contains(k)) throw SchemaViolation(join("env", k), "not a coin_toss parameter");
        if (j.contains("p_head")) {
            env.p_head = get_real(j["p_head"], "env.p_head");
            if (!(env.p_head > 0.0 && env.p_head < 1.0)) throw SchemaViolation("env.p_head", "must lie in (0,1)");
        }
    } else if (preset == "inventory") {
        env.preset = EnvPreset::Inventory;
        if (j.contains("p_head")) throw SchemaViolation("env.p_head", "not an inventory parameter");
        if (j.contains("n")) {
            env.inventory.n = get_count(j["n"], "env.n");
            if (env.inventory.n < 1) throw SchemaViolation("env.n", "must be at least 1");
        }
        if (j.contains("k")) env.inventory.k = get_real(j["k"], "env.k");
        if (j.contains("h")) env.inventory.h = get_real(j["h"], "env.h");
        if (j.contains("p")) env.inventory.p = get_real(j["p"], "env.p");
        if (j.contains("tilt")) env.inventory.tilt = get_real(j["tilt"], "env.tilt");
    } else {
        throw SchemaViolation("env.preset", "must be coin_toss or inventory");
    }
    return env;
}

void training_from(const json& j, ExperimentConfig& cfg) {
    allow_keys(j, "training",
               {"stages", "delta", "scheduler", "theta", "mc_samples", "epsilon", "seed", "prior"});
    TrainingConfig& t = cfg.training;
    if (j.contains("stages")) t.stages = get_count(j["stages"], "training.stages");
    if (j.contains("delta")) {
        t.delta = get_count(j["delta"], "training.delta");
        if (t.delta < 1) throw SchemaViolation("training.delta", "must be at least 1");
    }
    if (j.contains("scheduler")) {
        const std::string s = get_string(j["scheduler"], "training.scheduler");
        if (s == "fixed") t.scheduler = SchedulerKind::FixedDelta;
        else if (s == "sweep") t.scheduler = SchedulerKind::SweepBased;
        else throw SchemaViolation("training.scheduler", "must be fixed or sweep");
    }
    if (j.contains("theta")) {
        t.theta = get_real(j["theta"], "training.theta");
        if (!(t.theta > 0.0)) throw SchemaViolation("training.theta", "must be positive");
    }
    if (j.contains("mc_samples")) {
        t.mc_samples = get_count(j["mc_samples"], "training.mc_samples");
        if (t.mc_samples < 1) throw SchemaViolation("training.mc_samples", "must be at least 1");
    }
    if (j.contains("seed")) t.seed = get_count(j["seed"], "training.seed");
    if (j.contains("epsilon")) {
        const json& e = j["epsilon"];
        allow_keys(e, "training.epsilon", {"start", "decay", "floor"});
        if (e.contains("start")) t.epsilon.start = get_real(e["start"], "training.epsilon.start");
        if (e.contains("decay")) t.epsilon.decay = get_real(e["decay"], "training.epsilon.decay");
        if (e.contains("floor")) t.epsilon.floor = get_real(e["floor"], "training.epsilon.floor");
        try {
            t.epsilon.validate();
        } catch (const Error& err) {
            throw SchemaViolation("training.epsilon", err.what());
        }
    }
    if (j.contains("prior")) {
        const json& p = j["prior"];
        const char* pert = cfg.env.perturbation_name();
        allow_keys(p, "training.prior", {"kind", "mass", "p_head", "tilt"});
        if (!p.contains("kind")) throw SchemaViolation("training.prior.kind", "missing");
        const std::string kind = get_string(p["kind"], "training.prior.kind");
        if (kind == "uniform") {
            if (p.size() != 1) throw SchemaViolation("training.prior", "a uniform prior takes no parameters");
            cfg.prior = PriorSpec{};
        } else if (kind == "informative") {
            cfg.prior.kind = PriorSpec::Kind::Informative;
            for (const char* k : {"p_head", "tilt"})
                if (p.contains(k) && std::string(k) != pert)
                    throw SchemaViolation(join("training.prior", k), "not a parameter of this preset");
            cfg.prior.perturbation = p.contains(pert) ? get_real(p[pert], join("training.prior", pert))
                                                      : (cfg.env.preset == EnvPreset::CoinToss ? cfg.env.p_head
                                                                                               : cfg.env.inventory.tilt);
            if (p.contains("mass")) cfg.prior.mass = get_real(p["mass"], "training.prior.mass");
            if (!(cfg.prior.mass > 0.0)) throw SchemaViolation("training.prior.mass", "must be positive");
        } else {
            throw SchemaViolation("training.prior.kind", "must be uniform or informative");
        }
    }
}

} // namespace

namespace detail {

json risk_to_json(const RiskSpec& spec) {
    switch (spec.kind) {
    case RiskKind::Mean: return json{{"kind", "mean"}};
    case RiskKind::CVaR: return json{{"kind", "cvar"}, {"alpha", spec.alpha}};
    case RiskKind::Envelope: {
        const PolyhedralEnvelope& e = *spec.envelope;
        json per = json::array(), agg = json::array();
        for (const auto& r : e.per_atom) per.push_back(row_to(r));
        for (const auto& r : e.aggregate) agg.push_back(row_to(r));
        return json{{"kind", "envelope"},
                    {"constraints", {{"mean_one", e.mean_one}, {"atom_aux", e.atom_aux}, {"shared_aux", e.shared_aux},
                                     {"per_atom", per}, {"aggregate", agg}}}};
    }
    }
    return json{};
}

RiskSpec risk_from_json(const json& j, const std::string& field) {
    if (!j.is_object()) throw SchemaViolation(field, "expected an object");
    if (!j.contains("kind")) throw SchemaViolation(join(field, "kind"), "missing");
    const std::string kind = get_string(j["kind"], join(field, "kind"));
    if (kind == "mean") {
        allow_keys(j, field, {"kind"});
        return RiskSpec::mean();
    }
    if (kind == "cvar") {
        allow_keys(j, field, {"kind", "alpha"});
        if (!j.contains("alpha")) throw SchemaViolation(join(field, "alpha"), "cvar requires alpha");
        const double a = get_real(j["alpha"], join(field, "alpha"));
        if (!(a > 0.0 && a <= 1.0)) throw SchemaViolation(join(field, "alpha"), "must lie in (0,1]");
        return RiskSpec::cvar(a);
    }
    if (kind == "envelope") {
        allow_keys(j, field, {"kind", "constraints"});
        if (!j.contains("constraints")) throw SchemaViolation(join(field, "constraints"), "envelope requires constraints");
        const json& c = j["constraints"];
        const std::string cf = join(field, "constraints");
        if (c.is_object() && c.contains("preset")) {
            allow_keys(c, cf, {"preset", "c", "alpha"});
            const std::string preset = get_string(c["preset"], join(cf, "preset"));
            if (preset == "semideviation") {
                allow_keys(c, cf, {"preset", "c"});
                if (!c.contains("c")) throw SchemaViolation(join(cf, "c"), "semideviation requires c");
                const double w = get_real(c["c"], join(cf, "c"));
                if (!(w >= 0.0 && w <= 1.0)) throw SchemaViolation(join(cf, "c"), "must lie in [0,1]");
                return RiskSpec::polyhedral(PolyhedralEnvelope::upper_semideviation(w));
            }
            if (preset == "cvar") {
                allow_keys(c, cf, {"preset", "alpha"});
                if (!c.contains("alpha")) throw SchemaViolation(join(cf, "alpha"), "cvar envelope requires alpha");
                const double a = get_real(c["alpha"], join(cf, "alpha"));
                if (!(a > 0.0 && a <= 1.0)) throw SchemaViolation(join(cf, "alpha"), "must lie in (0,1]");
                return RiskSpec::polyhedral(PolyhedralEnvelope::cvar(a));
            }
            throw SchemaViolation(join(cf, "preset"), "must be semideviation or cvar");
        }
        allow_keys(c, cf, {"mean_one", "atom_aux", "shared_aux", "per_atom", "aggregate"});
        PolyhedralEnvelope env;
        if (c.contains("mean_one")) {
            if (!c["mean_one"].is_boolean()) throw SchemaViolation(join(cf, "mean_one"), "expected a boolean");
            env.mean_one = c["mean_one"].get<bool>();
        }
        if (c.contains("atom_aux")) env.atom_aux = get_count(c["atom_aux"], join(cf, "atom_aux"));
        if (c.contains("shared_aux")) env.shared_aux = get_count(c["shared_aux"], join(cf, "shared_aux"));
        for (const char* key : {"per_atom", "aggregate"}) {
            if (!c.contains(key)) continue;
            const json& rows = c[key];
            const std::string f = join(cf, key);
            if (!rows.is_array()) throw SchemaViolation(f, "expected an array of rows");
            auto& dst = std::string(key) == "per_atom" ? env.per_atom : env.aggregate;
            for (std::size_t i = 0; i < rows.size(); ++i)
                dst.push_back(row_from(rows[i], f + "[" + std::to_string(i) + "]", env));
        }
        if (env.per_atom.empty() && env.aggregate.empty() && !env.mean_one)
            throw SchemaViolation(cf, "envelope has no constraints");
        return RiskSpec::polyhedral(std::move(env));
    }
    throw SchemaViolation(join(field, "kind"), "must be mean, cvar or envelope");
}

json config_json(const ExperimentConfig& cfg) {
    json env{{"preset", cfg.env.preset_name()}};
    if (cfg.env.preset == EnvPreset::CoinToss) {
        env["p_head"] = cfg.env.p_head;
    } else {
        env["n"] = cfg.env.inventory.n;
        env["k"] = cfg.env.inventory.k;
        env["h"] = cfg.env.inventory.h;
        env["p"] = cfg.env.inventory.p;
        env["tilt"] = cfg.env.inventory.tilt;
    }
    const TrainingConfig& t = cfg.training;
    json training{{"stages", t.stages},
                  {"delta", t.delta},
                  {"scheduler", t.scheduler == SchedulerKind::FixedDelta ? "fixed" : "sweep"},
                  {"theta", t.theta},
                  {"mc_samples", t.mc_samples},
                  {"epsilon", {{"start", t.epsilon.start}, {"decay", t.epsilon.decay}, {"floor", t.epsilon.floor}}},
                  {"seed", t.seed}};
    if (cfg.prior.kind == PriorSpec::Kind::Uniform) training["prior"] = json{{"kind", "uniform"}};
    else
        training["prior"] = json{{"kind", "informative"}, {cfg.env.perturbation_name(), cfg.prior.perturbation},
                                 {"mass", cfg.prior.mass}};
    return json{{"env", env},
                {"risk", {{"inner", risk_to_json(t.inner)}, {"outer", risk_to_json(t.outer)}}},
                {"training", training},
                {"eval", {{"grid", {{cfg.env.perturbation_name(), cfg.grid}}}}},
                {"runs", cfg.runs},
                {"out", cfg.out}};
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        for (std::size_t i = 0; i < upto; ++i)
            if (text[i] == '\n') ++line;
        std::string reason = e.what();
        if (auto pos = reason.find("parse error"); pos != std::string::npos) reason = reason.substr(pos);
        throw ParseError(line, reason);
    }
}

std::string read_file(const std::string& path) {
    if (path.empty()) throw IoError("empty path");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

DirichletPosterior PriorSpec::build(const EnvSpec& env) const {
    const EnvBundle b = env.build();
    if (kind == Kind::Uniform) return uniform_prior(b.model.n_states(), b.model.n_actions());
    return informative_prior(env.perturbed(perturbation).build().kernel, mass);
}

std::vector<double> default_grid(EnvPreset preset) {
    if (preset == EnvPreset::CoinToss) return {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> g;
    for (int t = -5; t <= 5; ++t) g.push_back(double(t));
    return g;
}

ExperimentConfig parse_config_text(const std::string& text) {
    const json j = detail::parse_json_text(text);
    allow_keys(j, "", {"env", "risk", "training", "eval", "runs", "out"});
    ExperimentConfig cfg;
    if (!j.contains("env")) throw SchemaViolation("env", "missing");
    cfg.env = env_from(j["env"]);
    if (j.contains("risk")) {
        const json& r = j["risk"];
        allow_keys(r, "risk", {"inner", "outer"});
        if (r.contains("inner")) cfg.training.inner = detail::risk_from_json(r["inner"], "risk.inner");
        if (r.contains("outer")) cfg.training.outer = detail::risk_from_json(r["outer"], "risk.outer");
    }
    if (j.contains("training")) training_from(j["training"], cfg);
    cfg.grid = default_grid(cfg.env.preset);
    if (j.contains("eval")) {
        const json& e = j["eval"];
        allow_keys(e, "eval", {"grid"});
        if (e.contains("grid")) {
            const json& g = e["grid"];
            const char* pert = cfg.env.perturbation_name();
            allow_keys(g, "eval.grid", {"p_head", "tilt"});
            if (g.size() != 1 || !g.contains(pert))
                throw SchemaViolation("eval.grid", std::string("expected exactly the key ") + pert);
            cfg.grid = get_reals(g[pert], std::string("eval.grid.") + pert);
            if (cfg.grid.empty()) throw SchemaViolation(std::string("eval.grid.") + pert, "must not be empty");
            for (double v : cfg.grid)
                if (cfg.env.preset == EnvPreset::CoinToss && !(v > 0.0 && v < 1.0))
                    throw SchemaViolation("eval.grid.p_head", "values must lie in (0,1)");
        }
    }
    if (j.contains("runs")) {
        cfg.runs = get_count(j["runs"], "runs");
        if (cfg.runs < 1) throw SchemaViolation("runs", "must be at least 1");
    }
    if (j.contains("out")) cfg.out = get_string(j["out"], "out");
    cfg.training.initial = cfg.env.build().initial;
    if (cfg.prior.kind == PriorSpec::Kind::Informative) cfg.training.prior = cfg.prior.build(cfg.env);
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) { return parse_config_text(detail::read_file(path)); }

std::string config_to_json(const ExperimentConfig& cfg) { return detail::config_json(cfg).dump(2); }

} // namespace rsmdp

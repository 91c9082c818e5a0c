#include "rsmdp/rsmdp.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "json_io.hpp"
#include "rsmdp/bounds.hpp"
#include "rsmdp/config.hpp"
#include "rsmdp/eval.hpp"
#include "rsmdp/experiment.hpp"

struct rsmdp_config {
    rsmdp::ExperimentConfig cfg;
};

struct rsmdp_env {
    rsmdp::EnvBundle env;
};

struct rsmdp_checkpoint {
    rsmdp::DirichletPosterior posterior;
    rsmdp::Policy policy;
};

namespace {

thread_local std::string g_last_error;

template <class F>
rsmdp_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return RSMDP_OK;
    } catch (const rsmdp::Error& e) {
        g_last_error = e.what();
        return static_cast<rsmdp_status>(static_cast<int>(e.code()));
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RSMDP_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return RSMDP_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void* p, const char* what) {
    if (!p) throw rsmdp::InvalidArgument(std::string(what) + " must not be null");
}

rsmdp::RiskSpec risk_of(rsmdp_risk_kind kind, double alpha) {
    switch (kind) {
    case RSMDP_RISK_MEAN: return rsmdp::RiskSpec::mean();
    case RSMDP_RISK_CVAR: return rsmdp::RiskSpec::cvar(alpha);
    }
    throw rsmdp::InvalidArgument("unknown risk kind");
}

std::string risk_name(const rsmdp::RiskSpec& r) {
    switch (r.kind) {
    case rsmdp::RiskKind::Mean: return "mean";
    case rsmdp::RiskKind::CVaR: return "cvar(" + rsmdp::format_double(r.alpha) + ")";
    case rsmdp::RiskKind::Envelope: return "envelope";
    }
    return "?";
}

double get_param(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw rsmdp::SchemaViolation(key, "expected a number");
    return j[key].get<double>();
}

} // namespace

extern "C" {

const char* rsmdp_version(void) { return "0.1.0"; }

const char* rsmdp_last_error(void) { return g_last_error.c_str(); }

void rsmdp_string_free(char* s) { std::free(s); }

rsmdp_status rsmdp_config_load(const char* path, rsmdp_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new rsmdp_config{rsmdp::parse_config(path)};
    });
}

rsmdp_status rsmdp_config_parse(const char* json_text, rsmdp_config** out) {
    return guarded([&] {
        require(json_text, "json_text");
        require(out, "out");
        *out = new rsmdp_config{rsmdp::parse_config_text(json_text)};
    });
}

rsmdp_status rsmdp_config_preset(const char* preset, int outer_cvar, rsmdp_config** out) {
    return guarded([&] {
        require(preset, "preset");
        require(out, "out");
        *out = new rsmdp_config{rsmdp::preset_config(preset, outer_cvar != 0)};
    });
}

void rsmdp_config_free(rsmdp_config* cfg) { delete cfg; }

rsmdp_status rsmdp_config_set_seed(rsmdp_config* cfg, uint64_t seed) {
    return guarded([&] {
        require(cfg, "cfg");
        cfg->cfg.training.seed = seed;
    });
}

rsmdp_status rsmdp_config_set_runs(rsmdp_config* cfg, size_t runs) {
    return guarded([&] {
        require(cfg, "cfg");
        if (runs < 1) throw rsmdp::InvalidArgument("runs must be at least 1");
        cfg->cfg.runs = runs;
    });
}

rsmdp_status rsmdp_config_set_out(rsmdp_config* cfg, const char* dir) {
    return guarded([&] {
        require(cfg, "cfg");
        require(dir, "dir");
        cfg->cfg.out = dir;
    });
}

rsmdp_status rsmdp_config_set_theta(rsmdp_config* cfg, double theta) {
    return guarded([&] {
        require(cfg, "cfg");
        if (!(theta > 0.0)) throw rsmdp::InvalidArgument("theta must be positive");
        cfg->cfg.training.theta = theta;
    });
}

rsmdp_status rsmdp_config_to_json(const rsmdp_config* cfg, char** out) {
    return guarded([&] {
        require(cfg, "cfg");
        require(out, "out");
        *out = dup_string(rsmdp::config_to_json(cfg->cfg));
    });
}

rsmdp_status rsmdp_env_coin_toss(double p_head, rsmdp_env** out) {
    return guarded([&] {
        require(out, "out");
        *out = new rsmdp_env{rsmdp::build_coin_toss(p_head)};
    });
}

rsmdp_status rsmdp_env_inventory(size_t n, double k, double h, double p, double tilt, rsmdp_env** out) {
    return guarded([&] {
        require(out, "out");
        *out = new rsmdp_env{rsmdp::build_inventory({n, k, h, p, tilt})};
    });
}

rsmdp_status rsmdp_env_from_config(const rsmdp_config* cfg, rsmdp_env** out) {
    return guarded([&] {
        require(cfg, "cfg");
        require(out, "out");
        *out = new rsmdp_env{cfg->cfg.env.build()};
    });
}

void rsmdp_env_free(rsmdp_env* env) { delete env; }

size_t rsmdp_env_n_states(const rsmdp_env* env) { return env ? env->env.model.n_states() : 0; }

size_t rsmdp_env_n_actions(const rsmdp_env* env) { return env ? env->env.model.n_actions() : 0; }

int rsmdp_env_state_label(const rsmdp_env* env, size_t state) {
    return env && state < env->env.state_labels.size() ? env->env.state_labels[state] : 0;
}

int rsmdp_env_action_label(const rsmdp_env* env, size_t action) {
    return env && action < env->env.action_labels.size() ? env->env.action_labels[action] : 0;
}

rsmdp_status rsmdp_oracle_solve(const rsmdp_env* env, rsmdp_risk_kind inner, double alpha, double theta,
                                int* action_labels, double* values, size_t n_states) {
    return guarded([&] {
        require(env, "env");
        if (n_states != env->env.model.n_states()) throw rsmdp::InvalidArgument("n_states does not match the env");
        const rsmdp::OracleSolution sol = rsmdp::oracle_solve(env->env, risk_of(inner, alpha), theta);
        for (size_t s = 0; s < n_states; ++s) {
            if (action_labels) action_labels[s] = env->env.action_labels[sol.greedy[s]];
            if (values) values[s] = sol.value[s];
        }
    });
}

rsmdp_status rsmdp_solve_report(const rsmdp_config* cfg, double theta, char** out) {
    return guarded([&] {
        require(cfg, "cfg");
        require(out, "out");
        if (!(theta > 0.0)) theta = cfg->cfg.training.theta;
        const rsmdp::EnvBundle env = cfg->cfg.env.build();
        const auto& inner = cfg->cfg.training.inner;
        const rsmdp::OracleSolution sol = rsmdp::oracle_solve(env, inner, theta);
        std::ostringstream os;
        os << "env " << env.name << ", inner " << risk_name(inner) << ", theta " << theta << ", iterations "
           << sol.iterations << "\n";
        for (size_t s = 0; s < env.model.n_states(); ++s) {
            os << "state " << s << " (label " << env.state_labels[s] << "): action "
               << env.action_labels[sol.greedy[s]] << "  value " << rsmdp::format_double(sol.value[s]) << "\n";
        }
        os << "stationary_weighted_value " << rsmdp::format_double(
                                                   rsmdp::stationary_weighted_value(env, sol.policy, inner, theta))
           << "\n";
        *out = dup_string(os.str());
    });
}

rsmdp_status rsmdp_run_experiment(const rsmdp_config* cfg, const rsmdp_run_options* opts, char** summary) {
    return guarded([&] {
        require(cfg, "cfg");
        rsmdp::RunOptions ro;
        if (opts) {
            ro.jobs = opts->jobs == 0 ? 1 : opts->jobs;
            ro.timing = opts->timing != 0;
        }
        const rsmdp::ExperimentResult res = rsmdp::run_experiment(cfg->cfg, ro);
        if (summary) {
            std::ostringstream os;
            os << "runs " << res.runs.size() << "\n";
            os << "out " << cfg->cfg.out << "\n";
            os << "oracle_value " << rsmdp::format_double(res.oracle_value) << "\n";
            if (!res.aggregate.empty()) {
                os << "final_mean_oracle_value " << rsmdp::format_double(res.aggregate.back().oracle_value) << "\n";
                os << "final_mean_worst_deploy_value " << rsmdp::format_double(res.aggregate.back().worst_deploy_value)
                   << "\n";
            }
            *summary = dup_string(os.str());
        }
    });
}

rsmdp_status rsmdp_checkpoint_load(const char* path, rsmdp_checkpoint** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        auto [post, pol] = rsmdp::load_checkpoint(path);
        *out = new rsmdp_checkpoint{std::move(post), std::move(pol)};
    });
}

rsmdp_status rsmdp_checkpoint_save(const rsmdp_checkpoint* ckpt, const char* path) {
    return guarded([&] {
        require(ckpt, "ckpt");
        require(path, "path");
        rsmdp::save_checkpoint(ckpt->posterior, ckpt->policy, path);
    });
}

void rsmdp_checkpoint_free(rsmdp_checkpoint* ckpt) { delete ckpt; }

size_t rsmdp_checkpoint_n_states(const rsmdp_checkpoint* ckpt) { return ckpt ? ckpt->posterior.n_states() : 0; }

size_t rsmdp_checkpoint_n_actions(const rsmdp_checkpoint* ckpt) { return ckpt ? ckpt->posterior.n_actions() : 0; }

rsmdp_status rsmdp_eval_checkpoint(const rsmdp_config* cfg, const rsmdp_checkpoint* ckpt, char** report) {
    return guarded([&] {
        require(cfg, "cfg");
        require(ckpt, "ckpt");
        require(report, "report");
        const rsmdp::Policy greedy =
            rsmdp::Policy::deterministic(ckpt->policy.n_actions(), ckpt->policy.greedy_actions());
        const auto deployments = rsmdp::deployment_envs(cfg->cfg.env, cfg->cfg.grid);
        const rsmdp::RobustnessReport rep =
            rsmdp::robustness_sweep(greedy, deployments, cfg->cfg.training.inner, rsmdp::kEvalTheta);
        std::ostringstream os;
        for (size_t i = 0; i < rep.labels.size(); ++i)
            os << rep.labels[i] << " " << rsmdp::format_double(rep.values[i]) << "\n";
        os << "worst " << rsmdp::format_double(rep.worst) << "\n";
        *report = dup_string(os.str());
    });
}

rsmdp_status rsmdp_bounds_report(const char* params_path, char** report) {
    return guarded([&] {
        require(params_path, "params_path");
        require(report, "report");
        const nlohmann::json j = rsmdp::detail::parse_json_text(rsmdp::detail::read_file(params_path));
        if (!j.is_object()) throw rsmdp::SchemaViolation("", "expected an object");
        static const char* keys[] = {"c_bar", "gamma", "theta", "alpha1", "alpha2", "n_states", "n_actions",
                                     "a_bar0", "o_alpha", "mu_min", "t0", "delta", "xi", "eta",
                                     "delta_total", "sweep_index", "o0"};
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool known = false;
            for (const char* k : keys) known = known || it.key() == k;
            if (!known) throw rsmdp::SchemaViolation(it.key(), "unknown key");
        }
        rsmdp::BoundParams p;
        p.c_bar = get_param(j, "c_bar", p.c_bar);
        p.gamma = get_param(j, "gamma", p.gamma);
        p.theta = get_param(j, "theta", p.theta);
        p.alpha1 = get_param(j, "alpha1", p.alpha1);
        p.alpha2 = get_param(j, "alpha2", p.alpha2);
        p.n_states = static_cast<size_t>(get_param(j, "n_states", double(p.n_states)));
        p.n_actions = static_cast<size_t>(get_param(j, "n_actions", double(p.n_actions)));
        p.a_bar0 = get_param(j, "a_bar0", p.a_bar0);
        p.o_alpha = get_param(j, "o_alpha", p.o_alpha);
        p.mu_min = get_param(j, "mu_min", p.mu_min);
        p.t0 = get_param(j, "t0", p.t0);
        p.delta = get_param(j, "delta", p.delta);
        p.xi = get_param(j, "xi", p.xi);
        p.eta = get_param(j, "eta", p.eta);
        p.delta_total = get_param(j, "delta_total", p.delta_total);
        p.sweep_index = get_param(j, "sweep_index", p.sweep_index);
        p.o0 = get_param(j, "o0", p.o0);
        char buf[256];
        std::string out;
        auto line = [&](const char* name, double v) {
            std::snprintf(buf, sizeof buf, "%-24s %.10g\n", name, v);
            out += buf;
        };
        line("sample_complexity_T", rsmdp::sample_complexity_T(p));
        line("perturbation_bound", rsmdp::perturbation_bound(p));
        line("stage_iteration_bound", rsmdp::stage_iteration_bound(p));
        line("sweep_iteration_bound", rsmdp::sweep_iteration_bound(p));
        *report = dup_string(out);
    });
}

} // extern "C"

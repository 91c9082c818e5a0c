#include "rsmdp/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "json_io.hpp"
#include "rsmdp/rng.hpp"

namespace rsmdp {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t run) { return split_seed(master, "replication", run); }

RunRecord run_replication(const ExperimentConfig& cfg, std::size_t run, bool timing) {
    const EnvBundle env = cfg.env.build();
    const std::vector<EnvBundle> deployments = deployment_envs(cfg.env, cfg.grid);
    TrainingConfig tc = cfg.training;
    tc.seed = replication_seed(cfg.training.seed, run);

    RunRecord rec;
    rec.run = run;
    rec.seed = tc.seed;
    StageHook hook = [&](StageResult& res, const TrainingState&) {
        const Policy greedy = Policy::deterministic(env.model.n_actions(), res.policy.greedy_actions());
        RobustnessReport rep = robustness_sweep(greedy, deployments, tc.inner, kEvalTheta);
        res.metrics["oracle_value"] = stationary_weighted_value(env, greedy, tc.inner, kEvalTheta);
        res.metrics["worst_deploy_value"] = rep.worst;
        if (!timing) res.wall_ms = 0.0;
        rec.robustness.push_back(std::move(rep));
    };
    try {
        run_training(env.model, env.kernel, tc, rec.log, hook);
    } catch (...) {
        rec.error = std::current_exception();
    }
    return rec;
}

namespace {

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& runs) {
    std::map<std::size_t, std::pair<AggregateRow, std::size_t>> acc;
    for (const auto& r : runs) {
        for (const auto& s : r.log.stages) {
            auto& [row, n] = acc[s.stage];
            row.stage = s.stage;
            row.steps_seen += double(s.steps_seen);
            row.iterations += double(s.iterations);
            row.oracle_value += s.metrics.at("oracle_value");
            row.worst_deploy_value += s.metrics.at("worst_deploy_value");
            row.wall_ms += s.wall_ms;
            ++n;
        }
    }
    std::vector<AggregateRow> out;
    for (auto& [stage, entry] : acc) {
        AggregateRow row = entry.first;
        const double n = double(entry.second);
        row.steps_seen /= n;
        row.iterations /= n;
        row.oracle_value /= n;
        row.worst_deploy_value /= n;
        row.wall_ms /= n;
        out.push_back(row);
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string run_dir_name(std::size_t run) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%03zu", run);
    return buf;
}

const char* kStageHeader = "run,stage,steps_seen,iterations,oracle_value,worst_deploy_value,wall_ms\n";

json posterior_json(const DirichletPosterior& p) {
    json out = json::array();
    for (std::size_t s = 0; s < p.n_states(); ++s) {
        json rows = json::array();
        for (std::size_t a = 0; a < p.n_actions(); ++a) {
            auto r = p.row(s, a);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        out.push_back(std::move(rows));
    }
    return out;
}

} // namespace

std::string stages_csv(const std::vector<RunRecord>& runs, bool timing) {
    std::string out = kStageHeader;
    for (const auto& r : runs) {
        for (const auto& s : r.log.stages) {
            out += std::to_string(r.run) + "," + std::to_string(s.stage) + "," + std::to_string(s.steps_seen) + "," +
                   std::to_string(s.iterations) + "," + format_double(s.metrics.at("oracle_value")) + "," +
                   format_double(s.metrics.at("worst_deploy_value")) + "," + format_double(timing ? s.wall_ms : 0.0) +
                   "\n";
        }
    }
    return out;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows, bool timing) {
    std::string out = kStageHeader;
    for (const auto& r : rows) {
        out += "mean," + std::to_string(r.stage) + "," + format_double(r.steps_seen) + "," +
               format_double(r.iterations) + "," + format_double(r.oracle_value) + "," +
               format_double(r.worst_deploy_value) + "," + format_double(timing ? r.wall_ms : 0.0) + "\n";
    }
    return out;
}

std::string robustness_csv(const RunRecord& run, const std::vector<std::string>& labels) {
    std::string out = "run,stage";
    for (const auto& l : labels) out += "," + l;
    out += ",worst\n";
    for (std::size_t i = 0; i < run.robustness.size(); ++i) {
        const auto& rep = run.robustness[i];
        out += std::to_string(run.run) + "," + std::to_string(run.log.stages[i].stage);
        for (double v : rep.values) out += "," + format_double(v);
        out += "," + format_double(rep.worst) + "\n";
    }
    return out;
}

std::string training_log_json(const ExperimentConfig& cfg, const RunRecord& run, bool timing) {
    json stages = json::array();
    for (const auto& s : run.log.stages) {
        json metrics = json::object();
        for (const auto& [k, v] : s.metrics) metrics[k] = v;
        stages.push_back({{"stage", s.stage},
                          {"steps", s.steps},
                          {"steps_seen", s.steps_seen},
                          {"iterations", s.iterations},
                          {"final_residual", s.final_residual},
                          {"epsilon", s.epsilon},
                          {"sweep", s.sweep},
                          {"wall_ms", timing ? s.wall_ms : 0.0},
                          {"value", s.value},
                          {"greedy", s.policy.greedy_actions()},
                          {"metrics", metrics}});
    }
    json j{{"config", detail::config_json(cfg)},
           {"run", run.run},
           {"seed", run.seed},
           {"initial_state", run.log.initial_state},
           {"sweep_converged", run.log.sweep_converged},
           {"stages", stages},
           {"posterior", posterior_json(run.log.posterior)}};
    if (run.log.failure)
        j["failure"] = {{"stage", run.log.failure->stage},
                        {"code", int(run.log.failure->code)},
                        {"message", run.log.failure->message}};
    return j.dump(2) + "\n";
}

void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result, const std::string& dir,
                      bool timing) {
    if (dir.empty()) throw IoError("empty output directory");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
    for (const auto& r : result.runs) {
        const fs::path rd = fs::path(dir) / run_dir_name(r.run);
        fs::create_directories(rd, ec);
        if (ec) throw IoError("cannot create " + rd.string() + ": " + ec.message());
        write_text(rd / "training_log.json", training_log_json(cfg, r, timing));
        write_text(rd / "stages.csv", stages_csv({r}, timing));
        write_text(rd / "robustness.csv", robustness_csv(r, result.deployment_labels));
        save_checkpoint(r.log.posterior, r.log.policy, (rd / "checkpoint.json").string());
    }
    write_text(fs::path(dir) / "stages.csv", stages_csv(result.runs, timing));
    write_text(fs::path(dir) / "aggregate.csv", aggregate_csv(result.aggregate, timing));
    json summary{{"oracle_value", result.oracle_value},
                 {"runs", result.runs.size()},
                 {"deployments", result.deployment_labels},
                 {"config", detail::config_json(cfg)}};
    write_text(fs::path(dir) / "summary.json", summary.dump(2) + "\n");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (cfg.runs < 1) throw InvalidArgument("runs must be at least 1");
    const EnvBundle env = cfg.env.build();
    cfg.training.validate(env.model.n_states(), env.model.n_actions());

    ExperimentResult result;
    for (const auto& d : deployment_envs(cfg.env, cfg.grid)) result.deployment_labels.push_back(d.name);
    const OracleSolution oracle = oracle_solve(env, cfg.training.inner, kEvalTheta);
    result.oracle_value = stationary_weighted_value(env, oracle.policy, cfg.training.inner, kEvalTheta);

    result.runs.resize(cfg.runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.runs; i = next++) result.runs[i] = run_replication(cfg, i + 1, opts.timing);
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, cfg.runs));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    result.aggregate = aggregate(result.runs);
    if (opts.write_files) write_experiment(cfg, result, cfg.out, opts.timing);
    for (const auto& r : result.runs)
        if (r.error) std::rethrow_exception(r.error);
    return result;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"coin-mean", "coin-cvar", "inventory-mean", "inventory-cvar"};
    return names;
}

ExperimentConfig preset_config(const std::string& preset, bool outer_cvar) {
    ExperimentConfig cfg;
    if (preset == "coin-mean" || preset == "coin-cvar") cfg.env.preset = EnvPreset::CoinToss;
    else if (preset == "inventory-mean" || preset == "inventory-cvar") cfg.env.preset = EnvPreset::Inventory;
    else throw InvalidArgument("unknown preset " + preset);
    const bool cvar = preset.ends_with("-cvar");
    cfg.training.inner = cvar ? RiskSpec::cvar(0.5) : RiskSpec::mean();
    cfg.training.outer = outer_cvar ? RiskSpec::cvar(0.6) : RiskSpec::mean();
    cfg.training.stages = 20;
    cfg.training.delta = 100;
    cfg.grid = default_grid(cfg.env.preset);
    cfg.training.initial = cfg.env.build().initial;
    cfg.out = "results/" + preset + (outer_cvar ? "/outer-cvar" : "/outer-mean");
    return cfg;
}

void save_checkpoint(const DirichletPosterior& posterior, const Policy& policy, const std::string& path) {
    if (path.empty()) throw IoError("empty checkpoint path");
    const std::size_t ns = posterior.n_states(), na = posterior.n_actions();
    if (policy.n_states() != ns || policy.n_actions() != na)
        throw InvalidArgument("policy does not match the posterior");
    json alpha = json::array(), pol = json::array();
    for (std::size_t s = 0; s < ns; ++s) {
        json rows = json::array();
        for (std::size_t a = 0; a < na; ++a) {
            auto r = posterior.row(s, a);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        alpha.push_back(std::move(rows));
        auto p = policy.row(s);
        pol.push_back(std::vector<double>(p.begin(), p.end()));
    }
    json j{{"version", kCheckpointVersion}, {"n_states", ns}, {"n_actions", na}, {"alpha", alpha}, {"policy", pol}};
    write_text(path, j.dump() + "\n");
}

std::pair<DirichletPosterior, Policy> load_checkpoint(const std::string& path) {
    const std::string text = detail::read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CorruptCheckpoint(std::string("unreadable checkpoint: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("version") || j["version"] != kCheckpointVersion)
            throw CorruptCheckpoint("checkpoint version mismatch");
        const auto ns = j.at("n_states").get<std::size_t>();
        const auto na = j.at("n_actions").get<std::size_t>();
        const json& ja = j.at("alpha");
        const json& jp = j.at("policy");
        if (ns == 0 || na == 0 || !ja.is_array() || ja.size() != ns || !jp.is_array() || jp.size() != ns)
            throw CorruptCheckpoint("checkpoint tables have the wrong shape");
        std::vector<double> alpha, probs;
        for (std::size_t s = 0; s < ns; ++s) {
            if (!ja[s].is_array() || ja[s].size() != na) throw CorruptCheckpoint("alpha table has the wrong shape");
            for (std::size_t a = 0; a < na; ++a) {
                auto row = ja[s][a].get<std::vector<double>>();
                if (row.size() != ns) throw CorruptCheckpoint("alpha row has the wrong length");
                for (double x : row)
                    if (!(x > 0.0) || !std::isfinite(x)) throw CorruptCheckpoint("posterior parameters must be positive");
                alpha.insert(alpha.end(), row.begin(), row.end());
            }
            auto prow = jp[s].get<std::vector<double>>();
            if (prow.size() != na) throw CorruptCheckpoint("policy row has the wrong length");
            double total = 0.0;
            for (double p : prow) {
                if (!(p >= 0.0)) throw CorruptCheckpoint("policy row " + std::to_string(s) + " has a negative entry");
                total += p;
            }
            if (std::abs(total - 1.0) > kRowSumTolerance)
                throw CorruptCheckpoint("policy row " + std::to_string(s) + " does not sum to one");
            probs.insert(probs.end(), prow.begin(), prow.end());
        }
        return {DirichletPosterior(ns, na, std::move(alpha)), Policy(ns, na, std::move(probs))};
    } catch (const json::exception& e) {
        throw CorruptCheckpoint(std::string("malformed checkpoint: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw CorruptCheckpoint(e.what());
    }
}

} // namespace rsmdp

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rsmdp/rsmdp.h"

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> runs;
    std::size_t jobs = 1;
    bool no_timing = false;
};

int fail(rsmdp_status st) {
    std::fprintf(stderr, "error (%d): %s\n", int(st), rsmdp_last_error());
    return int(st);
}

void print_and_free(char* text) {
    std::fputs(text, stdout);
    rsmdp_string_free(text);
}

int apply_overrides(rsmdp_config* cfg, const Common& c) {
    rsmdp_status st = RSMDP_OK;
    if (c.seed && (st = rsmdp_config_set_seed(cfg, *c.seed)) != RSMDP_OK) return fail(st);
    if (c.runs && (st = rsmdp_config_set_runs(cfg, *c.runs)) != RSMDP_OK) return fail(st);
    if (c.out && (st = rsmdp_config_set_out(cfg, c.out->c_str())) != RSMDP_OK) return fail(st);
    return 0;
}

int run(rsmdp_config* cfg, const Common& c) {
    rsmdp_run_options opts{c.jobs, c.no_timing ? 0 : 1};
    char* summary = nullptr;
    const rsmdp_status st = rsmdp_run_experiment(cfg, &opts, &summary);
    if (st != RSMDP_OK) return fail(st);
    print_and_free(summary);
    return 0;
}

void add_run_flags(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--runs", c.runs, "number of replications")->check(CLI::PositiveNumber);
    app->add_option("--jobs", c.jobs, "parallel replications")->check(CLI::PositiveNumber);
    app->add_flag("--no-timing", c.no_timing, "write wall_ms = 0 for byte-identical outputs");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-sensitive robust MDP solver and experiment runner"};
    app.require_subcommand(1);
    Common c;
    double theta = 0.0;
    std::string checkpoint, preset, outer = "both";

    auto* solve = app.add_subcommand("solve", "oracle policy for the configured environment and inner risk");
    solve->add_option("--config", c.config, "experiment config")->required();
    solve->add_option("--theta", theta, "value-iteration tolerance (default: training.theta)");

    auto* train = app.add_subcommand("train", "run the configured experiment");
    train->add_option("--config", c.config, "experiment config")->required();
    add_run_flags(train, c);

    auto* eval = app.add_subcommand("eval", "robustness sweep of a checkpoint's greedy policy");
    eval->add_option("--config", c.config, "experiment config")->required();
    eval->add_option("--checkpoint", checkpoint, "checkpoint.json")->required();

    auto* bounds = app.add_subcommand("bounds", "evaluate the complexity bounds for a parameter file");
    bounds->add_option("--config", c.config, "bound parameters (JSON)")->required();

    auto* replicate = app.add_subcommand("replicate", "run a preset experiment grid");
    replicate->add_option("preset", preset, "coin-mean | coin-cvar | inventory-mean | inventory-cvar")->required();
    replicate->add_option("--outer", outer, "outer risk variant")->check(CLI::IsMember({"mean", "cvar", "both"}));
    add_run_flags(replicate, c);

    CLI11_PARSE(app, argc, argv);

    rsmdp_status st = RSMDP_OK;
    if (*bounds) {
        char* report = nullptr;
        if ((st = rsmdp_bounds_report(c.config.c_str(), &report)) != RSMDP_OK) return fail(st);
        print_and_free(report);
        return 0;
    }

    if (*replicate) {
        for (int variant = 0; variant < 2; ++variant) {
            const bool cvar = variant == 1;
            if ((outer == "mean" && cvar) || (outer == "cvar" && !cvar)) continue;
            rsmdp_config* cfg = nullptr;
            if ((st = rsmdp_config_preset(preset.c_str(), cvar ? 1 : 0, &cfg)) != RSMDP_OK) return fail(st);
            Common local = c;
            if (c.out) local.out = *c.out + (cvar ? "/outer-cvar" : "/outer-mean");
            int rc = apply_overrides(cfg, local);
            if (rc == 0) {
                std::printf("%s outer-%s\n", preset.c_str(), cvar ? "cvar" : "mean");
                rc = run(cfg, local);
            }
            rsmdp_config_free(cfg);
            if (rc != 0) return rc;
        }
        return 0;
    }

    rsmdp_config* cfg = nullptr;
    if ((st = rsmdp_config_load(c.config.c_str(), &cfg)) != RSMDP_OK) return fail(st);
    int rc = 0;
    if (*solve) {
        char* report = nullptr;
        // theta <= 0 falls back to training.theta
        st = rsmdp_solve_report(cfg, theta, &report);
        if (st != RSMDP_OK) rc = fail(st);
        else print_and_free(report);
    } else if (*train) {
        rc = apply_overrides(cfg, c);
        if (rc == 0) rc = run(cfg, c);
    } else if (*eval) {
        rsmdp_checkpoint* ckpt = nullptr;
        char* report = nullptr;
        if ((st = rsmdp_checkpoint_load(checkpoint.c_str(), &ckpt)) != RSMDP_OK) rc = fail(st);
        else if ((st = rsmdp_eval_checkpoint(cfg, ckpt, &report)) != RSMDP_OK) rc = fail(st);
        else print_and_free(report);
        rsmdp_checkpoint_free(ckpt);
    }
    rsmdp_config_free(cfg);
    return rc;
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "rsmdp/config.hpp"
#include "rsmdp/driver.hpp"
#include "rsmdp/eval.hpp"

namespace rsmdp {

/// Tolerance of the policy evaluations behind the per-stage metrics.
constexpr double kEvalTheta = 1e-6;

struct RunOptions {
    std::size_t jobs = 1;
    bool timing = true;      ///< false writes wall_ms = 0 so outputs are byte-identical
    bool write_files = true; ///< false keeps everything in memory
};

struct RunRecord {
    std::size_t run = 0; ///< 1-based
    std::uint64_t seed = 0;
    TrainingLog log;
    std::vector<RobustnessReport> robustness; ///< one per completed stage
    std::exception_ptr error;
};

struct AggregateRow {
    std::size_t stage = 0;
    double steps_seen = 0.0;
    double iterations = 0.0;
    double oracle_value = 0.0;
    double worst_deploy_value = 0.0;
    double wall_ms = 0.0;
};

struct ExperimentResult {
    std::vector<RunRecord> runs;
    std::vector<AggregateRow> aggregate; ///< per-stage means over runs that reached the stage
    double oracle_value = 0.0;           ///< stationary-weighted value of the oracle policy
    std::vector<std::string> deployment_labels;
};

/// Seed of replication `run` (1-based) under the master seed.
std::uint64_t replication_seed(std::uint64_t master, std::size_t run);

/// One seeded replication with per-stage oracle and robustness metrics.
RunRecord run_replication(const ExperimentConfig& cfg, std::size_t run, bool timing = true);

/**
 * Runs cfg.runs replications on up to `opts.jobs` threads and writes, under cfg.out:
 * run_NNN/{training_log.json, stages.csv, robustness.csv, checkpoint.json} and aggregate.csv.
 * Everything that completed is written before the first replication error is rethrown.
 */
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Preset grids: coin-mean, coin-cvar, inventory-mean, inventory-cvar; outer Mean or CVaR(0.6).
ExperimentConfig preset_config(const std::string& preset, bool outer_cvar);
const std::vector<std::string>& preset_names();

/// Writes the CSV and JSON artifacts of `result` under `dir`.
void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result, const std::string& dir,
                      bool timing);

std::string stages_csv(const std::vector<RunRecord>& runs, bool timing);
std::string aggregate_csv(const std::vector<AggregateRow>& rows, bool timing);
std::string robustness_csv(const RunRecord& run, const std::vector<std::string>& labels);
std::string training_log_json(const ExperimentConfig& cfg, const RunRecord& run, bool timing);

constexpr int kCheckpointVersion = 1;

/// JSON checkpoint of a posterior and a policy; doubles round-trip exactly.
void save_checkpoint(const DirichletPosterior& posterior, const Policy& policy, const std::string& path);
/// Throws IoError for unreadable paths and CorruptCheckpoint for malformed contents.
std::pair<DirichletPosterior, Policy> load_checkpoint(const std::string& path);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

} // namespace rsmdp

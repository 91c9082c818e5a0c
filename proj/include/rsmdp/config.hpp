#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rsmdp/driver.hpp"
#include "rsmdp/envs.hpp"

namespace rsmdp {

/// Prior over kernels. Informative priors center on the preset kernel at `perturbation`.
struct PriorSpec {
    enum class Kind { Uniform, Informative };
    Kind kind = Kind::Uniform;
    double perturbation = 0.0; ///< p_head or tilt of the prior-mean kernel
    double mass = 1.0;

    DirichletPosterior build(const EnvSpec& env) const;
};

struct ExperimentConfig {
    EnvSpec env;
    TrainingConfig training; ///< risk specs live here
    PriorSpec prior;
    std::vector<double> grid; ///< deployment values of the preset's perturbation parameter
    std::size_t runs = 50;
    std::string out = "results";
};

/// p_head 0.3..0.9 for coin toss, tilt -5..5 for inventory.
std::vector<double> default_grid(EnvPreset preset);

/// Reads and validates a JSON config; throws IoError, ParseError(line) or SchemaViolation(field).
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// JSON rendering that parse_config_text reads back to an equal config.
std::string config_to_json(const ExperimentConfig& cfg);

} // namespace rsmdp

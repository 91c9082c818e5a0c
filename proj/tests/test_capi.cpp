#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "rsmdp/rsmdp.h"

namespace fs = std::filesystem;

namespace {

const char* kMinimal =
    R"({"env":{"preset":"coin_toss"},"risk":{"inner":{"kind":"mean"},"outer":{"kind":"mean"}},
        "training":{"stages":2,"delta":20,"mc_samples":5},"runs":1})";

std::string take(char* s) {
    std::string out = s ? s : "";
    rsmdp_string_free(s);
    return out;
}

} // namespace

TEST_CASE("version and errors") {
    CHECK(std::string(rsmdp_version()) == "0.1.0");
    rsmdp_config* cfg = nullptr;
    CHECK(rsmdp_config_parse("{", &cfg) == RSMDP_PARSE_ERROR);
    CHECK(cfg == nullptr);
    CHECK(std::string(rsmdp_last_error()).find("line") != std::string::npos);
    CHECK(rsmdp_config_parse(R"({"env":{"preset":"coin_toss"},"risk":{"inner":{"kind":"cvar"}}})", &cfg) ==
          RSMDP_SCHEMA_VIOLATION);
    CHECK(rsmdp_config_load("/nonexistent/config.json", &cfg) == RSMDP_IO_ERROR);
    CHECK(rsmdp_config_parse(kMinimal, nullptr) == RSMDP_INVALID_ARGUMENT);
    CHECK(rsmdp_config_preset("chess", 0, &cfg) != RSMDP_OK);
}

TEST_CASE("environments") {
    rsmdp_env* env = nullptr;
    REQUIRE(rsmdp_env_coin_toss(0.6, &env) == RSMDP_OK);
    CHECK(rsmdp_env_n_states(env) == 11);
    CHECK(rsmdp_env_n_actions(env) == 3);
    CHECK(rsmdp_env_action_label(env, 0) == -1);
    std::vector<int> actions(11);
    std::vector<double> values(11);
    REQUIRE(rsmdp_oracle_solve(env, RSMDP_RISK_MEAN, 1.0, 1e-6, actions.data(), values.data(), 11) == RSMDP_OK);
    CHECK(actions == std::vector<int>{1, 1, 1, 1, 1, 1, 0, -1, -1, -1, -1});
    CHECK(rsmdp_oracle_solve(env, RSMDP_RISK_CVAR, 0.0, 1e-6, actions.data(), values.data(), 11) ==
          RSMDP_DEGENERATE_ALPHA);
    CHECK(rsmdp_oracle_solve(env, RSMDP_RISK_MEAN, 1.0, 1e-6, actions.data(), values.data(), 5) ==
          RSMDP_INVALID_ARGUMENT);
    rsmdp_env_free(env);

    REQUIRE(rsmdp_env_inventory(10, 3, 1, 2, 0, &env) == RSMDP_OK);
    CHECK(rsmdp_env_n_states(env) == 21);
    CHECK(rsmdp_env_state_label(env, 0) == -10);
    rsmdp_env_free(env);
    CHECK(rsmdp_env_coin_toss(1.5, &env) != RSMDP_OK);
}

TEST_CASE("config round trip and solve report") {
    rsmdp_config* cfg = nullptr;
    REQUIRE(rsmdp_config_parse(kMinimal, &cfg) == RSMDP_OK);
    CHECK(rsmdp_config_set_theta(cfg, -1.0) == RSMDP_INVALID_ARGUMENT);
    CHECK(rsmdp_config_set_runs(cfg, 0) == RSMDP_INVALID_ARGUMENT);
    char* json = nullptr;
    REQUIRE(rsmdp_config_to_json(cfg, &json) == RSMDP_OK);
    const std::string text = take(json);
    rsmdp_config* again = nullptr;
    REQUIRE(rsmdp_config_parse(text.c_str(), &again) == RSMDP_OK);
    rsmdp_config_free(again);

    char* report = nullptr;
    REQUIRE(rsmdp_solve_report(cfg, 1e-6, &report) == RSMDP_OK);
    const std::string r = take(report);
    CHECK(r.find("state 6 (label 6): action 0") != std::string::npos);
    CHECK(r.find("state 0 (label 0): action 1") != std::string::npos);
    rsmdp_config_free(cfg);
}

TEST_CASE("experiment and checkpoint") {
    const fs::path dir = fs::temp_directory_path() / "rsmdp_capi_test";
    fs::remove_all(dir);
    rsmdp_config* cfg = nullptr;
    REQUIRE(rsmdp_config_parse(kMinimal, &cfg) == RSMDP_OK);
    REQUIRE(rsmdp_config_set_out(cfg, dir.string().c_str()) == RSMDP_OK);
    REQUIRE(rsmdp_config_set_seed(cfg, 42) == RSMDP_OK);
    rsmdp_run_options opts{1, 0};
    char* summary = nullptr;
    REQUIRE(rsmdp_run_experiment(cfg, &opts, &summary) == RSMDP_OK);
    CHECK_FALSE(take(summary).empty());
    const std::string ck = (dir / "run_001" / "checkpoint.json").string();
    REQUIRE(fs::exists(ck));

    rsmdp_checkpoint* ckpt = nullptr;
    REQUIRE(rsmdp_checkpoint_load(ck.c_str(), &ckpt) == RSMDP_OK);
    CHECK(rsmdp_checkpoint_n_states(ckpt) == 11);
    CHECK(rsmdp_checkpoint_n_actions(ckpt) == 3);
    char* report = nullptr;
    REQUIRE(rsmdp_eval_checkpoint(cfg, ckpt, &report) == RSMDP_OK);
    CHECK(take(report).find("worst") != std::string::npos);
    const std::string copy = (dir / "copy.json").string();
    CHECK(rsmdp_checkpoint_save(ckpt, copy.c_str()) == RSMDP_OK);
    CHECK(rsmdp_checkpoint_save(ckpt, "") == RSMDP_IO_ERROR);
    rsmdp_checkpoint_free(ckpt);

    std::FILE* f = std::fopen((dir / "bad.json").string().c_str(), "w");
    std::fputs("{\"version\": 1}", f);
    std::fclose(f);
    CHECK(rsmdp_checkpoint_load((dir / "bad.json").string().c_str(), &ckpt) == RSMDP_CORRUPT_CHECKPOINT);
    CHECK(rsmdp_checkpoint_load("", &ckpt) == RSMDP_IO_ERROR);
    rsmdp_config_free(cfg);
}

TEST_CASE("bounds report") {
    char* report = nullptr;
    REQUIRE(rsmdp_bounds_report(RSMDP_TEST_DATA "/bounds_example.json", &report) == RSMDP_OK);
    const std::string r = take(report);
    CHECK(r.find("stage_iteration_bound") != std::string::npos);
    CHECK(r.find("109") != std::string::npos);
    CHECK(rsmdp_bounds_report(RSMDP_TEST_DATA "/coin_mean.json", &report) == RSMDP_SCHEMA_VIOLATION);
}

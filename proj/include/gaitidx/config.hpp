#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "gaitidx/dataset.hpp"
#include "gaitidx/training.hpp"

namespace gaitidx {

// Everything a pipeline run needs. All randomness flows from the one root
// seed: the generator uses it directly, the three axis trainings use
// seed+0, seed+1, seed+2.
struct RunConfig {
    uint64_t seed = 42;
    int jobs = 3;  // parallel axis trainings

    std::filesystem::path dataset_dir = "data";
    std::filesystem::path model_dir = "models";
    std::filesystem::path output_dir = "out";

    WindowConfig window;  // T = 12, training stride 6; scoring always uses stride T
    SynthConfig synth;
    TrainConfig train;

    bool score_include_train = false;  // guard rail: scoring the train split is opt-in

    std::optional<double> eval_threshold;       // absent: operate at the EER threshold
    std::filesystem::path eval_dropout_scores;  // optional dropout-run score file for the extra rows
    bool eval_write_roc = false;
};

RunConfig default_run_config();

// Parses a JSON config; unknown keys anywhere are rejected to catch typos.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace gaitidx

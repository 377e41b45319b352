#pragma once

#include "gaitidx/config.hpp"
#include "gaitidx/gait_index.hpp"

namespace gaitidx {

// Pipeline subcommands. Each returns normally on success and throws Error
// (message naming the failing module and input) otherwise.

// Writes the synthetic dataset and manifest into dataset_dir.
void cmd_synth(const RunConfig& cfg);

// Trains the X/Y/Z models on normal training windows; writes three model
// files, per-axis loss curves and the fusion file into model_dir.
void cmd_train(const RunConfig& cfg);

// Scores the test split (plus the train split when enabled) into
// output_dir/segments.csv and output_dir/sequences.csv.
void cmd_score(const RunConfig& cfg);

// Evaluates score files into output_dir/report.json (ROC metrics at both
// granularities for single-axis, non-weighted and weighted indices).
void cmd_eval(const RunConfig& cfg);

// Exports the encoder input-connection weights of each model as CSV.
void cmd_export_weights(const RunConfig& cfg);

// Loads the three axis models plus fusion weights from model_dir.
ModelSet load_model_set(const std::filesystem::path& model_dir);

}  // namespace gaitidx

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gaitidx/skeleton.hpp"

namespace gaitidx {

struct WindowConfig {
    int segment_len = 12;  // T
    int stride = 6;        // training stride; scoring uses stride = T
};

// Windows start at offsets 0, stride, 2*stride, ...; trailing frames that do
// not fill a window are dropped.
std::vector<std::vector<Skeleton17>> window_sequence(const std::vector<Skeleton17>& frames,
                                                     const WindowConfig& cfg);

enum class Label { Normal, Abnormal };
enum class Split { Train, Test };

const char* label_name(Label l);
Label label_from_name(const std::string& name);
const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct SequenceEntry {
    std::filesystem::path path;  // resolved against the manifest directory
    std::string id;              // file stem, used in score files
    int subject = 0;
    Label label = Label::Normal;
    Split split = Split::Train;
};

// Training is unsupervised on normal gait: train = normal sequences of
// train-split subjects; test = all sequences of test-split subjects.
struct DatasetSplits {
    std::vector<SequenceEntry> train;
    std::vector<SequenceEntry> test;
};

DatasetSplits load_manifest(const std::filesystem::path& manifest_path);

// The eight simulated abnormal walking styles: a sole pad of 5/10/15 cm
// under one foot, or a weight attached to one ankle.
inline constexpr std::array<const char*, 8> kAbnormalStyles = {
    "sole_left_5cm",  "sole_left_10cm",  "sole_left_15cm", "sole_right_5cm",
    "sole_right_10cm", "sole_right_15cm", "weight_left",    "weight_right",
};

struct SynthConfig {
    int subjects = 9;
    int train_subjects = 5;
    int frames = 1200;
    double fps = 30.0;
    double cadence_steps_per_s = 1.5;
    double noise_amplitude = 0.004;  // meters, x/y sensor noise
    double depth_noise_scale = 3.0;  // z noise = noise_amplitude * this
    // Scales each style's canonical magnitude; 0 reproduces normal gait.
    std::array<double, 8> asymmetry_levels = {1, 1, 1, 1, 1, 1, 1, 1};
    uint64_t seed = 1;
};

// Writes one normal and eight abnormal sequences per subject in the 75-column
// CSV format, plus manifest.json. Deterministic given the seed. Returns the
// manifest path.
std::filesystem::path generate_synthetic(const SynthConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace gaitidx

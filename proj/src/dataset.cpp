#include "gaitidx/dataset.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "gaitidx/rng.hpp"

namespace gaitidx {

using nlohmann::json;

std::vector<std::vector<Skeleton17>> window_sequence(const std::vector<Skeleton17>& frames,
                                                     const WindowConfig& cfg) {
    require(cfg.segment_len >= 2, "dataset: segment length must be at least 2");
    require(cfg.stride >= 1 && cfg.stride <= cfg.segment_len,
            "dataset: stride must satisfy 1 <= stride <= segment length");
    const int n = static_cast<int>(frames.size());
    require(n >= cfg.segment_len, "dataset: sequence of " + std::to_string(n) +
                                      " frames is shorter than segment length " +
                                      std::to_string(cfg.segment_len));

    const int count = (n - cfg.segment_len) / cfg.stride + 1;
    std::vector<std::vector<Skeleton17>> windows;
    windows.reserve(count);
    for (int w = 0; w < count; ++w) {
        const int off = w * cfg.stride;
        windows.emplace_back(frames.begin() + off, frames.begin() + off + cfg.segment_len);
    }
    return windows;
}

const char* label_name(Label l) { return l == Label::Normal ? "normal" : "abnormal"; }

Label label_from_name(const std::string& name) {
    if (name == "normal") return Label::Normal;
    if (name == "abnormal") return Label::Abnormal;
    fail("dataset: unknown label '" + name + "' (expected normal|abnormal)");
}

const char* split_name(Split s) { return s == Split::Train ? "train" : "test"; }

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "test") return Split::Test;
    fail("dataset: unknown split '" + name + "' (expected train|test)");
}

DatasetSplits load_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) fail("dataset: cannot open manifest " + manifest_path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("dataset: invalid JSON in " + manifest_path.string() + ": " + e.what());
    }
    require(j.contains("sequences") && j["sequences"].is_array(),
            "dataset: manifest " + manifest_path.string() + " lacks a sequences array");

    const auto root = manifest_path.parent_path();
    std::set<int> train_subjects, test_subjects;
    DatasetSplits splits;
    for (const json& e : j["sequences"]) {
        require(e.contains("path") && e.contains("subject") && e.contains("label") && e.contains("split"),
                "dataset: manifest entry missing path/subject/label/split");
        SequenceEntry entry;
        entry.path = root / e.at("path").get<std::string>();
        entry.id = entry.path.stem().string();
        entry.subject = e.at("subject").get<int>();
        entry.label = label_from_name(e.at("label").get<std::string>());
        entry.split = split_from_name(e.at("split").get<std::string>());
        require(std::filesystem::exists(entry.path),
                "dataset: sequence file missing: " + entry.path.string());

        if (entry.split == Split::Train) {
            train_subjects.insert(entry.subject);
            if (entry.label == Label::Normal) splits.train.push_back(std::move(entry));
        } else {
            test_subjects.insert(entry.subject);
            splits.test.push_back(std::move(entry));
        }
    }
    for (int s : train_subjects) {
        require(!test_subjects.count(s),
                "dataset: subject " + std::to_string(s) + " appears in both train and test splits");
    }
    require(!splits.train.empty(), "dataset: empty training set (no normal train-split sequences)");
    return splits;
}

namespace {

// Walking motion is built from functions of an integer frame phase reduced
// modulo the stride period, so a half-period shift of the phase yields
// bit-identical values and the left/right antiphase construction is exact.
struct PhaseFun {
    int period;  // frames per full stride (two steps)

    // sin(2*pi*n/period) evaluated so that value(n + period/2) == -value(n)
    // exactly (the argument is reduced to the first half period).
    double asin_exact(int n) const {
        const int half = period / 2;
        n %= period;
        const int m = n % half;
        const double v = std::sin(2.0 * M_PI * static_cast<double>(m) / static_cast<double>(period));
        return n < half ? v : -v;
    }

    // squared positive half-wave; zero while the foot is on the ground
    double lift(int n) const {
        const double s = asin_exact(n);
        return s > 0.0 ? s * s : 0.0;
    }

    // sin(2*pi*n/half_period), period/2-periodic (the vertical pelvis bob
    // repeats every step)
    double bob(int n) const {
        const int half = period / 2;
        const int m = n % half;
        return std::sin(2.0 * M_PI * static_cast<double>(m) / static_cast<double>(half));
    }
};

struct SubjectShape {
    double height_scale;
    double z0;      // distance from camera, meters
    double x0;      // lateral placement
    int step_frames;
    int phase0;
};

struct StyleEffect {
    double sole_lift_left = 0.0;   // meters added to the left leg's joints
    double sole_lift_right = 0.0;
    double swing_scale_left = 1.0;
    double swing_scale_right = 1.0;
    double lift_scale_left = 1.0;
    double lift_scale_right = 1.0;
};

StyleEffect style_effect(int style, double level) {
    StyleEffect e;
    if (style < 0) return e;  // normal gait
    if (style < 6) {
        const double thickness[3] = {0.05, 0.10, 0.15};
        const double lift = level * thickness[style % 3];
        if (style < 3) {
            e.sole_lift_left = lift;
        } else {
            e.sole_lift_right = lift;
        }
    } else if (style == 6) {
        e.swing_scale_left = 1.0 - 0.28 * level;
        e.lift_scale_left = 1.0 - 0.5 * level;
    } else {
        e.swing_scale_right = 1.0 - 0.28 * level;
        e.lift_scale_right = 1.0 - 0.5 * level;
    }
    return e;
}

// Base joint offsets relative to (x0, 0, z0): {lateral, height, depth}.
// Lateral offsets are for the LEFT side; the right side mirrors them.
struct JointBase {
    double x, y, z;
};

constexpr JointBase kMidline[5] = {
    {0.00, 0.95, 0.00},  // spine base
    {0.00, 1.21, 0.00},  // spine mid
    {0.00, 1.47, 0.00},  // neck
    {0.00, 1.63, 0.00},  // head
    {0.00, 1.37, 0.00},  // spine shoulder
};
constexpr int kMidlineIdx[5] = {kSpineBase, kSpineMid, kNeck, kHead, kSpineShoulder};

constexpr JointBase kArm[6] = {
    {0.19, 1.41, 0.00},   // shoulder
    {0.23, 1.15, 0.02},   // elbow
    {0.25, 0.92, 0.04},   // wrist
    {0.26, 0.84, 0.05},   // hand
    {0.27, 0.76, 0.06},   // hand tip
    {0.23, 0.81, 0.07},   // thumb
};
constexpr int kArmIdxLeft[6] = {kShoulderLeft, kElbowLeft, kWristLeft, kHandLeft, kHandTipLeft, kThumbLeft};
constexpr int kArmIdxRight[6] = {kShoulderRight, kElbowRight, kWristRight, kHandRight, kHandTipRight,
                                 kThumbRight};

constexpr JointBase kLeg[4] = {
    {0.09, 0.89, 0.00},    // hip
    {0.10, 0.49, 0.01},    // knee
    {0.11, 0.09, 0.02},    // ankle
    {0.11, 0.03, -0.10},   // foot (toes toward the camera)
};
constexpr int kLegIdxLeft[4] = {kHipLeft, kKneeLeft, kAnkleLeft, kFootLeft};
constexpr int kLegIdxRight[4] = {kHipRight, kKneeRight, kAnkleRight, kFootRight};

// Per-joint motion coupling factors.
constexpr double kLegSwing[4] = {0.12, 0.55, 1.00, 1.05};
constexpr double kLegLift[4] = {0.05, 0.50, 1.00, 1.10};
constexpr double kLegSway[4] = {1.00, 0.60, 0.25, 0.20};
constexpr double kLegBob[4] = {0.80, 0.40, 0.15, 0.10};
constexpr double kSoleLift[4] = {0.35, 0.75, 1.00, 1.00};
constexpr double kArmSwing[6] = {0.05, 0.50, 1.00, 1.00, 1.05, 1.00};

Skeleton25 synth_frame(int t, const SubjectShape& shape, const StyleEffect& style) {
    const double hs = shape.height_scale;
    const double swing_amp = 0.13 * hs;
    const double lift_amp = 0.055 * hs;
    const double sway_amp = 0.022 * hs;
    const double bob_amp = 0.018 * hs;
    const double arm_amp = 0.05 * hs;

    const PhaseFun ph{2 * shape.step_frames};
    const int n_left = (t + shape.phase0) % ph.period;
    const int n_right = (n_left + shape.step_frames) % ph.period;

    const double sway = sway_amp * ph.asin_exact(n_left);
    const double bob = bob_amp * ph.bob(n_left);

    Skeleton25 out;
    for (int k = 0; k < 5; ++k) {
        out.joints[kMidlineIdx[k]] = {shape.x0 + sway, kMidline[k].y * hs + bob, shape.z0 + kMidline[k].z};
    }
    // arms swing with the opposite-side leg
    for (int k = 0; k < 6; ++k) {
        const double swing_l = arm_amp * kArmSwing[k] * ph.asin_exact(n_right);
        const double swing_r = arm_amp * kArmSwing[k] * ph.asin_exact(n_left);
        out.joints[kArmIdxLeft[k]] = {shape.x0 + sway + kArm[k].x * hs, kArm[k].y * hs + bob,
                                      shape.z0 + kArm[k].z + swing_l};
        out.joints[kArmIdxRight[k]] = {shape.x0 + sway - kArm[k].x * hs, kArm[k].y * hs + bob,
                                       shape.z0 + kArm[k].z + swing_r};
    }
    for (int k = 0; k < 4; ++k) {
        const double swing_l = swing_amp * style.swing_scale_left * kLegSwing[k] * ph.asin_exact(n_left);
        const double swing_r = swing_amp * style.swing_scale_right * kLegSwing[k] * ph.asin_exact(n_right);
        const double lift_l = lift_amp * style.lift_scale_left * kLegLift[k] * ph.lift(n_left) +
                              style.sole_lift_left * kSoleLift[k];
        const double lift_r = lift_amp * style.lift_scale_right * kLegLift[k] * ph.lift(n_right) +
                              style.sole_lift_right * kSoleLift[k];
        out.joints[kLegIdxLeft[k]] = {shape.x0 + kLegSway[k] * sway + kLeg[k].x * hs,
                                      kLeg[k].y * hs + kLegBob[k] * bob + lift_l,
                                      shape.z0 + kLeg[k].z + swing_l};
        out.joints[kLegIdxRight[k]] = {shape.x0 + kLegSway[k] * sway - kLeg[k].x * hs,
                                       kLeg[k].y * hs + kLegBob[k] * bob + lift_r,
                                       shape.z0 + kLeg[k].z + swing_r};
    }
    return out;
}

std::vector<Skeleton25> synth_sequence(const SynthConfig& cfg, const SubjectShape& shape, int style,
                                       Rng& rng) {
    const double level = style < 0 ? 0.0 : cfg.asymmetry_levels[style];
    const StyleEffect effect = style_effect(style, level);
    std::vector<Skeleton25> frames(cfg.frames);
    for (int t = 0; t < cfg.frames; ++t) {
        frames[t] = synth_frame(t, shape, effect);
        if (cfg.noise_amplitude > 0.0) {
            for (Vec3& p : frames[t].joints) {
                p.x += rng.normal(0.0, cfg.noise_amplitude);
                p.y += rng.normal(0.0, cfg.noise_amplitude);
                p.z += rng.normal(0.0, cfg.noise_amplitude * cfg.depth_noise_scale);
            }
        }
    }
    return frames;
}

}  // namespace

std::filesystem::path generate_synthetic(const SynthConfig& cfg, const std::filesystem::path& out_dir) {
    require(cfg.subjects >= 1, "dataset: need at least one subject");
    require(cfg.train_subjects >= 1 && cfg.train_subjects < cfg.subjects,
            "dataset: train_subjects must leave at least one test subject");
    require(cfg.frames >= 2, "dataset: need at least 2 frames per sequence");
    require(cfg.fps > 0 && cfg.cadence_steps_per_s > 0, "dataset: fps and cadence must be positive");
    for (double lvl : cfg.asymmetry_levels) {
        require(lvl >= 0.0 && lvl <= 1.0, "dataset: asymmetry levels must be in [0, 1]");
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail("dataset: cannot create output directory " + out_dir.string());

    const int base_step = std::max(4, static_cast<int>(std::lround(cfg.fps / cfg.cadence_steps_per_s)));

    Rng rng(cfg.seed);
    json sequences = json::array();
    for (int subj = 0; subj < cfg.subjects; ++subj) {
        SubjectShape shape;
        shape.height_scale = rng.uniform(0.93, 1.07);
        shape.z0 = rng.uniform(2.3, 2.7);
        shape.x0 = rng.uniform(-0.05, 0.05);
        shape.step_frames = std::max(4, base_step + static_cast<int>(rng.index(5)) - 2);
        shape.phase0 = static_cast<int>(rng.index(2 * shape.step_frames));

        const char* split = subj < cfg.train_subjects ? "train" : "test";
        char name[64];
        for (int style = -1; style < 8; ++style) {
            if (style < 0) {
                std::snprintf(name, sizeof(name), "s%02d_normal.csv", subj);
            } else {
                std::snprintf(name, sizeof(name), "s%02d_%s.csv", subj, kAbnormalStyles[style]);
            }
            write_sequence_csv(out_dir / name, synth_sequence(cfg, shape, style, rng));
            sequences.push_back({{"path", name},
                                 {"subject", subj},
                                 {"label", style < 0 ? "normal" : "abnormal"},
                                 {"split", split}});
        }
    }

    json manifest;
    manifest["format_version"] = 1;
    manifest["sequences"] = std::move(sequences);
    const auto manifest_path = out_dir / "manifest.json";
    std::ofstream out(manifest_path);
    if (!out) fail("dataset: cannot write manifest " + manifest_path.string());
    out << manifest.dump(1) << '\n';
    if (!out) fail("dataset: write failed for " + manifest_path.string());
    return manifest_path;
}

}  // namespace gaitidx

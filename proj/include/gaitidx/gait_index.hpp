#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gaitidx/autoencoder.hpp"
#include "gaitidx/dataset.hpp"

namespace gaitidx {

// Per-axis fusion weights w_k = (e_X + e_Y + e_Z) / e_k: a model that
// reconstructed its training set poorly contributes less. Invariant under
// common positive rescaling of the three training errors.
struct FusionWeights {
    double wx = 1.0, wy = 1.0, wz = 1.0;

    static FusionWeights unweighted() { return {1.0, 1.0, 1.0}; }
};

FusionWeights fusion_weights(double ex, double ey, double ez);

// Weighted sum of the three per-axis reconstruction errors for one segment.
double segment_index(const FusionWeights& w, double mse_x, double mse_y, double mse_z);

// Mean of per-segment indices over one full sequence.
double sequence_index(const std::vector<double>& per_segment);

struct SegmentScore {
    int segment_idx = 0;
    double mse_x = 0.0, mse_y = 0.0, mse_z = 0.0;
    double fused = 0.0;
};

struct ScoredSequence {
    std::string id;
    Label label = Label::Normal;
    std::vector<SegmentScore> segments;
    double seq_index = 0.0;  // mean fused index
};

// The deployable model set: three axis models plus fusion weights.
struct ModelSet {
    AxisModel x, y, z;
    FusionWeights weights;
};

// Splits one sequence into consecutive non-overlapping segments of
// segment_len frames and scores each through the three axis models.
ScoredSequence score_sequence(const ModelSet& models, const std::string& id, Label label,
                              const std::vector<Skeleton17>& frames, int segment_len);

void save_fusion(const FusionWeights& w, double ex, double ey, double ez,
                 const std::filesystem::path& path);

struct FusionFile {
    double ex = 0.0, ey = 0.0, ez = 0.0;
    FusionWeights weights;
};
FusionFile load_fusion(const std::filesystem::path& path);

// Score CSVs. Per-segment rows:
//   sequence_id,label,segment_idx,mse_x,mse_y,mse_z,fused_index
// Per-sequence summary holds per-sequence means of the same columns.
void write_segment_scores(const std::filesystem::path& path, const std::vector<ScoredSequence>& scored);
void write_sequence_scores(const std::filesystem::path& path, const std::vector<ScoredSequence>& scored);

struct SegmentScoreRow {
    std::string sequence_id;
    Label label = Label::Normal;
    int segment_idx = 0;
    double mse_x = 0.0, mse_y = 0.0, mse_z = 0.0;
    double fused = 0.0;
};
std::vector<SegmentScoreRow> read_segment_scores(const std::filesystem::path& path);

}  // namespace gaitidx

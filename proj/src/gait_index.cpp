#include "gaitidx/gait_index.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gaitidx/num_format.hpp"

namespace gaitidx {

using nlohmann::json;

FusionWeights fusion_weights(double ex, double ey, double ez) {
    for (double e : {ex, ey, ez}) {
        require(std::isfinite(e) && e > 0.0,
                "gait_index: training MSE must be positive and finite (degenerate training run?)");
    }
    const double sum = ex + ey + ez;
    return {sum / ex, sum / ey, sum / ez};
}

double segment_index(const FusionWeights& w, double mse_x, double mse_y, double mse_z) {
    return w.wx * mse_x + w.wy * mse_y + w.wz * mse_z;
}

double sequence_index(const std::vector<double>& per_segment) {
    require(!per_segment.empty(), "gait_index: cannot average an empty segment-index list");
    double sum = 0.0;
    for (double v : per_segment) sum += v;
    return sum / static_cast<double>(per_segment.size());
}

ScoredSequence score_sequence(const ModelSet& models, const std::string& id, Label label,
                              const std::vector<Skeleton17>& frames, int segment_len) {
    // test-time windowing is non-overlapping
    const auto windows = window_sequence(frames, WindowConfig{segment_len, segment_len});

    ScoredSequence out;
    out.id = id;
    out.label = label;
    out.segments.reserve(windows.size());

    std::vector<double> fused;
    fused.reserve(windows.size());
    for (size_t w = 0; w < windows.size(); ++w) {
        const auto segs = make_axis_segments(windows[w]);
        SegmentScore s;
        s.segment_idx = static_cast<int>(w);
        s.mse_x = reconstruct(models.x, segs[0]).mse;
        s.mse_y = reconstruct(models.y, segs[1]).mse;
        s.mse_z = reconstruct(models.z, segs[2]).mse;
        s.fused = segment_index(models.weights, s.mse_x, s.mse_y, s.mse_z);
        fused.push_back(s.fused);
        out.segments.push_back(s);
    }
    out.seq_index = sequence_index(fused);
    return out;
}

void save_fusion(const FusionWeights& w, double ex, double ey, double ez,
                 const std::filesystem::path& path) {
    json j;
    j["format_version"] = 1;
    j["e_x"] = ex;
    j["e_y"] = ey;
    j["e_z"] = ez;
    j["w_x"] = w.wx;
    j["w_y"] = w.wy;
    j["w_z"] = w.wz;
    std::ofstream out(path);
    if (!out) fail("gait_index: cannot write fusion file " + path.string());
    out << j.dump(1) << '\n';
    if (!out) fail("gait_index: write failed for " + path.string());
}

FusionFile load_fusion(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("gait_index: cannot open fusion file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("gait_index: invalid JSON in " + path.string() + ": " + e.what());
    }
    require(j.value("format_version", -1) == 1,
            "gait_index: unsupported fusion format_version in " + path.string());
    FusionFile f;
    f.ex = j.at("e_x").get<double>();
    f.ey = j.at("e_y").get<double>();
    f.ez = j.at("e_z").get<double>();
    f.weights.wx = j.at("w_x").get<double>();
    f.weights.wy = j.at("w_y").get<double>();
    f.weights.wz = j.at("w_z").get<double>();
    return f;
}

void write_segment_scores(const std::filesystem::path& path, const std::vector<ScoredSequence>& scored) {
    std::ofstream out(path);
    if (!out) fail("gait_index: cannot write score file " + path.string());
    out << "sequence_id,label,segment_idx,mse_x,mse_y,mse_z,fused_index\n";
    for (const ScoredSequence& seq : scored) {
        for (const SegmentScore& s : seq.segments) {
            out << seq.id << ',' << label_name(seq.label) << ',' << s.segment_idx << ','
                << format_double(s.mse_x) << ',' << format_double(s.mse_y) << ','
                << format_double(s.mse_z) << ',' << format_double(s.fused) << '\n';
        }
    }
    if (!out) fail("gait_index: write failed for " + path.string());
}

void write_sequence_scores(const std::filesystem::path& path, const std::vector<ScoredSequence>& scored) {
    std::ofstream out(path);
    if (!out) fail("gait_index: cannot write score file " + path.string());
    out << "sequence_id,label,n_segments,mean_mse_x,mean_mse_y,mean_mse_z,mean_fused_index\n";
    for (const ScoredSequence& seq : scored) {
        double mx = 0, my = 0, mz = 0;
        for (const SegmentScore& s : seq.segments) {
            mx += s.mse_x;
            my += s.mse_y;
            mz += s.mse_z;
        }
        const double n = static_cast<double>(seq.segments.size());
        out << seq.id << ',' << label_name(seq.label) << ',' << seq.segments.size() << ','
            << format_double(mx / n) << ',' << format_double(my / n) << ',' << format_double(mz / n)
            << ',' << format_double(seq.seq_index) << '\n';
    }
    if (!out) fail("gait_index: write failed for " + path.string());
}

std::vector<SegmentScoreRow> read_segment_scores(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("gait_index: cannot open score file " + path.string());
    std::vector<SegmentScoreRow> rows;
    std::string line;
    bool first = true;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;  // header
        }
        const auto f = split_csv(line);
        const std::string where = "gait_index: " + path.string() + " line " + std::to_string(lineno);
        require(f.size() == 7, where + ": expected 7 columns");
        SegmentScoreRow r;
        r.sequence_id = std::string(f[0]);
        r.label = label_from_name(std::string(f[1]));
        r.segment_idx = static_cast<int>(parse_long(f[2], where));
        r.mse_x = parse_double(f[3], where);
        r.mse_y = parse_double(f[4], where);
        r.mse_z = parse_double(f[5], where);
        r.fused = parse_double(f[6], where);
        rows.push_back(std::move(r));
    }
    require(!rows.empty(), "gait_index: score file " + path.string() + " has no data rows");
    return rows;
}

}  // namespace gaitidx

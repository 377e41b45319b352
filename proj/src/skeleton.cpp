#include "gaitidx/skeleton.hpp"

#include <cmath>
#include <fstream>

#include "gaitidx/num_format.hpp"

namespace gaitidx {

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::X: return "X";
        case Axis::Y: return "Y";
        case Axis::Z: return "Z";
    }
    fail("skeleton: invalid axis value");
}

Axis axis_from_name(const std::string& name) {
    if (name == "X" || name == "x") return Axis::X;
    if (name == "Y" || name == "y") return Axis::Y;
    if (name == "Z" || name == "z") return Axis::Z;
    fail("skeleton: unknown axis name '" + name + "'");
}

Skeleton17 select_joints(const Skeleton25& frame) {
    Skeleton17 out;
    for (int k = 0; k < kJointCount17; ++k) {
        out.joints[k] = frame.joints[kSelectedJoints[k]];
    }
    return out;
}

RawAxes split_axes(const std::vector<Skeleton17>& seq) {
    require(!seq.empty(), "skeleton: cannot split an empty sequence");
    const int T = static_cast<int>(seq.size());
    RawAxes axes;
    axes.x.resize(T, kJointCount17);
    axes.y.resize(T, kJointCount17);
    axes.z.resize(T, kJointCount17);
    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < kJointCount17; ++j) {
            const Vec3& p = seq[t].joints[j];
            axes.x(t, j) = p.x;
            axes.y(t, j) = p.y;
            axes.z(t, j) = p.z;
        }
    }
    return axes;
}

Eigen::MatrixXd normalize_axis(const Eigen::MatrixXd& raw) {
    require(raw.size() > 0, "skeleton: cannot normalize an empty axis matrix");
    require(raw.allFinite(), "skeleton: non-finite value in axis matrix");
    const double lo = raw.minCoeff();
    const double hi = raw.maxCoeff();
    if (hi == lo) {
        return Eigen::MatrixXd::Constant(raw.rows(), raw.cols(), 0.5);
    }
    return (raw.array() - lo) / (hi - lo);
}

std::array<AxisSegment, 3> make_axis_segments(const std::vector<Skeleton17>& seq) {
    RawAxes raw = split_axes(seq);
    return {AxisSegment{Axis::X, normalize_axis(raw.x)},
            AxisSegment{Axis::Y, normalize_axis(raw.y)},
            AxisSegment{Axis::Z, normalize_axis(raw.z)}};
}

std::vector<Skeleton25> read_sequence_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("skeleton: cannot open sequence file " + path.string());

    std::vector<Skeleton25> frames;
    std::string line;
    int frame_idx = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        const auto fields = split_csv(line);
        const std::string where = "skeleton: " + path.string() + " frame " + std::to_string(frame_idx);
        if (fields.size() != 3 * kJointCount25) {
            fail(where + ": expected 75 columns, got " + std::to_string(fields.size()));
        }
        Skeleton25 frame;
        for (int j = 0; j < kJointCount25; ++j) {
            Vec3& p = frame.joints[j];
            p.x = parse_double(fields[3 * j + 0], where);
            p.y = parse_double(fields[3 * j + 1], where);
            p.z = parse_double(fields[3 * j + 2], where);
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
                fail(where + ": non-finite coordinate at joint " + std::to_string(j));
            }
        }
        frames.push_back(frame);
        ++frame_idx;
    }
    if (frames.empty()) fail("skeleton: " + path.string() + " contains no frames");
    return frames;
}

void write_sequence_csv(const std::filesystem::path& path, const std::vector<Skeleton25>& frames) {
    std::ofstream out(path);
    if (!out) fail("skeleton: cannot write sequence file " + path.string());
    out << "# gait sequence, 75 columns: joint0_x,joint0_y,joint0_z,...,joint24_z\n";
    std::string row;
    for (const Skeleton25& frame : frames) {
        row.clear();
        for (int j = 0; j < kJointCount25; ++j) {
            const Vec3& p = frame.joints[j];
            if (j > 0) row += ',';
            row += format_double(p.x);
            row += ',';
            row += format_double(p.y);
            row += ',';
            row += format_double(p.z);
        }
        row += '\n';
        out << row;
    }
    if (!out) fail("skeleton: write failed for " + path.string());
}

}  // namespace gaitidx

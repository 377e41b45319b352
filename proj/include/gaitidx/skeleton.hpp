#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gaitidx/common.hpp"

namespace gaitidx {

// Kinect-v2 joint order: 0 spine base, 1 spine mid, 2 neck, 3 head,
// 4-7 left arm (shoulder, elbow, wrist, hand), 8-11 right arm,
// 12-15 left leg (hip, knee, ankle, foot), 16-19 right leg,
// 20 spine shoulder, 21 left hand tip, 22 left thumb,
// 23 right hand tip, 24 right thumb.
inline constexpr int kJointCount25 = 25;
inline constexpr int kJointCount17 = 17;

enum Kinect2Joint : int {
    kSpineBase = 0,
    kSpineMid = 1,
    kNeck = 2,
    kHead = 3,
    kShoulderLeft = 4,
    kElbowLeft = 5,
    kWristLeft = 6,
    kHandLeft = 7,
    kShoulderRight = 8,
    kElbowRight = 9,
    kWristRight = 10,
    kHandRight = 11,
    kHipLeft = 12,
    kKneeLeft = 13,
    kAnkleLeft = 14,
    kFootLeft = 15,
    kHipRight = 16,
    kKneeRight = 17,
    kAnkleRight = 18,
    kFootRight = 19,
    kSpineShoulder = 20,
    kHandTipLeft = 21,
    kThumbLeft = 22,
    kHandTipRight = 23,
    kThumbRight = 24,
};

// Joints dropped before modeling: spine mid, neck, both wrists, both hand
// tips and both thumbs. The 17 survivors keep their relative order.
inline constexpr std::array<int, 8> kDiscardedJoints = {1, 2, 6, 10, 21, 22, 23, 24};
inline constexpr std::array<int, kJointCount17> kSelectedJoints = {0,  3,  4,  5,  7,  8,  9,  11, 12,
                                                                   13, 14, 15, 16, 17, 18, 19, 20};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct Skeleton25 {
    std::array<Vec3, kJointCount25> joints;
};

struct Skeleton17 {
    std::array<Vec3, kJointCount17> joints;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

const char* axis_name(Axis a);
Axis axis_from_name(const std::string& name);

// One model input window: values(t, j) normalized into [0, 1].
struct AxisSegment {
    Axis axis = Axis::X;
    Eigen::MatrixXd values;  // T x 17

    int frames() const { return static_cast<int>(values.rows()); }
};

// Raw per-axis coordinate matrices, meters, before normalization.
struct RawAxes {
    Eigen::MatrixXd x, y, z;  // T x 17 each
};

Skeleton17 select_joints(const Skeleton25& frame);

RawAxes split_axes(const std::vector<Skeleton17>& seq);

// Min-max over all T x 17 entries of one axis matrix; a degenerate range
// (max == min) maps every entry to 0.5.
Eigen::MatrixXd normalize_axis(const Eigen::MatrixXd& raw);

// split_axes + normalize_axis for the three axes of one window.
std::array<AxisSegment, 3> make_axis_segments(const std::vector<Skeleton17>& seq);

// Sequence CSV: one row per frame, 75 columns ordered joint0_x, joint0_y,
// joint0_z, ..., joint24_z; lines starting with '#' are comments.
std::vector<Skeleton25> read_sequence_csv(const std::filesystem::path& path);
void write_sequence_csv(const std::filesystem::path& path, const std::vector<Skeleton25>& frames);

}  // namespace gaitidx

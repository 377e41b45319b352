#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gaitidx/common.hpp"

namespace gaitidx {

// A scored sample: (index value, label) with label 1 = positive (abnormal,
// expected to score higher) and 0 = negative (normal).
using ScoredSample = std::pair<double, int>;

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

struct RocResult {
    std::vector<RocPoint> points;  // FPR nondecreasing
    double auc = 0.0;
    double eer = 0.0;            // interpolated between bracketing points
    double eer_threshold = 0.0;  // swept threshold closest to the crossing
};

// Sweeps all distinct score thresholds (positive = index >= threshold),
// grouping tied scores into one step; AUC by the trapezoid rule, which
// equals P(score+ > score-) + 0.5 P(score+ = score-).
RocResult roc(const std::vector<ScoredSample>& scores);

struct ConfusionMetrics {
    double sensitivity = 0.0;
    double specificity = 0.0;
    double precision = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double threshold = 0.0;
    // names of metrics whose denominator was zero (value reported as 0)
    std::vector<std::string> undefined;
};

ConfusionMetrics confusion_at(const std::vector<ScoredSample>& scores, double threshold);

}  // namespace gaitidx

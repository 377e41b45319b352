#include "gaitidx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaitidx {

RocResult roc(const std::vector<ScoredSample>& scores) {
    long n_pos = 0, n_neg = 0;
    for (const auto& [v, label] : scores) {
        require(std::isfinite(v), "metrics: non-finite score");
        require(label == 0 || label == 1, "metrics: labels must be 0 or 1");
        (label ? n_pos : n_neg) += 1;
    }
    require(n_pos > 0 && n_neg > 0, "metrics: ROC needs at least one positive and one negative sample");

    std::vector<ScoredSample> sorted = scores;
    std::sort(sorted.begin(), sorted.end(),
              [](const ScoredSample& a, const ScoredSample& b) { return a.first > b.first; });

    RocResult res;
    res.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    long tp = 0, fp = 0;
    size_t k = 0;
    while (k < sorted.size()) {
        const double v = sorted[k].first;
        while (k < sorted.size() && sorted[k].first == v) {
            (sorted[k].second ? tp : fp) += 1;
            ++k;
        }
        res.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                              static_cast<double>(tp) / static_cast<double>(n_pos), v});
    }

    double auc = 0.0;
    for (size_t i = 1; i < res.points.size(); ++i) {
        auc += (res.points[i].fpr - res.points[i - 1].fpr) *
               (res.points[i].tpr + res.points[i - 1].tpr) * 0.5;
    }
    res.auc = auc;

    // EER: where FPR = FNR = 1 - TPR. g = fpr + tpr - 1 runs from -1 at
    // (0,0) to +1 at (1,1); interpolate linearly inside the bracketing
    // segment. The reported threshold is the swept one closest to the
    // crossing (finite test sets rarely hit the crossing exactly).
    double eer = 0.0;
    for (size_t i = 1; i < res.points.size(); ++i) {
        const RocPoint& a = res.points[i - 1];
        const RocPoint& b = res.points[i];
        const double ga = a.fpr + a.tpr - 1.0;
        const double gb = b.fpr + b.tpr - 1.0;
        if (gb < 0.0) continue;
        double s = 0.0;
        const double denom = (b.fpr - a.fpr) + (b.tpr - a.tpr);
        if (denom > 0.0) s = -ga / denom;
        eer = a.fpr + s * (b.fpr - a.fpr);
        break;
    }
    res.eer = eer;

    double best = std::numeric_limits<double>::infinity();
    for (const RocPoint& p : res.points) {
        const double gap = std::abs(p.fpr + p.tpr - 1.0);
        if (gap < best && std::isfinite(p.threshold)) {
            best = gap;
            res.eer_threshold = p.threshold;
        }
    }
    return res;
}

ConfusionMetrics confusion_at(const std::vector<ScoredSample>& scores, double threshold) {
    require(!scores.empty(), "metrics: empty score list");
    long tp = 0, fp = 0, tn = 0, fn = 0;
    for (const auto& [v, label] : scores) {
        const bool predicted_positive = v >= threshold;
        if (label == 1) {
            (predicted_positive ? tp : fn) += 1;
        } else {
            (predicted_positive ? fp : tn) += 1;
        }
    }

    ConfusionMetrics m;
    m.threshold = threshold;
    auto ratio = [&m](long num, long den, const char* name) {
        if (den == 0) {
            m.undefined.push_back(name);
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.sensitivity = ratio(tp, tp + fn, "sensitivity");
    m.specificity = ratio(tn, tn + fp, "specificity");
    m.precision = ratio(tp, tp + fp, "precision");
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(scores.size());
    if (m.precision + m.sensitivity > 0.0) {
        m.f1 = 2.0 * m.precision * m.sensitivity / (m.precision + m.sensitivity);
    } else {
        m.undefined.push_back("f1");
        m.f1 = 0.0;
    }
    return m;
}

}  // namespace gaitidx

#pragma once

// Test-side reference implementations, kept independent of the library code
// paths they check.

#include <cmath>
#include <utility>
#include <vector>

namespace oracle {

// Straight-line scalar transcription of the six peephole LSTM equations.
struct ScalarLstm {
    double w_ix, w_fx, w_cx, w_ox;
    double w_ih, w_fh, w_ch, w_oh;
    double p_i, p_f, p_o;
    double b_i, b_f, b_c, b_o;
};

struct ScalarStep {
    double i, f, g, o, c, h;
};

inline ScalarStep scalar_lstm_step(const ScalarLstm& p, double c_prev, double h_prev, double x) {
    auto sig = [](double a) { return 1.0 / (1.0 + std::exp(-a)); };
    ScalarStep s;
    s.i = sig(p.w_ix * x + p.w_ih * h_prev + p.p_i * c_prev + p.b_i);
    s.f = sig(p.w_fx * x + p.w_fh * h_prev + p.p_f * c_prev + p.b_f);
    s.g = std::tanh(p.w_cx * x + p.w_ch * h_prev + p.b_c);
    s.c = s.f * c_prev + s.i * s.g;
    s.o = sig(p.w_ox * x + p.w_oh * h_prev + p.p_o * s.c + p.b_o);
    s.h = s.o * std::tanh(s.c);
    return s;
}

// Deliberately wrong variant whose output-gate peephole reads c_{t-1}; used
// to show the gate-ordering test case actually discriminates.
inline ScalarStep scalar_lstm_step_stale_output_peephole(const ScalarLstm& p, double c_prev,
                                                         double h_prev, double x) {
    auto sig = [](double a) { return 1.0 / (1.0 + std::exp(-a)); };
    ScalarStep s;
    s.i = sig(p.w_ix * x + p.w_ih * h_prev + p.p_i * c_prev + p.b_i);
    s.f = sig(p.w_fx * x + p.w_fh * h_prev + p.p_f * c_prev + p.b_f);
    s.g = std::tanh(p.w_cx * x + p.w_ch * h_prev + p.b_c);
    s.c = s.f * c_prev + s.i * s.g;
    s.o = sig(p.w_ox * x + p.w_oh * h_prev + p.p_o * c_prev + p.b_o);
    s.h = s.o * std::tanh(s.c);
    return s;
}

// Brute-force AUC: wins plus half credit for ties over all (positive,
// negative) score pairs.
inline double pairwise_auc(const std::vector<std::pair<double, int>>& scores) {
    double wins = 0.0;
    long pairs = 0;
    for (const auto& [vp, lp] : scores) {
        if (!lp) continue;
        for (const auto& [vn, ln] : scores) {
            if (ln) continue;
            ++pairs;
            if (vp > vn) {
                wins += 1.0;
            } else if (vp == vn) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

// Relative error with an absolute floor so that near-zero pairs compare
// cleanly (central differences bottom out around 1e-11 at eps = 1e-5).
inline double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale < 1e-8) return std::abs(a - b) > 1e-10 ? std::abs(a - b) / 1e-8 : 0.0;
    return std::abs(a - b) / scale;
}

}  // namespace oracle

#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "gaitidx/autoencoder.hpp"
#include "gaitidx/rng.hpp"

namespace gaitidx {

struct TrainConfig {
    int epochs = 100;
    double learning_rate = 1e-3;
    int batch_size = 32;
    int hidden_dim = 256;
    double dropout_keep = 1.0;  // retention probability on the encoder input; 1.0 disables, 0.5 when enabled
    uint64_t seed = 42;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double grad_clip = 0.0;  // max global gradient norm; 0 disables
    bool teacher_forcing = false;
};

struct TrainReport {
    std::vector<double> epoch_mse;  // mean training MSE per epoch
    double final_train_mse = 0.0;   // e_k: MSE over the training set, dropout off
    double wall_seconds = 0.0;
    TrainConfig config;
};

// Fresh model with the documented initialization: weight matrices uniform
// in (-s, s) with s = 1/sqrt(hidden_dim), forget bias 1.0, peephole vectors
// and remaining biases zero. Drawn from Rng(cfg.seed).
AxisModel make_initial_model(Axis axis, int input_dim, const TrainConfig& cfg);

// Trains one per-axis autoencoder on normal-gait segments by minimizing
// reconstruction MSE with backpropagation through time.
std::pair<AxisModel, TrainReport> train_axis_model(const std::vector<AxisSegment>& segments,
                                                   const TrainConfig& cfg);

// Inverted dropout on the encoder input connection: each component is
// zeroed with probability 1-keep and survivors are scaled by 1/keep, so
// inference needs no rescaling. keep == 1 is the identity.
Eigen::MatrixXd apply_input_dropout(const Eigen::MatrixXd& x, double keep, Rng& rng);

// Gradients of one full autoencoder pass, same shapes as the model tensors.
struct ModelGrads {
    LstmParams encoder;
    LstmParams decoder;
    Eigen::MatrixXd out_w;
    Eigen::VectorXd out_b;

    static ModelGrads zeros(const AxisModel& m);
};

template <class F>
void visit_params(ModelGrads& g, F&& f) {
    visit_params(g.encoder, [&](const char* n, auto& t) { f((std::string("encoder.") + n).c_str(), t); });
    visit_params(g.decoder, [&](const char* n, auto& t) { f((std::string("decoder.") + n).c_str(), t); });
    f("out_proj.w", g.out_w);
    f("out_proj.b", g.out_b);
}

// One batch through encoder, latent handoff, decoder and output projection,
// then exact reverse-mode gradients of the batch-mean MSE. inputs[t] is the
// (possibly dropout-masked) encoder input for frame t, targets[t] the clean
// frame; both input_dim x B. Gradients flow through the self-conditioned
// decoder inputs unless teacher forcing is on.
struct AutoencoderPass {
    double loss = 0.0;
    ModelGrads grads;
};
AutoencoderPass autoencoder_forward_backward(const AxisModel& model,
                                             const std::vector<Eigen::MatrixXd>& inputs,
                                             const std::vector<Eigen::MatrixXd>& targets,
                                             bool teacher_forcing);

// Batch-mean reconstruction MSE without gradients (dropout never applies).
double batch_loss(const AxisModel& model, const std::vector<Eigen::MatrixXd>& xs,
                  bool teacher_forcing = false);

void write_train_report_csv(const std::filesystem::path& path, const TrainReport& report);

// Adam over a fixed set of tensors; moment buffers are kept internally in
// visitation order.
class AdamOptimizer {
public:
    AdamOptimizer(double lr, double beta1, double beta2, double epsilon)
        : lr_(lr), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

    void step(AxisModel& model, ModelGrads& grads);

private:
    double lr_, beta1_, beta2_, epsilon_;
    long t_ = 0;
    std::vector<Eigen::ArrayXd> m_, v_;
};

}  // namespace gaitidx

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gaitidx/lstm.hpp"
#include "gaitidx/skeleton.hpp"

namespace gaitidx {

// Affine map from decoder output h_t to a reconstructed frame.
struct OutputProjection {
    Eigen::MatrixXd w;  // input_dim x hidden_dim
    Eigen::VectorXd b;  // input_dim
};

// One per-axis sequence autoencoder. Encoder and decoder share the
// architecture but have independent parameter values; train_mse is the
// model's MSE over its training set (the e_k used for fusion weights).
struct AxisModel {
    Axis axis = Axis::X;
    LstmParams encoder;
    LstmParams decoder;
    OutputProjection out_proj;
    double train_mse = 0.0;

    int input_dim() const { return encoder.input_dim; }
    int hidden_dim() const { return encoder.hidden_dim; }

    static AxisModel zeros(Axis axis, int input_dim, int hidden_dim);
};

template <class F>
void visit_params(AxisModel& m, F&& f) {
    visit_params(m.encoder, [&](const char* n, auto& t) { f((std::string("encoder.") + n).c_str(), t); });
    visit_params(m.decoder, [&](const char* n, auto& t) { f((std::string("decoder.") + n).c_str(), t); });
    f("out_proj.w", m.out_proj.w);
    f("out_proj.b", m.out_proj.b);
}

struct Reconstruction {
    Eigen::MatrixXd ys;  // T x 17, forward time order
    double mse = 0.0;
};

// Runs the encoder over x_1..x_T from the zero state; the latent
// representation is the final (c_T, h_T).
LstmState encode(const AxisModel& model, const AxisSegment& seg);

// Unrolls the decoder from the latent state. The first step consumes a zero
// vector; every later step consumes the previously emitted frame. Frames
// are emitted in reverse time order and re-reversed before returning.
Eigen::MatrixXd decode(const AxisModel& model, const LstmState& latent, int T);

Reconstruction reconstruct(const AxisModel& model, const AxisSegment& seg);

double mse_of(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// Batched pieces shared with the trainer. xs[t] is input_dim x B.
LstmState encode_batch(const AxisModel& model, const std::vector<Eigen::MatrixXd>& xs,
                       std::vector<GateTrace>* traces = nullptr);

struct DecodeBatch {
    std::vector<Eigen::MatrixXd> emitted;  // emission order: frames T, T-1, ..., 1
    std::vector<GateTrace> traces;
};

// forced_inputs, when given, replaces the self-conditioned inputs of steps
// 2..T (teacher forcing); forced_inputs[s-1] feeds step s.
DecodeBatch decode_batch(const AxisModel& model, const LstmState& latent, int T,
                         const std::vector<Eigen::MatrixXd>* forced_inputs = nullptr);

// Model file: JSON with every parameter tensor flattened row-major.
void save_model(const AxisModel& model, const std::filesystem::path& path);
AxisModel load_model(const std::filesystem::path& path);

}  // namespace gaitidx

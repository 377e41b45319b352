#include "gaitidx/training.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "gaitidx/num_format.hpp"

namespace gaitidx {

ModelGrads ModelGrads::zeros(const AxisModel& m) {
    ModelGrads g;
    g.encoder = LstmParams::zeros(m.input_dim(), m.hidden_dim());
    g.decoder = LstmParams::zeros(m.input_dim(), m.hidden_dim());
    g.out_w = Eigen::MatrixXd::Zero(m.input_dim(), m.hidden_dim());
    g.out_b = Eigen::VectorXd::Zero(m.input_dim());
    return g;
}

Eigen::MatrixXd apply_input_dropout(const Eigen::MatrixXd& x, double keep, Rng& rng) {
    require(keep > 0.0 && keep <= 1.0, "training: dropout keep probability must be in (0, 1]");
    if (keep == 1.0) return x;
    Eigen::MatrixXd out(x.rows(), x.cols());
    const double scale = 1.0 / keep;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            out(r, c) = rng.bernoulli(keep) ? x(r, c) * scale : 0.0;
        }
    }
    return out;
}

AutoencoderPass autoencoder_forward_backward(const AxisModel& model,
                                             const std::vector<Eigen::MatrixXd>& inputs,
                                             const std::vector<Eigen::MatrixXd>& targets,
                                             bool teacher_forcing) {
    require(!inputs.empty() && inputs.size() == targets.size(),
            "training: inputs and targets must be non-empty and aligned");
    const int T = static_cast<int>(inputs.size());
    const int B = static_cast<int>(inputs.front().cols());
    const int D = model.input_dim();

    // forward
    std::vector<GateTrace> enc_traces;
    const LstmState latent = encode_batch(model, inputs, &enc_traces);

    std::vector<Eigen::MatrixXd> forced;
    if (teacher_forcing) {
        // step s consumes the clean frame whose reconstruction step s-1 emitted
        forced.reserve(T - 1);
        for (int s = 1; s < T; ++s) forced.push_back(targets[T - s]);
    }
    DecodeBatch dec = decode_batch(model, latent, T, teacher_forcing ? &forced : nullptr);

    AutoencoderPass pass;
    pass.grads = ModelGrads::zeros(model);

    const double denom = static_cast<double>(T) * D * B;
    std::vector<Eigen::MatrixXd> diffs(T);
    double sse = 0.0;
    for (int s = 0; s < T; ++s) {
        diffs[s] = dec.emitted[s] - targets[T - 1 - s];
        sse += diffs[s].squaredNorm();
    }
    pass.loss = sse / denom;

    // backward through the decoder; pending_dx carries the gradient that a
    // step's input places on the previously emitted frame
    LstmState dstate = LstmState::zeros(model.hidden_dim(), B);
    Eigen::MatrixXd pending_dx;
    for (int s = T; s-- > 0;) {
        Eigen::MatrixXd dy = (2.0 / denom) * diffs[s];
        if (!teacher_forcing && s + 1 < T) dy += pending_dx;

        pass.grads.out_w.noalias() += dy * dec.traces[s].h.transpose();
        pass.grads.out_b += dy.rowwise().sum();

        Eigen::MatrixXd dh = model.out_proj.w.transpose() * dy;
        dh += dstate.h;

        const Eigen::MatrixXd& c_prev = (s == 0) ? latent.c : dec.traces[s - 1].c;
        const Eigen::MatrixXd& h_prev = (s == 0) ? latent.h : dec.traces[s - 1].h;
        LstmStepGrads sg =
            lstm_step_backward(model.decoder, dec.traces[s], c_prev, h_prev, dh, dstate.c, pass.grads.decoder);
        pending_dx = std::move(sg.dx);
        dstate.c = std::move(sg.dc_prev);
        dstate.h = std::move(sg.dh_prev);
    }

    // latent handoff: the decoder's initial-state gradient lands on the
    // encoder's final (c_T, h_T)
    std::vector<Eigen::MatrixXd> zero_dh(T, Eigen::MatrixXd::Zero(model.hidden_dim(), B));
    LstmBackwardResult enc_back = lstm_backward(model.encoder, enc_traces,
                                                LstmState::zeros(model.hidden_dim(), B), zero_dh, dstate);
    pass.grads.encoder = std::move(enc_back.param_grads);
    return pass;
}

double batch_loss(const AxisModel& model, const std::vector<Eigen::MatrixXd>& xs,
                  bool teacher_forcing) {
    const int T = static_cast<int>(xs.size());
    const LstmState latent = encode_batch(model, xs);
    std::vector<Eigen::MatrixXd> forced;
    if (teacher_forcing) {
        forced.reserve(T - 1);
        for (int s = 1; s < T; ++s) forced.push_back(xs[T - s]);
    }
    DecodeBatch dec = decode_batch(model, latent, T, teacher_forcing ? &forced : nullptr);
    double sse = 0.0;
    for (int s = 0; s < T; ++s) {
        sse += (dec.emitted[s] - xs[T - 1 - s]).squaredNorm();
    }
    return sse / (static_cast<double>(T) * model.input_dim() * static_cast<double>(xs.front().cols()));
}

void AdamOptimizer::step(AxisModel& model, ModelGrads& grads) {
    std::vector<Eigen::Map<Eigen::ArrayXd>> params, gs;
    visit_params(model, [&](const char*, auto& t) { params.emplace_back(t.data(), t.size()); });
    visit_params(grads, [&](const char*, auto& t) { gs.emplace_back(t.data(), t.size()); });
    require(params.size() == gs.size(), "training: optimizer tensor count mismatch");

    if (m_.empty()) {
        for (const auto& p : params) {
            m_.emplace_back(Eigen::ArrayXd::Zero(p.size()));
            v_.emplace_back(Eigen::ArrayXd::Zero(p.size()));
        }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (size_t k = 0; k < params.size(); ++k) {
        m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * gs[k];
        v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * gs[k].square();
        params[k] -= lr_ * (m_[k] / bc1) / ((v_[k] / bc2).sqrt() + epsilon_);
    }
}

namespace {

void init_model(AxisModel& model, Rng& rng) {
    const double s = 1.0 / std::sqrt(static_cast<double>(model.hidden_dim()));
    auto init_lstm = [&](LstmParams& p) {
        visit_params(p, [&](const char* name, auto& t) {
            std::string n(name);
            if (n[0] == 'w') {
                for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-s, s);
            } else if (n == "b_f") {
                t.setConstant(1.0);  // eases early gradient flow
            } else {
                t.setZero();  // peepholes and remaining biases
            }
        });
    };
    init_lstm(model.encoder);
    init_lstm(model.decoder);
    for (Eigen::Index i = 0; i < model.out_proj.w.size(); ++i) {
        model.out_proj.w.data()[i] = rng.uniform(-s, s);
    }
    model.out_proj.b.setZero();
}

double global_grad_norm(ModelGrads& g) {
    double sq = 0.0;
    visit_params(g, [&](const char*, auto& t) { sq += t.squaredNorm(); });
    return std::sqrt(sq);
}

void scale_grads(ModelGrads& g, double factor) {
    visit_params(g, [&](const char*, auto& t) { t *= factor; });
}

// Gathers frame t of the listed segments into an input_dim x B matrix.
Eigen::MatrixXd gather_frame(const std::vector<AxisSegment>& segments, const std::vector<size_t>& idx,
                             size_t begin, size_t end, int t) {
    const int D = static_cast<int>(segments.front().values.cols());
    Eigen::MatrixXd out(D, end - begin);
    for (size_t b = begin; b < end; ++b) {
        out.col(b - begin) = segments[idx[b]].values.row(t).transpose();
    }
    return out;
}

}  // namespace

AxisModel make_initial_model(Axis axis, int input_dim, const TrainConfig& cfg) {
    require(input_dim > 0 && cfg.hidden_dim > 0, "training: dimensions must be positive");
    Rng rng(cfg.seed);
    AxisModel model = AxisModel::zeros(axis, input_dim, cfg.hidden_dim);
    init_model(model, rng);
    return model;
}

std::pair<AxisModel, TrainReport> train_axis_model(const std::vector<AxisSegment>& segments,
                                                   const TrainConfig& cfg) {
    require(!segments.empty(), "training: empty segment list");
    require(cfg.epochs > 0 && cfg.batch_size > 0 && cfg.learning_rate > 0 && cfg.hidden_dim > 0,
            "training: epochs, batch size, learning rate and hidden size must be positive");
    require(cfg.dropout_keep > 0.0 && cfg.dropout_keep <= 1.0,
            "training: dropout keep probability must be in (0, 1]");

    const Axis axis = segments.front().axis;
    const int T = segments.front().frames();
    const int D = static_cast<int>(segments.front().values.cols());
    require(T >= 2, "training: segments must have at least 2 frames");
    for (size_t k = 0; k < segments.size(); ++k) {
        const AxisSegment& seg = segments[k];
        require(seg.axis == axis, "training: segment " + std::to_string(k) + " axis mismatch");
        require(seg.frames() == T && seg.values.cols() == D,
                "training: segment " + std::to_string(k) + " shape mismatch");
        require(seg.values.minCoeff() >= -1e-12 && seg.values.maxCoeff() <= 1.0 + 1e-12,
                "training: segment " + std::to_string(k) + " values outside [0, 1]");
    }

    const auto t_start = std::chrono::steady_clock::now();
    Rng rng(cfg.seed);

    AxisModel model = AxisModel::zeros(axis, D, cfg.hidden_dim);
    init_model(model, rng);
    AdamOptimizer adam(cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_epsilon);

    const size_t n = segments.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    TrainReport report;
    report.config = cfg;
    report.epoch_mse.reserve(cfg.epochs);

    std::vector<Eigen::MatrixXd> targets(T), inputs(T);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_sse_norm = 0.0;  // sum of per-segment MSEs
        for (size_t begin = 0; begin < n; begin += cfg.batch_size) {
            const size_t end = std::min(n, begin + cfg.batch_size);
            for (int t = 0; t < T; ++t) {
                targets[t] = gather_frame(segments, order, begin, end, t);
                inputs[t] = apply_input_dropout(targets[t], cfg.dropout_keep, rng);
            }
            AutoencoderPass pass;
            try {
                pass = autoencoder_forward_backward(model, inputs, targets, cfg.teacher_forcing);
            } catch (const Error& e) {
                fail(std::string(e.what()) + " (epoch " + std::to_string(epoch) + ", batch at segment " +
                     std::to_string(begin) + ")");
            }
            require(std::isfinite(pass.loss), "training: non-finite loss at epoch " + std::to_string(epoch) +
                                                  ", batch at segment " + std::to_string(begin));
            if (cfg.grad_clip > 0.0) {
                const double norm = global_grad_norm(pass.grads);
                if (norm > cfg.grad_clip) scale_grads(pass.grads, cfg.grad_clip / norm);
            }
            adam.step(model, pass.grads);
            epoch_sse_norm += pass.loss * static_cast<double>(end - begin);
        }
        report.epoch_mse.push_back(epoch_sse_norm / static_cast<double>(n));
    }

    // e_k: training-set MSE of the final model, dropout disabled
    double total = 0.0;
    std::iota(order.begin(), order.end(), 0);
    for (size_t begin = 0; begin < n; begin += cfg.batch_size) {
        const size_t end = std::min(n, begin + cfg.batch_size);
        for (int t = 0; t < T; ++t) targets[t] = gather_frame(segments, order, begin, end, t);
        total += batch_loss(model, targets) * static_cast<double>(end - begin);
    }
    report.final_train_mse = total / static_cast<double>(n);
    model.train_mse = report.final_train_mse;

    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(model), std::move(report)};
}

void write_train_report_csv(const std::filesystem::path& path, const TrainReport& report) {
    std::ofstream out(path);
    if (!out) fail("training: cannot write report file " + path.string());
    out << "epoch,mean_mse\n";
    for (size_t e = 0; e < report.epoch_mse.size(); ++e) {
        out << e << ',' << format_double(report.epoch_mse[e]) << '\n';
    }
    if (!out) fail("training: write failed for " + path.string());
}

}  // namespace gaitidx

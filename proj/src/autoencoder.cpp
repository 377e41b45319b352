#include "gaitidx/autoencoder.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace gaitidx {

using nlohmann::json;

AxisModel AxisModel::zeros(Axis axis, int input_dim, int hidden_dim) {
    AxisModel m;
    m.axis = axis;
    m.encoder = LstmParams::zeros(input_dim, hidden_dim);
    m.decoder = LstmParams::zeros(input_dim, hidden_dim);
    m.out_proj.w = Eigen::MatrixXd::Zero(input_dim, hidden_dim);
    m.out_proj.b = Eigen::VectorXd::Zero(input_dim);
    m.train_mse = 0.0;
    return m;
}

LstmState encode(const AxisModel& model, const AxisSegment& seg) {
    require(seg.axis == model.axis, std::string("autoencoder: segment axis ") + axis_name(seg.axis) +
                                        " does not match model axis " + axis_name(model.axis));
    require(seg.frames() >= 1, "autoencoder: segment has no frames");
    std::vector<Eigen::MatrixXd> xs;
    xs.reserve(seg.frames());
    for (int t = 0; t < seg.frames(); ++t) {
        xs.push_back(seg.values.row(t).transpose());
    }
    return encode_batch(model, xs);
}

LstmState encode_batch(const AxisModel& model, const std::vector<Eigen::MatrixXd>& xs,
                       std::vector<GateTrace>* traces) {
    const int batch = static_cast<int>(xs.front().cols());
    auto states = lstm_forward(model.encoder, xs, LstmState::zeros(model.hidden_dim(), batch), traces);
    return states.back();
}

DecodeBatch decode_batch(const AxisModel& model, const LstmState& latent, int T,
                         const std::vector<Eigen::MatrixXd>* forced_inputs) {
    require(T >= 1, "autoencoder: decode length must be at least 1");
    require(!forced_inputs || static_cast<int>(forced_inputs->size()) == T - 1,
            "autoencoder: teacher-forcing inputs must cover steps 2..T");
    const int batch = latent.batch();

    DecodeBatch out;
    out.emitted.reserve(T);
    out.traces.resize(T);

    LstmState state = latent;
    Eigen::MatrixXd input = Eigen::MatrixXd::Zero(model.input_dim(), batch);
    for (int s = 0; s < T; ++s) {
        if (s > 0) {
            input = forced_inputs ? (*forced_inputs)[s - 1] : out.emitted.back();
        }
        state = lstm_step(model.decoder, state, input, &out.traces[s]);
        Eigen::MatrixXd y = model.out_proj.w * state.h;
        y.colwise() += model.out_proj.b;
        out.emitted.push_back(std::move(y));
    }
    return out;
}

Eigen::MatrixXd decode(const AxisModel& model, const LstmState& latent, int T) {
    DecodeBatch d = decode_batch(model, latent, T);
    Eigen::MatrixXd ys(T, model.input_dim());
    for (int s = 0; s < T; ++s) {
        // step s emits the reconstruction of frame T-1-s
        ys.row(T - 1 - s) = d.emitted[s].col(0).transpose();
    }
    return ys;
}

double mse_of(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    require(x.rows() == y.rows() && x.cols() == y.cols(), "autoencoder: MSE shape mismatch");
    return (x - y).squaredNorm() / static_cast<double>(x.size());
}

Reconstruction reconstruct(const AxisModel& model, const AxisSegment& seg) {
    Reconstruction r;
    r.ys = decode(model, encode(model, seg), seg.frames());
    r.mse = mse_of(seg.values, r.ys);
    return r;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            a.push_back(m(r, c));
        }
    }
    return a;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::MatrixXd matrix_from_json(const json& a, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& name) {
    require(a.is_array() && static_cast<Eigen::Index>(a.size()) == rows * cols,
            "autoencoder: model field " + name + " has wrong length");
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = a[k++].get<double>();
        }
    }
    return m;
}

Eigen::VectorXd vector_from_json(const json& a, Eigen::Index n, const std::string& name) {
    require(a.is_array() && static_cast<Eigen::Index>(a.size()) == n,
            "autoencoder: model field " + name + " has wrong length");
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = a[i].get<double>();
    return v;
}

json lstm_to_json(const LstmParams& p) {
    json j;
    // visit_params needs a mutable reference; serialization never writes
    auto& mp = const_cast<LstmParams&>(p);
    visit_params(mp, [&](const char* n, auto& t) {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, Eigen::VectorXd>) {
            j[n] = vector_to_json(t);
        } else {
            j[n] = matrix_to_json(t);
        }
    });
    return j;
}

LstmParams lstm_from_json(const json& j, int input_dim, int hidden_dim, const std::string& who) {
    LstmParams p = LstmParams::zeros(input_dim, hidden_dim);
    visit_params(p, [&](const char* n, auto& t) {
        require(j.contains(n), "autoencoder: model file missing " + who + "." + n);
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, Eigen::VectorXd>) {
            t = vector_from_json(j.at(n), t.size(), who + "." + n);
        } else {
            t = matrix_from_json(j.at(n), t.rows(), t.cols(), who + "." + n);
        }
    });
    return p;
}

constexpr int kModelFormatVersion = 1;

}  // namespace

void save_model(const AxisModel& model, const std::filesystem::path& path) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["axis"] = axis_name(model.axis);
    j["input_dim"] = model.input_dim();
    j["hidden_dim"] = model.hidden_dim();
    j["train_mse"] = model.train_mse;
    j["encoder"] = lstm_to_json(model.encoder);
    j["decoder"] = lstm_to_json(model.decoder);
    j["out_proj"] = {{"w", matrix_to_json(model.out_proj.w)}, {"b", vector_to_json(model.out_proj.b)}};

    std::ofstream out(path);
    if (!out) fail("autoencoder: cannot write model file " + path.string());
    out << j.dump(1) << '\n';
    if (!out) fail("autoencoder: write failed for " + path.string());
}

AxisModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("autoencoder: cannot open model file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("autoencoder: invalid JSON in " + path.string() + ": " + e.what());
    }
    require(j.value("format_version", -1) == kModelFormatVersion,
            "autoencoder: unsupported model format_version in " + path.string());

    const int input_dim = j.at("input_dim").get<int>();
    const int hidden_dim = j.at("hidden_dim").get<int>();
    require(input_dim > 0 && hidden_dim > 0, "autoencoder: bad dimensions in " + path.string());

    AxisModel m = AxisModel::zeros(axis_from_name(j.at("axis").get<std::string>()), input_dim, hidden_dim);
    m.train_mse = j.at("train_mse").get<double>();
    m.encoder = lstm_from_json(j.at("encoder"), input_dim, hidden_dim, "encoder");
    m.decoder = lstm_from_json(j.at("decoder"), input_dim, hidden_dim, "decoder");
    m.out_proj.w = matrix_from_json(j.at("out_proj").at("w"), input_dim, hidden_dim, "out_proj.w");
    m.out_proj.b = vector_from_json(j.at("out_proj").at("b"), input_dim, "out_proj.b");
    return m;
}

}  // namespace gaitidx

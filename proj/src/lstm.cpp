#include "gaitidx/lstm.hpp"

namespace gaitidx {

namespace {

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& a) { return 1.0 / (1.0 + (-a).exp()); }

void check_shapes(const LstmParams& p, const LstmState& prev, const Eigen::MatrixXd& x) {
    require(x.rows() == p.input_dim,
            "lstm_core: input has " + std::to_string(x.rows()) + " rows, params expect " +
                std::to_string(p.input_dim));
    require(prev.c.rows() == p.hidden_dim && prev.h.rows() == p.hidden_dim,
            "lstm_core: state dimension does not match params");
    require(prev.c.cols() == x.cols() && prev.h.cols() == x.cols(),
            "lstm_core: state batch does not match input batch");
}

void check_gate_finite(const Eigen::MatrixXd& m, const char* gate) {
    if (!m.allFinite()) fail(std::string("lstm_core: non-finite value in ") + gate);
}

}  // namespace

LstmParams LstmParams::zeros(int input_dim, int hidden_dim) {
    require(input_dim > 0 && hidden_dim > 0, "lstm_core: dimensions must be positive");
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.w_ix = Eigen::MatrixXd::Zero(hidden_dim, input_dim);
    p.w_fx = p.w_ix;
    p.w_cx = p.w_ix;
    p.w_ox = p.w_ix;
    p.w_ih = Eigen::MatrixXd::Zero(hidden_dim, hidden_dim);
    p.w_fh = p.w_ih;
    p.w_ch = p.w_ih;
    p.w_oh = p.w_ih;
    p.p_i = Eigen::VectorXd::Zero(hidden_dim);
    p.p_f = p.p_i;
    p.p_o = p.p_i;
    p.b_i = p.p_i;
    p.b_f = p.p_i;
    p.b_c = p.p_i;
    p.b_o = p.p_i;
    return p;
}

LstmState LstmState::zeros(int hidden_dim, int batch) {
    LstmState s;
    s.c = Eigen::MatrixXd::Zero(hidden_dim, batch);
    s.h = Eigen::MatrixXd::Zero(hidden_dim, batch);
    return s;
}

LstmState lstm_step(const LstmParams& p, const LstmState& prev, const Eigen::MatrixXd& x,
                    GateTrace* trace) {
    check_shapes(p, prev, x);

    // input gate, peephole on c_{t-1}
    Eigen::MatrixXd pre = p.w_ix * x;
    pre.noalias() += p.w_ih * prev.h;
    pre.array() += prev.c.array().colwise() * p.p_i.array();
    pre.colwise() += p.b_i;
    Eigen::MatrixXd i = sigmoid(pre.array());
    check_gate_finite(i, "input gate");

    // forget gate, peephole on c_{t-1}
    pre.noalias() = p.w_fx * x;
    pre.noalias() += p.w_fh * prev.h;
    pre.array() += prev.c.array().colwise() * p.p_f.array();
    pre.colwise() += p.b_f;
    Eigen::MatrixXd f = sigmoid(pre.array());
    check_gate_finite(f, "forget gate");

    // candidate values, no peephole
    pre.noalias() = p.w_cx * x;
    pre.noalias() += p.w_ch * prev.h;
    pre.colwise() += p.b_c;
    Eigen::MatrixXd g = pre.array().tanh();
    check_gate_finite(g, "candidate values");

    // cell update
    Eigen::MatrixXd c = f.cwiseProduct(prev.c) + i.cwiseProduct(g);
    check_gate_finite(c, "cell state");

    // output gate reads the new c_t
    pre.noalias() = p.w_ox * x;
    pre.noalias() += p.w_oh * prev.h;
    pre.array() += c.array().colwise() * p.p_o.array();
    pre.colwise() += p.b_o;
    Eigen::MatrixXd o = sigmoid(pre.array());
    check_gate_finite(o, "output gate");

    LstmState next;
    next.c = c;
    next.h = o.cwiseProduct(c.array().tanh().matrix());
    check_gate_finite(next.h, "cell output");

    if (trace) {
        trace->x = x;
        trace->i = std::move(i);
        trace->f = std::move(f);
        trace->g = std::move(g);
        trace->o = std::move(o);
        trace->c = next.c;
        trace->h = next.h;
    }
    return next;
}

std::vector<LstmState> lstm_forward(const LstmParams& p, const std::vector<Eigen::MatrixXd>& xs,
                                    const LstmState& init, std::vector<GateTrace>* traces) {
    require(!xs.empty(), "lstm_core: empty input sequence");
    std::vector<LstmState> states;
    states.reserve(xs.size());
    if (traces) {
        traces->clear();
        traces->resize(xs.size());
    }
    const LstmState* prev = &init;
    for (size_t t = 0; t < xs.size(); ++t) {
        try {
            states.push_back(lstm_step(p, *prev, xs[t], traces ? &(*traces)[t] : nullptr));
        } catch (const Error& e) {
            fail(std::string(e.what()) + " (timestep " + std::to_string(t) + ")");
        }
        prev = &states.back();
    }
    return states;
}

LstmStepGrads lstm_step_backward(const LstmParams& p, const GateTrace& tr,
                                 const Eigen::MatrixXd& c_prev, const Eigen::MatrixXd& h_prev,
                                 const Eigen::MatrixXd& dh, const Eigen::MatrixXd& dc,
                                 LstmParams& grads) {
    require(tr.c.rows() == p.hidden_dim && tr.x.rows() == p.input_dim,
            "lstm_core: trace does not match params");
    require(dh.rows() == p.hidden_dim && dh.cols() == tr.c.cols() && dc.rows() == p.hidden_dim &&
                dc.cols() == tr.c.cols(),
            "lstm_core: gradient shape does not match trace");

    const Eigen::ArrayXXd tanh_c = tr.c.array().tanh();

    // output gate pre-activation; its peephole reads the new c_t
    Eigen::ArrayXXd do_pre = dh.array() * tanh_c * tr.o.array() * (1.0 - tr.o.array());

    // total gradient on c_t: recurrence from t+1, the tanh path of the cell
    // output, and the output-gate peephole
    Eigen::ArrayXXd dc_tot = dc.array() + dh.array() * tr.o.array() * (1.0 - tanh_c.square());
    dc_tot += do_pre.colwise() * p.p_o.array();

    Eigen::ArrayXXd di_pre = dc_tot * tr.g.array() * tr.i.array() * (1.0 - tr.i.array());
    Eigen::ArrayXXd df_pre = dc_tot * c_prev.array() * tr.f.array() * (1.0 - tr.f.array());
    Eigen::ArrayXXd dg_pre = dc_tot * tr.i.array() * (1.0 - tr.g.array().square());

    const Eigen::MatrixXd di = di_pre.matrix();
    const Eigen::MatrixXd df = df_pre.matrix();
    const Eigen::MatrixXd dg = dg_pre.matrix();
    const Eigen::MatrixXd do_ = do_pre.matrix();

    grads.w_ix.noalias() += di * tr.x.transpose();
    grads.w_fx.noalias() += df * tr.x.transpose();
    grads.w_cx.noalias() += dg * tr.x.transpose();
    grads.w_ox.noalias() += do_ * tr.x.transpose();
    grads.w_ih.noalias() += di * h_prev.transpose();
    grads.w_fh.noalias() += df * h_prev.transpose();
    grads.w_ch.noalias() += dg * h_prev.transpose();
    grads.w_oh.noalias() += do_ * h_prev.transpose();
    // peephole gradients accumulate only on the diagonals
    grads.p_i += (di_pre * c_prev.array()).rowwise().sum().matrix();
    grads.p_f += (df_pre * c_prev.array()).rowwise().sum().matrix();
    grads.p_o += (do_pre * tr.c.array()).rowwise().sum().matrix();
    grads.b_i += di.rowwise().sum();
    grads.b_f += df.rowwise().sum();
    grads.b_c += dg.rowwise().sum();
    grads.b_o += do_.rowwise().sum();

    LstmStepGrads out;
    out.dc_prev = (dc_tot * tr.f.array()).matrix();
    out.dc_prev.array() += di_pre.colwise() * p.p_i.array();
    out.dc_prev.array() += df_pre.colwise() * p.p_f.array();

    out.dh_prev.noalias() = p.w_ih.transpose() * di;
    out.dh_prev.noalias() += p.w_fh.transpose() * df;
    out.dh_prev.noalias() += p.w_ch.transpose() * dg;
    out.dh_prev.noalias() += p.w_oh.transpose() * do_;

    out.dx.noalias() = p.w_ix.transpose() * di;
    out.dx.noalias() += p.w_fx.transpose() * df;
    out.dx.noalias() += p.w_cx.transpose() * dg;
    out.dx.noalias() += p.w_ox.transpose() * do_;
    return out;
}

LstmBackwardResult lstm_backward(const LstmParams& p, const std::vector<GateTrace>& traces,
                                 const LstmState& init, const std::vector<Eigen::MatrixXd>& grad_h_seq,
                                 const LstmState& grad_final) {
    require(!traces.empty(), "lstm_core: empty trace");
    require(grad_h_seq.size() == traces.size(),
            "lstm_core: grad_h_seq length does not match trace length");

    const size_t T = traces.size();
    LstmBackwardResult res;
    res.param_grads = LstmParams::zeros(p.input_dim, p.hidden_dim);
    res.input_grads.resize(T);

    Eigen::MatrixXd dh = grad_h_seq[T - 1] + grad_final.h;
    Eigen::MatrixXd dc = grad_final.c;
    for (size_t t = T; t-- > 0;) {
        const Eigen::MatrixXd& c_prev = (t == 0) ? init.c : traces[t - 1].c;
        const Eigen::MatrixXd& h_prev = (t == 0) ? init.h : traces[t - 1].h;
        LstmStepGrads sg = lstm_step_backward(p, traces[t], c_prev, h_prev, dh, dc, res.param_grads);
        res.input_grads[t] = std::move(sg.dx);
        dc = std::move(sg.dc_prev);
        if (t > 0) {
            dh = grad_h_seq[t - 1] + sg.dh_prev;
        } else {
            dh = std::move(sg.dh_prev);
        }
    }
    res.init_grad.c = std::move(dc);
    res.init_grad.h = std::move(dh);
    return res;
}

}  // namespace gaitidx

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaitidx/common.hpp"

namespace gaitidx {

// Peephole LSTM cell parameters. The peephole weights connecting the cell
// state to the gates are diagonal, so only the diagonals p_i, p_f, p_o are
// stored; the constraint cannot be violated by construction.
struct LstmParams {
    int input_dim = 0;
    int hidden_dim = 0;
    Eigen::MatrixXd w_ix, w_fx, w_cx, w_ox;  // hidden x input
    Eigen::MatrixXd w_ih, w_fh, w_ch, w_oh;  // hidden x hidden
    Eigen::VectorXd p_i, p_f, p_o;           // hidden (peephole diagonals)
    Eigen::VectorXd b_i, b_f, b_c, b_o;      // hidden

    static LstmParams zeros(int input_dim, int hidden_dim);
};

// Visits every parameter tensor in a fixed order; used by the optimizer,
// serialization and the finite-difference gradient checks.
template <class F>
void visit_params(LstmParams& p, F&& f) {
    f("w_ix", p.w_ix);
    f("w_fx", p.w_fx);
    f("w_cx", p.w_cx);
    f("w_ox", p.w_ox);
    f("w_ih", p.w_ih);
    f("w_fh", p.w_fh);
    f("w_ch", p.w_ch);
    f("w_oh", p.w_oh);
    f("p_i", p.p_i);
    f("p_f", p.p_f);
    f("p_o", p.p_o);
    f("b_i", p.b_i);
    f("b_f", p.b_f);
    f("b_c", p.b_c);
    f("b_o", p.b_o);
}

// Recurrent carry (c_t, h_t). Columns are independent batch lanes; a single
// sequence uses one column.
struct LstmState {
    Eigen::MatrixXd c;  // hidden x batch
    Eigen::MatrixXd h;  // hidden x batch

    static LstmState zeros(int hidden_dim, int batch = 1);
    int batch() const { return static_cast<int>(c.cols()); }
};

// Everything the backward pass needs about one timestep: the input as seen
// by the cell, the gate activations and the post-step state.
struct GateTrace {
    Eigen::MatrixXd x;           // input_dim x batch
    Eigen::MatrixXd i, f, g, o;  // gate activations; g is the candidate
    Eigen::MatrixXd c, h;        // state after the step
};

// One cell update. Gate order matters: the input and forget gates read
// c_{t-1} through their peepholes, the output gate reads the new c_t.
LstmState lstm_step(const LstmParams& params, const LstmState& prev, const Eigen::MatrixXd& x,
                    GateTrace* trace = nullptr);

// Folds lstm_step across time; returns the state after every step.
std::vector<LstmState> lstm_forward(const LstmParams& params, const std::vector<Eigen::MatrixXd>& xs,
                                    const LstmState& init, std::vector<GateTrace>* traces = nullptr);

struct LstmStepGrads {
    Eigen::MatrixXd dx;       // gradient on the step input
    Eigen::MatrixXd dh_prev;  // gradient on h_{t-1}
    Eigen::MatrixXd dc_prev;  // gradient on c_{t-1} (recurrence + peepholes)
};

// Reverses one step. dh is the total loss gradient on h_t, dc the gradient
// reaching c_t from future steps. Parameter gradients accumulate into
// grads; the two additive paths into c_t (tanh in the output equation and
// the output-gate peephole) and the c_{t-1} peepholes are all honored.
LstmStepGrads lstm_step_backward(const LstmParams& params, const GateTrace& tr,
                                 const Eigen::MatrixXd& c_prev, const Eigen::MatrixXd& h_prev,
                                 const Eigen::MatrixXd& dh, const Eigen::MatrixXd& dc,
                                 LstmParams& grads);

struct LstmBackwardResult {
    LstmParams param_grads;
    std::vector<Eigen::MatrixXd> input_grads;
    LstmState init_grad;
};

// Full-sequence reverse pass for a loss with per-timestep sensitivities
// grad_h_seq on h_t plus an extra gradient on the final (c_T, h_T).
LstmBackwardResult lstm_backward(const LstmParams& params, const std::vector<GateTrace>& traces,
                                 const LstmState& init, const std::vector<Eigen::MatrixXd>& grad_h_seq,
                                 const LstmState& grad_final);

}  // namespace gaitidx

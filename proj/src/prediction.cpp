#include "gpckit/prediction.hpp"

#include <stdexcept>

namespace gpckit {

PredictionSet build_prediction(const StateSpace& ss, int horizon) {
    if (horizon < 1) throw std::invalid_argument("build_prediction: horizon must be >= 1");
    const int N = horizon;
    const int n = ss.dim();

    PredictionSet ps;
    ps.horizon = N;
    ps.delay = ss.delay;
    ps.na = ss.na;
    ps.nb = ss.nb;
    ps.state_inc.resize(N, n);
    ps.input_inc = Eigen::MatrixXd::Zero(N, N);
    ps.dist_inc = Eigen::MatrixXd::Zero(N, N);
    ps.ones = Eigen::VectorXd::Ones(N);

    // Row propagation: row = C A^j for j = 0..N; impulse samples h_{j+1} =
    // (C A^j) B fall out of the same sweep, avoiding any matrix power.
    Eigen::RowVectorXd row = ss.C;
    Eigen::VectorXd h(N), hw(N);
    for (int j = 0; j < N; ++j) {
        h(j) = row * ss.B;
        hw(j) = row * ss.T;
        row *= ss.A;
        ps.state_inc.row(j) = row;
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j <= i; ++j) {
            ps.input_inc(i, j) = h(i - j);
            ps.dist_inc(i, j) = hw(i - j);
        }

    // Column prefix sums give the level maps.
    auto cumsum = [](const Eigen::MatrixXd& m) {
        Eigen::MatrixXd out = m;
        for (int i = 1; i < m.rows(); ++i) out.row(i) += out.row(i - 1);
        return out;
    };
    ps.state_cum = cumsum(ps.state_inc);
    ps.input_cum = cumsum(ps.input_inc);
    ps.dist_cum = cumsum(ps.dist_inc);
    return ps;
}

Eigen::VectorXd predict(const PredictionSet& ps, double y_now, const Eigen::VectorXd& dx,
                        const Eigen::VectorXd& du_seq, const Eigen::VectorXd& dchi_seq) {
    if (dx.size() != ps.dim()) throw std::invalid_argument("predict: state dimension mismatch");
    if (du_seq.size() != ps.horizon) throw std::invalid_argument("predict: control sequence length mismatch");
    if (dchi_seq.size() != ps.horizon) throw std::invalid_argument("predict: disturbance sequence length mismatch");
    return ps.ones * y_now + ps.state_cum * dx + ps.input_cum * du_seq + ps.dist_cum * dchi_seq;
}

}  // namespace gpckit

#include "gpckit/controller.hpp"

#include <stdexcept>

namespace gpckit {

namespace {

constexpr double kMaxCondition = 1e12;

}  // namespace

std::string to_string(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::reduced: return "reduced";
        case Variant::igmvc: return "igmvc";
        case Variant::compensated_full: return "compensated-full";
        case Variant::compensated_reduced: return "compensated-reduced";
    }
    return "?";
}

ControllerSpec ControllerSpec::uniform(int N, double q_val, double lambda_val, Variant v,
                                       ForecastKind f) {
    ControllerSpec spec;
    spec.horizon = N;
    spec.q = Eigen::VectorXd::Constant(N, q_val);
    spec.lambda = Eigen::VectorXd::Constant(N, lambda_val);
    spec.variant = v;
    spec.forecast = f;
    return spec;
}

GainSet build_gains(const PredictionSet& ps, const ControllerSpec& spec) {
    const int N = ps.horizon;
    const int d = ps.delay;
    if (spec.horizon != N) throw std::invalid_argument("build_gains: horizon mismatch");
    if (spec.q.size() != N || spec.lambda.size() != N)
        throw std::invalid_argument("build_gains: weight vectors must have length N");
    if ((spec.q.array() < 0.0).any())
        throw std::invalid_argument("build_gains: output weights must be nonnegative");
    if (spec.variant == Variant::igmvc && N != d)
        throw std::invalid_argument("build_gains: igmvc requires horizon equal to delay");
    if (!spec.compensated() && spec.forecast != ForecastKind::none)
        throw std::invalid_argument("build_gains: forecast source given for a non-compensated variant");

    const bool reduced = spec.delay_reduced();
    const int m = reduced ? N - d + 1 : N;
    if (m < 1) throw std::invalid_argument("build_gains: delay exceeds horizon");

    // Kept rows/columns of the cumulative maps and weights.
    const Eigen::MatrixXd fwd = reduced ? ps.input_cum.bottomRows(m).leftCols(m).eval()
                                        : ps.input_cum;
    const Eigen::MatrixXd st = reduced ? ps.state_cum.bottomRows(m).eval() : ps.state_cum;
    const Eigen::MatrixXd dist = reduced ? ps.dist_cum.bottomRows(m).eval() : ps.dist_cum;
    const Eigen::VectorXd qv = reduced ? spec.q.tail(m).eval() : spec.q;
    const Eigen::VectorXd lv = reduced ? spec.lambda.head(m).eval() : spec.lambda;

    const Eigen::MatrixXd normal =
        fwd.transpose() * qv.asDiagonal() * fwd + Eigen::MatrixXd(lv.asDiagonal());

    // The increment weights may be negative, so the normal matrix can be
    // indefinite; an SVD-backed solve covers that and doubles as the
    // conditioning check.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(normal, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > kMaxCondition)
        throw SingularGainError("build_gains: singular normal equations for variant '" +
                                to_string(spec.variant) + "' (delay " + std::to_string(d) +
                                ", check the control-increment weights)");

    GainSet g;
    g.variant = spec.variant;
    g.horizon = N;
    g.delay = d;
    g.kept = m;
    g.ref_offset = reduced ? d - 1 : 0;
    g.gain = svd.solve(fwd.transpose() * qv.asDiagonal().toDenseMatrix());
    g.k_ref = g.gain.row(0);
    g.k_y = g.k_ref * st.leftCols(ps.na);
    g.k_u = g.k_ref * st.rightCols(ps.nb + 1);
    g.k_dist = g.k_ref * dist;
    g.k_level = g.k_ref.sum();
    return g;
}

LoopState::LoopState(int na, int nb)
    : na_(na), nb_(nb), dx_(Eigen::VectorXd::Zero(na + nb + 1)) {}

void LoopState::push_output(double y) {
    for (int i = na_ - 1; i >= 1; --i) dx_(i) = dx_(i - 1);
    dx_(0) = y - y_prev_;
    y_prev_ = y;
}

void LoopState::push_input(double u) {
    for (int j = nb_; j >= 1; --j) dx_(na_ + j) = dx_(na_ + j - 1);
    dx_(na_) = u - u_prev_;
    u_prev_ = u;
}

ControlStep gpc_step(const GainSet& gains, LoopState& state, double y_now,
                     const Eigen::VectorXd& ref_window,
                     const std::optional<Eigen::VectorXd>& dchi_forecast) {
    if (ref_window.size() != gains.kept)
        throw std::invalid_argument("gpc_step: reference window length mismatch");
    const bool comp = gains.variant == Variant::compensated_full ||
                      gains.variant == Variant::compensated_reduced;
    if (comp && !dchi_forecast)
        throw std::invalid_argument("gpc_step: compensated variant needs a disturbance forecast");
    if (dchi_forecast && dchi_forecast->size() != gains.forecast_len())
        throw std::invalid_argument("gpc_step: disturbance forecast length mismatch");

    state.push_output(y_now);
    const Eigen::VectorXd& dx = state.dx();
    const int na = static_cast<int>(gains.k_y.size());
    double du = gains.k_ref.dot(ref_window) - gains.k_level * y_now -
                gains.k_y.dot(dx.head(na)) - gains.k_u.dot(dx.tail(gains.k_u.size()));
    if (comp) du -= gains.k_dist.dot(*dchi_forecast);
    const double u = state.u_prev() + du;
    state.push_input(u);
    return {u, du};
}

ControlStep igmvc_step(const GainSet& gains, LoopState& state, double y_now,
                       double ref_at_kplusd) {
    if (gains.horizon != gains.delay)
        throw std::invalid_argument("igmvc_step: horizon must equal the plant delay");
    Eigen::VectorXd window(1);
    window << ref_at_kplusd;
    return gpc_step(gains, state, y_now, window);
}

double objective_value(const PredictionSet& ps, const ControllerSpec& spec,
                       const Eigen::VectorXd& ref_window, double y_now, const Eigen::VectorXd& dx,
                       const Eigen::VectorXd& du_seq) {
    if (ref_window.size() != ps.horizon || du_seq.size() != ps.horizon)
        throw std::invalid_argument("objective_value: length mismatch");
    const Eigen::VectorXd zero_dchi = Eigen::VectorXd::Zero(ps.horizon);
    const Eigen::VectorXd err = ref_window - predict(ps, y_now, dx, du_seq, zero_dchi);
    return err.dot(spec.q.asDiagonal() * err) + du_seq.dot(spec.lambda.asDiagonal() * du_seq);
}

}  // namespace gpckit

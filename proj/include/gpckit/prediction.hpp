#pragma once

#include <Eigen/Dense>

#include "gpckit/carima.hpp"

namespace gpckit {

/// Stacked N-step prediction system for the incremental realization.
///
/// The *_inc matrices map onto output increments dy(k+1..k+N); their
/// cumulative (column-prefix-sum) counterparts map onto output levels,
/// so that  y(k+1..k+N) = ones*y(k) + state_cum*dx(k) + input_cum*dU
///                        + dist_cum*dchi(k+1..k+N).
struct PredictionSet {
    int horizon = 0;
    int delay = 1;
    int na = 0;
    int nb = 0;

    Eigen::MatrixXd state_inc;  // N x (na+nb+1), rows C A^i
    Eigen::MatrixXd input_inc;  // N x N lower-triangular of C A^(i-j) B
    Eigen::MatrixXd dist_inc;   // N x N lower-triangular of C A^(i-j) T
    Eigen::MatrixXd state_cum;
    Eigen::MatrixXd input_cum;
    Eigen::MatrixXd dist_cum;
    Eigen::VectorXd ones;  // N ones

    int dim() const { return na + nb + 1; }
    /// Output-history / input-history split of the cumulative state map.
    Eigen::MatrixXd state_cum_y() const { return state_cum.leftCols(na); }
    Eigen::MatrixXd state_cum_u() const { return state_cum.rightCols(nb + 1); }
};

/// Builds the prediction system by propagating the output row through the
/// state matrix; the cumulative maps are running column sums, never a
/// materialized triangular-ones product.
PredictionSet build_prediction(const StateSpace& ss, int horizon);

/// Predicted output levels y(k+1..k+N) for the given current output, state,
/// control increments and disturbance increments (pass zeros for dchi when
/// the disturbance is unknown).
Eigen::VectorXd predict(const PredictionSet& ps, double y_now, const Eigen::VectorXd& dx,
                        const Eigen::VectorXd& du_seq, const Eigen::VectorXd& dchi_seq);

}  // namespace gpckit

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

#include "gpckit/prediction.hpp"

namespace gpckit {

enum class Variant { full, reduced, igmvc, compensated_full, compensated_reduced };

enum class ForecastKind { none, exact, hold };

std::string to_string(Variant v);

/// Receding-horizon controller description: horizon, diagonal weights, and
/// which of the four control laws to apply. Output weights must be
/// nonnegative; control-increment weights may take any sign.
struct ControllerSpec {
    int horizon = 1;
    Eigen::VectorXd q;       // output-error weights q_1..q_N
    Eigen::VectorXd lambda;  // control-increment weights lambda_1..lambda_N
    Variant variant = Variant::full;
    ForecastKind forecast = ForecastKind::none;

    static ControllerSpec uniform(int N, double q_val, double lambda_val,
                                  Variant v = Variant::full,
                                  ForecastKind f = ForecastKind::none);

    bool compensated() const {
        return variant == Variant::compensated_full || variant == Variant::compensated_reduced;
    }
    bool delay_reduced() const {
        return variant == Variant::reduced || variant == Variant::igmvc ||
               variant == Variant::compensated_reduced;
    }
};

/// Thrown when the normal-equation matrix of a control law is singular or
/// numerically unusable (condition estimate above 1e12).
class SingularGainError : public std::runtime_error {
public:
    explicit SingularGainError(const std::string& what) : std::runtime_error(what) {}
};

/// Precomputed control gains. For delay-reduced variants the normal
/// equations are shrunk to order N-d+1 by dropping the structurally zero
/// leading rows and trailing columns of the cumulative input map, together
/// with the matching leading entries of the weight vectors, reference
/// window and state/disturbance maps.
struct GainSet {
    Variant variant = Variant::full;
    int horizon = 0;  // N
    int delay = 1;    // d
    int kept = 0;     // rows kept: N (full) or N-d+1 (reduced)
    int ref_offset = 0;  // reference window starts at k + 1 + ref_offset

    Eigen::MatrixXd gain;        // kept x kept solution matrix
    Eigen::RowVectorXd k_ref;    // applied row (first row of gain), length kept
    Eigen::RowVectorXd k_y;      // k_ref * (output part of state map), length na
    Eigen::RowVectorXd k_u;      // k_ref * (input part of state map), length nb+1
    Eigen::RowVectorXd k_dist;   // k_ref * (kept rows of dist map), length N
    double k_level = 0.0;        // k_ref * ones

    int forecast_len() const { return static_cast<int>(k_dist.size()); }
};

GainSet build_gains(const PredictionSet& ps, const ControllerSpec& spec);

/// Mutable per-loop controller state: the incremental state vector of the
/// realization plus the previously applied input. One owner per loop.
class LoopState {
public:
    LoopState(int na, int nb);

    double u_prev() const { return u_prev_; }
    double y_prev() const { return y_prev_; }
    const Eigen::VectorXd& dx() const { return dx_; }

    /// Record the newly measured output (shifts the dy block).
    void push_output(double y);
    /// Record the newly applied input (shifts the du block).
    void push_input(double u);

private:
    int na_;
    int nb_;
    Eigen::VectorXd dx_;
    double u_prev_ = 0.0;
    double y_prev_ = 0.0;
};

struct ControlStep {
    double u = 0.0;
    double du = 0.0;
};

/// One receding-horizon step: consumes the measured output, the reference
/// window [y*(k+1+ref_offset) .. y*(k+N)] and, for compensated variants,
/// the disturbance-increment forecast [dchi(k+1) .. dchi(k+N)]; applies the
/// first computed increment and advances the state.
ControlStep gpc_step(const GainSet& gains, LoopState& state, double y_now,
                     const Eigen::VectorXd& ref_window,
                     const std::optional<Eigen::VectorXd>& dchi_forecast = std::nullopt);

/// Minimum-variance specialization (horizon equal to delay): single
/// reference sample y*(k+d).
ControlStep igmvc_step(const GainSet& gains, LoopState& state, double y_now, double ref_at_kplusd);

/// Quadratic objective of a candidate increment sequence under the spec's
/// weights, evaluated through the module's own predictor (testing aid).
double objective_value(const PredictionSet& ps, const ControllerSpec& spec,
                       const Eigen::VectorXd& ref_window, double y_now, const Eigen::VectorXd& dx,
                       const Eigen::VectorXd& du_seq);

}  // namespace gpckit

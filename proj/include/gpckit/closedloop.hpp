#pragma once

#include <functional>
#include <vector>

#include "gpckit/controller.hpp"
#include "gpckit/laurent.hpp"

namespace gpckit {

/// Polynomial operators of the closed loop, assembled from the applied gain
/// row. Clearing the controller denominator from the loop equation gives
///
///   charpoly * y(k+1) = B * ff_num * y*(k+1) + ctrl_den * dchi(k+1)
///                       - kappa * B * comp_num * dchi(k+1)
///
/// with charpoly = A*Delta*ctrl_den + z^-1*B*fb_num*Delta + z^-1*B*fb_level.
/// For uniform increment weights the minimum-variance form charpoly_mv is
/// also available; it drives the horizon-equals-delay analysis.
struct LoopOperators {
    LaurentPoly a;  // plant A(z^-1)
    LaurentPoly b;  // plant B(z^-1)

    LaurentPoly ctrl_den;  // 1 + z^-1 * (k_u row dotted with the input shifts)
    LaurentPoly fb_num;    // k_y row dotted with the output shifts
    double fb_level = 0.0;
    LaurentPoly ff_num;    // reference-preview row (positive powers of z)
    LaurentPoly comp_num;  // compensation-preview row (positive powers of z)

    LaurentPoly charpoly;     // characteristic polynomial of the applied loop
    LaurentPoly charpoly_mv;  // minimum-variance form; empty unless weights allow
    bool has_mv_form = false;
    double lambda_scalar = 0.0;  // uniform increment weight when has_mv_form
    LaurentPoly mv_ref_num;      // B * (first forced column weighted by q, z powers)
    LaurentPoly mv_dist_num;     // lambda + B * (weighted forced/dist rows, z powers)

    Variant variant = Variant::full;
    ForecastKind forecast = ForecastKind::none;
    int horizon = 0;
    int delay = 1;
};

LoopOperators loop_operators(const CarimaModel& model, const PredictionSet& ps,
                             const GainSet& gains, const ControllerSpec& spec);

enum class StabilityVerdict { stable, marginal, unstable };

std::string to_string(StabilityVerdict v);

/// Which characteristic polynomial a stability query refers to.
enum class CharPoly { applied, minimum_variance };

struct StabilityReport {
    StabilityVerdict verdict = StabilityVerdict::stable;
    std::vector<std::complex<double>> roots;  // z-plane
    double max_modulus = 0.0;
};

StabilityReport stability(const LoopOperators& ops, CharPoly which = CharPoly::applied);

/// Steady-state tracking error for a reference k^n via the final value
/// theorem on the assembled error operator. Throws std::domain_error when
/// the loop is unstable.
FinalValue reference_error_ss(const LoopOperators& ops, int input_power);

/// Steady-state error contribution of a disturbance k^n.
FinalValue disturbance_error_ss(const LoopOperators& ops, int input_power);

struct SteadyStateReport {
    FinalValue reference_error;
    FinalValue disturbance_error;
    FinalValue total;
    int n_ref = 0;
    int n_dist = 0;
};

SteadyStateReport steady_state_report(const LoopOperators& ops, int n_ref, int n_dist);

/// Disturbance-to-output transfer operator of the loop the gains close.
/// Full/reduced loops give ctrl_den*Delta/charpoly; the minimum-variance
/// form uses mv_dist_num/charpoly_mv; compensated loops subtract the
/// feedforward path (exactly, for the exact-oracle forecast).
RationalTF disturbance_tf(const LoopOperators& ops);

/// Error operator applied to the disturbance alone: -disturbance_tf.
RationalTF disturbance_error_tf(const LoopOperators& ops);

/// Analytic reconstruction of the tracking error y* - y over times 1..len.
///
/// ref(t) and chi(t) must be valid for t up to len + horizon (the preview
/// operators reach ahead); both are taken as zero for t <= 0, matching the
/// simulator's resting start. The reconstruction includes the start-up
/// correction for the controller being inactive before time 1, so it
/// matches a recorded closed-loop run sample for sample.
std::vector<double> error_signal(const LoopOperators& ops, const std::function<double(int)>& ref,
                                 const std::function<double(int)>& chi, int len);

}  // namespace gpckit

#include "gpckit/closedloop.hpp"

#include <cmath>
#include <stdexcept>

namespace gpckit {

namespace {

constexpr double kCircleEps = 1e-9;

LaurentPoly row_to_poly(const Eigen::RowVectorXd& row, int first_exp) {
    // row(i) multiplies z^-(first_exp + i).
    std::vector<double> c(static_cast<std::size_t>(row.size()));
    for (int i = 0; i < row.size(); ++i) c[static_cast<std::size_t>(i)] = row(i);
    return LaurentPoly(first_exp, std::move(c));
}

LaurentPoly preview_row_to_poly(const Eigen::RowVectorXd& row, int offset) {
    // row(i) multiplies the sample offset+i steps ahead: z^(offset+i).
    std::vector<double> c(static_cast<std::size_t>(row.size()));
    for (int i = 0; i < row.size(); ++i)
        c[static_cast<std::size_t>(row.size() - 1 - i)] = row(i);
    return LaurentPoly(-(offset + static_cast<int>(row.size()) - 1), std::move(c));
}

bool uniform_lambda(const ControllerSpec& spec, double* value) {
    const double first = spec.lambda(0);
    for (int i = 1; i < spec.lambda.size(); ++i)
        if (spec.lambda(i) != first) return false;
    *value = first;
    return true;
}

}  // namespace

std::string to_string(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::stable: return "stable";
        case StabilityVerdict::marginal: return "marginal";
        case StabilityVerdict::unstable: return "unstable";
    }
    return "?";
}

LoopOperators loop_operators(const CarimaModel& model, const PredictionSet& ps,
                             const GainSet& gains, const ControllerSpec& spec) {
    if (ps.horizon != gains.horizon || spec.horizon != ps.horizon)
        throw std::invalid_argument("loop_operators: horizon mismatch");

    LoopOperators ops;
    ops.a = model.a_poly();
    ops.b = model.b_poly();
    ops.variant = gains.variant;
    ops.forecast = spec.forecast;
    ops.horizon = ps.horizon;
    ops.delay = ps.delay;

    // The applied control law in operator form:
    //   ctrl_den * du(k) = ff_num y*(k+1) - fb_level y(k) - fb_num dy(k)
    //                      - comp_num dchi(k+1)
    ops.ctrl_den = LaurentPoly::constant(1.0) + LaurentPoly::shift(1) * row_to_poly(gains.k_u, 0);
    ops.fb_num = row_to_poly(gains.k_y, 0);
    ops.fb_level = gains.k_level;
    ops.ff_num = preview_row_to_poly(gains.k_ref, gains.ref_offset);
    ops.comp_num = preview_row_to_poly(gains.k_dist, 0);

    const LaurentPoly z1 = LaurentPoly::shift(1);
    const LaurentPoly delta = LaurentPoly::delta();
    ops.charpoly = ops.a * delta * ops.ctrl_den + z1 * ops.b * ops.fb_num * delta +
                   z1 * ops.b * LaurentPoly::constant(ops.fb_level);

    double lam = 0.0;
    if (uniform_lambda(spec, &lam)) {
        ops.has_mv_form = true;
        ops.lambda_scalar = lam;
        // Weighted first forced column and forced-through-disturbance row,
        // carried on positive powers of z (output preview).
        LaurentPoly col_q = LaurentPoly::zero();
        Eigen::RowVectorXd wrow = Eigen::RowVectorXd::Zero(ps.horizon);
        for (int i = 0; i < ps.horizon; ++i) {
            col_q += LaurentPoly::shift(-i) * LaurentPoly::constant(ps.input_cum(i, 0) * spec.q(i));
            wrow += ps.input_cum(i, 0) * spec.q(i) * ps.dist_cum.row(i);
        }
        LaurentPoly wrow_poly = LaurentPoly::zero();
        for (int i = 0; i < ps.horizon; ++i)
            wrow_poly += LaurentPoly::shift(-i) * LaurentPoly::constant(wrow(i));
        ops.charpoly_mv = LaurentPoly::constant(lam) * ops.a * delta + ops.b * col_q;
        ops.mv_ref_num = ops.b * col_q;
        ops.mv_dist_num = LaurentPoly::constant(lam) + ops.b * wrow_poly;
    }
    return ops;
}

StabilityReport stability(const LoopOperators& ops, CharPoly which) {
    const LaurentPoly& t =
        which == CharPoly::applied ? ops.charpoly : ops.charpoly_mv;
    if (which == CharPoly::minimum_variance && !ops.has_mv_form)
        throw std::invalid_argument("stability: minimum-variance form needs uniform increment weights");
    if (t.is_zero()) throw std::invalid_argument("stability: zero characteristic polynomial");

    StabilityReport rep;
    rep.roots = t.roots_in_z();
    for (const auto& r : rep.roots) rep.max_modulus = std::max(rep.max_modulus, std::abs(r));
    if (rep.max_modulus < 1.0 - kCircleEps)
        rep.verdict = StabilityVerdict::stable;
    else if (rep.max_modulus <= 1.0 + kCircleEps)
        rep.verdict = StabilityVerdict::marginal;
    else
        rep.verdict = StabilityVerdict::unstable;
    return rep;
}

namespace {

void require_stable(const LoopOperators& ops) {
    if (stability(ops).verdict == StabilityVerdict::unstable)
        throw std::domain_error("closed loop is unstable; steady-state analysis inapplicable");
}

/// kappa = 1 exactly when the forecast feedforward path is active with the
/// true disturbance (exact oracle).
double comp_kappa(const LoopOperators& ops) {
    const bool comp = ops.variant == Variant::compensated_full ||
                      ops.variant == Variant::compensated_reduced;
    if (!comp || ops.forecast == ForecastKind::none) return 0.0;
    if (ops.forecast == ForecastKind::exact) return 1.0;
    return -1.0;  // hold-last: handled separately
}

/// Numerator of the chi -> y path cleared of the controller denominator.
LaurentPoly dist_num(const LoopOperators& ops) {
    const LaurentPoly delta = LaurentPoly::delta();
    const double kappa = comp_kappa(ops);
    if (kappa < 0.0) {
        // Hold-last forecast repeats the latest observed increment across
        // the window: dchi_hat(k+i) = dchi(k), a scalar gain on z^-1 dchi(k+1).
        double gain = 0.0;
        for (int e = ops.comp_num.lo_exp(); e <= ops.comp_num.hi_exp(); ++e)
            gain += ops.comp_num.coeff(e);
        return (ops.ctrl_den - LaurentPoly::shift(1) * ops.b * LaurentPoly::constant(gain)) * delta;
    }
    return (ops.ctrl_den - LaurentPoly::constant(kappa) * ops.b * ops.comp_num) * delta;
}

}  // namespace

FinalValue reference_error_ss(const LoopOperators& ops, int input_power) {
    require_stable(ops);
    const LaurentPoly num = ops.charpoly - ops.b * ops.ff_num;
    return final_value_limit(RationalTF(num, ops.charpoly), input_power);
}

FinalValue disturbance_error_ss(const LoopOperators& ops, int input_power) {
    require_stable(ops);
    return final_value_limit(RationalTF(-dist_num(ops), ops.charpoly), input_power);
}

SteadyStateReport steady_state_report(const LoopOperators& ops, int n_ref, int n_dist) {
    SteadyStateReport rep;
    rep.n_ref = n_ref;
    rep.n_dist = n_dist;
    rep.reference_error = reference_error_ss(ops, n_ref);
    rep.disturbance_error = disturbance_error_ss(ops, n_dist);
    if (rep.reference_error.unbounded || rep.disturbance_error.unbounded)
        rep.total = FinalValue::infinite();
    else
        rep.total = FinalValue::finite(rep.reference_error.value + rep.disturbance_error.value);
    return rep;
}

RationalTF disturbance_tf(const LoopOperators& ops) {
    if (ops.variant == Variant::igmvc) {
        if (!ops.has_mv_form)
            throw std::invalid_argument("disturbance_tf: minimum-variance form needs uniform increment weights");
        return RationalTF(ops.mv_dist_num * LaurentPoly::delta(), ops.charpoly_mv);
    }
    return RationalTF(dist_num(ops), ops.charpoly);
}

RationalTF disturbance_error_tf(const LoopOperators& ops) {
    RationalTF g = disturbance_tf(ops);
    g.num = -g.num;
    return g;
}

std::vector<double> error_signal(const LoopOperators& ops, const std::function<double(int)>& ref,
                                 const std::function<double(int)>& chi, int len) {
    require_stable(ops);
    auto ref0 = [&ref](int t) { return t >= 1 ? ref(t) : 0.0; };
    auto chi0 = [&chi](int t) { return t >= 1 ? chi(t) : 0.0; };

    const LaurentPoly ref_num = ops.charpoly - ops.b * ops.ff_num;
    const LaurentPoly chi_num = -dist_num(ops);

    // Start-up correction: before time 1 the simulated controller is idle,
    // while the loop identity assumes the law held at all times. The law's
    // residual at idle times j <= 0 is
    //   L(j) = -ff_num y*(j+1) + kappa * comp_num dchi(j+1),
    // and it enters the recorded output through -B/charpoly.
    const double kappa = std::max(comp_kappa(ops), 0.0);
    const bool hold = comp_kappa(ops) < 0.0;
    auto law_residual = [&](int j) -> double {
        if (j >= 1) return 0.0;
        double r = 0.0;
        for (int e = ops.ff_num.lo_exp(); e <= ops.ff_num.hi_exp(); ++e)
            r -= ops.ff_num.coeff(e) * ref0(j + 1 - e);
        if (kappa != 0.0) {
            for (int e = ops.comp_num.lo_exp(); e <= ops.comp_num.hi_exp(); ++e)
                r += kappa * ops.comp_num.coeff(e) * (chi0(j + 1 - e) - chi0(j - e));
        }
        if (hold) {
            double gain = 0.0;
            for (int e = ops.comp_num.lo_exp(); e <= ops.comp_num.hi_exp(); ++e)
                gain += ops.comp_num.coeff(e);
            r += gain * (chi0(j) - chi0(j - 1));
        }
        return r;
    };

    const std::vector<double> from_ref =
        tf_filter_fn(RationalTF(ref_num, ops.charpoly), ref0, len);
    const std::vector<double> from_chi =
        tf_filter_fn(RationalTF(chi_num, ops.charpoly), chi0, len);
    const std::vector<double> from_startup = tf_filter_fn(
        RationalTF(-ops.b, ops.charpoly), [&](int t) { return law_residual(t - 1); }, len);

    std::vector<double> e(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i)
        e[static_cast<std::size_t>(i)] = from_ref[static_cast<std::size_t>(i)] +
                                         from_chi[static_cast<std::size_t>(i)] +
                                         from_startup[static_cast<std::size_t>(i)];
    return e;
}

}  // namespace gpckit

#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "gpckit/laurent.hpp"

namespace gpckit {

/// CARIMA plant A(z^-1) y(k) = B(z^-1) u(k-1) + chi(k).
///
/// `a` holds the coefficients of A after its implicit leading 1; `b` holds
/// all coefficients of B including b0. The input-to-output delay d is
/// 1 + (number of leading zero entries of b).
struct CarimaModel {
    std::vector<double> a;
    std::vector<double> b;

    CarimaModel(std::vector<double> a_coeffs, std::vector<double> b_coeffs);

    int na() const { return static_cast<int>(a.size()); }
    int nb() const { return static_cast<int>(b.size()) - 1; }
    int delay() const;

    LaurentPoly a_poly() const;  // 1 + a1 z^-1 + ...
    LaurentPoly b_poly() const;  // b0 + b1 z^-1 + ...
};

/// Incremental state-space realization of the differenced plant with state
/// dx(k) = [dy(k) .. dy(k-na+1), du(k-1) .. du(k-nb-1)]^T. The trailing
/// du(k-nb-1) entry carries a zero first-row coefficient; it is kept so the
/// state splits cleanly into the na-wide output part and the (nb+1)-wide
/// input part used by the controller's feedback partition.
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    Eigen::VectorXd T;  // disturbance input column
    int na = 0;
    int nb = 0;
    int delay = 1;

    int dim() const { return na + nb + 1; }
};

StateSpace realize(const CarimaModel& model);

/// First `count` impulse-response samples h_j of z B(z^-1)/A(z^-1), via the
/// difference-equation recursion (independent of the state-space route,
/// which must reproduce them as C A^(j-1) B).
std::vector<double> markov(const CarimaModel& model, int count);

/// One step of the undifferenced plant: y(k) from the most-recent-first
/// histories (y_hist[0] = y(k-1), u_hist[0] = u(k-1)) and the disturbance
/// sample. Histories shorter than na / nb+1 are zero-extended.
double plant_step(const CarimaModel& model, std::span<const double> y_hist,
                  std::span<const double> u_hist, double chi);

/// Sampled signal starting at time `start` (everything before is zero).
struct Signal {
    std::vector<double> samples;
    int start = 1;

    double at(int t) const {
        const int i = t - start;
        if (i < 0 || i >= static_cast<int>(samples.size())) return 0.0;
        return samples[static_cast<std::size_t>(i)];
    }
    int size() const { return static_cast<int>(samples.size()); }
};

}  // namespace gpckit

#include "gpckit/carima.hpp"

#include <cmath>
#include <stdexcept>

namespace gpckit {

CarimaModel::CarimaModel(std::vector<double> a_coeffs, std::vector<double> b_coeffs)
    : a(std::move(a_coeffs)), b(std::move(b_coeffs)) {
    if (a.empty()) throw std::invalid_argument("CarimaModel: na must be >= 1");
    if (b.empty()) throw std::invalid_argument("CarimaModel: b must be nonempty");
    bool any = false;
    for (double c : b) {
        if (!std::isfinite(c)) throw std::invalid_argument("CarimaModel: non-finite b coefficient");
        if (c != 0.0) any = true;
    }
    for (double c : a)
        if (!std::isfinite(c)) throw std::invalid_argument("CarimaModel: non-finite a coefficient");
    if (!any) throw std::invalid_argument("CarimaModel: b must have a nonzero entry");
}

int CarimaModel::delay() const {
    int d = 1;
    for (double c : b) {
        if (c != 0.0) break;
        ++d;
    }
    return d;
}

LaurentPoly CarimaModel::a_poly() const {
    std::vector<double> c(a.size() + 1);
    c[0] = 1.0;
    std::copy(a.begin(), a.end(), c.begin() + 1);
    return LaurentPoly(0, std::move(c));
}

LaurentPoly CarimaModel::b_poly() const { return LaurentPoly(0, b); }

StateSpace realize(const CarimaModel& model) {
    const int na = model.na();
    const int nb = model.nb();
    const int n = na + nb + 1;
    StateSpace ss;
    ss.na = na;
    ss.nb = nb;
    ss.delay = model.delay();
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.C = Eigen::RowVectorXd::Zero(n);
    ss.T = Eigen::VectorXd::Zero(n);

    // First row: [-a1 .. -a_na, b1 .. b_nb, 0].
    for (int i = 0; i < na; ++i) ss.A(0, i) = -model.a[static_cast<std::size_t>(i)];
    for (int j = 1; j <= nb; ++j) ss.A(0, na + j - 1) = model.b[static_cast<std::size_t>(j)];
    // Shift registers for the dy and du histories.
    for (int i = 1; i < na; ++i) ss.A(i, i - 1) = 1.0;
    for (int j = 1; j <= nb; ++j) ss.A(na + j, na + j - 1) = 1.0;

    ss.B(0) = model.b[0];
    ss.B(na) = 1.0;
    ss.C(0) = 1.0;
    ss.T(0) = 1.0;
    return ss;
}

std::vector<double> markov(const CarimaModel& model, int count) {
    if (count < 1) throw std::invalid_argument("markov: count must be >= 1");
    std::vector<double> h(static_cast<std::size_t>(count), 0.0);
    for (int j = 1; j <= count; ++j) {
        double s = (j - 1 <= model.nb()) ? model.b[static_cast<std::size_t>(j - 1)] : 0.0;
        for (int i = 1; i <= model.na(); ++i)
            if (j - i >= 1) s -= model.a[static_cast<std::size_t>(i - 1)] * h[static_cast<std::size_t>(j - i - 1)];
        h[static_cast<std::size_t>(j - 1)] = s;
    }
    return h;
}

double plant_step(const CarimaModel& model, std::span<const double> y_hist,
                  std::span<const double> u_hist, double chi) {
    auto past = [](std::span<const double> hist, int back) {
        return back < static_cast<int>(hist.size()) ? hist[static_cast<std::size_t>(back)] : 0.0;
    };
    double y = chi;
    for (int i = 1; i <= model.na(); ++i) y -= model.a[static_cast<std::size_t>(i - 1)] * past(y_hist, i - 1);
    for (int j = 0; j <= model.nb(); ++j) y += model.b[static_cast<std::size_t>(j)] * past(u_hist, j);
    return y;
}

}  // namespace gpckit

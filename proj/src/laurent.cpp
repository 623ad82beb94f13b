#include "gpckit/laurent.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gpckit {

namespace {

// Trim threshold applied only at normalization, never inside arithmetic.
constexpr double kTrimEps = 1e-12;

// Modulus band around the unit circle treated as "on" it.
constexpr double kCircleEps = 1e-9;

}  // namespace

LaurentPoly::LaurentPoly(int lo_exp, std::vector<double> coeffs)
    : lo_(lo_exp), coeffs_(std::move(coeffs)) {
    normalize();
}

LaurentPoly LaurentPoly::constant(double c) { return LaurentPoly(0, {c}); }

LaurentPoly LaurentPoly::delta() { return LaurentPoly(0, {1.0, -1.0}); }

LaurentPoly LaurentPoly::shift(int m) { return LaurentPoly(m, {1.0}); }

void LaurentPoly::normalize() {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("LaurentPoly: non-finite coefficient");
    }
    std::size_t first = 0;
    while (first < coeffs_.size() && std::abs(coeffs_[first]) <= kTrimEps) ++first;
    std::size_t last = coeffs_.size();
    while (last > first && std::abs(coeffs_[last - 1]) <= kTrimEps) --last;
    if (first == last) {
        lo_ = 0;
        coeffs_.clear();
        return;
    }
    lo_ += static_cast<int>(first);
    coeffs_.erase(coeffs_.begin() + static_cast<std::ptrdiff_t>(last), coeffs_.end());
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
}

double LaurentPoly::coeff(int exp) const {
    const int i = exp - lo_;
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<std::size_t>(i)];
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
    if (rhs.is_zero()) return *this;
    if (is_zero()) return *this = rhs;
    const int lo = std::min(lo_, rhs.lo_);
    const int hi = std::max(hi_exp(), rhs.hi_exp());
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        out[static_cast<std::size_t>(lo_ - lo) + i] += coeffs_[i];
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        out[static_cast<std::size_t>(rhs.lo_ - lo) + i] += rhs.coeffs_[i];
    lo_ = lo;
    coeffs_ = std::move(out);
    normalize();
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) { return *this += -rhs; }

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (double& c : r.coeffs_) c = -c;
    return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) {
    if (is_zero() || rhs.is_zero()) return *this = zero();
    std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * rhs.coeffs_[j];
    lo_ += rhs.lo_;
    coeffs_ = std::move(out);
    normalize();
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    normalize();
    return *this;
}

std::complex<double> LaurentPoly::eval(std::complex<double> z_inv) const {
    if (is_zero()) return 0.0;
    if (lo_ < 0 && z_inv == std::complex<double>(0.0, 0.0))
        throw std::domain_error("LaurentPoly::eval: positive powers of z at z^-1 = 0");
    // Horner in z^-1, then apply the offset power.
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z_inv + *it;
    if (lo_ > 0) acc *= std::pow(z_inv, lo_);
    if (lo_ < 0) acc /= std::pow(z_inv, -lo_);
    return acc;
}

std::vector<std::complex<double>> LaurentPoly::roots_in_z() const {
    if (is_zero()) throw std::invalid_argument("roots_in_z: zero polynomial");
    const int n = span();
    if (n == 0) return {};
    // Clearing shifts turns the poly into sum_i coeffs_[i] z^(n - i): the
    // stored order is already highest-degree-first, with nonzero leading and
    // trailing entries after normalization (so no roots pinned at z = 0).
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    const double lead = coeffs_.front();
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs_[static_cast<std::size_t>(n - i)] / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

std::string LaurentPoly::str() const {
    if (is_zero()) return "0";
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const double c = coeffs_[i];
        if (c == 0.0) continue;
        const int e = lo_ + static_cast<int>(i);
        if (!out.empty()) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        std::snprintf(buf, sizeof(buf), "%.12g", std::abs(c));
        out += buf;
        if (e != 0) {
            std::snprintf(buf, sizeof(buf), "*z^%d", -e);
            out += buf;
        }
    }
    return out;
}

WSeries wseries_of(const LaurentPoly& p, int order) {
    if (order < 0) throw std::invalid_argument("wseries_of: negative order");
    WSeries s;
    s.order = order;
    s.coeffs.assign(static_cast<std::size_t>(order + 1), 0.0);
    if (p.is_zero()) return s;
    // z^-e = (1 - w)^e expanded by generalized binomials (e may be negative).
    std::vector<double> term(static_cast<std::size_t>(order + 1));
    for (int e = p.lo_exp(); e <= p.hi_exp(); ++e) {
        const double c = p.coeff(e);
        if (c == 0.0) continue;
        term[0] = 1.0;
        for (int i = 1; i <= order; ++i)
            term[static_cast<std::size_t>(i)] =
                term[static_cast<std::size_t>(i - 1)] * (-(static_cast<double>(e) - (i - 1))) / i;
        for (int i = 0; i <= order; ++i) s.coeffs[static_cast<std::size_t>(i)] += c * term[static_cast<std::size_t>(i)];
    }
    return s;
}

RationalTF::RationalTF(LaurentPoly n, LaurentPoly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::invalid_argument("RationalTF: zero denominator");
}

RationalTF RationalTF::normalized() const {
    // Shift num and den together so den.lo_exp() == 0; the ratio is unchanged.
    const int m = den.lo_exp();
    if (m == 0) return *this;
    RationalTF g = *this;
    g.num *= LaurentPoly::shift(-m);
    g.den *= LaurentPoly::shift(-m);
    return g;
}

int RationalTF::lookahead() const {
    const RationalTF g = normalized();
    if (g.num.is_zero()) return 0;
    return std::max(0, -g.num.lo_exp());
}

std::vector<double> tf_filter(const RationalTF& g, std::span<const double> x) {
    if (g.lookahead() > 0)
        throw std::invalid_argument("tf_filter: advance-aware operator needs future samples; use tf_filter_fn");
    const int n = static_cast<int>(x.size());
    return tf_filter_fn(
        g, [&x](int t) { return (t >= 1 && t <= static_cast<int>(x.size())) ? x[static_cast<std::size_t>(t - 1)] : 0.0; },
        n);
}

std::vector<double> tf_filter_fn(const RationalTF& g, const std::function<double(int)>& x, int len) {
    const RationalTF gn = g.normalized();
    const double d0 = gn.den.coeff(0);
    if (d0 == 0.0) throw std::invalid_argument("tf_filter: denominator has no constant term");
    std::vector<double> y(static_cast<std::size_t>(std::max(len, 0)), 0.0);
    for (int t = 1; t <= len; ++t) {
        double acc = 0.0;
        if (!gn.num.is_zero()) {
            for (int e = gn.num.lo_exp(); e <= gn.num.hi_exp(); ++e) {
                const double c = gn.num.coeff(e);
                if (c != 0.0) acc += c * x(t - e);
            }
        }
        for (int e = 1; e <= gn.den.hi_exp(); ++e) {
            const double c = gn.den.coeff(e);
            if (c != 0.0 && t - e >= 1) acc -= c * y[static_cast<std::size_t>(t - e - 1)];
        }
        y[static_cast<std::size_t>(t - 1)] = acc / d0;
    }
    return y;
}

FinalValue final_value_limit(const RationalTF& g, int input_power) {
    if (input_power < 0 || input_power > 3)
        throw std::invalid_argument("final_value_limit: input power must be in 0..3");
    const RationalTF gn = g.normalized();
    if (gn.num.is_zero()) return FinalValue::finite(0.0);

    // Denominator roots off z = 1 must be strictly stable for the theorem.
    for (const auto& r : gn.den.roots_in_z()) {
        if (std::abs(r - std::complex<double>(1.0, 0.0)) <= kCircleEps) continue;  // handled via w-series
        if (std::abs(r) >= 1.0 - kCircleEps)
            throw std::domain_error("final_value_limit: operator is not stable");
    }

    // Z{k^n} = N_n(w) / w^(n+1) with N_n(0) = n!.
    static const std::vector<std::vector<double>> kNumerators = {
        {1.0}, {1.0, -1.0}, {2.0, -3.0, 1.0}, {6.0, -12.0, 7.0, -1.0}};
    const auto& nn = kNumerators[static_cast<std::size_t>(input_power)];

    const int order = input_power + gn.den.span() + 4;
    const WSeries nw = wseries_of(gn.num, order);
    const WSeries dw = wseries_of(gn.den, order);

    // full = num-series times N_n(w).
    std::vector<double> full(static_cast<std::size_t>(order + 1), 0.0);
    for (std::size_t i = 0; i < nn.size(); ++i)
        for (int j = 0; j + static_cast<int>(i) <= order; ++j)
            full[i + static_cast<std::size_t>(j)] += nn[i] * nw.coeffs[static_cast<std::size_t>(j)];

    auto zero_order = [order](const std::vector<double>& c) {
        double scale = 0.0;
        for (double v : c) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) return order + 1;
        int m = 0;
        while (m <= order && std::abs(c[static_cast<std::size_t>(m)]) <= 1e-9 * scale) ++m;
        return m;
    };

    const int num_ord = zero_order(full);
    const int den_ord = zero_order(dw.coeffs);
    if (num_ord > order) return FinalValue::finite(0.0);

    // Limit of w^-n * (full / den): compare zero orders at w = 0.
    const int m = num_ord - den_ord;
    if (m > input_power) return FinalValue::finite(0.0);
    if (m < input_power) return FinalValue::infinite();
    return FinalValue::finite(full[static_cast<std::size_t>(num_ord)] / dw.coeffs[static_cast<std::size_t>(den_ord)]);
}

}  // namespace gpckit

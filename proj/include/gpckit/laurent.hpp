#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gpckit {

/// Finite Laurent polynomial in the backward-shift variable z^-1.
///
/// Stored as a dense coefficient vector with an exponent offset: coeff(i)
/// multiplies z^-(lo_exp + i). A negative lo_exp encodes positive powers of
/// z, which appear in reference-preview operators; such polynomials are
/// "advance-aware" and filtering with them needs future input samples.
/// The zero polynomial is the distinguished value with empty support.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(int lo_exp, std::vector<double> coeffs);

    static LaurentPoly zero() { return {}; }
    static LaurentPoly constant(double c);
    /// The difference operator 1 - z^-1.
    static LaurentPoly delta();
    /// z^-m (m may be negative).
    static LaurentPoly shift(int m);

    bool is_zero() const { return coeffs_.empty(); }
    int lo_exp() const { return lo_; }
    int hi_exp() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
    /// Degree span; 0 for constants and (by convention) the zero polynomial.
    int span() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Coefficient of z^-exp (0 outside the stored support).
    double coeff(int exp) const;

    LaurentPoly& operator+=(const LaurentPoly& rhs);
    LaurentPoly& operator-=(const LaurentPoly& rhs);
    LaurentPoly& operator*=(const LaurentPoly& rhs);
    LaurentPoly& operator*=(double s);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
    friend LaurentPoly operator*(LaurentPoly a, double s) { return a *= s; }
    friend LaurentPoly operator*(double s, LaurentPoly a) { return a *= s; }
    LaurentPoly operator-() const;

    /// Horner evaluation at a value of z^-1. Throws std::domain_error when
    /// positive powers of z are present and z_inv == 0.
    std::complex<double> eval(std::complex<double> z_inv) const;

    /// All roots in the z-plane of the ordinary polynomial obtained by
    /// clearing shifts (companion-matrix eigenvalues). Constants give an
    /// empty list. Throws std::invalid_argument on the zero polynomial.
    std::vector<std::complex<double>> roots_in_z() const;

    std::string str() const;

private:
    void normalize();

    int lo_ = 0;
    std::vector<double> coeffs_;  // coeff of z^-(lo_ + i); empty <=> zero poly
};

/// Truncated Taylor expansion in w = 1 - z^-1, used by the final-value
/// machinery to resolve limits at z -> 1.
struct WSeries {
    int order = 0;
    std::vector<double> coeffs;  // order + 1 entries
};

WSeries wseries_of(const LaurentPoly& p, int order);

/// Ratio of Laurent polynomials. normalized() shifts both parts by a common
/// power of z so the denominator is an ordinary polynomial in z^-1 with a
/// nonzero constant term (a causal recursion); the numerator may keep
/// negative exponents, marking the operator advance-aware.
struct RationalTF {
    LaurentPoly num;
    LaurentPoly den;

    RationalTF() : num(LaurentPoly::zero()), den(LaurentPoly::constant(1.0)) {}
    RationalTF(LaurentPoly n, LaurentPoly d);

    RationalTF normalized() const;
    /// Samples of future input the normalized numerator reaches ahead for.
    int lookahead() const;
};

/// Output of the linear recursion den*y = num*x over x[0..n), with x[t]
/// holding the sample at time t+1 and everything zero before time 1.
/// Throws std::invalid_argument if g is advance-aware (use the _fn variant).
std::vector<double> tf_filter(const RationalTF& g, std::span<const double> x);

/// Advance-aware filtering: x(t) supplies the input at any integer time t
/// (callers wrap their own zero-extension conventions). Returns outputs for
/// times 1..len.
std::vector<double> tf_filter_fn(const RationalTF& g, const std::function<double(int)>& x, int len);

/// Result of a final-value-theorem limit: either a finite value or the
/// distinguished "unbounded" outcome (uncancelled pole at z = 1).
struct FinalValue {
    double value = 0.0;
    bool unbounded = false;

    static FinalValue finite(double v) { return {v, false}; }
    static FinalValue infinite() { return {0.0, true}; }
};

/// lim_{z->1} (1 - z^-1) g(z^-1) Z{k^n} for n in 0..3, by expanding num and
/// den in w = 1 - z^-1. Requires every denominator root in the z-plane to
/// lie strictly inside the unit circle except roots at z = 1, which must
/// cancel; otherwise throws std::domain_error (limit theorem inapplicable).
FinalValue final_value_limit(const RationalTF& g, int input_power);

}  // namespace gpckit

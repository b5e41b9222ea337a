#pragma once

// Gauss hypergeometric function 2F1(alpha, beta; gamma; x) on [0, 1).
//
// Terminating parameters (alpha or beta a non-positive integer) are summed
// exactly as a finite polynomial. Otherwise the Gauss series is used for
// x <= 1/2 and the x -> 1-x connection formula above it:
//
//   2F1(a,b;c;x) = G(c)G(c-a-b)/(G(c-a)G(c-b)) 2F1(a,b;a+b-c+1;1-x)
//                + (1-x)^(c-a-b) G(c)G(a+b-c)/(G(a)G(b)) 2F1(c-a,c-b;c-a-b+1;1-x)
//
// which needs c-a-b away from the integers.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "errors.hpp"
#include "jet.hpp"
#include "polynomial.hpp"

namespace dksphere {

namespace hyp_detail {

inline constexpr double kIntegerSnap = 1e-12;

inline bool is_nonpositive_integer(double v)
{
    const double r = std::round(v);
    return r <= 0.0 && std::abs(v - r) <= kIntegerSnap * std::max(1.0, std::abs(v));
}

/// 1/Gamma(z), zero at the poles of Gamma.
inline double rgamma(double z)
{
    if (is_nonpositive_integer(z)) {
        return 0.0;
    }
    return 1.0 / std::tgamma(z);
}

inline std::string describe(double a, double b, double c)
{
    std::ostringstream os;
    os.precision(17);
    os << "(alpha=" << a << ", beta=" << b << ", gamma=" << c << ")";
    return os.str();
}

}  // namespace hyp_detail

/// Parameters of 2F1(alpha, beta; gamma; x).
class Hyp2F1Params {
public:
    Hyp2F1Params(double alpha, double beta, double gamma) : alpha_(alpha), beta_(beta), gamma_(gamma)
    {
        if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
            throw DomainError("2F1 parameters must be finite");
        }
        if (hyp_detail::is_nonpositive_integer(gamma)) {
            throw DomainError("2F1 lower parameter is a non-positive integer " +
                              hyp_detail::describe(alpha, beta, gamma));
        }
        const bool a_term = hyp_detail::is_nonpositive_integer(alpha);
        const bool b_term = hyp_detail::is_nonpositive_integer(beta);
        if (a_term || b_term) {
            const int da = a_term ? static_cast<int>(-std::round(alpha)) : std::numeric_limits<int>::max();
            const int db = b_term ? static_cast<int>(-std::round(beta)) : std::numeric_limits<int>::max();
            degree_      = std::min(da, db);
        }
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }

    bool terminating() const { return degree_ >= 0; }

    /// Polynomial degree of a terminating series, -1 otherwise.
    int degree() const { return degree_; }

    /// Parameters of the k-th derivative's hypergeometric factor.
    Hyp2F1Params shifted(int k) const { return {alpha_ + k, beta_ + k, gamma_ + k}; }

private:
    double alpha_;
    double beta_;
    double gamma_;
    int degree_ = -1;
};

namespace hyp_detail {

struct SeriesControl {
    double rel_cutoff  = 1e-16;
    int quiet_terms    = 3;
    long max_terms     = 100000;
};

/// Plain Gauss series; converges for |x| < 1.
inline double gauss_series(double a, double b, double c, double x, const SeriesControl& ctl = {})
{
    double term = 1.0;
    double sum  = 1.0;
    int quiet   = 0;
    for (long k = 0; k < ctl.max_terms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if (term == 0.0) {
            return sum;
        }
        if (std::abs(term) < ctl.rel_cutoff * std::abs(sum)) {
            if (++quiet >= ctl.quiet_terms) {
                return sum;
            }
        } else {
            quiet = 0;
        }
    }
    throw ConvergenceError("2F1 series did not converge within " + std::to_string(ctl.max_terms) + " terms " +
                           describe(a, b, c));
}

}  // namespace hyp_detail

/// Power-series coefficients of a terminating 2F1, lowest order first.
inline std::vector<double> terminating_coefficients(const Hyp2F1Params& p)
{
    if (!p.terminating()) {
        throw DomainError("2F1 series does not terminate " + hyp_detail::describe(p.alpha(), p.beta(), p.gamma()));
    }
    std::vector<double> c(static_cast<std::size_t>(p.degree()) + 1);
    c[0] = 1.0;
    for (int k = 0; k < p.degree(); ++k) {
        c[k + 1] = c[k] * (p.alpha() + k) * (p.beta() + k) / ((p.gamma() + k) * (k + 1.0));
    }
    return c;
}

inline Polynomial terminating_polynomial(const Hyp2F1Params& p) { return Polynomial(terminating_coefficients(p)); }

/// 2F1(alpha, beta; gamma; x) for x in [0, 1).
inline double gauss_2f1(const Hyp2F1Params& p, double x)
{
    if (!(x >= 0.0 && x < 1.0)) {
        throw DomainError("2F1 argument outside [0,1): x=" + std::to_string(x));
    }
    const double a = p.alpha(), b = p.beta(), c = p.gamma();
    if (p.terminating()) {
        // Horner over term ratios: 1 + r0 x (1 + r1 x (1 + ...)), in quad
        // precision because alternating terms cancel near roots and near x = 1.
        using Wide = boost::multiprecision::cpp_bin_float_quad;
        const Wide wa(a), wb(b), wc(c), wx(x);
        Wide s = 1;
        for (int k = p.degree() - 1; k >= 0; --k) {
            s = 1 + (wa + k) * (wb + k) / ((wc + k) * (k + 1)) * wx * s;
        }
        return static_cast<double>(s);
    }
    if (x <= 0.5) {
        return hyp_detail::gauss_series(a, b, c, x);
    }
    const double s     = c - a - b;
    const bool near_int = std::abs(s - std::round(s)) <= 1e-8;
    if (near_int) {
        if (x > 0.9) {
            throw DegenerateParameterError("2F1 connection formula singular: gamma-alpha-beta=" + std::to_string(s) +
                                           " is (near) an integer " + hyp_detail::describe(a, b, c));
        }
        return hyp_detail::gauss_series(a, b, c, x);
    }
    using hyp_detail::rgamma;
    const double y    = 1.0 - x;
    const double gc   = std::tgamma(c);
    const double pre1 = gc * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
    const double pre2 = gc * std::tgamma(-s) * rgamma(a) * rgamma(b);
    double value      = 0.0;
    if (pre1 != 0.0) {
        value += pre1 * hyp_detail::gauss_series(a, b, 1.0 - s, y);
    }
    if (pre2 != 0.0) {
        value += pre2 * std::pow(y, s) * hyp_detail::gauss_series(c - a, c - b, 1.0 + s, y);
    }
    return value;
}

inline constexpr int kMax2F1DerivativeOrder = kMaxJetOrder;

/// k-th derivative via d/dx 2F1(a,b;c;x) = (ab/c) 2F1(a+1,b+1;c+1;x).
inline double gauss_2f1_derivative(const Hyp2F1Params& p, double x, int order)
{
    if (order < 0 || order > kMax2F1DerivativeOrder) {
        throw std::invalid_argument("2F1 derivative order out of range: " + std::to_string(order));
    }
    double factor = 1.0;
    for (int i = 0; i < order; ++i) {
        factor *= (p.alpha() + i) * (p.beta() + i) / (p.gamma() + i);
    }
    if (factor == 0.0) {
        if (!(x >= 0.0 && x < 1.0)) {
            throw DomainError("2F1 argument outside [0,1): x=" + std::to_string(x));
        }
        return 0.0;
    }
    return factor * gauss_2f1(p.shifted(order), x);
}

/// Taylor jet of 2F1 about x0 up to `order`.
inline Jet gauss_2f1_jet(const Hyp2F1Params& p, double x0, int order)
{
    Jet j(order);
    double factorial = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) {
            factorial *= k;
        }
        j.coeff(k) = gauss_2f1_derivative(p, x0, k) / factorial;
    }
    return j;
}

}  // namespace dksphere
